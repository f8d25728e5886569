use serde_json::{json, Value};

use super::structure::{check_c1prime, check_c2prime};
use crate::error::{Error, Result};
use crate::mpoly::{family4, MultilinearPoly};
use crate::rof::{Rof, RopSum};
use crate::scalars::{Field, FieldElem};

/// Which defining condition of the hard family fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// Some parameter is zero.
    C1False,
    /// Two parameters have equal squares.
    C2False,
    /// Some `d_i` is a square.
    C3False,
}

impl Branch {
    pub fn label(self) -> &'static str {
        match self {
            Branch::C1False => "C1-false",
            Branch::C2False => "C2-false",
            Branch::C3False => "C3-false",
        }
    }
}

/// Internal constants of the square-discriminant construction, computed for
/// the parameters after normalization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootParams {
    pub tau: FieldElem,
    pub delta: FieldElem,
    pub mu: FieldElem,
    /// Transposition of variables applied before the construction, if any.
    pub transposition: Option<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sum2Decision {
    Expressible {
        witness: RopSum,
        branch: Branch,
        params: Option<RootParams>,
    },
    /// None of `d_1, d_2, d_3` has a square root in the field.
    NotExpressible {
        d: [FieldElem; 3],
    },
    Inconclusive {
        reason: String,
    },
}

impl Sum2Decision {
    pub fn is_expressible(&self) -> bool {
        matches!(self, Sum2Decision::Expressible { .. })
    }

    pub fn is_not_expressible(&self) -> bool {
        matches!(self, Sum2Decision::NotExpressible { .. })
    }

    /// JSON certificate. Scalars are exact strings, formulas are
    /// S-expressions.
    pub fn to_json(&self) -> Value {
        match self {
            Sum2Decision::Expressible {
                witness,
                branch,
                params,
            } => {
                let mut v = json!({
                    "outcome": "expressible",
                    "branch": branch.label(),
                    "witness": witness.summands().iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                });
                if let Some(p) = params {
                    v["tau"] = json!(p.tau.to_string());
                    v["delta"] = json!(p.delta.to_string());
                    v["mu"] = json!(p.mu.to_string());
                }
                v
            }
            Sum2Decision::NotExpressible { d } => json!({
                "outcome": "not_expressible",
                "d": d.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            }),
            Sum2Decision::Inconclusive { reason } => json!({
                "outcome": "inconclusive",
                "reason": reason,
            }),
        }
    }
}

fn same_field(alpha: &FieldElem, beta: &FieldElem, gamma: &FieldElem) -> Result<Field> {
    let field = alpha.field();
    if beta.field() != field || gamma.field() != field {
        return Err(Error::FieldMismatch);
    }
    if field.characteristic() == 2 {
        return Err(Error::CharacteristicTwo);
    }
    Ok(field)
}

fn sq(x: &FieldElem) -> FieldElem {
    x * x
}

/// `d_1 = (α² − β² − γ²)² − (2βγ)²`, and `d_2`, `d_3` by moving the
/// positive sign to `β²` and `γ²` respectively.
pub fn discriminants(alpha: &FieldElem, beta: &FieldElem, gamma: &FieldElem) -> [FieldElem; 3] {
    let two = alpha.field().from_i64(2);
    let (a2, b2, c2) = (sq(alpha), sq(beta), sq(gamma));
    let d = |lead: &FieldElem, o1: &FieldElem, o2: &FieldElem, p: &FieldElem, q: &FieldElem| {
        &sq(&(&(lead - o1) - o2)) - &sq(&(&(&two * p) * q))
    };
    [
        d(&a2, &b2, &c2, beta, gamma),
        d(&b2, &a2, &c2, alpha, gamma),
        d(&c2, &a2, &b2, alpha, beta),
    ]
}

/// Roots `δ` of `−βγ·δ² + (α² − β² − γ²)·δ − βγ = 0`, i.e.
/// `δ = (α² − β² − γ² ± τ)/(2βγ)` with `τ² = d_1`. The `+τ` root comes
/// first; a double root is listed once.
pub fn family_delta_roots(
    alpha: &FieldElem,
    beta: &FieldElem,
    gamma: &FieldElem,
) -> Result<Vec<FieldElem>> {
    let field = same_field(alpha, beta, gamma)?;
    if beta.is_zero() || gamma.is_zero() {
        return Err(Error::PreconditionViolated("βγ ≠ 0".into()));
    }
    let [d1, _, _] = discriminants(alpha, beta, gamma);
    let Some(tau) = d1.sqrt() else {
        return Ok(Vec::new());
    };
    let lead = &(&sq(alpha) - &sq(beta)) - &sq(gamma);
    let denom = &(&field.from_i64(2) * beta) * gamma;
    let plus = &(&lead + &tau) / &denom;
    let minus = &(&lead - &tau) / &denom;
    Ok(if plus == minus {
        vec![plus]
    } else {
        vec![plus, minus]
    })
}

fn leaf(var: usize, alpha: FieldElem) -> Rof {
    let zero = alpha.field().zero();
    Rof::leaf(var, alpha, zero)
}

/// `c·(x_a x_b + x_c x_d)` as a single formula.
fn pair_sum(c: &FieldElem, a: usize, b: usize, cc: usize, d: usize) -> Rof {
    let f = c.field();
    Rof::plus(
        Rof::times(Rof::var(a, f), Rof::var(b, f)),
        Rof::times(Rof::var(cc, f), Rof::var(d, f)),
    )
    .relabel_root(c, &f.zero())
}

/// `c·(x_a + s·x_b)(x_c + t·x_d)`.
fn product_of_sums(
    c: &FieldElem,
    a: usize,
    s: &FieldElem,
    b: usize,
    cc: usize,
    t: &FieldElem,
    d: usize,
) -> Rof {
    let f = c.field();
    Rof::times(
        Rof::plus(Rof::var(a, f), leaf(b, s.clone())),
        Rof::plus(Rof::var(cc, f), leaf(d, t.clone())),
    )
    .relabel_root(c, &f.zero())
}

fn swap(t: Option<(usize, usize)>) -> impl Fn(usize) -> usize {
    move |v| match t {
        Some((a, b)) if v == a => b,
        Some((a, b)) if v == b => a,
        _ => v,
    }
}

/// Parameters of `f^{α,β,γ}∘σ` for the transposition `σ`.
fn permuted(
    t: Option<(usize, usize)>,
    alpha: &FieldElem,
    beta: &FieldElem,
    gamma: &FieldElem,
) -> (FieldElem, FieldElem, FieldElem) {
    let (a, b, c) = (alpha.clone(), beta.clone(), gamma.clone());
    match t {
        None => (a, b, c),
        Some((2, 3)) => (b, a, c),
        Some((3, 4)) => (a, c, b),
        Some((2, 4)) => (c, b, a),
        Some(other) => unreachable!("unused transposition {other:?}"),
    }
}

/// Decides whether `f^{α,β,γ}` is a sum of two read-once polynomials.
///
/// It is not iff `αβγ ≠ 0`, the squares `α², β², γ²` are pairwise distinct
/// and none of `d_1, d_2, d_3` is a square. Otherwise an explicit two-formula
/// witness is built for the failing condition, after a variable
/// transposition that brings the parameters into the normalized case; the
/// witness is relabeled back and checked against the input.
pub fn family4_decide(
    alpha: &FieldElem,
    beta: &FieldElem,
    gamma: &FieldElem,
) -> Result<Sum2Decision> {
    let field = same_field(alpha, beta, gamma)?;
    let target = family4(alpha, beta, gamma)?;
    let one = field.one();

    if alpha.is_zero() || beta.is_zero() || gamma.is_zero() {
        let mut summands = Vec::new();
        for (c, a, b, cc, d) in [(alpha, 1, 2, 3, 4), (beta, 1, 3, 2, 4), (gamma, 1, 4, 2, 3)] {
            if !c.is_zero() {
                summands.push(pair_sum(c, a, b, cc, d));
            }
        }
        return finish(&target, summands, Branch::C1False, None);
    }

    let (a2, b2, c2) = (sq(alpha), sq(beta), sq(gamma));
    let c2_transposition = if a2 == b2 {
        Some(None)
    } else if b2 == c2 {
        Some(Some((2, 4)))
    } else if c2 == a2 {
        Some(Some((3, 4)))
    } else {
        None
    };
    if let Some(t) = c2_transposition {
        // α² = β² after normalization: α(x1 + s·x4)(x2 + s·x3) + γ(x1x4 + x2x3)
        // with s = β/α = ±1.
        let (a, b, c) = permuted(t, alpha, beta, gamma);
        let s = &b / &a;
        let summands = [
            product_of_sums(&a, 1, &s, 4, 2, &s, 3),
            pair_sum(&c, 1, 4, 2, 3),
        ];
        let map = swap(t);
        let summands = summands.iter().map(|r| r.map_vars(&map)).collect();
        return finish(&target, summands, Branch::C2False, None);
    }

    let d = discriminants(alpha, beta, gamma);
    let c3_transposition = [None, Some((2, 3)), Some((2, 4))]
        .into_iter()
        .zip(&d)
        .find(|(_, di)| di.sqrt().is_some())
        .map(|(t, _)| t);
    if let Some(t) = c3_transposition {
        let (a, b, c) = permuted(t, alpha, beta, gamma);
        let [d1, _, _] = discriminants(&a, &b, &c);
        let tau = d1.sqrt().expect("square by choice of transposition");
        let lead = &(&sq(&a) - &sq(&b)) - &sq(&c);
        let delta = &(&lead + &tau) / &(&(&field.from_i64(2) * &b) * &c);
        let mu = -(&(&c + &(&b * &delta)) / &a);
        // α(x1 − μx3)(x2 − x4/μ) + β(x1 − δx2)(x3 − x4/δ)
        let summands = [
            product_of_sums(&a, 1, &-&mu, 3, 2, &-&(&one / &mu), 4),
            product_of_sums(&b, 1, &-&delta, 2, 3, &-&(&one / &delta), 4),
        ];
        let map = swap(t);
        let summands = summands.iter().map(|r| r.map_vars(&map)).collect();
        let params = RootParams {
            tau,
            delta,
            mu,
            transposition: t,
        };
        return finish(&target, summands, Branch::C3False, Some(params));
    }

    assert!(d.iter().all(|di| di.sqrt().is_none()));
    Ok(Sum2Decision::NotExpressible { d })
}

fn finish(
    target: &MultilinearPoly,
    summands: Vec<Rof>,
    branch: Branch,
    params: Option<RootParams>,
) -> Result<Sum2Decision> {
    let witness = RopSum::from_summands(target.field(), 4, summands)?;
    assert!(
        witness.verify_against(target)?,
        "{} witness does not reproduce {target}",
        branch.label()
    );
    Ok(Sum2Decision::Expressible {
        witness,
        branch,
        params,
    })
}

/// Parameters `(α, β, γ)` when `g` is exactly `f^{α,β,γ}`.
pub fn match_family(g: &MultilinearPoly) -> Option<(FieldElem, FieldElem, FieldElem)> {
    if g.n() != 4 {
        return None;
    }
    if g.terms().any(|(m, _)| m.count_ones() != 2) {
        return None;
    }
    let pair = |a: u32, b: u32| {
        let (x, y) = (g.coeff(a), g.coeff(b));
        (x == y).then_some(x)
    };
    Some((
        pair(0b0011, 0b1100)?,
        pair(0b0101, 0b1010)?,
        pair(0b1001, 0b0110)?,
    ))
}

/// Sum-of-two-ROPs refutation attempt for a 4-variate polynomial.
///
/// Members of the `f^{α,β,γ}` family (outside characteristic 2) get the
/// complete answer of [`family4_decide`]. Anything else is reported
/// inconclusive, with the reason recording whether one of the first two
/// structural conditions holds.
pub fn sum2_refute(g: &MultilinearPoly) -> Result<Sum2Decision> {
    if g.n() != 4 {
        return Err(Error::WrongArity {
            expected: 4,
            got: g.n(),
        });
    }
    if g.field().characteristic() != 2 {
        if let Some((a, b, c)) = match_family(g) {
            return family4_decide(&a, &b, &c);
        }
    }
    let reason = if let Some(w) = check_c1prime(g)? {
        format!(
            "C1' holds (x{} = {}, x{} = {} linearizes); possibly expressible",
            w.i, w.a, w.j, w.b
        )
    } else if let Some(w) = check_c2prime(g)? {
        format!(
            "C2' holds (x{}, x{}, their partials and 1 are dependent); possibly expressible",
            w.i, w.j
        )
    } else {
        "C1' and C2' fail; the general C3' decision is outside the certified scope".to_string()
    };
    Ok(Sum2Decision::Inconclusive { reason })
}
