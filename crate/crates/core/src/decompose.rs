//! Constructive decompositions into sums of read-once polynomials. Every
//! result is checked against its target by exact re-evaluation before it is
//! returned.

use crate::error::{Error, Result};
use crate::mpoly::{elementary_symmetric, m_poly, mask_vars, MultilinearPoly};
use crate::recognize::is_rop;
use crate::rof::{Rof, RopSum};
use crate::scalars::{Field, FieldElem};

/// `c·x_S` as a formula; `S` must be nonempty.
fn monomial_rof(field: Field, mask: u32, c: &FieldElem) -> Rof {
    let vars = mask_vars(mask);
    let mut iter = vars.into_iter().map(|v| Rof::var(v, field));
    let first = iter.next().expect("nonempty monomial");
    iter.fold(first, Rof::times).relabel_root(c, &field.zero())
}

fn finish(target: &MultilinearPoly, summands: Vec<Rof>) -> Result<RopSum> {
    let sum = RopSum::from_summands(target.field(), target.n(), summands)?;
    assert!(
        sum.verify_against(target)?,
        "decomposition does not reproduce {target}"
    );
    Ok(sum)
}

fn require_variables(p: &MultilinearPoly) -> Result<()> {
    if p.n() == 0 {
        return Err(Error::TooFewVariables(0));
    }
    Ok(())
}

/// Formulas for polynomials known to be read-once. Constant pieces are
/// folded into the root of the first nonconstant one; a purely constant
/// total becomes a single leaf with zero coefficient.
fn read_once_pieces(n: usize, field: Field, pieces: &[MultilinearPoly]) -> Vec<Rof> {
    let mut constant = field.zero();
    let mut out: Vec<Rof> = Vec::new();
    for piece in pieces {
        if piece.is_constant() {
            constant = &constant + &piece.constant_term();
        } else {
            out.push(is_rop(piece).expect("piece is read-once by construction"));
        }
    }
    if !constant.is_zero() {
        match out.first_mut() {
            Some(first) => *first = first.clone().relabel_root(&field.one(), &constant),
            None if n > 0 => out.push(Rof::leaf(1, field.zero(), constant)),
            None => {}
        }
    }
    out
}

/// Pairs up monomials in mask order and writes each pair
/// `a·x_S + b·x_T` as `x_{S∩T}·(a·x_{S∖T} + b·x_{T∖S})`.
pub fn pair_monomials(p: &MultilinearPoly) -> Result<RopSum> {
    require_variables(p)?;
    let field = p.field();
    let zero = field.zero();
    let terms: Vec<(u32, FieldElem)> = p.terms().map(|(m, c)| (m, c.clone())).collect();
    let mut summands = Vec::with_capacity(terms.len().div_ceil(2));
    for chunk in terms.chunks(2) {
        let rof = match chunk {
            [(0, c)] => Rof::leaf(1, zero.clone(), c.clone()),
            [(s, a)] => monomial_rof(field, *s, a),
            [(s, a), (t, b)] => {
                let common = s & t;
                let (only_s, only_t) = (s & !t, t & !s);
                let inner = match (only_s, only_t) {
                    (0, _) => monomial_rof(field, only_t, b).relabel_root(&field.one(), a),
                    (_, 0) => monomial_rof(field, only_s, a).relabel_root(&field.one(), b),
                    _ => Rof::plus(
                        monomial_rof(field, only_s, a),
                        monomial_rof(field, only_t, b),
                    ),
                };
                if common == 0 {
                    inner
                } else {
                    Rof::times(monomial_rof(field, common, &field.one()), inner)
                }
            }
            _ => unreachable!("chunks of two"),
        };
        summands.push(rof);
    }
    finish(p, summands)
}

/// Sum of at most `3·2^{n−4}` read-once polynomials (one for `n ≤ 2`, two
/// for `n = 3`, three for `n = 4`).
///
/// For `n > 2` other than 4 the polynomial is split as `x_n·∂_n p + p|_{x_n=0}`
/// and both parts are decomposed on `n − 1` variables.
pub fn generic(p: &MultilinearPoly) -> Result<RopSum> {
    require_variables(p)?;
    let summands = generic_rofs(p)?;
    finish(p, summands)
}

fn generic_rofs(p: &MultilinearPoly) -> Result<Vec<Rof>> {
    let n = p.n();
    let field = p.field();
    match n {
        1 | 2 => Ok(read_once_pieces(n, field, std::slice::from_ref(p))),
        4 => generic_four(p),
        _ => {
            let g = p.partial(n)?.with_num_vars(n - 1)?;
            let h = p.restrict(n, &field.zero())?.with_num_vars(n - 1)?;
            let mut out: Vec<Rof> = generic_rofs(&g)?
                .into_iter()
                .map(|r| Rof::times(Rof::var(n, field), r))
                .collect();
            out.extend(generic_rofs(&h)?);
            Ok(out)
        }
    }
}

const PAIRS: [(usize, usize); 6] = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];

fn generic_four(p: &MultilinearPoly) -> Result<Vec<Rof>> {
    let field = p.field();
    let mask = |vars: &[usize]| vars.iter().fold(0u32, |m, &v| m | 1 << (v - 1));
    let a = |vars: &[usize]| p.coeff(mask(vars));
    let Some(&(i, j)) = PAIRS.iter().find(|&&(i, j)| !a(&[i, j]).is_zero()) else {
        let keep = |pred: &dyn Fn(u32) -> bool| {
            MultilinearPoly::from_terms(
                4,
                field,
                p.terms()
                    .filter(|(m, _)| pred(*m))
                    .map(|(m, c)| (m, c.clone())),
            )
        };
        let f1 = keep(&|m| m.count_ones() <= 1)?;
        let f2 = keep(&|m| m == 0b0111 || m == 0b1011)?;
        let f3 = keep(&|m| m.count_ones() >= 3 && m & 0b1100 == 0b1100)?;
        return Ok(read_once_pieces(4, field, &[f1, f2, f3]));
    };
    // Send x_i to x_1 and x_j to x_3, the other two to x_2, x_4 in order.
    let mut perm = [0usize; 4];
    perm[i - 1] = 1;
    perm[j - 1] = 3;
    let mut free = [2, 4].into_iter();
    for slot in perm.iter_mut().filter(|s| **s == 0) {
        *slot = free.next().expect("two free slots");
    }
    let moved = p.permute_vars(&perm)?;
    let inverse = move |v: usize| perm.iter().position(|&w| w == v).expect("permutation") + 1;
    Ok(nonzero_a13(&moved)?
        .iter()
        .map(|r| r.map_vars(&inverse))
        .collect())
}

fn nonzero_a13(p: &MultilinearPoly) -> Result<Vec<Rof>> {
    let field = p.field();
    let mask = |vars: &[usize]| vars.iter().fold(0u32, |m, &v| m | 1 << (v - 1));
    let a = |vars: &[usize]| p.coeff(mask(vars));
    let a13 = a(&[1, 3]);
    let over = |x: FieldElem| &x / &a13;
    let term = |vars: &[usize], c: FieldElem| (mask(vars), c);
    let f1 = MultilinearPoly::from_terms(
        4,
        field,
        p.terms()
            .filter(|(m, _)| m & 0b1100 == 0 || m & 0b0011 == 0)
            .map(|(m, c)| (m, c.clone())),
    )?;
    let left = MultilinearPoly::from_terms(
        4,
        field,
        [
            term(&[1], a13.clone()),
            term(&[2], a(&[2, 3])),
            term(&[1, 2], a(&[1, 2, 3])),
        ],
    )?;
    let right = MultilinearPoly::from_terms(
        4,
        field,
        [
            term(&[4], over(a(&[1, 4]))),
            term(&[3], field.one()),
            term(&[3, 4], over(a(&[1, 3, 4]))),
        ],
    )?;
    let f2 = left.mul_disjoint(&right)?;
    let rest = |s: &[usize], u: &[usize], v: &[usize]| &a(s) - &over(&a(u) * &a(v));
    let f3 = MultilinearPoly::from_terms(
        4,
        field,
        [
            term(&[2, 4], rest(&[2, 4], &[1, 4], &[2, 3])),
            term(&[1, 2, 4], rest(&[1, 2, 4], &[1, 4], &[1, 2, 3])),
            term(&[2, 3, 4], rest(&[2, 3, 4], &[1, 3, 4], &[2, 3])),
            term(&[1, 2, 3, 4], rest(&[1, 2, 3, 4], &[1, 3, 4], &[1, 2, 3])),
        ],
    )?;
    Ok(read_once_pieces(4, field, &[f1, f2, f3]))
}

/// `α·S_n^n + β·S_n^{n−1}` as a sum of `⌈n/2⌉` read-once polynomials
/// (fewer only when summands vanish, i.e. `β = 0`).
///
/// Odd `n` pairs monomials. For `n = 2k`, with `P_i = ∏_{m ∉ {2i−1, 2i}} x_m`,
/// the summands are `β·(x_{2i−1} + x_{2i})·P_i` for `i < k` and
/// `(β·x_{2k−1} + β·x_{2k} + α·x_{2k−1}x_{2k})·P_k`.
pub fn symmetric_halves(n: usize, alpha: &FieldElem, beta: &FieldElem) -> Result<RopSum> {
    let target = m_poly(n, alpha, beta)?;
    if n % 2 == 1 {
        return pair_monomials(&target);
    }
    let field = alpha.field();
    let zero = field.zero();
    let all = (1u32 << n) - 1;
    let k = n / 2;
    let mut summands = Vec::with_capacity(k);
    for i in 1..=k {
        let (x, y) = (2 * i - 1, 2 * i);
        let pair = if i < k || alpha.is_zero() {
            if beta.is_zero() {
                continue;
            }
            Rof::plus(Rof::var(x, field), Rof::var(y, field)).relabel_root(beta, &zero)
        } else {
            let bivariate = MultilinearPoly::from_terms(
                n,
                field,
                [
                    (1 << (x - 1), beta.clone()),
                    (1 << (y - 1), beta.clone()),
                    ((1 << (x - 1)) | (1 << (y - 1)), alpha.clone()),
                ],
            )?;
            is_rop(&bivariate).expect("bivariate polynomials are read-once")
        };
        let others = all & !((1 << (x - 1)) | (1 << (y - 1)));
        summands.push(if others == 0 {
            pair
        } else {
            Rof::times(pair, monomial_rof(field, others, &field.one()))
        });
    }
    finish(&target, summands)
}

/// `Σ a_i·S_4^i` as a sum of at most two read-once polynomials, by cases on
/// `a_2`, `a_3` and `a_2·a_4 − a_3²`. The additive constant each case leaves
/// open is taken as the constant-term residual.
pub fn sympoly4(coeffs: &[FieldElem; 5]) -> Result<RopSum> {
    let field = coeffs[0].field();
    if coeffs.iter().any(|c| c.field() != field) {
        return Err(Error::FieldMismatch);
    }
    let mut target = MultilinearPoly::zero(4, field)?;
    for (k, c) in coeffs.iter().enumerate() {
        target = target.add(&elementary_symmetric(4, k, field)?.scale(c)?)?;
    }
    let [_, a1, a2, a3, a4] = coeffs;
    let poly =
        |terms: &[(u32, FieldElem)]| MultilinearPoly::from_terms(4, field, terms.iter().cloned());
    let x12 = 0b0011u32;
    let x34 = 0b1100u32;

    let mut pieces: Vec<MultilinearPoly> = if a2.is_zero() && a3.is_zero() {
        vec![
            poly(&[
                (1, a1.clone()),
                (2, a1.clone()),
                (4, a1.clone()),
                (8, a1.clone()),
            ])?,
            poly(&[(0b1111, a4.clone())])?,
        ]
    } else if a2.is_zero() {
        // (a1 + a3·x1x2)(x3 + x4 + (a4/a3)·x3x4) + (a1 + a3·x3x4)(x1 + x2 − a1a4/a3²)
        let first = poly(&[(0, a1.clone()), (x12, a3.clone())])?.mul_disjoint(&poly(&[
            (4, field.one()),
            (8, field.one()),
            (x34, a4 / a3),
        ])?)?;
        let second = poly(&[(0, a1.clone()), (x34, a3.clone())])?.mul_disjoint(&poly(&[
            (1, field.one()),
            (2, field.one()),
            (0, -(&(a1 * a4) / &(a3 * a3))),
        ])?)?;
        vec![first, second]
    } else {
        // a2·g = P·Q + remainder with P, Q the two halves below.
        let half = |lo: u32, hi: u32| {
            poly(&[
                (0, a1.clone()),
                (lo, a2.clone()),
                (hi, a2.clone()),
                (lo | hi, a3.clone()),
            ])
        };
        let pq = half(1, 2)?
            .mul_disjoint(&half(4, 8)?)?
            .scale(&a2.inverse()?)?;
        let e = &(a2 * a2) - &(a1 * a3);
        let det = &(a2 * a4) - &(a3 * a3);
        let second = if det.is_zero() {
            poly(&[(x12, e.clone()), (x34, e)])?
        } else {
            let k = &e / &det;
            poly(&[(x12, field.one()), (0, k)])?.mul_disjoint(&poly(&[(x34, det), (0, e)])?)?
        }
        .scale(&a2.inverse()?)?;
        vec![pq, second]
    };
    let mut residual = target.clone();
    for p in &pieces {
        residual = residual.sub(p)?;
    }
    assert!(
        residual.is_constant(),
        "table case leaves a nonconstant residual"
    );
    pieces.push(residual);
    let summands = read_once_pieces(4, field, &pieces);
    finish(&target, summands)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> FieldElem {
        Field::Rationals.from_i64(v)
    }

    fn poly(n: usize, terms: &[(u32, i64)]) -> MultilinearPoly {
        MultilinearPoly::from_terms(n, Field::Rationals, terms.iter().map(|&(m, c)| (m, q(c))))
            .unwrap()
    }

    #[test]
    fn disjoint_pair_is_one_plus_gate() {
        let p = poly(4, &[(0b1001, 2), (0b0110, 3)]);
        let s = pair_monomials(&p).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(
            s.summands()[0].to_string(),
            "(add (1 0) (mul (3 0) (leaf (1 0) x2) (leaf (1 0) x3)) (mul (2 0) (leaf (1 0) x1) (leaf (1 0) x4)))"
        );
    }

    #[test]
    fn overlapping_pair_factors_out_common_part() {
        let p = poly(4, &[(0b0111, 1), (0b1110, 1)]);
        let s = pair_monomials(&p).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(
            s.summands()[0].to_string(),
            "(mul (1 0) (mul (1 0) (leaf (1 0) x2) (leaf (1 0) x3)) (add (1 0) (leaf (1 0) x1) (leaf (1 0) x4)))"
        );
    }

    #[test]
    fn s54_pairs_into_three() {
        let s = elementary_symmetric(5, 4, Field::Rationals).unwrap();
        assert_eq!(pair_monomials(&s).unwrap().len(), 3);
    }

    #[test]
    fn constant_pairs_with_a_monomial() {
        let p = poly(2, &[(0, 5), (0b11, 2), (0b01, 1)]);
        assert_eq!(pair_monomials(&p).unwrap().len(), 2);
    }

    #[test]
    fn bivariate_is_one_summand() {
        let p = poly(2, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        assert_eq!(generic(&p).unwrap().len(), 1);
    }

    #[test]
    fn four_variables_without_quadratic_terms() {
        let p = poly(4, &[(0, 1), (1, 1), (0b0111, 1), (0b1101, 2), (0b1111, 3)]);
        assert!(generic(&p).unwrap().len() <= 3);
    }

    #[test]
    fn four_variables_with_moved_quadratic_term() {
        // First quadratic term is x2x4, which is moved onto x1x3.
        let p = poly(
            4,
            &[
                (0b1010, 2),
                (0b1100, 1),
                (0b0111, 1),
                (0b1111, 5),
                (0b1011, 3),
            ],
        );
        assert!(generic(&p).unwrap().len() <= 3);
        let full = MultilinearPoly::from_terms(
            4,
            Field::Rationals,
            (0..16u32).map(|m| (m, q(m as i64 + 1))),
        )
        .unwrap();
        assert!(generic(&full).unwrap().len() <= 3);
    }

    #[test]
    fn six_variables_within_twelve() {
        let p = MultilinearPoly::from_terms(
            6,
            Field::Rationals,
            (0..64u32).map(|m| (m, q(m as i64 % 7 - 3))),
        )
        .unwrap();
        assert!(generic(&p).unwrap().len() <= 12);
    }

    #[test]
    fn zero_polynomial_has_no_summands() {
        assert!(generic(&poly(5, &[])).unwrap().is_empty());
        assert!(pair_monomials(&poly(3, &[])).unwrap().is_empty());
    }

    #[test]
    fn halves_for_s43() {
        let s = symmetric_halves(4, &q(0), &q(1)).unwrap();
        let text: Vec<String> = s.summands().iter().map(|r| r.to_string()).collect();
        assert_eq!(
            text,
            vec![
                "(mul (1 0) (add (1 0) (leaf (1 0) x1) (leaf (1 0) x2)) (mul (1 0) (leaf (1 0) x3) (leaf (1 0) x4)))",
                "(mul (1 0) (add (1 0) (leaf (1 0) x3) (leaf (1 0) x4)) (mul (1 0) (leaf (1 0) x1) (leaf (1 0) x2)))",
            ]
        );
    }

    #[test]
    fn halves_counts() {
        assert_eq!(symmetric_halves(5, &q(0), &q(1)).unwrap().len(), 3);
        assert_eq!(symmetric_halves(2, &q(3), &q(1)).unwrap().len(), 1);
        assert_eq!(symmetric_halves(6, &q(3), &q(-2)).unwrap().len(), 3);
        assert_eq!(symmetric_halves(1, &q(3), &q(-2)).unwrap().len(), 1);
    }

    #[test]
    fn sympoly_table_rows() {
        for a in [
            [5, 2, 0, 0, 7],
            [0, 1, 0, 1, 0],
            [1, 1, 1, 1, 1],
            [1, 2, 3, 4, 5],
            [0, 0, 0, 0, 0],
        ] {
            let s = sympoly4(&a.map(q)).unwrap();
            assert!(s.len() <= 2, "{a:?}");
        }
    }

    #[test]
    fn sympoly_row_two_has_no_constant() {
        let s = sympoly4(&[0, 1, 0, 1, 0].map(q)).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.summands().iter().all(|r| r.beta().is_zero()));
    }

    #[test]
    fn sympoly_over_prime_fields() {
        for p in [2, 3, 5] {
            let f = Field::prime(p).unwrap();
            for a2 in 0..p as i64 {
                for a3 in 0..p as i64 {
                    for a4 in 0..p as i64 {
                        let a = [1, 1, a2, a3, a4].map(|v| f.from_i64(v));
                        assert!(sympoly4(&a).unwrap().len() <= 2);
                    }
                }
            }
        }
    }
}
