//! Decision procedures: read-once recognition, variable-disjoint
//! factorization, the structure tests for sums of two ROPs on four
//! variables, and the closed-form decision for the `f^{α,β,γ}` family.

mod family;
mod structure;

use std::collections::BTreeSet;

pub use family::{
    family4_decide, family_delta_roots, sum2_refute, Branch, RootParams, Sum2Decision,
};
pub use structure::{check_c1prime, check_c2prime, C1Witness, C2Witness};

use crate::error::{Error, Result};
use crate::mpoly::{MultilinearPoly, SparsePoly};
use crate::rof::{GateOp, Rof};

/// Undirected graph on `Var(p)` with an edge `{i, j}` whenever
/// `∂_i∂_j p ≠ 0`, i.e. some monomial contains both variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InteractionGraph {
    pub vertices: Vec<usize>,
    pub edges: BTreeSet<(usize, usize)>,
}

impl InteractionGraph {
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i.min(j), i.max(j)))
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        components(&self.vertices, |i, j| self.has_edge(i, j))
    }

    pub fn is_complete(&self) -> bool {
        let k = self.vertices.len();
        self.edges.len() == k * k.saturating_sub(1) / 2
    }
}

fn components(vertices: &[usize], linked: impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &start in vertices {
        if !seen.insert(start) {
            continue;
        }
        let mut comp = vec![start];
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &w in vertices {
                if !seen.contains(&w) && linked(v, w) {
                    seen.insert(w);
                    comp.push(w);
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

pub fn interaction_graph(p: &MultilinearPoly) -> InteractionGraph {
    let vertices = p.vars();
    let mut edges = BTreeSet::new();
    // ∂_i∂_j p ≠ 0 exactly when some monomial contains both variables.
    let masks: Vec<u32> = p.terms().map(|(m, _)| m).collect();
    for (a, &i) in vertices.iter().enumerate() {
        for &j in &vertices[a + 1..] {
            let both = (1u32 << (i - 1)) | (1u32 << (j - 1));
            if masks.iter().any(|m| m & both == both) {
                edges.insert((i, j));
            }
        }
    }
    InteractionGraph { vertices, edges }
}

/// True when `p·∂_i∂_j p = ∂_i p·∂_j p`, equivalently when `p` factors as
/// `g·h` with `x_i` only in `g` and `x_j` only in `h`.
pub fn separable(p: &MultilinearPoly, i: usize, j: usize) -> Result<bool> {
    let di = p.partial(i)?;
    let dj = p.partial(j)?;
    let dij = di.partial(j)?;
    Ok(p.mul_general(&dij)? == di.mul_general(&dj)?)
}

/// Splits a nonconstant polynomial into pairwise variable-disjoint factors
/// whose product is `p`, as finely as possible.
///
/// Two variables end up in the same factor exactly when they are linked by
/// a chain of non-separable pairs. Each factor is extracted by restricting
/// the other variables to a point where the cofactor does not vanish.
/// Returns [`Error::PreconditionViolated`] for constants; a single-element
/// result means `p` admits no nontrivial split.
pub fn disjoint_factorization(p: &MultilinearPoly) -> Result<Vec<MultilinearPoly>> {
    if p.is_constant() {
        return Err(Error::PreconditionViolated(
            "factorization needs a nonconstant polynomial".into(),
        ));
    }
    let vars = p.vars();
    let mut linked = BTreeSet::new();
    for (a, &i) in vars.iter().enumerate() {
        for &j in &vars[a + 1..] {
            if !separable(p, i, j)? {
                linked.insert((i, j));
            }
        }
    }
    let groups = components(&vars, |i, j| linked.contains(&(i.min(j), i.max(j))));
    if groups.len() == 1 {
        return Ok(vec![p.clone()]);
    }
    let mut factors = Vec::with_capacity(groups.len());
    let mut rest = p.clone();
    for group in &groups[..groups.len() - 1] {
        let others: Vec<usize> = rest
            .vars()
            .into_iter()
            .filter(|v| !group.contains(v))
            .collect();
        let (g, h) = split_off(&rest, group, &others)?;
        factors.push(g);
        rest = h;
    }
    factors.push(rest);
    let product = factors[1..]
        .iter()
        .try_fold(factors[0].clone(), |acc, f| acc.mul_disjoint(f))?;
    assert_eq!(
        &product, p,
        "disjoint factorization does not reproduce its input"
    );
    Ok(factors)
}

/// Writes `p = g·h` with `Var(g) ⊆ group` and `Var(h) ⊆ others`, given that
/// such a split exists.
fn split_off(
    p: &MultilinearPoly,
    group: &[usize],
    others: &[usize],
) -> Result<(MultilinearPoly, MultilinearPoly)> {
    let at_others = p
        .nonvanishing_assignment(others)
        .ok_or_else(|| Error::PreconditionViolated("zero polynomial".into()))?;
    let g = p.restrict_many(&at_others)?;
    let at_group = g
        .nonvanishing_assignment(group)
        .expect("g is nonzero by construction");
    let g_value = g.restrict_many(&at_group)?.constant_term();
    let h = p.restrict_many(&at_group)?.scale(&g_value.inverse()?)?;
    Ok((g, h))
}

/// Decides whether `p` is a read-once polynomial over its field and, if so,
/// returns a formula computing it.
///
/// * `|Var(p)| ≤ 1`: a single leaf (constants use `x_1` with `α = 0`).
/// * Disconnected interaction graph: `p` is a constant plus one polynomial
///   per component; all of them must be ROPs and are joined by `+` gates.
/// * Connected: the root must be a `×` gate, `p = α·L·R + β`. For an edge
///   `(i, j)` across the split, `(p − β)·∂_i∂_j p = ∂_i p·∂_j p`, which
///   pins down `β`. Each edge is tried; `p − β` must then split into
///   variable-disjoint factors that are ROPs themselves.
///
/// Returns `None` for `n = 0`, where no leaf can be formed.
pub fn is_rop(p: &MultilinearPoly) -> Option<Rof> {
    if p.n() == 0 {
        return None;
    }
    let witness = rop_witness(p).expect("arithmetic on a single field cannot fail")?;
    debug_assert_eq!(witness.evaluate(p.n()).ok().as_ref(), Some(p));
    Some(witness)
}

fn rop_witness(p: &MultilinearPoly) -> Result<Option<Rof>> {
    let field = p.field();
    let vars = p.vars();
    match vars.len() {
        0 => return Ok(Some(Rof::leaf(1, field.zero(), p.constant_term()))),
        1 => {
            let i = vars[0];
            return Ok(Some(Rof::leaf(i, p.coeff(1 << (i - 1)), p.constant_term())));
        }
        _ => {}
    }
    let graph = interaction_graph(p);
    let comps = graph.components();
    if comps.len() > 1 {
        let constant = p.constant_term();
        let mut parts = Vec::with_capacity(comps.len());
        for comp in &comps {
            let cmask = comp.iter().fold(0u32, |acc, &v| acc | 1 << (v - 1));
            let piece = MultilinearPoly::from_terms(
                p.n(),
                field,
                p.terms()
                    .filter(|(m, _)| *m != 0 && m & !cmask == 0)
                    .map(|(m, c)| (m, c.clone())),
            )?;
            match rop_witness(&piece)? {
                Some(w) => parts.push(w),
                None => return Ok(None),
            }
        }
        let mut iter = parts.into_iter();
        let first = iter.next().expect("at least two components");
        let tree = iter.fold(first, Rof::plus);
        return Ok(Some(tree.relabel_root(&field.one(), &constant)));
    }

    for &(i, j) in &graph.edges {
        let Some(shift) = multiplicative_shift(p, i, j)? else {
            continue;
        };
        let core = p.add_constant(&-&shift)?;
        let factors = disjoint_factorization(&core)?;
        if factors.len() < 2 {
            continue;
        }
        let mut witnesses = Vec::with_capacity(factors.len());
        for f in &factors {
            match rop_witness(f)? {
                Some(w) => witnesses.push(w),
                None => return Ok(None),
            }
        }
        let mut iter = witnesses.into_iter();
        let first = iter.next().expect("at least two factors");
        let tree = iter.fold(first, Rof::times);
        return Ok(Some(tree.relabel_root(&field.one(), &shift)));
    }
    Ok(None)
}

/// The constant `β` with `(p − β)·∂_i∂_j p = ∂_i p·∂_j p`, if one exists.
///
/// `β` is read off at a point where `∂_i∂_j p` does not vanish and then the
/// identity is checked exactly, so a non-constant or inexact quotient is
/// rejected.
fn multiplicative_shift(
    p: &MultilinearPoly,
    i: usize,
    j: usize,
) -> Result<Option<crate::scalars::FieldElem>> {
    let di = p.partial(i)?;
    let dj = p.partial(j)?;
    let dij = di.partial(j)?;
    let vars = p.vars();
    let Some(point) = dij.nonvanishing_assignment(&vars) else {
        return Ok(None);
    };
    let value = |q: &MultilinearPoly| q.restrict_many(&point).map(|r| r.constant_term());
    let shift = &value(p)? - &(&(&value(&di)? * &value(&dj)?) / &value(&dij)?);
    let lhs: SparsePoly = p.add_constant(&-&shift)?.mul_general(&dij)?;
    let rhs = di.mul_general(&dj)?;
    Ok((lhs == rhs).then_some(shift))
}

/// Root operation of a formula, if it has one.
pub fn root_op(rof: &Rof) -> Option<GateOp> {
    match rof {
        Rof::Leaf { .. } => None,
        Rof::Gate { op, .. } => Some(*op),
    }
}
