//! Read-once formulas in normal form.
//!
//! Every node carries an affine label `(α, β)`. A leaf on `x_i` computes
//! `α·x_i + β`; a gate computes `α·(left ⋆ right) + β` with `⋆ ∈ {+, ×}`.
//! Each variable labels at most one leaf.

mod structure;
mod sum;
mod text;

use std::collections::BTreeSet;

pub use structure::{
    is_multiplicative_semantic, mrops_witness, prune, three_var_linearizing_restriction, Pruned,
};
pub use sum::RopSum;
pub use text::parse_rof;

use crate::error::{Error, Result};
use crate::mpoly::MultilinearPoly;
use crate::scalars::{Field, FieldElem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateOp {
    Plus,
    Times,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rof {
    Leaf {
        var: usize,
        alpha: FieldElem,
        beta: FieldElem,
    },
    Gate {
        op: GateOp,
        alpha: FieldElem,
        beta: FieldElem,
        left: Box<Rof>,
        right: Box<Rof>,
    },
}

/// A reason a tree is not a valid read-once formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    DuplicateVariable(usize),
    ZeroVariableIndex,
    FieldMismatch,
}

impl Rof {
    pub fn leaf(var: usize, alpha: FieldElem, beta: FieldElem) -> Rof {
        Rof::Leaf { var, alpha, beta }
    }

    /// `x_i` with the identity label `(1, 0)`.
    pub fn var(var: usize, field: Field) -> Rof {
        Rof::leaf(var, field.one(), field.zero())
    }

    pub fn gate(op: GateOp, alpha: FieldElem, beta: FieldElem, left: Rof, right: Rof) -> Rof {
        Rof::Gate {
            op,
            alpha,
            beta,
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    /// `left + right` with the identity label.
    pub fn plus(left: Rof, right: Rof) -> Rof {
        let field = left.field();
        Rof::gate(GateOp::Plus, field.one(), field.zero(), left, right)
    }

    /// `left × right` with the identity label.
    pub fn times(left: Rof, right: Rof) -> Rof {
        let field = left.field();
        Rof::gate(GateOp::Times, field.one(), field.zero(), left, right)
    }

    pub fn alpha(&self) -> &FieldElem {
        match self {
            Rof::Leaf { alpha, .. } | Rof::Gate { alpha, .. } => alpha,
        }
    }

    pub fn beta(&self) -> &FieldElem {
        match self {
            Rof::Leaf { beta, .. } | Rof::Gate { beta, .. } => beta,
        }
    }

    /// The same tree with the root label replaced by `(a·α + 0, a·β + b)`,
    /// i.e. computing `a·f + b` where `f` is what the tree computed before.
    pub fn relabel_root(mut self, a: &FieldElem, b: &FieldElem) -> Rof {
        match &mut self {
            Rof::Leaf { alpha, beta, .. } | Rof::Gate { alpha, beta, .. } => {
                *alpha = &*alpha * a;
                *beta = &(&*beta * a) + b;
            }
        }
        self
    }

    /// Field of the root label.
    pub fn field(&self) -> Field {
        self.alpha().field()
    }

    /// Leaf variables in left-to-right order (with repeats if the tree is
    /// not read-once).
    pub fn leaf_vars(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            Rof::Leaf { var, .. } => out.push(*var),
            Rof::Gate { left, right, .. } => {
                left.collect_leaves(out);
                right.collect_leaves(out);
            }
        }
    }

    /// Distinct leaf variables, ascending.
    pub fn vars(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.leaf_vars().into_iter().collect();
        set.into_iter().collect()
    }

    pub fn max_var(&self) -> usize {
        self.leaf_vars().into_iter().max().unwrap_or(0)
    }

    pub fn num_leaves(&self) -> usize {
        match self {
            Rof::Leaf { .. } => 1,
            Rof::Gate { left, right, .. } => left.num_leaves() + right.num_leaves(),
        }
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        let mut reported = BTreeSet::new();
        for v in self.leaf_vars() {
            if v == 0 {
                if !out.contains(&Violation::ZeroVariableIndex) {
                    out.push(Violation::ZeroVariableIndex);
                }
            } else if !seen.insert(v) && reported.insert(v) {
                out.push(Violation::DuplicateVariable(v));
            }
        }
        let field = self.field();
        if !self.scalars().iter().all(|s| field.contains(s)) {
            out.push(Violation::FieldMismatch);
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    fn scalars(&self) -> Vec<&FieldElem> {
        let mut out = Vec::new();
        self.collect_scalars(&mut out);
        out
    }

    fn collect_scalars<'a>(&'a self, out: &mut Vec<&'a FieldElem>) {
        match self {
            Rof::Leaf { alpha, beta, .. } => {
                out.push(alpha);
                out.push(beta);
            }
            Rof::Gate {
                alpha,
                beta,
                left,
                right,
                ..
            } => {
                out.push(alpha);
                out.push(beta);
                left.collect_scalars(out);
                right.collect_scalars(out);
            }
        }
    }

    /// The polynomial computed by the formula, over `n` variables.
    pub fn evaluate(&self, n: usize) -> Result<MultilinearPoly> {
        let field = self.field();
        match self {
            Rof::Leaf { var, alpha, beta } => {
                MultilinearPoly::var(n, field, *var)?.affine(alpha, beta)
            }
            Rof::Gate {
                op,
                alpha,
                beta,
                left,
                right,
            } => {
                let l = left.evaluate(n)?;
                let r = right.evaluate(n)?;
                if l.field() != field || r.field() != field {
                    return Err(Error::FieldMismatch);
                }
                // Read-once is a property of the tree, not of the computed
                // polynomials, which can lose variables through zero labels.
                let lv: BTreeSet<usize> = left.leaf_vars().into_iter().collect();
                if right.leaf_vars().iter().any(|v| lv.contains(v)) {
                    return Err(Error::SharedVariables);
                }
                let combined = match op {
                    GateOp::Plus => l.add(&r)?,
                    GateOp::Times => l.mul_disjoint(&r)?,
                };
                combined.affine(alpha, beta)
            }
        }
    }

    /// Renames leaf variables through `map`.
    pub fn map_vars(&self, map: &dyn Fn(usize) -> usize) -> Rof {
        match self {
            Rof::Leaf { var, alpha, beta } => Rof::leaf(map(*var), alpha.clone(), beta.clone()),
            Rof::Gate {
                op,
                alpha,
                beta,
                left,
                right,
            } => Rof::gate(
                *op,
                alpha.clone(),
                beta.clone(),
                left.map_vars(map),
                right.map_vars(map),
            ),
        }
    }

    /// True when no addition gate occurs.
    pub fn is_multiplicative_structural(&self) -> bool {
        match self {
            Rof::Leaf { .. } => true,
            Rof::Gate {
                op, left, right, ..
            } => {
                *op == GateOp::Times
                    && left.is_multiplicative_structural()
                    && right.is_multiplicative_structural()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> FieldElem {
        Field::Rationals.from_i64(v)
    }

    #[test]
    fn leaf_computes_affine_form() {
        let p = Rof::leaf(1, q(2), q(3)).evaluate(1).unwrap();
        assert_eq!(p.to_string(), "3 + 2*x1");
        assert!(Rof::leaf(1, q(2), q(3)).validate().is_empty());
    }

    #[test]
    fn times_gate_multiplies() {
        let f = Rof::times(Rof::var(1, Field::Rationals), Rof::var(2, Field::Rationals));
        assert_eq!(f.evaluate(2).unwrap().to_string(), "x1*x2");
    }

    #[test]
    fn duplicate_leaf_is_reported_once() {
        let x1 = Rof::var(1, Field::Rationals);
        let f = Rof::plus(x1.clone(), Rof::times(x1.clone(), x1));
        assert_eq!(f.validate(), vec![Violation::DuplicateVariable(1)]);
        assert_eq!(f.evaluate(1), Err(Error::SharedVariables));
    }

    #[test]
    fn mixed_fields_are_reported() {
        let f7 = Field::prime(7).unwrap();
        let f = Rof::plus(Rof::var(1, Field::Rationals), Rof::var(2, f7));
        assert_eq!(f.validate(), vec![Violation::FieldMismatch]);
    }

    #[test]
    fn zero_index_is_reported() {
        assert_eq!(
            Rof::var(0, Field::Rationals).validate(),
            vec![Violation::ZeroVariableIndex]
        );
    }

    #[test]
    fn structural_multiplicativity() {
        let x = |i| Rof::var(i, Field::Rationals);
        assert!(x(1).is_multiplicative_structural());
        assert!(Rof::times(Rof::times(x(1), x(2)), x(3)).is_multiplicative_structural());
        assert!(!Rof::times(Rof::plus(x(1), x(2)), x(3)).is_multiplicative_structural());
    }

    #[test]
    fn upper_bound_summand_for_s43() {
        // (x3 + x4)·x1·x2
        let x = |i| Rof::var(i, Field::Rationals);
        let f = Rof::times(Rof::plus(x(3), x(4)), Rof::times(x(1), x(2)));
        let expected =
            MultilinearPoly::from_terms(4, Field::Rationals, [(0b0111, q(1)), (0b1011, q(1))])
                .unwrap();
        assert_eq!(f.evaluate(4).unwrap(), expected);
    }

    #[test]
    fn relabel_root_is_affine() {
        let f = Rof::leaf(1, q(2), q(3)).relabel_root(&q(5), &q(1));
        assert_eq!(f.evaluate(1).unwrap().to_string(), "16 + 10*x1");
    }
}
