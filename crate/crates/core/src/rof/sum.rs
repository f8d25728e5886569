use std::fmt;

use super::Rof;
use crate::error::{Error, Result};
use crate::mpoly::MultilinearPoly;
use crate::scalars::Field;

/// A sum of read-once formulas over `n` variables. Summands may share
/// variables with each other but each one is read-once on its own.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RopSum {
    field: Field,
    n: usize,
    summands: Vec<Rof>,
}

impl RopSum {
    pub fn new(field: Field, n: usize) -> Self {
        RopSum {
            field,
            n,
            summands: Vec::new(),
        }
    }

    /// Builds a sum, rejecting summands that are not valid ROFs over `field`
    /// or that mention variables above `n`.
    pub fn from_summands(field: Field, n: usize, summands: Vec<Rof>) -> Result<Self> {
        let mut s = RopSum::new(field, n);
        for r in summands {
            s.push(r)?;
        }
        Ok(s)
    }

    pub fn push(&mut self, rof: Rof) -> Result<()> {
        if let Some(v) = rof.validate().first() {
            return Err(Error::InvalidFormula(format!("{v:?}")));
        }
        if rof.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        let top = rof.max_var();
        if top > self.n {
            return Err(Error::IndexOutOfRange {
                index: top,
                n: self.n,
            });
        }
        self.summands.push(rof);
        Ok(())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn summands(&self) -> &[Rof] {
        &self.summands
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn into_summands(self) -> Vec<Rof> {
        self.summands
    }

    /// Exact sum of the summands' polynomials.
    pub fn sum_evaluate(&self) -> Result<MultilinearPoly> {
        self.summands
            .iter()
            .try_fold(MultilinearPoly::zero(self.n, self.field)?, |acc, r| {
                acc.add(&r.evaluate(self.n)?)
            })
    }

    /// Exact polynomial equality with `target`.
    pub fn verify_against(&self, target: &MultilinearPoly) -> Result<bool> {
        if target.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        let sum = self.sum_evaluate()?;
        Ok(sum.with_num_vars(target.n()).ok().as_ref() == Some(target))
    }

    /// Renames variables in every summand.
    pub fn map_vars(&self, map: &dyn Fn(usize) -> usize) -> RopSum {
        RopSum {
            field: self.field,
            n: self.n,
            summands: self.summands.iter().map(|r| r.map_vars(map)).collect(),
        }
    }
}

impl fmt::Display for RopSum {
    /// One formula per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.summands {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::family4;
    use crate::rof::parse_rof;

    #[test]
    fn empty_sum_is_zero() {
        let s = RopSum::new(Field::Rationals, 3);
        assert!(s.sum_evaluate().unwrap().is_zero());
    }

    #[test]
    fn two_products_give_family_member() {
        // (x1 + x3)(x2 + x4) + 2(x1 + x2)(x3 + x4) = f^{1,2,3}
        let q = Field::Rationals;
        let a = parse_rof(
            "(mul (1 0) (add (1 0) (leaf (1 0) x1) (leaf (1 0) x3)) (add (1 0) (leaf (1 0) x2) (leaf (1 0) x4)))",
            q,
        )
        .unwrap();
        let b = parse_rof(
            "(mul (2 0) (add (1 0) (leaf (1 0) x1) (leaf (1 0) x2)) (add (1 0) (leaf (1 0) x3) (leaf (1 0) x4)))",
            q,
        )
        .unwrap();
        let s = RopSum::from_summands(q, 4, vec![a, b]).unwrap();
        let f = family4(&q.from_i64(1), &q.from_i64(2), &q.from_i64(3)).unwrap();
        assert!(s.verify_against(&f).unwrap());
        let g = family4(&q.from_i64(1), &q.from_i64(2), &q.from_i64(4)).unwrap();
        assert!(!s.verify_against(&g).unwrap());
    }

    #[test]
    fn rejects_invalid_summands() {
        let q = Field::Rationals;
        let dup = parse_rof("(mul (1 0) (leaf (1 0) x1) (leaf (1 0) x1))", q).unwrap();
        assert!(RopSum::from_summands(q, 2, vec![dup]).is_err());
        let high = parse_rof("(leaf (1 0) x5)", q).unwrap();
        assert!(RopSum::from_summands(q, 2, vec![high]).is_err());
    }
}
