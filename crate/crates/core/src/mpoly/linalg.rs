use std::collections::BTreeSet;

use super::MultilinearPoly;
use crate::error::{Error, Result};
use crate::scalars::FieldElem;

/// Searches for a nontrivial linear relation `Σ c_i·polys[i] = 0`.
///
/// Runs exact Gaussian elimination on the coefficient matrix whose rows are
/// monomials (ascending mask order) and whose columns are the inputs. Returns
/// the relation read off the first free column, or `None` when the inputs are
/// linearly independent.
pub fn linear_dependent(polys: &[MultilinearPoly]) -> Result<Option<Vec<FieldElem>>> {
    let Some(first) = polys.first() else {
        return Ok(None);
    };
    let field = first.field();
    for p in polys {
        if p.field() != field {
            return Err(Error::FieldMismatch);
        }
        if p.n() != first.n() {
            return Err(Error::ArityMismatch(first.n(), p.n()));
        }
    }
    let monomials: BTreeSet<u32> = polys
        .iter()
        .flat_map(|p| p.terms().map(|(m, _)| m))
        .collect();
    let k = polys.len();
    let mut rows: Vec<Vec<FieldElem>> = monomials
        .iter()
        .map(|&m| polys.iter().map(|p| p.coeff(m)).collect())
        .collect();

    // Reduced row echelon form.
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..k {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = rows[r][col].inverse()?;
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let factor = rows[i][col].clone();
                let pivot_row = rows[r].clone();
                for (x, p) in rows[i].iter_mut().zip(&pivot_row) {
                    *x = &*x - &(&factor * p);
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    let Some(free) = (0..k).find(|c| !pivots.contains(c)) else {
        return Ok(None);
    };
    let mut relation = vec![field.zero(); k];
    relation[free] = field.one();
    for (row, &pc) in pivots.iter().enumerate() {
        relation[pc] = -&rows[row][free];
    }
    Ok(Some(relation))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::family4;
    use crate::scalars::Field;

    fn q(v: i64) -> FieldElem {
        Field::Rationals.from_i64(v)
    }

    fn check_relation(polys: &[MultilinearPoly], rel: &[FieldElem]) {
        assert!(rel.iter().any(|c| !c.is_zero()));
        let mut acc = MultilinearPoly::zero(polys[0].n(), polys[0].field()).unwrap();
        for (p, c) in polys.iter().zip(rel) {
            acc = acc.add(&p.scale(c).unwrap()).unwrap();
        }
        assert!(acc.is_zero());
    }

    #[test]
    fn duplicate_is_dependent() {
        let p = family4(&q(1), &q(2), &q(3)).unwrap();
        let rel = linear_dependent(&[p.clone(), p.clone()]).unwrap().unwrap();
        assert_eq!(rel, vec![q(-1), q(1)]);
        check_relation(&[p.clone(), p], &rel);
    }

    #[test]
    fn one_and_x1_are_independent() {
        let one = MultilinearPoly::constant(2, q(1)).unwrap();
        let x1 = MultilinearPoly::var(2, Field::Rationals, 1).unwrap();
        assert_eq!(linear_dependent(&[one, x1]).unwrap(), None);
    }

    #[test]
    fn equal_beta_gamma_forces_dependence() {
        let f = family4(&q(1), &q(2), &q(2)).unwrap();
        let polys = vec![
            MultilinearPoly::var(4, Field::Rationals, 1).unwrap(),
            MultilinearPoly::var(4, Field::Rationals, 2).unwrap(),
            f.partial(1).unwrap(),
            f.partial(2).unwrap(),
            MultilinearPoly::constant(4, q(1)).unwrap(),
        ];
        let rel = linear_dependent(&polys).unwrap().unwrap();
        check_relation(&polys, &rel);
    }

    #[test]
    fn zero_polynomial_is_dependent() {
        let z = MultilinearPoly::zero(2, Field::Rationals).unwrap();
        assert_eq!(linear_dependent(&[z]).unwrap(), Some(vec![q(1)]));
    }
}
