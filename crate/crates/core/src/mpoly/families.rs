//! The named polynomials: `S_n^k`, `M_n^{α,β}` and the four-variable family
//! `f^{α,β,γ}`.

use super::{MultilinearPoly, MAX_VARS};
use crate::error::{Error, Result};
use crate::scalars::{Field, FieldElem};

/// Masks of all `k`-subsets of `[n]` in ascending order (Gosper's hack).
fn k_subsets(n: usize, k: usize) -> Vec<u32> {
    if k == 0 {
        return vec![0];
    }
    let limit = 1u64 << n;
    let mut out = Vec::new();
    let mut m: u64 = (1 << k) - 1;
    while m < limit {
        out.push(m as u32);
        let c = m & m.wrapping_neg();
        let r = m + c;
        m = (((r ^ m) >> 2) / c) | r;
    }
    out
}

/// Elementary symmetric polynomial `S_n^k`.
pub fn elementary_symmetric(n: usize, k: usize, field: Field) -> Result<MultilinearPoly> {
    if n > MAX_VARS {
        return Err(Error::TooManyVariables(n));
    }
    if k > n {
        return Err(Error::IndexOutOfRange { index: k, n });
    }
    MultilinearPoly::from_terms(
        n,
        field,
        k_subsets(n, k).into_iter().map(|m| (m, field.one())),
    )
}

/// `M_n^{α,β} = α·S_n^n + β·S_n^{n-1}`.
pub fn m_poly(n: usize, alpha: &FieldElem, beta: &FieldElem) -> Result<MultilinearPoly> {
    if n == 0 {
        return Err(Error::TooFewVariables(0));
    }
    let field = alpha.field();
    if !field.contains(beta) {
        return Err(Error::FieldMismatch);
    }
    elementary_symmetric(n, n, field)?
        .scale(alpha)?
        .add(&elementary_symmetric(n, n - 1, field)?.scale(beta)?)
}

/// `f^{α,β,γ} = α(x1x2 + x3x4) + β(x1x3 + x2x4) + γ(x1x4 + x2x3)`.
pub fn family4(alpha: &FieldElem, beta: &FieldElem, gamma: &FieldElem) -> Result<MultilinearPoly> {
    let field = alpha.field();
    if !field.contains(beta) || !field.contains(gamma) {
        return Err(Error::FieldMismatch);
    }
    MultilinearPoly::from_terms(
        4,
        field,
        [
            (0b0011, alpha.clone()),
            (0b1100, alpha.clone()),
            (0b0101, beta.clone()),
            (0b1010, beta.clone()),
            (0b1001, gamma.clone()),
            (0b0110, gamma.clone()),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> FieldElem {
        Field::Rationals.from_i64(v)
    }

    #[test]
    fn s42_has_six_unit_monomials() {
        let s = elementary_symmetric(4, 2, Field::Rationals).unwrap();
        assert_eq!(s.num_terms(), 6);
        assert!(s.terms().all(|(m, c)| m.count_ones() == 2 && c.is_one()));
    }

    #[test]
    fn m_poly_with_zero_alpha_is_s32() {
        let m = m_poly(3, &q(0), &q(1)).unwrap();
        assert_eq!(m, elementary_symmetric(3, 2, Field::Rationals).unwrap());
        assert_eq!(m.to_string(), "x1*x2 + x1*x3 + x2*x3");
    }

    #[test]
    fn family_coefficients() {
        let f = family4(&q(2), &q(4), &q(5)).unwrap();
        assert_eq!(f.coeff(0b1001), q(5));
        assert_eq!(f.coeff(0b0011), q(2));
        assert_eq!(f.coeff(0b1010), q(4));
        assert_eq!(f.num_terms(), 6);
    }

    #[test]
    fn out_of_range_degree() {
        assert!(elementary_symmetric(3, 4, Field::Rationals).is_err());
        assert_eq!(
            elementary_symmetric(3, 0, Field::Rationals)
                .unwrap()
                .to_string(),
            "1"
        );
    }

    #[test]
    fn subset_counts() {
        assert_eq!(k_subsets(10, 3).len(), 120);
        assert_eq!(k_subsets(5, 5), vec![0b11111]);
    }
}
