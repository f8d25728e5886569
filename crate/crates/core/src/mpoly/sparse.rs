use std::collections::BTreeMap;
use std::fmt;

use super::{mask_vars, write_terms, MultilinearPoly};
use crate::error::{Error, Result};
use crate::scalars::{Field, FieldElem};

/// Individual-degree bound for [`SparsePoly`].
pub const MAX_EXPONENT: u8 = 4;

/// A general polynomial of small individual degree, keyed by exponent
/// vectors. Keys are compared lexicographically with `x_1` most significant,
/// which is a monomial order; the last key is the leading monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparsePoly {
    n: usize,
    field: Field,
    coeffs: BTreeMap<Vec<u8>, FieldElem>,
}

impl SparsePoly {
    pub fn zero(n: usize, field: Field) -> Self {
        SparsePoly {
            n,
            field,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_multilinear(p: &MultilinearPoly) -> Self {
        let mut out = Self::zero(p.n(), p.field());
        for (m, c) in p.terms() {
            let mut e = vec![0u8; p.n()];
            for i in mask_vars(m) {
                e[i - 1] = 1;
            }
            out.coeffs.insert(e, c.clone());
        }
        out
    }

    /// Builds from `(exponents, coefficient)` pairs.
    pub fn from_terms<I>(n: usize, field: Field, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u8>, FieldElem)>,
    {
        let mut out = Self::zero(n, field);
        for (e, c) in terms {
            if e.len() != n {
                return Err(Error::ArityMismatch(n, e.len()));
            }
            if e.iter().any(|&d| d > MAX_EXPONENT) {
                return Err(Error::ExponentOverflow);
            }
            if !field.contains(&c) {
                return Err(Error::FieldMismatch);
            }
            out.add_term(e, c);
        }
        Ok(out)
    }

    fn add_term(&mut self, e: Vec<u8>, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&e) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.coeffs.remove(&e);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.coeffs.insert(e, c);
            }
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.n != other.n {
            return Err(Error::ArityMismatch(self.n, other.n));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exponents: &[u8]) -> FieldElem {
        self.coeffs
            .get(exponents)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u8], &FieldElem)> + '_ {
        self.coeffs.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Converts back when every individual degree is at most one.
    pub fn to_multilinear(&self) -> Option<MultilinearPoly> {
        let mut terms = Vec::with_capacity(self.coeffs.len());
        for (e, c) in &self.coeffs {
            let mut mask = 0u32;
            for (i, &d) in e.iter().enumerate() {
                match d {
                    0 => {}
                    1 => mask |= 1 << i,
                    _ => return None,
                }
            }
            terms.push((mask, c.clone()));
        }
        MultilinearPoly::from_terms(self.n, self.field, terms).ok()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (e, c) in &other.coeffs {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        SparsePoly {
            n: self.n,
            field: self.field,
            coeffs: self.coeffs.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &FieldElem) -> Result<Self> {
        if !self.field.contains(c) {
            return Err(Error::FieldMismatch);
        }
        let mut out = Self::zero(self.n, self.field);
        for (e, a) in &self.coeffs {
            out.add_term(e.clone(), a * c);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.n, self.field);
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &other.coeffs {
                let e: Vec<u8> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                if e.iter().any(|&d| d > MAX_EXPONENT) {
                    return Err(Error::ExponentOverflow);
                }
                out.add_term(e, c1 * c2);
            }
        }
        Ok(out)
    }

    /// Leading term under the lexicographic order.
    fn leading(&self) -> Option<(&Vec<u8>, &FieldElem)> {
        self.coeffs.iter().next_back()
    }

    /// Exact division: `Some(q)` with `self = q · divisor`, or `None` when the
    /// divisor does not divide `self`.
    pub fn div_exact(&self, divisor: &Self) -> Result<Option<Self>> {
        self.check_compatible(divisor)?;
        let (lead_e, lead_c) = match divisor.leading() {
            Some((e, c)) => (e.clone(), c.clone()),
            None => return Err(Error::DivisionByZero),
        };
        let mut rem = self.clone();
        let mut quotient = Self::zero(self.n, self.field);
        while let Some((e, c)) = rem.leading() {
            if e.iter().zip(&lead_e).any(|(a, b)| a < b) {
                return Ok(None);
            }
            let qe: Vec<u8> = e.iter().zip(&lead_e).map(|(a, b)| a - b).collect();
            let qc = c / &lead_c;
            let term = Self::from_terms(self.n, self.field, [(qe.clone(), qc.clone())])?;
            rem = rem.sub(&term.mul(divisor)?)?;
            quotient.add_term(qe, qc);
        }
        Ok(Some(quotient))
    }
}

impl fmt::Display for SparsePoly {
    /// PolyText extended with `^k` powers, e.g. `x3*x4 + x3^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(
            f,
            self.coeffs.iter().map(|(e, c)| {
                let factors = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &d)| d > 0)
                    .map(|(i, &d)| {
                        if d == 1 {
                            format!("x{}", i + 1)
                        } else {
                            format!("x{}^{}", i + 1, d)
                        }
                    })
                    .collect();
                (c, factors)
            }),
        )
    }
}
