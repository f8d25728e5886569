//! Multilinear polynomials keyed by variable subsets.
//!
//! A monomial `x_S = ∏_{i∈S} x_i` is stored under the bitmask of `S`
//! (bit `i-1` for `x_i`). Only nonzero coefficients are stored, so equality
//! of [`MultilinearPoly`] values is exact polynomial equality.

mod families;
mod linalg;
mod sparse;

use std::collections::BTreeMap;
use std::fmt;

pub use families::{elementary_symmetric, family4, m_poly};
pub use linalg::linear_dependent;
pub use sparse::SparsePoly;

use crate::error::{Error, Result};
use crate::scalars::{Field, FieldElem};

/// Largest variable count accepted by [`MultilinearPoly`].
pub const MAX_VARS: usize = 30;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultilinearPoly {
    n: usize,
    field: Field,
    coeffs: BTreeMap<u32, FieldElem>,
}

pub(crate) fn bit(i: usize) -> u32 {
    1u32 << (i - 1)
}

/// Variable indices (1-based) present in `mask`, ascending.
pub fn mask_vars(mask: u32) -> Vec<usize> {
    (0..32)
        .filter(|b| mask >> b & 1 == 1)
        .map(|b| b + 1)
        .collect()
}

impl MultilinearPoly {
    pub fn zero(n: usize, field: Field) -> Result<Self> {
        if n > MAX_VARS {
            return Err(Error::TooManyVariables(n));
        }
        Ok(MultilinearPoly {
            n,
            field,
            coeffs: BTreeMap::new(),
        })
    }

    pub fn constant(n: usize, c: FieldElem) -> Result<Self> {
        let field = c.field();
        Self::from_terms(n, field, [(0, c)])
    }

    /// The polynomial `x_i`.
    pub fn var(n: usize, field: Field, i: usize) -> Result<Self> {
        let mut p = Self::zero(n, field)?;
        let b = p.check_index(i)?;
        p.coeffs.insert(b, field.one());
        Ok(p)
    }

    pub fn monomial(n: usize, mask: u32, c: FieldElem) -> Result<Self> {
        let field = c.field();
        Self::from_terms(n, field, [(mask, c)])
    }

    /// Builds a polynomial from `(mask, coefficient)` pairs; repeated masks are
    /// summed and zeros dropped.
    pub fn from_terms<I>(n: usize, field: Field, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, FieldElem)>,
    {
        let mut p = Self::zero(n, field)?;
        for (mask, c) in terms {
            if !field.contains(&c) {
                return Err(Error::FieldMismatch);
            }
            if n < 32 && mask >> n != 0 {
                let top = 32 - mask.leading_zeros() as usize;
                return Err(Error::IndexOutOfRange { index: top, n });
            }
            p.add_term(mask, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, mask: u32, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&mask) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.coeffs.remove(&mask);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.coeffs.insert(mask, c);
            }
        }
    }

    pub(crate) fn check_index(&self, i: usize) -> Result<u32> {
        if i == 0 || i > self.n {
            return Err(Error::IndexOutOfRange {
                index: i,
                n: self.n,
            });
        }
        Ok(bit(i))
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

    fn check_scalar(&self, c: &FieldElem) -> Result<()> {
        if self.field.contains(c) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Coefficient of the monomial `x_mask` (zero when absent).
    pub fn coeff(&self, mask: u32) -> FieldElem {
        self.coeffs
            .get(&mask)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// Nonzero terms in ascending mask order (constant first).
    pub fn terms(&self) -> impl Iterator<Item = (u32, &FieldElem)> + '_ {
        self.coeffs.iter().map(|(m, c)| (*m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.keys().all(|&m| m == 0)
    }

    /// The constant term.
    pub fn constant_term(&self) -> FieldElem {
        self.coeff(0)
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs
            .keys()
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Bitmask of `Var(p)`.
    pub fn var_mask(&self) -> u32 {
        self.coeffs.keys().fold(0, |acc, m| acc | m)
    }

    /// `Var(p)` as ascending 1-based indices.
    pub fn vars(&self) -> Vec<usize> {
        mask_vars(self.var_mask())
    }

    /// Reinterprets the polynomial over `m` variables; fails if some variable
    /// in `Var(p)` has index above `m`.
    pub fn with_num_vars(&self, m: usize) -> Result<Self> {
        if m > MAX_VARS {
            return Err(Error::TooManyVariables(m));
        }
        let vm = self.var_mask();
        if m < 32 && vm >> m != 0 {
            let top = 32 - vm.leading_zeros() as usize;
            return Err(Error::IndexOutOfRange { index: top, n: m });
        }
        Ok(MultilinearPoly {
            n: m,
            field: self.field,
            coeffs: self.coeffs.clone(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (&m, c) in &other.coeffs {
            out.add_term(m, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        MultilinearPoly {
            n: self.n,
            field: self.field,
            coeffs: self.coeffs.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    pub fn scale(&self, c: &FieldElem) -> Result<Self> {
        self.check_scalar(c)?;
        if c.is_zero() {
            return Self::zero(self.n, self.field);
        }
        Ok(MultilinearPoly {
            n: self.n,
            field: self.field,
            coeffs: self.coeffs.iter().map(|(m, a)| (*m, a * c)).collect(),
        })
    }

    /// `p + c` for a field constant `c`.
    pub fn add_constant(&self, c: &FieldElem) -> Result<Self> {
        self.check_scalar(c)?;
        let mut out = self.clone();
        out.add_term(0, c.clone());
        Ok(out)
    }

    /// `α·p + β`, the affine relabeling every ROF node applies.
    pub fn affine(&self, alpha: &FieldElem, beta: &FieldElem) -> Result<Self> {
        self.scale(alpha)?.add_constant(beta)
    }

    /// Product of two polynomials on disjoint variable sets. The result is
    /// again multilinear.
    pub fn mul_disjoint(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        if self.var_mask() & other.var_mask() != 0 {
            return Err(Error::SharedVariables);
        }
        let mut out = Self::zero(self.n, self.field)?;
        for (&m1, c1) in &self.coeffs {
            for (&m2, c2) in &other.coeffs {
                out.add_term(m1 | m2, c1 * c2);
            }
        }
        Ok(out)
    }

    /// Unrestricted product; may leave the multilinear world.
    pub fn mul_general(&self, other: &Self) -> Result<SparsePoly> {
        self.check_compatible(other)?;
        let a = SparsePoly::from_multilinear(self);
        let b = SparsePoly::from_multilinear(other);
        a.mul(&b)
    }

    /// `p|_{x_i = v}`. The variable count is unchanged; `x_i` no longer occurs.
    pub fn restrict(&self, i: usize, v: &FieldElem) -> Result<Self> {
        let b = self.check_index(i)?;
        self.check_scalar(v)?;
        let mut out = Self::zero(self.n, self.field)?;
        for (&m, c) in &self.coeffs {
            if m & b != 0 {
                out.add_term(m & !b, c * v);
            } else {
                out.add_term(m, c.clone());
            }
        }
        Ok(out)
    }

    /// Restricts several variables at once.
    pub fn restrict_many(&self, assignment: &[(usize, FieldElem)]) -> Result<Self> {
        assignment
            .iter()
            .try_fold(self.clone(), |p, (i, v)| p.restrict(*i, v))
    }

    /// Discrete partial derivative `p|_{x_i=1} - p|_{x_i=0}`.
    pub fn partial(&self, i: usize) -> Result<Self> {
        let b = self.check_index(i)?;
        let mut out = Self::zero(self.n, self.field)?;
        for (&m, c) in &self.coeffs {
            if m & b != 0 {
                out.add_term(m & !b, c.clone());
            }
        }
        Ok(out)
    }

    /// The commutator `p|00·p|11 − p|01·p|10` over the four 0/1 settings of
    /// `(x_i, x_j)`.
    pub fn commutator(&self, i: usize, j: usize) -> Result<SparsePoly> {
        self.check_index(i)?;
        self.check_index(j)?;
        if i == j {
            return Err(Error::EqualIndices);
        }
        let zero = self.field.zero();
        let one = self.field.one();
        let at = |a: &FieldElem, b: &FieldElem| self.restrict(i, a)?.restrict(j, b);
        let p00 = at(&zero, &zero)?;
        let p11 = at(&one, &one)?;
        let p01 = at(&zero, &one)?;
        let p10 = at(&one, &zero)?;
        p00.mul_general(&p11)?.sub(&p01.mul_general(&p10)?)
    }

    /// Evaluates at a full point `(x_1, ..., x_n)`.
    pub fn evaluate(&self, point: &[FieldElem]) -> Result<FieldElem> {
        if point.len() != self.n {
            return Err(Error::ArityMismatch(self.n, point.len()));
        }
        for v in point {
            self.check_scalar(v)?;
        }
        let mut acc = self.field.zero();
        for (&m, c) in &self.coeffs {
            let mut t = c.clone();
            for i in mask_vars(m) {
                t = &t * &point[i - 1];
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Renames variables: `x_i` becomes `x_{perm[i-1]}`. `perm` must be a
    /// permutation of `1..=n`.
    pub fn permute_vars(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.n)?;
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&m, c)| {
                let image = mask_vars(m)
                    .into_iter()
                    .fold(0u32, |acc, i| acc | bit(perm[i - 1]));
                (image, c.clone())
            })
            .collect();
        Ok(MultilinearPoly {
            n: self.n,
            field: self.field,
            coeffs,
        })
    }

    /// Assignment of the remaining variables in `vars` (values 0 or 1) under
    /// which the polynomial stays nonzero. Chosen greedily, preferring 0.
    /// `None` only for the zero polynomial.
    pub fn nonvanishing_assignment(&self, vars: &[usize]) -> Option<Vec<(usize, FieldElem)>> {
        if self.is_zero() {
            return None;
        }
        let mut current = self.clone();
        let mut out = Vec::with_capacity(vars.len());
        for &i in vars {
            let zero = self.field.zero();
            let restricted = current.restrict(i, &zero).ok()?;
            if !restricted.is_zero() {
                current = restricted;
                out.push((i, zero));
            } else {
                let one = self.field.one();
                current = current.restrict(i, &one).ok()?;
                out.push((i, one));
            }
        }
        Some(out)
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::ArityMismatch(n, perm.len()));
    }
    let mut seen = vec![false; n + 1];
    for &v in perm {
        if v == 0 || v > n || seen[v] {
            return Err(Error::PreconditionViolated(format!(
                "{perm:?} is not a permutation of 1..={n}"
            )));
        }
        seen[v] = true;
    }
    Ok(())
}

/// Writes one term `c*x_a*x_b` (sign handled by the caller).
pub(crate) fn write_term(
    f: &mut fmt::Formatter<'_>,
    magnitude: &FieldElem,
    factors: &[String],
) -> fmt::Result {
    if factors.is_empty() {
        return write!(f, "{magnitude}");
    }
    if !magnitude.is_one() {
        write!(f, "{magnitude}*")?;
    }
    write!(f, "{}", factors.join("*"))
}

/// Shared printing for both polynomial kinds: ascending monomial order,
/// `" + "` / `" - "` separators, unit coefficients omitted.
pub(crate) fn write_terms<'a, I>(f: &mut fmt::Formatter<'_>, terms: I) -> fmt::Result
where
    I: IntoIterator<Item = (&'a FieldElem, Vec<String>)>,
{
    let mut first = true;
    for (c, factors) in terms {
        let (negative, magnitude) = if c.is_negative() {
            (true, -c)
        } else {
            (false, c.clone())
        };
        match (first, negative) {
            (true, true) => write!(f, "-")?,
            (true, false) => {}
            (false, true) => write!(f, " - ")?,
            (false, false) => write!(f, " + ")?,
        }
        write_term(f, &magnitude, &factors)?;
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for MultilinearPoly {
    /// Canonical PolyText, e.g. `1 + 2*x1 - 3/2*x1*x2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(
            f,
            self.coeffs.iter().map(|(&m, c)| {
                (
                    c,
                    mask_vars(m).into_iter().map(|i| format!("x{i}")).collect(),
                )
            }),
        )
    }
}
