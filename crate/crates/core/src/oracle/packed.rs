use crate::error::{Error, Result};
use crate::mpoly::MultilinearPoly;
use crate::scalars::Field;

/// Largest table length handled by the oracle (`2^5`).
pub(crate) const MAX_LEN: usize = 32;

/// Digit table indexed by monomial mask (coefficient form) or by point of
/// `{0,1}^n` (value form).
pub(crate) type Digits = [u8; MAX_LEN];

/// A multilinear polynomial over `F_p` on `n` variables, encoded as the
/// base-`p` number whose digit at position `mask` is the coefficient of
/// `x_mask`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PackedPoly {
    pub p: u64,
    pub n: usize,
    pub code: u64,
}

/// Parameters the exhaustive enumeration accepts.
pub fn feasible(p: u64, n: usize) -> bool {
    matches!((p, n), (2, 0..=5) | (3, 0..=4) | (5, 0..=3))
}

/// Encoding and decoding between [`MultilinearPoly`], digit tables and
/// packed integers for fixed `(p, n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Packer {
    p: u64,
    n: usize,
    len: usize,
    field: Field,
}

impl Packer {
    pub fn new(p: u64, n: usize) -> Result<Self> {
        if !feasible(p, n) {
            return Err(Error::InfeasibleParameters { p, n });
        }
        Ok(Packer {
            p,
            n,
            len: 1 << n,
            field: Field::prime(p)?,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub(crate) fn len(&self) -> usize {
        self.len
    }

    /// `p^(2^n)`, one past the largest code.
    pub fn code_limit(&self) -> u64 {
        self.p.pow(self.len as u32)
    }

    pub(crate) fn encode(&self, d: &Digits) -> u64 {
        if self.p == 2 {
            return (0..self.len).fold(0, |acc, i| acc | (d[i] as u64) << i);
        }
        d[..self.len]
            .iter()
            .rev()
            .fold(0, |acc, &x| acc * self.p + x as u64)
    }

    pub(crate) fn decode(&self, mut code: u64) -> Digits {
        let mut d = [0u8; MAX_LEN];
        for x in d.iter_mut().take(self.len) {
            *x = (code % self.p) as u8;
            code /= self.p;
        }
        d
    }

    pub fn pack(&self, poly: &MultilinearPoly) -> Result<PackedPoly> {
        if poly.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        if poly.n() != self.n {
            return Err(Error::ArityMismatch(self.n, poly.n()));
        }
        let mut d = [0u8; MAX_LEN];
        for (m, c) in poly.terms() {
            d[m as usize] = c.as_residue().expect("prime field") as u8;
        }
        Ok(self.wrap(self.encode(&d)))
    }

    pub fn unpack(&self, packed: PackedPoly) -> Result<MultilinearPoly> {
        self.check(packed)?;
        let d = self.decode(packed.code);
        MultilinearPoly::from_terms(
            self.n,
            self.field,
            (0..self.len).map(|m| (m as u32, self.field.from_u64(d[m] as u64))),
        )
    }

    pub fn wrap(&self, code: u64) -> PackedPoly {
        PackedPoly {
            p: self.p,
            n: self.n,
            code,
        }
    }

    pub fn check(&self, packed: PackedPoly) -> Result<()> {
        if packed.p != self.p || packed.n != self.n {
            return Err(Error::ParameterMismatch(format!(
                "polynomial over F_{} on {} variables, expected F_{} on {}",
                packed.p, packed.n, self.p, self.n
            )));
        }
        if packed.code >= self.code_limit() {
            return Err(Error::ParameterMismatch(format!(
                "code {} out of range",
                packed.code
            )));
        }
        Ok(())
    }

    /// Digitwise `a + s·b`.
    pub(crate) fn add_scaled(&self, a: u64, s: u64, b: u64) -> u64 {
        if self.p == 2 {
            return if s % 2 == 1 { a ^ b } else { a };
        }
        let (da, db) = (self.decode(a), self.decode(b));
        let mut out = [0u8; MAX_LEN];
        for i in 0..self.len {
            out[i] = ((da[i] as u64 + s * db[i] as u64) % self.p) as u8;
        }
        self.encode(&out)
    }

    pub(crate) fn sub(&self, a: u64, b: u64) -> u64 {
        self.add_scaled(a, self.p - 1, b)
    }

    #[cfg(test)]
    /// Coefficient form to value form: `v[x] = Σ_{m ⊆ x} c[m]`.
    pub(crate) fn to_values(&self, c: &Digits) -> Digits {
        let mut v = *c;
        for i in 0..self.n {
            for x in 0..self.len {
                if x >> i & 1 == 1 {
                    v[x] = ((v[x] as u64 + v[x ^ 1 << i] as u64) % self.p) as u8;
                }
            }
        }
        v
    }

    /// Value form to coefficient form (Möbius inversion).
    pub(crate) fn to_coeffs(&self, v: &Digits) -> Digits {
        let mut c = *v;
        for i in 0..self.n {
            for x in 0..self.len {
                if x >> i & 1 == 1 {
                    c[x] = ((c[x] as u64 + self.p - c[x ^ 1 << i] as u64) % self.p) as u8;
                }
            }
        }
        c
    }

    /// Coefficients of `∂_i` (1-based `i`).
    pub(crate) fn partial(&self, c: &Digits, i: usize) -> Digits {
        let b = 1 << (i - 1);
        let mut out = [0u8; MAX_LEN];
        for m in (0..self.len).filter(|m| m & b == 0) {
            out[m] = c[m | b];
        }
        out
    }

    /// Coefficients of the restriction `x_i = v`.
    pub(crate) fn restrict(&self, c: &Digits, i: usize, v: u64) -> Digits {
        let b = 1 << (i - 1);
        let mut out = [0u8; MAX_LEN];
        for m in (0..self.len).filter(|m| m & b == 0) {
            out[m] = ((c[m] as u64 + v * c[m | b] as u64) % self.p) as u8;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn feasibility_table() {
        assert!(Packer::new(2, 5).is_ok());
        assert!(Packer::new(3, 4).is_ok());
        assert!(Packer::new(5, 3).is_ok());
        assert_eq!(
            Packer::new(2, 6),
            Err(Error::InfeasibleParameters { p: 2, n: 6 })
        );
        assert_eq!(
            Packer::new(7, 2),
            Err(Error::InfeasibleParameters { p: 7, n: 2 })
        );
    }

    #[test]
    fn pack_round_trip() {
        let pk = Packer::new(3, 2).unwrap();
        let f = pk.field();
        let p =
            MultilinearPoly::from_terms(2, f, [(0, f.from_i64(2)), (3, f.from_i64(1))]).unwrap();
        let packed = pk.pack(&p).unwrap();
        // digits (2, 0, 0, 1) in base 3
        assert_eq!(packed.code, 2 + 27);
        assert_eq!(pk.unpack(packed).unwrap(), p);
    }

    #[test]
    fn value_transform_inverts() {
        let pk = Packer::new(5, 3).unwrap();
        for code in [0, 1, 12345, 390624] {
            let c = pk.decode(code);
            assert_eq!(pk.to_coeffs(&pk.to_values(&c)), c);
        }
    }

    #[test]
    fn packed_operators_match_polynomial_ones() {
        let pk = Packer::new(3, 3).unwrap();
        let f = pk.field();
        let p = MultilinearPoly::from_terms(3, f, (0..8u32).map(|m| (m, f.from_i64(m as i64 + 1))))
            .unwrap();
        let c = pk.decode(pk.pack(&p).unwrap().code);
        let d = pk.partial(&c, 2);
        assert_eq!(
            pk.unpack(pk.wrap(pk.encode(&d))).unwrap(),
            p.partial(2).unwrap()
        );
        let r = pk.restrict(&c, 3, 2);
        assert_eq!(
            pk.unpack(pk.wrap(pk.encode(&r))).unwrap(),
            p.restrict(3, &f.from_i64(2)).unwrap()
        );
    }
}
