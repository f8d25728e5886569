//! Exact scalars over the rationals and small prime fields.
//!
//! Every coefficient and node label in the crate is a [`FieldElem`]. Elements
//! remember which field they live in, so mixing fields is detected at the
//! point of use instead of producing a silently wrong answer.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A prime modulus `2 <= p < 2^31`, checked by trial division.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if !(2..(1u64 << 31)).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        Ok(Prime(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The ambient field: either ℚ or F_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rationals,
    Prime(Prime),
}

impl Field {
    pub fn prime(p: u64) -> Result<Self> {
        Prime::new(p).map(Field::Prime)
    }

    /// 0 for ℚ, p for F_p.
    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => p.get(),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Field::Prime(_))
    }

    pub fn zero(&self) -> FieldElem {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldElem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> FieldElem {
        match self {
            Field::Rationals => FieldElem::Rational(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => {
                let p = p.get();
                FieldElem::Mod {
                    value: v.rem_euclid(p as i64) as u64,
                    p,
                }
            }
        }
    }

    pub fn from_ratio(&self, num: i64, den: i64) -> Result<FieldElem> {
        self.from_i64(num).checked_div(&self.from_i64(den))
    }

    pub fn from_bigint(&self, v: &BigInt) -> FieldElem {
        match self {
            Field::Rationals => FieldElem::Rational(BigRational::from_integer(v.clone())),
            Field::Prime(p) => {
                let p = p.get();
                let r = v.mod_floor(&BigInt::from(p));
                FieldElem::Mod {
                    value: r.to_u64().expect("residue fits in u64"),
                    p,
                }
            }
        }
    }

    /// Residue `v mod p`; `v` is reduced. Over ℚ this is just the integer.
    pub fn from_u64(&self, v: u64) -> FieldElem {
        self.from_bigint(&BigInt::from(v))
    }

    /// True when `x` is an element of this field.
    pub fn contains(&self, x: &FieldElem) -> bool {
        x.field() == *self
    }

    /// All elements in canonical order `0, 1, ..., p-1`; `None` over ℚ.
    pub fn elements(&self) -> Option<Vec<FieldElem>> {
        match self {
            Field::Rationals => None,
            Field::Prime(p) => {
                let p = p.get();
                Some((0..p).map(|value| FieldElem::Mod { value, p }).collect())
            }
        }
    }

    /// Parses a complete scalar (`7`, `-3/2`, `4 mod 7`) into this field.
    pub fn parse_elem(&self, text: &str) -> Result<FieldElem> {
        let trimmed = text.trim();
        let offset = text.len() - text.trim_start().len();
        match scan_scalar(trimmed) {
            Some((lit, used)) if used == trimmed.len() => self
                .elem_from_literal(&lit)
                .map_err(|e| relocate(e, offset)),
            Some((_, used)) => Err(Error::parse(
                offset + used,
                "trailing characters after scalar",
            )),
            None => Err(Error::parse(offset, "expected a scalar")),
        }
    }

    /// Converts a scanned literal into this field. A `mod p` suffix must name
    /// this field's characteristic.
    pub fn elem_from_literal(&self, lit: &ScalarLiteral) -> Result<FieldElem> {
        if let Some(m) = lit.modulus {
            if m != self.characteristic() {
                return Err(Error::parse(
                    0,
                    format!("scalar is mod {m} but field is {self}"),
                ));
            }
        }
        let num = self.from_bigint(&lit.numerator);
        let den = self.from_bigint(&lit.denominator);
        num.checked_div(&den)
            .map_err(|_| Error::parse(0, "denominator vanishes in this field"))
    }
}

fn relocate(e: Error, offset: usize) -> Error {
    match e {
        Error::Parse { position, message } => Error::Parse {
            position: position + offset,
            message,
        },
        other => other,
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{}", p.get()),
        }
    }
}

/// A scalar as written in text, before it is placed in a field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarLiteral {
    pub numerator: BigInt,
    pub denominator: BigInt,
    pub modulus: Option<u64>,
}

/// Scans a scalar at the start of `text`: `-?digits(/digits)?( mod digits)?`.
/// Returns the literal and the number of bytes consumed.
pub fn scan_scalar(text: &str) -> Option<(ScalarLiteral, usize)> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let negative = bytes.first() == Some(&b'-');
    if negative {
        pos += 1;
    }
    let digits = |from: usize| -> usize {
        bytes[from..]
            .iter()
            .take_while(|b| b.is_ascii_digit())
            .count()
    };
    let n = digits(pos);
    if n == 0 {
        return None;
    }
    let mut numerator: BigInt = text[pos..pos + n].parse().ok()?;
    if negative {
        numerator = -numerator;
    }
    pos += n;
    let mut denominator = BigInt::one();
    if bytes.get(pos) == Some(&b'/') {
        let d = digits(pos + 1);
        if d == 0 {
            return None;
        }
        denominator = text[pos + 1..pos + 1 + d].parse().ok()?;
        pos += 1 + d;
    }
    let mut modulus = None;
    let rest = &text[pos..];
    let ws = rest.len() - rest.trim_start().len();
    if ws > 0 && rest[ws..].starts_with("mod") {
        let after = &rest[ws + 3..];
        let ws2 = after.len() - after.trim_start().len();
        let start = pos + ws + 3 + ws2;
        let d = digits(start);
        if ws2 > 0 && d > 0 {
            modulus = Some(text[start..start + d].parse().ok()?);
            pos = start + d;
        }
    }
    Some((
        ScalarLiteral {
            numerator,
            denominator,
            modulus,
        },
        pos,
    ))
}

/// An exact field element. Rationals are kept reduced with a positive
/// denominator; residues satisfy `value < p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldElem {
    Rational(BigRational),
    Mod { value: u64, p: u64 },
}

impl FieldElem {
    pub fn field(&self) -> Field {
        match self {
            FieldElem::Rational(_) => Field::Rationals,
            FieldElem::Mod { p, .. } => Field::Prime(Prime(*p)),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::Rational(r) => r.is_zero(),
            FieldElem::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElem::Rational(r) => r.is_one(),
            FieldElem::Mod { value, .. } => *value == 1,
        }
    }

    fn same_field(&self, other: &FieldElem) -> Result<()> {
        match (self, other) {
            (FieldElem::Rational(_), FieldElem::Rational(_)) => Ok(()),
            (FieldElem::Mod { p, .. }, FieldElem::Mod { p: q, .. }) if p == q => Ok(()),
            _ => Err(Error::FieldMismatch),
        }
    }

    pub fn checked_add(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (FieldElem::Rational(a), FieldElem::Rational(b)) => FieldElem::Rational(a + b),
            (FieldElem::Mod { value: a, p }, FieldElem::Mod { value: b, .. }) => FieldElem::Mod {
                value: (a + b) % p,
                p: *p,
            },
            _ => unreachable!(),
        })
    }

    pub fn checked_sub(&self, other: &FieldElem) -> Result<FieldElem> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (FieldElem::Rational(a), FieldElem::Rational(b)) => FieldElem::Rational(a * b),
            (FieldElem::Mod { value: a, p }, FieldElem::Mod { value: b, .. }) => FieldElem::Mod {
                value: (a * b) % p,
                p: *p,
            },
            _ => unreachable!(),
        })
    }

    pub fn checked_div(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same_field(other)?;
        self.checked_mul(&other.inverse()?)
    }

    fn neg_ref(&self) -> FieldElem {
        match self {
            FieldElem::Rational(a) => FieldElem::Rational(-a),
            FieldElem::Mod { value, p } => FieldElem::Mod {
                value: (p - value) % p,
                p: *p,
            },
        }
    }

    pub fn inverse(&self) -> Result<FieldElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            FieldElem::Rational(a) => FieldElem::Rational(a.recip()),
            FieldElem::Mod { value, p } => FieldElem::Mod {
                value: pow_mod(*value, p - 2, *p),
                p: *p,
            },
        })
    }

    pub fn pow(&self, mut e: u32) -> FieldElem {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// A square root inside the field, if one exists.
    ///
    /// Over ℚ the non-negative root is returned. Over F_p the smaller of the
    /// two residues `r`, `p - r` is returned.
    pub fn sqrt(&self) -> Option<FieldElem> {
        match self {
            FieldElem::Rational(r) => {
                if r.is_negative() {
                    return None;
                }
                let n = exact_isqrt(r.numer())?;
                let d = exact_isqrt(r.denom())?;
                Some(FieldElem::Rational(BigRational::new(n, d)))
            }
            FieldElem::Mod { value, p } => sqrt_mod(*value, *p).map(|r| FieldElem::Mod {
                value: r.min((p - r) % p),
                p: *p,
            }),
        }
    }

    /// The rational value, when this is an element of ℚ.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldElem::Rational(r) => Some(r),
            FieldElem::Mod { .. } => None,
        }
    }

    /// The residue, when this is an element of F_p.
    pub fn as_residue(&self) -> Option<u64> {
        match self {
            FieldElem::Rational(_) => None,
            FieldElem::Mod { value, .. } => Some(*value),
        }
    }

    /// True for rationals with a negative value. Residues are never negative.
    pub fn is_negative(&self) -> bool {
        matches!(self, FieldElem::Rational(r) if r.is_negative())
    }
}

fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

fn pow_mod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// Euler-criterion screen followed by Tonelli–Shanks.
fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 || p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1)?;
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = t2 * t2 % p;
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = b * b % p;
        t = t * c % p;
        r = r * b % p;
    }
    Some(r)
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            FieldElem::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

// Operator impls panic on a field mismatch. Library code checks fields at its
// public boundary and then uses the operators; callers with untrusted inputs
// should use the `checked_*` methods.
macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&FieldElem> for &FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: &FieldElem) -> FieldElem {
                self.$checked(rhs)
                    .expect(concat!("FieldElem::", stringify!($method)))
            }
        }
        impl $trait<FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: FieldElem) -> FieldElem {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: &FieldElem) -> FieldElem {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        self.neg_ref()
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        self.neg_ref()
    }
}
