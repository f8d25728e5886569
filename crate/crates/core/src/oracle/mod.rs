//! Exhaustive ground truth over small prime fields: every function computed
//! by a read-once formula over `F_p` on at most `n` variables, and minimal
//! summand counts by sumset search.
//!
//! Enumeration runs in value form (tables over `{0,1}^n`), where products
//! of variable-disjoint multilinear polynomials are pointwise. Per variable
//! subset it keeps one representative per class modulo nonconstant affine
//! maps `f ↦ a·f + b`, built from formulas whose every node depends on its
//! variables; constants are added at the end.

mod file;
mod packed;

use std::collections::HashSet;

pub use packed::{feasible, PackedPoly, Packer};
use packed::{Digits, MAX_LEN};

use crate::error::{Error, Result};
use crate::mpoly::MultilinearPoly;

/// All read-once polynomials over `F_p` on variables `x_1..x_n`, as sorted
/// packed codes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RopClass {
    packer: Packer,
    members: Vec<u64>,
}

impl RopClass {
    /// A class with no members, e.g. as a placeholder.
    pub fn empty(p: u64, n: usize) -> Result<Self> {
        Ok(RopClass {
            packer: Packer::new(p, n)?,
            members: Vec::new(),
        })
    }

    /// Builds a class from arbitrary codes (sorted and deduplicated).
    pub fn from_codes(p: u64, n: usize, mut members: Vec<u64>) -> Result<Self> {
        let packer = Packer::new(p, n)?;
        if let Some(&bad) = members.iter().find(|&&c| c >= packer.code_limit()) {
            return Err(Error::ParameterMismatch(format!("code {bad} out of range")));
        }
        members.sort_unstable();
        members.dedup();
        Ok(RopClass { packer, members })
    }

    pub fn p(&self) -> u64 {
        self.packer.p()
    }

    pub fn n(&self) -> usize {
        self.packer.n()
    }

    pub fn packer(&self) -> &Packer {
        &self.packer
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    fn has(&self, code: u64) -> bool {
        self.members.binary_search(&code).is_ok()
    }

    pub fn contains(&self, target: PackedPoly) -> Result<bool> {
        self.packer.check(target)?;
        Ok(self.has(target.code))
    }

    pub fn contains_poly(&self, poly: &MultilinearPoly) -> Result<bool> {
        Ok(self.has(self.packer.pack(poly)?.code))
    }
}

fn inverses(p: u64) -> Vec<u64> {
    (0..p)
        .map(|x| (1..p).find(|y| x * y % p == 1).unwrap_or(0))
        .collect()
}

struct Enumerator {
    packer: Packer,
    p: u64,
    len: usize,
    inv: Vec<u64>,
}

impl Enumerator {
    /// Class representative: value at the origin 0, first nonzero value 1.
    fn normalize(&self, v: &mut Digits) {
        let shift = v[0] as u64;
        let mut scale = 0;
        for x in v.iter_mut().take(self.len) {
            *x = ((*x as u64 + self.p - shift) % self.p) as u8;
            if scale == 0 && *x != 0 {
                scale = self.inv[*x as usize];
            }
        }
        for x in v.iter_mut().take(self.len) {
            *x = (*x as u64 * scale % self.p) as u8;
        }
    }

    fn insert(&self, seen: &mut HashSet<u64>, out: &mut Vec<Digits>, mut v: Digits) {
        self.normalize(&mut v);
        if seen.insert(self.packer.encode(&v)) {
            out.push(v);
        }
    }

    fn combine(
        &self,
        left: &[Digits],
        right: &[Digits],
        seen: &mut HashSet<u64>,
        out: &mut Vec<Digits>,
    ) {
        let p = self.p;
        for l in left {
            for r in right {
                for s in 1..p {
                    let mut v = [0u8; MAX_LEN];
                    for x in 0..self.len {
                        v[x] = ((l[x] as u64 + s * r[x] as u64) % p) as u8;
                    }
                    self.insert(seen, out, v);
                }
                for s in 0..p {
                    for t in 0..p {
                        let mut v = [0u8; MAX_LEN];
                        for x in 0..self.len {
                            v[x] = ((l[x] as u64 + s) * (r[x] as u64 + t) % p) as u8;
                        }
                        self.insert(seen, out, v);
                    }
                }
            }
        }
    }
}

/// Enumerates every function computed by a read-once formula over `F_p`
/// using variables among `x_1..x_n`.
///
/// Accepted parameters: `p = 2, n ≤ 5`; `p = 3, n ≤ 4`; `p = 5, n ≤ 3`.
pub fn enumerate_rops(p: u64, n: usize) -> Result<RopClass> {
    let packer = Packer::new(p, n)?;
    let len = packer.len();
    let en = Enumerator {
        packer: packer.clone(),
        p,
        len,
        inv: inverses(p),
    };
    let subsets = 1usize << n;
    let mut classes: Vec<Vec<Digits>> = vec![Vec::new(); subsets];
    let mut order: Vec<usize> = (1..subsets).collect();
    order.sort_by_key(|s| (s.count_ones(), *s));
    for &s in &order {
        if s.count_ones() == 1 {
            let i = s.trailing_zeros();
            let mut v = [0u8; MAX_LEN];
            for (x, d) in v.iter_mut().enumerate().take(len) {
                *d = (x >> i & 1) as u8;
            }
            classes[s] = vec![v];
            continue;
        }
        let low = s & s.wrapping_neg();
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        let mut a = (s - 1) & s;
        while a != 0 {
            if a & low != 0 {
                en.combine(&classes[a], &classes[s ^ a], &mut seen, &mut out);
            }
            a = (a - 1) & s;
        }
        classes[s] = out;
    }

    let mut members: Vec<u64> = Vec::new();
    for c in 0..p {
        let mut v = [0u8; MAX_LEN];
        v[..len].iter_mut().for_each(|x| *x = c as u8);
        members.push(packer.encode(&packer.to_coeffs(&v)));
    }
    for class in &classes {
        for rep in class {
            for a in 1..p {
                for b in 0..p {
                    let mut v = [0u8; MAX_LEN];
                    for x in 0..len {
                        v[x] = ((a * rep[x] as u64 + b) % p) as u8;
                    }
                    members.push(packer.encode(&packer.to_coeffs(&v)));
                }
            }
        }
    }
    members.sort_unstable();
    members.dedup();
    Ok(RopClass { packer, members })
}

/// Membership in the `k`-fold sumset for `k = 2`, as a bitmap over all codes
/// with zero constant term divided by `p`.
struct PairSums {
    bits: Vec<u64>,
}

impl PairSums {
    fn index(p: u64, code: u64) -> u64 {
        code / p
    }

    fn build(packer: &Packer, base: &[u64]) -> Self {
        let slots = packer.code_limit() / packer.p();
        let mut bits = vec![0u64; slots.div_ceil(64) as usize];
        for (i, &a) in base.iter().enumerate() {
            for &b in &base[i..] {
                let sum = packer.add_scaled(a, 1, b);
                let k = Self::index(packer.p(), sum);
                bits[(k / 64) as usize] |= 1 << (k % 64);
            }
        }
        PairSums { bits }
    }

    fn contains(&self, p: u64, code: u64) -> bool {
        let k = Self::index(p, code);
        self.bits[(k / 64) as usize] >> (k % 64) & 1 == 1
    }
}

/// Smallest `k ≤ kmax` such that `target` is a sum of `k` members of
/// `class`, or `None`.
///
/// Members are closed under adding constants, so the search runs over
/// members with zero constant term against the target with its constant
/// term removed. `k = 1` is a lookup, `k = 2` scans members, and `k ≥ 3`
/// uses the materialized set of pairwise sums.
pub fn min_k(target: PackedPoly, class: &RopClass, kmax: usize) -> Result<Option<usize>> {
    if kmax > 4 {
        return Err(Error::ParameterMismatch(format!("kmax = {kmax} exceeds 4")));
    }
    class.packer.check(target)?;
    let packer = &class.packer;
    let p = packer.p();
    if kmax >= 1 && class.has(target.code) {
        return Ok(Some(1));
    }
    let t0 = target.code - target.code % p;
    let base: Vec<u64> = class
        .members
        .iter()
        .copied()
        .filter(|c| c % p == 0)
        .collect();
    if kmax >= 2 && base.iter().any(|&s| class.has(packer.sub(t0, s))) {
        return Ok(Some(2));
    }
    if kmax < 3 || base.is_empty() {
        return Ok(None);
    }
    let pairs = PairSums::build(packer, &base);
    if base.iter().any(|&s| pairs.contains(p, packer.sub(t0, s))) {
        return Ok(Some(3));
    }
    if kmax < 4 {
        return Ok(None);
    }
    let slots = packer.code_limit() / p;
    let found = (0..slots)
        .filter(|&k| pairs.contains(p, k * p))
        .any(|k| pairs.contains(p, packer.sub(t0, k * p)));
    Ok(found.then_some(4))
}

/// Violations of closure under partial derivatives and restrictions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClosureReport {
    pub members_checked: usize,
    /// `(member, i)` with `∂_i member` outside the class.
    pub partial_violations: Vec<(u64, usize)>,
    /// `(member, i, v)` with `member|_{x_i=v}` outside the class.
    pub restriction_violations: Vec<(u64, usize, u64)>,
}

impl ClosureReport {
    pub fn is_closed(&self) -> bool {
        self.partial_violations.is_empty() && self.restriction_violations.is_empty()
    }
}

pub fn closure_report(class: &RopClass) -> ClosureReport {
    let packer = &class.packer;
    let mut report = ClosureReport {
        members_checked: class.len(),
        ..ClosureReport::default()
    };
    for &m in &class.members {
        let c = packer.decode(m);
        for i in 1..=packer.n() {
            if !class.has(packer.encode(&packer.partial(&c, i))) {
                report.partial_violations.push((m, i));
            }
            for v in 0..packer.p() {
                if !class.has(packer.encode(&packer.restrict(&c, i, v))) {
                    report.restriction_violations.push((m, i, v));
                }
            }
        }
    }
    report
}
