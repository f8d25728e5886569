#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use readonce::rof::GateOp;
use readonce::{Field, FieldElem, MultilinearPoly, Rof};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ceil_half(n: usize) -> usize {
    n.div_ceil(2)
}

/// Small rationals over ℚ, uniform residues over F_p.
pub fn elem(rng: &mut ChaCha8Rng, field: Field) -> FieldElem {
    match field {
        Field::Rationals => field
            .from_ratio(rng.gen_range(-6..=6), rng.gen_range(1..=4))
            .unwrap(),
        _ => field.from_u64(rng.gen_range(0..field.characteristic())),
    }
}

pub fn nonzero(rng: &mut ChaCha8Rng, field: Field) -> FieldElem {
    loop {
        let x = elem(rng, field);
        if !x.is_zero() {
            return x;
        }
    }
}

/// Each monomial present with probability `density`.
pub fn random_poly(rng: &mut ChaCha8Rng, field: Field, n: usize, density: f64) -> MultilinearPoly {
    let mut terms = Vec::new();
    for m in 0..1u32 << n {
        if rng.gen_bool(density) {
            terms.push((m, elem(rng, field)));
        }
    }
    MultilinearPoly::from_terms(n, field, terms).unwrap()
}

/// A random read-once formula over exactly `vars`. Node coefficients `α` are
/// nonzero; with `multiplicative` every gate is a product.
pub fn random_rof(rng: &mut ChaCha8Rng, field: Field, vars: &[usize], multiplicative: bool) -> Rof {
    let alpha = nonzero(rng, field);
    let beta = elem(rng, field);
    if vars.len() == 1 {
        return Rof::leaf(vars[0], alpha, beta);
    }
    let mut vs = vars.to_vec();
    vs.shuffle(rng);
    let cut = rng.gen_range(1..vs.len());
    let left = random_rof(rng, field, &vs[..cut], multiplicative);
    let right = random_rof(rng, field, &vs[cut..], multiplicative);
    let op = if multiplicative || rng.gen_bool(0.5) {
        GateOp::Times
    } else {
        GateOp::Plus
    };
    Rof::gate(op, alpha, beta, left, right)
}

/// A random formula on a random nonempty subset of `1..=n`.
pub fn random_rof_on(rng: &mut ChaCha8Rng, field: Field, n: usize, multiplicative: bool) -> Rof {
    let mut vars: Vec<usize> = (1..=n).filter(|_| rng.gen_bool(0.7)).collect();
    if vars.is_empty() {
        vars.push(rng.gen_range(1..=n));
    }
    random_rof(rng, field, &vars, multiplicative)
}

/// Every formula over exactly `vars` with node labels drawn from `labels`,
/// taking each unordered split once (the left side holds the smallest
/// variable).
pub fn all_rofs(vars: &[usize], labels: &[FieldElem]) -> Vec<Rof> {
    let mut out = Vec::new();
    for_each_rof(vars, labels, &mut |r| out.push(r.clone()));
    out
}

pub fn for_each_rof(vars: &[usize], labels: &[FieldElem], f: &mut dyn FnMut(&Rof)) {
    if vars.len() == 1 {
        for a in labels {
            for b in labels {
                f(&Rof::leaf(vars[0], a.clone(), b.clone()));
            }
        }
        return;
    }
    let k = vars.len();
    let full = (1u32 << k) - 1;
    for left_mask in (1..full).filter(|m| m & 1 == 1) {
        let pick = |inside: bool| -> Vec<usize> {
            (0..k)
                .filter(|&i| (left_mask >> i & 1 == 1) == inside)
                .map(|i| vars[i])
                .collect()
        };
        let (l, r) = (pick(true), pick(false));
        let lefts = all_rofs(&l, labels);
        let rights = all_rofs(&r, labels);
        for op in [GateOp::Plus, GateOp::Times] {
            for a in labels {
                for b in labels {
                    for lt in &lefts {
                        for rt in &rights {
                            f(&Rof::gate(op, a.clone(), b.clone(), lt.clone(), rt.clone()));
                        }
                    }
                }
            }
        }
    }
}
