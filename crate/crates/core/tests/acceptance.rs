//! End-to-end checks of the headline claims. Each test prints one line:
//! `criterion N: PASS|FAIL <detail>`. Run with `--nocapture` to see them.

mod common;

use std::time::{Duration, Instant};

use common::*;
use rand::Rng;
use readonce::mpoly::{elementary_symmetric, family4, m_poly, SparsePoly};
use readonce::oracle::{closure_report, enumerate_rops, min_k};
use readonce::recognize::{family4_decide, is_rop, Sum2Decision};
use readonce::rof::{is_multiplicative_semantic, mrops_witness, prune, Pruned};
use readonce::{decompose, Field, FieldElem, MultilinearPoly};

fn report(n: u32, failures: &[String], detail: &str) {
    if failures.is_empty() {
        println!("criterion {n}: PASS {detail}");
    } else {
        println!("criterion {n}: FAIL {detail}; {}", failures.join("; "));
    }
    assert!(failures.is_empty(), "criterion {n} failed: {failures:?}");
}

fn within(limit: Duration, took: Duration, what: &str, failures: &mut Vec<String>) {
    if took >= limit {
        failures.push(format!("{what} took {took:?}, limit {limit:?}"));
    }
}

fn poly(n: usize, field: Field, terms: &[(u32, i64)]) -> MultilinearPoly {
    MultilinearPoly::from_terms(n, field, terms.iter().map(|&(m, c)| (m, field.from_i64(c))))
        .unwrap()
}

fn x(i: usize) -> u32 {
    1 << (i - 1)
}

#[test]
fn criterion_1_family_examples() {
    let f = Field::Rationals;
    let start = Instant::now();
    let mut failures = Vec::new();
    let q = |v: i64| f.from_i64(v);

    match family4_decide(&q(2), &q(4), &q(5)).unwrap() {
        Sum2Decision::NotExpressible { d } => {
            if d.iter().any(|v| *v != q(-231)) {
                failures.push(format!("(2,4,5): d = {d:?}"));
            }
        }
        other => failures.push(format!("(2,4,5): {other:?}")),
    }

    // the published two-summand representations, written out independently
    let prod =
        |a: &[(u32, i64)], b: &[(u32, i64)]| poly(4, f, a).mul_disjoint(&poly(4, f, b)).unwrap();
    let pairs = poly(4, f, &[(x(1) | x(4), 3), (x(2) | x(3), 3)]);
    let examples = [
        (
            (2, 2, 3),
            prod(&[(x(1), 2), (x(4), 2)], &[(x(2), 1), (x(3), 1)])
                .add(&pairs)
                .unwrap(),
        ),
        (
            (2, -2, 3),
            prod(&[(x(1), 2), (x(4), -2)], &[(x(2), 1), (x(3), -1)])
                .add(&pairs)
                .unwrap(),
        ),
        (
            (1, 2, 3),
            prod(&[(x(1), 1), (x(3), 1)], &[(x(2), 1), (x(4), 1)])
                .add(&prod(&[(x(1), 2), (x(2), 2)], &[(x(3), 1), (x(4), 1)]))
                .unwrap(),
        ),
    ];
    for ((a, b, c), published) in examples {
        let target = family4(&q(a), &q(b), &q(c)).unwrap();
        if published != target {
            failures.push(format!(
                "({a},{b},{c}): published form does not expand to f"
            ));
        }
        match family4_decide(&q(a), &q(b), &q(c)).unwrap() {
            Sum2Decision::Expressible { witness, .. } => {
                if witness.len() > 2 || witness.sum_evaluate().unwrap() != published {
                    failures.push(format!(
                        "({a},{b},{c}): witness differs from published form"
                    ));
                }
            }
            other => failures.push(format!("({a},{b},{c}): {other:?}")),
        }
    }
    let took = start.elapsed();
    within(
        Duration::from_secs(1),
        took,
        "family examples",
        &mut failures,
    );
    report(
        1,
        &failures,
        &format!("(2,4,5) refuted with d = -231 x3, three examples expressible ({took:?})"),
    );
}

#[test]
fn criterion_2_hierarchy_over_f2() {
    let f2 = Field::prime(2).unwrap();
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut found = Vec::new();
    for n in 3..=5 {
        let class = enumerate_rops(2, n).unwrap();
        let target = elementary_symmetric(n, n - 1, f2).unwrap();
        let k = min_k(class.packer().pack(&target).unwrap(), &class, 4).unwrap();
        let shown = k.map_or("none".to_string(), |k| k.to_string());
        found.push(format!("min_k(S_{n}^{}) = {shown}", n - 1));
        if k != Some(ceil_half(n)) {
            failures.push(format!("n = {n}: min_k {k:?}, expected {}", ceil_half(n)));
        }
        let sum = decompose::symmetric_halves(n, &f2.zero(), &f2.one()).unwrap();
        if sum.len() != ceil_half(n) || !sum.verify_against(&target).unwrap() {
            failures.push(format!(
                "n = {n}: symmetric_halves gave {} summands",
                sum.len()
            ));
        }
    }
    let took = start.elapsed();
    within(Duration::from_secs(300), took, "oracle", &mut failures);
    report(2, &failures, &format!("{} ({took:?})", found.join(", ")));
}

#[test]
fn criterion_3_recognizer_matches_oracle() {
    let start = Instant::now();
    let class = enumerate_rops(2, 4).unwrap();
    let pk = class.packer().clone();
    let mut failures = Vec::new();
    let mut rops = 0;
    for code in 0..pk.code_limit() {
        let packed = pk.wrap(code);
        let p = pk.unpack(packed).unwrap();
        let recognized = is_rop(&p).is_some();
        rops += recognized as usize;
        if recognized != class.contains(packed).unwrap() && failures.len() < 5 {
            failures.push(format!("disagree on {p}"));
        }
    }
    let took = start.elapsed();
    within(Duration::from_secs(120), took, "comparison", &mut failures);
    report(
        3,
        &failures,
        &format!(
            "{} polynomials, {rops} read-once, class size {} ({took:?})",
            pk.code_limit(),
            class.len()
        ),
    );
}

#[test]
fn criterion_4_closure_and_multiplicativity() {
    let start = Instant::now();
    let mut failures = Vec::new();

    for n in 1..=4 {
        let r = closure_report(&enumerate_rops(2, n).unwrap());
        if !r.is_closed() {
            failures.push(format!(
                "F2 n = {n}: {} partial and {} restriction violations",
                r.partial_violations.len(),
                r.restriction_violations.len()
            ));
        }
    }

    let mut g = rng(4);
    for _ in 0..500 {
        let rof = random_rof_on(&mut g, Field::Rationals, 6, false);
        let p = rof.evaluate(6).unwrap();
        for i in 1..=6 {
            if is_rop(&p.partial(i).unwrap()).is_none() {
                failures.push(format!("d{i} of {rof} not read-once"));
            }
        }
    }

    let f2 = Field::prime(2).unwrap();
    let labels = [f2.zero(), f2.one()];
    let mut formulas = 0usize;
    let mut mismatches = 0usize;
    for k in 1..=4 {
        let vars: Vec<usize> = (1..=k).collect();
        for_each_rof(&vars, &labels, &mut |rof| {
            formulas += 1;
            let p = rof.evaluate(4).unwrap();
            if !p.vars().iter().all(|v| vars.contains(v)) {
                mismatches += 1;
            }
            if let Pruned::Tree(t) = prune(rof) {
                if t.evaluate(4).unwrap() != p
                    || t.is_multiplicative_structural() != is_multiplicative_semantic(&p)
                {
                    mismatches += 1;
                }
            }
        });
    }
    if mismatches > 0 {
        failures.push(format!("{mismatches} of {formulas} F2 formulas disagree"));
    }
    let took = start.elapsed();
    report(
        4,
        &failures,
        &format!("closure exact for n <= 4, 500 random partials read-once, {formulas} F2 formulas agree ({took:?})"),
    );
}

fn bound_failures(what: &str, got: usize, bound: usize, exact: bool, failures: &mut Vec<String>) {
    let bad = if exact { got != bound } else { got > bound };
    if bad {
        failures.push(format!("{what}: {got} summands, bound {bound}"));
    }
}

#[test]
fn criterion_5_upper_bounds() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut g = rng(5);
    let q = Field::Rationals;

    for _ in 0..200 {
        let n = g.gen_range(1..=7);
        let p = random_poly(&mut g, q, n, 0.5);
        let s = decompose::pair_monomials(&p).unwrap();
        bound_failures(
            "pairing",
            s.len(),
            p.num_terms().div_ceil(2),
            false,
            &mut failures,
        );
    }
    for case in 0..200 {
        let n = 4 + case % 5;
        let p = random_poly(&mut g, q, n, 0.7);
        let s = decompose::generic(&p).unwrap();
        bound_failures("generic", s.len(), 3 << (n - 4), false, &mut failures);
    }
    for _ in 0..200 {
        let n = g.gen_range(1..=12);
        let (a, b) = (elem(&mut g, q), nonzero(&mut g, q));
        let s = decompose::symmetric_halves(n, &a, &b).unwrap();
        if !s.verify_against(&m_poly(n, &a, &b).unwrap()).unwrap() {
            failures.push(format!("symmetric n = {n} does not verify"));
        }
        bound_failures("symmetric", s.len(), ceil_half(n), true, &mut failures);
    }
    for case in 0..200 {
        let mut c: Vec<FieldElem> = (0..5).map(|_| elem(&mut g, q)).collect();
        match case % 4 {
            0 => {
                c[2] = q.zero();
                c[3] = q.zero();
            }
            1 => {
                c[2] = q.zero();
                c[3] = nonzero(&mut g, q);
            }
            2 => {
                c[2] = nonzero(&mut g, q);
                c[4] = &(&c[3] * &c[3]) / &c[2];
            }
            _ => {
                c[2] = nonzero(&mut g, q);
                while &c[2] * &c[4] == &c[3] * &c[3] {
                    c[4] = elem(&mut g, q);
                }
            }
        }
        let c: [FieldElem; 5] = c.try_into().unwrap();
        let s = decompose::sympoly4(&c).unwrap();
        bound_failures("sympoly4", s.len(), 2, false, &mut failures);
    }
    // every decomposition above verified itself before returning
    let took = start.elapsed();
    report(
        5,
        &failures,
        &format!("800 decompositions within bounds ({took:?})"),
    );
}

#[test]
fn criterion_6_commutator_and_multiplicative_witness() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut g = rng(6);
    let q = Field::Rationals;
    let lin = |g: &mut rand_chacha::ChaCha8Rng, i: usize, j: usize, nonconstant: bool| loop {
        let p = MultilinearPoly::from_terms(
            4,
            q,
            [(0, elem(g, q)), (x(i), elem(g, q)), (x(j), elem(g, q))],
        )
        .unwrap();
        if !nonconstant || !p.is_constant() {
            return p;
        }
    };
    for _ in 0..500 {
        let l1 = lin(&mut g, 1, 2, false);
        let l2 = lin(&mut g, 3, 4, true);
        let l3 = lin(&mut g, 1, 3, false);
        let l4 = lin(&mut g, 2, 4, false);
        let f = l1
            .mul_disjoint(&l2)
            .unwrap()
            .add(&l3.mul_disjoint(&l4).unwrap())
            .unwrap();
        let comm = f.commutator(1, 2).unwrap();
        let l2s = SparsePoly::from_multilinear(&l2);
        match comm.div_exact(&l2s).unwrap() {
            Some(quot) if quot.mul(&l2s).unwrap() == comm => {}
            _ => failures.push(format!("{l2} does not divide the commutator of {f}")),
        }
    }
    let mut witnesses = 0;
    while witnesses < 500 {
        let rof = random_rof_on(&mut g, q, 6, true);
        let leaves = rof.leaf_vars();
        if leaves.len() < 2 {
            continue;
        }
        let i = leaves[g.gen_range(0..leaves.len())];
        let (j, gamma) = mrops_witness(&rof, i).unwrap();
        let p = rof.evaluate(6).unwrap();
        if !p.partial(j).unwrap().restrict(i, &gamma).unwrap().is_zero() {
            failures.push(format!("witness ({j}, {gamma}) fails for x{i} in {rof}"));
        }
        witnesses += 1;
    }
    let took = start.elapsed();
    report(
        6,
        &failures,
        &format!("500 divisions exact, 500 witnesses hold ({took:?})"),
    );
}

#[test]
fn criterion_7_decision_invariances() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut g = rng(7);
    let q = Field::Rationals;
    let (mut yes, mut no) = (0, 0);
    for _ in 0..200 {
        let v: Vec<FieldElem> = (0..3).map(|_| q.from_i64(g.gen_range(-12..=12))).collect();
        let decide =
            |a: &FieldElem, b: &FieldElem, c: &FieldElem| match family4_decide(a, b, c).unwrap() {
                Sum2Decision::Expressible { .. } => Some(true),
                Sum2Decision::NotExpressible { .. } => Some(false),
                Sum2Decision::Inconclusive { .. } => None,
            };
        let base = decide(&v[0], &v[1], &v[2]);
        match base {
            Some(true) => yes += 1,
            Some(false) => no += 1,
            None => failures.push(format!("{v:?} inconclusive")),
        }
        for [i, j, k] in [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ] {
            if decide(&v[i], &v[j], &v[k]) != base {
                failures.push(format!("{v:?} permuted ({i},{j},{k})"));
            }
        }
        let c = nonzero(&mut g, q);
        if decide(&(&c * &v[0]), &(&c * &v[1]), &(&c * &v[2])) != base {
            failures.push(format!("{v:?} scaled by {c}"));
        }
    }
    let took = start.elapsed();
    report(
        7,
        &failures,
        &format!("200 triples ({yes} expressible, {no} not), invariant under 6 permutations and scaling ({took:?})"),
    );
}
