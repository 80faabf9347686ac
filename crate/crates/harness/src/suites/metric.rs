use std::collections::HashSet;

use msg_core::groups::{
    all_even_permutations, all_permutations, factorial, projectively_equal, random_even_perm_with,
    random_invertible, random_perm, random_sl_with,
};
use msg_core::metrics::{
    class_size_perm, conjugacy_distance_perm, conjugacy_distance_psl, hamming_distance,
    perm_centralizer_order, projective_rank_distance, CLASS_SIZE_BUDGET,
};
use msg_core::{Field, Matrix, Permutation, Rational};
use num_bigint::BigUint;
use rand::Rng;

use super::{SuiteOutcome, SuiteParams, Tally, CONJ_TOLERANCE};

const METRIC_TAG: u64 = 6;
const CLASS_TAG: u64 = 7;

/// Comparison rules for a distance type: exact for rationals, within
/// [`CONJ_TOLERANCE`] for reals.
struct Scale<D> {
    zero: D,
    one: D,
    eq: fn(D, D) -> bool,
    le: fn(D, D) -> bool,
}

const EXACT: Scale<Rational> = Scale {
    zero: Rational::ZERO,
    one: Rational::ONE,
    eq: |a, b| a == b,
    le: |a, b| a <= b,
};

const REAL: Scale<f64> = Scale {
    zero: 0.0,
    one: 1.0,
    eq: |a, b| (a - b).abs() <= CONJ_TOLERANCE,
    le: |a, b| a <= b + CONJ_TOLERANCE,
};

/// Axiom violations of `d` on `[g, h, k, u]`: invariance under left and
/// right translation by `u`, symmetry, the triangle inequality through `k`,
/// normalization and separation.
fn axiom_violations<G, D: Copy + std::ops::Add<Output = D>>(
    [g, h, k, u]: [&G; 4],
    op: impl Fn(&G, &G) -> G,
    same: impl Fn(&G, &G) -> bool,
    d: impl Fn(&G, &G) -> D,
    s: &Scale<D>,
) -> Vec<&'static str> {
    let mut bad = Vec::new();
    let dgh = d(g, h);
    if !(s.eq)(d(&op(u, g), &op(u, h)), dgh) {
        bad.push("left invariance");
    }
    if !(s.eq)(d(&op(g, u), &op(h, u)), dgh) {
        bad.push("right invariance");
    }
    if !(s.eq)(d(h, g), dgh) {
        bad.push("symmetry");
    }
    if !(s.le)(d(g, k), dgh + d(h, k)) {
        bad.push("triangle inequality");
    }
    if !(s.eq)(d(g, g), s.zero) || !(s.le)(s.zero, dgh) || !(s.le)(dgh, s.one) {
        bad.push("normalization");
    }
    if (s.eq)(dgh, s.zero) != same(g, h) {
        bad.push("separation");
    }
    bad
}

pub fn metric_axiom_suite(params: &SuiteParams) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("metric_axioms");
    let trials = params.trials(1000);
    let compose = |a: &Permutation, b: &Permutation| a.compose(b).expect("same degree");
    let mul = |a: &Matrix, b: &Matrix| a.mul(b).expect("same size");

    let mut hamming = Tally::default();
    for i in 0..trials {
        let mut rng = params.rng(METRIC_TAG, i);
        let n = rng.random_range(1..=40);
        let [g, h, k, u] = [0; 4].map(|_| random_perm(n, &mut rng));
        let d = |a: &Permutation, b: &Permutation| hamming_distance(a, b).expect("same degree");
        let bad = axiom_violations([&g, &h, &k, &u], compose, |a, b| a == b, d, &EXACT);
        hamming.record(bad.is_empty(), n, || {
            format!("S{n}: {g} {h} {k} {u}: {bad:?}")
        });
    }
    out.tally("hamming", hamming);

    let mut rank = Tally::default();
    let fields: Vec<Field> = [2, 3, 4, 5, 7, 8, 9]
        .iter()
        .map(|&q| Field::of_order(q).expect("prime power"))
        .collect();
    for i in 0..trials {
        let mut rng = params.rng(METRIC_TAG, trials + i);
        let f = &fields[i % fields.len()];
        let n = rng.random_range(1..=6);
        let [g, mut h, k, u] = [0; 4].map(|_| random_invertible(f, n, &mut rng));
        if i % 4 == 0 {
            // exercise separation on projectively equal pairs
            h = g.scale(msg_core::groups::random_nonzero(f, &mut rng));
        }
        let d = |a: &Matrix, b: &Matrix| projective_rank_distance(a, b).expect("same size");
        let bad = axiom_violations([&g, &h, &k, &u], mul, projectively_equal, d, &EXACT);
        rank.record(bad.is_empty(), n, || {
            format!("field {} g={g} h={h} k={k} u={u}: {bad:?}", f.spec())
        });
    }
    out.tally("projective_rank", rank);

    let mut conj = Tally::default();
    for i in 0..trials {
        let mut rng = params.rng(METRIC_TAG, 2 * trials + i);
        let n = rng.random_range(5..=60);
        let [g, h, k, u] = [0; 4].map(|_| random_even_perm_with(n, &mut rng).expect("n >= 5"));
        let d = |a: &Permutation, b: &Permutation| {
            conjugacy_distance_perm(a, b, true).expect("even permutations")
        };
        let bad = axiom_violations([&g, &h, &k, &u], compose, |a, b| a == b, d, &REAL);
        conj.record(bad.is_empty(), n, || {
            format!("A{n}: {g} {h} {k} {u}: {bad:?}")
        });
    }
    out.tally("conjugacy_alternating", conj);

    let mut conj_psl = Tally::default();
    let small: Vec<Field> = [4, 5, 7, 8, 9]
        .iter()
        .map(|&q| Field::of_order(q).expect("prime power"))
        .collect();
    for i in 0..trials / 5 {
        let mut rng = params.rng(METRIC_TAG, 3 * trials + i);
        let f = &small[i % small.len()];
        let [g, h, k, u] =
            [0; 4].map(|_| random_sl_with(2, f, &mut rng).expect("n = 2").into_matrix());
        let d = |a: &Matrix, b: &Matrix| {
            conjugacy_distance_psl(a, b, CLASS_SIZE_BUDGET).expect("within budget")
        };
        let bad = axiom_violations([&g, &h, &k, &u], mul, projectively_equal, d, &REAL);
        conj_psl.record(bad.is_empty(), 2, || {
            format!("PSL2({}) g={g} h={h} k={k} u={u}: {bad:?}", f.order())
        });
    }
    out.tally("conjugacy_psl2", conj_psl);
    out
}

/// Partitions of `n` in non-increasing order.
pub(crate) fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for k in (1..=n.min(max)).rev() {
            prefix.push(k);
            go(n - k, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// The permutation with consecutive cycles of the given lengths.
pub(crate) fn representative(cycle_type: &[usize]) -> Permutation {
    let n = cycle_type.iter().sum();
    let mut images = Vec::with_capacity(n);
    let mut start = 0;
    for &k in cycle_type {
        for t in 0..k {
            images.push((start + (t + 1) % k) as u32);
        }
        start += k;
    }
    Permutation::new(images).expect("bijection")
}

fn conjugacy_orbit(sigma: &Permutation, group: &[Permutation]) -> usize {
    group
        .iter()
        .map(|t| {
            t.compose(sigma)
                .and_then(|m| m.compose(&t.inverse()))
                .expect("same degree")
        })
        .collect::<HashSet<_>>()
        .len()
}

fn centralizer_size(sigma: &Permutation, group: &[Permutation]) -> usize {
    group
        .iter()
        .filter(|t| (0..sigma.degree()).all(|i| t.apply(sigma.apply(i)) == sigma.apply(t.apply(i))))
        .count()
}

pub fn class_size_suite(params: &SuiteParams) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("class_sizes");
    let mut sym = Tally::default();
    let mut alt = Tally::default();
    let mut orbit_stabilizer = Tally::default();
    for n in 1..=8 {
        let s_n = all_permutations(n);
        let a_n = all_even_permutations(n);
        for ct in partitions(n) {
            let sigma = representative(&ct);
            let formula = class_size_perm(&ct, n, false).expect("valid cycle type");
            let brute = BigUint::from(conjugacy_orbit(&sigma, &s_n));
            sym.record(formula == brute, n, || {
                format!("S{n} {ct:?}: {formula} vs {brute}")
            });
            let stab = BigUint::from(centralizer_size(&sigma, &s_n));
            orbit_stabilizer.record(&formula * &stab == factorial(n), n, || {
                format!("S{n} {ct:?}: {formula} * {stab}")
            });
            if sigma.is_even() {
                let formula = class_size_perm(&ct, n, true).expect("even cycle type");
                let brute = BigUint::from(conjugacy_orbit(&sigma, &a_n));
                alt.record(formula == brute, n, || {
                    format!("A{n} {ct:?}: {formula} vs {brute}")
                });
                let stab = BigUint::from(centralizer_size(&sigma, &a_n));
                orbit_stabilizer.record(&formula * &stab == BigUint::from(a_n.len()), n, || {
                    format!("A{n} {ct:?}: {formula} * {stab}")
                });
            }
        }
    }
    for i in 0..params.trials(200) {
        let mut rng = params.rng(CLASS_TAG, i);
        let n = rng.random_range(1..=300);
        let sigma = random_perm(n, &mut rng);
        let ct = sigma.cycle_type();
        let product = class_size_perm(&ct, n, false).expect("valid") * perm_centralizer_order(&ct);
        orbit_stabilizer.record(product == factorial(n), n, || format!("S{n} {ct:?}"));
    }
    out.tally("symmetric_formula_vs_enumeration", sym);
    out.tally("alternating_formula_vs_enumeration", alt);
    out.tally("orbit_stabilizer", orbit_stabilizer);

    let five_cycle = class_size_perm(&[5], 5, true).expect("even");
    let split = five_cycle == BigUint::from(12u32)
        && conjugacy_orbit(&representative(&[5]), &all_even_permutations(5)) == 12;
    out.check(
        "alternating_5_cycles_split",
        split,
        format!("5-cycle class in A5 has size {five_cycle}"),
    );
    out
}
