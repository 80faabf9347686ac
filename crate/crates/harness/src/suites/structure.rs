use msg_core::centralizers::{characteristic_fingerprint, perm_centralizer_structure};
use msg_core::constructions::{build_niceblock, niceblock_p_core_dim, NiceblockGroup};
use msg_core::geodesics::{hamming_chain, rank_metric_chain, verify_chain, Ambient};
use msg_core::groups::{
    all_permutations, factorial, random_even_perm_with, random_invertible, random_perm,
    random_sl_with,
};
use msg_core::metrics::projective_rank_length;
use msg_core::{Field, FieldElement, Matrix, Permutation, Rational};
use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::Rng;

use super::metric::{partitions, representative};
use super::{SuiteOutcome, SuiteParams, Tally};
use crate::experiments::order_p_element;

const STRUCTURE_TAG: u64 = 8;
const GEODESIC_TAG: u64 = 9;

fn brute_centralizer_order(sigma: &Permutation, group: &[Permutation]) -> usize {
    group
        .iter()
        .filter(|t| (0..sigma.degree()).all(|i| t.apply(sigma.apply(i)) == sigma.apply(t.apply(i))))
        .count()
}

pub fn centralizer_structure_suite(params: &SuiteParams) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("centralizer_structure");
    let mut orders = Tally::default();
    let mut shapes = Tally::default();
    for n in 1..=9 {
        let s_n = all_permutations(n);
        for ct in partitions(n) {
            let sigma = representative(&ct);
            let structure = perm_centralizer_structure(&sigma);
            let brute = BigUint::from(brute_centralizer_order(&sigma, &s_n));
            let total = &structure.descriptor.total_order;
            orders.record(*total == brute, n, || format!("{ct:?}: {total} vs {brute}"));
            if let Some(shape) = &structure.prime_shape {
                let p = shape.p;
                let m = ct.iter().filter(|&&k| k == p).count();
                let f = ct.iter().filter(|&&k| k == 1).count();
                let ok = shape.m_order == BigUint::from(p).pow(m as u32)
                    && shape.t1_degree == m
                    && shape.t2_degree == f
                    && &shape.m_order * factorial(m) * factorial(f) == brute;
                shapes.record(ok, n, || format!("{ct:?}: {shape:?}"));
            }
        }
    }
    out.tally("perm_centralizer_order", orders);
    out.tally("prime_order_shape", shapes);

    let mut dichotomy = Tally::default();
    let mut stream = 0;
    for q in [2u64, 4, 3, 9, 5, 25] {
        let field = Field::of_order(q).expect("prime power");
        let char_p = u64::from(field.characteristic());
        for p in [2u64, 3, 5] {
            for n in 2..=4 {
                for group in [NiceblockGroup::Sl, NiceblockGroup::Sp] {
                    let label = format!("q={q} p={p} n={n} {}", group.tag().prefix());
                    let x = if p == char_p {
                        build_niceblock(n, &field, group, params.seed)
                            .map(|c| c.x.into_matrix())
                            .map_err(|e| e.to_string())
                    } else {
                        let mut rng = params.rng(STRUCTURE_TAG, stream);
                        stream += 1;
                        order_p_element(&field, 2 * n, p, &mut rng).map_err(|e| e.to_string())
                    };
                    let result = x.and_then(|x| {
                        characteristic_fingerprint(&x, p, group).map_err(|e| e.to_string())
                    });
                    match result {
                        Ok(fp) => {
                            let expected_core = if p == char_p {
                                BigUint::from(q).pow(niceblock_p_core_dim(group, n) as u32)
                            } else {
                                BigUint::from(1u32)
                            };
                            let ok = fp.has_large_p_core == (p == char_p)
                                && fp.p_core_order == expected_core;
                            dichotomy.record(ok, n, || {
                                format!("{label}: p-core order {}", fp.p_core_order)
                            });
                        }
                        Err(e) => dichotomy.record(false, n, || format!("{label}: {e}")),
                    }
                }
            }
        }
    }
    out.tally("fingerprint_dichotomy", dichotomy);
    out
}

/// A permutation of degree `n` whose cycles all have lengths in `lengths`.
fn whole_cycle_target<R: Rng>(n: usize, lengths: &[usize], rng: &mut R) -> Permutation {
    let mut points: Vec<usize> = (0..n).collect();
    points.shuffle(rng);
    let mut images: Vec<u32> = (0..n as u32).collect();
    let mut rest = &points[..];
    loop {
        let k = lengths[rng.random_range(0..lengths.len())];
        if k > rest.len() {
            break;
        }
        let (cycle, tail) = rest.split_at(k);
        for (t, &a) in cycle.iter().enumerate() {
            images[a] = cycle[(t + 1) % k] as u32;
        }
        rest = tail;
    }
    Permutation::new(images).expect("bijection")
}

/// A diagonalizable target whose eigenvalue 1 has strictly the largest
/// multiplicity, so the optimal scalar is 1.
fn unipotent_dominated_target<R: Rng>(field: &Field, n: usize, rng: &mut R) -> Matrix {
    let ones = n / 2 + 1;
    let others: Vec<FieldElement> = field
        .nonzero()
        .filter(|&a| a != FieldElement::ONE)
        .collect();
    let diag: Vec<FieldElement> = (0..n)
        .map(|i| {
            if i < ones || others.is_empty() {
                FieldElement::ONE
            } else {
                others[rng.random_range(0..others.len())]
            }
        })
        .collect();
    let g = random_invertible(field, n, rng);
    let d = Matrix::diagonal(field, &diag);
    g.mul(&d)
        .and_then(|m| m.mul(&g.inverse()?))
        .expect("square")
}

pub fn geodesic_suite(params: &SuiteParams) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("geodesics");
    let trials = params.trials(200);
    let mut index = 0;
    let mut rng_for = |params: &SuiteParams| {
        index += 1;
        params.rng(GEODESIC_TAG, index)
    };

    let mut whole = Tally::default();
    for _ in 0..trials {
        let mut rng = rng_for(params);
        let n = rng.random_range(10..=80);
        let m = rng.random_range(1..=6);
        let max_step = Rational::new(m as i64, n as i64);
        for ambient in [Ambient::Symmetric, Ambient::Alternating] {
            // whole cycles that fit in one step; odd lengths keep every cycle even
            let lengths: Vec<usize> = match ambient {
                Ambient::Symmetric => (2..=m + 1).collect(),
                Ambient::Alternating => (3..=m + 2).step_by(2).collect(),
            };
            let sigma = whole_cycle_target(n, &lengths, &mut rng);
            let result = hamming_chain(&sigma, max_step, ambient);
            let ok = result
                .as_ref()
                .is_ok_and(|c| c.overshoot == Rational::from_integer(0) && verify_chain(c).valid);
            whole.record(ok, n, || format!("{ambient:?} {sigma} max_step {max_step}"));
        }
    }
    out.tally("hamming_whole_cycles_exact", whole);

    let mut accounting = Tally::default();
    for _ in 0..trials {
        let mut rng = rng_for(params);
        let n = rng.random_range(5..=100);
        let m = rng.random_range(1..=10.min(n));
        let max_step = Rational::new(m as i64, n as i64);
        let targets = [
            (Ambient::Symmetric, random_perm(n, &mut rng), m + 1),
            // two transpositions need a four-point step
            (
                Ambient::Alternating,
                random_even_perm_with(n, &mut rng).expect("n >= 3"),
                (m + 2).max(4),
            ),
        ];
        for (ambient, sigma, cap) in targets {
            let ok = hamming_chain(&sigma, max_step, ambient).is_ok_and(|c| {
                let report = verify_chain(&c);
                let predicted = Rational::new((c.splits + 2 * c.parity_repairs) as i64, n as i64);
                report.valid
                    && c.overshoot == predicted
                    && report.max_step <= Rational::new(cap as i64, n as i64)
            });
            accounting.record(ok, n, || format!("{ambient:?} {sigma} max_step {max_step}"));
        }
    }
    out.tally("hamming_overshoot_accounting", accounting);

    let fields: Vec<Field> = [2u64, 3, 4, 5, 7, 9]
        .iter()
        .map(|&q| Field::of_order(q).expect("prime power"))
        .collect();
    let mut unit_steps = Tally::default();
    let mut exact_diag = Tally::default();
    for i in 0..trials {
        let mut rng = rng_for(params);
        let f = &fields[i % fields.len()];
        let n = rng.random_range(2..=8);
        let unit = Rational::new(1, n as i64);
        let g = random_sl_with(n, f, &mut rng)
            .expect("n >= 1")
            .into_matrix();
        let seed = rng.random();
        let ok = rank_metric_chain(&g, unit, seed)
            .is_ok_and(|c| verify_chain(&c).valid && c.step_lengths.iter().all(|&s| s == unit));
        unit_steps.record(ok, n, || format!("field {} g={g}", f.spec()));

        let d = unipotent_dominated_target(f, n, &mut rng);
        let ok = rank_metric_chain(&d, unit, seed).is_ok_and(|c| {
            verify_chain(&c).valid
                && c.overshoot == Rational::from_integer(0)
                && projective_rank_length(&d).is_ok_and(|l| c.total == l)
        });
        exact_diag.record(ok, n, || format!("field {} g={d}", f.spec()));
    }
    out.tally("rank_chain_unit_steps", unit_steps);
    out.tally("rank_chain_diagonalizable_exact", exact_diag);

    // Hamming steps in the alternating group move at least three points, so
    // steps of 2/n need the symmetric group.
    let mut connected = Tally::default();
    let n = 200;
    let cap = Rational::new(1, 100);
    for _ in 0..params.trials(50) {
        let mut rng = rng_for(params);
        let sigma = random_perm(n, &mut rng);
        let ok =
            hamming_chain(&sigma, Rational::new(1, n as i64), Ambient::Symmetric).is_ok_and(|c| {
                let report = verify_chain(&c);
                report.valid && report.max_step <= cap
            });
        connected.record(ok, n, || format!("{sigma}"));
    }
    out.tally("degree_200_steps_at_most_one_percent", connected);
    out
}
