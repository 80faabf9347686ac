use msg_core::constructions::{approx_centralize, prepare_near_root, project_to_sl};
use msg_core::geodesics::{hamming_chain, rank_metric_chain, verify_chain, Ambient};
use msg_core::groups::{
    random_invertible, random_nonzero, random_perm, random_sl_with, seeded_rng,
};
use msg_core::metrics::{
    class_size_perm, conjugacy_distance_perm, hamming_distance, perm_centralizer_order,
    projective_rank_distance, Rational,
};
use msg_core::{Field, Matrix, Permutation};
use num_bigint::BigUint;
use proptest::prelude::*;

const ORDERS: [u64; 8] = [2, 3, 4, 5, 7, 8, 9, 25];

fn field() -> impl Strategy<Value = Field> {
    prop::sample::select(ORDERS.to_vec()).prop_map(|q| Field::of_order(q).unwrap())
}

fn coprime_k(f: &Field, seed: u64) -> usize {
    let p = f.characteristic() as usize;
    (1..=6)
        .filter(|k| k % p != 0)
        .nth(seed as usize % 4)
        .unwrap_or(1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(f in field(), a in 0u32..1024, b in 0u32..1024, c in 0u32..1024) {
        let q = f.order() as u32;
        let (a, b, c) = (f.element(a % q).unwrap(), f.element(b % q).unwrap(), f.element(c % q).unwrap());
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
        }
        let p = u64::from(f.characteristic());
        prop_assert_eq!(f.pow(f.add(a, b), p), f.add(f.pow(a, p), f.pow(b, p)));
    }

    #[test]
    fn sign_is_multiplicative(n in 1usize..30, seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let a = random_perm(n, &mut rng);
        let b = random_perm(n, &mut rng);
        prop_assert_eq!(a.compose(&b).unwrap().sign(), a.sign() * b.sign());
        prop_assert_eq!(a.cycle_type().iter().sum::<usize>(), n);
        prop_assert_eq!(a.support().len(), n - a.fixed_points());
    }

    #[test]
    fn hamming_is_bi_invariant_metric(n in 2usize..40, seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let [g, h, k, u] = [0; 4].map(|_| random_perm(n, &mut rng));
        let d = |a: &Permutation, b: &Permutation| hamming_distance(a, b).unwrap();
        prop_assert_eq!(d(&u.compose(&g).unwrap(), &u.compose(&h).unwrap()), d(&g, &h));
        prop_assert_eq!(d(&g.compose(&u).unwrap(), &h.compose(&u).unwrap()), d(&g, &h));
        prop_assert_eq!(d(&g, &h), d(&h, &g));
        prop_assert!(d(&g, &k) <= d(&g, &h) + d(&h, &k));
        prop_assert!(d(&g, &h) <= Rational::from_integer(1));
    }

    #[test]
    fn prank_is_bi_invariant_metric(f in field(), n in 2usize..6, seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let [g, h, k, u] = [0; 4].map(|_| random_invertible(&f, n, &mut rng));
        let d = |a: &Matrix, b: &Matrix| projective_rank_distance(a, b).unwrap();
        prop_assert_eq!(d(&u.mul(&g).unwrap(), &u.mul(&h).unwrap()), d(&g, &h));
        prop_assert_eq!(d(&g.mul(&u).unwrap(), &h.mul(&u).unwrap()), d(&g, &h));
        prop_assert_eq!(d(&g, &h), d(&h, &g));
        prop_assert!(d(&g, &k) <= d(&g, &h) + d(&h, &k));
        for a in f.nonzero() {
            prop_assert_eq!(d(&g.scale(a), &g), Rational::from_integer(0));
        }
    }

    #[test]
    fn conjugacy_is_bi_invariant_metric(n in 5usize..60, seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let [g, h, k, u] = [0; 4].map(|_| msg_core::groups::random_even_perm_with(n, &mut rng).unwrap());
        let d = |a: &Permutation, b: &Permutation| conjugacy_distance_perm(a, b, true).unwrap();
        prop_assert!((d(&u.compose(&g).unwrap(), &u.compose(&h).unwrap()) - d(&g, &h)).abs() < 1e-9);
        prop_assert!((d(&g.compose(&u).unwrap(), &h.compose(&u).unwrap()) - d(&g, &h)).abs() < 1e-9);
        prop_assert!((d(&g, &h) - d(&h, &g)).abs() < 1e-9);
        prop_assert!(d(&g, &k) <= d(&g, &h) + d(&h, &k) + 1e-9);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&d(&g, &h)));
    }

    #[test]
    fn orbit_stabilizer(n in 1usize..200, seed in any::<u64>()) {
        let sigma = random_perm(n, &mut seeded_rng(seed));
        let ct = sigma.cycle_type();
        let product = class_size_perm(&ct, n, false).unwrap() * perm_centralizer_order(&ct);
        prop_assert_eq!(product, msg_core::groups::factorial(n));
    }

    #[test]
    fn near_root_bounds(f in field(), n in 1usize..9, seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let k = coprime_k(&f, seed);
        let y = random_invertible(&f, n, &mut rng);
        let r = prepare_near_root(&y, k, random_nonzero(&f, &mut rng)).unwrap();
        r.decomposition.check_element(&r.x).unwrap();
        prop_assert!(r.x.is_invertible());
        prop_assert!(r.decomposition.dim_s().max(r.rank_change) <= r.defect_rank);
    }

    #[test]
    fn centralize_bound(f in field(), n in 1usize..8, seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let k = coprime_k(&f, seed);
        let y = random_invertible(&f, n, &mut rng);
        let r = prepare_near_root(&y, k, random_nonzero(&f, &mut rng)).unwrap();
        let phi = random_invertible(&f, n, &mut rng);
        let out = approx_centralize(&r.x, &r.decomposition, &phi).unwrap();
        prop_assert!(r.x.commutes_with(&out.psi));
        prop_assert!(out.psi.is_invertible());
        prop_assert!(phi.sub(&out.psi).unwrap().rank() <= 2 * k * k * out.commutator_rank + 3 * r.decomposition.dim_s());
    }

    #[test]
    fn projection_to_sl_is_rank_one(f in field(), n in 2usize..8, seed in any::<u64>()) {
        let g = random_invertible(&f, n, &mut seeded_rng(seed));
        let p = project_to_sl(&g).unwrap();
        prop_assert_eq!(p.det().unwrap(), f.one());
        prop_assert!(g.sub(&p).unwrap().rank() <= 1);
    }

    #[test]
    fn chains_verify(n in 3usize..40, q in prop::sample::select(vec![3u64, 5, 7]), seed in any::<u64>()) {
        let sigma = msg_core::groups::random_even_perm(n, seed).unwrap();
        let chain = hamming_chain(&sigma, Rational::new(2, n as i64), Ambient::Alternating).unwrap();
        prop_assert!(verify_chain(&chain).valid);
        prop_assert!(chain.overshoot >= Rational::from_integer(0));

        let f = Field::of_order(q).unwrap();
        let m = 2 + n % 5;
        let g = random_sl_with(m, &f, &mut seeded_rng(seed)).unwrap().into_matrix();
        let chain = rank_metric_chain(&g, Rational::new(1, m as i64), seed).unwrap();
        prop_assert!(verify_chain(&chain).valid);
        prop_assert!(chain.step_lengths.iter().all(|&s| s <= Rational::new(1, m as i64)));
    }
}

#[test]
fn alternating_class_sizes_partition_the_group() {
    fn partitions(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for k in (1..=n.min(max)).rev() {
            prefix.push(k);
            partitions(n - k, k, prefix, out);
            prefix.pop();
        }
    }
    for n in 2..=12 {
        let mut all = Vec::new();
        partitions(n, n, &mut Vec::new(), &mut all);
        let mut total = BigUint::from(0u32);
        for ct in all {
            if ct.iter().map(|k| k - 1).sum::<usize>() % 2 == 1 {
                continue;
            }
            let size = class_size_perm(&ct, n, true).unwrap();
            // split classes come in pairs of equal size
            let splits = {
                let mut sorted = ct.clone();
                sorted.dedup();
                sorted.len() == ct.len() && ct.iter().all(|k| k % 2 == 1)
            };
            total += if splits { size * 2u32 } else { size };
        }
        assert_eq!(total, msg_core::groups::factorial(n) / 2u32, "n = {n}");
    }
}
