//! Discrete geodesic chains from the identity to a target.
//!
//! Hamming chains walk through the cycles of a permutation, stopping at
//! cycle prefixes `(a_0 ... a_(j-1))`; stopping inside a cycle costs one extra
//! point when the cycle is resumed. Rank chains factor a matrix, up to a
//! scalar, into rank-one updates `I + u w^T`, each at projective rank distance
//! `1/n` from its predecessor.

use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::gf::FieldElement;
use crate::groups::{projectively_equal, random_element, seeded_rng, Permutation};
use crate::linalg::{Matrix, Vector};
use crate::metrics::{
    hamming_distance, hamming_length, projective_rank_distance, projective_rank_length, Rational,
};

/// An element type with a normalized length metric that chains can live in.
pub trait ChainElement: Clone {
    fn distance(&self, other: &Self) -> Result<Rational>;
    fn length(&self) -> Result<Rational>;
    /// Equality in the group the chain lives in.
    fn same(&self, other: &Self) -> bool;
    fn is_identity(&self) -> bool;
}

impl ChainElement for Permutation {
    fn distance(&self, other: &Self) -> Result<Rational> {
        hamming_distance(self, other)
    }

    fn length(&self) -> Result<Rational> {
        Ok(hamming_length(self))
    }

    fn same(&self, other: &Self) -> bool {
        self == other
    }

    fn is_identity(&self) -> bool {
        Permutation::is_identity(self)
    }
}

/// Matrices in a chain are representatives up to scalars.
impl ChainElement for Matrix {
    fn distance(&self, other: &Self) -> Result<Rational> {
        projective_rank_distance(self, other)
    }

    fn length(&self) -> Result<Rational> {
        projective_rank_length(self)
    }

    fn same(&self, other: &Self) -> bool {
        projectively_equal(self, other)
    }

    fn is_identity(&self) -> bool {
        self.as_scalar().is_some_and(|a| !a.is_zero())
    }
}

#[derive(Clone, Debug)]
pub struct ChainPath<G> {
    pub elements: Vec<G>,
    pub target: G,
    pub step_lengths: Vec<Rational>,
    pub total: Rational,
    pub overshoot: Rational,
    /// Hamming chains: stops strictly inside a cycle. Rank chains: factors beyond the minimum.
    pub splits: usize,
    pub parity_repairs: usize,
}

impl<G> ChainPath<G> {
    pub fn max_step(&self) -> Rational {
        self.step_lengths
            .iter()
            .copied()
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

fn finish<G: ChainElement>(
    elements: Vec<G>,
    target: &G,
    splits: usize,
    parity_repairs: usize,
) -> Result<ChainPath<G>> {
    let step_lengths = elements
        .windows(2)
        .map(|w| w[0].distance(&w[1]))
        .collect::<Result<Vec<_>>>()?;
    let total = step_lengths.iter().fold(Rational::zero(), |acc, s| acc + s);
    let overshoot = total - target.length()?;
    Ok(ChainPath {
        elements,
        target: target.clone(),
        step_lengths,
        total,
        overshoot,
        splits,
        parity_repairs,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ambient {
    /// Every chain element must be an even permutation.
    Alternating,
    Symmetric,
}

/// Chain to `sigma` through cycle prefixes. Each step moves at most
/// `floor(max_step n) + 1` points (`+ 2` in the alternating group, where
/// steps must preserve parity, and never fewer than four there since two
/// transpositions need a four-point step); every stop inside a cycle adds
/// exactly `1/n` to the overshoot.
pub fn hamming_chain(
    sigma: &Permutation,
    max_step: Rational,
    ambient: Ambient,
) -> Result<ChainPath<Permutation>> {
    let n = sigma.degree();
    if ambient == Ambient::Alternating && !sigma.is_even() {
        return Err(Error::precondition(
            "target must be even in the alternating group",
        ));
    }
    if n == 0 || max_step > Rational::from_integer(1) {
        return Err(Error::precondition("max_step must lie in [1/n, 1]"));
    }
    let per_step = (max_step * Rational::from_integer(n as i64))
        .floor()
        .to_integer();
    if per_step < 1 {
        return Err(Error::Infeasible(format!(
            "max_step {max_step} is below 1/{n}"
        )));
    }
    let budget = per_step as usize
        + if ambient == Ambient::Alternating {
            2
        } else {
            1
        };
    let cycles = sigma.cycles();

    // stops (cycle, prefix length), prefix >= 2; (i, len) completes cycle i
    let stops: Vec<(usize, usize)> = cycles
        .iter()
        .enumerate()
        .flat_map(|(i, c)| (2..=c.len()).map(move |j| (i, j)))
        .collect();
    let odd_before: Vec<bool> = cycles
        .iter()
        .scan(false, |odd, c| {
            let before = *odd;
            *odd ^= c.len() % 2 == 0;
            Some(before)
        })
        .collect();
    let valid =
        |(i, j): (usize, usize)| ambient == Ambient::Symmetric || odd_before[i] == (j % 2 == 0);
    // points that differ between stop `from` (None = identity) and a later stop `to`
    let cost = |from: Option<(usize, usize)>, (i2, j2): (usize, usize)| -> usize {
        match from {
            None => cycles[..i2].iter().map(Vec::len).sum::<usize>() + j2,
            Some((i1, j1)) if i1 == i2 => j2 - j1 + 1,
            Some((i1, j1)) => {
                let rest = if j1 == cycles[i1].len() {
                    0
                } else {
                    cycles[i1].len() - j1 + 1
                };
                rest + cycles[i1 + 1..i2].iter().map(Vec::len).sum::<usize>() + j2
            }
        }
    };

    let mut elements = vec![Permutation::identity(n)];
    let mut current: Option<(usize, usize)> = None;
    let mut next = 0;
    let mut splits = 0;
    while next < stops.len() {
        let mut chosen_end = None;
        let mut chosen_any = None;
        let mut nearest = None;
        for (idx, &stop) in stops.iter().enumerate().skip(next) {
            if !valid(stop) {
                continue;
            }
            if cost(current, stop) > budget {
                nearest.get_or_insert(idx);
                break;
            }
            if stop.1 == cycles[stop.0].len() {
                chosen_end = Some(idx);
            }
            chosen_any = Some(idx);
        }
        let idx = chosen_end
            .or(chosen_any)
            .or(nearest)
            .expect("the full target is a valid stop");
        let (i, j) = stops[idx];
        if j < cycles[i].len() {
            splits += 1;
        }
        let mut images: Vec<u32> = (0..n as u32).collect();
        for c in &cycles[..i] {
            for (t, &a) in c.iter().enumerate() {
                images[a] = c[(t + 1) % c.len()] as u32;
            }
        }
        let prefix = &cycles[i][..j];
        for (t, &a) in prefix.iter().enumerate() {
            images[a] = prefix[(t + 1) % j] as u32;
        }
        elements.push(Permutation::new(images)?);
        current = Some((i, j));
        next = idx + 1;
    }
    finish(elements, sigma, splits, 0)
}

/// Attempts to find `(u, w)` with `rk(n - u w^T) = rk(n) - 1` and
/// `1 + w^T u != 0`, first over coordinate pairs, then over random vectors.
fn rank_reducing_pair<R: Rng>(nm: &Matrix, h: &Matrix, rng: &mut R) -> Option<(Vector, Vector)> {
    let f = nm.field();
    let n = nm.rows();
    for i in 0..n {
        for j in 0..n {
            let pivot = nm.get(i, j);
            if pivot.is_zero() {
                continue;
            }
            let nh_ij = (0..n).fold(FieldElement::ZERO, |acc, t| {
                f.add(acc, f.mul(nm.get(i, t), h.get(t, j)))
            });
            if !nh_ij.is_zero() {
                let inv = f.inv(pivot).expect("nonzero");
                let w = nm.row(i).iter().map(|&a| f.mul(a, inv)).collect();
                return Some((nm.column(j), w));
            }
        }
    }
    let nt = nm.transpose();
    let nht = nm.mul(h).expect("square").transpose();
    for _ in 0..200 {
        let x: Vector = (0..n).map(|_| random_element(f, rng)).collect();
        let y: Vector = (0..n).map(|_| random_element(f, rng)).collect();
        let ny = nt.mul_vec(&y).expect("square");
        let c = dot(f, &ny, &x);
        let d = dot(f, &nht.mul_vec(&y).expect("square"), &x);
        if !c.is_zero() && !d.is_zero() {
            let inv = f.inv(c).expect("nonzero");
            return Some((
                nm.mul_vec(&x).expect("square"),
                ny.iter().map(|&a| f.mul(a, inv)).collect(),
            ));
        }
    }
    None
}

fn dot(f: &crate::gf::Field, a: &[FieldElement], b: &[FieldElement]) -> FieldElement {
    a.iter()
        .zip(b)
        .fold(FieldElement::ZERO, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

fn rank_one_update(u: &[FieldElement], w: &[FieldElement], field: &crate::gf::Field) -> Matrix {
    let n = u.len();
    Matrix::from_fn(field, n, n, |i, j| {
        let base = if i == j {
            FieldElement::ONE
        } else {
            FieldElement::ZERO
        };
        field.add(base, field.mul(u[i], w[j]))
    })
}

/// Chain to `g` through partial products of a factorization of `alpha^-1 g`
/// into invertible rank-one updates, where `alpha` is the smallest scalar
/// minimizing `rk(g - alpha I)`. Each step has length `1/n`; the overshoot
/// counts factors beyond `rk(g - alpha I)`. Intermediate elements are
/// representatives in the projective general linear group.
pub fn rank_metric_chain(g: &Matrix, max_step: Rational, seed: u64) -> Result<ChainPath<Matrix>> {
    let f = g.field();
    let n = g.rows();
    if !g.is_square() || !g.is_invertible() {
        return Err(Error::precondition("target must be invertible"));
    }
    if max_step * Rational::from_integer(n as i64) < Rational::from_integer(1) {
        return Err(Error::Infeasible(format!(
            "max_step {max_step} is below 1/{n}"
        )));
    }
    let shift = g.min_rank_shift(&Matrix::identity(f, n))?;
    let alpha = shift.argmins[0];
    let mut h = g.scale(f.inv(alpha)?);
    let mut rng = seeded_rng(seed);
    let mut factors = Vec::new();
    let mut extra = 0;
    let cap = 4 * n + 4;
    loop {
        let nm = h.shift(FieldElement::ONE);
        if nm.is_zero() {
            break;
        }
        if factors.len() == cap {
            return Err(Error::Infeasible(format!(
                "no rank-one factorization within {cap} factors"
            )));
        }
        let (u, w) = match rank_reducing_pair(&nm, &h, &mut rng) {
            Some(pair) => pair,
            None => {
                // a non-reducing factor with u in the column space of h - I
                extra += 1;
                loop {
                    let x: Vector = (0..n).map(|_| random_element(f, &mut rng)).collect();
                    let w: Vector = (0..n).map(|_| random_element(f, &mut rng)).collect();
                    let u = nm.mul_vec(&x)?;
                    if u.iter().any(|a| !a.is_zero()) && !f.add(f.one(), dot(f, &w, &u)).is_zero() {
                        break (u, w);
                    }
                }
            }
        };
        let factor = rank_one_update(&u, &w, f);
        h = factor.inverse()?.mul(&h)?;
        factors.push(factor);
    }
    let mut elements = vec![Matrix::identity(f, n)];
    for factor in &factors {
        let last = elements.last().expect("nonempty");
        elements.push(last.mul(factor)?);
    }
    finish(elements, g, extra, 0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainReport {
    pub valid: bool,
    pub recomputed_total: Rational,
    pub max_step: Rational,
    pub problems: Vec<String>,
}

/// Recomputes every step length from scratch and checks endpoints, step
/// annotations, total and overshoot. Mismatches are reported, not raised.
pub fn verify_chain<G: ChainElement>(chain: &ChainPath<G>) -> ChainReport {
    let mut problems = Vec::new();
    match chain.elements.first() {
        Some(first) if first.is_identity() => {}
        _ => problems.push("chain does not start at the identity".to_string()),
    }
    match chain.elements.last() {
        Some(last) if last.same(&chain.target) => {}
        _ => problems.push("chain does not end at the target".to_string()),
    }
    if chain.step_lengths.len() + 1 != chain.elements.len() {
        problems.push("step count does not match element count".to_string());
    }
    let mut total = Rational::zero();
    let mut max_step = Rational::zero();
    for (k, w) in chain.elements.windows(2).enumerate() {
        match w[0].distance(&w[1]) {
            Ok(d) => {
                if chain.step_lengths.get(k) != Some(&d) {
                    problems.push(format!(
                        "step {k} recorded {:?}, recomputed {d}",
                        chain.step_lengths.get(k)
                    ));
                }
                total += d;
                max_step = max_step.max(d);
            }
            Err(e) => problems.push(format!("step {k}: {e}")),
        }
    }
    if total != chain.total {
        problems.push(format!(
            "total recorded {}, recomputed {total}",
            chain.total
        ));
    }
    match chain.target.length() {
        Ok(l) if total - l == chain.overshoot && chain.overshoot >= Rational::zero() => {}
        Ok(l) => problems.push(format!(
            "overshoot {} does not equal {total} - {l}",
            chain.overshoot
        )),
        Err(e) => problems.push(format!("target length: {e}")),
    }
    ChainReport {
        valid: problems.is_empty(),
        recomputed_total: total,
        max_step,
        problems,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;
    use crate::groups::{random_even_perm, random_perm, random_sl};

    fn r(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    #[test]
    fn identity_chain() {
        let c = hamming_chain(&Permutation::identity(6), r(1, 2), Ambient::Alternating).unwrap();
        assert_eq!(c.elements.len(), 1);
        assert_eq!(c.total, r(0, 1));
        let f = Field::of_order(5).unwrap();
        let c = rank_metric_chain(&Matrix::identity(&f, 3), r(1, 3), 0).unwrap();
        assert_eq!(c.elements.len(), 1);
    }

    #[test]
    fn whole_cycle_steps() {
        let s = Permutation::from_cycles(10, &[&[0, 1, 2, 3, 4], &[5, 6, 7, 8, 9]]).unwrap();
        let c = hamming_chain(&s, r(1, 2), Ambient::Alternating).unwrap();
        assert_eq!(c.step_lengths, vec![r(1, 2), r(1, 2)]);
        assert_eq!(c.total, r(1, 1));
        assert_eq!(c.overshoot, r(0, 1));
        assert!(verify_chain(&c).valid);
    }

    #[test]
    fn long_cycle_split_once() {
        let s = Permutation::from_cycles(10, &[&(0..10).collect::<Vec<_>>()]).unwrap();
        let c = hamming_chain(&s, r(1, 2), Ambient::Symmetric).unwrap();
        assert_eq!(c.splits, 1);
        assert_eq!(c.overshoot, r(1, 10));
        assert_eq!(c.total, r(11, 10));
        assert!(c.max_step() <= r(1, 2) + r(2, 10));
        assert!(verify_chain(&c).valid);
    }

    #[test]
    fn random_hamming_chains() {
        let mut rng = seeded_rng(1);
        for seed in 0..300 {
            let n = 5 + seed as usize % 40;
            let step = r(rng.random_range(2..=n as i64), n as i64);
            let s = random_even_perm(n, seed).unwrap();
            let c = hamming_chain(&s, step, Ambient::Alternating).unwrap();
            let report = verify_chain(&c);
            assert!(report.valid, "{:?}", report.problems);
            assert!(c.elements.iter().all(Permutation::is_even));
            assert_eq!(c.overshoot, r(c.splits as i64, n as i64));
            assert!(c.max_step() <= step + r(2, n as i64));

            let s = random_perm(n, &mut rng);
            let c = hamming_chain(&s, r(1, n as i64), Ambient::Symmetric).unwrap();
            assert!(verify_chain(&c).valid);
            assert!(c.max_step() <= r(2, n as i64));
            assert_eq!(c.overshoot, r(c.splits as i64, n as i64));
        }
    }

    #[test]
    fn tampered_chain_is_rejected() {
        let s = random_even_perm(12, 3).unwrap();
        let mut c = hamming_chain(&s, r(1, 4), Ambient::Alternating).unwrap();
        assert!(c.elements.len() > 2);
        c.elements[1] = Permutation::transposition(12, 0, 1);
        assert!(!verify_chain(&c).valid);
    }

    #[test]
    fn rank_chain_examples() {
        let f = Field::of_order(7).unwrap();
        let t = Matrix::identity(&f, 4).with_entry(0, 2, f.from_int(3));
        let c = rank_metric_chain(&t, r(1, 4), 0).unwrap();
        assert_eq!(c.step_lengths, vec![r(1, 4)]);
        assert_eq!(c.overshoot, r(0, 1));

        let d = Matrix::diagonal(&f, &[f.from_int(2), f.from_int(4), f.one(), f.one()]);
        let c = rank_metric_chain(&d, r(1, 4), 0).unwrap();
        assert_eq!(c.total, projective_rank_length(&d).unwrap());
        assert!(verify_chain(&c).valid);
    }

    #[test]
    fn random_rank_chains() {
        for q in [2u64, 3, 4, 5, 7] {
            let f = Field::of_order(q).unwrap();
            for seed in 0..30 {
                let n = 2 + seed as usize % 6;
                let g = random_sl(n, &f, seed).unwrap().into_matrix();
                let c = rank_metric_chain(&g, r(1, n as i64), seed).unwrap();
                let report = verify_chain(&c);
                assert!(report.valid, "{:?}", report.problems);
                assert!(c.step_lengths.iter().all(|&s| s == r(1, n as i64)));
                assert_eq!(c.overshoot, r(c.splits as i64, n as i64));
            }
        }
    }
}
