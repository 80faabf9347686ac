//! Normalized bi-invariant metrics: Hamming distance on permutations,
//! projective rank distance on matrices, and the conjugacy metric
//! `log |ccl(g h^-1)| / log |G|`, together with the class sizes it needs.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::gf::FieldElement;
use crate::groups::{
    factorial, gl_order, psl_order, sl_order, ClassicalElement, GroupTag, Permutation,
};
use crate::linalg::Matrix;

pub type Rational = Ratio<i64>;

/// Default cap on the number of commutant elements enumerated for a class size.
pub const CLASS_SIZE_BUDGET: u128 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MetricKind {
    Hamming,
    ProjectiveRank,
    Conjugacy,
}

impl MetricKind {
    pub fn parse(text: &str) -> Result<MetricKind> {
        match text.trim().to_ascii_lowercase().as_str() {
            "hamming" | "h" => Ok(MetricKind::Hamming),
            "prank" | "pr" | "projective-rank" => Ok(MetricKind::ProjectiveRank),
            "conj" | "c" | "conjugacy" => Ok(MetricKind::Conjugacy),
            other => Err(Error::parse(format!("unknown metric {other:?}"))),
        }
    }
}

/// An exact rational or a floating value in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MetricValue {
    Exact(Rational),
    Real(f64),
}

impl MetricValue {
    pub fn to_f64(self) -> f64 {
        match self {
            MetricValue::Exact(r) => *r.numer() as f64 / *r.denom() as f64,
            MetricValue::Real(x) => x,
        }
    }

    pub fn exact(self) -> Option<Rational> {
        match self {
            MetricValue::Exact(r) => Some(r),
            MetricValue::Real(_) => None,
        }
    }
}

impl fmt::Display for MetricValue {
    /// Exact values print as `a/b`, reals with 12 significant digits.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricValue::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            MetricValue::Real(x) => f.write_str(&format_significant(*x, 12)),
        }
    }
}

/// Decimal rendering of `x` with `digits` significant digits.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = digits as i64 - 1 - magnitude;
    if (0..=20).contains(&decimals) {
        let s = format!("{:.*}", decimals as usize, x);
        // rounding may carry into a new leading digit
        let lead = s
            .trim_start_matches('-')
            .split('.')
            .next()
            .unwrap_or("")
            .trim_start_matches('0')
            .len();
        if lead > (magnitude + 1).max(0) as usize && decimals > 0 {
            return format!("{:.*}", decimals as usize - 1, x);
        }
        s
    } else {
        format!("{:.*e}", digits - 1, x)
    }
}

/// Natural logarithm of a big integer, from its top 64 bits.
pub fn ln_big(x: &BigUint) -> f64 {
    assert!(!x.is_zero(), "log of zero");
    let bits = x.bits();
    if bits <= 64 {
        return x.to_u64().expect("fits").to_f64().expect("finite").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().expect("fits") as f64;
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

fn ratio(num: usize, den: usize) -> Rational {
    Rational::new(num as i64, den as i64)
}

/// Fraction of points on which `sigma` and `tau` differ.
pub fn hamming_distance(sigma: &Permutation, tau: &Permutation) -> Result<Rational> {
    if sigma.degree() != tau.degree() {
        return Err(Error::DimensionMismatch(format!(
            "S_{} vs S_{}",
            sigma.degree(),
            tau.degree()
        )));
    }
    let n = sigma.degree();
    if n == 0 {
        return Ok(Rational::zero());
    }
    let moved = sigma
        .images()
        .iter()
        .zip(tau.images())
        .filter(|(a, b)| a != b)
        .count();
    Ok(ratio(moved, n))
}

pub fn hamming_length(sigma: &Permutation) -> Rational {
    hamming_distance(sigma, &Permutation::identity(sigma.degree())).expect("same degree")
}

/// `min_alpha rank(g - alpha h) / n` over nonzero scalars `alpha`.
pub fn projective_rank_distance(g: &Matrix, h: &Matrix) -> Result<Rational> {
    if g.field() != h.field() {
        return Err(Error::FieldMismatch);
    }
    if !h.is_invertible() {
        return Err(Error::precondition(
            "second argument of the projective rank distance must be invertible",
        ));
    }
    let shift = g.min_rank_shift(h)?;
    Ok(ratio(shift.rank, g.rows()))
}

pub fn projective_rank_length(g: &Matrix) -> Result<Rational> {
    projective_rank_distance(g, &Matrix::identity(g.field(), g.rows()))
}

/// Multiplicity of each cycle length.
pub fn cycle_multiplicities(cycle_type: &[usize]) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for &k in cycle_type {
        *m.entry(k).or_insert(0) += 1;
    }
    m
}

fn is_even_type(cycle_type: &[usize]) -> bool {
    cycle_type
        .iter()
        .map(|k| k.saturating_sub(1))
        .sum::<usize>()
        % 2
        == 0
}

/// `prod_k k^{m_k} m_k!`, the order of the centralizer in `S_n`.
pub fn perm_centralizer_order(cycle_type: &[usize]) -> BigUint {
    cycle_multiplicities(cycle_type)
        .iter()
        .fold(BigUint::one(), |acc, (&k, &m)| {
            acc * BigUint::from(k).pow(m as u32) * factorial(m)
        })
}

/// Size of the conjugacy class with the given cycle type in `S_n`, or in `A_n`
/// when `in_alternating` is set.
pub fn class_size_perm(cycle_type: &[usize], n: usize, in_alternating: bool) -> Result<BigUint> {
    if cycle_type.iter().sum::<usize>() != n || cycle_type.contains(&0) {
        return Err(Error::precondition(format!(
            "{cycle_type:?} is not a cycle type of degree {n}"
        )));
    }
    if in_alternating && !is_even_type(cycle_type) {
        return Err(Error::precondition(format!(
            "{cycle_type:?} is odd, not a class of A_{n}"
        )));
    }
    if n < 2 {
        return Ok(BigUint::one());
    }
    let size = factorial(n) / perm_centralizer_order(cycle_type);
    let mults = cycle_multiplicities(cycle_type);
    let splits = mults.iter().all(|(&k, &m)| k % 2 == 1 && m == 1);
    Ok(if in_alternating && splits {
        size / 2u32
    } else {
        size
    })
}

/// Calls `visit` on every linear combination of `basis`, in odometer order,
/// updating the running sum by one scaled basis element per digit change.
pub(crate) fn for_each_in_span(
    basis: &[Matrix],
    template: &Matrix,
    mut visit: impl FnMut(&Matrix),
) {
    let f = template.field();
    let q = f.order() as u32;
    let mut digits = vec![0u32; basis.len()];
    let mut m = Matrix::zeros(f, template.rows(), template.cols());
    loop {
        visit(&m);
        let mut k = 0;
        loop {
            if k == digits.len() {
                return;
            }
            let old = FieldElement(digits[k]);
            digits[k] = (digits[k] + 1) % q;
            let step = f.sub(FieldElement(digits[k]), old);
            m = m.add(&basis[k].scale(step)).expect("same shape");
            if digits[k] != 0 {
                break;
            }
            k += 1;
        }
    }
}

fn span_size(q: u64, dim: usize) -> u128 {
    u128::from(q).checked_pow(dim as u32).unwrap_or(u128::MAX)
}

/// Size of the conjugacy class of `x` in GL, SL or PSL (for `PslRep`), via
/// enumerating the commutant of `x`. Fails with a budget error when the
/// commutant has more than `budget` elements.
pub fn class_size_matrix(x: &ClassicalElement, budget: u128) -> Result<BigUint> {
    let m = x.matrix();
    let f = m.field();
    let n = m.rows();
    let q = f.order();
    match x.tag() {
        GroupTag::Gl | GroupTag::Sl => {
            let basis = m.commutant_basis();
            let needed = span_size(q, basis.len());
            if needed > budget {
                return Err(Error::Budget { needed, budget });
            }
            let want_sl = x.tag() == GroupTag::Sl;
            let mut count = 0u64;
            for_each_in_span(&basis, m, |c| {
                let d = c.det().expect("square");
                if (want_sl && d == FieldElement::ONE) || (!want_sl && !d.is_zero()) {
                    count += 1;
                }
            });
            let order = if want_sl {
                sl_order(n, q)
            } else {
                gl_order(n, q)
            };
            Ok(order / BigUint::from(count))
        }
        GroupTag::PslRep => {
            let det = m.det()?;
            if !f.nonzero().any(|a| f.pow(a, n as u64) == det) {
                return Err(Error::precondition(
                    "determinant is not an n-th power; element is not in PSL",
                ));
            }
            let twists: Vec<FieldElement> = f
                .nonzero()
                .filter(|&l| f.pow(l, n as u64) == f.one())
                .collect();
            let bases: Vec<Vec<Matrix>> = twists
                .iter()
                .map(|&l| m.twisted_commutant_basis(l))
                .collect();
            let needed = bases
                .iter()
                .fold(0u128, |acc, b| acc.saturating_add(span_size(q, b.len())));
            if needed > budget {
                return Err(Error::Budget { needed, budget });
            }
            let mut count = 0u64;
            for basis in &bases {
                for_each_in_span(basis, m, |c| {
                    if c.det().expect("square") == FieldElement::ONE {
                        count += 1;
                    }
                });
            }
            let scalars = (n as u64).gcd(&(q - 1));
            Ok(psl_order(n, q) * BigUint::from(scalars) / BigUint::from(count))
        }
        GroupTag::Sp => Err(Error::Unsupported(
            "class sizes in Sp are not computed".into(),
        )),
    }
}

fn log_ratio(class_size: &BigUint, group_order: &BigUint) -> f64 {
    if class_size.is_one() {
        return 0.0;
    }
    ln_big(class_size) / ln_big(group_order)
}

/// Conjugacy distance in `A_n` (`alternating`, n >= 5) or `S_n` (n >= 3).
pub fn conjugacy_distance_perm(
    sigma: &Permutation,
    tau: &Permutation,
    alternating: bool,
) -> Result<f64> {
    let n = sigma.degree();
    if tau.degree() != n {
        return Err(Error::DimensionMismatch(format!(
            "S_{n} vs S_{}",
            tau.degree()
        )));
    }
    if alternating {
        if n < 5 {
            return Err(Error::precondition(
                "the conjugacy metric needs A_n with n >= 5",
            ));
        }
        if !sigma.is_even() || !tau.is_even() {
            return Err(Error::precondition("elements must be even permutations"));
        }
    } else if n < 3 {
        return Err(Error::precondition(
            "the conjugacy metric needs S_n with n >= 3",
        ));
    }
    let quotient = sigma.compose(&tau.inverse())?;
    let size = class_size_perm(&quotient.cycle_type(), n, alternating)?;
    let order = if alternating {
        factorial(n) / 2u32
    } else {
        factorial(n)
    };
    Ok(log_ratio(&size, &order))
}

/// Conjugacy distance in `PSL_n(q)` between two representatives.
pub fn conjugacy_distance_psl(g: &Matrix, h: &Matrix, budget: u128) -> Result<f64> {
    if g.field() != h.field() {
        return Err(Error::FieldMismatch);
    }
    let n = g.rows();
    let q = g.field().order();
    if n < 2 {
        return Err(Error::precondition("PSL_n needs n >= 2"));
    }
    let quotient = g.mul(&h.inverse()?)?;
    if quotient.as_scalar().is_some() {
        return Ok(0.0);
    }
    let element = ClassicalElement::new(quotient, GroupTag::PslRep, None)?;
    let size = class_size_matrix(&element, budget)?;
    Ok(log_ratio(&size, &psl_order(n, q)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;
    use crate::groups::{
        all_even_permutations, all_permutations, enumerate_psl, enumerate_sl, GroupElement,
        ProjectiveMatrix,
    };
    use std::collections::HashSet;

    fn r(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    #[test]
    fn hamming_examples() {
        let id = Permutation::identity(5);
        let c = Permutation::from_cycles(5, &[&[0, 1, 2]]).unwrap();
        assert_eq!(hamming_distance(&id, &id).unwrap(), r(0, 1));
        assert_eq!(hamming_distance(&c, &id).unwrap(), r(3, 5));
        let t = Permutation::from_cycles(8, &[&[0, 1], &[2, 3]]).unwrap();
        assert_eq!(hamming_length(&t), r(4, 8));
        assert!(hamming_distance(&c, &Permutation::identity(4)).is_err());
    }

    #[test]
    fn prank_examples() {
        let f = Field::of_order(5).unwrap();
        let h = Matrix::from_ints(&f, 2, 2, &[2, 2, 3, 4]);
        assert_eq!(
            projective_rank_distance(&h.scale(f.from_int(2)), &h).unwrap(),
            r(0, 1)
        );
        let d = Matrix::from_ints(&f, 3, 3, &[2, 0, 0, 0, 1, 0, 0, 0, 1]);
        assert_eq!(projective_rank_length(&d).unwrap(), r(1, 3));
    }

    fn brute_class_size(g: &Permutation, group: &[Permutation]) -> usize {
        group
            .iter()
            .map(|k| k.op(g).op(&k.inverse()))
            .collect::<HashSet<_>>()
            .len()
    }

    #[test]
    fn class_sizes_in_a5() {
        assert_eq!(
            class_size_perm(&[3, 1, 1], 5, true).unwrap(),
            BigUint::from(20u32)
        );
        assert_eq!(
            class_size_perm(&[5], 5, true).unwrap(),
            BigUint::from(12u32)
        );
        assert_eq!(class_size_perm(&[1; 5], 5, true).unwrap(), BigUint::one());
        assert!(class_size_perm(&[2, 1, 1, 1], 5, true).is_err());
        let a5 = all_even_permutations(5);
        let five = Permutation::from_cycles(5, &[&[0, 1, 2, 3, 4]]).unwrap();
        assert_eq!(brute_class_size(&five, &a5), 12);
    }

    #[test]
    fn class_sizes_match_brute_force_small() {
        for n in 1..=6 {
            let sym = all_permutations(n);
            let alt = all_even_permutations(n);
            for g in &sym {
                let ct = g.cycle_type();
                assert_eq!(
                    class_size_perm(&ct, n, false).unwrap(),
                    BigUint::from(brute_class_size(g, &sym))
                );
                if g.is_even() {
                    assert_eq!(
                        class_size_perm(&ct, n, true).unwrap(),
                        BigUint::from(brute_class_size(g, &alt))
                    );
                }
            }
        }
    }

    #[test]
    fn class_size_matrix_examples() {
        let f5 = Field::of_order(5).unwrap();
        let d = ClassicalElement::new(
            Matrix::from_ints(&f5, 2, 2, &[1, 0, 0, 2]),
            GroupTag::Gl,
            None,
        )
        .unwrap();
        assert_eq!(
            class_size_matrix(&d, CLASS_SIZE_BUDGET).unwrap(),
            BigUint::from(30u32)
        );
        let f3 = Field::of_order(3).unwrap();
        let u = ClassicalElement::new(
            Matrix::from_ints(&f3, 2, 2, &[1, 1, 0, 1]),
            GroupTag::Sl,
            None,
        )
        .unwrap();
        assert_eq!(
            class_size_matrix(&u, CLASS_SIZE_BUDGET).unwrap(),
            BigUint::from(4u32)
        );
        let id = ClassicalElement::identity(&f3, 3, GroupTag::Gl);
        assert_eq!(
            class_size_matrix(&id, CLASS_SIZE_BUDGET).unwrap(),
            BigUint::one()
        );
        assert!(matches!(
            class_size_matrix(&id, 10),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn psl_class_sizes_match_brute_force() {
        for q in [3u64, 5, 7] {
            let f = Field::of_order(q).unwrap();
            let group = enumerate_psl(&f, 2, 1 << 20).unwrap();
            for g in &group {
                let brute: HashSet<ProjectiveMatrix> = group
                    .iter()
                    .map(|k| k.op(g).op(&GroupElement::inverse(k)))
                    .collect();
                let el = ClassicalElement::new(g.matrix().clone(), GroupTag::PslRep, None).unwrap();
                assert_eq!(
                    class_size_matrix(&el, CLASS_SIZE_BUDGET).unwrap(),
                    BigUint::from(brute.len()),
                    "q={q} g={g:?}"
                );
            }
        }
        let f = Field::of_order(3).unwrap();
        let sl = enumerate_sl(&f, 2, 1 << 20).unwrap();
        for g in &sl {
            let brute: HashSet<Matrix> = sl
                .iter()
                .map(|k| k.op(g).op(&GroupElement::inverse(k)))
                .collect();
            let el = ClassicalElement::new(g.clone(), GroupTag::Sl, None).unwrap();
            assert_eq!(
                class_size_matrix(&el, CLASS_SIZE_BUDGET).unwrap(),
                BigUint::from(brute.len())
            );
        }
    }

    #[test]
    fn conjugacy_examples() {
        let id = Permutation::identity(5);
        let c = Permutation::from_cycles(5, &[&[0, 1, 2]]).unwrap();
        let dt = Permutation::from_cycles(5, &[&[0, 1], &[2, 3]]).unwrap();
        assert_eq!(conjugacy_distance_perm(&c, &c, true).unwrap(), 0.0);
        let d = conjugacy_distance_perm(&c, &id, true).unwrap();
        assert!((d - 20f64.ln() / 60f64.ln()).abs() < 1e-12);
        assert!((d - 0.7317).abs() < 1e-4);
        let d = conjugacy_distance_perm(&dt, &id, true).unwrap();
        assert!((d - 0.6614).abs() < 1e-4);
        assert!(conjugacy_distance_perm(
            &Permutation::identity(4),
            &Permutation::identity(4),
            true
        )
        .is_err());
    }

    #[test]
    fn big_logs() {
        let x = factorial(1000);
        let direct: f64 = (1..=1000).map(|k| (k as f64).ln()).sum();
        assert!((ln_big(&x) - direct).abs() / direct < 1e-12);
    }

    #[test]
    fn significant_digits() {
        assert_eq!(format_significant(0.5, 12), "0.500000000000");
        assert_eq!(
            format_significant(20f64.ln() / 60f64.ln(), 12),
            "0.731675663352"
        );
        assert_eq!(format_significant(1.0, 12), "1.00000000000");
        assert_eq!(format_significant(0.0, 12), "0");
        assert_eq!(format_significant(0.99999999999999, 12), "1.00000000000");
        assert_eq!(MetricValue::Exact(r(3, 5)).to_string(), "3/5");
    }

    #[test]
    fn span_enumeration_covers_extension_multiples() {
        let f = Field::of_order(4).unwrap();
        let basis = vec![
            Matrix::identity(&f, 2),
            Matrix::from_ints(&f, 2, 2, &[0, 1, 0, 0]),
        ];
        let mut seen = HashSet::new();
        for_each_in_span(&basis, &basis[0], |m| {
            seen.insert(m.clone());
        });
        assert_eq!(seen.len(), 16);
    }
}
