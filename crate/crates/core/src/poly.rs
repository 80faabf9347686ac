//! Dense univariate polynomials over a [`Field`], with the irreducibility test
//! used to validate field moduli and the factorization of squarefree
//! polynomials (distinct-degree, then equal-degree splitting).

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::gf::{prime_divisors, Field, FieldElement};

/// Coefficients are stored constant term first, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<FieldElement>,
}

impl Poly {
    pub fn from_coeffs(mut coeffs: Vec<FieldElement>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// Builds a polynomial from packed element indices without range checks.
    pub(crate) fn from_indices(indices: &[u32]) -> Poly {
        Poly::from_coeffs(indices.iter().map(|&i| FieldElement(i)).collect())
    }

    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(FieldElement::ONE)
    }

    pub fn constant(c: FieldElement) -> Poly {
        Poly::from_coeffs(vec![c])
    }

    /// The indeterminate `t`.
    pub fn x() -> Poly {
        Poly::monomial(FieldElement::ONE, 1)
    }

    pub fn monomial(c: FieldElement, degree: usize) -> Poly {
        let mut coeffs = vec![FieldElement::ZERO; degree + 1];
        coeffs[degree] = c;
        Poly::from_coeffs(coeffs)
    }

    /// `t^k - alpha`.
    pub fn binomial(f: &Field, k: usize, alpha: FieldElement) -> Poly {
        let mut coeffs = vec![FieldElement::ZERO; k + 1];
        coeffs[k] = FieldElement::ONE;
        coeffs[0] = f.sub(coeffs[0], alpha);
        Poly::from_coeffs(coeffs)
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> FieldElement {
        self.coeffs.last().copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn add(&self, other: &Poly, f: &Field) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::from_coeffs(
            (0..n)
                .map(|i| f.add(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Poly, f: &Field) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::from_coeffs(
            (0..n)
                .map(|i| f.sub(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn scale(&self, c: FieldElement, f: &Field) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Poly, f: &Field) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![FieldElement::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::from_coeffs(out)
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn divrem(&self, divisor: &Poly, f: &Field) -> (Poly, Poly) {
        let d = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = f
            .inv(divisor.leading())
            .expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![FieldElement::ZERO; rem.len() - d];
        for i in (d..rem.len()).rev() {
            let c = rem[i];
            if c.is_zero() {
                continue;
            }
            let factor = f.mul(c, lead_inv);
            quot[i - d] = factor;
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                rem[i - d + j] = f.sub(rem[i - d + j], f.mul(factor, b));
            }
        }
        rem.truncate(d);
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    pub fn rem(&self, divisor: &Poly, f: &Field) -> Poly {
        self.divrem(divisor, f).1
    }

    pub fn monic(&self, f: &Field) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let inv = f.inv(self.leading()).expect("nonzero leading coefficient");
        self.scale(inv, f)
    }

    /// Monic greatest common divisor (zero iff both inputs are zero).
    pub fn gcd(&self, other: &Poly, f: &Field) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b, f);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    pub fn eval(&self, x: FieldElement, f: &Field) -> FieldElement {
        self.coeffs
            .iter()
            .rev()
            .fold(FieldElement::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// `self^exp mod modulus`.
    pub fn powmod(&self, exp: &BigUint, modulus: &Poly, f: &Field) -> Poly {
        let base = self.rem(modulus, f);
        let mut acc = Poly::one().rem(modulus, f);
        for i in (0..exp.bits()).rev() {
            acc = acc.mul(&acc, f).rem(modulus, f);
            if exp.bit(i) {
                acc = acc.mul(&base, f).rem(modulus, f);
            }
        }
        acc
    }

    pub fn is_irreducible(&self, f: &Field) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        if n <= 3 {
            return f.elements().all(|x| !self.eval(x, f).is_zero());
        }
        let q = BigUint::from(f.order());
        let x = Poly::x();
        // frob[i] = t^(q^i) mod self
        let mut frob = vec![x.rem(self, f)];
        for i in 0..n {
            let next = frob[i].powmod(&q, self, f);
            frob.push(next);
        }
        if frob[n] != frob[0] {
            return false;
        }
        prime_divisors(n as u64).into_iter().all(|r| {
            let g = frob[n / r as usize].sub(&x, f).gcd(self, f);
            g.degree() == Some(0)
        })
    }

    /// Monic irreducible factors of a squarefree polynomial, sorted by degree
    /// and then by coefficients.
    pub fn factor_squarefree(&self, f: &Field) -> Vec<Poly> {
        let mut out = Vec::new();
        for (part, d) in self.distinct_degree(f) {
            equal_degree_split(part, d, f, &mut out);
        }
        out.sort_by(|a, b| {
            a.degree()
                .cmp(&b.degree())
                .then_with(|| a.coeffs.iter().rev().cmp(b.coeffs.iter().rev()))
        });
        out
    }

    /// Splits a squarefree polynomial into products of irreducibles of equal degree.
    fn distinct_degree(&self, f: &Field) -> Vec<(Poly, usize)> {
        let q = BigUint::from(f.order());
        let x = Poly::x();
        let mut rest = self.monic(f);
        let mut h = x.rem(&rest, f);
        let mut d = 1;
        let mut out = Vec::new();
        while rest.degree().unwrap_or(0) >= 2 * d {
            h = h.powmod(&q, &rest, f);
            let g = h.sub(&x, f).gcd(&rest, f);
            if g.degree().unwrap_or(0) > 0 {
                rest = rest.divrem(&g, f).0;
                h = h.rem(&rest, f);
                out.push((g, d));
            }
            d += 1;
        }
        if let Some(deg) = rest.degree().filter(|&deg| deg > 0) {
            out.push((rest, deg));
        }
        out
    }

    pub fn display(&self, f: &Field) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let coeff = if f.degree() == 1 {
                f.format_element(c)
            } else {
                format!("[{}]", f.format_element(c))
            };
            let term = match (i, c == FieldElement::ONE) {
                (0, _) => coeff,
                (1, true) => "t".into(),
                (1, false) => format!("{coeff}t"),
                (_, true) => format!("t^{i}"),
                (_, false) => format!("{coeff}t^{i}"),
            };
            terms.push(term);
        }
        terms.join(" + ")
    }
}

/// Cantor–Zassenhaus splitting with candidates enumerated deterministically.
fn equal_degree_split(g: Poly, d: usize, f: &Field, out: &mut Vec<Poly>) {
    let n = g.degree().unwrap_or(0);
    if n == 0 {
        return;
    }
    if n == d {
        out.push(g.monic(f));
        return;
    }
    let q = f.order();
    let odd = f.characteristic() != 2;
    let exp = if odd {
        (BigUint::from(q).pow(d as u32) - BigUint::one()) >> 1
    } else {
        BigUint::zero()
    };
    let trace_terms = f.degree() as usize * d;
    let mut index: u64 = q;
    loop {
        let a = candidate(index, n, q);
        index += 1;
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if odd {
            a.powmod(&exp, &g, f).sub(&Poly::one(), f)
        } else {
            let mut term = a.rem(&g, f);
            let mut sum = term.clone();
            for _ in 1..trace_terms {
                term = term.mul(&term, f).rem(&g, f);
                sum = sum.add(&term, f);
            }
            sum
        };
        let h = b.gcd(&g, f);
        let deg = h.degree().unwrap_or(0);
        if deg > 0 && deg < n {
            let rest = g.divrem(&h, f).0;
            equal_degree_split(h, d, f, out);
            equal_degree_split(rest, d, f, out);
            return;
        }
    }
}

fn candidate(mut index: u64, len: usize, q: u64) -> Poly {
    let mut coeffs = Vec::with_capacity(len);
    for _ in 0..len {
        coeffs.push(FieldElement((index % q) as u32));
        index /= q;
    }
    Poly::from_coeffs(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(f: &Field, c: &[i64]) -> Poly {
        Poly::from_coeffs(c.iter().map(|&v| f.from_int(v)).collect())
    }

    #[test]
    fn division_identity() {
        let f = Field::of_order(7).unwrap();
        let a = poly(&f, &[3, 0, 5, 1, 6]);
        let b = poly(&f, &[1, 2, 3]);
        let (q, r) = a.divrem(&b, &f);
        assert_eq!(q.mul(&b, &f).add(&r, &f), a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn binomial_factorizations() {
        let f7 = Field::of_order(7).unwrap();
        // t^2 - 1 = (t - 1)(t + 1)
        let fs = Poly::binomial(&f7, 2, f7.one()).factor_squarefree(&f7);
        assert_eq!(fs, vec![poly(&f7, &[1, 1]), poly(&f7, &[6, 1])]);

        // 2 is not a square mod 5, so t^2 - 2 is irreducible.
        let f5 = Field::of_order(5).unwrap();
        let g = Poly::binomial(&f5, 2, f5.from_int(2));
        assert!(g.is_irreducible(&f5));
        assert_eq!(g.factor_squarefree(&f5), vec![g.clone()]);
    }

    #[test]
    fn factor_products_recover_input() {
        for q in [2u64, 3, 4, 5, 8, 9, 25] {
            let f = Field::of_order(q).unwrap();
            for k in 1..=12usize {
                if (k as u64).is_multiple_of(u64::from(f.characteristic())) {
                    continue;
                }
                for alpha in f.nonzero().take(4) {
                    let target = Poly::binomial(&f, k, alpha);
                    let factors = target.factor_squarefree(&f);
                    let product = factors.iter().fold(Poly::one(), |acc, p| acc.mul(p, &f));
                    assert_eq!(product, target, "q={q} k={k}");
                    for p in &factors {
                        assert!(p.is_irreducible(&f), "q={q} k={k} factor {}", p.display(&f));
                    }
                }
            }
        }
    }

    #[test]
    fn irreducible_count_matches_necklace_formula() {
        // Number of monic irreducibles of degree 4 over GF(2) is (16 - 4) / 4 = 3,
        // over GF(3) it is (81 - 9) / 4 = 18.
        for (p, expected) in [(2u64, 3usize), (3, 18)] {
            let f = Field::prime(p).unwrap();
            let count = (0..p.pow(4))
                .filter(|&idx| {
                    let mut c: Vec<u32> = (0..4).map(|i| ((idx / p.pow(i)) % p) as u32).collect();
                    c.push(1);
                    Poly::from_indices(&c).is_irreducible(&f)
                })
                .count();
            assert_eq!(count, expected);
        }
    }
}
