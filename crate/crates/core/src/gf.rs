//! Exact arithmetic in the finite fields GF(p) and GF(p^e).
//!
//! A field is described by a [`FieldSpec`] (characteristic, degree and a monic
//! irreducible modulus) and used through a [`Field`] handle, which owns the
//! lookup tables and is cheap to clone. Elements are plain [`FieldElement`]
//! values: the coefficient vector `(c0, ..., c_{e-1})` packed as the base-`p`
//! integer `c0 + c1 p + ... + c_{e-1} p^{e-1}`, so equality of elements is
//! equality of coefficient vectors.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::Poly;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 31;

/// Fields up to this order get exp/log tables.
const TABLE_LIMIT: u64 = 1 << 16;

/// Extension fields up to this order also get a full addition table.
const ADD_TABLE_LIMIT: u64 = 1 << 8;

/// Deterministic primality test by trial division (inputs stay below 2^32).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime divisors of `n`, ascending.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Writes `q` as `p^e` if it is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let ps = prime_divisors(q);
    if ps.len() != 1 {
        return None;
    }
    let p = ps[0];
    let mut e = 0;
    let mut r = q;
    while r > 1 {
        r /= p;
        e += 1;
    }
    Some((p, e))
}

/// Characteristic, degree and modulus of a finite field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u32,
    e: u32,
    /// Monic modulus, constant term first, length `e + 1`.
    modulus: Vec<u32>,
}

impl FieldSpec {
    /// Validates `p` and the modulus (`c0, ..., ce`, monic, irreducible over GF(p)).
    pub fn new(p: u64, modulus: Vec<u32>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if modulus.len() < 2 {
            return Err(Error::InvalidModulus("degree must be at least 1".into()));
        }
        if modulus.iter().any(|&c| u64::from(c) >= p) {
            return Err(Error::InvalidModulus(format!(
                "coefficients must lie in [0, {p})"
            )));
        }
        if *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidModulus("modulus must be monic".into()));
        }
        let e = (modulus.len() - 1) as u32;
        checked_order(p, e)?;
        let base = Field::prime(p)?;
        let f = Poly::from_indices(&modulus);
        if !f.is_irreducible(&base) {
            return Err(Error::InvalidModulus(format!(
                "{} is reducible over GF({p})",
                f.display(&base)
            )));
        }
        Ok(FieldSpec {
            p: p as u32,
            e,
            modulus,
        })
    }

    /// GF(p) with the modulus `t`.
    pub fn prime(p: u64) -> Result<Self> {
        FieldSpec::new(p, vec![0, 1])
    }

    /// GF(p^e) with the lexicographically smallest irreducible modulus.
    pub fn with_degree(p: u64, e: u32) -> Result<Self> {
        let modulus = find_irreducible(p, e)?;
        Ok(FieldSpec {
            p: p as u32,
            e,
            modulus,
        })
    }

    /// GF(q) for a prime power `q`, default modulus.
    pub fn from_order(q: u64) -> Result<Self> {
        let (p, e) =
            prime_power(q).ok_or_else(|| Error::parse(format!("{q} is not a prime power")))?;
        FieldSpec::with_degree(p, e)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn order(&self) -> u64 {
        u64::from(self.p).pow(self.e)
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Parses `"p^e:c0,...,ce"`; a bare prime power `"q"` selects the default modulus.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        match text.split_once(':') {
            None => {
                let q: u64 = text
                    .parse()
                    .map_err(|_| Error::parse(format!("bad field order {text:?}")))?;
                FieldSpec::from_order(q)
            }
            Some((head, coeffs)) => {
                let (p, e) = match head.split_once('^') {
                    Some((p, e)) => (p.trim(), e.trim()),
                    None => (head.trim(), "1"),
                };
                let p: u64 = p
                    .parse()
                    .map_err(|_| Error::parse(format!("bad prime {p:?}")))?;
                let e: usize = e
                    .parse()
                    .map_err(|_| Error::parse(format!("bad degree {e:?}")))?;
                let modulus = coeffs
                    .split(',')
                    .map(|c| {
                        c.trim()
                            .parse::<u32>()
                            .map_err(|_| Error::parse(format!("bad coefficient {c:?}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                if modulus.len() != e + 1 {
                    return Err(Error::parse(format!(
                        "degree {e} needs {} modulus coefficients, got {}",
                        e + 1,
                        modulus.len()
                    )));
                }
                FieldSpec::new(p, modulus)
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}:", self.p, self.e)?;
        for (i, c) in self.modulus.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

fn checked_order(p: u64, e: u32) -> Result<u64> {
    let mut q: u64 = 1;
    for _ in 0..e {
        q = q.saturating_mul(p);
        if q > MAX_ORDER {
            return Err(Error::FieldTooLarge(q));
        }
    }
    Ok(q)
}

/// Lexicographically smallest monic irreducible polynomial of degree `e` over GF(p).
///
/// Candidates `t^e + c_{e-1} t^{e-1} + ... + c0` are ordered by the integer
/// `c0 + c1 p + ... + c_{e-1} p^{e-1}`.
pub fn find_irreducible(p: u64, e: u32) -> Result<Vec<u32>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if e == 0 {
        return Err(Error::precondition("extension degree must be at least 1"));
    }
    let count = checked_order(p, e)?;
    let base = Field::prime(p)?;
    for index in 0..count {
        let mut coeffs = digits(index, p, e as usize);
        coeffs.push(1);
        if Poly::from_indices(&coeffs).is_irreducible(&base) {
            return Ok(coeffs);
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn digits(mut value: u64, base: u64, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((value % base) as u32);
        value /= base;
    }
    out
}

/// An element of a finite field, packed as a base-`p` integer.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(pub(crate) u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// The packed index in `[0, q)`; also the enumeration order.
    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

struct Inner {
    spec: FieldSpec,
    q: u32,
    tables: Option<Tables>,
    add: Option<Vec<u32>>,
    generator: FieldElement,
}

/// Handle to a finite field together with its arithmetic tables.
#[derive(Clone)]
pub struct Field {
    inner: Arc<Inner>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.spec == other.inner.spec
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})[{}]", self.order(), self.inner.spec)
    }
}

impl Field {
    pub fn new(spec: FieldSpec) -> Field {
        let q = spec.order() as u32;
        let mut inner = Inner {
            spec,
            q,
            tables: None,
            add: None,
            generator: FieldElement::ONE,
        };
        if inner.spec.e > 1 && u64::from(q) <= ADD_TABLE_LIMIT {
            let mut add = vec![0u32; (q as usize) * (q as usize)];
            for a in 0..q {
                for b in 0..q {
                    add[(a * q + b) as usize] = digit_add(&inner.spec, a, b);
                }
            }
            inner.add = Some(add);
        }
        let mut field = Field {
            inner: Arc::new(inner),
        };
        let generator = field.search_generator();
        let tables = if u64::from(q) <= TABLE_LIMIT {
            let n = (q - 1) as usize;
            let mut exp = vec![0u32; 2 * n.max(1)];
            let mut log = vec![0u32; q as usize];
            let mut cur = FieldElement::ONE;
            for i in 0..n {
                exp[i] = cur.0;
                exp[i + n] = cur.0;
                log[cur.0 as usize] = i as u32;
                cur = field.mul_slow(cur, generator);
            }
            Some(Tables { exp, log })
        } else {
            None
        };
        let inner = Arc::get_mut(&mut field.inner).expect("fresh handle");
        inner.tables = tables;
        inner.generator = generator;
        field
    }

    /// GF(p) with the trivial modulus `t`.
    pub fn prime(p: u64) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        checked_order(p, 1)?;
        Ok(Field::new(FieldSpec {
            p: p as u32,
            e: 1,
            modulus: vec![0, 1],
        }))
    }

    /// GF(q) with the default modulus.
    pub fn of_order(q: u64) -> Result<Field> {
        Ok(Field::new(FieldSpec::from_order(q)?))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.inner.spec
    }

    pub fn characteristic(&self) -> u32 {
        self.inner.spec.p
    }

    pub fn degree(&self) -> u32 {
        self.inner.spec.e
    }

    pub fn order(&self) -> u64 {
        u64::from(self.inner.q)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// A generator of the multiplicative group.
    pub fn primitive_element(&self) -> FieldElement {
        self.inner.generator
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElement {
        let p = i64::from(self.inner.spec.p);
        FieldElement(n.rem_euclid(p) as u32)
    }

    /// Element with packed index `i`; `i` must be below `q`.
    pub fn element(&self, i: u32) -> Result<FieldElement> {
        if i >= self.inner.q {
            return Err(Error::parse(format!(
                "element index {i} outside GF({})",
                self.inner.q
            )));
        }
        Ok(FieldElement(i))
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement> {
        let spec = &self.inner.spec;
        if coeffs.len() > spec.e as usize {
            return Err(Error::parse(format!(
                "element has {} coefficients but the field degree is {}",
                coeffs.len(),
                spec.e
            )));
        }
        let mut idx: u64 = 0;
        for &c in coeffs.iter().rev() {
            if c >= spec.p {
                return Err(Error::parse(format!(
                    "coefficient {c} outside [0, {})",
                    spec.p
                )));
            }
            idx = idx * u64::from(spec.p) + u64::from(c);
        }
        Ok(FieldElement(idx as u32))
    }

    pub fn coeffs(&self, a: FieldElement) -> Vec<u32> {
        let spec = &self.inner.spec;
        digits(u64::from(a.0), u64::from(spec.p), spec.e as usize)
    }

    /// All `q` elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.inner.q).map(FieldElement)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (1..self.inner.q).map(FieldElement)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let spec = &self.inner.spec;
        if spec.e == 1 {
            let s = u64::from(a.0) + u64::from(b.0);
            let p = u64::from(spec.p);
            return FieldElement(if s >= p { s - p } else { s } as u32);
        }
        if spec.p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        if let Some(add) = &self.inner.add {
            return FieldElement(add[(a.0 * self.inner.q + b.0) as usize]);
        }
        FieldElement(digit_add(spec, a.0, b.0))
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let spec = &self.inner.spec;
        if a.0 == 0 || spec.p == 2 {
            return a;
        }
        if spec.e == 1 {
            return FieldElement(spec.p - a.0);
        }
        let p = u64::from(spec.p);
        let mut rest = u64::from(a.0);
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..spec.e {
            let d = rest % p;
            rest /= p;
            out += ((p - d) % p) * place;
            place *= p;
        }
        FieldElement(out as u32)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        if let Some(t) = &self.inner.tables {
            let i = t.log[a.0 as usize] + t.log[b.0 as usize];
            return FieldElement(t.exp[i as usize]);
        }
        self.mul_slow(a, b)
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::ZeroInverse);
        }
        if let Some(t) = &self.inner.tables {
            let n = self.inner.q - 1;
            let l = t.log[a.0 as usize];
            return Ok(FieldElement(t.exp[((n - l) % n) as usize]));
        }
        Ok(self.pow(a, u64::from(self.inner.q) - 2))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, mut exp: u64) -> FieldElement {
        if let Some(t) = &self.inner.tables {
            if exp == 0 {
                return FieldElement::ONE;
            }
            if a.0 == 0 {
                return FieldElement::ZERO;
            }
            let n = u64::from(self.inner.q - 1);
            let l = (u64::from(t.log[a.0 as usize]) * (exp % n)) % n;
            return FieldElement(t.exp[l as usize]);
        }
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: FieldElement) -> Result<u64> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let n = self.order() - 1;
        let mut ord = n;
        for r in prime_divisors(n) {
            while ord.is_multiple_of(r) && self.pow(a, ord / r) == FieldElement::ONE {
                ord /= r;
            }
        }
        Ok(ord)
    }

    /// True iff `a` is a square in the field.
    pub fn is_square(&self, a: FieldElement) -> bool {
        if a.is_zero() || self.characteristic() == 2 {
            return true;
        }
        self.pow(a, (self.order() - 1) / 2) == FieldElement::ONE
    }

    /// Parses comma-separated coefficients `"c0,c1,..."` (missing high coefficients are zero).
    pub fn parse_element(&self, text: &str) -> Result<FieldElement> {
        let coeffs = text
            .trim()
            .trim_start_matches('[')
            .trim_end_matches(']')
            .split(',')
            .map(|c| {
                c.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::parse(format!("bad coefficient {c:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.from_coeffs(&coeffs)
    }

    /// Comma-separated coefficients, constant term first.
    pub fn format_element(&self, a: FieldElement) -> String {
        self.coeffs(a)
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }

    fn mul_slow(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let spec = &self.inner.spec;
        let p = u64::from(spec.p);
        if spec.e == 1 {
            return FieldElement(((u64::from(a.0) * u64::from(b.0)) % p) as u32);
        }
        let e = spec.e as usize;
        let x = digits(u64::from(a.0), p, e);
        let y = digits(u64::from(b.0), p, e);
        let mut prod = vec![0u64; 2 * e - 1];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + u64::from(xi) * u64::from(yj)) % p;
            }
        }
        for d in (e..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (k, &m) in spec.modulus[..e].iter().enumerate() {
                let idx = d - e + k;
                prod[idx] = (prod[idx] + (p - c) * u64::from(m)) % p;
            }
        }
        let mut idx = 0u64;
        for &c in prod[..e].iter().rev() {
            idx = idx * p + c;
        }
        FieldElement(idx as u32)
    }

    fn search_generator(&self) -> FieldElement {
        let n = self.order() - 1;
        if n <= 1 {
            return FieldElement::ONE;
        }
        let primes = prime_divisors(n);
        for g in 2..self.inner.q {
            let g = FieldElement(g);
            if primes
                .iter()
                .all(|&r| self.pow_slow(g, n / r) != FieldElement::ONE)
            {
                return g;
            }
        }
        unreachable!("the multiplicative group of a finite field is cyclic")
    }

    fn pow_slow(&self, a: FieldElement, mut exp: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            exp >>= 1;
        }
        acc
    }
}

fn digit_add(spec: &FieldSpec, a: u32, b: u32) -> u32 {
    let p = u64::from(spec.p);
    let (mut x, mut y) = (u64::from(a), u64::from(b));
    let mut out = 0u64;
    let mut place = 1u64;
    for _ in 0..spec.e {
        out += ((x % p + y % p) % p) * place;
        x /= p;
        y /= p;
        place *= p;
    }
    out as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u64) -> Field {
        Field::of_order(q).unwrap()
    }

    #[test]
    fn prime_field_examples() {
        let f5 = gf(5);
        assert_eq!(f5.add(f5.from_int(2), f5.from_int(4)), f5.from_int(1));
        let f7 = gf(7);
        assert_eq!(f7.inv(f7.from_int(3)).unwrap(), f7.from_int(5));
        assert_eq!(f7.inv(f7.zero()), Err(Error::ZeroInverse));
    }

    #[test]
    fn gf4_multiplication_reduces_by_modulus() {
        let spec = FieldSpec::parse("2^2:1,1,1").unwrap();
        let f = Field::new(spec);
        let t = f.from_coeffs(&[0, 1]).unwrap();
        let t_plus_1 = f.from_coeffs(&[1, 1]).unwrap();
        assert_eq!(f.mul(t, t), t_plus_1);
    }

    #[test]
    fn smallest_irreducibles() {
        assert_eq!(find_irreducible(2, 1).unwrap(), vec![0, 1]);
        assert_eq!(find_irreducible(2, 2).unwrap(), vec![1, 1, 1]);
        assert_eq!(find_irreducible(3, 2).unwrap(), vec![1, 0, 1]);
    }

    #[test]
    fn exhaustive_quadratic_oracle_agrees() {
        // A monic quadratic is irreducible iff it has no root.
        for p in [2u64, 3, 5, 7] {
            let first = (0..p * p)
                .map(|idx| (idx % p, idx / p))
                .find(|&(c0, c1)| (0..p).all(|x| (x * x + c1 * x + c0) % p != 0))
                .map(|(c0, c1)| vec![c0 as u32, c1 as u32, 1]);
            assert_eq!(find_irreducible(p, 2).unwrap(), first.unwrap(), "p = {p}");
        }
    }

    #[test]
    fn rejects_bad_specs() {
        assert_eq!(FieldSpec::new(4, vec![0, 1]), Err(Error::NotPrime(4)));
        assert!(matches!(
            FieldSpec::new(2, vec![1, 0, 1]),
            Err(Error::InvalidModulus(_))
        ));
        assert!(matches!(
            FieldSpec::new(3, vec![1, 0, 2]),
            Err(Error::InvalidModulus(_))
        ));
        assert!(matches!(FieldSpec::from_order(12), Err(Error::Parse(_))));
        assert!(matches!(
            FieldSpec::from_order(1 << 32),
            Err(Error::FieldTooLarge(_))
        ));
    }

    #[test]
    fn text_round_trip() {
        let spec = FieldSpec::with_degree(3, 2).unwrap();
        assert_eq!(spec.to_string(), "3^2:1,0,1");
        assert_eq!(FieldSpec::parse("3^2:1,0,1").unwrap(), spec);
        assert_eq!(FieldSpec::parse("9").unwrap(), spec);
        let f = Field::new(spec);
        let a = f.parse_element("2,1").unwrap();
        assert_eq!(f.format_element(a), "2,1");
        assert_eq!(f.coeffs(a), vec![2, 1]);
    }

    fn check_axioms_exhaustive(f: &Field) {
        let els: Vec<_> = f.elements().collect();
        assert_eq!(els.len() as u64, f.order());
        let p = u64::from(f.characteristic());
        for &a in &els {
            assert_eq!(f.add(a, f.neg(a)), f.zero());
            if !a.is_zero() {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
            }
            for &b in &els {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                assert_eq!(f.pow(f.add(a, b), p), f.add(f.pow(a, p), f.pow(b, p)));
                for &c in &els {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn axioms_hold_exhaustively_for_small_fields() {
        for q in [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 49] {
            check_axioms_exhaustive(&gf(q));
        }
    }

    #[test]
    fn table_and_slow_paths_agree() {
        for q in [4u64, 9, 25, 27, 64, 81, 125, 243, 256] {
            let f = gf(q);
            for a in f.elements().step_by(3) {
                for b in f.elements().step_by(5) {
                    assert_eq!(f.mul(a, b), f.mul_slow(a, b));
                    assert_eq!(
                        f.add(a, b).index(),
                        digit_add(f.spec(), a.index(), b.index())
                    );
                }
            }
        }
    }

    #[test]
    fn multiplicative_group_is_cyclic() {
        for q in [
            2u64, 3, 4, 5, 7, 8, 9, 16, 25, 27, 32, 49, 81, 121, 125, 128, 243, 256, 343, 1024,
            2187, 4096, 6561, 9973,
        ] {
            let f = gf(q);
            let g = f.primitive_element();
            assert_eq!(f.multiplicative_order(g).unwrap(), q - 1, "q = {q}");
            assert_eq!(f.nonzero().count() as u64, q - 1);
        }
    }

    #[test]
    fn large_field_uses_polynomial_multiplication() {
        // 3^11 > 2^16, so no tables are built.
        let f = gf(177_147);
        let a = f.from_coeffs(&[1, 2, 0, 1]).unwrap();
        let b = f.from_coeffs(&[2, 2, 1, 0, 0, 0, 0, 0, 0, 0, 1]).unwrap();
        assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
        assert_eq!(f.mul(f.mul(a, b), f.inv(b).unwrap()), a);
        assert_eq!(f.pow(a, f.order() - 1), f.one());
    }
}
