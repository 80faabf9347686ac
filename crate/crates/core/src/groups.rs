//! Group elements: permutations of `{0, ..., n-1}` and invertible matrices
//! tagged with the classical group they belong to.
//!
//! Composition of permutations is right-to-left: `sigma.compose(tau)` maps
//! `i` to `sigma(tau(i))`. Alternating groups are represented inside the
//! symmetric group and checked with [`Permutation::is_even`].

use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement};
use crate::linalg::Matrix;

/// Seeded ChaCha8 generator; all randomness in the crate flows through this.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent ChaCha8 stream `stream` under `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Minimal interface shared by permutations and matrix-group elements.
pub trait GroupElement: Clone + Eq + Hash {
    fn op(&self, other: &Self) -> Self;
    fn inverse(&self) -> Self;

    /// `a^-1 b^-1 a b`.
    fn commutator(a: &Self, b: &Self) -> Self {
        a.inverse().op(&b.inverse()).op(a).op(b)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.images.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl Permutation {
    pub fn new(images: Vec<u32>) -> Result<Permutation> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(Error::precondition(format!(
                    "{images:?} is not a bijection"
                )));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Permutation {
        Permutation {
            images: (0..n as u32).collect(),
        }
    }

    /// Builds a permutation from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Permutation> {
        let mut images: Vec<u32> = (0..n as u32).collect();
        let mut used = vec![false; n];
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                if a >= n || used[a] {
                    return Err(Error::precondition(format!(
                        "cycles {cycles:?} are not disjoint in S_{n}"
                    )));
                }
                used[a] = true;
                images[a] = cycle[(k + 1) % cycle.len()] as u32;
            }
        }
        Ok(Permutation { images })
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Permutation {
        let mut images: Vec<u32> = (0..n as u32).collect();
        images.swap(a, b);
        Permutation { images }
    }

    /// Parses a one-line image list such as `"3,0,1,2"`.
    pub fn parse(text: &str) -> Result<Permutation> {
        let images = text
            .trim()
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::parse(format!("bad image {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::new(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DimensionMismatch(format!(
                "S_{} vs S_{}",
                self.degree(),
                other.degree()
            )));
        }
        Ok(Permutation {
            images: other
                .images
                .iter()
                .map(|&i| self.images[i as usize])
                .collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u32;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &x)| i == x as usize)
    }

    /// Nontrivial cycles, each starting at its smallest point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut cur = self.apply(start);
            while cur != start {
                seen[cur] = true;
                cycle.push(cur);
                cur = self.apply(cur);
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Cycle lengths including fixed points, in descending order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut ct: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        ct.extend(std::iter::repeat_n(1, self.fixed_points()));
        ct.sort_unstable_by(|a, b| b.cmp(a));
        ct
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.degree()).filter(|&i| self.apply(i) != i).collect()
    }

    pub fn fixed_points(&self) -> usize {
        self.images
            .iter()
            .enumerate()
            .filter(|(i, &x)| *i == x as usize)
            .count()
    }

    pub fn sign(&self) -> i8 {
        let transpositions: usize = self.cycles().iter().map(|c| c.len() - 1).sum();
        if transpositions.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn is_even(&self) -> bool {
        self.sign() == 1
    }

    /// Order as the lcm of the cycle lengths.
    pub fn order(&self) -> BigUint {
        self.cycles()
            .iter()
            .fold(BigUint::one(), |acc, c| acc.lcm(&BigUint::from(c.len())))
    }
}

impl GroupElement for Permutation {
    fn op(&self, other: &Self) -> Self {
        self.compose(other).expect("equal degrees")
    }

    fn inverse(&self) -> Self {
        Permutation::inverse(self)
    }
}

/// Uniform random permutation of degree `n` (Fisher–Yates).
pub fn random_perm<R: Rng>(n: usize, rng: &mut R) -> Permutation {
    let mut images: Vec<u32> = (0..n as u32).collect();
    images.shuffle(rng);
    Permutation { images }
}

/// Uniform random even permutation: a uniform permutation, composed with
/// the transposition `(0 1)` when odd.
pub fn random_even_perm(n: usize, seed: u64) -> Result<Permutation> {
    random_even_perm_with(n, &mut seeded_rng(seed))
}

pub fn random_even_perm_with<R: Rng>(n: usize, rng: &mut R) -> Result<Permutation> {
    if n < 3 {
        return Err(Error::precondition("random_even_perm needs n >= 3"));
    }
    let sigma = random_perm(n, rng);
    if sigma.is_even() {
        Ok(sigma)
    } else {
        sigma.compose(&Permutation::transposition(n, 0, 1))
    }
}

/// All permutations of degree `n` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut cur: Vec<u32> = (0..n as u32).collect();
    let mut out = vec![Permutation {
        images: cur.clone(),
    }];
    loop {
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n)
            .rev()
            .find(|&j| cur[j] > cur[i - 1])
            .expect("successor exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(Permutation {
            images: cur.clone(),
        });
    }
}

pub fn all_even_permutations(n: usize) -> Vec<Permutation> {
    all_permutations(n)
        .into_iter()
        .filter(Permutation::is_even)
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupTag {
    Gl,
    Sl,
    Sp,
    /// A representative of an element of a projective group; equality is up to scalars.
    PslRep,
}

impl GroupTag {
    pub fn prefix(self) -> &'static str {
        match self {
            GroupTag::Gl => "GL",
            GroupTag::Sl => "SL",
            GroupTag::Sp => "SP",
            GroupTag::PslRep => "PSL",
        }
    }

    pub fn parse(text: &str) -> Result<GroupTag> {
        match text.trim().to_ascii_uppercase().as_str() {
            "GL" => Ok(GroupTag::Gl),
            "SL" => Ok(GroupTag::Sl),
            "SP" => Ok(GroupTag::Sp),
            "PSL" | "PSL_REP" => Ok(GroupTag::PslRep),
            other => Err(Error::parse(format!("unknown group tag {other:?}"))),
        }
    }
}

/// `[[0, I], [-I, 0]]` of size `n2` (even).
pub fn standard_symplectic_form(field: &Field, n2: usize) -> Matrix {
    assert!(n2.is_multiple_of(2), "symplectic forms need even dimension");
    let m = n2 / 2;
    Matrix::from_fn(field, n2, n2, |i, j| {
        if i < m && j == i + m {
            FieldElement::ONE
        } else if i >= m && j + m == i {
            field.neg(FieldElement::ONE)
        } else {
            FieldElement::ZERO
        }
    })
}

/// True iff `m^T j m = j`.
pub fn preserves_form(m: &Matrix, j: &Matrix) -> bool {
    m.transpose()
        .mul(j)
        .and_then(|t| t.mul(m))
        .is_ok_and(|t| t == *j)
}

fn is_alternating(j: &Matrix) -> bool {
    j.is_square()
        && (0..j.rows()).all(|i| j.get(i, i).is_zero())
        && j.transpose() == j.neg()
        && j.is_invertible()
}

/// True iff `a = c * b` for some nonzero scalar `c`.
pub fn projectively_equal(a: &Matrix, b: &Matrix) -> bool {
    if a.rows() != b.rows() || a.cols() != b.cols() || a.field() != b.field() {
        return false;
    }
    let f = a.field();
    let Some(k) = b.entries().iter().position(|x| !x.is_zero()) else {
        return a.is_zero();
    };
    if a.entries()[k].is_zero() {
        return false;
    }
    let c = f.div(a.entries()[k], b.entries()[k]).expect("nonzero");
    *a == b.scale(c)
}

/// The scalar multiple whose first nonzero entry is 1.
pub fn projective_normal_form(m: &Matrix) -> Matrix {
    match m.entries().iter().find(|x| !x.is_zero()) {
        Some(&lead) => m.scale(m.field().inv(lead).expect("nonzero")),
        None => m.clone(),
    }
}

#[derive(Clone, Debug)]
pub struct ClassicalElement {
    matrix: Matrix,
    tag: GroupTag,
    form: Option<Matrix>,
}

impl PartialEq for ClassicalElement {
    fn eq(&self, other: &Self) -> bool {
        if self.tag != other.tag {
            return false;
        }
        match self.tag {
            GroupTag::PslRep => projectively_equal(&self.matrix, &other.matrix),
            _ => self.matrix == other.matrix,
        }
    }
}

impl Eq for ClassicalElement {}

impl fmt::Display for ClassicalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.tag.prefix(), self.matrix)
    }
}

impl ClassicalElement {
    /// Checks invertibility and the membership conditions of `tag`.
    /// `Sp` takes the given alternating form, or the standard one when `form` is `None`.
    pub fn new(matrix: Matrix, tag: GroupTag, form: Option<Matrix>) -> Result<ClassicalElement> {
        if !matrix.is_square() || !matrix.is_invertible() {
            return Err(Error::precondition(
                "classical group elements must be invertible square matrices",
            ));
        }
        let f = matrix.field().clone();
        let form = match tag {
            GroupTag::Sp => {
                let j = match form {
                    Some(j) => j,
                    None if matrix.rows().is_multiple_of(2) => {
                        standard_symplectic_form(&f, matrix.rows())
                    }
                    None => return Err(Error::precondition("Sp needs even dimension")),
                };
                if j.rows() != matrix.rows() || !is_alternating(&j) {
                    return Err(Error::precondition(
                        "form must be an invertible alternating matrix",
                    ));
                }
                if !preserves_form(&matrix, &j) {
                    return Err(Error::precondition(
                        "matrix does not preserve the symplectic form",
                    ));
                }
                Some(j)
            }
            _ => None,
        };
        if tag == GroupTag::Sl && matrix.det()? != FieldElement::ONE {
            return Err(Error::precondition("SL elements must have determinant 1"));
        }
        Ok(ClassicalElement { matrix, tag, form })
    }

    pub fn identity(field: &Field, n: usize, tag: GroupTag) -> ClassicalElement {
        let form = (tag == GroupTag::Sp).then(|| standard_symplectic_form(field, n));
        ClassicalElement {
            matrix: Matrix::identity(field, n),
            tag,
            form,
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    pub fn tag(&self) -> GroupTag {
        self.tag
    }

    pub fn form(&self) -> Option<&Matrix> {
        self.form.as_ref()
    }

    pub fn field(&self) -> &Field {
        self.matrix.field()
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// The same matrix viewed up to scalars.
    pub fn to_projective(&self) -> ClassicalElement {
        ClassicalElement {
            matrix: self.matrix.clone(),
            tag: GroupTag::PslRep,
            form: None,
        }
    }

    pub fn mul(&self, other: &ClassicalElement) -> Result<ClassicalElement> {
        if self.tag != other.tag {
            return Err(Error::precondition("elements of different groups"));
        }
        Ok(ClassicalElement {
            matrix: self.matrix.mul(&other.matrix)?,
            tag: self.tag,
            form: self.form.clone(),
        })
    }

    pub fn inverse(&self) -> ClassicalElement {
        ClassicalElement {
            matrix: self.matrix.inverse().expect("invertible by construction"),
            tag: self.tag,
            form: self.form.clone(),
        }
    }

    /// Parses `"TAG:matrix"`, e.g. `"SL:1,1;0,1"`.
    pub fn parse(field: &Field, text: &str) -> Result<ClassicalElement> {
        let (tag, body) = text
            .split_once(':')
            .ok_or_else(|| Error::parse("expected TAG:matrix"))?;
        ClassicalElement::new(Matrix::parse(field, body)?, GroupTag::parse(tag)?, None)
    }
}

impl GroupElement for Matrix {
    fn op(&self, other: &Self) -> Self {
        self.mul(other).expect("compatible shapes")
    }

    fn inverse(&self) -> Self {
        Matrix::inverse(self).expect("group elements are invertible")
    }
}

/// A matrix up to nonzero scalars, stored in projective normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectiveMatrix(Matrix);

impl Hash for ProjectiveMatrix {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state);
    }
}

impl ProjectiveMatrix {
    pub fn new(m: &Matrix) -> ProjectiveMatrix {
        ProjectiveMatrix(projective_normal_form(m))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }
}

impl GroupElement for ProjectiveMatrix {
    fn op(&self, other: &Self) -> Self {
        ProjectiveMatrix::new(&self.0.mul(&other.0).expect("compatible shapes"))
    }

    fn inverse(&self) -> Self {
        ProjectiveMatrix::new(&self.0.inverse().expect("invertible"))
    }
}

pub fn random_matrix<R: Rng>(field: &Field, rows: usize, cols: usize, rng: &mut R) -> Matrix {
    let q = field.order() as u32;
    Matrix::from_fn(field, rows, cols, |_, _| {
        FieldElement(rng.random_range(0..q))
    })
}

pub fn random_element<R: Rng>(field: &Field, rng: &mut R) -> FieldElement {
    FieldElement(rng.random_range(0..field.order() as u32))
}

pub fn random_nonzero<R: Rng>(field: &Field, rng: &mut R) -> FieldElement {
    FieldElement(rng.random_range(1..field.order() as u32))
}

/// Uniform invertible matrix by rejection sampling.
pub fn random_invertible<R: Rng>(field: &Field, n: usize, rng: &mut R) -> Matrix {
    loop {
        let m = random_matrix(field, n, n, rng);
        if m.is_invertible() {
            return m;
        }
    }
}

/// Random element of SL_n: a random invertible matrix with its first column
/// scaled by the inverse determinant.
pub fn random_sl(n: usize, field: &Field, seed: u64) -> Result<ClassicalElement> {
    random_sl_with(n, field, &mut seeded_rng(seed))
}

pub fn random_sl_with<R: Rng>(n: usize, field: &Field, rng: &mut R) -> Result<ClassicalElement> {
    if n < 2 {
        return Err(Error::precondition("random_sl needs n >= 2"));
    }
    let m = random_invertible(field, n, rng);
    let c = field.inv(m.det()?)?;
    let m = Matrix::from_fn(field, n, n, |i, j| {
        if j == 0 {
            field.mul(m.get(i, j), c)
        } else {
            m.get(i, j)
        }
    });
    ClassicalElement::new(m, GroupTag::Sl, None)
}

/// The symplectic transvection `x -> x + lambda <x, v> v` for `<x, y> = x^T J y`.
pub fn symplectic_transvection(j: &Matrix, v: &[FieldElement], lambda: FieldElement) -> Matrix {
    let f = j.field();
    let n = j.rows();
    let jv = j.mul_vec(v).expect("matching length");
    Matrix::from_fn(f, n, n, |r, c| {
        let base = if r == c {
            FieldElement::ONE
        } else {
            FieldElement::ZERO
        };
        f.add(base, f.mul(lambda, f.mul(v[r], jv[c])))
    })
}

/// Random element of Sp_{n2} for the standard form, as a product of `3 * n2`
/// random symplectic transvections. Not uniform on the group.
pub fn random_sp(n2: usize, field: &Field, seed: u64) -> Result<ClassicalElement> {
    random_sp_with(n2, field, &mut seeded_rng(seed))
}

pub fn random_sp_with<R: Rng>(n2: usize, field: &Field, rng: &mut R) -> Result<ClassicalElement> {
    if n2 == 0 || !n2.is_multiple_of(2) {
        return Err(Error::precondition(
            "random_sp needs a positive even dimension",
        ));
    }
    let j = standard_symplectic_form(field, n2);
    let mut acc = Matrix::identity(field, n2);
    for _ in 0..3 * n2 {
        let v = loop {
            let v: Vec<FieldElement> = (0..n2).map(|_| random_element(field, rng)).collect();
            if v.iter().any(|x| !x.is_zero()) {
                break v;
            }
        };
        let t = symplectic_transvection(&j, &v, random_nonzero(field, rng));
        acc = acc.mul(&t)?;
    }
    ClassicalElement::new(acc, GroupTag::Sp, Some(j))
}

/// A finite group named by a short descriptor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupDescriptor {
    Symmetric(usize),
    Alternating(usize),
    Linear {
        tag: GroupTag,
        n: usize,
        field: Field,
    },
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDescriptor::Symmetric(n) => write!(f, "S{n}"),
            GroupDescriptor::Alternating(n) => write!(f, "A{n}"),
            GroupDescriptor::Linear { tag, n, field } => {
                write!(f, "{}{n}({})", tag.prefix(), field.order())
            }
        }
    }
}

impl GroupDescriptor {
    /// Parses `S<n>`, `A<n>`, `GL<n>(<q>)`, `SL<n>(<q>)`, `PSL<n>(<q>)` or
    /// `SP<n>(<q>)`; `<q>` may also be a full field spec such as `3^2:1,0,1`.
    pub fn parse(text: &str) -> Result<GroupDescriptor> {
        let t = text.trim();
        let upper = t.to_ascii_uppercase();
        let degree = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::parse(format!("bad degree in {t:?}")))
        };
        if let Some((head, rest)) = t.split_once('(') {
            let body = rest
                .strip_suffix(')')
                .ok_or_else(|| Error::parse(format!("missing ')' in {t:?}")))?;
            let head_upper = head.to_ascii_uppercase();
            let (tag, n) = ["PSL", "GL", "SL", "SP"]
                .iter()
                .find_map(|p| head_upper.strip_prefix(p).map(|n| (*p, n)))
                .ok_or_else(|| Error::parse(format!("unknown group {t:?}")))?;
            let n = degree(n)?;
            let field = Field::new(crate::gf::FieldSpec::parse(body)?);
            let tag = GroupTag::parse(tag)?;
            if tag == GroupTag::Sp && n % 2 != 0 {
                return Err(Error::parse("Sp needs even dimension"));
            }
            return Ok(GroupDescriptor::Linear { tag, n, field });
        }
        if let Some(n) = upper.strip_prefix('S') {
            return Ok(GroupDescriptor::Symmetric(degree(n)?));
        }
        if let Some(n) = upper.strip_prefix('A') {
            return Ok(GroupDescriptor::Alternating(degree(n)?));
        }
        Err(Error::parse(format!("unknown group {t:?}")))
    }

    pub fn order(&self) -> BigUint {
        match self {
            GroupDescriptor::Symmetric(n) => factorial(*n),
            GroupDescriptor::Alternating(n) if *n < 2 => BigUint::one(),
            GroupDescriptor::Alternating(n) => factorial(*n) / 2u32,
            GroupDescriptor::Linear { tag, n, field } => {
                let q = field.order();
                match tag {
                    GroupTag::Gl => gl_order(*n, q),
                    GroupTag::Sl => sl_order(*n, q),
                    GroupTag::PslRep => psl_order(*n, q),
                    GroupTag::Sp => sp_order(*n, q),
                }
            }
        }
    }
}

pub fn factorial(n: usize) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// `|GL_n(q)| = prod_{i<n} (q^n - q^i)`.
pub fn gl_order(n: usize, q: u64) -> BigUint {
    let q = BigUint::from(q);
    let qn = q.pow(n as u32);
    (0..n).fold(BigUint::one(), |acc, i| acc * (&qn - q.pow(i as u32)))
}

pub fn sl_order(n: usize, q: u64) -> BigUint {
    if n == 0 {
        return BigUint::one();
    }
    gl_order(n, q) / BigUint::from(q - 1)
}

pub fn psl_order(n: usize, q: u64) -> BigUint {
    sl_order(n, q) / BigUint::from((n as u64).gcd(&(q - 1)).max(1))
}

/// `|Sp_{2m}(q)| = q^{m^2} prod_{i=1}^m (q^{2i} - 1)`.
pub fn sp_order(n2: usize, q: u64) -> BigUint {
    let m = (n2 / 2) as u32;
    let qb = BigUint::from(q);
    (1..=m).fold(qb.pow(m * m), |acc, i| acc * (qb.pow(2 * i) - 1u32))
}

/// Every `n x n` matrix over `field` satisfying `keep`, subject to a candidate budget.
pub fn enumerate_matrices(
    field: &Field,
    n: usize,
    budget: u128,
    mut keep: impl FnMut(&Matrix) -> bool,
) -> Result<Vec<Matrix>> {
    let q = u128::from(field.order());
    let needed = q.checked_pow((n * n) as u32).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::Budget { needed, budget });
    }
    let mut out = Vec::new();
    let mut digits = vec![0u32; n * n];
    loop {
        let m = Matrix::from_fn(field, n, n, |i, j| FieldElement(digits[i * n + j]));
        if keep(&m) {
            out.push(m);
        }
        let mut k = 0;
        loop {
            if k == digits.len() {
                return Ok(out);
            }
            digits[k] += 1;
            if u64::from(digits[k]) < field.order() {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
    }
}

/// All elements of SL_n(q), by filtering all matrices.
pub fn enumerate_sl(field: &Field, n: usize, budget: u128) -> Result<Vec<Matrix>> {
    enumerate_matrices(field, n, budget, |m| m.det() == Ok(FieldElement::ONE))
}

/// All elements of PSL_n(q) as projective normal forms of SL_n(q).
pub fn enumerate_psl(field: &Field, n: usize, budget: u128) -> Result<Vec<ProjectiveMatrix>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for m in enumerate_sl(field, n, budget)? {
        let p = ProjectiveMatrix::new(&m);
        if seen.insert(p.clone()) {
            out.push(p);
        }
    }
    Ok(out)
}

/// The subgroup generated by `gens`, by breadth-first closure (bounded by `budget` elements).
pub fn generated_subgroup<G: GroupElement>(
    gens: &[G],
    identity: G,
    budget: usize,
) -> Result<HashSet<G>> {
    let mut seen: HashSet<G> = HashSet::new();
    seen.insert(identity.clone());
    let mut frontier = vec![identity];
    while let Some(g) = frontier.pop() {
        for s in gens {
            let h = g.op(s);
            if seen.insert(h.clone()) {
                if seen.len() > budget {
                    return Err(Error::Budget {
                        needed: seen.len() as u128,
                        budget: budget as u128,
                    });
                }
                frontier.push(h);
            }
        }
    }
    Ok(seen)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_basics() {
        let c = Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap();
        assert!(c.compose(&c.inverse()).unwrap().is_identity());
        assert_eq!(c.sign(), 1);
        let s = Permutation::from_cycles(6, &[&[0, 1, 2], &[3, 4]]).unwrap();
        assert_eq!(s.cycle_type(), vec![3, 2, 1]);
        assert_eq!(s.support(), vec![0, 1, 2, 3, 4]);
        assert_eq!(s.sign(), -1);
        assert_eq!(s.order(), BigUint::from(6u32));
        assert_eq!(Permutation::identity(4).cycle_type(), vec![1, 1, 1, 1]);
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
        assert_eq!(
            Permutation::parse("3,0,1,2").unwrap().to_string(),
            "3,0,1,2"
        );
    }

    #[test]
    fn compose_is_right_to_left() {
        let a = Permutation::transposition(3, 0, 1);
        let b = Permutation::transposition(3, 1, 2);
        // a(b(2)) = a(1) = 0
        assert_eq!(a.compose(&b).unwrap().apply(2), 0);
    }

    #[test]
    fn even_sampler_properties() {
        let a3: HashSet<_> = (0..200).map(|s| random_even_perm(3, s).unwrap()).collect();
        assert_eq!(a3.len(), 3);
        assert!((0..10_000).all(|s| random_even_perm(7, s).unwrap().is_even()));
        assert_eq!(
            random_even_perm(10, 42).unwrap(),
            random_even_perm(10, 42).unwrap()
        );
        assert!(random_even_perm(2, 0).is_err());
    }

    #[test]
    fn sign_is_a_homomorphism() {
        let mut rng = seeded_rng(7);
        for _ in 0..1000 {
            let a = random_perm(9, &mut rng);
            let b = random_perm(9, &mut rng);
            assert_eq!(a.compose(&b).unwrap().sign(), a.sign() * b.sign());
        }
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(all_permutations(5).len(), 120);
        assert_eq!(all_even_permutations(5).len(), 60);
        let f2 = Field::of_order(2).unwrap();
        assert_eq!(enumerate_sl(&f2, 2, 1 << 20).unwrap().len(), 6);
        let f3 = Field::of_order(3).unwrap();
        assert_eq!(enumerate_sl(&f3, 2, 1 << 20).unwrap().len(), 24);
        let f7 = Field::of_order(7).unwrap();
        assert_eq!(enumerate_psl(&f7, 2, 1 << 20).unwrap().len(), 168);
        assert_eq!(psl_order(2, 7), BigUint::from(168u32));
        assert_eq!(sp_order(4, 3), BigUint::from(51840u32));
    }

    #[test]
    fn random_sl_covers_sl2_2() {
        let f2 = Field::of_order(2).unwrap();
        let seen: HashSet<Matrix> = (0..200)
            .map(|s| random_sl(2, &f2, s).unwrap().into_matrix())
            .collect();
        assert_eq!(seen.len(), 6);
        let f5 = Field::of_order(5).unwrap();
        assert_eq!(random_sl(4, &f5, 9).unwrap(), random_sl(4, &f5, 9).unwrap());
    }

    #[test]
    fn symplectic_elements() {
        let f3 = Field::of_order(3).unwrap();
        let j = standard_symplectic_form(&f3, 4);
        assert!(preserves_form(&Matrix::identity(&f3, 4), &j));
        let e1 = vec![f3.one(), f3.zero(), f3.zero(), f3.zero()];
        let t = symplectic_transvection(&j, &e1, f3.one());
        assert!(preserves_form(&t, &j));
        assert_eq!(t.det().unwrap(), f3.one());
        for seed in 0..20 {
            let g = random_sp(6, &f3, seed).unwrap();
            assert!(preserves_form(
                g.matrix(),
                &standard_symplectic_form(&f3, 6)
            ));
            assert_eq!(g.matrix().det().unwrap(), f3.one());
        }
    }

    #[test]
    fn projective_equality_is_up_to_scalars() {
        let f = Field::of_order(5).unwrap();
        let g = random_sl(3, &f, 1).unwrap();
        for a in f.nonzero() {
            let scaled =
                ClassicalElement::new(g.matrix().scale(a), GroupTag::PslRep, None).unwrap();
            assert_eq!(scaled, g.to_projective());
            assert_eq!(
                ProjectiveMatrix::new(&g.matrix().scale(a)),
                ProjectiveMatrix::new(g.matrix())
            );
        }
        let h = random_sl(3, &f, 2).unwrap();
        assert_ne!(h.to_projective(), g.to_projective());
    }

    #[test]
    fn membership_checks() {
        let f = Field::of_order(5).unwrap();
        let d = Matrix::from_ints(&f, 2, 2, &[2, 0, 0, 1]);
        assert!(ClassicalElement::new(d.clone(), GroupTag::Sl, None).is_err());
        assert!(ClassicalElement::new(d, GroupTag::Gl, None).is_ok());
        let not_sp = Matrix::from_ints(&f, 2, 2, &[2, 0, 0, 2]);
        assert!(ClassicalElement::new(not_sp, GroupTag::Sp, None).is_err());
        let e = ClassicalElement::parse(&f, "SL:1,1;0,1").unwrap();
        assert_eq!(e.to_string(), "SL:1,1;0,1");
    }

    #[test]
    fn descriptors() {
        assert_eq!(
            GroupDescriptor::parse("A5").unwrap().order(),
            BigUint::from(60u32)
        );
        let g = GroupDescriptor::parse("PSL2(7)").unwrap();
        assert_eq!(g.order(), BigUint::from(168u32));
        assert_eq!(g.to_string(), "PSL2(7)");
        assert_eq!(
            GroupDescriptor::parse("GL2(5)").unwrap().order(),
            BigUint::from(480u32)
        );
        assert!(GroupDescriptor::parse("SP3(5)").is_err());
        assert!(GroupDescriptor::parse("X4").is_err());
    }
}
