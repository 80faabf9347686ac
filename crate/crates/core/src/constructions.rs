//! Rank-bounded constructions: near-root preparation, approximate
//! centralization, the order-`p` block-unipotent element with its centralizer
//! data, and projection of GL onto SL.

use std::collections::HashMap;

use num_integer::Integer;
use rand::Rng;

use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement};
use crate::groups::{random_element, seeded_rng, ClassicalElement, GroupElement, GroupTag};
use crate::linalg::{Matrix, SpanBuilder, Vector};
use crate::metrics::{projective_rank_length, Rational};
use crate::poly::Poly;

/// `V = L ⊕ S`, where an element acts on `L` as a `k`-th root of `alpha` and
/// trivially on `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitDecomposition {
    field: Field,
    l_basis: Vec<Vector>,
    s_basis: Vec<Vector>,
    k: usize,
    alpha: FieldElement,
}

fn check_order_prime_to_char(field: &Field, k: usize) -> Result<()> {
    if k == 0 || (k as u64).gcd(&u64::from(field.characteristic())) != 1 {
        return Err(Error::precondition(format!(
            "k = {k} must be positive and prime to the characteristic {}",
            field.characteristic()
        )));
    }
    Ok(())
}

impl SplitDecomposition {
    pub fn new(
        field: &Field,
        l_basis: Vec<Vector>,
        s_basis: Vec<Vector>,
        k: usize,
        alpha: FieldElement,
    ) -> Result<SplitDecomposition> {
        check_order_prime_to_char(field, k)?;
        if alpha.is_zero() {
            return Err(Error::precondition("alpha must be nonzero"));
        }
        let dim = l_basis.len() + s_basis.len();
        let mut span = SpanBuilder::new(field, dim);
        for v in l_basis.iter().chain(&s_basis) {
            if v.len() != dim || !span.insert(v) {
                return Err(Error::precondition(
                    "L and S bases do not form a basis of the space",
                ));
            }
        }
        Ok(SplitDecomposition {
            field: field.clone(),
            l_basis,
            s_basis,
            k,
            alpha,
        })
    }

    /// The decomposition determined by `x` itself: `L = ker(x^k - alpha)` and
    /// `S = ker(x - 1)`, or `L = V` when `alpha = 1`.
    pub fn from_element(x: &Matrix, k: usize, alpha: FieldElement) -> Result<SplitDecomposition> {
        let f = x.field();
        let n = x.rows();
        check_order_prime_to_char(f, k)?;
        if alpha == FieldElement::ONE {
            let dec =
                SplitDecomposition::new(f, Matrix::identity(f, n).columns(), Vec::new(), k, alpha)?;
            dec.check_element(x)?;
            return Ok(dec);
        }
        let l_basis = x.pow(k as u64).shift(alpha).kernel_basis();
        let s_basis = x.shift(FieldElement::ONE).kernel_basis();
        SplitDecomposition::new(f, l_basis, s_basis, k, alpha)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn l_basis(&self) -> &[Vector] {
        &self.l_basis
    }

    pub fn s_basis(&self) -> &[Vector] {
        &self.s_basis
    }

    pub fn dim_l(&self) -> usize {
        self.l_basis.len()
    }

    pub fn dim_s(&self) -> usize {
        self.s_basis.len()
    }

    pub fn dim(&self) -> usize {
        self.dim_l() + self.dim_s()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn alpha(&self) -> FieldElement {
        self.alpha
    }

    /// Columns: the `L` basis followed by the `S` basis.
    pub fn basis_matrix(&self) -> Matrix {
        let cols: Vec<Vector> = self.l_basis.iter().chain(&self.s_basis).cloned().collect();
        Matrix::from_columns(&self.field, self.dim(), &cols)
    }

    /// Verifies that `x` preserves `L` and `S`, acts on `L` as a `k`-th root
    /// of `alpha` and trivially on `S`. Returns the `L`-block in the adapted basis.
    pub fn check_element(&self, x: &Matrix) -> Result<Matrix> {
        if !x.is_square() || x.rows() != self.dim() || x.field() != &self.field {
            return Err(Error::DimensionMismatch(
                "element does not act on the decomposed space".into(),
            ));
        }
        let p = self.basis_matrix();
        let adapted = p.inverse()?.mul(x)?.mul(&p)?;
        let (l, s) = (self.dim_l(), self.dim_s());
        let off_diagonal_zero = (0..l).all(|i| {
            (l..l + s).all(|j| adapted.get(i, j).is_zero() && adapted.get(j, i).is_zero())
        });
        if !off_diagonal_zero {
            return Err(Error::precondition("x does not preserve L and S"));
        }
        let on_s = adapted.submatrix(l, l, s, s);
        if s > 0 && !on_s.is_identity() {
            return Err(Error::precondition("x is not trivial on S"));
        }
        let on_l = adapted.submatrix(0, 0, l, l);
        if l > 0 && on_l.pow(self.k as u64) != Matrix::scalar(&self.field, l, self.alpha) {
            return Err(Error::precondition(
                "x restricted to L is not a k-th root of alpha",
            ));
        }
        Ok(on_l)
    }
}

#[derive(Clone, Debug)]
pub struct NearRoot {
    pub x: Matrix,
    pub decomposition: SplitDecomposition,
    /// `rk(y^k - alpha)`.
    pub defect_rank: usize,
    /// `rk(x - y)`.
    pub rank_change: usize,
}

/// Replaces `y` by an element that is a `k`-th root of `alpha` on
/// `L = ker(y^k - alpha)` and the identity on a complement `S`, completed
/// from standard basis vectors in index order.
pub fn prepare_near_root(y: &Matrix, k: usize, alpha: FieldElement) -> Result<NearRoot> {
    let f = y.field();
    check_order_prime_to_char(f, k)?;
    if alpha.is_zero() {
        return Err(Error::precondition("alpha must be nonzero"));
    }
    if !y.is_square() || !y.is_invertible() {
        return Err(Error::precondition("y must be invertible"));
    }
    let n = y.rows();
    let defect = y.pow(k as u64).shift(alpha);
    let l_basis = defect.kernel_basis();
    let mut span = SpanBuilder::new(f, n);
    for v in &l_basis {
        span.insert(v);
    }
    let s_basis: Vec<Vector> = Matrix::identity(f, n)
        .columns()
        .into_iter()
        .filter(|e| span.insert(e))
        .collect();
    let dec = SplitDecomposition::new(f, l_basis, s_basis, k, alpha)?;
    let images: Vec<Vector> = dec
        .l_basis()
        .iter()
        .map(|v| y.mul_vec(v).expect("square"))
        .chain(dec.s_basis().iter().cloned())
        .collect();
    let x = Matrix::from_columns(f, n, &images).mul(&dec.basis_matrix().inverse()?)?;
    let rank_change = x.sub(y)?.rank();
    Ok(NearRoot {
        x,
        decomposition: dec,
        defect_rank: defect.rank(),
        rank_change,
    })
}

#[derive(Clone, Debug)]
pub struct Centralized {
    pub psi: Matrix,
    /// `rk(phi - psi)`.
    pub rank_change: usize,
    /// `rk(x phi - phi x)`.
    pub commutator_rank: usize,
    /// `2 k^2 rk(x phi - phi x) + 3 dim S`.
    pub bound: usize,
}

/// `(1/k) sum_j x^-j a x^j`, the projection of `a` onto the commutant of `x`
/// when `x^k` is scalar.
fn average_over_powers(x: &Matrix, a: &Matrix, k: usize) -> Result<Matrix> {
    let f = x.field();
    let x_inv = x.inverse()?;
    let mut term = a.clone();
    let mut sum = a.clone();
    for _ in 1..k {
        term = x_inv.mul(&term)?.mul(x)?;
        sum = sum.add(&term)?;
    }
    Ok(sum.scale(f.inv(f.from_int(k as i64))?))
}

/// Appends whole `x`-orbits `v, xv, ..., x^(deg-1) v` of candidates outside
/// the current span. Returns the appended vectors, orbit by orbit.
fn extend_by_orbits(
    x: &Matrix,
    deg: usize,
    candidates: &[Vector],
    span: &mut SpanBuilder,
) -> Vec<Vector> {
    let mut out = Vec::new();
    for c in candidates {
        if span.contains(c) {
            continue;
        }
        let mut v = c.clone();
        for _ in 0..deg {
            span.insert(&v);
            out.push(v.clone());
            v = x.mul_vec(&v).expect("square");
        }
    }
    out
}

/// A correction `e` commuting with `x` such that `m + e` is invertible and
/// `rk(e)` equals the nullity of `m`. `m` must commute with `x`, and the
/// product of `factors` (distinct irreducibles) must annihilate `x`.
fn invertible_repair(m: &Matrix, x: &Matrix, factors: &[Poly]) -> Result<Matrix> {
    let f = m.field();
    let dim = m.rows();
    if m.is_invertible() {
        return Ok(Matrix::zeros(f, dim, dim));
    }
    let mut src = Vec::with_capacity(dim);
    let mut dst = Vec::with_capacity(dim);
    for factor in factors {
        let component = x.eval_poly(factor).kernel_basis();
        if component.is_empty() {
            continue;
        }
        let deg = factor.degree().expect("nonconstant factor");
        let basis = Matrix::from_columns(f, dim, &component);
        let restricted = m.mul(&basis)?;
        let kernel: Vec<Vector> = restricted
            .kernel_basis()
            .iter()
            .map(|c| basis.mul_vec(c).expect("shape"))
            .collect();
        let mut kernel_span = SpanBuilder::new(f, dim);
        let kernel_orbits = extend_by_orbits(x, deg, &kernel, &mut kernel_span);
        let complement = extend_by_orbits(x, deg, &component, &mut kernel_span);
        let mut image_span = SpanBuilder::new(f, dim);
        for v in restricted.columns() {
            image_span.insert(&v);
        }
        let cokernel_orbits = extend_by_orbits(x, deg, &component, &mut image_span);
        if kernel_orbits.len() != cokernel_orbits.len() {
            return Err(Error::precondition("matrix does not commute with x"));
        }
        src.extend(kernel_orbits);
        dst.extend(cokernel_orbits);
        dst.extend(std::iter::repeat_n(
            vec![FieldElement::ZERO; dim],
            complement.len(),
        ));
        src.extend(complement);
    }
    if src.len() != dim {
        return Err(Error::precondition("factors do not annihilate x"));
    }
    let src = Matrix::from_columns(f, dim, &src);
    let dst = Matrix::from_columns(f, dim, &dst);
    dst.mul(&src.inverse()?)
}

/// An invertible `psi` commuting with `x`, close to `phi` in rank.
///
/// Works in the basis adapted to `L ⊕ S`: the off-diagonal blocks of `phi`
/// are dropped, the `L`-block is averaged over conjugation by powers of
/// `x|_L`, and both diagonal blocks are made invertible by corrections of rank
/// equal to their nullity. When `alpha = 1` the whole space is treated as `L`.
/// Returns `Err(BoundViolation)` if `rk(phi - psi)` exceeds
/// `2 k^2 rk(x phi - phi x) + 3 dim S`.
pub fn approx_centralize(
    x: &Matrix,
    dec: &SplitDecomposition,
    phi: &Matrix,
) -> Result<Centralized> {
    let f = x.field();
    let n = x.rows();
    let k = dec.k();
    dec.check_element(x)?;
    if phi.rows() != n || !phi.is_square() || phi.field() != f {
        return Err(Error::DimensionMismatch(
            "phi must have the shape of x".into(),
        ));
    }
    if !phi.is_invertible() {
        return Err(Error::precondition("phi must be invertible"));
    }
    let commutator_rank = x.commutator_bracket(phi)?.rank();
    let bound = 2 * k * k * commutator_rank + 3 * dec.dim_s();
    if commutator_rank == 0 {
        return Ok(Centralized {
            psi: phi.clone(),
            rank_change: 0,
            commutator_rank,
            bound,
        });
    }
    let root_factors = Poly::binomial(f, k, dec.alpha()).factor_squarefree(f);
    let psi = if dec.alpha() == FieldElement::ONE || dec.dim_s() == 0 {
        let averaged = average_over_powers(x, phi, k)?;
        averaged.add(&invertible_repair(&averaged, x, &root_factors)?)?
    } else {
        let p = dec.basis_matrix();
        let p_inv = p.inverse()?;
        let adapted = p_inv.mul(phi)?.mul(&p)?;
        let (l, s) = (dec.dim_l(), dec.dim_s());
        let mut blocks = Vec::new();
        if l > 0 {
            let x_l = p_inv.mul(x)?.mul(&p)?.submatrix(0, 0, l, l);
            let averaged = average_over_powers(&x_l, &adapted.submatrix(0, 0, l, l), k)?;
            blocks.push(averaged.add(&invertible_repair(&averaged, &x_l, &root_factors)?)?);
        }
        let d = adapted.submatrix(l, l, s, s);
        let linear = Poly::from_coeffs(vec![f.neg(f.one()), f.one()]);
        blocks.push(d.add(&invertible_repair(&d, &Matrix::identity(f, s), &[linear])?)?);
        p.mul(&Matrix::block_diagonal(f, &blocks))?.mul(&p_inv)?
    };
    let rank_change = phi.sub(&psi)?.rank();
    let commutes = x.commutes_with(&psi);
    if !commutes || !psi.is_invertible() || rank_change > bound {
        return Err(Error::BoundViolation(format!(
            "x = {x}; phi = {phi}; k = {k}; dim S = {}; rk(x phi - phi x) = {commutator_rank}; \
             rk(phi - psi) = {rank_change} vs bound {bound}; commutes = {commutes}; invertible = {}",
            dec.dim_s(),
            psi.is_invertible()
        )));
    }
    Ok(Centralized {
        psi,
        rank_change,
        commutator_rank,
        bound,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NiceblockGroup {
    Sl,
    Sp,
}

impl NiceblockGroup {
    pub fn tag(self) -> GroupTag {
        match self {
            NiceblockGroup::Sl => GroupTag::Sl,
            NiceblockGroup::Sp => GroupTag::Sp,
        }
    }

    pub fn parse(text: &str) -> Result<NiceblockGroup> {
        match text.trim().to_ascii_uppercase().as_str() {
            "SL" => Ok(NiceblockGroup::Sl),
            "SP" => Ok(NiceblockGroup::Sp),
            other => Err(Error::parse(format!("expected SL or SP, got {other:?}"))),
        }
    }
}

/// The element `[[I, I], [0, I]]` of order `p` together with generators of
/// its centralizer `A ⋊ H` and elements of large projective rank length.
#[derive(Clone, Debug)]
pub struct NiceblockCertificate {
    pub group: NiceblockGroup,
    pub n: usize,
    pub x: ClassicalElement,
    /// Generators `[[I, B], [0, I]]` of the elementary abelian normal subgroup.
    pub a_generators: Vec<Matrix>,
    /// Generators `diag(P, P)` of the complement.
    pub h_generators: Vec<Matrix>,
    pub witness_u: Matrix,
    pub witness_h: Matrix,
    pub commutator_u: Matrix,
    pub commutator_h: Matrix,
    pub commutator: Matrix,
    pub x_length: Rational,
    pub u_length: Rational,
    pub h_length: Rational,
    pub commutator_length: Rational,
}

/// Order of the elementary abelian subgroup: `q^(n^2)` or `q^(n(n+1)/2)`.
pub fn niceblock_p_core_dim(group: NiceblockGroup, n: usize) -> usize {
    match group {
        NiceblockGroup::Sl => n * n,
        NiceblockGroup::Sp => n * (n + 1) / 2,
    }
}

fn unit_matrix(field: &Field, n: usize, i: usize, j: usize, c: FieldElement) -> Matrix {
    Matrix::zeros(field, n, n).with_entry(i, j, c)
}

fn upper_block(b: &Matrix) -> Matrix {
    let f = b.field();
    let n = b.rows();
    let id = Matrix::identity(f, n);
    Matrix::from_blocks(&id, b, &Matrix::zeros(f, n, n), &id).expect("square blocks")
}

fn doubled(p: &Matrix) -> Matrix {
    Matrix::block_diagonal(p.field(), &[p.clone(), p.clone()])
}

/// Permutation matrix sending `e_i` to `e_(i+1 mod n)`.
pub fn cyclic_shift(field: &Field, n: usize) -> Matrix {
    Matrix::from_fn(field, n, n, |i, j| {
        if i == (j + 1) % n {
            FieldElement::ONE
        } else {
            FieldElement::ZERO
        }
    })
}

/// The field elements `t^m`, a basis of the field over its prime subfield.
fn prime_subfield_basis(field: &Field) -> Vec<FieldElement> {
    (0..field.degree() as usize)
        .map(|m| {
            let mut c = vec![0u32; m + 1];
            c[m] = 1;
            field.from_coeffs(&c).expect("valid coefficients")
        })
        .collect()
}

fn a_generators(field: &Field, n: usize, group: NiceblockGroup) -> Vec<Matrix> {
    let mut out = Vec::new();
    for c in prime_subfield_basis(field) {
        for i in 0..n {
            for j in 0..n {
                let b = match group {
                    NiceblockGroup::Sl => unit_matrix(field, n, i, j, c),
                    NiceblockGroup::Sp if i == j => unit_matrix(field, n, i, i, c),
                    NiceblockGroup::Sp if i < j => {
                        unit_matrix(field, n, i, j, c).with_entry(j, i, c)
                    }
                    NiceblockGroup::Sp => continue,
                };
                out.push(upper_block(&b));
            }
        }
    }
    out
}

fn h_generators(field: &Field, n: usize, group: NiceblockGroup) -> Vec<Matrix> {
    let mut blocks = Vec::new();
    let odd = field.characteristic() != 2;
    let sign_change = Matrix::identity(field, n).with_entry(0, 0, field.neg(field.one()));
    match group {
        NiceblockGroup::Sl => {
            for c in prime_subfield_basis(field) {
                for i in 0..n {
                    for j in (0..n).filter(|&j| j != i) {
                        blocks.push(Matrix::identity(field, n).with_entry(i, j, c));
                    }
                }
            }
        }
        NiceblockGroup::Sp => {
            for i in 0..n - 1 {
                let mut images: Vec<usize> = (0..n).collect();
                images.swap(i, i + 1);
                blocks.push(Matrix::from_fn(field, n, n, |r, c| {
                    if images[c] == r {
                        FieldElement::ONE
                    } else {
                        FieldElement::ZERO
                    }
                }));
            }
            if odd {
                for a in field.elements() {
                    for b in field.nonzero() {
                        if field.add(field.mul(a, a), field.mul(b, b)) == field.one() {
                            let rotation = Matrix::identity(field, n)
                                .with_entry(0, 0, a)
                                .with_entry(0, 1, b)
                                .with_entry(1, 0, field.neg(b))
                                .with_entry(1, 1, a);
                            blocks.push(rotation);
                        }
                    }
                }
            }
        }
    }
    if odd {
        blocks.push(sign_change);
    }
    blocks.iter().map(doubled).collect()
}

fn meets_commutator_bound(length: Rational, n: usize) -> bool {
    length >= Rational::new(n as i64 - 2, 3 * n as i64)
}

/// Builds the certificate for `SL_2n` or `Sp_2n` over `field`. The
/// commutator witness uses a diagonal `B` with distinct entries when the
/// field is large enough, and otherwise a seeded search over `(A, B)`.
pub fn build_niceblock(
    n: usize,
    field: &Field,
    group: NiceblockGroup,
    seed: u64,
) -> Result<NiceblockCertificate> {
    if n < 2 {
        return Err(Error::precondition("niceblock needs n >= 2"));
    }
    let id = Matrix::identity(field, n);
    let x = ClassicalElement::new(upper_block(&id), group.tag(), None)?;
    let shift = cyclic_shift(field, n);
    let witness_u = upper_block(&id);
    let witness_h = doubled(&shift);

    let mut candidate = if field.order() >= n as u64 {
        let b = Matrix::diagonal(field, &field.elements().take(n).collect::<Vec<_>>());
        Some((upper_block(&b), witness_h.clone()))
    } else {
        None
    };
    let mut rng = seeded_rng(seed);
    let mut trials = 0;
    let (commutator_u, commutator_h, commutator, commutator_length) = loop {
        if let Some((u, h)) = candidate.take() {
            let c = Matrix::commutator(&u, &h);
            let length = projective_rank_length(&c)?;
            if meets_commutator_bound(length, n) {
                break (u, h, c, length);
            }
        }
        if trials == 10_000 {
            return Err(Error::Infeasible(format!(
                "no commutator of length >= (n-2)/(3n) found for n = {n} over GF({}) in 10^4 trials",
                field.order()
            )));
        }
        trials += 1;
        let mut b = Matrix::zeros(field, n, n);
        for i in 0..n {
            for j in 0..n {
                if group == NiceblockGroup::Sl || i <= j {
                    let c = random_element(field, &mut rng);
                    b = b.with_entry(i, j, c);
                    if group == NiceblockGroup::Sp {
                        b = b.with_entry(j, i, c);
                    }
                }
            }
        }
        let mut images: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            images.swap(i, rng.random_range(0..=i));
        }
        let perm = Matrix::from_fn(field, n, n, |r, c| {
            if images[c] == r {
                FieldElement::ONE
            } else {
                FieldElement::ZERO
            }
        });
        candidate = Some((upper_block(&b), doubled(&perm)));
    };

    Ok(NiceblockCertificate {
        group,
        n,
        x_length: projective_rank_length(x.matrix())?,
        u_length: projective_rank_length(&witness_u)?,
        h_length: projective_rank_length(&witness_h)?,
        a_generators: a_generators(field, n, group),
        h_generators: h_generators(field, n, group),
        x,
        witness_u,
        witness_h,
        commutator_u,
        commutator_h,
        commutator,
        commutator_length,
    })
}

/// Scales the first column by `det(g)^-1`; the result has determinant 1 and
/// differs from `g` in rank at most 1.
pub fn project_to_sl(g: &Matrix) -> Result<Matrix> {
    let f = g.field();
    let scale = f.inv(g.det()?).map_err(|_| Error::Singular)?;
    Ok(Matrix::from_fn(f, g.rows(), g.cols(), |i, j| {
        if j == 0 {
            f.mul(g.get(i, j), scale)
        } else {
            g.get(i, j)
        }
    }))
}

/// Largest group accepted by the brute-force commutator search.
pub const COMMUTATOR_GROUP_BUDGET: usize = 10_000;

/// A pair `(a, b)` with `g = a^-1 b^-1 a b`, searching all pairs of `elements`.
pub fn commutator_witness<G: GroupElement>(g: &G, elements: &[G]) -> Result<Option<(G, G)>> {
    if elements.len() > COMMUTATOR_GROUP_BUDGET {
        return Err(Error::Budget {
            needed: elements.len() as u128,
            budget: COMMUTATOR_GROUP_BUDGET as u128,
        });
    }
    for a in elements {
        for b in elements {
            if &G::commutator(a, b) == g {
                return Ok(Some((a.clone(), b.clone())));
            }
        }
    }
    Ok(None)
}

/// Every commutator of the group, with the first witness pair found.
pub fn commutator_table<G: GroupElement>(elements: &[G]) -> Result<HashMap<G, (G, G)>> {
    if elements.len() > COMMUTATOR_GROUP_BUDGET {
        return Err(Error::Budget {
            needed: elements.len() as u128,
            budget: COMMUTATOR_GROUP_BUDGET as u128,
        });
    }
    let mut table = HashMap::new();
    for a in elements {
        for b in elements {
            table
                .entry(G::commutator(a, b))
                .or_insert_with(|| (a.clone(), b.clone()));
        }
    }
    Ok(table)
}
