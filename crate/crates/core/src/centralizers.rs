//! Centralizer structure: general-linear block factorization for
//! semisimple matrices, wreath products for permutations, and the
//! `p`-core fingerprint separating `p = char` from `p != char`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::constructions::{niceblock_p_core_dim, NiceblockGroup, SplitDecomposition};
use crate::error::{Error, Result};
use crate::gf::{is_prime, FieldElement};
use crate::groups::{factorial, gl_order, Permutation};
use crate::linalg::Matrix;
use crate::metrics::cycle_multiplicities;
use crate::poly::Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FactorKind {
    /// `GL_dim(q^ext_degree)`.
    GlBlock,
    /// `C_ext_degree wr S_dim`: `dim` cycles of length `ext_degree`.
    WreathBlock,
    /// Elementary abelian `p`-group of rank `dim * ext_degree` over the prime field.
    AbelianPCore,
}

impl FactorKind {
    pub fn name(self) -> &'static str {
        match self {
            FactorKind::GlBlock => "gl",
            FactorKind::WreathBlock => "wreath",
            FactorKind::AbelianPCore => "p-core",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralizerFactor {
    pub kind: FactorKind,
    pub dim: usize,
    pub ext_degree: usize,
    pub order: BigUint,
}

impl fmt::Display for CentralizerFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {}",
            self.kind.name(),
            self.dim,
            self.ext_degree,
            self.order
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralizerDescriptor {
    pub factors: Vec<CentralizerFactor>,
    pub total_order: BigUint,
    pub p_core_order: BigUint,
}

impl CentralizerDescriptor {
    pub fn count(&self, kind: FactorKind) -> usize {
        self.factors.iter().filter(|f| f.kind == kind).count()
    }
}

impl fmt::Display for CentralizerDescriptor {
    /// One factor per line: `kind dim ext_degree order`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for factor in &self.factors {
            writeln!(f, "{factor}")?;
        }
        Ok(())
    }
}

/// Centralizer of `x` in `GL_n(q)` for `x` satisfying the root condition of
/// `dec`. Each distinct irreducible factor `g` of `(T^k - alpha)(T - 1)` with
/// nonzero `ker g(x)` contributes `GL_(dim ker / deg g)(q^deg g)`; when
/// `alpha = 1` the trivial part of `L` and `S` form one block.
pub fn centralizer_factorization(
    x: &Matrix,
    dec: &SplitDecomposition,
) -> Result<CentralizerDescriptor> {
    dec.check_element(x)?;
    let f = x.field();
    let q = f.order();
    let mut factors = Poly::binomial(f, dec.k(), dec.alpha()).factor_squarefree(f);
    let linear = Poly::from_coeffs(vec![f.neg(f.one()), f.one()]);
    if !factors.contains(&linear) {
        factors.push(linear);
    }
    let mut out = Vec::new();
    for g in &factors {
        let deg = g.degree().expect("nonconstant");
        let kernel_dim = x.eval_poly(g).kernel_basis().len();
        if kernel_dim == 0 {
            continue;
        }
        let dim = kernel_dim / deg;
        out.push(CentralizerFactor {
            kind: FactorKind::GlBlock,
            dim,
            ext_degree: deg,
            order: gl_order(dim, q.pow(deg as u32)),
        });
    }
    let total_order = out.iter().fold(BigUint::one(), |acc, b| acc * &b.order);
    Ok(CentralizerDescriptor {
        factors: out,
        total_order,
        p_core_order: BigUint::one(),
    })
}

/// The prime-order presentation `(M ⋊ T1) × T2` of a permutation centralizer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeOrderShape {
    pub p: usize,
    /// Order of `M = C_p^(m_p)`.
    pub m_order: BigUint,
    /// Degree of `T1 = S_(m_p)`.
    pub t1_degree: usize,
    /// Degree of `T2 = S_f` on the fixed points; trivial when nothing is fixed.
    pub t2_degree: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermCentralizer {
    pub descriptor: CentralizerDescriptor,
    pub prime_shape: Option<PrimeOrderShape>,
}

/// `prod_k C_k wr S_(m_k)` over the cycle type of `sigma`.
pub fn perm_centralizer_structure(sigma: &Permutation) -> PermCentralizer {
    let ct = sigma.cycle_type();
    let mults = cycle_multiplicities(&ct);
    let factors: Vec<CentralizerFactor> = mults
        .iter()
        .rev()
        .map(|(&k, &m)| CentralizerFactor {
            kind: FactorKind::WreathBlock,
            dim: m,
            ext_degree: k,
            order: BigUint::from(k).pow(m as u32) * factorial(m),
        })
        .collect();
    let total_order = factors.iter().fold(BigUint::one(), |acc, b| acc * &b.order);
    let nontrivial: Vec<(&usize, &usize)> = mults.iter().filter(|(&k, _)| k > 1).collect();
    let prime_shape = match nontrivial.as_slice() {
        [(&p, &m)] if is_prime(p as u64) => Some(PrimeOrderShape {
            p,
            m_order: BigUint::from(p).pow(m as u32),
            t1_degree: m,
            t2_degree: mults.get(&1).copied().unwrap_or(0),
        }),
        _ => None,
    };
    let p_core_order = prime_shape
        .as_ref()
        .map_or_else(BigUint::one, |s| s.m_order.clone());
    PermCentralizer {
        descriptor: CentralizerDescriptor {
            factors,
            total_order,
            p_core_order,
        },
        prime_shape,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fingerprint {
    pub has_large_p_core: bool,
    pub p: u64,
    pub p_core_order: BigUint,
    /// The block factorization in the semisimple case.
    pub reductive_part: Option<CentralizerDescriptor>,
}

/// Fingerprint of a matrix `x` of prime order `p`. For `p != char` any such
/// `x` is semisimple and its centralizer is reductive; for `p = char` only
/// the block-unipotent element `[[I, I], [0, I]]` of `group` is accepted.
pub fn characteristic_fingerprint(
    x: &Matrix,
    p: u64,
    group: NiceblockGroup,
) -> Result<Fingerprint> {
    let f = x.field();
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if !x.is_square() || x.is_identity() || !x.pow(p).is_identity() {
        return Err(Error::precondition(format!("x must have order {p}")));
    }
    if p != u64::from(f.characteristic()) {
        let dec = SplitDecomposition::from_element(x, p as usize, FieldElement::ONE)?;
        return Ok(Fingerprint {
            has_large_p_core: false,
            p,
            p_core_order: BigUint::one(),
            reductive_part: Some(centralizer_factorization(x, &dec)?),
        });
    }
    let n = x.rows() / 2;
    let id = Matrix::identity(f, n);
    let canonical = Matrix::from_blocks(&id, &id, &Matrix::zeros(f, n, n), &id);
    if !x.rows().is_multiple_of(2) || n < 2 || canonical.as_ref() != Ok(x) {
        return Err(Error::Unsupported(
            "order-p elements in characteristic p are only handled in the form [[I, I], [0, I]]"
                .into(),
        ));
    }
    let dim = niceblock_p_core_dim(group, n);
    Ok(Fingerprint {
        has_large_p_core: true,
        p,
        p_core_order: BigUint::from(f.order()).pow(dim as u32),
        reductive_part: None,
    })
}

/// Fingerprint of a permutation of prime order `p`: the `M`-part `C_p^(m_p)`.
pub fn permutation_fingerprint(sigma: &Permutation) -> Result<Fingerprint> {
    let structure = perm_centralizer_structure(sigma);
    let shape = structure
        .prime_shape
        .ok_or_else(|| Error::precondition("permutation must have prime order"))?;
    Ok(Fingerprint {
        has_large_p_core: shape.m_order > BigUint::one(),
        p: shape.p as u64,
        p_core_order: shape.m_order,
        reductive_part: Some(structure.descriptor),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_niceblock, prepare_near_root};
    use crate::gf::Field;
    use crate::groups::{all_permutations, random_invertible, random_nonzero, seeded_rng};
    use crate::metrics::{class_size_perm, for_each_in_span};
    use rand::Rng;

    fn commutant_invertible_count(x: &Matrix) -> u64 {
        let mut count = 0;
        for_each_in_span(&x.commutant_basis(), x, |c| {
            if c.is_invertible() {
                count += 1;
            }
        });
        count
    }

    #[test]
    fn identity_gives_whole_gl() {
        let f = Field::of_order(3).unwrap();
        let x = Matrix::identity(&f, 3);
        let dec = SplitDecomposition::from_element(&x, 1, f.one()).unwrap();
        let d = centralizer_factorization(&x, &dec).unwrap();
        assert_eq!(d.factors.len(), 1);
        assert_eq!(d.total_order, gl_order(3, 3));
    }

    #[test]
    fn diagonal_involution_over_gf7() {
        let f = Field::of_order(7).unwrap();
        let x = Matrix::from_ints(&f, 3, 3, &[1, 0, 0, 0, 1, 0, 0, 0, -1]);
        let dec = SplitDecomposition::from_element(&x, 2, f.one()).unwrap();
        let d = centralizer_factorization(&x, &dec).unwrap();
        assert_eq!(d.total_order, BigUint::from(12096u32));
        assert_eq!(d.count(FactorKind::GlBlock), 2);
        assert_eq!(commutant_invertible_count(&x), 12096);
    }

    #[test]
    fn irreducible_root_block() {
        // T^2 - 2 is irreducible over GF(5): L becomes a GF(25)-space
        let f = Field::of_order(5).unwrap();
        let c = Matrix::from_ints(&f, 2, 2, &[0, 2, 1, 0]);
        let x = Matrix::block_diagonal(&f, &[c, Matrix::identity(&f, 1)]);
        let dec = SplitDecomposition::from_element(&x, 2, f.from_int(2)).unwrap();
        assert_eq!(dec.dim_s(), 1);
        let d = centralizer_factorization(&x, &dec).unwrap();
        assert_eq!(d.factors.len(), 2);
        assert_eq!(d.factors[0].ext_degree, 2);
        assert_eq!(d.total_order, BigUint::from(24u32 * 4));
        assert_eq!(commutant_invertible_count(&x), 96);
    }

    #[test]
    fn factorization_matches_commutant_count() {
        let mut rng = seeded_rng(5);
        for q in [2u64, 3, 4, 5] {
            let f = Field::of_order(q).unwrap();
            for _ in 0..30 {
                let n = rng.random_range(1..=4);
                let k = loop {
                    let k = rng.random_range(1..=4usize);
                    if k % f.characteristic() as usize != 0 {
                        break k;
                    }
                };
                let r = prepare_near_root(
                    &random_invertible(&f, n, &mut rng),
                    k,
                    random_nonzero(&f, &mut rng),
                )
                .unwrap();
                let d = centralizer_factorization(&r.x, &r.decomposition).unwrap();
                assert!(
                    d.factors.len() <= k + 1,
                    "q={q} k={k} alpha={:?} x={} {d:?}",
                    r.decomposition.alpha(),
                    r.x
                );
                let dim = r.x.commutant_basis().len();
                if q.pow(dim as u32) <= 100_000 {
                    assert_eq!(
                        d.total_order,
                        BigUint::from(commutant_invertible_count(&r.x))
                    );
                }
            }
        }
    }

    #[test]
    fn permutation_centralizers() {
        let s = Permutation::from_cycles(9, &[&[0, 1, 2], &[3, 4, 5]]).unwrap();
        let c = perm_centralizer_structure(&s);
        assert_eq!(c.descriptor.total_order, BigUint::from(108u32));
        let shape = c.prime_shape.unwrap();
        assert_eq!(
            (shape.m_order.clone(), shape.t1_degree, shape.t2_degree),
            (BigUint::from(9u32), 2, 3)
        );
        let inv = Permutation::from_cycles(8, &[&[0, 1], &[2, 3], &[4, 5], &[6, 7]]).unwrap();
        let c = perm_centralizer_structure(&inv);
        assert_eq!(c.descriptor.total_order, BigUint::from(384u32));
        assert_eq!(c.prime_shape.unwrap().t2_degree, 0);
        assert_eq!(
            perm_centralizer_structure(&Permutation::identity(5))
                .descriptor
                .total_order,
            BigUint::from(120u32)
        );
        assert!(perm_centralizer_structure(
            &Permutation::from_cycles(6, &[&[0, 1, 2, 3, 4, 5]]).unwrap()
        )
        .prime_shape
        .is_none());
    }

    #[test]
    fn orbit_stabilizer_in_s6() {
        for g in all_permutations(6) {
            let ct = g.cycle_type();
            let c = perm_centralizer_structure(&g).descriptor.total_order;
            let brute = all_permutations(6)
                .iter()
                .filter(|h| h.compose(&g).unwrap() == g.compose(h).unwrap())
                .count();
            assert_eq!(c, BigUint::from(brute));
            assert_eq!(c * class_size_perm(&ct, 6, false).unwrap(), factorial(6));
        }
    }

    #[test]
    fn fingerprints() {
        let f7 = Field::of_order(7).unwrap();
        let x = Matrix::from_ints(&f7, 3, 3, &[1, 0, 0, 0, 1, 0, 0, 0, -1]);
        let fp = characteristic_fingerprint(&x, 2, NiceblockGroup::Sl).unwrap();
        assert!(!fp.has_large_p_core);
        assert_eq!(fp.reductive_part.unwrap().count(FactorKind::GlBlock), 2);

        let f3 = Field::of_order(3).unwrap();
        let cert = build_niceblock(2, &f3, NiceblockGroup::Sl, 0).unwrap();
        let fp = characteristic_fingerprint(cert.x.matrix(), 3, NiceblockGroup::Sl).unwrap();
        assert!(fp.has_large_p_core);
        assert_eq!(fp.p_core_order, BigUint::from(81u32));

        let other = Matrix::from_ints(&f3, 2, 2, &[1, 1, 0, 1]);
        assert!(matches!(
            characteristic_fingerprint(&other, 3, NiceblockGroup::Sl),
            Err(Error::Unsupported(_))
        ));
        assert!(
            characteristic_fingerprint(&Matrix::identity(&f3, 2), 3, NiceblockGroup::Sl).is_err()
        );

        let s = Permutation::from_cycles(9, &[&[0, 1, 2], &[3, 4, 5]]).unwrap();
        assert_eq!(
            permutation_fingerprint(&s).unwrap().p_core_order,
            BigUint::from(9u32)
        );
    }
}
