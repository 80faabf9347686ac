//! Randomized experiments over family schedules. Every row draws from its own
//! stream `(seed, row index)`, so rows are independent of evaluation order.

use msg_core::centralizers::characteristic_fingerprint;
use msg_core::constructions::{build_niceblock, prepare_near_root, NiceblockGroup};
use msg_core::groups::{random_even_perm_with, random_invertible, random_sl_with, stream_rng};
use msg_core::metrics::{
    conjugacy_distance_perm, conjugacy_distance_psl, hamming_length, projective_rank_length,
    CLASS_SIZE_BUDGET,
};
use msg_core::{Field, FieldElement, Matrix, Permutation, Poly, Rational};
use num_traits::Zero;
use rand::Rng;

use crate::error::{HarnessError, Result};
use crate::family::{FamilyDescriptor, FamilyKind};
use crate::report::{exact, real, ExperimentReport};

pub const COLUMNS: [&str; 6] = ["index", "n", "q", "case", "quantity", "value"];

fn row(
    index: usize,
    n: usize,
    q: Option<u64>,
    case: &str,
    quantity: &str,
    value: String,
) -> Vec<String> {
    vec![
        index.to_string(),
        n.to_string(),
        q.map(|q| q.to_string()).unwrap_or_default(),
        case.to_string(),
        quantity.to_string(),
        value,
    ]
}

/// Length against conjugacy distance to the identity. Rows per trial:
/// `length` (exact), `conj`, `gap = |conj - length|` and `ratio = conj / length`
/// (skipped for the identity). Failures are reported as `error` rows.
pub fn equivalence_experiment(
    family: &FamilyDescriptor,
    trials: usize,
    seed: u64,
) -> ExperimentReport {
    let mut report = ExperimentReport::new(&COLUMNS);
    report.meta("experiment", "equivalence");
    report.meta("seed", seed);
    report.meta("trials", trials);
    report.meta("rng", "ChaCha8");
    for (index, (n, q)) in family.points().into_iter().enumerate() {
        for trial in 0..trials {
            let mut rng = stream_rng(seed, (index * trials + trial) as u64);
            let case = trial.to_string();
            let sample = match family.kind() {
                FamilyKind::Alternating => alternating_sample(n, &mut rng),
                FamilyKind::Psl => psl_sample(n, q.expect("psl point has a field"), &mut rng),
            };
            match sample {
                Ok((length, conj)) => {
                    report.push(row(index, n, q, &case, "length", exact(length)));
                    report.push(row(index, n, q, &case, "conj", real(conj)));
                    let l = length_f64(length);
                    report.push(row(index, n, q, &case, "gap", real((conj - l).abs())));
                    if !length.is_zero() {
                        report.push(row(index, n, q, &case, "ratio", real(conj / l)));
                    }
                }
                Err(e) => report.push(row(index, n, q, &case, "error", e.to_string())),
            }
        }
    }
    report
}

fn length_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn alternating_sample<R: Rng>(n: usize, rng: &mut R) -> Result<(Rational, f64)> {
    let sigma = random_even_perm_with(n, rng)?;
    let conj = conjugacy_distance_perm(&sigma, &Permutation::identity(n), true)?;
    Ok((hamming_length(&sigma), conj))
}

fn psl_sample<R: Rng>(n: usize, q: u64, rng: &mut R) -> Result<(Rational, f64)> {
    let field = Field::of_order(q)?;
    let g = random_sl_with(n, &field, rng)?.into_matrix();
    let conj = conjugacy_distance_psl(&g, &Matrix::identity(&field, n), CLASS_SIZE_BUDGET)?;
    Ok((projective_rank_length(&g)?, conj))
}

/// A non-identity element of order `p` in `GL_dim(field)` for `p` prime to
/// the characteristic: a companion block of an irreducible factor of
/// `T^p - 1` other than `T - 1`, conjugated at random and passed through
/// `prepare_near_root` with `k = p`, `alpha = 1`.
pub fn order_p_element<R: Rng>(field: &Field, dim: usize, p: u64, rng: &mut R) -> Result<Matrix> {
    if u64::from(field.characteristic()) == p {
        return Err(HarnessError::Usage(format!("{p} is the characteristic")));
    }
    let one = FieldElement::ONE;
    let block = Poly::binomial(field, p as usize, one)
        .factor_squarefree(field)
        .into_iter()
        .find(|f| f.degree() > Some(1) || f.coeff(0) != field.neg(one))
        .filter(|f| f.degree().is_some_and(|d| d <= dim))
        .ok_or_else(|| {
            HarnessError::Core(msg_core::Error::Infeasible(format!(
                "no element of order {p} in dimension {dim} over GF({})",
                field.order()
            )))
        })?;
    let c = Matrix::companion(field, &block);
    let rest = Matrix::identity(field, dim - c.rows());
    let y = Matrix::block_diagonal(field, &[c, rest]);
    let g = random_invertible(field, dim, rng);
    let y = g.mul(&y)?.mul(&g.inverse()?)?;
    Ok(prepare_near_root(&y, p as usize, one)?.x)
}

/// Centralizer fingerprint of an order-`p` element of `SL_2n(q)` for each
/// prime `p` and schedule point: semisimple when `p != char q`, the niceblock
/// element when `p = char q`.
pub fn fingerprint_experiment(
    family: &FamilyDescriptor,
    primes: &[u64],
    seed: u64,
) -> Result<ExperimentReport> {
    if family.kind() != FamilyKind::Psl {
        return Err(HarnessError::Family(
            "fingerprints need a PSL family".into(),
        ));
    }
    let mut report = ExperimentReport::new(&COLUMNS);
    report.meta("experiment", "fingerprint");
    report.meta("seed", seed);
    report.meta("family_characteristic", family.characteristic());
    report.meta("rng", "ChaCha8");
    let mut stream = 0u64;
    for (index, (n, q)) in family.points().into_iter().enumerate() {
        let q = q.expect("psl point has a field");
        for &p in primes {
            let case = format!("p={p}");
            let mut rng = stream_rng(seed, stream);
            stream += 1;
            match fingerprint_row(n, q, p, &mut rng, seed) {
                Ok(values) => {
                    for (quantity, value) in values {
                        report.push(row(index, n, Some(q), &case, quantity, value));
                    }
                }
                Err(e) => report.push(row(index, n, Some(q), &case, "error", e.to_string())),
            }
        }
    }
    Ok(report)
}

fn fingerprint_row<R: Rng>(
    n: usize,
    q: u64,
    p: u64,
    rng: &mut R,
    seed: u64,
) -> Result<Vec<(&'static str, String)>> {
    let field = Field::of_order(q)?;
    if u64::from(field.characteristic()) != p {
        let x = order_p_element(&field, 2 * n, p, rng)?;
        let fp = characteristic_fingerprint(&x, p, NiceblockGroup::Sl)?;
        let reductive = fp.reductive_part.expect("semisimple fingerprint");
        Ok(vec![
            ("regime", "semisimple".into()),
            ("p_core_order", fp.p_core_order.to_string()),
            ("gl_blocks", reductive.factors.len().to_string()),
            ("centralizer_order", reductive.total_order.to_string()),
        ])
    } else {
        let cert = build_niceblock(n, &field, NiceblockGroup::Sl, seed)?;
        let fp = characteristic_fingerprint(cert.x.matrix(), p, NiceblockGroup::Sl)?;
        Ok(vec![
            ("regime", "niceblock".into()),
            ("p_core_order", fp.p_core_order.to_string()),
            ("length", exact(cert.x_length)),
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::Characteristic;

    #[test]
    fn equivalence_rows_are_deterministic() {
        let fam = FamilyDescriptor::alternating(vec![6, 9]).unwrap();
        let a = equivalence_experiment(&fam, 5, 11);
        let b = equivalence_experiment(&fam, 5, 11);
        assert_eq!(a.to_csv_string().unwrap(), b.to_csv_string().unwrap());
        assert!(a.rows.iter().all(|r| r[4] != "error"));
        assert_ne!(a, equivalence_experiment(&fam, 5, 12));
    }

    #[test]
    fn psl_equivalence_runs_within_budget() {
        let fam = FamilyDescriptor::psl(vec![2], vec![5, 7], Characteristic::Prime(7)).unwrap();
        let report = equivalence_experiment(&fam, 3, 1);
        assert!(report.rows.iter().all(|r| r[4] != "error"), "{report:?}");
    }

    #[test]
    fn fingerprint_examples() {
        let fam = FamilyDescriptor::psl(vec![2], vec![9], Characteristic::Prime(3)).unwrap();
        let report = fingerprint_experiment(&fam, &[2, 3], 5).unwrap();
        let core = |p: &str| {
            report
                .rows
                .iter()
                .find(|r| r[3] == p && r[4] == "p_core_order")
                .map(|r| r[5].clone())
        };
        assert_eq!(core("p=2").as_deref(), Some("1"));
        assert_eq!(core("p=3").as_deref(), Some("6561"));
        assert_eq!(
            report.column_where("value", "quantity", "length"),
            vec!["1/2"]
        );
    }

    #[test]
    fn order_p_elements_are_nontrivial() {
        for (q, p, dim) in [(9, 2, 4), (2, 3, 2), (5, 3, 2), (3, 5, 4), (7, 5, 4)] {
            let field = Field::of_order(q).unwrap();
            let x = order_p_element(&field, dim, p, &mut stream_rng(1, 0)).unwrap();
            assert!(!x.is_identity() && x.pow(p).is_identity(), "q={q} p={p}");
        }
        assert!(order_p_element(&Field::of_order(2).unwrap(), 3, 7, &mut stream_rng(1, 0)).is_ok());
        assert!(
            order_p_element(&Field::of_order(2).unwrap(), 2, 7, &mut stream_rng(1, 0)).is_err()
        );
    }
}
