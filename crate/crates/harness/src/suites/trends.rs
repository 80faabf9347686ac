use msg_core::constructions::niceblock_p_core_dim;
use msg_core::constructions::NiceblockGroup;
use msg_core::gf::prime_power;
use num_bigint::BigUint;

use super::{SuiteOutcome, SuiteParams, EQUIVALENCE_GAP_LIMIT};
use crate::experiments::{equivalence_experiment, fingerprint_experiment};
use crate::family::{Characteristic, FamilyDescriptor};
use crate::report::{real, ExperimentReport};

pub const EQUIVALENCE_SIZES: [usize; 4] = [50, 100, 500, 1000];

fn parsed(values: Vec<&str>) -> Vec<f64> {
    values.iter().filter_map(|v| v.parse().ok()).collect()
}

fn median(mut xs: Vec<f64>) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    xs.sort_by(f64::total_cmp);
    let mid = xs.len() / 2;
    Some(if xs.len() % 2 == 1 {
        xs[mid]
    } else {
        (xs[mid - 1] + xs[mid]) / 2.0
    })
}

fn fraction_within(xs: &[f64], center: f64, radius: f64) -> f64 {
    xs.iter().filter(|x| (*x - center).abs() <= radius).count() as f64 / xs.len().max(1) as f64
}

fn rational_to_f64(text: &str) -> Option<f64> {
    match text.split_once('/') {
        Some((a, b)) => Some(a.parse::<f64>().ok()? / b.parse::<f64>().ok()?),
        None => text.parse().ok(),
    }
}

pub fn equivalence_suite(params: &SuiteParams) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("equivalence");
    let trials = params.trials(200);
    let family = FamilyDescriptor::alternating(EQUIVALENCE_SIZES.to_vec()).expect("valid schedule");
    let report = equivalence_experiment(&family, trials, params.seed);
    let errors = report.column_where("value", "quantity", "error").len();
    out.check("no_row_errors", errors == 0, format!("{errors} error rows"));

    let by_n = |quantity: &str, n: usize| -> Vec<String> {
        let idx = |name: &str| {
            report
                .header
                .iter()
                .position(|h| h == name)
                .expect("column")
        };
        let (qc, nc, vc) = (idx("quantity"), idx("n"), idx("value"));
        report
            .rows
            .iter()
            .filter(|r| r[qc] == quantity && r[nc] == n.to_string())
            .map(|r| r[vc].clone())
            .collect()
    };
    let mut medians = Vec::new();
    let mut trend = ExperimentReport::new(&["n", "trials", "median_gap"]);
    for &n in &EQUIVALENCE_SIZES {
        let gaps = parsed(by_n("gap", n).iter().map(String::as_str).collect());
        let m = median(gaps.clone()).unwrap_or(f64::NAN);
        out.summary.insert(format!("median_gap.{n}"), real(m));
        trend.push(vec![n.to_string(), gaps.len().to_string(), real(m)]);
        medians.push(m);
    }
    let monotone = medians.windows(2).all(|w| w[1] < w[0]);
    let listing = medians
        .iter()
        .map(|&m| real(m))
        .collect::<Vec<_>>()
        .join(" > ");
    out.check("median_gap_decreasing", monotone, listing);
    let last = *medians.last().expect("nonempty schedule");
    out.check(
        "median_gap_small_at_largest_degree",
        last < EQUIVALENCE_GAP_LIMIT,
        format!("{} < {}", real(last), EQUIVALENCE_GAP_LIMIT),
    );

    let n = *EQUIVALENCE_SIZES.last().expect("nonempty");
    let lengths: Vec<f64> = by_n("length", n)
        .iter()
        .filter_map(|v| rational_to_f64(v))
        .collect();
    let conj = parsed(by_n("conj", n).iter().map(String::as_str).collect());
    let near_length = fraction_within(&lengths, 1.0, 0.01);
    let near_conj = fraction_within(&conj, 1.0, 0.1);
    out.check(
        "hamming_length_near_one",
        near_length >= 0.95,
        format!(
            "{} of trials within 0.01 of 1 at n = {n}",
            real(near_length)
        ),
    );
    out.check(
        "conjugacy_length_near_one",
        near_conj >= 0.95,
        format!("{} of trials within 0.1 of 1 at n = {n}", real(near_conj)),
    );
    out.tables.push(("equivalence".into(), report));
    out.tables.push(("equivalence_trend".into(), trend));
    out
}

pub fn fingerprint_suite(params: &SuiteParams) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("fingerprint");
    let families = [
        FamilyDescriptor::psl(vec![2, 3], vec![3, 9, 27], Characteristic::Prime(3)),
        FamilyDescriptor::psl(vec![2, 3], vec![4, 9, 25], Characteristic::Infinite),
    ];
    let primes = [2u64, 3, 5];
    let mut bad = Vec::new();
    let mut rows = 0;
    for (fi, family) in families.into_iter().enumerate() {
        let family = family.expect("valid schedule");
        let report = match fingerprint_experiment(&family, &primes, params.seed) {
            Ok(r) => r,
            Err(e) => {
                bad.push(e.to_string());
                continue;
            }
        };
        for (n, q) in family.points() {
            let q = q.expect("psl point");
            let (char_p, _) = prime_power(q).expect("prime power");
            for p in primes {
                rows += 1;
                let value = |quantity: &str| {
                    report
                        .rows
                        .iter()
                        .find(|r| {
                            r[1] == n.to_string()
                                && r[2] == q.to_string()
                                && r[3] == format!("p={p}")
                                && r[4] == quantity
                        })
                        .map(|r| r[5].clone())
                };
                let expected = if p == char_p {
                    BigUint::from(q).pow(niceblock_p_core_dim(NiceblockGroup::Sl, n) as u32)
                } else {
                    BigUint::from(1u32)
                };
                let ok = value("p_core_order") == Some(expected.to_string())
                    && (p != char_p || value("length").as_deref() == Some("1/2"));
                if !ok {
                    bad.push(format!(
                        "n={n} q={q} p={p}: {:?}",
                        value("p_core_order").or_else(|| value("error"))
                    ));
                }
            }
        }
        out.tables.push((format!("fingerprint_{fi}"), report));
    }
    out.summary.insert("rows".into(), rows.to_string());
    let detail = if bad.is_empty() {
        format!("{rows} (n, q, p) rows match the dichotomy")
    } else {
        bad.join("; ")
    };
    out.check("p_core_dichotomy", bad.is_empty(), detail);
    out
}
