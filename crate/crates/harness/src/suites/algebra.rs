use msg_core::centralizers::centralizer_factorization;
use msg_core::constructions::{
    approx_centralize, build_niceblock, commutator_table, niceblock_p_core_dim, prepare_near_root,
    project_to_sl, NearRoot, NiceblockGroup,
};
use msg_core::groups::{
    enumerate_psl, enumerate_sl, generated_subgroup, preserves_form, random_invertible,
    random_matrix, random_nonzero, standard_symplectic_form,
};
use msg_core::metrics::{projective_rank_distance, projective_rank_length};
use msg_core::{Field, FieldElement, GroupElement, Matrix, Poly, Rational};
use num_bigint::BigUint;
use rand::Rng;

use super::{SuiteOutcome, SuiteParams, Tally, COMMUTANT_ENUMERATION_LIMIT};

pub(super) const FIELDS: [u64; 6] = [2, 3, 5, 7, 4, 9];
const MAX_DIM: usize = 12;
const MAX_K: usize = 6;

/// A random input `(y, k, alpha)` for near-root preparation.
#[derive(Clone, Debug)]
pub struct NearRootCase {
    pub field: Field,
    pub y: Matrix,
    pub k: usize,
    pub alpha: FieldElement,
}

impl NearRootCase {
    fn describe(&self) -> String {
        format!(
            "field {} k={} alpha={} y={}",
            self.field.spec(),
            self.k,
            self.field.format_element(self.alpha),
            self.y
        )
    }
}

/// Half of the cases are uniform invertible matrices; the rest are random
/// conjugates of `k`-th roots of `alpha` stacked with a random block, then
/// perturbed by a rank-one term, so that the kernel of `y^k - alpha` is large.
pub fn near_root_case<R: Rng>(field: &Field, rng: &mut R) -> NearRootCase {
    let p = field.characteristic() as usize;
    let ks: Vec<usize> = (1..=MAX_K).filter(|k| k % p != 0).collect();
    let k = ks[rng.random_range(0..ks.len())];
    let alpha = random_nonzero(field, rng);
    let n = rng.random_range(1..=MAX_DIM);
    let y = if rng.random_bool(0.5) {
        random_invertible(field, n, rng)
    } else {
        let root = Matrix::companion(field, &Poly::binomial(field, k, alpha));
        let copies = rng.random_range(0..=n / k);
        let mut blocks = vec![root; copies];
        if n > copies * k {
            blocks.push(random_invertible(field, n - copies * k, rng));
        }
        let g = random_invertible(field, n, rng);
        let d = Matrix::block_diagonal(field, &blocks);
        let mut y = g
            .mul(&d)
            .and_then(|m| m.mul(&g.inverse()?))
            .expect("square");
        if rng.random_bool(0.5) {
            let e = random_matrix(field, n, 1, rng)
                .mul(&random_matrix(field, 1, n, rng))
                .expect("outer product");
            let z = y.add(&e).expect("same shape");
            if z.is_invertible() {
                y = z;
            }
        }
        y
    };
    NearRootCase {
        field: field.clone(),
        y,
        k,
        alpha,
    }
}

fn field_of(q: u64) -> Field {
    Field::of_order(q).expect("fixed field list")
}

/// Violated parts of the near-root postconditions, recomputed from scratch.
fn near_root_violations(case: &NearRootCase, out: &NearRoot) -> Vec<String> {
    let f = &case.field;
    let n = case.y.rows();
    let x = &out.x;
    let dec = &out.decomposition;
    let mut bad = Vec::new();
    if !x.is_invertible() {
        bad.push("x is singular".to_string());
    }
    let xk = x.pow(case.k as u64);
    for v in dec.l_basis() {
        let lhs = xk.mul_vec(v).expect("dims");
        let rhs: Vec<FieldElement> = v.iter().map(|&a| f.mul(case.alpha, a)).collect();
        if lhs != rhs {
            bad.push("x^k differs from alpha on L".into());
            break;
        }
    }
    if dec
        .s_basis()
        .iter()
        .any(|s| &x.mul_vec(s).expect("dims") != s)
    {
        bad.push("x is not the identity on S".into());
    }
    let all: Vec<_> = dec.l_basis().iter().chain(dec.s_basis()).cloned().collect();
    if all.len() != n || Matrix::from_columns(f, n, &all).rank() != n {
        bad.push("L and S do not span V".into());
    }
    let mut l_and_image = dec.l_basis().to_vec();
    l_and_image.extend(dec.l_basis().iter().map(|v| x.mul_vec(v).expect("dims")));
    if !l_and_image.is_empty() && Matrix::from_columns(f, n, &l_and_image).rank() != dec.dim_l() {
        bad.push("L is not x-invariant".into());
    }
    let defect = case.y.pow(case.k as u64).shift(case.alpha).rank();
    let change = x.sub(&case.y).expect("dims").rank();
    if dec.dim_s().max(change) > defect {
        bad.push(format!(
            "max(dim S = {}, rk(x - y) = {change}) exceeds rk(y^k - alpha) = {defect}",
            dec.dim_s()
        ));
    }
    if (out.defect_rank, out.rank_change) != (defect, change) {
        bad.push("reported ranks disagree with recomputation".into());
    }
    bad
}

const NEAR_ROOT_TAG: u64 = 1;
const CENTRALIZE_TAG: u64 = 2;
const COMMUTATOR_TAG: u64 = 5;

fn near_root_cases(
    params: &SuiteParams,
    per_field: usize,
) -> impl Iterator<Item = NearRootCase> + '_ {
    FIELDS.iter().enumerate().flat_map(move |(fi, &q)| {
        let field = field_of(q);
        (0..per_field).map(move |i| {
            let mut rng = params.rng(NEAR_ROOT_TAG, fi * per_field + i);
            near_root_case(&field, &mut rng)
        })
    })
}

pub fn near_root_suite(params: &SuiteParams) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("near_root");
    let per_field = params.trials(500);
    let mut tally = Tally::default();
    let mut nontrivial = 0;
    for case in near_root_cases(params, per_field) {
        let n = case.y.rows();
        match prepare_near_root(&case.y, case.k, case.alpha) {
            Ok(res) => {
                let bad = near_root_violations(&case, &res);
                if res.decomposition.dim_l() > 0 && res.decomposition.dim_s() > 0 {
                    nontrivial += 1;
                }
                tally.record(bad.is_empty(), n, || {
                    format!("{} ({})", case.describe(), bad.join("; "))
                });
            }
            Err(e) => tally.record(false, n, || format!("{} ({e})", case.describe())),
        }
    }
    out.summary
        .insert("split_cases".into(), nontrivial.to_string());
    out.tally("conditions_and_rank_bound", tally);
    out
}

/// An invertible `phi` that is either uniform or a commuting element plus a
/// perturbation of rank at most two.
fn centralize_input<R: Rng>(x: &Matrix, rng: &mut R) -> Matrix {
    let f = x.field();
    let n = x.rows();
    if rng.random_bool(0.5) {
        let basis = x.commutant_basis();
        for _ in 0..32 {
            let mut c = Matrix::zeros(f, n, n);
            for b in &basis {
                c = c
                    .add(&b.scale(msg_core::groups::random_element(f, rng)))
                    .expect("dims");
            }
            let r = rng.random_range(0..=2.min(n));
            if r > 0 {
                let e = random_matrix(f, n, r, rng)
                    .mul(&random_matrix(f, r, n, rng))
                    .expect("dims");
                c = c.add(&e).expect("dims");
            }
            if c.is_invertible() {
                return c;
            }
        }
    }
    random_invertible(f, n, rng)
}

pub fn centralize_suite(params: &SuiteParams) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("centralize");
    let trials = params.trials(500);
    let mut tally = Tally::default();
    let mut nonzero_bracket = 0;
    for i in 0..trials {
        let mut rng = params.rng(CENTRALIZE_TAG, i);
        let field = field_of(FIELDS[i % FIELDS.len()]);
        let case = near_root_case(&field, &mut rng);
        let n = case.y.rows();
        let prepared = match prepare_near_root(&case.y, case.k, case.alpha) {
            Ok(p) => p,
            Err(e) => {
                tally.record(false, n, || format!("{} (prepare: {e})", case.describe()));
                continue;
            }
        };
        let x = &prepared.x;
        let dec = &prepared.decomposition;
        let phi = centralize_input(x, &mut rng);
        let repro = |detail: &str| {
            format!(
                "field {} k={} alpha={} x={} phi={} ({detail})",
                field.spec(),
                case.k,
                field.format_element(case.alpha),
                x,
                phi
            )
        };
        match approx_centralize(x, dec, &phi) {
            Ok(c) => {
                let bracket = x.commutator_bracket(&phi).expect("dims").rank();
                if bracket > 0 {
                    nonzero_bracket += 1;
                }
                let cost = phi.sub(&c.psi).expect("dims").rank();
                let bound = 2 * case.k * case.k * bracket + 3 * dec.dim_s();
                let mut bad = Vec::new();
                if !x.commutes_with(&c.psi) {
                    bad.push("psi does not commute with x".to_string());
                }
                if !c.psi.is_invertible() {
                    bad.push("psi is singular".into());
                }
                if cost > bound {
                    bad.push(format!("rk(phi - psi) = {cost} > {bound}"));
                }
                tally.record(bad.is_empty(), n, || repro(&bad.join("; ")));
            }
            Err(e) => tally.record(false, n, || repro(&e.to_string())),
        }
    }
    out.summary
        .insert("noncommuting_inputs".into(), nonzero_bracket.to_string());
    out.tally("commutes_invertible_bounded", tally);
    out
}

/// Number of invertible matrices in the commutant of `x`, by enumerating all
/// `q^d` coefficient vectors over a basis of the commutant.
pub(crate) fn invertible_commutant_count(x: &Matrix, limit: u64) -> Option<u64> {
    let f = x.field();
    let q = f.order();
    let basis = x.commutant_basis();
    let d = basis.len() as u32;
    if q.checked_pow(d).is_none_or(|total| total > limit) {
        return None;
    }
    let n = x.rows();
    let mut digits = vec![0u32; basis.len()];
    let mut current = Matrix::zeros(f, n, n);
    let mut count = 0;
    loop {
        if current.is_invertible() {
            count += 1;
        }
        let mut pos = 0;
        loop {
            if pos == digits.len() {
                return Some(count);
            }
            let old = f.element(digits[pos]).expect("digit in range");
            digits[pos] = (digits[pos] + 1) % q as u32;
            let new = f.element(digits[pos]).expect("digit in range");
            let step = basis[pos].scale(f.sub(new, old));
            current = current.add(&step).expect("dims");
            if digits[pos] != 0 {
                break;
            }
            pos += 1;
        }
    }
}

pub fn factorization_suite(params: &SuiteParams) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("factorization");
    let per_field = params.trials(500);
    let mut count_tally = Tally::default();
    let mut order_tally = Tally::default();
    for case in near_root_cases(params, per_field) {
        let n = case.y.rows();
        let Ok(prepared) = prepare_near_root(&case.y, case.k, case.alpha) else {
            count_tally.record(false, n, || case.describe());
            continue;
        };
        let desc = match centralizer_factorization(&prepared.x, &prepared.decomposition) {
            Ok(d) => d,
            Err(e) => {
                count_tally.record(false, n, || format!("{} ({e})", case.describe()));
                continue;
            }
        };
        let factors = desc.factors.len();
        count_tally.record(factors <= case.k + 1, n, || {
            format!("{} ({factors} factors)", case.describe())
        });
        if let Some(count) = invertible_commutant_count(&prepared.x, COMMUTANT_ENUMERATION_LIMIT) {
            order_tally.record(desc.total_order == BigUint::from(count), n, || {
                format!(
                    "{} (predicted {}, enumerated {count})",
                    case.describe(),
                    desc.total_order
                )
            });
        }
    }
    out.tally("at_most_k_plus_one_factors", count_tally);
    out.tally("order_matches_enumeration", order_tally);
    out
}

pub fn niceblock_suite(params: &SuiteParams) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("niceblock");
    let mut length = Tally::default();
    let mut structure = Tally::default();
    let mut witnesses = Tally::default();
    let mut a_order = Tally::default();
    let half = Rational::new(1, 2);
    for (i, &p) in [2u64, 3, 5].iter().enumerate() {
        let field = field_of(p);
        for n in 2..=6 {
            for group in [NiceblockGroup::Sl, NiceblockGroup::Sp] {
                let label = format!("p={p} n={n} {}", group.tag().prefix());
                let seed = params.seed ^ ((i * 16 + n) as u64);
                let cert = match build_niceblock(n, &field, group, seed) {
                    Ok(c) => c,
                    Err(e) => {
                        length.record(false, n, || format!("{label}: {e}"));
                        continue;
                    }
                };
                let x = cert.x.matrix();
                let recomputed = projective_rank_length(x).expect("square");
                length.record(recomputed == half && cert.x_length == half, n, || {
                    format!("{label}: length {recomputed}")
                });

                let form = standard_symplectic_form(&field, 2 * n);
                let in_group = |m: &Matrix| match group {
                    NiceblockGroup::Sl => m.det().is_ok_and(|d| d == field.one()),
                    NiceblockGroup::Sp => preserves_form(m, &form),
                };
                let mut bad = Vec::new();
                if !x.pow(p).is_identity() || x.is_identity() || !in_group(x) {
                    bad.push("x is not an order-p element of the group".to_string());
                }
                let gens = cert.a_generators.iter().chain(&cert.h_generators);
                if gens.clone().any(|g| !g.commutes_with(x) || !in_group(g)) {
                    bad.push("a generator leaves the centralizer".into());
                }
                let is_a = |m: &Matrix| {
                    let id = Matrix::identity(&field, n);
                    m.submatrix(0, 0, n, n) == id
                        && m.submatrix(n, n, n, n) == id
                        && m.submatrix(n, 0, n, n).is_zero()
                };
                for a in &cert.a_generators {
                    if !is_a(a) || !a.pow(p).is_identity() {
                        bad.push("an A-generator is not upper unitriangular of order p".into());
                    }
                    if cert.a_generators.iter().any(|b| !a.commutes_with(b)) {
                        bad.push("A is not abelian".into());
                    }
                    for h in &cert.h_generators {
                        let conj = h.inverse().and_then(|hi| hi.mul(a)?.mul(h));
                        if !conj.is_ok_and(|c| is_a(&c) && in_group(&c)) {
                            bad.push("A is not normalized by H".into());
                        }
                    }
                }
                bad.dedup();
                structure.record(bad.is_empty(), n, || format!("{label}: {}", bad.join("; ")));

                let u_len = projective_rank_length(&cert.witness_u).expect("square");
                let h_len = projective_rank_length(&cert.witness_h).expect("square");
                let comm = Matrix::commutator(&cert.commutator_u, &cert.commutator_h);
                let c_len = projective_rank_length(&comm).expect("square");
                let target = Rational::new(n as i64 - 2, 3 * n as i64);
                let ok = u_len >= half
                    && h_len >= half
                    && comm == cert.commutator
                    && c_len == cert.commutator_length
                    && c_len >= target
                    && in_group(&cert.commutator_u)
                    && in_group(&cert.commutator_h);
                witnesses.record(ok, n, || {
                    format!("{label}: u {u_len}, h {h_len}, commutator {c_len} (target {target})")
                });

                if n == 2 {
                    let dim = niceblock_p_core_dim(group, n) as u32;
                    let expected = p.pow(dim) as usize;
                    let id = Matrix::identity(&field, 2 * n);
                    let size =
                        generated_subgroup(&cert.a_generators, id, expected + 1).map(|s| s.len());
                    a_order.record(size.as_ref() == Ok(&expected), n, || {
                        format!("{label}: |A| = {size:?}, expected {expected}")
                    });
                }
            }
        }
    }
    out.tally("length_one_half", length);
    out.tally("centralizer_generators", structure);
    out.tally("witness_lengths", witnesses);
    out.tally("abelian_core_order", a_order);
    out
}

pub fn commutator_suite(params: &SuiteParams) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("commutators");
    let trials = params.trials(1000);
    let mut projection = Tally::default();
    for i in 0..trials {
        let mut rng = params.rng(COMMUTATOR_TAG, i);
        let field = field_of(FIELDS[i % FIELDS.len()]);
        let n = rng.random_range(1..=8);
        let g = random_invertible(&field, n, &mut rng);
        let ok = project_to_sl(&g).is_ok_and(|s| {
            s.det().is_ok_and(|d| d == field.one())
                && g.sub(&s).is_ok_and(|d| d.rank() <= 1)
                && projective_rank_distance(&g, &s).is_ok_and(|d| d <= Rational::new(1, n as i64))
        });
        projection.record(ok, n, || format!("field {} g={g}", field.spec()));
    }
    out.tally("sl_projection_rank_one", projection);

    let f3 = field_of(3);
    let sl = enumerate_sl(&f3, 2, 1 << 12).expect("SL_2(3) is small");
    ore_check(&mut out, "every_sl2_3_element_is_a_commutator", &sl);
    let f7 = field_of(7);
    let psl = enumerate_psl(&f7, 2, 1 << 12).expect("PSL_2(7) is small");
    ore_check(&mut out, "every_psl2_7_element_is_a_commutator", &psl);
    out
}

fn ore_check<G: GroupElement + std::fmt::Debug>(out: &mut SuiteOutcome, name: &str, group: &[G]) {
    let table = commutator_table(group).expect("group within budget");
    let verified = table
        .iter()
        .filter(|(g, (a, b))| &G::commutator(a, b) == *g)
        .count();
    let missing: Vec<&G> = group.iter().filter(|g| !table.contains_key(*g)).collect();
    out.summary
        .insert(format!("{name}.commutators"), table.len().to_string());
    let passed = missing.is_empty() && verified == table.len();
    let detail = if passed {
        format!("all {} elements have verified witnesses", group.len())
    } else {
        format!(
            "{} of {} elements are commutators; e.g. {:?} has no witness",
            table.len(),
            group.len(),
            missing.first()
        )
    };
    out.check(name, passed, detail);
}
