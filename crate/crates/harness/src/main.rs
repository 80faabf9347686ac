use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use msg_core::centralizers::{
    centralizer_factorization, characteristic_fingerprint, perm_centralizer_structure,
    permutation_fingerprint, CentralizerDescriptor, Fingerprint,
};
use msg_core::constructions::{
    approx_centralize, build_niceblock, commutator_witness, prepare_near_root, project_to_sl,
    NiceblockGroup, SplitDecomposition, COMMUTATOR_GROUP_BUDGET,
};
use msg_core::geodesics::{hamming_chain, rank_metric_chain, verify_chain, Ambient, ChainPath};
use msg_core::groups::{
    all_even_permutations, all_permutations, enumerate_matrices, enumerate_psl, enumerate_sl,
    preserves_form, standard_symplectic_form, ProjectiveMatrix,
};
use msg_core::metrics::{
    class_size_matrix, conjugacy_distance_perm, conjugacy_distance_psl, hamming_distance, ln_big,
    projective_rank_distance, CLASS_SIZE_BUDGET,
};
use msg_core::{
    ClassicalElement, Field, FieldSpec, GroupDescriptor, GroupTag, Matrix, MetricKind, MetricValue,
    Permutation, Rational, Vector,
};
use msg_lab::experiments::{equivalence_experiment, fingerprint_experiment};
use msg_lab::report::{exact, ExperimentReport};
use msg_lab::runner::{run_suite_file, DEFAULT_SEED};
use msg_lab::{Characteristic, FamilyDescriptor, HarnessError, Result};
use num_bigint::BigUint;

#[derive(Parser)]
#[command(
    name = "msg-lab",
    version,
    about = "Metrics, centralizers and chains in finite simple groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Seed for every randomized step (ChaCha8).
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Trials per schedule point or suite.
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupArg {
    Sl,
    Sp,
}

impl From<GroupArg> for NiceblockGroup {
    fn from(g: GroupArg) -> Self {
        match g {
            GroupArg::Sl => NiceblockGroup::Sl,
            GroupArg::Sp => NiceblockGroup::Sp,
        }
    }
}

#[derive(Args)]
struct RootArgs {
    /// Field as `q` or `p^e:c0,...,ce`.
    #[arg(long)]
    field: String,
    #[arg(long)]
    k: usize,
    /// Field element as comma-separated coefficients.
    #[arg(long, default_value = "1")]
    alpha: String,
}

#[derive(Subcommand)]
enum Command {
    /// Distance between two elements of a group; the second defaults to the identity.
    Metric {
        /// `hamming`, `prank` or `conj`.
        #[arg(long)]
        kind: String,
        /// Group such as `A7`, `S5`, `PSL2(7)` or `GL3(3^2:2,2,1)`.
        #[arg(long)]
        group: String,
        a: String,
        b: Option<String>,
    },
    /// Near-root preparation of an invertible matrix.
    Prepare {
        #[command(flatten)]
        root: RootArgs,
        y: String,
    },
    /// Commuting invertible approximation of `phi` for an element `x`.
    Centralize {
        #[command(flatten)]
        root: RootArgs,
        x: String,
        phi: String,
    },
    /// Block-unipotent element with its centralizer generators and witnesses.
    Niceblock {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        field: String,
        #[arg(long, value_enum, default_value = "sl")]
        group: GroupArg,
    },
    /// Rank-one projection of an invertible matrix to determinant one.
    SlProject {
        #[arg(long)]
        field: String,
        g: String,
    },
    /// Exhaustive commutator witness in a small group such as `PSL2(7)` or `A5`.
    Commutator {
        #[arg(long)]
        group: String,
        element: String,
    },
    /// Block factorization of the centralizer of `x`.
    FactorizeCentralizer {
        #[command(flatten)]
        root: RootArgs,
        x: String,
    },
    /// Wreath-product structure of a permutation centralizer.
    PermCentralizer { sigma: String },
    /// Characteristic fingerprint of an element of prime order `p`.
    Fingerprint {
        #[arg(long)]
        p: u64,
        /// Matrix over this field; a permutation when absent.
        #[arg(long)]
        field: Option<String>,
        #[arg(long, value_enum, default_value = "sl")]
        group: GroupArg,
        element: String,
    },
    /// Chain from the identity to a target with bounded steps.
    Chain {
        /// `hamming` or `prank`.
        #[arg(long)]
        metric: String,
        /// Largest step as a rational such as `1/10`.
        #[arg(long)]
        max_step: String,
        /// Ambient group; required for `prank`. Permutations default to
        /// `A_n` when even and `S_n` otherwise.
        #[arg(long)]
        group: Option<String>,
        element: String,
    },
    /// Seeded experiment over a family schedule: equivalence or fingerprint.
    Experiment {
        name: String,
        /// `alternating` or `psl`.
        #[arg(long, default_value = "alternating")]
        family: String,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        fields: Vec<u64>,
        /// Declared characteristic of a PSL family: a prime or `inf`.
        #[arg(long)]
        characteristic: Option<String>,
        #[arg(long, value_delimiter = ',', default_value = "2,3,5")]
        primes: Vec<u64>,
    },
    /// Runs the suites named in a key-value config file.
    Suite { config: PathBuf },
}

enum Output {
    Pairs(Vec<(String, String)>),
    Table(ExperimentReport),
}

fn pair(key: &str, value: impl ToString) -> (String, String) {
    (key.to_string(), value.to_string())
}

impl Output {
    fn render(&self, format: Format) -> Result<String> {
        Ok(match (self, format) {
            (Output::Pairs(p), Format::Text) => {
                p.iter().map(|(k, v)| format!("{k}: {v}\n")).collect()
            }
            (Output::Pairs(p), Format::Csv) => {
                let mut t = ExperimentReport::new(&["quantity", "value"]);
                for (k, v) in p {
                    t.push(vec![k.clone(), v.clone()]);
                }
                t.to_csv_string()?
            }
            (Output::Table(t), Format::Text) => t
                .rows
                .iter()
                .map(|r| {
                    let cells: Vec<&str> = r
                        .iter()
                        .map(String::as_str)
                        .filter(|c| !c.is_empty())
                        .collect();
                    cells.join(" ") + "\n"
                })
                .collect(),
            (Output::Table(t), Format::Csv) => t.to_csv_string()?,
        })
    }
}

fn field(spec: &str) -> Result<Field> {
    Ok(Field::new(FieldSpec::parse(spec)?))
}

fn matrix(f: &Field, text: &str) -> Result<Matrix> {
    Ok(Matrix::parse(f, text)?)
}

fn basis(f: &Field, vectors: &[Vector]) -> String {
    if vectors.is_empty() {
        return "-".into();
    }
    let n = vectors[0].len();
    Matrix::from_columns(f, n, vectors).transpose().to_string()
}

fn rational(text: &str) -> Result<Rational> {
    text.trim()
        .parse()
        .map_err(|_| HarnessError::Usage(format!("bad rational `{text}`")))
}

fn descriptor_table(d: &CentralizerDescriptor) -> ExperimentReport {
    let mut t = ExperimentReport::new(&["kind", "dim", "ext_degree", "order"]);
    for f in &d.factors {
        t.push(vec![
            f.kind.name().into(),
            f.dim.to_string(),
            f.ext_degree.to_string(),
            f.order.to_string(),
        ]);
    }
    t
}

fn fingerprint_pairs(fp: &Fingerprint) -> Vec<(String, String)> {
    let mut out = vec![
        pair("p", fp.p),
        pair("has_large_p_core", fp.has_large_p_core),
        pair("p_core_order", &fp.p_core_order),
    ];
    if let Some(d) = &fp.reductive_part {
        out.push(pair("centralizer_order", &d.total_order));
        for f in &d.factors {
            out.push(pair("factor", f));
        }
    }
    out
}

fn chain_output<G: std::fmt::Display + msg_core::geodesics::ChainElement>(
    c: &ChainPath<G>,
) -> Output {
    let report = verify_chain(c);
    let mut t = ExperimentReport::new(&["step", "element", "length"]);
    for (i, e) in c.elements.iter().enumerate() {
        let step = if i == 0 {
            String::new()
        } else {
            exact(c.step_lengths[i - 1])
        };
        t.push(vec![i.to_string(), e.to_string(), step]);
    }
    for (key, value) in [
        ("total", exact(c.total)),
        ("overshoot", exact(c.overshoot)),
        ("splits", c.splits.to_string()),
        ("valid", report.valid.to_string()),
    ] {
        t.push(vec![key.into(), String::new(), value]);
    }
    Output::Table(t)
}

fn usage(message: String) -> HarnessError {
    HarnessError::Usage(message)
}

/// Parses a permutation and checks that it lies in `group`.
fn permutation_in(group: &GroupDescriptor, text: &str) -> Result<Permutation> {
    let g = Permutation::parse(text)?;
    match group {
        GroupDescriptor::Symmetric(n) | GroupDescriptor::Alternating(n) if g.degree() != *n => {
            Err(usage(format!("{g} has degree {}, not {n}", g.degree())))
        }
        GroupDescriptor::Alternating(_) if !g.is_even() => {
            Err(usage(format!("{g} is odd, so not in {group}")))
        }
        GroupDescriptor::Symmetric(_) | GroupDescriptor::Alternating(_) => Ok(g),
        GroupDescriptor::Linear { .. } => Err(usage(format!("{group} needs a matrix"))),
    }
}

/// Parses a matrix and checks that it lies in `group`.
fn matrix_in(group: &GroupDescriptor, text: &str) -> Result<Matrix> {
    let GroupDescriptor::Linear { tag, n, field } = group else {
        return Err(usage(format!("{group} needs a permutation")));
    };
    let m = matrix(field, text)?;
    if m.rows() != *n || m.cols() != *n {
        return Err(usage(format!("{group} needs {n}x{n} matrices")));
    }
    let form = (*tag == GroupTag::Sp).then(|| standard_symplectic_form(field, *n));
    ClassicalElement::new(m.clone(), *tag, form)?;
    Ok(m)
}

fn distance(
    kind: MetricKind,
    group: &GroupDescriptor,
    a: &str,
    b: Option<&str>,
) -> Result<MetricValue> {
    if let GroupDescriptor::Linear { tag, n, field } = group {
        let g = matrix_in(group, a)?;
        let h = match b {
            Some(b) => matrix_in(group, b)?,
            None => Matrix::identity(field, *n),
        };
        return Ok(match kind {
            MetricKind::Hamming => return Err(usage("hamming needs S_n or A_n".into())),
            MetricKind::ProjectiveRank => MetricValue::Exact(projective_rank_distance(&g, &h)?),
            MetricKind::Conjugacy if *tag == GroupTag::PslRep => {
                MetricValue::Real(conjugacy_distance_psl(&g, &h, CLASS_SIZE_BUDGET)?)
            }
            MetricKind::Conjugacy => {
                let quotient = g.mul(&h.inverse()?)?;
                let form = (*tag == GroupTag::Sp).then(|| standard_symplectic_form(field, *n));
                let size = class_size_matrix(
                    &ClassicalElement::new(quotient, *tag, form)?,
                    CLASS_SIZE_BUDGET,
                )?;
                let value = if size == BigUint::from(1u32) {
                    0.0
                } else {
                    ln_big(&size) / ln_big(&group.order())
                };
                MetricValue::Real(value)
            }
        });
    }
    let g = permutation_in(group, a)?;
    let h = match b {
        Some(b) => permutation_in(group, b)?,
        None => Permutation::identity(g.degree()),
    };
    Ok(match kind {
        MetricKind::Hamming => MetricValue::Exact(hamming_distance(&g, &h)?),
        MetricKind::ProjectiveRank => return Err(usage("prank needs a linear group".into())),
        MetricKind::Conjugacy => {
            let alternating = matches!(group, GroupDescriptor::Alternating(_));
            MetricValue::Real(conjugacy_distance_perm(&g, &h, alternating)?)
        }
    })
}

/// Every element of `group`, within the exhaustive commutator budget.
fn witness_in(group: &GroupDescriptor, element: &str) -> Result<Option<(String, String)>> {
    let budget = COMMUTATOR_GROUP_BUDGET as u128;
    let render = |w: Option<(String, String)>| Ok(w);
    match group {
        GroupDescriptor::Symmetric(n) | GroupDescriptor::Alternating(n) => {
            let g = Permutation::parse(element)?;
            if g.degree() != *n {
                return Err(HarnessError::Usage(format!(
                    "element has degree {}",
                    g.degree()
                )));
            }
            let elements = match group {
                GroupDescriptor::Symmetric(_) => all_permutations(*n),
                _ => all_even_permutations(*n),
            };
            if !elements.contains(&g) {
                return Err(HarnessError::Usage(format!("{g} is not in {group}")));
            }
            let w = commutator_witness(&g, &elements)?;
            render(w.map(|(a, b)| (a.to_string(), b.to_string())))
        }
        GroupDescriptor::Linear { tag, n, field } => {
            let g = matrix(field, element)?;
            if *tag == GroupTag::PslRep {
                let elements = enumerate_psl(field, *n, budget)?;
                let w = commutator_witness(&ProjectiveMatrix::new(&g), &elements)?;
                return render(w.map(|(a, b)| (a.matrix().to_string(), b.matrix().to_string())));
            }
            let form = standard_symplectic_form(field, *n);
            let elements = match tag {
                GroupTag::Gl => enumerate_matrices(field, *n, budget, Matrix::is_invertible)?,
                GroupTag::Sl => enumerate_sl(field, *n, budget)?,
                _ => enumerate_sl(field, *n, budget)?
                    .into_iter()
                    .filter(|m| preserves_form(m, &form))
                    .collect(),
            };
            if !elements.contains(&g) {
                return Err(HarnessError::Usage(format!("element is not in {group}")));
            }
            let w = commutator_witness(&g, &elements)?;
            render(w.map(|(a, b)| (a.to_string(), b.to_string())))
        }
    }
}

fn run(command: Command, global: &Global) -> Result<Option<(Output, Format)>> {
    let text = Format::Text;
    let out = match command {
        Command::Metric { kind, group, a, b } => {
            let kind = MetricKind::parse(&kind)?;
            let group = GroupDescriptor::parse(&group)?;
            let value = distance(kind, &group, &a, b.as_deref())?;
            (Output::Pairs(vec![pair("distance", value)]), text)
        }
        Command::Prepare { root, y } => {
            let f = field(&root.field)?;
            let alpha = f.parse_element(&root.alpha)?;
            let r = prepare_near_root(&matrix(&f, &y)?, root.k, alpha)?;
            let d = &r.decomposition;
            let pairs = vec![
                pair("x", &r.x),
                pair("l_basis", basis(&f, d.l_basis())),
                pair("s_basis", basis(&f, d.s_basis())),
                pair("dim_l", d.dim_l()),
                pair("dim_s", d.dim_s()),
                pair("defect_rank", r.defect_rank),
                pair("rank_change", r.rank_change),
            ];
            (Output::Pairs(pairs), text)
        }
        Command::Centralize { root, x, phi } => {
            let f = field(&root.field)?;
            let alpha = f.parse_element(&root.alpha)?;
            let x = matrix(&f, &x)?;
            let dec = SplitDecomposition::from_element(&x, root.k, alpha)?;
            let c = approx_centralize(&x, &dec, &matrix(&f, &phi)?)?;
            let pairs = vec![
                pair("psi", &c.psi),
                pair("rank_change", c.rank_change),
                pair("commutator_rank", c.commutator_rank),
                pair("dim_s", dec.dim_s()),
                pair("bound", c.bound),
            ];
            (Output::Pairs(pairs), text)
        }
        Command::Niceblock {
            n,
            field: spec,
            group,
        } => {
            let f = field(&spec)?;
            let c = build_niceblock(n, &f, group.into(), global.seed)?;
            let mut pairs = vec![
                pair("group", c.group.tag().prefix()),
                pair("n", c.n),
                pair("x", c.x.matrix()),
                pair("x_length", exact(c.x_length)),
            ];
            pairs.extend(c.a_generators.iter().map(|g| pair("a_generator", g)));
            pairs.extend(c.h_generators.iter().map(|g| pair("h_generator", g)));
            pairs.extend([
                pair("witness_u", &c.witness_u),
                pair("u_length", exact(c.u_length)),
                pair("witness_h", &c.witness_h),
                pair("h_length", exact(c.h_length)),
                pair("commutator_u", &c.commutator_u),
                pair("commutator_h", &c.commutator_h),
                pair("commutator", &c.commutator),
                pair("commutator_length", exact(c.commutator_length)),
            ]);
            (Output::Pairs(pairs), text)
        }
        Command::SlProject { field: spec, g } => {
            let f = field(&spec)?;
            let g = matrix(&f, &g)?;
            let s = project_to_sl(&g)?;
            let pairs = vec![
                pair("projection", &s),
                pair("det", f.format_element(s.det()?)),
                pair("rank_difference", g.sub(&s)?.rank()),
                pair("distance", exact(projective_rank_distance(&g, &s)?)),
            ];
            (Output::Pairs(pairs), text)
        }
        Command::Commutator { group, element } => {
            let group = GroupDescriptor::parse(&group)?;
            let pairs = match witness_in(&group, &element)? {
                Some((a, b)) => vec![pair("a", a), pair("b", b)],
                None => vec![pair("witness", "none")],
            };
            (Output::Pairs(pairs), text)
        }
        Command::FactorizeCentralizer { root, x } => {
            let f = field(&root.field)?;
            let alpha = f.parse_element(&root.alpha)?;
            let x = matrix(&f, &x)?;
            let dec = SplitDecomposition::from_element(&x, root.k, alpha)?;
            let d = centralizer_factorization(&x, &dec)?;
            (Output::Table(descriptor_table(&d)), text)
        }
        Command::PermCentralizer { sigma } => {
            let s = perm_centralizer_structure(&Permutation::parse(&sigma)?);
            let mut pairs = vec![pair("order", &s.descriptor.total_order)];
            pairs.extend(s.descriptor.factors.iter().map(|f| pair("factor", f)));
            if let Some(shape) = &s.prime_shape {
                pairs.extend([
                    pair("m_order", &shape.m_order),
                    pair("t1_degree", shape.t1_degree),
                    pair("t2_degree", shape.t2_degree),
                ]);
            }
            (Output::Pairs(pairs), text)
        }
        Command::Fingerprint {
            p,
            field: spec,
            group,
            element,
        } => {
            let fp = match spec {
                Some(s) => {
                    let f = field(&s)?;
                    characteristic_fingerprint(&matrix(&f, &element)?, p, group.into())?
                }
                None => {
                    let fp = permutation_fingerprint(&Permutation::parse(&element)?)?;
                    if fp.p != p {
                        return Err(HarnessError::Usage(format!("element has order {}", fp.p)));
                    }
                    fp
                }
            };
            (Output::Pairs(fingerprint_pairs(&fp)), text)
        }
        Command::Chain {
            metric,
            max_step,
            group,
            element,
        } => {
            let max_step = rational(&max_step)?;
            let group = group.as_deref().map(GroupDescriptor::parse).transpose()?;
            let out = match (MetricKind::parse(&metric)?, group) {
                (MetricKind::Hamming, group) => {
                    let sigma = Permutation::parse(&element)?;
                    let ambient = match group {
                        None if sigma.is_even() => Ambient::Alternating,
                        None | Some(GroupDescriptor::Symmetric(_)) => Ambient::Symmetric,
                        Some(GroupDescriptor::Alternating(_)) => Ambient::Alternating,
                        Some(g) => {
                            return Err(usage(format!(
                                "hamming chains live in S_n or A_n, not {g}"
                            )))
                        }
                    };
                    if let Some(g) = group {
                        permutation_in(&g, &element)?;
                    }
                    chain_output(&hamming_chain(&sigma, max_step, ambient)?)
                }
                (MetricKind::ProjectiveRank, Some(g @ GroupDescriptor::Linear { .. })) => {
                    let m = matrix_in(&g, &element)?;
                    chain_output(&rank_metric_chain(&m, max_step, global.seed)?)
                }
                (MetricKind::ProjectiveRank, _) => {
                    return Err(usage("prank chains need a linear --group".into()))
                }
                (MetricKind::Conjugacy, _) => {
                    return Err(usage("the conjugacy metric has no chains".into()))
                }
            };
            (out, text)
        }
        Command::Experiment {
            name,
            family,
            sizes,
            fields,
            characteristic,
            primes,
        } => {
            let family = match family.as_str() {
                "alternating" => FamilyDescriptor::alternating(sizes)?,
                "psl" => {
                    let declared = match characteristic {
                        Some(c) => Characteristic::parse(&c)?,
                        None => {
                            return Err(HarnessError::Usage(
                                "psl families need --characteristic".into(),
                            ))
                        }
                    };
                    FamilyDescriptor::psl(sizes, fields, declared)?
                }
                other => return Err(HarnessError::Usage(format!("unknown family `{other}`"))),
            };
            let report = match name.as_str() {
                "equivalence" => {
                    equivalence_experiment(&family, global.trials.unwrap_or(200), global.seed)
                }
                "fingerprint" => fingerprint_experiment(&family, &primes, global.seed)?,
                other => return Err(HarnessError::Usage(format!("unknown experiment `{other}`"))),
            };
            (Output::Table(report), Format::Csv)
        }
        Command::Suite { config } => {
            let mut run = run_suite_file(&config)?;
            for o in &run.outcomes {
                for c in &o.checks {
                    let status = if c.passed { "PASS" } else { "FAIL" };
                    println!("{status} {}/{}: {}", o.name, c.name, c.detail);
                }
            }
            for m in &run.mismatches {
                println!("MISMATCH {m}");
            }
            for p in run.written.drain(..) {
                eprintln!("wrote {}", p.display());
            }
            if !run.success() {
                return Err(HarnessError::Usage("suite failed".into()));
            }
            return Ok(None);
        }
    };
    Ok(Some(out))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(cli.command, &cli.global).and_then(|out| {
        let Some((output, default)) = out else {
            return Ok(());
        };
        let rendered = output.render(cli.global.format.unwrap_or(default))?;
        match (&cli.global.out, &output) {
            // tables always land as CSV with a metadata sidecar
            (Some(path), Output::Table(t)) => t.save(path).map(|_| ()),
            (Some(path), _) => fs::write(path, &rendered)
                .map_err(|e| HarnessError::Usage(format!("{}: {e}", path.display()))),
            (None, _) => {
                print!("{rendered}");
                Ok(())
            }
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
