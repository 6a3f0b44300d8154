//! `poset-ramsey`: bounds, exact searches, constructions and coloring checks
//! from the command line.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use poset_ramsey::constructive::{
    blob_lemma_embed, find_mono_diamond, find_mono_fork, sausage_chain_build, thm11_construct,
    witness_coloring, BooleanCopy, ConstructError, MonoCopy, SausageLayout, Thm11Options,
    TruncationPlan, WeakCopyOutcome, WitnessKind, MAX_MATERIALIZED_DIMENSION,
};
use poset_ramsey::extremal::{
    blob_lemma_dimension, diamond_bounds, epsilon_condition_lhs, fork_bounds, n_plus, n_star,
    sperner_alpha, thm11_bound, ExtremalError,
};
use poset_ramsey::lattice::{
    parse_oracle, Color, ColorTable, Coloring, GroundSet, Vertex, MAX_TABLE_DIMENSION,
};
use poset_ramsey::numerics::{check_weak_budget, EntropyConstants};
use poset_ramsey::posets::{
    find_mono_copy, make_poset, verify_colored, verify_embedding, EmbeddingKind, FinitePoset,
};
use poset_ramsey::ramsey_search::{
    ramsey_number_exact, weak_ramsey_exact, RamseyOutcome, SearchConfig,
};

const VERSION: &str = concat!(
    env!("CARGO_PKG_VERSION"),
    " (coloring format 1, json schema 1)"
);

#[derive(Parser)]
#[command(name = "poset-ramsey", version = VERSION, about = "Ramsey numbers of posets in Boolean lattices")]
struct Cli {
    /// Line-delimited JSON objects instead of tables.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form bounds for `R(Q_m, Q_n)`, diamonds and forks.
    Bounds {
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        n: u64,
        /// Defaults to `1/√(log m)`.
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// α(n): the least N with C(N, ⌊N/2⌋) ≥ n.
    Alpha {
        #[arg(long)]
        n: u64,
    },
    /// N*(n), the dimension of the fork-free layered coloring.
    Nstar {
        #[arg(long)]
        n: u64,
    },
    /// The entropy constants q, c, d and the weak-copy budget inequality.
    Constants,
    /// Check a coloring file for a monochromatic copy; exit 1 when none exists.
    VerifyColoring {
        #[arg(long)]
        coloring: PathBuf,
        #[arg(long)]
        p: String,
        /// Both colors when omitted.
        #[arg(long)]
        color: Option<ColorArg>,
        #[arg(long)]
        weak: bool,
    },
    /// Print a monochromatic copy of a poset.
    FindCopy {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        p: String,
        #[arg(long)]
        color: ColorArg,
        #[arg(long)]
        weak: bool,
    },
    /// Exact `R(P, Q)` by exhaustive search.
    Ramsey {
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
        #[arg(long)]
        weak: bool,
        #[arg(long, default_value_t = 6)]
        nmax: usize,
        /// DFS node cap per dimension.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Write the good coloring at `R − 1` here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one of the constructive procedures on a coloring.
    Construct {
        #[arg(value_enum)]
        kind: ConstructKind,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        epsilon: Option<f64>,
        /// Host dimension for thm11 when the ε-condition fails.
        #[arg(long)]
        host: Option<usize>,
        #[command(flatten)]
        source: SourceArgs,
    },
    /// Write the layered coloring with no monochromatic diamond or fork.
    Witness {
        #[arg(long, value_enum)]
        kind: WitnessArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SourceArgs {
    /// Coloring file: `N=<int>` then 2^N characters over {B,R}.
    #[arg(long, conflicts_with = "oracle")]
    coloring: Option<PathBuf>,
    /// `all-blue`, `all-red`, `random:<seed>`, `biased:<p_blue>:<seed>`, `layered:<threshold>`.
    #[arg(long)]
    oracle: Option<String>,
    /// Host dimension for an oracle; defaults to what the procedure needs.
    #[arg(long)]
    dim: Option<usize>,
    /// Oracle query budget.
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ColorArg {
    Blue,
    Red,
}

impl From<ColorArg> for Color {
    fn from(c: ColorArg) -> Color {
        match c {
            ColorArg::Blue => Color::Blue,
            ColorArg::Red => Color::Red,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructKind {
    Blob,
    Thm11,
    Diamond,
    Fork,
    Weak,
}

#[derive(Clone, Copy, ValueEnum)]
enum WitnessArg {
    Diamond,
    Fork,
}

/// Exit statuses: 0 success, 1 not found or undecided, 2 usage, 3 internal bug.
enum Failure {
    Outcome(String),
    Usage(String),
    Bug(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Outcome(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Bug(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Outcome(m) | Failure::Usage(m) | Failure::Bug(m) => m,
        }
    }
}

impl From<ExtremalError> for Failure {
    fn from(e: ExtremalError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<ConstructError> for Failure {
    fn from(e: ConstructError) -> Self {
        match e {
            ConstructError::BugCertificate(_) | ConstructError::PropertyStarViolated { .. } => {
                Failure::Bug(e.to_string())
            }
            ConstructError::BadParameters(_)
            | ConstructError::Extremal(_)
            | ConstructError::Poset(_)
            | ConstructError::Unbounded { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Outcome(e.to_string()),
        }
    }
}

type Run = Result<(), Failure>;

struct Out {
    json: bool,
}

impl Out {
    fn emit(&self, obj: Value, text: impl FnOnce() -> String) {
        if self.json {
            println!("{obj}");
        } else {
            println!("{}", text());
        }
    }
}

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn poset(spec: &str) -> Result<FinitePoset, Failure> {
    make_poset(spec).map_err(|e| usage(format!("poset `{spec}`: {e}")))
}

fn read_table(path: &PathBuf) -> Result<(ColorTable, bool), Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let table = ColorTable::parse(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let exact = table.to_file_string() == text;
    Ok((table, exact))
}

fn write_or_print(table: &ColorTable, out: Option<&PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, table.to_file_string())
            .map_err(|e| usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{}", table.to_file_string());
            Ok(())
        }
    }
}

fn open_coloring(source: &SourceArgs, default_dim: usize) -> Result<Coloring, Failure> {
    match (&source.coloring, &source.oracle) {
        (Some(path), None) => Ok(Coloring::explicit(read_table(path)?.0)),
        (None, Some(spec)) => {
            let oracle = parse_oracle(spec).map_err(usage)?;
            let dim = source.dim.unwrap_or(default_dim);
            Ok(Coloring::oracle(GroundSet::new(dim), oracle, source.budget))
        }
        _ => Err(usage("give exactly one of --coloring and --oracle")),
    }
}

fn bounds(out: &Out, m: Option<u64>, n: u64, epsilon: Option<f64>) -> Run {
    if let Some(m) = m {
        let value = blob_lemma_dimension(m, n)?;
        out.emit(
            json!({"theorem_tag": "blob-lemma", "m": m, "n": n, "value": value}),
            || format!("blob lemma      R(Q_{m}, Q_{n}) ≤ {value}"),
        );
        let eps = epsilon.unwrap_or_else(|| 1.0 / (m as f64).log2().sqrt());
        match thm11_bound(m, n, eps) {
            Ok(b) => out.emit(serde_json::to_value(&b).expect("plain data"), || {
                format!(
                    "truncated blobs R(Q_{m}, Q_{n}) ≤ {:.3}  (ε = {eps}, condition {:.6} ≤ ε)",
                    b.value, b.condition_lhs
                )
            }),
            Err(ExtremalError::EpsilonCondition { lhs, .. }) => {
                eprintln!("truncated-blob bound skipped: ε-condition fails ({lhs:.6} > {eps})")
            }
            Err(e) => return Err(e.into()),
        }
    }
    if n >= 2 {
        let d = diamond_bounds(n)?;
        out.emit(serde_json::to_value(&d).expect("plain data"), || {
            format!(
                "diamond         {} ≤ R(D_{n}, D_{n}) ≤ {}",
                d.lower, d.upper
            )
        });
        let f = fork_bounds(n)?;
        out.emit(serde_json::to_value(&f).expect("plain data"), || {
            let sharper = f
                .sharper_upper
                .map(|s| format!(" (sharper: ≤ {s})"))
                .unwrap_or_default();
            format!(
                "fork            {} ≤ R(V_{n}, V_{n}) ≤ {}{sharper}",
                f.lower, f.upper
            )
        });
    }
    Ok(())
}

fn constants(out: &Out) -> Run {
    let k = EntropyConstants::compute();
    let budget = check_weak_budget(1);
    let obj = json!({
        "q": k.q,
        "c": k.c,
        "d": k.d,
        "integral_q": k.integral_q,
        "weak_objective": k.weak_objective,
        "objective_le_0956": budget.lhs_le_middle,
        "0956_le_096": budget.middle_le_rhs,
    });
    out.emit(obj, || {
        format!(
            "q                 {:.12}\nc                 {:.12}\nd                 {:.12}\n∫₀^q H            {:.12}\n(1−q) + 2∫₀^q H   {:.12}  ≤ 0.956: {}",
            k.q, k.c, k.d, k.integral_q, k.weak_objective, budget.lhs_le_middle
        )
    });
    Ok(())
}

fn kind_of(weak: bool) -> EmbeddingKind {
    if weak {
        EmbeddingKind::Weak
    } else {
        EmbeddingKind::Induced
    }
}

fn verify_coloring(
    out: &Out,
    path: &PathBuf,
    spec: &str,
    color: Option<ColorArg>,
    weak: bool,
) -> Run {
    let (table, exact) = read_table(path)?;
    let p = poset(spec)?;
    let kind = kind_of(weak);
    let colors = match color {
        Some(c) => vec![Color::from(c)],
        None => vec![Color::Blue, Color::Red],
    };
    let mut any = false;
    for c in colors {
        let found = find_mono_copy(&table, &p, c, kind);
        if let Some(e) = &found {
            if !verify_colored(e, &p, &table, c) {
                return Err(Failure::Bug(format!(
                    "{c} copy of {spec} fails verification"
                )));
            }
        }
        any |= found.is_some();
        let verdict = if found.is_some() { "Found" } else { "NotFound" };
        out.emit(
            json!({
                "dimension": table.dimension(),
                "round_trip": exact,
                "poset": spec,
                "color": c,
                "kind": kind,
                "verdict": verdict,
                "embedding": found.map(|e| e.map),
            }),
            || verdict.to_string(),
        );
    }
    if any {
        Ok(())
    } else {
        Err(Failure::Outcome(String::new()))
    }
}

fn find_copy(out: &Out, source: &SourceArgs, spec: &str, color: ColorArg, weak: bool) -> Run {
    let p = poset(spec)?;
    let table = match (&source.coloring, &source.oracle) {
        (Some(path), None) => read_table(path)?.0,
        (None, Some(_)) => {
            let dim = source
                .dim
                .ok_or_else(|| usage("--oracle needs --dim for find-copy"))?;
            if dim > MAX_TABLE_DIMENSION {
                return Err(usage(format!(
                    "--dim {dim} exceeds the table limit {MAX_TABLE_DIMENSION}"
                )));
            }
            let coloring = open_coloring(source, dim)?;
            let mut err = None;
            let table = ColorTable::from_fn(dim, |mask| {
                match coloring.color_of(&Vertex::from_mask(mask as u64)) {
                    Ok(c) => c,
                    Err(e) => {
                        err.get_or_insert(e);
                        Color::Red
                    }
                }
            })
            .map_err(usage)?;
            if let Some(e) = err {
                return Err(ConstructError::from(e).into());
            }
            table
        }
        _ => return Err(usage("give exactly one of --coloring and --oracle")),
    };
    let color = Color::from(color);
    let kind = kind_of(weak);
    match find_mono_copy(&table, &p, color, kind) {
        Some(e) => {
            if !verify_colored(&e, &p, &table, color) {
                return Err(Failure::Bug(format!(
                    "{color} copy of {spec} fails verification"
                )));
            }
            out.emit(json!({"poset": spec, "color": color, "kind": kind, "verdict": "Found", "embedding": e.map}), || {
                e.map.iter().enumerate().map(|(i, v)| format!("{i}\t{v}")).collect::<Vec<_>>().join("\n")
            });
            Ok(())
        }
        None => {
            out.emit(
                json!({"poset": spec, "color": color, "kind": kind, "verdict": "NotFound"}),
                || "NotFound".into(),
            );
            Err(Failure::Outcome(String::new()))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn ramsey(
    out: &Out,
    p: &str,
    q: &str,
    weak: bool,
    nmax: usize,
    budget: Option<u64>,
    threads: usize,
    file: Option<&PathBuf>,
) -> Run {
    let (pp, qq) = (poset(p)?, poset(q)?);
    let config = SearchConfig {
        node_budget: budget,
        threads: threads.max(1),
        ..SearchConfig::default()
    };
    let outcome = if weak {
        weak_ramsey_exact(&pp, &qq, nmax, &config)
    } else {
        ramsey_number_exact(&pp, &qq, nmax, &config)
    }
    .map_err(usage)?;
    match outcome {
        RamseyOutcome::Exact(r) => {
            if let (Some(path), Some(w)) = (file, &r.witness) {
                write_or_print(w, Some(path))?;
            }
            out.emit(
                json!({
                    "p": p,
                    "q": q,
                    "kind": r.kind,
                    "verdict": "Exact",
                    "value": r.value,
                    "nodes": r.stats.nodes,
                    "witness": r.witness.as_ref().map(|w| w.to_file_string()),
                }),
                || r.value.to_string(),
            );
            Ok(())
        }
        RamseyOutcome::Unknown { checked, stats } => {
            out.emit(
                json!({"p": p, "q": q, "kind": kind_of(weak), "verdict": "Unknown", "checked": checked, "nodes": stats.nodes}),
                || format!("Unknown (good colorings or budget exhaustion up to dimension {checked})"),
            );
            Err(Failure::Outcome(String::new()))
        }
    }
}

fn copy_json(copy: &BooleanCopy) -> Value {
    let witness = if copy.dimension <= MAX_MATERIALIZED_DIMENSION {
        copy.materialize().ok().map(|(_, e)| e.map)
    } else {
        None
    };
    json!({
        "color": copy.color,
        "dimension": copy.dimension,
        "lower": copy.lower,
        "upper": copy.upper,
        "size": copy.size(),
        "witness": witness,
    })
}

fn mono_json(copy: &MonoCopy) -> Value {
    json!({"color": copy.color, "dimension": copy.dimension, "witness": copy.embedding.map})
}

fn construct(
    out: &Out,
    kind: ConstructKind,
    m: Option<usize>,
    n: usize,
    epsilon: Option<f64>,
    host: Option<usize>,
    source: &SourceArgs,
) -> Run {
    let need_m = || m.ok_or_else(|| usage("this construction needs --m"));
    let (name, body) = match kind {
        ConstructKind::Blob => {
            let m = need_m()?;
            let c = open_coloring(source, n * m + n + m)?;
            let copy = blob_lemma_embed(&c, m, n)?;
            let verified = copy.verify(&c)?;
            (
                "blob",
                json!({"host": c.ground().size, "copy": copy_json(&copy), "verified": verified, "queries": c.queries()}),
            )
        }
        ConstructKind::Thm11 => {
            let m = need_m()?;
            let eps = epsilon.unwrap_or_else(|| 1.0 / (m as f64).log2().sqrt());
            let plan = TruncationPlan::new(m, n, eps, host.or(source.dim))?;
            let c = open_coloring(source, plan.dimension)?;
            let opts = Thm11Options {
                host_dimension: host
                    .or(source.dim)
                    .or(source.coloring.as_ref().map(|_| c.ground().size)),
                exhaustive_phase1: false,
            };
            let report = thm11_construct(&c, m, n, eps, &opts)?;
            let verified = report.copy.verify(&c)?;
            (
                "thm11",
                json!({
                    "host": c.ground().size,
                    "plan": report.plan,
                    "condition_lhs": epsilon_condition_lhs(m as u64, n as u64, eps),
                    "branch": report.branch,
                    "audits": report.audits,
                    "reservoir_total": report.reservoir_total,
                    "reservoir_room": report.reservoir_room,
                    "copy": copy_json(&report.copy),
                    "verified": verified,
                    "queries": report.queries,
                }),
            )
        }
        ConstructKind::Diamond => {
            let dim = (sperner_alpha(n as u64)? + sperner_alpha(2 * n as u64 - 1)?) as usize;
            let c = open_coloring(source, dim)?;
            let copy = find_mono_diamond(&c, n)?;
            let verified = copy.verify(&FinitePoset::diamond(n), &c)?;
            (
                "diamond",
                json!({"host": c.ground().size, "copy": mono_json(&copy), "verified": verified, "queries": c.queries()}),
            )
        }
        ConstructKind::Fork => {
            let c = open_coloring(source, n_plus(n as u64)? as usize)?;
            let copy = find_mono_fork(&c, n)?;
            let verified = copy.verify(&FinitePoset::fork(n), &c)?;
            (
                "fork",
                json!({"host": c.ground().size, "copy": mono_json(&copy), "verified": verified, "queries": c.queries()}),
            )
        }
        ConstructKind::Weak => {
            let required = SausageLayout::new(n, 0)
                .map(|l| l.required_dimension())
                .unwrap_or(0);
            let c = open_coloring(source, required)?;
            let outcome = sausage_chain_build(&c, n)?;
            let body = match &outcome {
                WeakCopyOutcome::Weak(r) => {
                    let shape =
                        verify_embedding(&r.embedding, &FinitePoset::boolean(n).map_err(usage)?);
                    let mut colored = true;
                    for v in &r.embedding.map {
                        colored &= c.color_of(v).map_err(ConstructError::from)? == r.color;
                    }
                    json!({
                    "host": c.ground().size,
                    "shape": "weak",
                    "color": r.color,
                    "s": r.s,
                    "t": r.t,
                    "lower_majorities": r.lower_majorities,
                    "upper_majorities": r.upper_majorities,
                    "witness": r.embedding.map,
                    "verified": shape && colored,
                    "queries": c.queries(),
                    })
                }
                WeakCopyOutcome::Induced { copy, .. } => json!({
                    "host": c.ground().size,
                    "shape": "induced",
                    "copy": copy_json(copy),
                    "verified": copy.verify(&c)?,
                    "queries": c.queries(),
                }),
            };
            ("weak", body)
        }
    };
    let verified = body["verified"].as_bool().unwrap_or(false);
    let mut obj = json!({"construction": name, "n": n, "m": m});
    obj.as_object_mut()
        .expect("object")
        .extend(body.as_object().expect("object").clone());
    out.emit(obj.clone(), || {
        let color = obj
            .pointer("/copy/color")
            .or_else(|| obj.get("color"))
            .cloned()
            .unwrap_or(Value::Null);
        format!(
            "{name}: {} copy in Q_{} ({} queries), verified: {verified}",
            color.as_str().unwrap_or("?"),
            obj["host"],
            obj["queries"]
        )
    });
    if verified {
        Ok(())
    } else {
        Err(Failure::Bug(format!(
            "{name} construction returned an unverified copy"
        )))
    }
}

fn witness(kind: WitnessArg, n: usize, file: Option<&PathBuf>) -> Run {
    let kind = match kind {
        WitnessArg::Diamond => WitnessKind::Diamond,
        WitnessArg::Fork => WitnessKind::Fork,
    };
    write_or_print(&witness_coloring(kind, n)?, file)
}

fn run(cli: Cli) -> Run {
    let out = Out { json: cli.json };
    match cli.command {
        Command::Bounds { m, n, epsilon } => bounds(&out, m, n, epsilon),
        Command::Alpha { n } => {
            let a = sperner_alpha(n)?;
            out.emit(json!({"n": n, "alpha": a}), || a.to_string());
            Ok(())
        }
        Command::Nstar { n } => {
            let s = n_star(n)?;
            out.emit(json!({"n": n, "n_star": s}), || s.to_string());
            Ok(())
        }
        Command::Constants => constants(&out),
        Command::VerifyColoring {
            coloring,
            p,
            color,
            weak,
        } => verify_coloring(&out, &coloring, &p, color, weak),
        Command::FindCopy {
            source,
            p,
            color,
            weak,
        } => find_copy(&out, &source, &p, color, weak),
        Command::Ramsey {
            p,
            q,
            weak,
            nmax,
            budget,
            threads,
            out: file,
        } => ramsey(&out, &p, &q, weak, nmax, budget, threads, file.as_ref()),
        Command::Construct {
            kind,
            m,
            n,
            epsilon,
            host,
            source,
        } => construct(&out, kind, m, n, epsilon, host, &source),
        Command::Witness { kind, n, out: file } => witness(kind, n, file.as_ref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.message().is_empty() {
                eprintln!("error: {}", f.message());
            }
            ExitCode::from(f.code())
        }
    }
}
