//! Command-line front end: generation, exponents, diagnostics, exact
//! solving, and seeded threshold sweeps, with reproducible file outputs.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Rational64;
use serde_json::{json, Value};

use transference_core::boundedness::{
    certify_boundedness, mu_montecarlo, prune_check_many, OverlapProfile, QGrid,
};
use transference_core::density::{min_induced_edges, subgraph_density};
use transference_core::generators::{ConfigSpec, Family};
use transference_core::harness::{
    estimate_crossing, parse_ratio, CurveRow, Experiment, ExperimentManifest, CURVE_CSV_HEADER,
};
use transference_core::hypergraph::UniformHypergraph;
use transference_core::matrix::IntegerMatrix;
use transference_core::solver::{alpha_exact, arrow_decide, turan_ex, ArrowOutcome, DEFAULT_BUDGET};
use transference_core::subset::VertexSubset;
use transference_core::Error as CoreError;

const TOOL: &str = "transference-lab";
const VERSION: &str = env!("CARGO_PKG_VERSION");
const FORMAT_VERSION: u32 = 1;
const DEFAULT_SEED: u64 = 1729;

#[derive(Parser)]
#[command(name = TOOL, version = VERSION, about = "Configuration hypergraphs, threshold exponents, and seeded threshold experiments", max_term_width = 100)]
struct Cli {
    /// Master seed for all randomized operations.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads (default: all cores). Results never depend on this.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a configuration hypergraph and write it out.
    Gen(GenArgs),
    /// Threshold exponent machinery: matrix classification and densities.
    Mparam(MparamArgs),
    /// Minimum induced edge counts over fixed-size vertex subsets.
    DenseProbe(DenseProbeArgs),
    /// Expected squared-degree sums, exact and Monte-Carlo.
    Mu(MuArgs),
    /// Boundedness constants across instance sizes and a density grid.
    Bounded(BoundedArgs),
    /// Greedy pruning check of the post-deletion squared-degree sum.
    Prune(PruneArgs),
    /// Maximum edge-free subset of a hypergraph.
    Alpha(AlphaArgs),
    /// Largest pattern-free edge subset of a host graph.
    Turan(TuranArgs),
    /// Decide the density arrow property on a concrete subset.
    Arrow(ArrowArgs),
    /// Run a manifest's q-schedule and write the threshold curve.
    Sweep(SweepArgs),
    /// Fit a crossing point to a previously written curve CSV.
    Crossing(CrossingArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyKind {
    Ap,
    Homothetic,
    Linear,
    Schur,
    Fcopies,
}

#[derive(Args)]
struct FamilyArgs {
    /// Configuration family.
    #[arg(long, value_enum)]
    family: FamilyKind,
    /// Progression length (family ap).
    #[arg(long)]
    k: Option<usize>,
    /// Point dimension (homothetic) or host uniformity (fcopies).
    #[arg(long)]
    ell: Option<usize>,
    /// Pattern points as "x,y;x,y;..." (family homothetic).
    #[arg(long)]
    points: Option<String>,
    /// Matrix file (family linear).
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// Pattern hypergraph file (family fcopies).
    #[arg(long)]
    pattern: Option<PathBuf>,
}

impl FamilyArgs {
    fn build(&self) -> anyhow::Result<Family> {
        let need = |flag: &str, family: &str| anyhow!("--{flag} is required for --family {family}");
        Ok(match self.family {
            FamilyKind::Ap => Family::Progressions {
                k: self.k.ok_or_else(|| need("k", "ap"))?,
            },
            FamilyKind::Homothetic => {
                let ell = self.ell.ok_or_else(|| need("ell", "homothetic"))?;
                let text = self
                    .points
                    .as_ref()
                    .ok_or_else(|| need("points", "homothetic"))?;
                Family::Homothetic {
                    ell,
                    points: parse_points(text)?,
                }
            }
            FamilyKind::Linear => {
                let path = self.matrix.as_ref().ok_or_else(|| need("matrix", "linear"))?;
                Family::Linear {
                    matrix: read_matrix(path)?,
                }
            }
            FamilyKind::Schur => Family::Schur,
            FamilyKind::Fcopies => {
                let ell = self.ell.ok_or_else(|| need("ell", "fcopies"))?;
                let path = self
                    .pattern
                    .as_ref()
                    .ok_or_else(|| need("pattern", "fcopies"))?;
                Family::PatternCopies {
                    ell,
                    pattern: read_hypergraph(path)?,
                }
            }
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenFormat {
    Text,
    Json,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Ground-set scale.
    #[arg(long)]
    n: usize,
    #[arg(short, long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: GenFormat,
}

#[derive(Args)]
struct MparamArgs {
    /// Integer matrix file: classification plus partition density.
    #[arg(long, conflicts_with_all = ["ap", "schur", "hypergraph"])]
    matrix: Option<PathBuf>,
    /// Progression matrix of this length.
    #[arg(long, conflicts_with_all = ["schur", "hypergraph"])]
    ap: Option<usize>,
    /// The Schur matrix (1 1 -1).
    #[arg(long, conflicts_with = "hypergraph")]
    schur: bool,
    /// Pattern hypergraph file: subgraph density and extremal reference.
    #[arg(long)]
    hypergraph: Option<PathBuf>,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DenseProbeArgs {
    #[arg(long)]
    hypergraph: PathBuf,
    /// Subset sizes, comma separated.
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MuArgs {
    /// Hypergraph file to evaluate on.
    #[arg(long)]
    hypergraph: PathBuf,
    /// Overlap threshold i.
    #[arg(long)]
    i: usize,
    /// Densities, comma separated.
    #[arg(long, value_delimiter = ',')]
    q: Vec<f64>,
    /// Add Monte-Carlo columns with this many trials.
    #[arg(long)]
    mc: Option<usize>,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct BoundedArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Instance sizes, comma separated.
    #[arg(long, value_delimiter = ',')]
    n_list: Vec<usize>,
    /// Overlap threshold i.
    #[arg(long)]
    i: usize,
    /// Density grid: "geometric:POINTS" or "explicit:q1,q2,...".
    #[arg(long, default_value = "geometric:20")]
    grid: String,
    #[arg(long, value_enum, default_value = "csv")]
    format: ReportFormat,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PruneArgs {
    #[arg(long)]
    hypergraph: PathBuf,
    #[arg(long)]
    q: f64,
    /// Overlap threshold i.
    #[arg(long)]
    i: usize,
    /// Deletion budget fraction: up to eta*q*|V| sampled vertices.
    #[arg(long)]
    eta: f64,
    /// Boundedness constant K entering the target bound.
    #[arg(long)]
    cap: f64,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AlphaArgs {
    #[arg(long)]
    hypergraph: PathBuf,
    /// Restrict to this vertex subset first (file of indices).
    #[arg(long)]
    subset: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TuranArgs {
    /// Host ground-set size.
    #[arg(long)]
    n: usize,
    /// Host edge size.
    #[arg(long, default_value_t = 2)]
    ell: usize,
    /// Forbidden pattern hypergraph file.
    #[arg(long)]
    pattern: PathBuf,
    /// Host edges as a file of colex ranks (default: complete host).
    #[arg(long)]
    host: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ArrowArgs {
    #[arg(long)]
    hypergraph: PathBuf,
    /// Sampled vertex subset (file of indices).
    #[arg(long)]
    subset: PathBuf,
    /// Density increment, e.g. "1/2" or "0.5" (kept exact).
    #[arg(long)]
    epsilon: String,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Experiment manifest (JSON).
    #[arg(long)]
    manifest: PathBuf,
    /// Curve CSV destination; overrides the manifest's output field.
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Also write the full curve (rows + crossing) as JSON here.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct CrossingArgs {
    /// Curve CSV written by sweep.
    #[arg(long)]
    curve: PathBuf,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .is_err()
        {
            eprintln!("error: worker pool already initialized");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let seed = cli.seed;
    match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Mparam(args) => cmd_mparam(args),
        Command::DenseProbe(args) => cmd_dense_probe(args, seed),
        Command::Mu(args) => cmd_mu(args, seed),
        Command::Bounded(args) => cmd_bounded(args),
        Command::Prune(args) => cmd_prune(args, seed),
        Command::Alpha(args) => cmd_alpha(args),
        Command::Turan(args) => cmd_turan(args),
        Command::Arrow(args) => cmd_arrow(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Crossing(args) => cmd_crossing(args),
    }
}

// ---- provenance and output plumbing ----

fn provenance(config: Value, seed: Option<u64>) -> Value {
    let mut p = json!({
        "tool": TOOL,
        "version": VERSION,
        "format": FORMAT_VERSION,
        "config": config,
    });
    if let Some(seed) = seed {
        p["seed"] = json!(seed);
    }
    p
}

fn provenance_comment(config: &Value, seed: Option<u64>) -> String {
    let mut s = format!(
        "# tool {TOOL}\n# version {VERSION}\n# format {FORMAT_VERSION}\n# config {}\n",
        serde_json::to_string(config).expect("config serializes")
    );
    if let Some(seed) = seed {
        s.push_str(&format!("# seed {seed}\n"));
    }
    s
}

fn write_output(out: &Option<PathBuf>, content: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, content)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{content}"),
    }
    Ok(())
}

fn json_document(provenance: Value, key: &str, payload: Value) -> String {
    let mut doc = serde_json::Map::new();
    doc.insert("provenance".to_string(), provenance);
    doc.insert(key.to_string(), payload);
    let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("document serializes");
    s.push('\n');
    s
}

// ---- input parsing ----

fn read_hypergraph(path: &Path) -> anyhow::Result<UniformHypergraph> {
    let file = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    UniformHypergraph::read_text(BufReader::new(file))
        .with_context(|| format!("parsing hypergraph {}", path.display()))
}

fn read_matrix(path: &Path) -> anyhow::Result<IntegerMatrix> {
    let file = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    IntegerMatrix::read_text(BufReader::new(file))
        .with_context(|| format!("parsing matrix {}", path.display()))
}

/// Index files: whitespace/newline separated vertex indices, # comments.
fn read_subset(path: &Path, domain: usize) -> anyhow::Result<VertexSubset> {
    let file = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut indices = Vec::new();
    for line in BufReader::new(file).lines() {
        let line = line?;
        let line = line.split('#').next().unwrap_or("");
        for tok in line.split_whitespace() {
            indices.push(
                tok.parse::<usize>()
                    .with_context(|| format!("bad index {tok:?} in {}", path.display()))?,
            );
        }
    }
    Ok(VertexSubset::from_indices(domain, indices)?)
}

fn parse_points(text: &str) -> anyhow::Result<Vec<Vec<i64>>> {
    text.split(';')
        .map(|pt| {
            pt.split(',')
                .map(|c| {
                    c.trim()
                        .parse::<i64>()
                        .map_err(|_| anyhow!("bad coordinate {c:?} in --points"))
                })
                .collect()
        })
        .collect()
}

fn parse_grid(text: &str) -> anyhow::Result<QGrid> {
    let (kind, rest) = text
        .split_once(':')
        .ok_or_else(|| anyhow!("grid must be geometric:POINTS or explicit:q1,q2,..."))?;
    match kind {
        "geometric" => Ok(QGrid::Geometric {
            points: rest.parse().map_err(|_| anyhow!("bad grid point count {rest:?}"))?,
        }),
        "explicit" => {
            let values = rest
                .split(',')
                .map(|v| {
                    v.trim()
                        .parse::<f64>()
                        .map_err(|_| anyhow!("bad grid density {v:?}"))
                })
                .collect::<anyhow::Result<Vec<f64>>>()?;
            Ok(QGrid::Explicit { values })
        }
        other => bail!("unknown grid kind {other:?}"),
    }
}

fn ratio_string(r: Rational64) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

// ---- subcommands ----

fn family_config_json(family: &Family, extra: Value) -> Value {
    let mut config = serde_json::to_value(family).expect("family serializes");
    if let (Value::Object(map), Value::Object(extra)) = (&mut config, extra) {
        map.extend(extra);
    }
    config
}

fn cmd_gen(args: GenArgs) -> anyhow::Result<ExitCode> {
    let family = args.family.build()?;
    let spec = ConfigSpec::new(family.clone(), args.n)?;
    let h = spec.build()?;
    let config = family_config_json(&family, json!({"n": args.n, "command": "gen"}));
    let content = match args.format {
        GenFormat::Text => format!("{}{}", provenance_comment(&config, None), h.to_text()),
        GenFormat::Json => json_document(
            provenance(config, None),
            "hypergraph",
            serde_json::to_value(&h)?,
        ),
    };
    write_output(&args.out, &content)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_mparam(args: MparamArgs) -> anyhow::Result<ExitCode> {
    if let Some(path) = &args.hypergraph {
        let h = read_hypergraph(path)?;
        let report = subgraph_density(&h)?;
        let config = json!({"command": "mparam", "hypergraph": path.display().to_string()});
        let payload = serde_json::to_value(&report)?;
        write_output(
            &args.out,
            &json_document(provenance(config, None), "density", payload),
        )?;
        return Ok(ExitCode::SUCCESS);
    }
    let (matrix, config) = if let Some(path) = &args.matrix {
        (
            read_matrix(path)?,
            json!({"command": "mparam", "matrix": path.display().to_string()}),
        )
    } else if let Some(k) = args.ap {
        (
            IntegerMatrix::progression(k)?,
            json!({"command": "mparam", "ap": k}),
        )
    } else if args.schur {
        (IntegerMatrix::schur(), json!({"command": "mparam", "schur": true}))
    } else {
        bail!("one of --matrix, --ap, --schur, --hypergraph is required");
    };
    let classification = matrix.classify()?;
    let mut warnings: Vec<String> = Vec::new();
    if matrix.rank_deficient() {
        warnings.push("rank_deficient".to_string());
    }
    let density = if classification.irredundant && classification.partition_regular {
        Some(matrix.partition_density()?)
    } else {
        warnings.push("partition density undefined for this matrix".to_string());
        None
    };
    let payload = json!({
        "classification": classification,
        "m": density.as_ref().map(|d| ratio_string(d.value)),
        "witness_columns": density.as_ref().map(|d| d.witness_columns.clone()),
        "theta": density.as_ref().map(|d| ratio_string(d.value.recip())),
        "warnings": warnings,
    });
    write_output(
        &args.out,
        &json_document(provenance(config, None), "exponent", payload),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_dense_probe(args: DenseProbeArgs, seed: u64) -> anyhow::Result<ExitCode> {
    if args.sizes.is_empty() {
        bail!("--sizes must list at least one subset size");
    }
    let h = read_hypergraph(&args.hypergraph)?;
    let config = json!({
        "command": "dense-probe",
        "hypergraph": args.hypergraph.display().to_string(),
        "sizes": args.sizes,
    });
    let mut content = provenance_comment(&config, Some(seed));
    content.push_str("m,count,witness,exact\n");
    for &m in &args.sizes {
        let r = min_induced_edges(&h, m, seed)?;
        let witness: Vec<String> = r.witness.iter().map(|v| v.to_string()).collect();
        content.push_str(&format!(
            "{},{},{},{}\n",
            m,
            r.count,
            witness.join(";"),
            r.exact
        ));
    }
    write_output(&args.out, &content)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_mu(args: MuArgs, seed: u64) -> anyhow::Result<ExitCode> {
    if args.q.is_empty() {
        bail!("--q must list at least one density");
    }
    let h = read_hypergraph(&args.hypergraph)?;
    let profile = OverlapProfile::new(&h);
    let n = h.vertex_count();
    let m_edges = h.edge_count();
    if m_edges == 0 {
        bail!("hypergraph has no edges");
    }
    let config = json!({
        "command": "mu",
        "hypergraph": args.hypergraph.display().to_string(),
        "i": args.i,
        "q": args.q,
        "mc": args.mc,
    });
    let mut content = provenance_comment(&config, Some(seed));
    content.push_str(if args.mc.is_some() {
        "n,i,q,mu,bound_ratio,mc_mean,mc_se\n"
    } else {
        "n,i,q,mu,bound_ratio\n"
    });
    for &q in &args.q {
        let mu = profile.evaluate(args.i, q)?;
        let ratio = mu * n as f64 / (q.powi(2 * args.i as i32) * (m_edges as f64).powi(2));
        match args.mc {
            Some(trials) => {
                let est = mu_montecarlo(&h, args.i, q, trials, seed)?;
                content.push_str(&format!(
                    "{n},{},{q},{mu},{ratio},{},{}\n",
                    args.i, est.mean, est.std_error
                ));
            }
            None => content.push_str(&format!("{n},{},{q},{mu},{ratio}\n", args.i)),
        }
    }
    write_output(&args.out, &content)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_bounded(args: BoundedArgs) -> anyhow::Result<ExitCode> {
    let family = args.family.build()?;
    let grid = parse_grid(&args.grid)?;
    let report = certify_boundedness(&family, &args.n_list, args.i, &grid)?;
    let config = family_config_json(
        &family,
        json!({
            "command": "bounded",
            "n_list": args.n_list,
            "i": args.i,
            "grid": args.grid,
        }),
    );
    let content = match args.format {
        ReportFormat::Json => json_document(
            provenance(config, None),
            "boundedness",
            serde_json::to_value(&report)?,
        ),
        ReportFormat::Csv => {
            let mut s = provenance_comment(&config, None);
            s.push_str("n,i,q,mu,bound_ratio\n");
            for row in &report.rows {
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    row.n, row.i, row.q, row.mu, row.bound_ratio
                ));
            }
            for w in &report.per_n {
                s.push_str(&format!("# k_min n={} {}\n", w.n, w.k_min));
            }
            s.push_str(&format!("# k_min overall {}\n", report.overall_k_min));
            s
        }
    };
    write_output(&args.out, &content)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_prune(args: PruneArgs, seed: u64) -> anyhow::Result<ExitCode> {
    if args.trials == 0 {
        bail!("--trials must be at least 1");
    }
    let h = read_hypergraph(&args.hypergraph)?;
    let outcomes = prune_check_many(&h, args.q, args.i, args.eta, args.cap, seed, args.trials)?;
    let certified = outcomes.iter().filter(|o| o.certified).count();
    let config = json!({
        "command": "prune",
        "hypergraph": args.hypergraph.display().to_string(),
        "q": args.q,
        "i": args.i,
        "eta": args.eta,
        "cap": args.cap,
        "trials": args.trials,
    });
    let payload = json!({
        "certified_trials": certified,
        "trials": args.trials,
        "outcomes": outcomes,
    });
    write_output(
        &args.out,
        &json_document(provenance(config, Some(seed)), "prune", payload),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_alpha(args: AlphaArgs) -> anyhow::Result<ExitCode> {
    let h = read_hypergraph(&args.hypergraph)?;
    let mut config = json!({
        "command": "alpha",
        "hypergraph": args.hypergraph.display().to_string(),
        "budget": args.budget,
    });
    let result = match &args.subset {
        Some(path) => {
            config["subset"] = json!(path.display().to_string());
            let x = read_subset(path, h.vertex_count())?;
            let induced = h.induced(&x)?;
            let inner = alpha_exact(&induced.hypergraph, args.budget);
            // Report the witness in the original vertex numbering.
            let mut witness = VertexSubset::empty(h.vertex_count());
            for v in inner.witness.iter() {
                witness.insert(induced.original_vertices[v]);
            }
            transference_core::solver::SolveResult { witness, ..inner }
        }
        None => alpha_exact(&h, args.budget),
    };
    let payload = serde_json::to_value(&result)?;
    write_output(
        &args.out,
        &json_document(provenance(config, None), "alpha", payload),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_turan(args: TuranArgs) -> anyhow::Result<ExitCode> {
    let pattern = read_hypergraph(&args.pattern)?;
    let ranks = binomial(args.n, args.ell)
        .ok_or_else(|| anyhow!("C({},{}) overflows", args.n, args.ell))?;
    let host = match &args.host {
        Some(path) => read_subset(path, ranks)?,
        None => VertexSubset::full(ranks),
    };
    let result = turan_ex(args.n, args.ell, &pattern, &host, args.budget)?;
    let config = json!({
        "command": "turan",
        "n": args.n,
        "ell": args.ell,
        "pattern": args.pattern.display().to_string(),
        "host": args.host.as_ref().map(|p| p.display().to_string()),
        "budget": args.budget,
    });
    write_output(
        &args.out,
        &json_document(provenance(config, None), "turan", serde_json::to_value(&result)?),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn binomial(n: usize, r: usize) -> Option<usize> {
    if r > n {
        return Some(0);
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for s in 0..r {
        acc = acc.checked_mul((n - s) as u128)? / (s + 1) as u128;
    }
    usize::try_from(acc).ok()
}

fn cmd_arrow(args: ArrowArgs) -> anyhow::Result<ExitCode> {
    let h = read_hypergraph(&args.hypergraph)?;
    let x = read_subset(&args.subset, h.vertex_count())?;
    let epsilon = parse_ratio(&args.epsilon)?;
    let outcome = arrow_decide(&h, &x, epsilon, args.budget)?;
    let config = json!({
        "command": "arrow",
        "hypergraph": args.hypergraph.display().to_string(),
        "subset": args.subset.display().to_string(),
        "epsilon": ratio_string(epsilon),
        "budget": args.budget,
    });
    let payload = json!({
        "outcome": outcome,
        "subset_size": x.len(),
        "target": transference_core::solver::arrow_target(x.len(), epsilon),
    });
    write_output(
        &args.out,
        &json_document(provenance(config, None), "arrow", payload),
    )?;
    Ok(if outcome == ArrowOutcome::Undecided {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_sweep(args: SweepArgs) -> anyhow::Result<ExitCode> {
    let text = fs::read_to_string(&args.manifest)
        .with_context(|| format!("reading {}", args.manifest.display()))?;
    let manifest: ExperimentManifest =
        serde_json::from_str(&text).context("parsing experiment manifest")?;
    let out_path: Option<PathBuf> = args
        .out
        .clone()
        .or_else(|| manifest.output.as_ref().map(PathBuf::from));
    let config = serde_json::to_value(&manifest)?;
    let seed = manifest.seed;
    let experiment = Experiment::prepare(manifest)?;

    let header = format!(
        "{}{}\n",
        provenance_comment(&config, Some(seed)),
        CURVE_CSV_HEADER
    );
    let mut sink: Box<dyn Write> = match &out_path {
        Some(path) => Box::new(
            fs::File::create(path).with_context(|| format!("creating {}", path.display()))?,
        ),
        None => Box::new(std::io::stdout()),
    };
    sink.write_all(header.as_bytes())?;
    sink.flush()?;
    let curve = experiment.sweep(|row| {
        sink.write_all(row.csv_line().as_bytes())
            .and_then(|_| sink.write_all(b"\n"))
            .and_then(|_| sink.flush())
            .map_err(CoreError::from)
    })?;
    drop(sink);

    if let Some(json_path) = &args.json {
        let doc = json_document(
            provenance(config, Some(seed)),
            "curve",
            serde_json::to_value(&curve)?,
        );
        fs::write(json_path, doc)
            .with_context(|| format!("writing {}", json_path.display()))?;
    }
    let unreliable = curve.rows.iter().filter(|r| r.unreliable).count();
    if unreliable > 0 {
        eprintln!(
            "warning: {unreliable} of {} rows exceeded the 10% undecided allowance",
            curve.rows.len()
        );
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_crossing(args: CrossingArgs) -> anyhow::Result<ExitCode> {
    let text = fs::read_to_string(&args.curve)
        .with_context(|| format!("reading {}", args.curve.display()))?;
    let mut rows = Vec::new();
    for line in text.lines() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') || t == CURVE_CSV_HEADER {
            continue;
        }
        rows.push(CurveRow::from_csv_line(t)?);
    }
    let crossing = estimate_crossing(&rows)?;
    let config = json!({
        "command": "crossing",
        "curve": args.curve.display().to_string(),
        "rows": rows.len(),
    });
    write_output(
        &args.out,
        &json_document(provenance(config, None), "crossing", serde_json::to_value(&crossing)?),
    )?;
    Ok(ExitCode::SUCCESS)
}
