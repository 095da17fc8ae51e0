use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use linea::analysis::{record_json, Analysis};
use linea::arrangement::{self, ArrangementError, Document, LoadOptions};
use linea::audit::{audit_arrangement, audit_record};
use linea::corpus::{self, Corpus, CorpusError};
use linea::feasibility::{self, Apply, FeasibilityError, ProblemSpec};
use linea::generators::{self, FamilySpec, GeneratorError};
use linea::structure::StructureError;

const EXIT_INPUT: u8 = 2;

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Feasibility(#[from] FeasibilityError),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("thread pool: {0}")]
    Threads(String),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

/// Exact construction and auditing of line arrangements in the projective plane.
#[derive(Parser, Debug)]
#[command(name = "linea", version)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for the cone apex.
    #[arg(long, default_value_t = 1, global = true)]
    seed: u64,
    /// Accept records that violate the combinatorial identity.
    #[arg(long, global = true)]
    allow_unchecked: bool,
    /// Worker threads; overrides LINEA_THREADS.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a family instance and write it as arrangement JSON.
    Generate(GenerateArgs),
    /// Crossings, t-vector, classification and modular points.
    Analyze {
        path: PathBuf,
        /// Emit the line/crossing incidence graph in Graphviz syntax.
        #[arg(long)]
        dot: bool,
    },
    /// Run the full check battery on an arrangement or record.
    Audit(AuditArgs),
    /// Scan the t-vector relaxation over a range of s.
    Feasible(FeasibleArgs),
    /// Run the acceptance suite over a corpus directory.
    VerifyPaper {
        #[arg(default_value = "corpus")]
        dir: PathBuf,
    },
}

#[derive(Args, Debug)]
struct GenerateArgs {
    /// Family name (pencil, near-pencil, triangle-case1, fermat,
    /// fermat-plus-axes, grid, finite-plane, polygon, cone) or a full
    /// spec such as `grid(3,2)`.
    family: String,
    #[arg(long)]
    s: Option<u64>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long, default_value_t = 3)]
    eps: u64,
    #[arg(long)]
    a: Option<u64>,
    #[arg(long, default_value_t = 0)]
    diagonals: u64,
    #[arg(long)]
    p: Option<u64>,
    /// Base family spec for `cone`.
    #[arg(long)]
    base: Option<String>,
}

#[derive(Args, Debug)]
struct AuditArgs {
    path: Option<PathBuf>,
    #[arg(long, conflicts_with = "path")]
    record: Option<PathBuf>,
    /// Declare a record real (records only).
    #[arg(long)]
    real: Option<bool>,
    /// Declare a record supersolvable (records only).
    #[arg(long)]
    supersolvable: Option<bool>,
    /// Where to write the witness on a conjecture failure.
    #[arg(long)]
    witness: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FeasibleArgs {
    /// Problem document; replaces the flags below.
    #[arg(long, conflicts_with_all = ["m", "allowed", "t2_zero", "s"])]
    problem: Option<PathBuf>,
    #[arg(long)]
    m: Option<u64>,
    /// Comma-separated allowed multiplicities; default 2..=m.
    #[arg(long, value_delimiter = ',')]
    allowed: Option<Vec<u64>>,
    #[arg(long)]
    t2_zero: bool,
    /// Range `lo..hi`, inclusive.
    #[arg(long)]
    s: Option<String>,
    #[arg(long)]
    no_identity: bool,
    #[arg(long)]
    no_hirzebruch: bool,
    #[arg(long)]
    no_at: bool,
    /// Include witnesses and certificates.
    #[arg(long)]
    detail: bool,
}

fn family_spec(args: &GenerateArgs, seed: u64) -> Result<FamilySpec, CliError> {
    let need = |v: Option<u64>, flag: &str| {
        v.ok_or_else(|| CliError::Usage(format!("{} needs --{flag}", args.family)))
    };
    let name = args.family.replace('-', "_");
    let spec = match name.as_str() {
        "pencil" => FamilySpec::Pencil { s: need(args.s, "s")? },
        "near_pencil" => FamilySpec::NearPencil { s: need(args.s, "s")? },
        "triangle" | "triangle_case1" => FamilySpec::TriangleCase1,
        "fermat" => FamilySpec::Fermat { n: need(args.n, "n")? },
        "fermat_plus_axes" => FamilySpec::FermatPlusAxes { n: need(args.n, "n")?, eps: args.eps },
        "grid" => FamilySpec::Grid { a: need(args.a, "a")?, diagonals: args.diagonals },
        "finite_plane" => FamilySpec::FinitePlane { p: need(args.p, "p")? },
        "polygon" | "polygon_plus_infinity" => FamilySpec::PolygonPlusInfinity { n: need(args.n, "n")? },
        "cone" => {
            let base = args.base.as_deref().ok_or_else(|| CliError::Usage("cone needs --base".into()))?;
            FamilySpec::Cone { base: Box::new(base.parse()?), seed }
        }
        _ => args.family.parse()?,
    };
    spec.validate()?;
    Ok(spec)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|source| CliError::Write { path: path.display().to_string(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn generate(cli: &Cli, args: &GenerateArgs) -> Result<u8, CliError> {
    let spec = family_spec(args, cli.seed)?;
    let arr = generators::generate(&spec)?;
    let line = format!("{spec}: s = {}, field = {}", arr.len(), arr.field());
    let doc = Document::Arrangement(arr);
    match &cli.out {
        Some(path) => {
            arrangement::save(&doc, path)?;
            println!("{line}");
        }
        None => {
            print!("{}", doc.to_json_string());
            eprintln!("{line}");
        }
    }
    Ok(0)
}

fn analyze(cli: &Cli, path: &Path, dot: bool) -> Result<u8, CliError> {
    let opts = LoadOptions { allow_unchecked: cli.allow_unchecked };
    let subject = path.display().to_string();
    let text = match arrangement::load(path, opts)? {
        Document::Arrangement(arr) => {
            let a = Analysis::new(arr, subject)?;
            match (dot, cli.format) {
                (true, _) => a.to_dot(),
                (false, Format::Json) => pretty(&a.to_json()),
                (false, Format::Csv) => a.to_csv(),
                (false, Format::Text) => a.to_text(),
            }
        }
        Document::Record(r) => {
            if dot {
                return Err(CliError::Usage("records have no incidence graph".into()));
            }
            pretty(&record_json(&r))
        }
    };
    emit(cli.out.as_deref(), &text)?;
    Ok(0)
}

fn audit(cli: &Cli, args: &AuditArgs) -> Result<u8, CliError> {
    let path = args
        .path
        .as_ref()
        .or(args.record.as_ref())
        .ok_or_else(|| CliError::Usage("audit needs a path or --record".into()))?;
    let opts = LoadOptions { allow_unchecked: cli.allow_unchecked };
    let subject = path.display().to_string();
    let doc = arrangement::load(path, opts)?;
    let (report, s, t) = match doc {
        Document::Arrangement(arr) => {
            if args.record.is_some() {
                return Err(CliError::Usage(format!("{subject} is an arrangement, not a record")));
            }
            if args.real.is_some() || args.supersolvable.is_some() {
                return Err(CliError::Usage("--real and --supersolvable apply to records only".into()));
            }
            let summary = arr.crossing_summary()?;
            (audit_arrangement(&arr, subject.clone())?, summary.s, summary.t)
        }
        Document::Record(mut r) => {
            r.real = args.real.or(r.real);
            r.supersolvable = args.supersolvable.or(r.supersolvable);
            (audit_record(&r), r.s, r.t)
        }
    };
    let text = match cli.format {
        Format::Json => pretty(&report.to_json()),
        Format::Csv => report.to_csv(),
        Format::Text => report.to_text(),
    };
    emit(cli.out.as_deref(), &text)?;
    let code = report.exit_code();
    if code == 3 {
        let witnesses = corpus::counterexamples(&report.subject, s, &t, &report);
        let target = args.witness.clone().unwrap_or_else(|| PathBuf::from(format!("{subject}.witness.json")));
        let body = json!({"counterexamples": witnesses.iter().map(|w| w.to_json()).collect::<Vec<_>>()});
        emit(Some(&target), &pretty(&body))?;
        eprintln!("counterexample witness written to {}", target.display());
    }
    Ok(code as u8)
}

fn parse_range(text: &str) -> Result<(u64, u64), CliError> {
    let bad = || CliError::Usage(format!("--s expects lo..hi, got {text:?}"));
    let (lo, hi) = text.split_once("..").ok_or_else(bad)?;
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    Ok((lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?))
}

fn merge_runs(runs: Vec<(u64, u64)>) -> Vec<(u64, u64)> {
    let mut out: Vec<(u64, u64)> = Vec::new();
    for (lo, hi) in runs {
        match out.last_mut() {
            Some((_, end)) if *end + 1 == lo => *end = hi,
            _ => out.push((lo, hi)),
        }
    }
    out
}

fn runs_text(runs: &[(u64, u64)]) -> String {
    let parts: Vec<String> =
        runs.iter().map(|(a, b)| if a == b { a.to_string() } else { format!("{a}..{b}") }).collect();
    parts.join(", ")
}

fn feasible(cli: &Cli, args: &FeasibleArgs) -> Result<u8, CliError> {
    let (mut spec, lo, hi) = match &args.problem {
        Some(path) => {
            let text =
                fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            feasibility::parse_problem(&text)?
        }
        None => {
            let m = args.m.ok_or_else(|| CliError::Usage("feasible needs --m or --problem".into()))?;
            let (lo, hi) =
                parse_range(args.s.as_deref().ok_or_else(|| CliError::Usage("feasible needs --s".into()))?)?;
            let allowed = args.allowed.as_ref().map(|a| a.iter().copied().collect::<BTreeSet<_>>());
            (ProblemSpec::new(m, allowed, args.t2_zero, Apply::default())?, lo, hi)
        }
    };
    spec.apply.identity &= !args.no_identity;
    spec.apply.hirzebruch &= !args.no_hirzebruch;
    spec.apply.at &= !args.no_at;
    let report = feasibility::scan(&spec, lo, hi)?;
    let text = match cli.format {
        Format::Json => pretty(&report.to_json(args.detail)),
        Format::Csv => report.to_csv(),
        Format::Text => {
            let runs = runs_text(&report.feasible_runs());
            let feasible = if runs.is_empty() { "none".to_string() } else { runs };
            let allowed: Vec<(u64, u64)> = spec.allowed.iter().map(|&k| (k, k)).collect();
            format!(
                "m = {}, allowed {{{}}}{}\ns in {lo}..{hi}: feasible {feasible}\n",
                spec.m,
                runs_text(&merge_runs(allowed)),
                if spec.force_t2_zero { ", t2 = 0" } else { "" }
            )
        }
    };
    emit(cli.out.as_deref(), &text)?;
    Ok(0)
}

fn verify_paper(cli: &Cli, dir: &Path) -> Result<u8, CliError> {
    let corpus = Corpus::load(dir)?;
    let summary = corpus::verify(&corpus)?;
    let text = match cli.format {
        Format::Json => pretty(&summary.to_json()),
        Format::Csv => summary.to_csv(),
        Format::Text => summary.to_text(),
    };
    emit(cli.out.as_deref(), &text)?;
    Ok(summary.exit_code() as u8)
}

fn configure_threads(cli: &Cli) -> Result<(), CliError> {
    let requested = match cli.threads {
        Some(n) => Some(n),
        None => match std::env::var("LINEA_THREADS") {
            Ok(v) => Some(v.trim().parse().map_err(|_| {
                CliError::Usage(format!("LINEA_THREADS must be a positive integer, got {v:?}"))
            })?),
            Err(_) => None,
        },
    };
    if let Some(n) = requested {
        if n == 0 {
            return Err(CliError::Usage("thread count must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Threads(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    configure_threads(cli)?;
    match &cli.command {
        Command::Generate(args) => generate(cli, args),
        Command::Analyze { path, dot } => analyze(cli, path, *dot),
        Command::Audit(args) => audit(cli, args),
        Command::Feasible(args) => feasible(cli, args),
        Command::VerifyPaper { dir } => verify_paper(cli, dir),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
