//! The `carpetdim` command-line front end.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::automata::{determinize, singletons, Alphabet};
use crate::dims::{dimension_report, DimensionReport, ReportOptions, Verdict, DEFAULT_DIM_TOL, DEFAULT_K_MAX};
use crate::entropy::{lambda_table, DEFAULT_TOL};
use crate::error::CarpetError;
use crate::model::{decompose, parse_system_with, CarpetSystem, ParseMode};
use crate::oracle::{empirical_scaling, occupied_squares, ScalingReport};
use crate::render::{to_pbm, to_svg};
use crate::sequences::{SequenceEngine, SequenceKind, SequenceValue, Witness};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_INCONSISTENT: i32 = 4;

/// Allowed gap between finite-scale oracle exponents and the computed dimensions.
pub const ORACLE_SLACK: f64 = 0.2;

#[derive(Parser, Debug)]
#[command(name = "carpetdim", version, about = "Dimensions of graph-directed Bedford-McMullen carpets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Alpha,
    Beta,
    Tau,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AlphabetArg {
    Y,
    Xy,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a system file and summarize it.
    Validate {
        file: PathBuf,
        /// Warn about unknown keys instead of rejecting them.
        #[arg(long)]
        lenient: bool,
    },
    /// Box, Assouad, lower and Hausdorff dimensions.
    Dims {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_K_MAX)]
        kmax: usize,
        #[arg(long, default_value_t = DEFAULT_DIM_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Per-depth table of one of the counting sequences.
    Sequences {
        file: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        kmax: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Draw the depth-K approximation (PBM, or SVG for a .svg path).
    Render {
        file: PathBuf,
        /// Draw only this vertex's attractor.
        #[arg(long)]
        vertex: Option<String>,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Covering-count exponents between two levels, checked against the dimensions.
    Oracle {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long = "kprime")]
        k_prime: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Write the determinized automaton as Graphviz DOT.
    Automaton {
        file: PathBuf,
        #[arg(long, value_enum)]
        alphabet: AlphabetArg,
        #[arg(long)]
        dot: PathBuf,
    },
}

#[derive(Debug)]
enum Failure {
    Io(String),
    Carpet(CarpetError),
    Inconsistent(String),
}

impl From<CarpetError> for Failure {
    fn from(e: CarpetError) -> Self {
        Failure::Carpet(e)
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Io(_) => EXIT_IO,
            Failure::Carpet(e) if e.is_budget() => EXIT_BUDGET,
            Failure::Carpet(CarpetError::NonConvergence(_)) => EXIT_INCONSISTENT,
            Failure::Carpet(_) => EXIT_VALIDATION,
            Failure::Inconsistent(_) => EXIT_INCONSISTENT,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Io(msg) => write!(f, "I/O error: {msg}"),
            Failure::Carpet(e) => write!(f, "{e}"),
            Failure::Inconsistent(msg) => write!(f, "internal inconsistency: {msg}"),
        }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{}", e.render()) } else { write!(out, "{}", e.render()) };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {f}");
            f.exit_code()
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, data: &[u8]) -> Result<(), Failure> {
    std::fs::write(path, data).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<CarpetSystem, Failure> {
    Ok(parse_system_with(&read(path)?, ParseMode::Strict)?.0)
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes()).map_err(|e| Failure::Io(e.to_string()))
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

/// Rounds to 9 decimals for display, dropping trailing zeros.
fn num(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let r = (x * 1e9).round() / 1e9;
    if r == 0.0 {
        "0".into()
    } else {
        r.to_string()
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Validate { file, lenient } => {
            let mode = if lenient { ParseMode::Lenient } else { ParseMode::Strict };
            let (sys, warnings) = parse_system_with(&read(&file)?, mode)?;
            for w in warnings {
                let _ = writeln!(err, "warning: {w}");
            }
            let dec = decompose(&sys);
            emit(
                out,
                &format!(
                    "{} vertices, {} edges, {} components\n",
                    sys.vertex_count(),
                    sys.edges().len(),
                    dec.component_count()
                ),
            )
        }
        Command::Dims { file, kmax, tol, format } => {
            let sys = load(&file)?;
            let report = dimension_report(&sys, ReportOptions { k_max: kmax, tol })?;
            if !report.assouad.routes_consistent || report.coincidence.irreducible_strict_gap == Some(false) {
                return Err(Failure::Inconsistent(
                    "the two Assouad routes or the irreducible gap check disagree".into(),
                ));
            }
            match format {
                Format::Json => {
                    let mut s = report.to_json();
                    s.push('\n');
                    emit(out, &s)
                }
                Format::Text => emit(out, &dims_text(&sys, &report)),
            }
        }
        Command::Sequences { file, kind, kmax, format } => {
            let sys = load(&file)?;
            let dec = decompose(&sys);
            let lambda = lambda_table(&sys, DEFAULT_TOL)?;
            let engine = SequenceEngine::new(&sys, &dec, &lambda)?;
            let values = match kind {
                Kind::Alpha => engine.alpha(kmax)?,
                Kind::Beta => engine.beta(kmax)?,
                Kind::Tau => engine.tau(kmax),
            };
            let ln_n = f64::from(sys.n()).ln();
            match format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Row<'a> {
                        #[serde(flatten)]
                        value: &'a SequenceValue,
                        dimension: f64,
                    }
                    let rows: Vec<Row> =
                        values.iter().map(|v| Row { value: v, dimension: v.value / (v.k as f64 * ln_n) }).collect();
                    emit(out, &json(&rows))
                }
                Format::Text => {
                    let mut s = String::from("k\tlog value\tdimension\twitness\n");
                    for v in &values {
                        let _ = writeln!(
                            s,
                            "{}\t{}\t{}\t{}",
                            v.k,
                            num(v.value),
                            num(v.value / (v.k as f64 * ln_n)),
                            witness_summary(&sys, &v.witness)
                        );
                    }
                    emit(out, &s)
                }
            }
        }
        Command::Render { file, vertex, depth, out: path } => {
            let sys = load(&file)?;
            let starts: Vec<usize> = match vertex {
                Some(name) => vec![sys.vertex_index(&name).ok_or(CarpetError::UnknownVertex(name))?],
                None => (0..sys.vertex_count()).collect(),
            };
            let occ = occupied_squares(&sys, &starts, depth)?;
            let is_svg = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("svg"));
            let data =
                if is_svg { to_svg(&occ, sys.n(), sys.m())?.into_bytes() } else { to_pbm(&occ, sys.n(), sys.m())? };
            write_file(&path, &data)?;
            emit(out, &format!("wrote {} squares to {}\n", occ.len(), path.display()))
        }
        Command::Oracle { file, k, k_prime, format } => {
            let sys = load(&file)?;
            let scaling = empirical_scaling(&sys, k, k_prime)?;
            let check = compare_with_theory(&sys, &scaling)?;
            match format {
                Format::Json => emit(out, &json(&check))?,
                Format::Text => emit(out, &oracle_text(&check))?,
            }
            if check.flags.iter().any(|f| f.starts_with("contradiction")) {
                return Err(Failure::Inconsistent(check.flags.join("; ")));
            }
            Ok(())
        }
        Command::Automaton { file, alphabet, dot } => {
            let sys = load(&file)?;
            let alphabet = match alphabet {
                AlphabetArg::Y => Alphabet::Y,
                AlphabetArg::Xy => Alphabet::XY,
            };
            let aut = determinize(&sys, alphabet, &singletons(&sys))?;
            write_file(&dot, aut.to_dot(&sys).as_bytes())?;
            emit(out, &format!("wrote {} states to {}\n", aut.state_count(), dot.display()))
        }
    }
}

fn set_label(sys: &CarpetSystem, set: &[usize]) -> String {
    let names: Vec<&str> = set.iter().map(|&v| sys.vertex_name(v)).collect();
    format!("{{{}}}", names.join(","))
}

fn digits(ds: &[u32]) -> String {
    if ds.is_empty() {
        "-".into()
    } else {
        ds.iter().map(u32::to_string).collect()
    }
}

fn witness_summary(sys: &CarpetSystem, w: &Witness) -> String {
    let classes = |leaves: &[crate::sequences::LeafCount]| {
        leaves.iter().map(|l| format!("{}x{}", l.classes, set_label(sys, &l.subset))).collect::<Vec<_>>().join(" ")
    };
    match w {
        Witness::Alpha { vertex, y, leaves } => {
            format!("v={} y={} classes={}", sys.vertex_name(*vertex), digits(y), classes(leaves))
        }
        Witness::Beta { subset, vertex, y, y_suffix, leaves } => format!(
            "S={} v={} y={} suffix={} classes={}",
            set_label(sys, subset),
            sys.vertex_name(*vertex),
            digits(y),
            digits(y_suffix),
            classes(leaves)
        ),
        Witness::Tau { vertex, count } => format!("v={} classes={count}", sys.vertex_name(*vertex)),
        Witness::Degenerate => "no positive weighted sum".into(),
    }
}

fn verdict(v: Verdict) -> &'static str {
    match v {
        Verdict::Holds => "holds",
        Verdict::Fails => "fails",
        Verdict::Inconclusive => "inconclusive",
    }
}

fn dims_text(sys: &CarpetSystem, r: &DimensionReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "box\t{}", num(r.box_dim));
    let _ = writeln!(s, "assouad\t[{}, {}]", num(r.assouad.lo), num(r.assouad.hi));
    if let Some(u) = r.assouad.alpha_route.upper_envelope {
        let _ = writeln!(s, "assouad upper (alpha route)\t{}", num(u));
    }
    let _ = writeln!(s, "lower (estimate)\t{}", num(r.lower.estimate));
    match r.hausdorff {
        Some(h) => {
            let _ = writeln!(s, "hausdorff\t{}", num(h));
        }
        None => {
            let _ = writeln!(s, "hausdorff\tunavailable");
        }
    }
    let _ = writeln!(s, "box = assouad\t{}", verdict(r.coincidence.box_equals_assouad));
    let dec = decompose(sys);
    for c in &r.coincidence.components {
        let _ = writeln!(
            s,
            "component {} {}\tbox attained {}, assouad attained {}, bowen equality {}",
            c.component,
            set_label(sys, &dec.components[c.component].vertices),
            verdict(c.box_attained),
            verdict(c.assouad_attained),
            verdict(c.bowen_equality)
        );
    }
    let _ = writeln!(s, "dominant component\t{}", r.dominant_component);
    let _ = writeln!(s, "k_max\t{}\ntol\t{}", r.k_max, r.tol);
    s
}

#[derive(Debug, Serialize)]
struct OracleCheck {
    scaling: ScalingReport,
    box_dim: f64,
    assouad_lo: f64,
    assouad_hi: f64,
    lower_estimate: f64,
    /// Depth used for the lower-dimension estimate.
    k_max: usize,
    flags: Vec<String>,
}

fn compare_with_theory(sys: &CarpetSystem, scaling: &ScalingReport) -> Result<OracleCheck, Failure> {
    let dec = decompose(sys);
    let lambda = lambda_table(sys, DEFAULT_TOL)?;
    let engine = SequenceEngine::new(sys, &dec, &lambda)?;
    let k_max = engine
        .feasible_depth(SequenceKind::Alpha, scaling.k_prime)?
        .min(engine.feasible_depth(SequenceKind::Beta, scaling.k_prime)?)
        .max(1);
    let report = dimension_report(sys, ReportOptions { k_max, tol: DEFAULT_DIM_TOL })?;
    let mut flags = Vec::new();
    if scaling.max_exponent > report.assouad.hi + ORACLE_SLACK {
        flags.push(format!(
            "contradiction: max exponent {} above assouad {}",
            num(scaling.max_exponent),
            num(report.assouad.hi)
        ));
    }
    if scaling.min_exponent < report.lower.estimate - ORACLE_SLACK {
        flags.push(format!(
            "contradiction: min exponent {} below lower {}",
            num(scaling.min_exponent),
            num(report.lower.estimate)
        ));
    }
    if flags.is_empty() {
        flags.push("consistent".into());
    }
    if (scaling.max_exponent - report.assouad.hi).abs() <= ORACLE_SLACK {
        flags.push(format!("trending to assouad={}", num(report.assouad.hi)));
    }
    if (scaling.min_exponent - report.lower.estimate).abs() <= ORACLE_SLACK {
        flags.push(format!("trending to lower={}", num(report.lower.estimate)));
    }
    if (scaling.box_exponent - report.box_dim).abs() <= ORACLE_SLACK {
        flags.push(format!("trending to box={}", num(report.box_dim)));
    }
    Ok(OracleCheck {
        scaling: scaling.clone(),
        box_dim: report.box_dim,
        assouad_lo: report.assouad.lo,
        assouad_hi: report.assouad.hi,
        lower_estimate: report.lower.estimate,
        k_max,
        flags,
    })
}

fn oracle_text(c: &OracleCheck) -> String {
    let s = &c.scaling;
    let mut t = String::new();
    let _ = writeln!(t, "occupied squares\tk={}: {}\tk'={}: {}", s.k, s.occupied_k, s.k_prime, s.occupied_k_prime);
    let _ =
        writeln!(t, "max exponent\t{}\t(assouad [{}, {}])", num(s.max_exponent), num(c.assouad_lo), num(c.assouad_hi));
    let _ = writeln!(t, "min exponent\t{}\t(lower estimate {})", num(s.min_exponent), num(c.lower_estimate));
    let _ = writeln!(t, "box exponent\t{}\t(box {})", num(s.box_exponent), num(c.box_dim));
    let _ = writeln!(t, "flags\t{}", c.flags.join(", "));
    t
}
