//! Command-line front end: quiver ingestion, method selection, structure
//! listing, and the cross-validation harness. JSON goes to stdout,
//! diagnostics to stderr.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use qhcount::crossval::run_battery;
use qhcount::formulas::{catalan, count_formula, FormulaError};
use qhcount::quiver::{make_branch, make_line, parse_quiver, recognize_shape, Quiver, ShapeKind};
use qhcount::structures::{
    count_brute, enumerate_structures, is_quasi_hereditary, standard_tuple, ClassRecord,
    Permutation, DEFAULT_ENUM_CAP, MAX_ENUM_CAP,
};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "qhcount",
    about = "Exact counting of quasi-hereditary structures on path algebras of tree quivers",
    long_about = "Counts quasi-hereditary structures by brute-force enumeration over vertex\n\
                  permutations, by Catalan-number formulas dispatched on the quiver shape,\n\
                  or by both with cross-checking (--method auto: formula when the shape is\n\
                  recognized, brute force when the vertex count is within the cap, and a\n\
                  loud failure if the two engines ever disagree)."
)]
struct Cli {
    /// Number of worker threads for brute-force enumeration
    #[arg(long, global = true, value_name = "J")]
    jobs: Option<usize>,
    /// Emit JSON (pass --json=false for plain text)
    #[arg(long, global = true, default_value_t = true, num_args = 0..=1, default_missing_value = "true", action = clap::ArgAction::Set)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct QuiverSource {
    /// Linearly oriented line quiver on N vertices
    #[arg(long, value_name = "N", group = "quiver")]
    line: Option<usize>,
    /// Branch quiver with arm lengths S,T,U
    #[arg(long, value_name = "S,T,U", group = "quiver")]
    branch: Option<String>,
    /// Quiver file, JSON form or `s -> t` text form
    #[arg(long, value_name = "PATH", group = "quiver")]
    file: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Brute,
    Formula,
    Auto,
}

#[derive(Subcommand)]
enum Command {
    /// Count quasi-hereditary structures
    Count {
        #[command(flatten)]
        source: QuiverSource,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        /// Brute-force enumeration cap on the vertex count (at most 11)
        #[arg(long = "max-n", default_value_t = DEFAULT_ENUM_CAP)]
        max_n: usize,
    },
    /// List the structures as equivalence classes of permutations
    List {
        #[command(flatten)]
        source: QuiverSource,
        #[arg(long = "max-n", default_value_t = DEFAULT_ENUM_CAP)]
        max_n: usize,
    },
    /// Check one permutation for quasi-heredity and show the evidence
    Check {
        #[command(flatten)]
        source: QuiverSource,
        /// Permutation in one-line image notation, e.g. 2,3,1
        #[arg(long, value_name = "LIST")]
        perm: String,
    },
    /// Run the cross-validation battery
    CrossValidate {
        /// Scale cap for the exhaustive parts (at most 9)
        #[arg(long = "max-n", default_value_t = 6)]
        max_n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the exact k-th Catalan number
    Catalan { k: usize },
}

struct CliError {
    code: u8,
    msg: String,
}

impl CliError {
    fn new(code: u8, msg: impl Into<String>) -> Self {
        CliError {
            code,
            msg: msg.into(),
        }
    }
}

impl QuiverSource {
    fn load(&self) -> Result<Quiver, CliError> {
        match (&self.line, &self.branch, &self.file) {
            (Some(n), None, None) => {
                make_line(*n).map_err(|e| CliError::new(1, e.to_string()))
            }
            (None, Some(spec), None) => {
                let parts: Vec<usize> = spec
                    .split(',')
                    .map(|p| p.trim().parse())
                    .collect::<Result<_, _>>()
                    .map_err(|_| CliError::new(1, format!("bad --branch value `{spec}`")))?;
                match parts.as_slice() {
                    [s, t, u] => Ok(make_branch(*s, *t, *u)),
                    _ => Err(CliError::new(1, "--branch expects exactly S,T,U")),
                }
            }
            (None, None, Some(path)) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::new(1, format!("{}: {e}", path.display())))?;
                parse_quiver(&text).map_err(|e| CliError::new(1, e.to_string()))
            }
            _ => Err(CliError::new(1, "give exactly one of --line, --branch, --file")),
        }
    }
}

#[derive(Serialize)]
struct QuiverDesc {
    vertices: usize,
    arrows: Vec<(usize, usize)>,
    shape: String,
}

fn describe(q: &Quiver) -> QuiverDesc {
    let shape = match recognize_shape(q).kind {
        ShapeKind::Line(n) => format!("Line({n})"),
        ShapeKind::Branch { s, t, u } => format!("Branch({s},{t},{u})"),
        ShapeKind::OppositeBranch { s, t, u } => format!("OppositeBranch({s},{t},{u})"),
        ShapeKind::Unrecognized => "Unrecognized".into(),
    };
    QuiverDesc {
        vertices: q.n(),
        arrows: q.arrows().to_vec(),
        shape,
    }
}

#[derive(Serialize)]
struct ClassJson {
    representative: Vec<usize>,
    supports: Vec<Vec<usize>>,
    class_size: u64,
}

impl From<&ClassRecord> for ClassJson {
    fn from(r: &ClassRecord) -> Self {
        ClassJson {
            representative: r.representative.images().to_vec(),
            supports: r.tuple.supports.iter().map(|s| s.to_vec()).collect(),
            class_size: r.class_size,
        }
    }
}

#[derive(Serialize)]
struct CountReport {
    quiver: QuiverDesc,
    method: String,
    count: String,
    elapsed_ms: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    classes: Option<Vec<ClassJson>>,
}

fn emit_report(report: &CountReport, json: bool) {
    if json {
        println!("{}", serde_json::to_string(report).expect("report serializes"));
    } else {
        println!(
            "{} vertices ({}), method {}: {} structures in {} ms",
            report.quiver.vertices,
            report.quiver.shape,
            report.method,
            report.count,
            report.elapsed_ms
        );
        if let Some(classes) = &report.classes {
            for c in classes {
                println!(
                    "  representative {:?} (class size {}): supports {:?}",
                    c.representative, c.class_size, c.supports
                );
            }
        }
    }
}

fn validate_cap(max_n: usize) -> Result<usize, CliError> {
    if max_n > MAX_ENUM_CAP {
        Err(CliError::new(
            1,
            format!("--max-n {max_n} exceeds the hard enumeration cap {MAX_ENUM_CAP}"),
        ))
    } else {
        Ok(max_n)
    }
}

fn cmd_count(q: &Quiver, method: Method, cap: usize, json: bool) -> Result<(), CliError> {
    let start = Instant::now();
    let formula_result = match method {
        Method::Brute => None,
        Method::Formula | Method::Auto => Some(count_formula(q)),
    };
    let brute_result = match method {
        Method::Formula => None,
        Method::Brute => Some(count_brute(q, cap).map_err(|e| CliError::new(1, e.to_string()))?),
        Method::Auto if q.n() <= cap => {
            Some(count_brute(q, cap).map_err(|e| CliError::new(1, e.to_string()))?)
        }
        Method::Auto => None,
    };
    let count: BigUint = match (method, formula_result, brute_result) {
        (Method::Formula, Some(Ok(c)), _) => c,
        (Method::Formula, Some(Err(e @ FormulaError::UnsupportedShape(_))), _) => {
            return Err(CliError::new(2, e.to_string()))
        }
        (Method::Formula, Some(Err(e)), _) => return Err(CliError::new(2, e.to_string())),
        (Method::Brute, _, Some(c)) => c,
        (Method::Auto, Some(Ok(f)), Some(b)) => {
            if f != b {
                return Err(CliError::new(
                    1,
                    format!("engine disagreement: formula {f} != brute {b}"),
                ));
            }
            f
        }
        (Method::Auto, Some(Ok(f)), None) => f,
        (Method::Auto, Some(Err(_)), Some(b)) => b,
        (Method::Auto, Some(Err(fe)), None) => {
            return Err(CliError::new(
                1,
                format!(
                    "no engine applies: {fe}; and {} vertices exceed the brute-force cap {cap}",
                    q.n()
                ),
            ))
        }
        _ => unreachable!("at least one engine runs per method"),
    };
    let method_name = match method {
        Method::Brute => "brute",
        Method::Formula => "formula",
        Method::Auto => "auto",
    };
    emit_report(
        &CountReport {
            quiver: describe(q),
            method: method_name.into(),
            count: count.to_string(),
            elapsed_ms: start.elapsed().as_millis(),
            classes: None,
        },
        json,
    );
    Ok(())
}

fn cmd_list(q: &Quiver, cap: usize, json: bool) -> Result<(), CliError> {
    let start = Instant::now();
    let records =
        enumerate_structures(q, cap).map_err(|e| CliError::new(1, e.to_string()))?;
    emit_report(
        &CountReport {
            quiver: describe(q),
            method: "brute".into(),
            count: records.len().to_string(),
            elapsed_ms: start.elapsed().as_millis(),
            classes: Some(records.iter().map(ClassJson::from).collect()),
        },
        json,
    );
    Ok(())
}

#[derive(Serialize)]
struct CheckReport {
    perm: Vec<usize>,
    supports: Vec<Vec<usize>>,
    locality_ok: Vec<bool>,
    filtration: Vec<FiltrationStepJson>,
    verdict: bool,
}

#[derive(Serialize)]
struct FiltrationStepJson {
    generator: usize,
    support: Vec<usize>,
    remaining: Vec<usize>,
}

fn cmd_check(q: &Quiver, perm: &str, json: bool) -> Result<bool, CliError> {
    let images: Vec<usize> = perm
        .split(',')
        .map(|p| p.trim().parse())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::new(1, format!("bad --perm value `{perm}`")))?;
    let sigma = Permutation::new(images).map_err(|e| CliError::new(1, e.to_string()))?;
    if sigma.n() != q.n() {
        return Err(CliError::new(
            1,
            format!("permutation length {} != vertex count {}", sigma.n(), q.n()),
        ));
    }
    let tuple = standard_tuple(q, &sigma);
    let cert = is_quasi_hereditary(q, &sigma);
    let report = CheckReport {
        perm: sigma.images().to_vec(),
        supports: tuple.supports.iter().map(|s| s.to_vec()).collect(),
        locality_ok: cert.locality_ok.clone(),
        filtration: cert
            .filtration
            .steps
            .iter()
            .map(|s| FiltrationStepJson {
                generator: s.generator,
                support: s.support.to_vec(),
                remaining: s.remaining.clone(),
            })
            .collect(),
        verdict: cert.verdict,
    };
    if json {
        println!("{}", serde_json::to_string(&report).expect("report serializes"));
    } else {
        for (i, supp) in report.supports.iter().enumerate() {
            println!(
                "vertex {}: standard support {:?}, End local: {}",
                i + 1,
                supp,
                report.locality_ok[i]
            );
        }
        for step in &report.filtration {
            println!(
                "peel {} with support {:?}, remaining {:?}",
                step.generator, step.support, step.remaining
            );
        }
        println!("verdict: {}", report.verdict);
    }
    Ok(cert.verdict)
}

fn cmd_cross_validate(max_n: usize, seed: u64) -> Result<bool, CliError> {
    if max_n > 9 {
        return Err(CliError::new(1, "--max-n for cross-validate is capped at 9"));
    }
    let checks = run_battery(max_n, seed);
    let mut all_ok = true;
    for check in &checks {
        println!(
            "{}: {} — {}",
            if check.passed { "PASS" } else { "FAIL" },
            check.name,
            check.detail
        );
        all_ok &= check.passed;
    }
    Ok(all_ok)
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::new(1, e.to_string()))?;
    }
    match cli.command {
        Command::Count {
            source,
            method,
            max_n,
        } => {
            let q = source.load()?;
            cmd_count(&q, method, validate_cap(max_n)?, cli.json)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::List { source, max_n } => {
            let q = source.load()?;
            cmd_list(&q, validate_cap(max_n)?, cli.json)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Check { source, perm } => {
            let q = source.load()?;
            let verdict = cmd_check(&q, &perm, cli.json)?;
            Ok(if verdict {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::CrossValidate { max_n, seed } => {
            let all_ok = cmd_cross_validate(max_n, seed)?;
            Ok(if all_ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Catalan { k } => {
            println!("{}", catalan(k));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}
