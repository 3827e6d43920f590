//! Command-line front end: bounds tables, ensemble certification, phase
//! retrieval by projections, random search, Sturm root counting, and the
//! bundled reference-instance verification.
//!
//! Exit codes: 0 INJECTIVE / success, 1 FAIL, 2 INDETERMINATE, 3 usage or
//! I/O error.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use lowrank::certify::{
    vinzant_certify, Certificate, CertifyConfig, MeasurementEnsemble, Verdict,
};
use lowrank::fixtures;
use lowrank::groebner::Limits;
use lowrank::poly::{Polynomial, VariableSet};
use lowrank::projections::{certify_phase_retrieval, SubspaceFamily};
use lowrank::realroots::count_real_roots_poly;
use lowrank::search::{search_minimal, SearchConfig};
use lowrank::variety::{bounds_row, Field, ProblemSpec, Variant};

#[derive(Parser)]
#[command(name = "lowrank", version, about = "Exact injectivity certification for low-rank matrix measurements")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct LimitArgs {
    /// Abort Groebner runs after this many seconds (default: no limit)
    #[arg(long)]
    timeout_seconds: Option<u64>,
    /// Cap on processed S-pairs per Groebner run
    #[arg(long)]
    max_pairs: Option<u64>,
    /// Cap on intermediate polynomial degree
    #[arg(long)]
    max_degree: Option<u32>,
}

impl LimitArgs {
    fn limits(&self) -> Limits {
        let mut l = Limits::default();
        if let Some(p) = self.max_pairs {
            l.max_pairs = p;
        }
        if let Some(d) = self.max_degree {
            l.max_degree = d;
        }
        l.timeout = self.timeout_seconds.map(Duration::from_secs);
        l
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FieldArg {
    Real,
    Complex,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print dimension, degree, parity, measurement bound and tightness
    Bounds {
        #[arg(long)]
        n: u32,
        /// Rank bound; omit to sweep 1..=n/2
        #[arg(long)]
        r: Option<u32>,
        #[arg(long, value_enum, default_value = "real")]
        field: FieldArg,
    },
    /// Certify an ensemble file; writes a certificate
    Certify {
        file: PathBuf,
        /// Kept-variable pair, e.g. x43,x44 (default: last two)
        #[arg(long)]
        keep_vars: Option<String>,
        /// Certificate output path (default: stdout)
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Certify a subspace-family file for phase retrieval
    PhaseRetrieval {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Random search for injective ensembles
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        symmetric: bool,
        #[arg(long)]
        m: usize,
        /// Integer entry range LO:HI
        #[arg(long, default_value = "-4:4")]
        range: String,
        #[arg(long, default_value_t = 16)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Count distinct real roots of a univariate polynomial file
    Sturm { file: PathBuf },
    /// Re-run a bundled reference instance and compare f0 to its golden
    /// polynomial
    VerifyPaper {
        #[arg(value_parser = ["thm33", "thm43"])]
        target: String,
        #[command(flatten)]
        limits: LimitArgs,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // help/version are successes; everything else is a usage error
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(3),
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn read_file(path: &PathBuf) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn verdict_code(cert: &Certificate) -> ExitCode {
    match cert.verdict {
        Verdict::Injective => ExitCode::SUCCESS,
        Verdict::Fail => ExitCode::from(1),
        Verdict::Indeterminate => ExitCode::from(2),
    }
}

fn summarize(cert: &Certificate) {
    let mut line = format!("verdict: {:?}", cert.verdict).to_uppercase();
    if let Some(d) = cert.f0_degree {
        line.push_str(&format!(", f0 degree {d}"));
    }
    if let Some(rc) = cert.root_count {
        line.push_str(&format!(", {rc} real roots"));
    }
    if let Some(r) = &cert.reason {
        line.push_str(&format!(" ({r})"));
    }
    eprintln!("{line}");
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.cmd {
        Cmd::Bounds { n, r, field } => {
            let field = match field {
                FieldArg::Real => Field::Real,
                FieldArg::Complex => Field::Complex,
            };
            let ranks: Vec<u32> = match r {
                Some(r) => vec![r],
                None => (1..=n / 2).collect(),
            };
            println!(
                "{:>3} {:>3} {:<14} {:>5} {:>10} {:>4} {:>6}  {}",
                "n", "r", "variant", "dim", "degree", "odd", "bound", "tightness"
            );
            for r in ranks {
                for variant in [Variant::General, Variant::Symmetric, Variant::WeakRecovery] {
                    let spec = ProblemSpec {
                        n,
                        r,
                        variant,
                        field,
                    };
                    let row = bounds_row(&spec).map_err(|e| e.to_string())?;
                    println!(
                        "{:>3} {:>3} {:<14} {:>5} {:>10} {:>4} {:>6}  {:?}",
                        row.n,
                        row.r,
                        format!("{:?}", row.variant),
                        row.dim,
                        row.degree,
                        row.degree_odd,
                        row.bound,
                        row.tightness
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Certify {
            file,
            keep_vars,
            out,
            limits,
        } => {
            let e = MeasurementEnsemble::from_json(&read_file(&file)?)
                .map_err(|e| e.to_string())?;
            let keep = match keep_vars {
                None => None,
                Some(s) => {
                    let (a, b) = s
                        .split_once(',')
                        .ok_or_else(|| format!("--keep-vars expects A,B, got `{s}`"))?;
                    Some((a.trim().to_string(), b.trim().to_string()))
                }
            };
            let config = CertifyConfig {
                keep,
                limits: limits.limits(),
                preprocess: true,
            };
            let cert = vinzant_certify(&e, &config).map_err(|e| e.to_string())?;
            emit(&out, &cert.to_json())?;
            summarize(&cert);
            Ok(verdict_code(&cert))
        }
        Cmd::PhaseRetrieval { file, out, limits } => {
            let fam =
                SubspaceFamily::from_json(&read_file(&file)?).map_err(|e| e.to_string())?;
            let config = CertifyConfig {
                limits: limits.limits(),
                ..CertifyConfig::default()
            };
            let cert = certify_phase_retrieval(&fam.subspaces, fam.n, &config)
                .map_err(|e| e.to_string())?;
            emit(&out, &cert.to_json())?;
            summarize(&cert);
            Ok(verdict_code(&cert))
        }
        Cmd::Search {
            n,
            r,
            symmetric,
            m,
            range,
            trials,
            seed,
            out,
            limits,
        } => {
            let (lo, hi) = range
                .split_once(':')
                .ok_or_else(|| format!("--range expects LO:HI, got `{range}`"))?;
            let lo: i64 = lo.trim().parse().map_err(|_| format!("bad range bound `{lo}`"))?;
            let hi: i64 = hi.trim().parse().map_err(|_| format!("bad range bound `{hi}`"))?;
            let config = SearchConfig {
                n,
                r,
                symmetric,
                m,
                lo,
                hi,
                trials,
                seed,
                limits: limits.limits(),
            };
            let report = search_minimal(&config).map_err(|e| e.to_string())?;
            emit(&out, &report.to_json())?;
            eprintln!(
                "trials: {}, injective: {}, fail: {}, indeterminate: {}",
                trials, report.injective, report.fail, report.indeterminate
            );
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Sturm { file } => {
            let text = read_file(&file)?;
            let poly = parse_univariate(&text)?;
            let count = count_real_roots_poly(&poly).map_err(|e| e.to_string())?;
            println!("distinct real roots: {count}");
            Ok(ExitCode::SUCCESS)
        }
        Cmd::VerifyPaper { target, limits } => {
            let config = CertifyConfig {
                limits: limits.limits(),
                ..CertifyConfig::default()
            };
            let (cert, golden_text, kept) = match target.as_str() {
                "thm33" => {
                    let e = MeasurementEnsemble::from_json(fixtures::ENSEMBLE_11)
                        .map_err(|e| e.to_string())?;
                    let cert = vinzant_certify(&e, &config).map_err(|e| e.to_string())?;
                    (cert, fixtures::GOLDEN_DEGREE20, ["x43", "x44"])
                }
                "thm43" => {
                    let fam = SubspaceFamily::from_json(fixtures::SUBSPACES_UV)
                        .map_err(|e| e.to_string())?;
                    let cert = certify_phase_retrieval(&fam.subspaces, fam.n, &config)
                        .map_err(|e| e.to_string())?;
                    (cert, fixtures::GOLDEN_DEGREE10, ["x34", "x44"])
                }
                _ => unreachable!("clap validates the target"),
            };
            if cert.verdict != Verdict::Injective {
                summarize(&cert);
                return Ok(verdict_code(&cert));
            }
            let vars = VariableSet::new(kept);
            let golden =
                Polynomial::parse(&vars, golden_text.trim()).map_err(|e| e.to_string())?;
            let f0 = cert
                .f0_poly()
                .ok_or("certificate carries no f0")?
                .project(&vars)
                .map_err(|e| e.to_string())?;
            if f0.proportional_to(&golden) {
                println!(
                    "f0 degree {}, proportional to golden",
                    f0.degree().unwrap_or(0)
                );
                Ok(ExitCode::SUCCESS)
            } else {
                println!("f0 does NOT match the golden polynomial");
                Ok(ExitCode::from(1))
            }
        }
    }
}

/// Parse a polynomial file over whatever single variable it mentions.
fn parse_univariate(text: &str) -> Result<Polynomial, String> {
    let mut names: Vec<String> = Vec::new();
    let mut cur = String::new();
    for c in text.chars() {
        if c.is_ascii_alphabetic() || c == '_' || (!cur.is_empty() && c.is_ascii_digit()) {
            cur.push(c);
        } else {
            if !cur.is_empty() && !names.contains(&cur) {
                names.push(cur.clone());
            }
            cur.clear();
        }
    }
    if !cur.is_empty() && !names.contains(&cur) {
        names.push(cur);
    }
    if names.len() > 1 {
        return Err(format!(
            "expected a univariate polynomial, found variables {}",
            names.join(", ")
        ));
    }
    if names.is_empty() {
        names.push("x".to_string());
    }
    let vars = VariableSet::new(names);
    Polynomial::parse(&vars, text.trim()).map_err(|e| e.to_string())
}
