use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use cbap::claims::{run_claim, Claim, ClaimConfig};
use cbap::distributions::{blowup_curve, geometric_radii, write_blowup_csv, Plateau};
use cbap::multiplier::{m0a_lower_bound, MultiplierSpec};
use cbap::numerics::ComplexMatrix;
use cbap::report::{Report, Tolerance};
use cbap::schur::{schur_dual_bound, schur_norm, verify_certificate};
use cbap::Error;

mod config;

use config::Settings;

const EXIT_FAIL: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_CONVERGENCE: u8 = 3;
const EXIT_USAGE: u8 = 64;

/// Numerical checks for Schur and Herz–Schur multipliers, Heisenberg-group
/// singular kernels and lattice induction.
#[derive(Debug, Parser)]
#[command(name = "cbap", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Print reports as JSON lines instead of summaries.
    #[arg(long, global = true)]
    json: bool,
    /// Main resolution of the selected claims (grid points or panels).
    #[arg(long, global = true, value_name = "N")]
    grid: Option<usize>,
    /// Truncation window of the selected claims.
    #[arg(long, global = true, value_name = "W")]
    window: Option<f64>,
    /// Seed for every random draw (default 7).
    #[arg(long, global = true, value_name = "S")]
    seed: Option<u64>,
    /// Write per-report runtimes to stderr.
    #[arg(long, global = true)]
    timings: bool,
    /// key=value file mirroring the flags above; flags take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the checks for one claim.
    Verify {
        /// lemma-a, lemma-b, lemma-c, lemma-d, lemma-e, lemma-f, lemma-g, formula-p20 or lemma-2-1.
        claim: String,
    },
    /// Schur multiplier norm of a matrix with a verified certificate.
    SchurNorm {
        /// JSON {"rows","cols","re","im"} or CSV with complex literals such as 1-2j.
        #[arg(long, value_name = "FILE")]
        matrix: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Lower bound for the Herz–Schur norm over sampled finite sets.
    M0aBound {
        /// JSON such as {"group":"Z","kind":"gaussian","sigma":1.0}.
        #[arg(long, value_name = "FILE")]
        spec: PathBuf,
        #[arg(long, value_name = "N")]
        sets: usize,
    },
    /// Lower-bound curve of the plateau family as CSV.
    Blowup {
        #[arg(long, value_name = "R")]
        rmax: f64,
        #[arg(long, value_name = "K")]
        steps: usize,
        /// Output file; the CSV goes to stdout when omitted.
        #[arg(long, value_name = "CSV")]
        out: Option<PathBuf>,
    },
    /// Run every claim in a fixed order.
    Suite {
        #[arg(long)]
        all: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return if usage { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

enum Failure {
    Usage(String),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Run(Error::Io(e))
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Convergence { .. } => EXIT_CONVERGENCE,
        Error::Config(_) | Error::Domain(_) | Error::Resource(_) | Error::Parse(_) | Error::Io(_) | Error::Json(_) => EXIT_CONFIG,
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Run(Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display())))))
}

/// Returns whether every report passed.
fn run(cli: Cli) -> Result<bool, Failure> {
    let settings = Settings::resolve(&cli.global)?;
    let claim_cfg = ClaimConfig { seed: settings.seed, grid: settings.grid, window: settings.window };
    let mut out = io::stdout().lock();
    match cli.command {
        Command::Verify { claim } => {
            let claim = Claim::from_id(&claim)
                .filter(|c| c.verifiable())
                .ok_or_else(|| Failure::Usage(format!("unknown claim {claim:?}")))?;
            let reports = run_claim(claim, &claim_cfg)?;
            emit(&mut out, &reports, &settings)
        }
        Command::Suite { all } => {
            if !all {
                return Err(Failure::Usage("suite needs --all".into()));
            }
            let mut passed = true;
            for claim in Claim::ALL {
                let reports = run_claim(claim, &claim_cfg)?;
                passed &= emit(&mut out, &reports, &settings)?;
            }
            Ok(passed)
        }
        Command::SchurNorm { matrix, tol } => {
            let start = Instant::now();
            let a = ComplexMatrix::parse(&read(&matrix)?)?;
            let (norm, cert) = schur_norm(&a, tol)?;
            let check = verify_certificate(&a, &cert);
            let lower = schur_dual_bound(&a)?;
            let mut report = Report::new("schur-norm", Tolerance::upper_bound(tol));
            report
                .input("matrix", matrix.display().to_string())
                .input("n", a.rows())
                .input("tol", tol)
                .record("norm", norm)
                .record("dual_lower_bound", lower)
                .compare("dual_gap", norm - lower, 0.0, "trace-norm dual")
                .require("certificate_verifies", check.pass);
            report.runtime_ms = Some(start.elapsed().as_millis() as u64);
            emit(&mut out, &[report], &settings)
        }
        Command::M0aBound { spec, sets } => {
            let start = Instant::now();
            let spec = MultiplierSpec::from_json_str(&read(&spec)?)?;
            let sampled = spec.sampled(sets, settings.seed)?;
            let bound = m0a_lower_bound(&sampled, 1e-6)?;
            let mut report = Report::new("m0a-bound", Tolerance::absolute(0.0));
            report
                .input_serialized("spec", &spec)
                .input("sets", sets)
                .input("seed", settings.seed)
                .record("lower_bound", bound.lower_bound)
                .with_note("maximum over the sampled sets; a lower bound, not the norm");
            for (k, v) in bound.per_set.iter().enumerate() {
                report.record(&format!("set[{k}]"), *v);
            }
            report.runtime_ms = Some(start.elapsed().as_millis() as u64);
            emit(&mut out, &[report], &settings)
        }
        Command::Blowup { rmax, steps, out: path } => {
            let start = Instant::now();
            let points = blowup_curve(&geometric_radii(rmax, steps)?, Plateau::Smooth)?;
            let mut report = Report::new("blowup-curve", Tolerance::absolute(0.0));
            report
                .input("rmax", rmax)
                .input("steps", steps)
                .record("final_bound", points.last().map_or(0.0, |p| p.lower_bound))
                .require("strictly_increasing", points.windows(2).all(|w| w[1].lower_bound > w[0].lower_bound));
            report.runtime_ms = Some(start.elapsed().as_millis() as u64);
            match path {
                Some(path) => {
                    write_blowup_csv(&points, io::BufWriter::new(fs::File::create(&path)?))?;
                    report.input("out", path.display().to_string());
                    emit(&mut out, &[report], &settings)
                }
                None => {
                    write_blowup_csv(&points, &mut out)?;
                    emit(&mut io::stderr().lock(), &[report], &settings)
                }
            }
        }
    }
}

fn emit(out: &mut impl Write, reports: &[Report], settings: &Settings) -> Result<bool, Failure> {
    let mut passed = true;
    for report in reports {
        if settings.json {
            writeln!(out, "{}", report.to_json_line(false))?;
        } else {
            writeln!(out, "{}", report.summary_line())?;
        }
        if settings.timings {
            eprintln!("{{\"claim\":\"{}\",\"runtime_ms\":{}}}", report.claim, report.runtime_ms.unwrap_or(0));
        }
        passed &= report.pass;
    }
    out.flush()?;
    Ok(passed)
}
