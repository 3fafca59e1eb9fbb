use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use achro::bounds::{known_value, ratio_report, theorem4_bounds};
use achro::colouring::{ColourMatrix, CompletenessMode};
use achro::constructions::build_colouring;
use achro::gf::prime_power;
use achro::plane::ProjectivePlane;
use achro::solver::{achromatic_exact, MAX_CELLS};
use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use serde::Serialize;

/// Complete colourings of K_p □ K_q built from projective planes.
#[derive(Parser, Debug)]
#[command(name = "achro", version)]
struct Cli {
    /// Print a readable summary on stderr and enable progress logging.
    #[arg(short, long, global = true)]
    verbose: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit PG(2, r) as JSON.
    Plane { r: u64 },
    /// Check the plane axioms on a plane JSON file ("-" for stdin).
    VerifyPlane { file: PathBuf },
    /// Emit the colouring matrix for K_{r²+r+1} □ K_{(r+1)s+t}.
    Construct {
        r: u64,
        s: u64,
        #[arg(default_value_t = 0)]
        t: u64,
    },
    /// Check that a matrix JSON file ("-" for stdin) is proper and complete.
    Verify {
        file: PathBuf,
        #[arg(long, default_value = "line")]
        mode: CompletenessMode,
    },
    /// Bounds on achr(K_{r²+r+1} □ K_{(r+1)s+t}).
    Bounds {
        r: u64,
        s: u64,
        t: u64,
        /// Build and attach the lower-bound colouring.
        #[arg(long)]
        witness: bool,
    },
    /// Closed-form achromatic number of K_p □ K_q for small p, if known.
    Known { p: u64, q: u64 },
    /// Exact achromatic number of K_p □ K_q by exhaustive search.
    Exact {
        p: usize,
        q: usize,
        /// Time limit in seconds; unlimited when absent.
        #[arg(long, env = "ACHRO_BUDGET_SECS")]
        budget: Option<f64>,
    },
    /// The limit of achr(K_{r²+r+1} □ K_q)/q.
    Ratio { r: u64 },
}

enum Failure {
    Usage(anyhow::Error),
    Verification,
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

fn read_input(path: &PathBuf) -> anyhow::Result<String> {
    if path.as_os_str() == "-" {
        let mut buf = String::new();
        io::stdin().read_to_string(&mut buf).context("reading stdin")?;
        Ok(buf)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn emit<T: Serialize>(value: &T) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string(value)?);
    Ok(())
}

fn require_prime_power(r: u64, rule: &str) -> anyhow::Result<()> {
    if r < 2 || prime_power(r).is_none() {
        bail!("{rule} requires a plane of order r, which is constructed only for prime powers r ≥ 2; got {r}");
    }
    Ok(())
}

fn check_theorem4(r: u64, s: u64, t: u64) -> anyhow::Result<()> {
    if r < 2 {
        bail!("Theorem 4 requires r ≥ 2, got {r}");
    }
    if s < r.pow(3) + 1 {
        bail!("Theorem 4 requires s ≥ r³+1 = {}, got {s}", r.pow(3) + 1);
    }
    if t > r {
        bail!("Theorem 4 requires t ∈ [0, r] = [0, {r}], got {t}");
    }
    Ok(())
}

#[derive(Serialize)]
struct Unknown {
    p: u64,
    q: u64,
    value: Option<u64>,
}

fn run(cli: Cli) -> Result<(), Failure> {
    let verbose = cli.verbose;
    match cli.command {
        Command::Plane { r } => {
            require_prime_power(r, "plane construction")?;
            let plane = ProjectivePlane::construct_order(r).map_err(anyhow::Error::from)?;
            if verbose {
                eprintln!(
                    "PG(2,{r}): {} points, {} lines",
                    plane.num_points(),
                    plane.num_lines()
                );
            }
            println!("{}", plane.to_json());
        }
        Command::VerifyPlane { file } => {
            let plane = ProjectivePlane::from_json(&read_input(&file)?).map_err(anyhow::Error::from)?;
            let report = plane.verify();
            if verbose {
                for check in &report.checks {
                    let status = if check.passed { "ok" } else { "FAILED" };
                    eprintln!("{} {}: {status}", check.property, check.description);
                }
            }
            emit(&report)?;
            if !report.passed() {
                return Err(Failure::Verification);
            }
        }
        Command::Construct { r, s, t } => {
            require_prime_power(r, "Lemma 3")?;
            if t == 0 {
                if s < r + 1 {
                    return Err(anyhow::anyhow!("Lemma 3 requires s ≥ r+1 = {}, got {s}", r + 1).into());
                }
            } else {
                check_theorem4(r, s, t)?;
            }
            let m = build_colouring(r, s as usize, t as usize).map_err(anyhow::Error::from)?;
            if verbose {
                eprintln!("{}x{} matrix, {} colours", m.rows(), m.cols(), m.colour_count());
            }
            println!("{}", m.to_json());
        }
        Command::Verify { file, mode } => {
            let m = ColourMatrix::from_json(&read_input(&file)?).map_err(anyhow::Error::from)?;
            let report = m.verify(mode);
            if verbose {
                eprintln!(
                    "{}x{} matrix, {} colours: proper rows {}, proper columns {}, {mode:?}-complete {}",
                    report.rows,
                    report.cols,
                    report.colour_count,
                    report.proper_rows.passed,
                    report.proper_cols.passed,
                    report.complete.passed
                );
            }
            emit(&report)?;
            if !report.passed() {
                return Err(Failure::Verification);
            }
        }
        Command::Bounds { r, s, t, witness } => {
            check_theorem4(r, s, t)?;
            let report = theorem4_bounds(r, s, t, witness).map_err(anyhow::Error::from)?;
            if verbose {
                for note in &report.notes {
                    eprintln!("{note}");
                }
            }
            emit(&report)?;
        }
        Command::Known { p, q } => {
            if p == 0 || q == 0 {
                return Err(anyhow::anyhow!("p and q must be positive, got {p} and {q}").into());
            }
            match known_value(p, q) {
                Some(known) => {
                    if verbose {
                        eprintln!("achr(K_{p} □ K_{q}) = {} by {}", known.value, known.rule);
                    }
                    emit(&known)?;
                }
                None => {
                    if verbose {
                        eprintln!("no closed form known for ({p}, {q})");
                    }
                    emit(&Unknown { p, q, value: None })?;
                }
            }
        }
        Command::Exact { p, q, budget } => {
            if p == 0 || q == 0 {
                return Err(anyhow::anyhow!("p and q must be positive, got {p} and {q}").into());
            }
            if p * q > MAX_CELLS {
                return Err(anyhow::anyhow!(
                    "the exact search supports at most {MAX_CELLS} cells, got {p}x{q}"
                )
                .into());
            }
            let budget = match budget {
                Some(secs) if !(secs.is_finite() && secs > 0.0) => {
                    return Err(anyhow::anyhow!("budget must be a positive number of seconds").into())
                }
                Some(secs) => Some(Duration::from_secs_f64(secs)),
                None => None,
            };
            let sol = achromatic_exact(p, q, budget).map_err(anyhow::Error::from)?;
            if verbose {
                eprintln!(
                    "achr(K_{p} □ K_{q}) {} {} after {} nodes",
                    if sol.is_optimal() { "=" } else { "≥" },
                    sol.value,
                    sol.nodes
                );
            }
            emit(&sol)?;
        }
        Command::Ratio { r } => {
            let report = ratio_report(r).map_err(anyhow::Error::from)?;
            if verbose {
                eprintln!("limit for p = {}: {}", report.p, report.ratio);
            }
            emit(&report)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.verbose { "info" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
