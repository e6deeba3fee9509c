//! Command-line front end.
//!
//! Exit codes: 0 success, 1 failed validation, 2 configuration error (bad or
//! unreadable documents, bad flags), 3 domain error (valid input the model
//! cannot evaluate).

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analytic::{cumulants, threshold_verdict, CumulantSet, ThresholdVerdict, MIN_REPORTED_ORDER};
use crate::combinatorics::MAX_ORDER;
use crate::error::{Error, Result};
use crate::geometry::{derive_geometry, GeometrySummary};
use crate::montecarlo::{default_workers, estimate, McConfig, McEstimate};
use crate::scenario::{Lobe, Scenario};
use crate::sweep::{run_sweep, summarize, write_outputs, SweepSpec};
use crate::validation::run_validation;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

pub const SCENARIO_ENV: &str = "RFI_COEXIST_SCENARIO";

#[derive(Debug, Parser)]
#[command(name = "rfi-coexist", version, about = "Aggregate RFI temperature statistics for a clustered terrestrial network seen by a satellite radiometer")]
pub struct Cli {
    /// Scenario document (TOML). Without it the built-in reference scenario is used.
    #[arg(long, global = true, env = SCENARIO_ENV, value_name = "PATH")]
    pub scenario: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form cumulants, moments and threshold verdict (JSON).
    Analytic {
        #[arg(long, value_enum, default_value_t = LobeArg::Both)]
        lobe: LobeArg,
        /// Highest cumulant order to report.
        #[arg(long, default_value_t = MIN_REPORTED_ORDER)]
        max_order: usize,
    },
    /// Monte Carlo estimate of the same statistics (JSON).
    Simulate {
        #[arg(long, value_enum, default_value_t = LobeArg::Both)]
        lobe: LobeArg,
        #[command(flatten)]
        mc: McArgs,
    },
    /// Statistics over a grid of path-loss exponents and station intensities (CSV).
    Sweep {
        /// Sweep document (TOML); defaults to the built-in grid.
        #[arg(long, value_name = "PATH")]
        sweep: Option<PathBuf>,
        #[arg(long, value_name = "PATH", default_value = "sweep.csv")]
        out: PathBuf,
        /// Also render mean and standard-deviation charts as SVG.
        #[arg(long)]
        svg: bool,
        /// Overrides `[mc] trials` of the sweep document.
        #[arg(long)]
        trials: Option<u64>,
        /// Overrides `[mc] seed` of the sweep document.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Closed forms against Monte Carlo, finite differences and geometry identities.
    Validate {
        #[command(flatten)]
        mc: McArgs,
    },
    /// Derived cap geometry (JSON).
    Geometry,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct McArgs {
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    pub workers: Option<usize>,
}

impl McArgs {
    fn config(&self) -> McConfig {
        McConfig {
            trials: self.trials,
            seed: self.seed,
            workers: self.workers.unwrap_or_else(default_workers),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LobeArg {
    Main,
    Side,
    Both,
}

impl LobeArg {
    pub fn lobes(self) -> &'static [Lobe] {
        match self {
            LobeArg::Main => &[Lobe::Main],
            LobeArg::Side => &[Lobe::Side],
            LobeArg::Both => &Lobe::ALL,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct AnalyticEntry {
    pub cumulant_set: CumulantSet,
    pub verdict: ThresholdVerdict,
}

#[derive(Debug, Serialize)]
pub struct AnalyticReport {
    pub path_loss_exponent: f64,
    pub bs_intensity: f64,
    pub results: Vec<AnalyticEntry>,
}

#[derive(Debug, Serialize)]
pub struct SimulateReport {
    pub results: Vec<McEstimate>,
}

pub fn exit_code(err: &Error) -> i32 {
    if err.is_config() {
        EXIT_CONFIG
    } else {
        EXIT_DOMAIN
    }
}

pub fn load_scenario(path: Option<&PathBuf>) -> Result<Scenario> {
    match path {
        Some(p) => Scenario::from_path(p),
        None => Ok(Scenario::reference()),
    }
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Malformed(e.to_string()))?;
    writeln!(out, "{text}").map_err(|source| Error::Io {
        path: "<stdout>".into(),
        source,
    })
}

pub fn analytic_report(s: &Scenario, geo: &GeometrySummary, lobes: &[Lobe], max_order: usize) -> Result<AnalyticReport> {
    if !(MIN_REPORTED_ORDER..=MAX_ORDER).contains(&max_order) {
        return Err(Error::InvalidField {
            field: "max-order".into(),
            reason: format!("{max_order} is not in {MIN_REPORTED_ORDER}..={MAX_ORDER}"),
        });
    }
    let results = lobes
        .iter()
        .map(|&lobe| {
            let cs = cumulants(s, geo, lobe, max_order)?;
            let verdict = threshold_verdict(&cs, s.rfi_threshold);
            Ok(AnalyticEntry {
                cumulant_set: cs,
                verdict,
            })
        })
        .collect::<Result<_>>()?;
    Ok(AnalyticReport {
        path_loss_exponent: s.path_loss_exponent,
        bs_intensity: s.bs_intensity,
        results,
    })
}

pub fn simulate_report(s: &Scenario, geo: &GeometrySummary, lobes: &[Lobe], cfg: &McConfig) -> Result<SimulateReport> {
    if cfg.trials == 1 {
        return Err(Error::InsufficientTrials { trials: 1 });
    }
    let results = lobes
        .iter()
        .map(|&lobe| estimate(s, geo, lobe, cfg))
        .collect::<Result<_>>()?;
    Ok(SimulateReport { results })
}

/// Executes a parsed command line and returns the exit code. Reports go to
/// `out`, diagnostics and progress to `err`.
pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match dispatch(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error[{}]: {e}", e.code());
            exit_code(&e)
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let s = load_scenario(cli.scenario.as_ref())?;
    let geo = derive_geometry(&s)?;
    match &cli.command {
        Command::Analytic { lobe, max_order } => {
            write_json(out, &analytic_report(&s, &geo, lobe.lobes(), *max_order)?)?;
        }
        Command::Simulate { lobe, mc } => {
            write_json(out, &simulate_report(&s, &geo, lobe.lobes(), &mc.config())?)?;
        }
        Command::Sweep {
            sweep,
            out: csv,
            svg,
            trials,
            seed,
            workers,
        } => {
            let mut spec = match sweep {
                Some(p) => SweepSpec::from_path(p)?,
                None => SweepSpec::default(),
            };
            spec.mc.trials = trials.unwrap_or(spec.mc.trials);
            spec.mc.seed = seed.unwrap_or(spec.mc.seed);
            if let Some(w) = workers {
                spec.mc.workers = *w;
            }
            if spec.mc.workers == 0 {
                return Err(Error::NonPositive {
                    field: "workers".into(),
                    value: 0.0,
                });
            }
            let rows = run_sweep(&s, &geo, &spec)?;
            let written = write_outputs(csv, &s, &spec, &rows, *svg)?;
            for p in &written {
                let _ = writeln!(err, "wrote {}", p.display());
            }
            write_json(out, &summarize(&s, &spec, &rows))?;
        }
        Command::Validate { mc } => {
            let report = run_validation(&s, &mc.config())?;
            write!(out, "{}", report.table()).map_err(|source| Error::Io {
                path: "<stdout>".into(),
                source,
            })?;
            if !report.passed() {
                for c in report.failures() {
                    let _ = writeln!(
                        err,
                        "FAIL {} {}: observed {:e}, expected {:e}, score {:.3e} > {:.1e}",
                        c.kind.as_str(),
                        c.name,
                        c.observed,
                        c.expected,
                        c.score,
                        c.limit
                    );
                }
                return Ok(EXIT_VALIDATION_FAILED);
            }
        }
        Command::Geometry => write_json(out, &geo)?,
    }
    Ok(EXIT_OK)
}

/// Parses the process arguments, runs, and returns the exit code.
pub fn main_entry() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    execute(&cli, &mut stdout.lock(), &mut stderr.lock())
}
