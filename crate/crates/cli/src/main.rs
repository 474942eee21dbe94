//! `macrl`: run learning-based MAC experiments and write CSV results.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use macrl_core::analytic::{optimal_load, ThroughputCurve};
use macrl_core::harness::{self, output, ScenarioConfig, Simulation};
use macrl_core::par::Execution;
use macrl_core::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "macrl", version, about = "Learning-based medium access on an unslotted ALOHA channel")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form single-node throughput curve.
    Analytic {
        #[arg(long, default_value_t = 0.0)]
        lo: f64,
        #[arg(long, default_value_t = 6.0)]
        hi: f64,
        #[arg(long, default_value_t = 121)]
        points: usize,
        /// Output CSV; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one scenario and write the per-epoch CSV.
    Simulate {
        config: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Also write the final Q-tables to this CSV.
        #[arg(long)]
        qtables: Option<PathBuf>,
    },
    /// Run a scenario over a grid of constant loads.
    Sweep {
        config: PathBuf,
        /// Grid spec, e.g. `0.1:1:0.1`, `0.2,0.28,0.2` or `n2=0:2:0.25`; `;` separates entries.
        #[arg(long)]
        grid: String,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        batch: Batch,
    },
    /// Pure ALOHA sweep of the scenario's topology, reporting the best load.
    Baseline {
        config: PathBuf,
        #[arg(long, default_value = "0.05:3:0.05")]
        grid: String,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        batch: Batch,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// Override the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the number of epochs.
    #[arg(long)]
    epochs: Option<u64>,
    /// Output CSV; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Batch {
    /// Override the number of replicates per grid point.
    #[arg(long)]
    replicates: Option<usize>,
    /// Also write one row per replicate with its raw convergence epoch.
    #[arg(long)]
    runs: Option<PathBuf>,
    /// Run grid points one after another instead of on the thread pool.
    #[arg(long)]
    sequential: bool,
}

impl Batch {
    fn execution(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        }
    }
}

fn load(path: &Path, common: &Common, replicates: Option<usize>) -> Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut config = harness::parse_config(&text)?;
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    if let Some(epochs) = common.epochs {
        if epochs == 0 {
            return Err(Error::Invalid(vec![macrl_core::Violation::new("epochs", "must be at least 1")]));
        }
        config.epochs = epochs;
    }
    if let Some(r) = replicates {
        if r == 0 {
            return Err(Error::Invalid(vec![macrl_core::Violation::new("replicates", "must be at least 1")]));
        }
        config.replicates = r;
    }
    for w in &config.warnings {
        eprintln!("warning: {w}");
    }
    Ok(config)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Analytic { lo, hi, points, out } => {
            let curve = ThroughputCurve::closed_form(lo, hi, points)?;
            output::emit(out.as_deref(), |w| curve.write_csv(w))?;
            let opt = optimal_load(lo, hi)?;
            eprintln!("optimum g={:.4} s={:.5}", opt.load, opt.throughput);
        }
        Command::Simulate { config, common, qtables } => {
            let config = load(&config, &common, None)?;
            let mut sim = Simulation::new(&config, config.seed)?;
            let records = sim.by_ref().collect::<Result<Vec<_>>>()?;
            output::emit(common.out.as_deref(), |w| output::write_epochs(&records, config.node_count(), w))?;
            if let Some(path) = qtables {
                output::save(&path, |f| output::write_qtables(sim.agents(), f))?;
            }
        }
        Command::Sweep { config, grid, common, batch } => {
            let config = load(&config, &common, batch.replicates)?;
            let grid = harness::parse_grid(&grid, &config)?;
            let result = harness::load_sweep(&config, &grid, batch.execution())?;
            output::emit(common.out.as_deref(), |w| output::write_sweep(&result, w))?;
            if let Some(path) = batch.runs {
                output::save(&path, |f| output::write_runs(&result, f))?;
            }
        }
        Command::Baseline { config, grid, common, batch } => {
            let config = load(&config, &common, batch.replicates)?;
            let grid = harness::parse_grid(&grid, &config)?;
            let result = harness::baseline_sweep(&config, &grid, batch.execution())?;
            output::emit(common.out.as_deref(), |w| output::write_sweep(&result, w))?;
            if let Some(path) = batch.runs {
                output::save(&path, |f| output::write_runs(&result, f))?;
            }
            match result.optimum() {
                Some(opt) => eprintln!(
                    "optimum g={:.4} S={:.5}{}",
                    opt.load,
                    opt.throughput,
                    if opt.unimodal { "" } else { " (curve is not unimodal)" }
                ),
                None => eprintln!("optimum unavailable: fewer than two grid points"),
            }
        }
    }
    Ok(())
}

fn error_line(kind: &str, message: &str, violations: &[macrl_core::Violation]) -> String {
    let mut obj = serde_json::json!({ "kind": kind, "message": message });
    if !violations.is_empty() {
        obj["violations"] = violations
            .iter()
            .map(|v| serde_json::json!({ "field": v.field, "message": v.message }))
            .collect();
    }
    format!("error: {obj}")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.render().to_string();
            let message = rendered.lines().next().unwrap_or_default().trim_start_matches("error: ");
            eprintln!("{}", error_line("usage", message, &[]));
            eprintln!("run `macrl --help` for usage");
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let violations = match &e {
                Error::Invalid(v) => v.as_slice(),
                _ => &[],
            };
            eprintln!("{}", error_line(e.kind(), &e.to_string(), violations));
            ExitCode::FAILURE
        }
    }
}
