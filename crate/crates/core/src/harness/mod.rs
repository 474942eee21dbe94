//! Experiment harness: configs, the epoch driver, convergence detection,
//! load sweeps and CSV output.

mod config;
pub mod convergence;
pub mod output;
mod runner;
pub mod sweep;

pub use config::{parse_config, LoadSchedule, ScenarioConfig};
pub use convergence::{convergence_after, detect_convergence};
pub use runner::{run_replicates, run_scenario, run_with_seed, tail_mean, total_series, EpochRecord, Simulation};
pub use sweep::{baseline_sweep, equal_share_search, load_sweep, parse_grid, EqualShare, SweepResult, SweepRow};
