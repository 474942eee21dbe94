//! Learning-based medium access control on top of an unslotted ALOHA channel.
//!
//! The crate is split into four layers:
//!
//! - [`des`]: a deterministic continuous-time engine that generates Poisson
//!   traffic, gates it through per-node transmit probabilities and classifies
//!   every transmission as a success, a self-collision or an inter-collision.
//! - [`learning`]: tabular Q-learning (single node) and hysteretic Q-learning
//!   (multi node) agents that pick a transmit probability once per epoch.
//! - [`analytic`]: the closed-form single-node throughput curve and a
//!   golden-section search for its optimum, used as a test oracle.
//! - [`harness`]: scenario configs, the epoch driver, convergence detection,
//!   load sweeps and CSV output.
//!
//! Time is measured in packet durations and loads in Erlang throughout.
//!
//! With the default `parallel` feature, sweeps and replicates fan out over a
//! rayon thread pool. Without it every batch runs sequentially; results are
//! identical either way because each run owns its random streams.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x >= 0.0)` also rejects NaN

pub mod analytic;
pub mod des;
mod error;
pub mod harness;
pub mod learning;
pub mod par;
pub mod rng;

pub use error::{Error, Result, Violation};
