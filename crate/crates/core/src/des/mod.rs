//! Continuous-time ALOHA channel.
//!
//! Packets have a fixed duration of one time unit. Each node draws Poisson
//! arrivals, passes every arrival through a Bernoulli gate with its current
//! transmit probability and transmits gated-in packets immediately, without
//! carrier sensing. Fates are computed from the complete set of transmissions
//! in an epoch.

mod arrivals;
mod classify;
mod engine;
mod stats;
mod topology;

pub use arrivals::{gate_arrivals, generate_arrivals, ArrivalEvent};
pub use classify::{classify_transmissions, classify_with_context, observe_nonoverlap, Fate, TransmissionRecord};
pub use engine::{run_epoch, Engine, TransmitterModel};
pub use stats::{collision_probabilities, CollisionProbabilities, EpochStats, NodeCounters};
pub use topology::Topology;

/// Packet duration; all times and loads are normalized to it.
pub const PACKET_DURATION: f64 = 1.0;

/// Default epoch length in packet durations.
pub const DEFAULT_EPOCH_DURATION: f64 = 1000.0;
