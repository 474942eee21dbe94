//! Tabular MAC agents.
//!
//! An agent observes its own collision ratios once per epoch, maps them to a
//! discrete congestion state, scores the epoch with a throughput/fairness
//! reward and picks its next transmit probability ε-greedily from a Q-table.
//! A lone node uses classical Q-learning; nodes sharing the channel use the
//! hysteretic variant, which shrinks the step taken on negative
//! temporal-difference errors.

mod action;
mod agent;
mod params;
mod policy;
mod qtable;
mod reward;
mod state;

pub use action::{ActionStrategy, StrategyKind, FIXED_PROBABILITIES, INCREMENTAL_STEP};
pub use agent::{Agent, Policy, StepOutcome, INITIAL_TRANSMIT_PROBABILITY};
pub use params::{epsilon, LearnerParams};
pub use policy::select_action;
pub use qtable::QTable;
pub use reward::{
    fairness, hyperparams_for_n, reward_full, reward_full_from_throughputs, reward_partial, reward_partial_from_estimates,
    FullWeights, Hyperparams, PartialWeights, RewardWeights, PENALTY,
};
pub use state::{discretize, CongestionState, StateMode, IC_LEVELS, SC_LEVELS};
