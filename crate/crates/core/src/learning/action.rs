use serde::{Deserialize, Serialize};

/// Transmit probabilities available to the fixed strategy.
pub const FIXED_PROBABILITIES: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

/// Step of the incremental strategy.
pub const INCREMENTAL_STEP: f64 = 0.1;

const INCREMENTAL_DELTAS: [f64; 3] = [-INCREMENTAL_STEP, 0.0, INCREMENTAL_STEP];

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyKind {
    /// Each action sets the transmit probability to a member of the fixed set.
    #[default]
    Fixed,
    /// Each action moves the transmit probability by -0.1, 0 or +0.1.
    Incremental,
}

/// How action indices map onto a node's transmit probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ActionStrategy {
    kind: StrategyKind,
    current_p: f64,
}

impl ActionStrategy {
    pub fn new(kind: StrategyKind, initial_p: f64) -> Self {
        Self {
            kind,
            current_p: initial_p.clamp(0.0, 1.0),
        }
    }

    pub fn kind(&self) -> StrategyKind {
        self.kind
    }

    pub fn current_p(&self) -> f64 {
        self.current_p
    }

    pub fn action_count(&self) -> usize {
        match self.kind {
            StrategyKind::Fixed => FIXED_PROBABILITIES.len(),
            StrategyKind::Incremental => INCREMENTAL_DELTAS.len(),
        }
    }

    /// Apply action `index` and return the new transmit probability.
    pub fn apply_action(&mut self, index: usize) -> f64 {
        self.current_p = match self.kind {
            StrategyKind::Fixed => FIXED_PROBABILITIES[index],
            StrategyKind::Incremental => {
                // rounding keeps repeated steps on the 0.1 lattice
                let p = self.current_p + INCREMENTAL_DELTAS[index];
                ((p * 1e9).round() / 1e9).clamp(0.0, 1.0)
            }
        };
        self.current_p
    }
}
