use serde::{Deserialize, Serialize};

use crate::Violation;

/// Learning rates, discount and exploration schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LearnerParams {
    /// Learning rate; the increase rate for hysteretic agents.
    pub alpha: f64,
    /// Decrease rate for hysteretic agents, `0 < beta < alpha`.
    pub beta: f64,
    pub gamma: f64,
    /// Initial exploration probability.
    pub eps0: f64,
    /// Exploration decay constant in epochs.
    pub eps_tau: f64,
}

impl Default for LearnerParams {
    fn default() -> Self {
        Self {
            alpha: 0.1,
            beta: 0.01,
            gamma: 0.95,
            eps0: 0.5,
            eps_tau: 200.0,
        }
    }
}

impl LearnerParams {
    /// Exploration probability after `epoch` completed epochs:
    /// `eps0 * exp(-epoch / eps_tau)`.
    pub fn epsilon(&self, epoch: u64) -> f64 {
        self.eps0 * (-(epoch as f64) / self.eps_tau).exp()
    }

    pub fn violations(&self, prefix: &str) -> Vec<Violation> {
        let mut v = Vec::new();
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            v.push(Violation::new(format!("{prefix}.alpha"), "must lie in (0, 1]"));
        }
        if !(self.beta > 0.0 && self.beta < self.alpha) {
            v.push(Violation::new(format!("{prefix}.beta"), "must satisfy 0 < beta < alpha"));
        }
        if !(self.gamma >= 0.0 && self.gamma < 1.0) {
            v.push(Violation::new(format!("{prefix}.gamma"), "must lie in [0, 1)"));
        }
        if !(0.0..=1.0).contains(&self.eps0) {
            v.push(Violation::new(format!("{prefix}.eps0"), "must lie in [0, 1]"));
        }
        if !(self.eps_tau > 0.0) {
            v.push(Violation::new(format!("{prefix}.eps_tau"), "must be positive"));
        }
        v
    }
}

/// Default exploration schedule `0.5 exp(-epoch / 200)`.
pub fn epsilon(epoch: u64) -> f64 {
    LearnerParams::default().epsilon(epoch)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn schedule() {
        assert_eq!(epsilon(0), 0.5);
        assert_abs_diff_eq!(epsilon(200), 0.5 / std::f64::consts::E, epsilon = 1e-12);
        assert_abs_diff_eq!(epsilon(200), 0.18394, epsilon = 1e-5);
        assert!(epsilon(1_000_000) < 1e-9);
        assert!(epsilon(1_000_000) >= 0.0);
        assert!((0..2000).all(|k| epsilon(k + 1) < epsilon(k)));
    }

    #[test]
    fn defaults_are_valid() {
        assert!(LearnerParams::default().violations("params").is_empty());
        let bad = LearnerParams {
            beta: 0.2,
            gamma: 1.0,
            ..Default::default()
        };
        let v = bad.violations("params");
        assert_eq!(v.len(), 2);
        assert_eq!(v[0].field, "params.beta");
    }
}
