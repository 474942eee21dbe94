use serde::Serialize;

use crate::des::{EpochStats, Topology};
use crate::{Error, Result};

/// Replacement reward when the relevant throughput collapses to zero.
pub const PENALTY: f64 = -0.8;

/// Weights for a fully connected network, shared by all agents.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FullWeights {
    /// Network throughput weight.
    pub rho: f64,
    /// Fairness weight.
    pub sigma: f64,
    /// Per-node priority weights.
    pub mu: Vec<f64>,
}

/// Per-node weights for a partially connected network.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartialWeights {
    pub rho: Vec<f64>,
    pub sigma: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum RewardWeights {
    Full(FullWeights),
    Partial(PartialWeights),
}

impl RewardWeights {
    /// Reward of node `i` for one epoch.
    pub fn reward(&self, stats: &EpochStats, node: usize, topology: &Topology) -> f64 {
        match self {
            RewardWeights::Full(w) => reward_full(stats, w, node),
            RewardWeights::Partial(w) => reward_partial(stats, w, node, topology),
        }
    }
}

/// `-sum_j |s_i - s_j|` over the peers `others`.
pub fn fairness(own: f64, others: impl IntoIterator<Item = f64>) -> f64 {
    -others.into_iter().map(|s| (own - s).abs()).sum::<f64>()
}

/// Fully connected reward from true node throughputs:
/// `rho S + sum_j mu_j s_j + sigma f_i`, or the penalty when `S = 0`.
pub fn reward_full_from_throughputs(throughputs: &[f64], weights: &FullWeights, node: usize) -> f64 {
    let total: f64 = throughputs.iter().sum();
    if total == 0.0 {
        return PENALTY;
    }
    let priority: f64 = weights.mu.iter().zip(throughputs).map(|(m, s)| m * s).sum();
    let own = throughputs[node];
    let others = throughputs
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != node)
        .map(|(_, &s)| s);
    weights.rho * total + priority + weights.sigma * fairness(own, others)
}

pub fn reward_full(stats: &EpochStats, weights: &FullWeights, node: usize) -> f64 {
    reward_full_from_throughputs(&stats.throughputs(), weights, node)
}

/// Partially connected reward from the node's own throughput and its
/// estimates of its neighbors' throughputs:
/// `rho_i (sum_j s_j^i + s_i) + sigma_i f_i`, or the penalty when `s_i = 0`.
pub fn reward_partial_from_estimates(own: f64, estimates: &[f64], rho: f64, sigma: f64) -> f64 {
    if own == 0.0 {
        return PENALTY;
    }
    rho * (estimates.iter().sum::<f64>() + own) + sigma * fairness(own, estimates.iter().copied())
}

pub fn reward_partial(stats: &EpochStats, weights: &PartialWeights, node: usize, topology: &Topology) -> f64 {
    let estimates: Vec<f64> = topology
        .neighbors(node)
        .iter()
        .map(|&j| stats.observed_throughput(node, j))
        .collect();
    reward_partial_from_estimates(stats.throughput(node), &estimates, weights.rho[node], weights.sigma[node])
}

/// Size-dependent weights for a fully connected network.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Hyperparams {
    pub rho: f64,
    pub sigma: f64,
    /// Set when `rho <= 0` (seven or more nodes); learning is not expected
    /// to converge there.
    pub degraded: bool,
}

/// `rho = 0.33 - 0.05 N`, `sigma = 1 / (N - 1)`.
pub fn hyperparams_for_n(node_count: usize) -> Result<Hyperparams> {
    if node_count < 2 {
        return Err(Error::Topology(format!(
            "size-dependent weights need at least two nodes, got {node_count}"
        )));
    }
    let n = node_count as f64;
    // round away float noise such as 0.33 - 0.1 = 0.23000000000000004
    let rho = ((0.33 - 0.05 * n) * 1e12).round() / 1e12;
    Ok(Hyperparams {
        rho,
        sigma: 1.0 / (n - 1.0),
        degraded: rho <= 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::des::NodeCounters;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn full(rho: f64, sigma: f64, mu: Vec<f64>) -> FullWeights {
        FullWeights { rho, sigma, mu }
    }

    #[test]
    fn full_examples() {
        assert_abs_diff_eq!(reward_full_from_throughputs(&[0.4], &full(1.0, 0.0, vec![0.0]), 0), 0.4);
        assert_abs_diff_eq!(
            reward_full_from_throughputs(&[0.2, 0.2], &full(1.0, 1.0, vec![0.0, 0.0]), 0),
            0.4,
            epsilon = 1e-15
        );
        // 0.23 * 0.4 - |0.3 - 0.1|
        assert_abs_diff_eq!(
            reward_full_from_throughputs(&[0.3, 0.1], &full(0.23, 1.0, vec![0.0, 0.0]), 0),
            -0.108,
            epsilon = 1e-12
        );
        assert_eq!(reward_full_from_throughputs(&[0.0, 0.0], &full(0.23, 1.0, vec![5.0, 5.0]), 1), PENALTY);
    }

    #[test]
    fn full_reward_from_stats() {
        let mut stats = EpochStats::new(2, 1000.0);
        stats.nodes[0] = NodeCounters {
            succeeded: 300,
            ..Default::default()
        };
        stats.nodes[1] = NodeCounters {
            succeeded: 100,
            ..Default::default()
        };
        assert_abs_diff_eq!(reward_full(&stats, &full(0.23, 1.0, vec![0.0, 0.0]), 1), -0.108, epsilon = 1e-12);
    }

    #[test]
    fn partial_examples() {
        assert_abs_diff_eq!(reward_partial_from_estimates(0.3, &[], 1.0, 1.0), 0.3);
        assert_abs_diff_eq!(reward_partial_from_estimates(0.1, &[0.1, 0.1], 1.0, 1.0), 0.3, epsilon = 1e-15);
        assert_eq!(reward_partial_from_estimates(0.0, &[0.2], 1.0, 1.0), PENALTY);
    }

    #[test]
    fn partial_reward_uses_neighbor_observations() {
        let t = Topology::chain(3).unwrap();
        let mut stats = EpochStats::new(3, 1000.0);
        for c in &mut stats.nodes {
            c.succeeded = 100;
        }
        stats.observed_nonoverlap[1][0] = 100;
        stats.observed_nonoverlap[1][2] = 100;
        // a non-neighbor entry must be ignored
        stats.observed_nonoverlap[0][2] = 900;
        let w = PartialWeights {
            rho: vec![1.0; 3],
            sigma: vec![1.0; 3],
        };
        assert_abs_diff_eq!(reward_partial(&stats, &w, 1, &t), 0.3, epsilon = 1e-12);
        assert_abs_diff_eq!(reward_partial(&stats, &w, 0, &t), 0.1 - 0.1, epsilon = 1e-12);
    }

    #[test]
    fn size_dependent_weights() {
        let h = hyperparams_for_n(2).unwrap();
        assert_eq!((h.rho, h.sigma, h.degraded), (0.23, 1.0, false));
        let h = hyperparams_for_n(3).unwrap();
        assert_eq!((h.rho, h.sigma), (0.18, 0.5));
        let h = hyperparams_for_n(6).unwrap();
        assert_eq!((h.rho, h.sigma), (0.03, 0.2));
        assert!(hyperparams_for_n(7).unwrap().degraded);
        assert!(hyperparams_for_n(1).is_err());
    }

    fn throughputs() -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(0.001f64..0.5, 2..6)
    }

    proptest! {
        #[test]
        fn fairness_sign(s in throughputs(), i in 0usize..6) {
            let i = i % s.len();
            let others: Vec<f64> = s.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect();
            let f = fairness(s[i], others.iter().copied());
            prop_assert!(f <= 0.0);
            prop_assert_eq!(f == 0.0, others.iter().all(|&o| o == s[i]));
        }

        #[test]
        fn linear_in_each_weight(
            s in throughputs(), i in 0usize..6,
            rho in -1.0f64..1.0, sigma in -1.0f64..1.0, k in -3.0f64..3.0,
        ) {
            let i = i % s.len();
            let mu: Vec<f64> = (0..s.len()).map(|j| 0.1 * j as f64).collect();
            let base = full(rho, sigma, mu.clone());
            let r0 = reward_full_from_throughputs(&s, &base, i);
            let zero = reward_full_from_throughputs(&s, &full(0.0, 0.0, vec![0.0; s.len()]), i);
            prop_assert_eq!(zero, 0.0);
            // scaling all weights scales the reward
            let scaled = full(k * rho, k * sigma, mu.iter().map(|m| k * m).collect());
            prop_assert!((reward_full_from_throughputs(&s, &scaled, i) - k * r0).abs() < 1e-9);
            // additivity in rho
            let plus = full(rho + 1.0, sigma, mu.clone());
            let total: f64 = s.iter().sum();
            prop_assert!((reward_full_from_throughputs(&s, &plus, i) - r0 - total).abs() < 1e-9);
        }

        #[test]
        fn doubling_throughputs(s in throughputs(), i in 0usize..6) {
            let i = i % s.len();
            let doubled: Vec<f64> = s.iter().map(|v| 2.0 * v).collect();
            let rho_only = full(0.7, 0.0, vec![0.0; s.len()]);
            let sigma_only = full(0.0, 1.0, vec![0.0; s.len()]);
            prop_assert!((reward_full_from_throughputs(&doubled, &rho_only, i)
                - 2.0 * reward_full_from_throughputs(&s, &rho_only, i)).abs() < 1e-12);
            prop_assert!((reward_full_from_throughputs(&doubled, &sigma_only, i).abs()
                - 2.0 * reward_full_from_throughputs(&s, &sigma_only, i).abs()).abs() < 1e-12);
        }

        #[test]
        fn priority_gradient(
            s in proptest::collection::vec(0.05f64..0.5, 3),
            mu1 in 0.0f64..2.0, bump in 0.1f64..1.0, i in 0usize..3,
        ) {
            // finite differences away from the fairness kinks
            let h = 1e-7;
            let grad = |w: &FullWeights, j: usize| {
                let mut up = s.clone();
                up[j] += h;
                let mut down = s.clone();
                down[j] -= h;
                (reward_full_from_throughputs(&up, w, i) - reward_full_from_throughputs(&down, w, i)) / (2.0 * h)
            };
            prop_assume!(s[0] != s[1] && s[1] != s[2] && s[0] != s[2]);
            prop_assume!((s[0] - s[1]).abs() > 1e-5 && (s[1] - s[2]).abs() > 1e-5 && (s[0] - s[2]).abs() > 1e-5);
            let lo = full(0.2, 0.5, vec![mu1, 0.3, 0.1]);
            let hi = full(0.2, 0.5, vec![mu1 + bump, 0.3, 0.1]);
            prop_assert!((grad(&hi, 0) - grad(&lo, 0) - bump).abs() < 1e-5);
            prop_assert!((grad(&hi, 1) - grad(&lo, 1)).abs() < 1e-5);
            prop_assert!((grad(&hi, 2) - grad(&lo, 2)).abs() < 1e-5);
        }
    }
}
