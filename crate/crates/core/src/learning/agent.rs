use serde::{Deserialize, Serialize};

use super::{
    discretize, select_action, ActionStrategy, CongestionState, LearnerParams, QTable, RewardWeights, StateMode,
    StrategyKind,
};
use crate::des::{collision_probabilities, EpochStats, Topology};
use crate::rng::{stream, SimRng, Stream};

/// Transmit probability every agent starts from.
pub const INITIAL_TRANSMIT_PROBABILITY: f64 = 1.0;

/// MAC behavior of one node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    /// Pure ALOHA, transmit probability pinned at 1.
    Aloha,
    /// Classical Q-learning over self-collision levels.
    QSingle,
    /// Hysteretic Q-learning with the fully connected reward.
    HqlFull,
    /// Hysteretic Q-learning with the neighborhood reward.
    HqlPartial,
}

impl Policy {
    pub fn learns(self) -> bool {
        self != Policy::Aloha
    }

    pub fn state_mode(self) -> StateMode {
        match self {
            Policy::Aloha | Policy::QSingle => StateMode::Single,
            Policy::HqlFull | Policy::HqlPartial => StateMode::Multi,
        }
    }
}

/// What an agent saw and did at one epoch boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepOutcome {
    /// Transmit probability for the next epoch.
    pub p: f64,
    /// Reward for the epoch that just ended.
    pub reward: f64,
    pub state: CongestionState,
    pub action: Option<usize>,
    /// Whether a Q-table entry was updated.
    pub updated: bool,
}

/// One node's learner. Agents never read each other's state.
#[derive(Debug, Clone)]
pub struct Agent {
    node: usize,
    policy: Policy,
    strategy: ActionStrategy,
    qtable: QTable,
    params: LearnerParams,
    rng: SimRng,
    prev: Option<(usize, usize)>,
}

impl Agent {
    pub fn new(node: usize, policy: Policy, kind: StrategyKind, params: LearnerParams, seed: u64) -> Self {
        let strategy = ActionStrategy::new(kind, INITIAL_TRANSMIT_PROBABILITY);
        Self {
            qtable: QTable::new(policy.state_mode().state_count(), strategy.action_count()),
            rng: stream(seed, Stream::Agent, node),
            node,
            policy,
            strategy,
            params,
            prev: None,
        }
    }

    pub fn node(&self) -> usize {
        self.node
    }

    pub fn policy(&self) -> Policy {
        self.policy
    }

    pub fn transmit_probability(&self) -> f64 {
        self.strategy.current_p()
    }

    pub fn qtable(&self) -> &QTable {
        &self.qtable
    }

    pub fn qtable_mut(&mut self) -> &mut QTable {
        &mut self.qtable
    }

    /// Consume the statistics of completed epoch `epoch` and choose the
    /// transmit probability for the next one.
    ///
    /// The first call only selects an action; every later call first credits
    /// the previous (state, action) pair with this epoch's reward.
    pub fn step(&mut self, epoch: u64, stats: &EpochStats, weights: &RewardWeights, topology: &Topology) -> StepOutcome {
        let probs = collision_probabilities(stats, self.node);
        let state = discretize(probs.self_collision, probs.inter_collision, self.policy.state_mode());
        let reward = weights.reward(stats, self.node, topology);
        if !self.policy.learns() {
            return StepOutcome {
                p: self.strategy.current_p(),
                reward,
                state,
                action: None,
                updated: false,
            };
        }

        let next = state.index();
        let updated = if let Some((s, a)) = self.prev {
            let LearnerParams { alpha, beta, gamma, .. } = self.params;
            match self.policy {
                Policy::QSingle => self.qtable.q_update(s, a, reward, next, alpha, gamma),
                _ => self.qtable.hysteretic_update(s, a, reward, next, alpha, beta, gamma),
            };
            true
        } else {
            false
        };

        let action = select_action(self.qtable.row(next), self.params.epsilon(epoch), &mut self.rng);
        let p = self.strategy.apply_action(action);
        self.prev = Some((next, action));
        StepOutcome {
            p,
            reward,
            state,
            action: Some(action),
            updated,
        }
    }
}
