use serde::Serialize;

/// Dense state-by-action value table, zero initialized.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QTable {
    states: usize,
    actions: usize,
    values: Vec<f64>,
}

impl QTable {
    pub fn new(states: usize, actions: usize) -> Self {
        assert!(states > 0 && actions > 0, "empty Q-table");
        Self {
            states,
            actions,
            values: vec![0.0; states * actions],
        }
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn actions(&self) -> usize {
        self.actions
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, state: usize, action: usize) -> f64 {
        self.values[state * self.actions + action]
    }

    pub fn set(&mut self, state: usize, action: usize, value: f64) {
        self.values[state * self.actions + action] = value;
    }

    pub fn row(&self, state: usize) -> &[f64] {
        &self.values[state * self.actions..(state + 1) * self.actions]
    }

    pub fn max(&self, state: usize) -> f64 {
        self.row(state).iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Temporal-difference error `r + gamma max_a' Q(s', a') - Q(s, a)`.
    pub fn td_error(&self, state: usize, action: usize, reward: f64, next: usize, gamma: f64) -> f64 {
        reward + gamma * self.max(next) - self.get(state, action)
    }

    /// Classical Q-learning step. Returns the change applied to `Q(s, a)`.
    pub fn q_update(&mut self, state: usize, action: usize, reward: f64, next: usize, alpha: f64, gamma: f64) -> f64 {
        let change = alpha * self.td_error(state, action, reward, next, gamma);
        self.values[state * self.actions + action] += change;
        change
    }

    /// Hysteretic step: rate `alpha` on a non-negative TD error, `beta` on a
    /// negative one. Returns the change applied to `Q(s, a)`.
    #[allow(clippy::too_many_arguments)]
    pub fn hysteretic_update(
        &mut self,
        state: usize,
        action: usize,
        reward: f64,
        next: usize,
        alpha: f64,
        beta: f64,
        gamma: f64,
    ) -> f64 {
        let delta = self.td_error(state, action, reward, next, gamma);
        let change = if delta >= 0.0 { alpha * delta } else { beta * delta };
        self.values[state * self.actions + action] += change;
        change
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(k, &v)| (k / self.actions, k % self.actions, v))
    }
}
