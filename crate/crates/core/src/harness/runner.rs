//! Epoch driver: couples the channel engine with one agent per node.

use serde::Serialize;

use super::ScenarioConfig;
use crate::des::{Engine, EpochStats};
use crate::learning::Agent;
use crate::par::{self, Execution};
use crate::rng::replicate_seed;
use crate::Result;

/// Everything observed during one epoch. Per-node vectors are indexed by node.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpochRecord {
    pub epoch: u64,
    /// Transmit probability in force during the epoch.
    pub p: Vec<f64>,
    /// Offered load.
    pub g: Vec<f64>,
    /// Effective load after gating.
    pub gstar: Vec<f64>,
    /// Node throughput.
    pub s: Vec<f64>,
    /// Network throughput.
    pub total: f64,
    pub p_sc: Vec<f64>,
    pub p_ic: Vec<f64>,
    /// Reward credited to each node for this epoch.
    pub reward: Vec<f64>,
    /// `max_i s_i - min_i s_i`.
    pub spread: f64,
}

impl EpochRecord {
    pub fn node_count(&self) -> usize {
        self.p.len()
    }
}

/// A running scenario. Iterating yields one record per epoch until the
/// configured number of epochs is reached.
#[derive(Debug, Clone)]
pub struct Simulation {
    config: ScenarioConfig,
    engine: Engine,
    agents: Vec<Agent>,
    probs: Vec<f64>,
}

impl Simulation {
    pub fn new(config: &ScenarioConfig, seed: u64) -> Result<Self> {
        let engine = Engine::new(config.topology.clone(), config.transmitter, config.epoch_duration, seed)?;
        let agents: Vec<Agent> = config
            .policies
            .iter()
            .enumerate()
            .map(|(i, &policy)| Agent::new(i, policy, config.strategy, config.params, seed))
            .collect();
        let probs = agents.iter().map(Agent::transmit_probability).collect();
        Ok(Self {
            config: config.clone(),
            engine,
            agents,
            probs,
        })
    }

    pub fn epoch(&self) -> u64 {
        self.engine.epoch()
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn is_finished(&self) -> bool {
        self.epoch() >= self.config.epochs
    }

    /// Run one epoch regardless of the configured horizon.
    pub fn step(&mut self) -> Result<EpochRecord> {
        let epoch = self.epoch();
        let g = self.config.loads_at(epoch);
        let stats = self.engine.run_epoch(&g, &self.probs)?;
        let p = std::mem::take(&mut self.probs);
        let mut reward = Vec::with_capacity(p.len());
        for agent in &mut self.agents {
            let out = agent.step(epoch, &stats, &self.config.weights, &self.config.topology);
            reward.push(out.reward);
            self.probs.push(out.p);
        }
        Ok(record(epoch, p, g, reward, &stats))
    }
}

impl Iterator for Simulation {
    type Item = Result<EpochRecord>;

    fn next(&mut self) -> Option<Self::Item> {
        (!self.is_finished()).then(|| self.step())
    }
}

fn record(epoch: u64, p: Vec<f64>, g: Vec<f64>, reward: Vec<f64>, stats: &EpochStats) -> EpochRecord {
    let n = stats.node_count();
    let s = stats.throughputs();
    let (p_sc, p_ic) = (0..n)
        .map(|i| {
            let c = stats.collision_probabilities(i);
            (c.self_collision, c.inter_collision)
        })
        .unzip();
    let max = s.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = s.iter().copied().fold(f64::INFINITY, f64::min);
    EpochRecord {
        epoch,
        p,
        g,
        gstar: (0..n).map(|i| stats.effective_load(i)).collect(),
        total: stats.total_throughput(),
        spread: max - min,
        s,
        p_sc,
        p_ic,
        reward,
    }
}

/// Run the scenario to completion with its own seed.
pub fn run_scenario(config: &ScenarioConfig) -> Result<Vec<EpochRecord>> {
    run_with_seed(config, config.seed)
}

pub fn run_with_seed(config: &ScenarioConfig, seed: u64) -> Result<Vec<EpochRecord>> {
    Simulation::new(config, seed)?.collect()
}

/// Run every configured replicate; replicate 0 uses the scenario seed.
pub fn run_replicates(config: &ScenarioConfig, exec: Execution) -> Result<Vec<Vec<EpochRecord>>> {
    let seeds = (0..config.replicates).map(|r| replicate_seed(config.seed, r)).collect();
    par::map(exec, seeds, |seed| run_with_seed(config, seed))
        .into_iter()
        .collect()
}

/// Per-node mean of `field` over the last `window` records.
pub fn tail_mean(records: &[EpochRecord], window: usize, field: impl Fn(&EpochRecord) -> &[f64]) -> Vec<f64> {
    let Some(last) = records.last() else {
        return Vec::new();
    };
    let tail = &records[records.len().saturating_sub(window)..];
    (0..last.node_count())
        .map(|i| tail.iter().map(|r| field(r)[i]).sum::<f64>() / tail.len() as f64)
        .collect()
}

/// Network throughput series.
pub fn total_series(records: &[EpochRecord]) -> Vec<f64> {
    records.iter().map(|r| r.total).collect()
}
