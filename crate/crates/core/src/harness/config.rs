//! Scenario configuration.
//!
//! Configs are JSON documents. Node numbers are 1-based everywhere a user
//! sees them (edges, error messages, CSV columns) and 0-based in code.
//!
//! ```json
//! {
//!   "topology": { "kind": "full", "nodes": 2 },
//!   "loads": [2.0, [{ "start": 0, "g": 2.4 }, { "start": 1000, "g": 4.8 }]],
//!   "policy": "hql_full",
//!   "strategy": "fixed",
//!   "weights": "auto_n",
//!   "params": { "alpha": 0.1, "beta": 0.01, "gamma": 0.95, "eps0": 0.5, "eps_tau": 200 },
//!   "epochs": 2000,
//!   "epoch_duration": 1000,
//!   "seed": 1,
//!   "replicates": 5,
//!   "transmitter": "half_duplex"
//! }
//! ```

use serde::Deserialize;

use crate::des::{Topology, TransmitterModel, DEFAULT_EPOCH_DURATION};
use crate::learning::{
    hyperparams_for_n, FullWeights, LearnerParams, PartialWeights, Policy, RewardWeights, StrategyKind,
};
use crate::{Error, Result, Violation};

/// Piecewise-constant offered load of one node, in epochs.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadSchedule {
    steps: Vec<(u64, f64)>,
}

impl LoadSchedule {
    pub fn constant(g: f64) -> Self {
        Self { steps: vec![(0, g)] }
    }

    /// Steps of `(start epoch, load)`; must start at epoch 0 and increase.
    pub fn new(steps: Vec<(u64, f64)>) -> Self {
        Self { steps }
    }

    pub fn steps(&self) -> &[(u64, f64)] {
        &self.steps
    }

    pub fn load_at(&self, epoch: u64) -> f64 {
        self.steps
            .iter()
            .take_while(|(start, _)| *start <= epoch)
            .last()
            .map_or(0.0, |&(_, g)| g)
    }

    /// Epochs at which the load changes, excluding epoch 0.
    pub fn change_points(&self) -> impl Iterator<Item = u64> + '_ {
        self.steps.iter().skip(1).map(|&(start, _)| start)
    }
}

/// Validated, fully materialized experiment description.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub topology: Topology,
    pub loads: Vec<LoadSchedule>,
    pub policies: Vec<Policy>,
    pub strategy: StrategyKind,
    pub weights: RewardWeights,
    pub params: LearnerParams,
    pub epochs: u64,
    pub epoch_duration: f64,
    pub seed: u64,
    pub replicates: usize,
    pub transmitter: TransmitterModel,
    /// Non-fatal notes produced while materializing the config.
    pub warnings: Vec<String>,
}

impl ScenarioConfig {
    pub fn node_count(&self) -> usize {
        self.topology.node_count()
    }

    /// Loads in effect during `epoch`.
    pub fn loads_at(&self, epoch: u64) -> Vec<f64> {
        self.loads.iter().map(|s| s.load_at(epoch)).collect()
    }

    /// Replace every schedule by a constant load.
    pub fn with_constant_loads(&self, loads: &[f64]) -> Result<Self> {
        if loads.len() != self.node_count() {
            return Err(Error::NodeCountMismatch {
                expected: self.node_count(),
                actual: loads.len(),
            });
        }
        if let Some(&g) = loads.iter().find(|g| !(**g >= 0.0)) {
            return Err(Error::NegativeLoad(g));
        }
        Ok(Self {
            loads: loads.iter().map(|&g| LoadSchedule::constant(g)).collect(),
            ..self.clone()
        })
    }

    /// Same scenario with every node running pure ALOHA.
    pub fn as_aloha(&self) -> Self {
        Self {
            policies: vec![Policy::Aloha; self.node_count()],
            ..self.clone()
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    topology: RawTopology,
    loads: PerNode<RawSchedule>,
    policy: PerNode<Policy>,
    #[serde(default)]
    strategy: StrategyKind,
    #[serde(default)]
    weights: RawWeights,
    #[serde(default)]
    params: LearnerParams,
    #[serde(default = "default_epochs")]
    epochs: u64,
    #[serde(default = "default_epoch_duration")]
    epoch_duration: f64,
    #[serde(default)]
    seed: u64,
    #[serde(default = "default_replicates")]
    replicates: usize,
    #[serde(default)]
    transmitter: TransmitterModel,
}

fn default_epochs() -> u64 {
    2000
}

fn default_epoch_duration() -> f64 {
    DEFAULT_EPOCH_DURATION
}

fn default_replicates() -> usize {
    1
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawTopology {
    Full { nodes: usize },
    Partial { nodes: usize, edges: Vec<[usize; 2]> },
}

/// Either one value for every node or one value per node.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum PerNode<T> {
    Each(Vec<T>),
    All(T),
}

impl<T: Clone> PerNode<T> {
    fn expand(self, n: usize, field: &str, out: &mut Vec<Violation>) -> Option<Vec<T>> {
        match self {
            PerNode::All(v) => Some(vec![v; n]),
            PerNode::Each(v) if v.len() == n => Some(v),
            PerNode::Each(v) => {
                out.push(Violation::new(field, format!("expected {n} per-node entries, got {}", v.len())));
                None
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum RawSchedule {
    Constant(f64),
    Steps(Vec<RawStep>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStep {
    start: u64,
    g: f64,
}

#[derive(Debug, Default, Deserialize)]
#[serde(untagged)]
enum RawWeights {
    #[default]
    #[serde(skip)]
    Default,
    Preset(WeightsPreset),
    Explicit(ExplicitWeights),
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
enum WeightsPreset {
    AutoN,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
enum ExplicitWeights {
    Full {
        rho: f64,
        sigma: f64,
        #[serde(default)]
        mu: Vec<f64>,
    },
    Partial {
        rho: PerNode<f64>,
        sigma: PerNode<f64>,
    },
}

/// Parse and validate a JSON scenario config.
///
/// Every violation found is reported at once in [`Error::Invalid`].
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    materialize(raw)
}

fn materialize(raw: RawConfig) -> Result<ScenarioConfig> {
    let mut v = Vec::new();

    let topology = match &raw.topology {
        RawTopology::Full { nodes } => Topology::full(*nodes),
        RawTopology::Partial { nodes, edges } => {
            if let Some(e) = edges.iter().find(|e| e[0] == 0 || e[1] == 0) {
                Err(Error::Topology(format!(
                    "edge [{}, {}]: node numbers start at 1",
                    e[0], e[1]
                )))
            } else {
                let edges: Vec<_> = edges.iter().map(|e| (e[0] - 1, e[1] - 1)).collect();
                Topology::partial(*nodes, &edges)
            }
        }
    };
    let topology = match topology {
        Ok(t) => t,
        Err(e) => return Err(Error::Invalid(vec![Violation::new("topology", e.to_string())])),
    };
    let n = topology.node_count();

    let loads = raw
        .loads
        .expand(n, "loads", &mut v)
        .map(|raw| {
            raw.into_iter()
                .enumerate()
                .map(|(i, s)| schedule(i, s, &mut v))
                .collect::<Vec<_>>()
        })
        .unwrap_or_default();

    let policies = raw.policy.expand(n, "policy", &mut v).unwrap_or_default();
    let partial_policy = policies.contains(&Policy::HqlPartial);
    let full_policy = policies.iter().any(|p| matches!(p, Policy::HqlFull | Policy::QSingle));
    for (i, p) in policies.iter().enumerate() {
        if *p == Policy::HqlPartial && topology.is_fully_connected() {
            v.push(Violation::new(
                format!("policy[{}]", i + 1),
                format!("node {}: hql_partial requires a partial topology with explicit edges", i + 1),
            ));
        }
        if matches!(p, Policy::HqlFull | Policy::QSingle) && !topology.is_fully_connected() {
            v.push(Violation::new(
                format!("policy[{}]", i + 1),
                format!("node {}: {:?} requires a fully connected topology", i + 1, p),
            ));
        }
    }

    let mut warnings = Vec::new();
    let weights = match raw.weights {
        RawWeights::Default | RawWeights::Preset(WeightsPreset::AutoN) => auto_weights(&topology, &mut warnings),
        RawWeights::Explicit(ExplicitWeights::Full { rho, sigma, mu }) => {
            if partial_policy {
                v.push(Violation::new("weights.mode", "full weights cannot drive hql_partial agents"));
            }
            let mu = if mu.is_empty() { vec![0.0; n] } else { mu };
            if mu.len() != n {
                v.push(Violation::new(
                    "weights.mu",
                    format!("expected {n} per-node entries, got {}", mu.len()),
                ));
            }
            RewardWeights::Full(FullWeights { rho, sigma, mu })
        }
        RawWeights::Explicit(ExplicitWeights::Partial { rho, sigma }) => {
            if full_policy {
                v.push(Violation::new(
                    "weights.mode",
                    "partial weights cannot drive hql_full or q_single agents",
                ));
            }
            let rho = rho.expand(n, "weights.rho", &mut v).unwrap_or_else(|| vec![0.0; n]);
            let sigma = sigma.expand(n, "weights.sigma", &mut v).unwrap_or_else(|| vec![0.0; n]);
            RewardWeights::Partial(PartialWeights { rho, sigma })
        }
    };

    v.extend(raw.params.violations("params"));
    if raw.epochs == 0 {
        v.push(Violation::new("epochs", "must be at least 1"));
    }
    if !(raw.epoch_duration > 0.0) || !raw.epoch_duration.is_finite() {
        v.push(Violation::new("epoch_duration", "must be a positive number of packet durations"));
    }
    if raw.replicates == 0 {
        v.push(Violation::new("replicates", "must be at least 1"));
    }

    if !v.is_empty() {
        return Err(Error::Invalid(v));
    }
    Ok(ScenarioConfig {
        topology,
        loads,
        policies,
        strategy: raw.strategy,
        weights,
        params: raw.params,
        epochs: raw.epochs,
        epoch_duration: raw.epoch_duration,
        seed: raw.seed,
        replicates: raw.replicates,
        transmitter: raw.transmitter,
        warnings,
    })
}

fn schedule(node: usize, raw: RawSchedule, v: &mut Vec<Violation>) -> LoadSchedule {
    let field = format!("loads[{}]", node + 1);
    let steps: Vec<(u64, f64)> = match raw {
        RawSchedule::Constant(g) => vec![(0, g)],
        RawSchedule::Steps(s) => s.into_iter().map(|s| (s.start, s.g)).collect(),
    };
    if steps.first().map(|s| s.0) != Some(0) {
        v.push(Violation::new(
            &field,
            format!("node {}: load schedule has no entry starting at epoch 0", node + 1),
        ));
    }
    if steps.windows(2).any(|w| w[1].0 <= w[0].0) {
        v.push(Violation::new(
            &field,
            format!("node {}: schedule start epochs must strictly increase", node + 1),
        ));
    }
    for &(start, g) in &steps {
        if !(g >= 0.0) || !g.is_finite() {
            v.push(Violation::new(
                &field,
                format!("node {}: load {g} at epoch {start} is negative or not finite", node + 1),
            ));
        }
    }
    LoadSchedule::new(steps)
}

/// Size-dependent weights. A lone node gets throughput-only weights; in a
/// partial topology each node sizes its weights by its own neighborhood.
fn auto_weights(topology: &Topology, warnings: &mut Vec<String>) -> RewardWeights {
    let n = topology.node_count();
    if topology.is_fully_connected() {
        if n == 1 {
            return RewardWeights::Full(FullWeights {
                rho: 1.0,
                sigma: 0.0,
                mu: vec![0.0],
            });
        }
        let h = hyperparams_for_n(n).expect("n >= 2");
        if h.degraded {
            warnings.push(format!(
                "rho = {} for {n} nodes is not positive; learning is not expected to converge",
                h.rho
            ));
        }
        return RewardWeights::Full(FullWeights {
            rho: h.rho,
            sigma: h.sigma,
            mu: vec![0.0; n],
        });
    }
    let (mut rho, mut sigma) = (Vec::with_capacity(n), Vec::with_capacity(n));
    for i in 0..n {
        match topology.degree(i) {
            0 => {
                rho.push(1.0);
                sigma.push(0.0);
            }
            d => {
                let h = hyperparams_for_n(d + 1).expect("d + 1 >= 2");
                if h.degraded {
                    warnings.push(format!("node {}: rho = {} for degree {d} is not positive", i + 1, h.rho));
                }
                rho.push(h.rho);
                sigma.push(h.sigma);
            }
        }
    }
    RewardWeights::Partial(PartialWeights { rho, sigma })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn violations(text: &str) -> Vec<Violation> {
        match parse_config(text) {
            Err(Error::Invalid(v)) => v,
            other => panic!("expected violations, got {other:?}"),
        }
    }

    #[test]
    fn minimal_single_node_gets_defaults() {
        let c = parse_config(r#"{"topology": {"kind": "full", "nodes": 1}, "loads": [2.4], "policy": "q_single"}"#)
            .unwrap();
        assert_eq!(c.params.alpha, 0.1);
        assert_eq!(c.params.gamma, 0.95);
        assert_eq!(c.params.eps0, 0.5);
        assert_eq!(c.params.eps_tau, 200.0);
        assert_eq!(c.epoch_duration, 1000.0);
        assert_eq!(c.strategy, StrategyKind::Fixed);
        assert_eq!(c.transmitter, TransmitterModel::HalfDuplex);
        assert_eq!(
            c.weights,
            RewardWeights::Full(FullWeights {
                rho: 1.0,
                sigma: 0.0,
                mu: vec![0.0]
            })
        );
    }

    #[test]
    fn negative_load_names_the_node() {
        let v = violations(r#"{"topology": {"kind": "full", "nodes": 2}, "loads": [0.5, -1], "policy": "aloha"}"#);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].field, "loads[2]");
        assert!(v[0].message.contains("node 2"));
        assert!(v[0].message.contains("negative"));
    }

    #[test]
    fn auto_weights_for_three_nodes() {
        let c = parse_config(
            r#"{"topology": {"kind": "full", "nodes": 3}, "loads": 0.8, "policy": "hql_full", "weights": "auto_n"}"#,
        )
        .unwrap();
        assert_eq!(
            c.weights,
            RewardWeights::Full(FullWeights {
                rho: 0.18,
                sigma: 0.5,
                mu: vec![0.0; 3]
            })
        );
    }

    #[test]
    fn auto_weights_for_a_chain_follow_degree() {
        let c = parse_config(
            r#"{"topology": {"kind": "partial", "nodes": 3, "edges": [[1, 2], [2, 3]]},
                "loads": 1.0, "policy": "hql_partial"}"#,
        )
        .unwrap();
        assert_eq!(
            c.weights,
            RewardWeights::Partial(PartialWeights {
                rho: vec![0.23, 0.18, 0.23],
                sigma: vec![1.0, 0.5, 1.0]
            })
        );
    }

    #[test]
    fn large_network_warns() {
        let c = parse_config(r#"{"topology": {"kind": "full", "nodes": 8}, "loads": 0.5, "policy": "hql_full"}"#)
            .unwrap();
        assert_eq!(c.warnings.len(), 1);
    }

    #[test]
    fn distinct_messages_for_each_problem() {
        let v = violations(
            r#"{"topology": {"kind": "full", "nodes": 2},
                "loads": [[{"start": 5, "g": 1.0}], -2],
                "policy": ["hql_partial", "hql_full"],
                "weights": {"mode": "partial", "rho": [1, 1], "sigma": [1, 1]},
                "params": {"beta": 0.5}}"#,
        );
        let fields: Vec<_> = v.iter().map(|v| v.field.as_str()).collect();
        assert!(fields.contains(&"loads[1]"), "{fields:?}");
        assert!(fields.contains(&"loads[2]"));
        assert!(fields.contains(&"policy[1]"));
        assert!(fields.contains(&"weights.mode"));
        assert!(fields.contains(&"params.beta"));
        let messages: std::collections::HashSet<_> = v.iter().map(|v| v.message.clone()).collect();
        assert_eq!(messages.len(), v.len());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let e = parse_config(r#"{"topology": {"kind": "full", "nodes": 1}, "loads": 1, "policy": "aloha", "colour": 1}"#)
            .unwrap_err();
        assert!(matches!(e, Error::Parse(ref m) if m.contains("colour")), "{e}");
        let e = parse_config(
            r#"{"topology": {"kind": "full", "nodes": 1}, "loads": 1, "policy": "aloha", "params": {"lr": 1}}"#,
        )
        .unwrap_err();
        assert!(matches!(e, Error::Parse(_)));
    }

    #[test]
    fn wrong_lengths_and_bad_edges() {
        let v = violations(r#"{"topology": {"kind": "full", "nodes": 3}, "loads": [1, 1], "policy": "aloha"}"#);
        assert_eq!(v[0].field, "loads");
        let v = violations(
            r#"{"topology": {"kind": "partial", "nodes": 3, "edges": [[0, 1]]}, "loads": 1, "policy": "aloha"}"#,
        );
        assert_eq!(v[0].field, "topology");
    }

    #[test]
    fn schedules() {
        let c = parse_config(
            r#"{"topology": {"kind": "full", "nodes": 1},
                "loads": [[{"start": 0, "g": 2.4}, {"start": 1000, "g": 4.8}]], "policy": "q_single"}"#,
        )
        .unwrap();
        assert_eq!(c.loads_at(0), vec![2.4]);
        assert_eq!(c.loads_at(999), vec![2.4]);
        assert_eq!(c.loads_at(1000), vec![4.8]);
        assert_eq!(c.loads[0].change_points().collect::<Vec<_>>(), vec![1000]);
    }
}
