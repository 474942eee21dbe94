use serde::{Deserialize, Serialize};

use super::{
    classify_with_context, gate_arrivals, generate_arrivals, observe_nonoverlap, ArrivalEvent, EpochStats, Topology,
    TransmissionRecord, PACKET_DURATION,
};
use crate::rng::{stream, SimRng, Stream};
use crate::{Error, Result};

/// What a node does with a gated-in packet while its own previous packet is
/// still on the air.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransmitterModel {
    /// The radio cannot start a second transmission: the new packet
    /// self-collides at the transmitter and is lost, the ongoing one is
    /// unaffected.
    #[default]
    HalfDuplex,
    /// The new packet goes on the air immediately and both overlapping
    /// packets are corrupted.
    Overlap,
}

/// Multi-epoch channel simulation.
///
/// Epoch `k` covers `[k * duration, (k + 1) * duration)`. Transmissions that
/// start near the end of an epoch still interfere with the first packets of
/// the next one; a packet's fate is settled in the epoch it starts in.
#[derive(Debug, Clone)]
pub struct Engine {
    topology: Topology,
    model: TransmitterModel,
    duration: f64,
    epoch: u64,
    arrival_rngs: Vec<SimRng>,
    gate_rngs: Vec<SimRng>,
    busy_until: Vec<f64>,
    tail: Vec<TransmissionRecord>,
}

impl Engine {
    pub fn new(topology: Topology, model: TransmitterModel, duration: f64, seed: u64) -> Result<Self> {
        if !(duration > 0.0) || !duration.is_finite() {
            return Err(Error::EmptyWindow {
                start: 0.0,
                end: duration,
            });
        }
        let n = topology.node_count();
        Ok(Self {
            arrival_rngs: (0..n).map(|i| stream(seed, Stream::Arrivals, i)).collect(),
            gate_rngs: (0..n).map(|i| stream(seed, Stream::Gating, i)).collect(),
            busy_until: vec![f64::NEG_INFINITY; n],
            tail: Vec::new(),
            topology,
            model,
            duration,
            epoch: 0,
        })
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn epoch(&self) -> u64 {
        self.epoch
    }

    pub fn run_epoch(&mut self, rates: &[f64], probs: &[f64]) -> Result<EpochStats> {
        self.run_epoch_detailed(rates, probs).map(|(stats, _)| stats)
    }

    /// Run one epoch and also return its classified records.
    pub fn run_epoch_detailed(&mut self, rates: &[f64], probs: &[f64]) -> Result<(EpochStats, Vec<TransmissionRecord>)> {
        let n = self.topology.node_count();
        for values in [rates, probs] {
            if values.len() != n {
                return Err(Error::NodeCountMismatch {
                    expected: n,
                    actual: values.len(),
                });
            }
        }
        if let Some((node, &p)) = probs.iter().enumerate().find(|(_, p)| !(0.0..=1.0).contains(*p)) {
            return Err(Error::InvalidProbability { node, p });
        }

        let start = self.epoch as f64 * self.duration;
        let end = start + self.duration;
        let mut arrivals = Vec::with_capacity(n);
        let mut records = Vec::new();
        for node in 0..n {
            let times = generate_arrivals(rates[node], start, end, &mut self.arrival_rngs[node])?;
            let events = gate_arrivals(node, &times, probs[node], &mut self.gate_rngs[node]);
            arrivals.push(events.len() as u64);
            self.transmit(&events, &mut records);
        }
        records.sort_by(|a, b| a.start.total_cmp(&b.start).then(a.node.cmp(&b.node)));

        classify_with_context(&self.tail, &mut records, &self.topology);
        let mut stats = EpochStats::from_records(self.duration, &arrivals, &records);
        observe_nonoverlap(&self.tail, &records, &self.topology, &mut stats.observed_nonoverlap);

        self.tail = records
            .iter()
            .filter(|r| r.radiated && r.end() > end)
            .copied()
            .collect();
        self.epoch += 1;
        Ok((stats, records))
    }

    fn transmit(&mut self, events: &[ArrivalEvent], records: &mut Vec<TransmissionRecord>) {
        for e in events.iter().filter(|e| e.gated_in) {
            let busy = &mut self.busy_until[e.node];
            let record = match self.model {
                TransmitterModel::HalfDuplex if e.time < *busy => TransmissionRecord::blocked(e.node, e.time),
                _ => {
                    *busy = busy.max(e.time + PACKET_DURATION);
                    TransmissionRecord::new(e.node, e.time)
                }
            };
            records.push(record);
        }
    }
}

/// Run a single standalone epoch starting at time zero.
pub fn run_epoch(
    topology: &Topology,
    rates: &[f64],
    probs: &[f64],
    duration: f64,
    model: TransmitterModel,
    seed: u64,
) -> Result<EpochStats> {
    Engine::new(topology.clone(), model, duration, seed)?.run_epoch(rates, probs)
}
