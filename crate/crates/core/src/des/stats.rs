use serde::Serialize;

use super::TransmissionRecord;

/// Per-node counters for one epoch.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct NodeCounters {
    pub arrivals: u64,
    pub transmitted: u64,
    pub discarded: u64,
    pub self_collided: u64,
    pub inter_collided: u64,
    pub succeeded: u64,
}

impl NodeCounters {
    fn record(&mut self, r: &TransmissionRecord) {
        self.transmitted += 1;
        self.self_collided += u64::from(r.fate.self_collided);
        self.inter_collided += u64::from(r.fate.inter_collided);
        self.succeeded += u64::from(r.success());
    }
}

/// Aggregate outcome of one epoch.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpochStats {
    /// Epoch length in packet durations.
    pub duration: f64,
    pub nodes: Vec<NodeCounters>,
    /// `observed_nonoverlap[i][j]`: transmissions of neighbor `j` heard by
    /// node `i` that overlapped none of node `i`'s own transmissions.
    pub observed_nonoverlap: Vec<Vec<u64>>,
}

impl EpochStats {
    pub fn new(node_count: usize, duration: f64) -> Self {
        Self {
            duration,
            nodes: vec![NodeCounters::default(); node_count],
            observed_nonoverlap: vec![vec![0; node_count]; node_count],
        }
    }

    /// Build stats from classified records. Arrival and discard counts are
    /// taken from `arrivals[i]`; transmitted records are counted here.
    pub fn from_records(duration: f64, arrivals: &[u64], records: &[TransmissionRecord]) -> Self {
        let mut stats = Self::new(arrivals.len(), duration);
        for r in records {
            stats.nodes[r.node].record(r);
        }
        for (c, &a) in stats.nodes.iter_mut().zip(arrivals) {
            c.arrivals = a;
            c.discarded = a - c.transmitted;
        }
        stats
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Node throughput `s_i` in Erlang.
    pub fn throughput(&self, node: usize) -> f64 {
        self.nodes[node].succeeded as f64 / self.duration
    }

    pub fn throughputs(&self) -> Vec<f64> {
        (0..self.node_count()).map(|i| self.throughput(i)).collect()
    }

    /// Network throughput `S`.
    pub fn total_throughput(&self) -> f64 {
        self.nodes.iter().map(|c| c.succeeded).sum::<u64>() as f64 / self.duration
    }

    /// Effective load `g*_i` handed to the MAC after gating.
    pub fn effective_load(&self, node: usize) -> f64 {
        self.nodes[node].transmitted as f64 / self.duration
    }

    /// Throughput of neighbor `j` as estimated by node `i` from
    /// non-overlapping transmissions.
    pub fn observed_throughput(&self, node: usize, neighbor: usize) -> f64 {
        self.observed_nonoverlap[node][neighbor] as f64 / self.duration
    }

    pub fn collision_probabilities(&self, node: usize) -> CollisionProbabilities {
        collision_probabilities(self, node)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CollisionProbabilities {
    pub self_collision: f64,
    pub inter_collision: f64,
}

/// Self- and inter-collision ratios over transmitted packets; both are zero
/// for a node that transmitted nothing.
pub fn collision_probabilities(stats: &EpochStats, node: usize) -> CollisionProbabilities {
    let c = &stats.nodes[node];
    if c.transmitted == 0 {
        return CollisionProbabilities {
            self_collision: 0.0,
            inter_collision: 0.0,
        };
    }
    let tx = c.transmitted as f64;
    CollisionProbabilities {
        self_collision: c.self_collided as f64 / tx,
        inter_collision: c.inter_collided as f64 / tx,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn with_counts(transmitted: u64, self_collided: u64, inter_collided: u64) -> EpochStats {
        let mut s = EpochStats::new(1, 1000.0);
        s.nodes[0] = NodeCounters {
            arrivals: transmitted,
            transmitted,
            self_collided,
            inter_collided,
            ..Default::default()
        };
        s
    }

    #[test]
    fn ratios() {
        let p = collision_probabilities(&with_counts(10, 2, 5), 0);
        assert_eq!(p.self_collision, 0.2);
        assert_eq!(p.inter_collision, 0.5);
    }

    #[test]
    fn zero_transmissions_give_zero() {
        let p = collision_probabilities(&with_counts(0, 0, 0), 0);
        assert_eq!((p.self_collision, p.inter_collision), (0.0, 0.0));
    }

    #[test]
    fn throughput_accessors() {
        let recs = vec![
            TransmissionRecord::new(0, 0.0),
            TransmissionRecord::new(1, 2.0),
            TransmissionRecord::new(1, 4.0),
        ];
        let s = EpochStats::from_records(10.0, &[3, 2], &recs);
        assert_eq!(s.nodes[0].discarded, 2);
        assert_eq!(s.throughputs(), vec![0.1, 0.2]);
        assert!((s.total_throughput() - 0.3).abs() < 1e-12);
        assert_eq!(s.effective_load(1), 0.2);
    }
}
