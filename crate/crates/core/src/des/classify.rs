use serde::Serialize;

use super::{Topology, PACKET_DURATION};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Fate {
    pub self_collided: bool,
    pub inter_collided: bool,
}

impl Fate {
    pub fn success(self) -> bool {
        !self.self_collided && !self.inter_collided
    }
}

/// One attempted transmission.
///
/// `radiated` is false for an attempt that never reached the air because the
/// node's radio was already busy (half-duplex transmitter). Such a record
/// still occupies its nominal interval for bookkeeping but cannot interfere
/// with anything.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransmissionRecord {
    pub node: usize,
    pub start: f64,
    pub radiated: bool,
    pub fate: Fate,
}

impl TransmissionRecord {
    pub fn new(node: usize, start: f64) -> Self {
        Self {
            node,
            start,
            radiated: true,
            fate: Fate::default(),
        }
    }

    pub fn blocked(node: usize, start: f64) -> Self {
        Self {
            radiated: false,
            ..Self::new(node, start)
        }
    }

    pub fn end(&self) -> f64 {
        self.start + PACKET_DURATION
    }

    /// Open-interval overlap; records that only touch at an endpoint do not overlap.
    pub fn overlaps(&self, other: &TransmissionRecord) -> bool {
        self.start < other.end() && other.start < self.end()
    }

    pub fn success(&self) -> bool {
        self.fate.success()
    }
}

/// Set the fate of every record.
///
/// A record of node `i` is self-collided iff another radiated record of node
/// `i` overlaps it. A radiated record of node `i` is inter-collided iff a
/// radiated record of some node `j != i` that the receiver of `i` hears
/// overlaps it. Records must be sorted by start time.
pub fn classify_transmissions(records: &mut [TransmissionRecord], topology: &Topology) {
    classify_with_context(&[], records, topology);
}

/// Like [`classify_transmissions`], but radiated records in `context` (e.g.
/// the tail of the previous epoch) also count as interferers. Their own fates
/// are left alone. Both slices must be sorted by start time.
pub fn classify_with_context(context: &[TransmissionRecord], records: &mut [TransmissionRecord], topology: &Topology) {
    debug_assert!(is_sorted(context) && is_sorted(records));
    for k in 0..records.len() {
        let r = records[k];
        let mut fate = Fate::default();
        let mut mark = |m: &TransmissionRecord| {
            if !m.radiated {
                return;
            }
            if m.node == r.node {
                fate.self_collided = true;
            } else if r.radiated && topology.receiver_hears(r.node, m.node) {
                fate.inter_collided = true;
            }
        };
        for m in records[..k].iter().rev().take_while(|m| r.start - m.start < PACKET_DURATION) {
            mark(m);
        }
        for m in records[k + 1..].iter().take_while(|m| m.start - r.start < PACKET_DURATION) {
            mark(m);
        }
        for m in context.iter().rev().take_while(|m| m.end() > r.start) {
            if m.overlaps(&r) {
                mark(m);
            }
        }
        records[k].fate = fate;
    }
}

/// Count, for every listener `i` and neighbor `j`, the radiated transmissions
/// of `j` that overlap no radiated transmission of `i`. Entry `[i][j]` is
/// added to `counts`. `context` records interfere but are not counted.
pub fn observe_nonoverlap(
    context: &[TransmissionRecord],
    records: &[TransmissionRecord],
    topology: &Topology,
    counts: &mut [Vec<u64>],
) {
    let n = topology.node_count();
    let mut busy = vec![false; n];
    for (k, r) in records.iter().enumerate() {
        if !r.radiated || topology.degree(r.node) == 0 {
            continue;
        }
        busy.iter_mut().for_each(|b| *b = false);
        let before = records[..k].iter().rev().take_while(|m| r.start - m.start < PACKET_DURATION);
        let after = records[k + 1..].iter().take_while(|m| m.start - r.start < PACKET_DURATION);
        let ctx = context.iter().rev().take_while(|m| m.end() > r.start).filter(|m| m.overlaps(r));
        for m in before.chain(after).chain(ctx) {
            if m.radiated {
                busy[m.node] = true;
            }
        }
        for &i in topology.neighbors(r.node) {
            if !busy[i] {
                counts[i][r.node] += 1;
            }
        }
    }
}

fn is_sorted(records: &[TransmissionRecord]) -> bool {
    records.windows(2).all(|w| w[0].start <= w[1].start)
}
