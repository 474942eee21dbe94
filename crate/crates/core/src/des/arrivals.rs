use rand::Rng;
use rand_distr::{Distribution, Exp};
use serde::Serialize;

use crate::{Error, Result};

/// An application-layer packet arrival and the outcome of its transmit gate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArrivalEvent {
    pub node: usize,
    pub time: f64,
    pub gated_in: bool,
}

/// Poisson arrival instants in `[start, end)` at `rate` packets per packet
/// duration, in increasing order.
pub fn generate_arrivals<R: Rng + ?Sized>(rate: f64, start: f64, end: f64, rng: &mut R) -> Result<Vec<f64>> {
    if !(rate >= 0.0) || !rate.is_finite() {
        return Err(Error::NegativeRate(rate));
    }
    if !(end > start) {
        return Err(Error::EmptyWindow { start, end });
    }
    if rate == 0.0 {
        return Ok(Vec::new());
    }
    let gap = Exp::new(rate).map_err(|_| Error::NegativeRate(rate))?;
    let mut out = Vec::with_capacity(((end - start) * rate * 1.1) as usize + 8);
    let mut t = start;
    loop {
        t += gap.sample(rng);
        if t >= end {
            break;
        }
        out.push(t);
    }
    Ok(out)
}

/// Apply an independent Bernoulli(`p`) transmit gate to each arrival.
///
/// One uniform draw is consumed per arrival regardless of `p`, so for a fixed
/// gate stream lowering `p` only ever turns gated-in arrivals into discards.
pub fn gate_arrivals<R: Rng + ?Sized>(node: usize, times: &[f64], p: f64, rng: &mut R) -> Vec<ArrivalEvent> {
    times
        .iter()
        .map(|&time| {
            let u: f64 = rng.random();
            ArrivalEvent {
                node,
                time,
                gated_in: u < p,
            }
        })
        .collect()
}
