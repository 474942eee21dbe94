//! Load sweeps over replicated runs.

use serde::Serialize;

use super::convergence::{detect_convergence, DEFAULT_TOL, DEFAULT_WINDOW};
use super::runner::{run_with_seed, tail_mean, total_series, EpochRecord};
use super::ScenarioConfig;
use crate::analytic::{CurveSource, Optimum, ThroughputCurve};
use crate::par::{self, Execution};
use crate::rng::replicate_seed;
use crate::{Error, Result};

/// Converged quantities are averaged over this many final epochs.
pub const FINAL_WINDOW: usize = 100;

/// Converged summary of one run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub seed: u64,
    pub p: Vec<f64>,
    pub s: Vec<f64>,
    pub total: f64,
    pub p_sc: Vec<f64>,
    pub p_ic: Vec<f64>,
    /// `max_i s_i - min_i s_i` of the converged throughputs.
    pub spread: f64,
    pub convergence: Option<usize>,
}

impl RunSummary {
    pub fn from_records(seed: u64, records: &[EpochRecord]) -> Self {
        let s = tail_mean(records, FINAL_WINDOW, |r| &r.s);
        let max = s.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = s.iter().copied().fold(f64::INFINITY, f64::min);
        let series = total_series(records);
        let tail = &series[series.len().saturating_sub(FINAL_WINDOW)..];
        Self {
            seed,
            p: tail_mean(records, FINAL_WINDOW, |r| &r.p),
            total: tail.iter().sum::<f64>() / tail.len().max(1) as f64,
            p_sc: tail_mean(records, FINAL_WINDOW, |r| &r.p_sc),
            p_ic: tail_mean(records, FINAL_WINDOW, |r| &r.p_ic),
            spread: if s.is_empty() { 0.0 } else { max - min },
            convergence: detect_convergence(&series, DEFAULT_WINDOW, DEFAULT_TOL),
            s,
        }
    }
}

/// One grid point aggregated over replicates by the median.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub loads: Vec<f64>,
    pub p: Vec<f64>,
    pub s: Vec<f64>,
    pub total: f64,
    pub p_sc: Vec<f64>,
    pub p_ic: Vec<f64>,
    pub spread: f64,
    /// Median convergence epoch, with non-converged runs counted as never.
    pub convergence: Option<f64>,
    pub converged: usize,
    pub runs: Vec<RunSummary>,
}

impl SweepRow {
    pub fn from_runs(loads: Vec<f64>, runs: Vec<RunSummary>) -> Self {
        let n = loads.len();
        let per_node = |f: fn(&RunSummary) -> &Vec<f64>| -> Vec<f64> {
            (0..n).map(|i| median(runs.iter().map(|r| f(r)[i]))).collect()
        };
        let epochs: Vec<Option<usize>> = runs.iter().map(|r| r.convergence).collect();
        Self {
            p: per_node(|r| &r.p),
            s: per_node(|r| &r.s),
            p_sc: per_node(|r| &r.p_sc),
            p_ic: per_node(|r| &r.p_ic),
            total: median(runs.iter().map(|r| r.total)),
            spread: median(runs.iter().map(|r| r.spread)),
            convergence: median_epoch(&epochs),
            converged: epochs.iter().flatten().count(),
            loads,
            runs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub node_count: usize,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    /// Row with the highest network throughput.
    pub fn peak(&self) -> Option<&SweepRow> {
        self.rows.iter().max_by(|a, b| a.total.total_cmp(&b.total))
    }

    /// Largest median throughput of `node` over the grid.
    pub fn node_max(&self, node: usize) -> Option<f64> {
        self.rows.iter().map(|r| r.s[node]).reduce(f64::max)
    }

    /// Network throughput against the load of node 0.
    pub fn curve(&self) -> Result<ThroughputCurve> {
        ThroughputCurve::new(
            self.rows.iter().map(|r| (r.loads[0], r.total)).collect(),
            CurveSource::Simulated,
        )
    }

    /// Optimal load of node 0, found on the sampled network throughput curve.
    pub fn optimum(&self) -> Option<Optimum> {
        self.curve().ok()?.optimum()
    }
}

/// Median of a non-empty sample; NaN when empty.
pub fn median(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut v: Vec<f64> = values.into_iter().collect();
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        (v[mid - 1] + v[mid]) / 2.0
    }
}

/// Median convergence epoch where a run that never converged ranks last.
/// `None` when the median itself falls on a non-converged run.
pub fn median_epoch(epochs: &[Option<usize>]) -> Option<f64> {
    if epochs.is_empty() {
        return None;
    }
    let m = median(epochs.iter().map(|e| e.map_or(f64::INFINITY, |e| e as f64)));
    m.is_finite().then_some(m)
}

/// Run every grid point for every replicate of `base` and aggregate.
pub fn load_sweep(base: &ScenarioConfig, grid: &[Vec<f64>], exec: Execution) -> Result<SweepResult> {
    if grid.is_empty() {
        return Err(Error::Grid {
            spec: String::new(),
            reason: "grid is empty".into(),
        });
    }
    let configs = grid
        .iter()
        .map(|loads| base.with_constant_loads(loads))
        .collect::<Result<Vec<_>>>()?;
    let jobs: Vec<(usize, u64)> = (0..grid.len())
        .flat_map(|k| (0..base.replicates).map(move |r| (k, replicate_seed(base.seed, r))))
        .collect();
    let summaries = par::map(exec, jobs, |(k, seed)| {
        run_with_seed(&configs[k], seed).map(|recs| (k, RunSummary::from_records(seed, &recs)))
    });

    let mut per_point: Vec<Vec<RunSummary>> = vec![Vec::new(); grid.len()];
    for item in summaries {
        let (k, summary) = item?;
        per_point[k].push(summary);
    }
    Ok(SweepResult {
        node_count: base.node_count(),
        rows: grid
            .iter()
            .cloned()
            .zip(per_point)
            .map(|(loads, runs)| SweepRow::from_runs(loads, runs))
            .collect(),
    })
}

/// The same sweep with every node running pure ALOHA.
pub fn baseline_sweep(base: &ScenarioConfig, grid: &[Vec<f64>], exec: Execution) -> Result<SweepResult> {
    load_sweep(&base.as_aloha(), grid, exec)
}

/// Best ALOHA operating point subject to equal node throughputs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EqualShare {
    pub loads: Vec<f64>,
    pub s: Vec<f64>,
    pub total: f64,
    pub spread: f64,
}

/// Search ALOHA operating points where all nodes get the same throughput.
///
/// Nodes are split into two groups; the first group runs every load in
/// `first`, the second every load in `second`. Among the points whose
/// throughput spread is at most `max_spread`, the one with the highest
/// network throughput wins.
pub fn equal_share_search(
    base: &ScenarioConfig,
    groups: [&[usize]; 2],
    first: &[f64],
    second: &[f64],
    max_spread: f64,
    exec: Execution,
) -> Result<Option<EqualShare>> {
    let n = base.node_count();
    let mut grid = Vec::with_capacity(first.len() * second.len());
    for &x in first {
        for &y in second {
            let mut loads = vec![0.0; n];
            for (group, g) in groups.iter().zip([x, y]) {
                for &i in *group {
                    if i >= n {
                        return Err(Error::NodeCountMismatch { expected: n, actual: i + 1 });
                    }
                    loads[i] = g;
                }
            }
            grid.push(loads);
        }
    }
    let result = baseline_sweep(base, &grid, exec)?;
    Ok(result
        .rows
        .into_iter()
        .filter(|r| r.spread <= max_spread)
        .max_by(|a, b| a.total.total_cmp(&b.total))
        .map(|r| EqualShare {
            loads: r.loads,
            s: r.s,
            total: r.total,
            spread: r.spread,
        }))
}

/// Parse a grid spec into load vectors for `base`.
///
/// Entries are separated by `;`. Each entry is one of
///
/// - `0.4`: every node at 0.4
/// - `0.2,0.28,0.2`: one load per node
/// - `0.1:1.0:0.1`: every node over an inclusive range
/// - `n2=0:5:0.5` or `n2=1.5`: node 2 over a range, other nodes at their
///   epoch-0 load from the config
pub fn parse_grid(spec: &str, base: &ScenarioConfig) -> Result<Vec<Vec<f64>>> {
    let n = base.node_count();
    let err = |reason: String| Error::Grid {
        spec: spec.to_string(),
        reason,
    };
    let mut grid = Vec::new();
    for entry in spec.split(';').map(str::trim).filter(|e| !e.is_empty()) {
        if let Some((node, values)) = entry.split_once('=') {
            let node: usize = node
                .trim()
                .strip_prefix('n')
                .and_then(|k| k.parse().ok())
                .filter(|k| (1..=n).contains(k))
                .ok_or_else(|| err(format!("`{node}` is not a node between n1 and n{n}")))?;
            let initial = base.loads_at(0);
            for g in values_of(values).map_err(err)? {
                let mut loads = initial.clone();
                loads[node - 1] = g;
                grid.push(loads);
            }
        } else if entry.contains(',') {
            let loads = entry
                .split(',')
                .map(|x| number(x).map_err(err))
                .collect::<Result<Vec<_>>>()?;
            if loads.len() != n {
                return Err(err(format!("`{entry}` has {} loads for {n} nodes", loads.len())));
            }
            grid.push(loads);
        } else {
            grid.extend(values_of(entry).map_err(err)?.into_iter().map(|g| vec![g; n]));
        }
    }
    if grid.is_empty() {
        return Err(err("no grid points".into()));
    }
    if let Some(g) = grid.iter().flatten().find(|g| **g < 0.0) {
        return Err(err(format!("load {g} is negative")));
    }
    Ok(grid)
}

fn number(text: &str) -> std::result::Result<f64, String> {
    text.trim()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| format!("`{}` is not a number", text.trim()))
}

fn values_of(text: &str) -> std::result::Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(':').collect();
    match parts[..] {
        [x] => Ok(vec![number(x)?]),
        [lo, hi, step] => {
            let (lo, hi, step) = (number(lo)?, number(hi)?, number(step)?);
            if !(step > 0.0) || hi < lo {
                return Err(format!("range `{text}` needs lo <= hi and a positive step"));
            }
            let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
            Ok((0..count)
                .map(|k| ((lo + k as f64 * step) * 1e9).round() / 1e9)
                .collect())
        }
        _ => Err(format!("`{text}` is neither a value nor lo:hi:step")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::parse_config;

    fn two_nodes() -> ScenarioConfig {
        parse_config(
            r#"{"topology": {"kind": "full", "nodes": 2}, "loads": [0.3, 0.7], "policy": "aloha", "epochs": 30, "replicates": 3}"#,
        )
        .unwrap()
    }

    #[test]
    fn grid_forms() {
        let c = two_nodes();
        assert_eq!(parse_grid("0.5", &c).unwrap(), vec![vec![0.5, 0.5]]);
        assert_eq!(parse_grid("0.1, 0.2; 0.3,0.4", &c).unwrap(), vec![vec![0.1, 0.2], vec![0.3, 0.4]]);
        assert_eq!(
            parse_grid("0.1:0.3:0.1", &c).unwrap(),
            vec![vec![0.1, 0.1], vec![0.2, 0.2], vec![0.3, 0.3]]
        );
        assert_eq!(
            parse_grid("n2=1:2:0.5", &c).unwrap(),
            vec![vec![0.3, 1.0], vec![0.3, 1.5], vec![0.3, 2.0]]
        );
    }

    #[test]
    fn grid_errors() {
        let c = two_nodes();
        for bad in ["", "x", "1,2,3", "n3=1", "1:0:0.1", "0:1:0", "-1", "1:2"] {
            assert!(matches!(parse_grid(bad, &c), Err(Error::Grid { .. })), "{bad}");
        }
    }

    #[test]
    fn medians() {
        assert_eq!(median([3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median([4.0, 1.0, 2.0, 3.0]), 2.5);
        assert!(median(std::iter::empty()).is_nan());
        assert_eq!(median_epoch(&[Some(10), None, Some(30)]), Some(30.0));
        assert_eq!(median_epoch(&[Some(10), None, None]), None);
    }

    #[test]
    fn one_row_per_point_with_every_replicate() {
        let c = two_nodes();
        let grid = parse_grid("0.1:0.5:0.2", &c).unwrap();
        let r = load_sweep(&c, &grid, Execution::Parallel).unwrap();
        assert_eq!(r.rows.len(), 3);
        for row in &r.rows {
            assert_eq!(row.runs.len(), 3);
            assert!(row.converged <= 3);
            assert!((row.s.iter().sum::<f64>() - row.total).abs() < 0.02);
        }
        assert_eq!(r, load_sweep(&c, &grid, Execution::Sequential).unwrap());
    }

    #[test]
    fn empty_grid_is_rejected() {
        assert!(load_sweep(&two_nodes(), &[], Execution::Sequential).is_err());
    }

    #[test]
    fn chain_equal_share_benchmark() {
        let c = parse_config(
            r#"{"topology": {"kind": "partial", "nodes": 3, "edges": [[1, 2], [2, 3]]},
                "loads": 0.2, "policy": "aloha", "epochs": 60, "seed": 2}"#,
        )
        .unwrap();
        let ends: Vec<f64> = (5..=15).map(|k| k as f64 * 0.02).collect();
        let middle: Vec<f64> = (6..=18).map(|k| k as f64 * 0.025).collect();
        let best = equal_share_search(&c, [&[0, 2], &[1]], &ends, &middle, 0.01, Execution::Parallel)
            .unwrap()
            .unwrap();
        assert!((best.total - 0.31).abs() <= 0.03, "{best:?}");
        assert!(best.loads[1] > best.loads[0]);
        // equal shares form a flat ridge; (0.2, 0.28, 0.2) lies on it, close to the top
        let r = baseline_sweep(&c, &[vec![0.2, 0.28, 0.2]], Execution::Sequential).unwrap();
        assert!(r.rows[0].spread <= 0.01, "{:?}", r.rows[0].s);
        assert!(best.total - r.rows[0].total <= 0.015, "{} vs {}", best.total, r.rows[0].total);
    }

    #[test]
    fn priority_weights_starve_the_low_priority_node() {
        let c = parse_config(
            r#"{"topology": {"kind": "full", "nodes": 2}, "loads": 2.4, "policy": "hql_full", "epochs": 1500,
                "replicates": 3, "seed": 1,
                "weights": {"mode": "full", "rho": 0.23, "sigma": 0.0, "mu": [2.0, 0.1]}}"#,
        )
        .unwrap();
        let r = load_sweep(&c, &[vec![2.4, 2.4]], Execution::Parallel).unwrap();
        let row = &r.rows[0];
        assert!(row.s[0] > 3.0 * row.s[1], "{:?}", row.s);
        assert!(row.s[1] < 0.05, "{:?}", row.s);
    }
}
