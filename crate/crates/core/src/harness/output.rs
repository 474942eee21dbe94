//! CSV emitters. Floats are written with 6 significant digits and columns
//! come in a fixed order, so identical runs produce identical bytes.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use super::runner::EpochRecord;
use super::sweep::SweepResult;
use crate::analytic::fmt6;
use crate::learning::Agent;
use crate::{Error, Result};

fn indexed(prefix: &str, n: usize) -> impl Iterator<Item = String> + '_ {
    (1..=n).map(move |i| format!("{prefix}_{i}"))
}

fn floats(values: &[f64]) -> impl Iterator<Item = String> + '_ {
    values.iter().map(|&x| fmt6(x))
}

/// Header of the per-epoch CSV for `n` nodes.
pub fn epoch_header(n: usize) -> Vec<String> {
    let mut h = vec!["epoch".to_string()];
    for prefix in ["p", "g", "gstar", "s"] {
        h.extend(indexed(prefix, n));
    }
    h.push("S".into());
    for prefix in ["psc", "pic", "r"] {
        h.extend(indexed(prefix, n));
    }
    h.push("spread".into());
    h
}

pub fn write_epochs<W: Write>(records: &[EpochRecord], n: usize, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(epoch_header(n))?;
    for r in records {
        let mut row = vec![r.epoch.to_string()];
        for v in [&r.p, &r.g, &r.gstar, &r.s] {
            row.extend(floats(v));
        }
        row.push(fmt6(r.total));
        for v in [&r.p_sc, &r.p_ic, &r.reward] {
            row.extend(floats(v));
        }
        row.push(fmt6(r.spread));
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Header of the sweep CSV for `n` nodes.
pub fn sweep_header(n: usize) -> Vec<String> {
    let mut h: Vec<String> = indexed("g", n).collect();
    h.extend(indexed("p", n));
    h.extend(indexed("s", n));
    h.push("S".into());
    h.extend(indexed("psc", n));
    h.extend(indexed("pic", n));
    h.extend(["spread", "converged", "replicates", "convergence_epoch"].map(String::from));
    h
}

/// One row per grid point. A grid point whose median run did not converge
/// has `none` as its convergence epoch.
pub fn write_sweep<W: Write>(result: &SweepResult, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(sweep_header(result.node_count))?;
    for r in &result.rows {
        let mut row: Vec<String> = floats(&r.loads).collect();
        row.extend(floats(&r.p));
        row.extend(floats(&r.s));
        row.push(fmt6(r.total));
        row.extend(floats(&r.p_sc));
        row.extend(floats(&r.p_ic));
        row.push(fmt6(r.spread));
        row.push(r.converged.to_string());
        row.push(r.runs.len().to_string());
        row.push(r.convergence.map_or_else(|| "none".into(), fmt6));
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Every replicate of every grid point, with its raw convergence epoch.
pub fn write_runs<W: Write>(result: &SweepResult, out: W) -> csv::Result<()> {
    let n = result.node_count;
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = indexed("g", n).collect();
    header.push("seed".into());
    header.extend(indexed("s", n));
    header.extend(["S", "convergence_epoch"].map(String::from));
    w.write_record(header)?;
    for row in &result.rows {
        for run in &row.runs {
            let mut rec: Vec<String> = floats(&row.loads).collect();
            rec.push(run.seed.to_string());
            rec.extend(floats(&run.s));
            rec.push(fmt6(run.total));
            rec.push(run.convergence.map_or_else(|| "none".into(), |e| e.to_string()));
            w.write_record(rec)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Final Q-tables, one row per node, state and action.
pub fn write_qtables<W: Write>(agents: &[Agent], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["node", "state", "action", "q"])?;
    for agent in agents.iter().filter(|a| a.policy().learns()) {
        for (state, action, q) in agent.qtable().iter() {
            w.write_record([
                (agent.node() + 1).to_string(),
                state.to_string(),
                action.to_string(),
                fmt6(q),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Create `path` and hand it to `write`, attaching the path to any error.
pub fn save<F>(path: &Path, write: F) -> Result<()>
where
    F: FnOnce(File) -> csv::Result<()>,
{
    let file = File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    write(file).map_err(|source| Error::Csv {
        path: path.to_path_buf(),
        source,
    })
}

/// Write to `path`, or to stdout when there is none.
pub fn emit<F>(path: Option<&Path>, write: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> csv::Result<()>,
{
    match path {
        Some(p) => save(p, |mut f| write(&mut f)),
        None => write(&mut std::io::stdout().lock()).map_err(|source| Error::Csv {
            path: "<stdout>".into(),
            source,
        }),
    }
}
