//! Closed-form single-node throughput and optimum search.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::{Error, Result};

/// Single-node ALOHA throughput under self-collisions at offered load `g`:
/// `g (e^{-2g} + e^{-g/2} - e^{-3g/2})`.
pub fn single_node_throughput(g: f64) -> Result<f64> {
    if !(g >= 0.0) {
        return Err(Error::NegativeLoad(g));
    }
    Ok(g * ((-2.0 * g).exp() + (-0.5 * g).exp() - (-1.5 * g).exp()))
}

/// Probability that a packet escapes self-collision in the same model.
pub fn no_self_collision_probability(g: f64) -> Result<f64> {
    if !(g >= 0.0) {
        return Err(Error::NegativeLoad(g));
    }
    Ok((1.0 - (-g).exp()) * (-0.5 * g).exp() + (-g).exp() * (-g).exp())
}

/// Location of a throughput maximum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Optimum {
    pub load: f64,
    pub throughput: f64,
    /// False when the curve was not unimodal and `load` is just the grid argmax.
    pub unimodal: bool,
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`,
/// stopping once the bracket is narrower than `tol`.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<Optimum> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::SearchInterval { lo, hi });
    }
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let load = 0.5 * (a + b);
    Ok(Optimum {
        load,
        throughput: f(load),
        unimodal: true,
    })
}

/// Optimum of the closed-form single-node curve on `[lo, hi]` to within 1e-3 in load.
pub fn optimal_load(lo: f64, hi: f64) -> Result<Optimum> {
    if lo < 0.0 {
        return Err(Error::SearchInterval { lo, hi });
    }
    golden_section_max(|g| single_node_throughput(g).unwrap_or(0.0), lo, hi, 1e-3)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveSource {
    ClosedForm,
    Simulated,
}

impl CurveSource {
    pub fn as_str(self) -> &'static str {
        match self {
            CurveSource::ClosedForm => "closed_form",
            CurveSource::Simulated => "simulated",
        }
    }
}

/// Sampled load/throughput curve with strictly increasing loads.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThroughputCurve {
    samples: Vec<(f64, f64)>,
    source: CurveSource,
}

impl ThroughputCurve {
    pub fn new(samples: Vec<(f64, f64)>, source: CurveSource) -> Result<Self> {
        if samples.windows(2).any(|w| !(w[0].0 < w[1].0)) {
            return Err(Error::Parse("curve loads must be strictly increasing".into()));
        }
        if let Some(&(g, s)) = samples.iter().find(|(_, s)| !(0.0..=1.0).contains(s)) {
            return Err(Error::Parse(format!("throughput {s} at load {g} is outside [0, 1]")));
        }
        Ok(Self { samples, source })
    }

    /// Closed-form curve on `points` evenly spaced loads in `[lo, hi]`.
    pub fn closed_form(lo: f64, hi: f64, points: usize) -> Result<Self> {
        if lo < 0.0 || !(hi > lo) || points < 2 {
            return Err(Error::SearchInterval { lo, hi });
        }
        let step = (hi - lo) / (points - 1) as f64;
        let samples = (0..points)
            .map(|k| {
                let g = lo + step * k as f64;
                single_node_throughput(g).map(|s| (g, s))
            })
            .collect::<Result<_>>()?;
        Self::new(samples, CurveSource::ClosedForm)
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn source(&self) -> CurveSource {
        self.source
    }

    /// Non-decreasing then non-increasing.
    pub fn is_unimodal(&self) -> bool {
        let mut descending = false;
        for w in self.samples.windows(2) {
            if w[1].1 < w[0].1 {
                descending = true;
            } else if descending && w[1].1 > w[0].1 {
                return false;
            }
        }
        true
    }

    /// Grid argmax, refined by a parabola through its neighbors when the
    /// curve is unimodal.
    pub fn optimum(&self) -> Option<Optimum> {
        let (k, &(g, s)) = self
            .samples
            .iter()
            .enumerate()
            .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))?;
        let unimodal = self.is_unimodal();
        if !unimodal || k == 0 || k + 1 == self.samples.len() {
            return Some(Optimum {
                load: g,
                throughput: s,
                unimodal,
            });
        }
        let (x0, y0) = self.samples[k - 1];
        let (x2, y2) = self.samples[k + 1];
        let denom = (x0 - g) * (x0 - x2) * (g - x2);
        let a = (x2 * (s - y0) + g * (y0 - y2) + x0 * (y2 - s)) / denom;
        let b = (x2 * x2 * (y0 - s) + g * g * (y2 - y0) + x0 * x0 * (s - y2)) / denom;
        if !(a < 0.0) {
            return Some(Optimum {
                load: g,
                throughput: s,
                unimodal,
            });
        }
        let vertex = (-b / (2.0 * a)).clamp(x0, x2);
        let c = y0 - a * x0 * x0 - b * x0;
        Some(Optimum {
            load: vertex,
            throughput: a * vertex * vertex + b * vertex + c,
            unimodal,
        })
    }

    /// CSV with header `g,s,source`.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["g", "s", "source"])?;
        for &(g, s) in &self.samples {
            w.write_record([fmt6(g), fmt6(s), self.source.as_str().to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        self.write_csv(file).map_err(|source| Error::Csv {
            path: path.to_path_buf(),
            source,
        })
    }
}

/// Format with 6 significant digits, trimming trailing zeros.
pub fn fmt6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_nan() { "nan".into() } else { format!("{}", x) };
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).clamp(0, 17) as usize;
    let s = format!("{:.*}", decimals, x);
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn known_values() {
        assert_eq!(single_node_throughput(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(single_node_throughput(2.4).unwrap(), 0.677, epsilon = 1e-3);
        // 1 * (e^-2 + e^-0.5 - e^-1.5)
        assert_abs_diff_eq!(single_node_throughput(1.0).unwrap(), 0.518_735_78, epsilon = 1e-7);
        assert!(single_node_throughput(60.0).unwrap() < 1e-10);
        assert!(matches!(single_node_throughput(-0.1), Err(Error::NegativeLoad(_))));
    }

    #[test]
    fn golden_section_matches_brute_force_grid() {
        // independent oracle: exhaustive grid on [0, 6] with step 1e-5
        let (mut best_g, mut best_s) = (0.0, f64::MIN);
        for k in 0..=600_000 {
            let g = k as f64 * 1e-5;
            let s = g * ((-2.0 * g).exp() + (-0.5 * g).exp() - (-1.5 * g).exp());
            if s > best_s {
                best_g = g;
                best_s = s;
            }
        }
        let opt = optimal_load(0.0, 6.0).unwrap();
        assert!((opt.load - best_g).abs() <= 1e-3, "{} vs {}", opt.load, best_g);
        assert_abs_diff_eq!(opt.throughput, best_s, epsilon = 1e-6);
        // the exact peak sits at 2.2615, s = 0.67848
        assert_abs_diff_eq!(opt.load, 2.2615, epsilon = 1e-3);
        assert_abs_diff_eq!(opt.throughput, 0.68, epsilon = 0.005);
    }

    #[test]
    fn bad_interval() {
        assert!(optimal_load(3.0, 1.0).is_err());
        assert!(golden_section_max(|x| x, f64::NAN, 1.0, 1e-3).is_err());
    }

    #[test]
    fn curve_optimum_and_flags() {
        let c = ThroughputCurve::closed_form(0.0, 6.0, 61).unwrap();
        assert!(c.is_unimodal());
        let o = c.optimum().unwrap();
        assert!(o.unimodal);
        assert!((o.load - 2.2615).abs() < 0.02);

        let bumpy = ThroughputCurve::new(
            vec![(0.1, 0.1), (0.2, 0.3), (0.3, 0.2), (0.4, 0.25), (0.5, 0.1)],
            CurveSource::Simulated,
        )
        .unwrap();
        let o = bumpy.optimum().unwrap();
        assert!(!o.unimodal);
        assert_eq!(o.load, 0.2);
    }

    #[test]
    fn curve_rejects_unsorted_or_out_of_range() {
        assert!(ThroughputCurve::new(vec![(0.2, 0.1), (0.1, 0.1)], CurveSource::Simulated).is_err());
        assert!(ThroughputCurve::new(vec![(0.1, 1.2)], CurveSource::Simulated).is_err());
    }

    #[test]
    fn csv_export() {
        let c = ThroughputCurve::closed_form(0.0, 1.0, 3).unwrap();
        let mut buf = Vec::new();
        c.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "g,s,source");
        assert_eq!(lines[1], "0,0,closed_form");
        assert_eq!(lines[3], "1,0.518736,closed_form");
    }

    #[test]
    fn six_significant_digits() {
        assert_eq!(fmt6(0.123456789), "0.123457");
        assert_eq!(fmt6(2.4), "2.4");
        assert_eq!(fmt6(1234.56789), "1234.57");
        assert_eq!(fmt6(-0.8), "-0.8");
        assert_eq!(fmt6(0.0), "0");
        assert_eq!(fmt6(1e-7), "0.0000001");
    }

    proptest! {
        #[test]
        fn never_exceeds_offered_load(g in 0.0f64..50.0) {
            let s = single_node_throughput(g).unwrap();
            prop_assert!(s <= g + 1e-12);
            prop_assert!(s >= 0.0);
        }

        #[test]
        fn equals_load_times_expanded_success_probability(g in 0.0f64..20.0) {
            let s = single_node_throughput(g).unwrap();
            let p = no_self_collision_probability(g).unwrap();
            prop_assert!((s - g * p).abs() < 1e-12);
        }
    }
}
