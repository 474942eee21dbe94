//! Convergence detection on a throughput series.

/// Default rolling window in epochs.
pub const DEFAULT_WINDOW: usize = 50;
/// Default relative tolerance.
pub const DEFAULT_TOL: f64 = 0.05;
/// Largest coefficient of variation allowed inside one window.
pub const MAX_WINDOW_CV: f64 = 0.5;

/// Earliest epoch `e` from which the series has settled, or `None`.
///
/// Let `m_k` be the mean of `series[k..k + window]`. The series has settled
/// at `e` when every `m_k` with `k >= e` lies in a band narrower than `tol`
/// times the mean of those `m_k`, and no such window has a coefficient of
/// variation of [`MAX_WINDOW_CV`] or more. The second condition rejects series
/// whose rolling mean is flat only because the values oscillate. Only starts
/// followed by at least `window` rolling means are candidates.
pub fn detect_convergence(series: &[f64], window: usize, tol: f64) -> Option<usize> {
    if window == 0 || series.len() < window {
        return None;
    }
    let count = series.len() - window + 1;
    let mut means = Vec::with_capacity(count);
    let mut steady = Vec::with_capacity(count);
    for w in series.windows(window) {
        let mean = w.iter().sum::<f64>() / window as f64;
        let var = w.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / window as f64;
        means.push(mean);
        steady.push(var.sqrt() <= MAX_WINDOW_CV * mean.abs());
    }

    // suffix statistics, so every candidate start is checked in O(1)
    let (mut hi, mut lo, mut sum, mut all_steady) = (f64::NEG_INFINITY, f64::INFINITY, 0.0, true);
    let mut ok = vec![false; count];
    for k in (0..count).rev() {
        hi = hi.max(means[k]);
        lo = lo.min(means[k]);
        sum += means[k];
        all_steady &= steady[k];
        let avg = sum / (count - k) as f64;
        let range = hi - lo;
        ok[k] = all_steady && (range == 0.0 || range < tol * avg.abs());
    }
    // a settled tail must contain at least `window` rolling means, otherwise
    // the last few windows would always pass
    let last_start = count - window.min(count);
    ok[..=last_start].iter().position(|&c| c)
}

/// Convergence epoch, measured from `start`, of the part of `series` that
/// begins at `start`. Used for the adaptation time after a load change.
pub fn convergence_after(series: &[f64], start: usize, window: usize, tol: f64) -> Option<usize> {
    series.get(start..).and_then(|tail| detect_convergence(tail, window, tol))
}
