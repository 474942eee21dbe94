use rand::Rng;

/// ε-greedy choice over one Q-table row. Greedy ties are broken uniformly.
pub fn select_action<R: Rng + ?Sized>(qrow: &[f64], eps: f64, rng: &mut R) -> usize {
    assert!(!qrow.is_empty(), "empty action set");
    if rng.random::<f64>() < eps {
        return rng.random_range(0..qrow.len());
    }
    let best = qrow.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ties = qrow.iter().filter(|&&v| v == best).count();
    let pick = if ties == 1 { 0 } else { rng.random_range(0..ties) };
    qrow.iter()
        .enumerate()
        .filter(|(_, &v)| v == best)
        .nth(pick)
        .map(|(k, _)| k)
        .expect("argmax set is non-empty")
}
