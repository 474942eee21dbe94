use serde::Serialize;

/// Number of self-collision levels.
pub const SC_LEVELS: usize = 6;
/// Number of inter-collision levels.
pub const IC_LEVELS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StateMode {
    /// Self-collision level only.
    Single,
    /// Self-collision level times inter-collision level.
    Multi,
}

impl StateMode {
    pub fn state_count(self) -> usize {
        match self {
            StateMode::Single => SC_LEVELS,
            StateMode::Multi => SC_LEVELS * IC_LEVELS,
        }
    }
}

/// Congestion level perceived by one node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CongestionState {
    pub sc_level: u8,
    pub ic_level: u8,
    pub mode: StateMode,
}

impl CongestionState {
    /// Row index into a Q-table.
    pub fn index(&self) -> usize {
        match self.mode {
            StateMode::Single => self.sc_level as usize,
            StateMode::Multi => self.sc_level as usize * IC_LEVELS + self.ic_level as usize,
        }
    }
}

fn level(p: f64, levels: usize) -> u8 {
    ((p * levels as f64).floor() as usize).min(levels - 1) as u8
}

/// Map collision ratios to equal-width levels: `min(floor(6 p_sc), 5)` and
/// `min(floor(4 p_ic), 3)`. In single mode the inter-collision level is 0.
///
/// # Panics
///
/// If either ratio is outside `[0, 1]`.
pub fn discretize(p_sc: f64, p_ic: f64, mode: StateMode) -> CongestionState {
    assert!((0.0..=1.0).contains(&p_sc), "self-collision ratio {p_sc} outside [0, 1]");
    assert!((0.0..=1.0).contains(&p_ic), "inter-collision ratio {p_ic} outside [0, 1]");
    CongestionState {
        sc_level: level(p_sc, SC_LEVELS),
        ic_level: match mode {
            StateMode::Single => 0,
            StateMode::Multi => level(p_ic, IC_LEVELS),
        },
        mode,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let s = discretize(0.0, 0.0, StateMode::Multi);
        assert_eq!((s.sc_level, s.ic_level), (0, 0));
        let s = discretize(1.0, 1.0, StateMode::Multi);
        assert_eq!((s.sc_level, s.ic_level), (5, 3));
        // 0.25 * 6 = 1.5 -> 1, 0.5 * 4 = 2
        let s = discretize(0.25, 0.5, StateMode::Multi);
        assert_eq!((s.sc_level, s.ic_level), (1, 2));
        assert_eq!(s.index(), 6);
    }

    #[test]
    fn single_mode_ignores_inter_collisions() {
        let s = discretize(0.9, 0.9, StateMode::Single);
        assert_eq!(s.index(), 5);
        assert_eq!(StateMode::Single.state_count(), 6);
        assert_eq!(StateMode::Multi.state_count(), 24);
    }

    #[test]
    #[should_panic]
    fn out_of_range_panics() {
        discretize(1.2, 0.0, StateMode::Multi);
    }

    proptest! {
        #[test]
        fn partition_is_total_and_monotone(a in 0.0f64..=1.0, b in 0.0f64..=1.0, c in 0.0f64..=1.0, d in 0.0f64..=1.0) {
            let s = discretize(a, b, StateMode::Multi);
            prop_assert!(s.index() < 24);
            // level preimages are the intervals [k/L, (k+1)/L), with the top one closed
            prop_assert!(a >= s.sc_level as f64 / 6.0 && (a < (s.sc_level + 1) as f64 / 6.0 || s.sc_level == 5));
            prop_assert!(b >= s.ic_level as f64 / 4.0 && (b < (s.ic_level + 1) as f64 / 4.0 || s.ic_level == 3));
            let (lo, hi) = if a <= c { (a, c) } else { (c, a) };
            prop_assert!(discretize(lo, b, StateMode::Multi).sc_level <= discretize(hi, b, StateMode::Multi).sc_level);
            let (lo, hi) = if b <= d { (b, d) } else { (d, b) };
            prop_assert!(discretize(a, lo, StateMode::Multi).ic_level <= discretize(a, hi, StateMode::Multi).ic_level);
        }
    }
}
