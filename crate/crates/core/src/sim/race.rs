use rand::Rng;
use rand_distr::Exp1;

/// One step of the exponential race: the holding time at the total rate and
/// the index of the winning move. `None` when every rate is zero.
pub(crate) fn race<R: Rng + ?Sized>(rng: &mut R, rates: &[f64]) -> Option<(f64, usize)> {
    let total: f64 = rates.iter().sum();
    if total <= 0.0 {
        return None;
    }
    let hold = rng.sample::<f64, _>(Exp1) / total;
    let mut u = rng.random::<f64>() * total;
    for (i, &r) in rates.iter().enumerate() {
        if u < r {
            return Some((hold, i));
        }
        u -= r;
    }
    // Rounding can leave u just above the last rate.
    rates.iter().rposition(|&r| r > 0.0).map(|i| (hold, i))
}

/// Records the state at times `spacing, 2 spacing, ...` while a piecewise
/// constant path is fed to it one sojourn at a time.
pub(crate) struct Snapshots<K> {
    spacing: Option<f64>,
    next: f64,
    pub(crate) taken: Vec<K>,
}

impl<K: Clone> Snapshots<K> {
    pub(crate) fn new(spacing: Option<f64>) -> Self {
        Self {
            spacing,
            next: spacing.unwrap_or(f64::INFINITY),
            taken: Vec::new(),
        }
    }

    /// The path sits at `key` on `[start, end)`.
    pub(crate) fn cover(&mut self, end: f64, key: impl Fn() -> K) {
        let Some(spacing) = self.spacing else {
            return;
        };
        while self.next < end {
            self.taken.push(key());
            self.next += spacing;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::stream;

    #[test]
    fn race_frequencies() {
        let mut rng = stream(1, 0);
        let rates = [1.0, 0.0, 3.0];
        let mut wins = [0usize; 3];
        let mut hold = 0.0;
        let n = 40_000;
        for _ in 0..n {
            let (dt, i) = race(&mut rng, &rates).unwrap();
            wins[i] += 1;
            hold += dt;
        }
        assert_eq!(wins[1], 0);
        let share = wins[2] as f64 / n as f64;
        assert!((share - 0.75).abs() < 0.01, "{share}");
        assert!((hold / n as f64 - 0.25).abs() < 0.005);
        assert!(race(&mut rng, &[0.0, 0.0]).is_none());
    }

    #[test]
    fn snapshots_fall_on_the_grid() {
        let mut s = Snapshots::new(Some(1.0));
        s.cover(0.5, || 0);
        s.cover(2.5, || 1);
        s.cover(3.5, || 2);
        assert_eq!(s.taken, vec![1, 1, 2]);
        let mut off: Snapshots<u8> = Snapshots::new(None);
        off.cover(10.0, || 0);
        assert!(off.taken.is_empty());
    }
}
