//! Anytime trajectories shared by every identifier.

use serde::Serialize;

use crate::game::Entry;

/// A proposed equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Guess {
    pub entry: Entry,
    /// The empirical matrix had no saddle point and the entry came from the
    /// fallback rule. A degraded guess is reported but never scored as an
    /// identification.
    pub degraded: bool,
}

impl Guess {
    pub const fn firm(entry: Entry) -> Self {
        Self {
            entry,
            degraded: false,
        }
    }

    /// The entry, unless the guess is degraded.
    pub fn answer(&self) -> Option<Entry> {
        (!self.degraded).then_some(self.entry)
    }
}

/// The algorithm's current guess after `samples` oracle queries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Checkpoint {
    pub samples: u64,
    pub guess: Option<Guess>,
}

impl Checkpoint {
    /// True when the checkpoint holds a non-degraded guess of `truth`.
    pub fn identifies(&self, truth: Entry) -> bool {
        self.guess.and_then(|g| g.answer()) == Some(truth)
    }
}

/// Outcome of one run of an identifier.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgorithmRun {
    pub algorithm: String,
    pub checkpoints: Vec<Checkpoint>,
    pub final_guess: Option<Guess>,
    pub samples_used: u64,
}

impl AlgorithmRun {
    /// The final entry, degraded or not.
    pub fn final_entry(&self) -> Option<Entry> {
        self.final_guess.map(|g| g.entry)
    }

    /// True when the final guess is a non-degraded guess of `truth`.
    pub fn identifies(&self, truth: Entry) -> bool {
        self.final_guess.and_then(|g| g.answer()) == Some(truth)
    }
}

/// `points` checkpoints spaced linearly up to `budget`, deduplicated.
pub fn linear_grid(budget: u64, points: usize) -> Vec<u64> {
    let points = points as u128;
    let mut grid: Vec<u64> = (1..=points)
        .map(|k| ((k * budget as u128).div_ceil(points)) as u64)
        .filter(|&c| c > 0)
        .collect();
    grid.dedup();
    grid
}

/// Snapshots an anytime guess onto a fixed checkpoint grid.
///
/// A grid point `c` receives the guess the algorithm held right after its
/// `c`-th sample. Algorithms call [`record_before`](Self::record_before) with
/// their old guess before a batch that ends at count `c`, and
/// [`record_through`](Self::record_through) with the new guess once it is known.
#[derive(Debug, Clone)]
pub struct Recorder {
    grid: Vec<u64>,
    points: Vec<Checkpoint>,
}

impl Recorder {
    pub fn new(grid: &[u64]) -> Self {
        debug_assert!(grid.windows(2).all(|w| w[0] < w[1]));
        Self {
            grid: grid.to_vec(),
            points: Vec::with_capacity(grid.len()),
        }
    }

    /// Next grid point still waiting for a guess.
    pub fn next_point(&self) -> Option<u64> {
        self.grid.get(self.points.len()).copied()
    }

    /// Fills pending grid points strictly below `count`.
    pub fn record_before(&mut self, count: u64, guess: Option<Guess>) {
        while let Some(c) = self.next_point().filter(|&c| c < count) {
            self.points.push(Checkpoint { samples: c, guess });
        }
    }

    /// Fills pending grid points at or below `count`.
    pub fn record_through(&mut self, count: u64, guess: Option<Guess>) {
        while let Some(c) = self.next_point().filter(|&c| c <= count) {
            self.points.push(Checkpoint { samples: c, guess });
        }
    }

    /// Completes the grid with the final guess.
    pub fn finish(
        mut self,
        algorithm: &str,
        final_guess: Option<Guess>,
        samples_used: u64,
    ) -> AlgorithmRun {
        self.record_through(u64::MAX, final_guess);
        AlgorithmRun {
            algorithm: algorithm.to_string(),
            checkpoints: self.points,
            final_guess,
            samples_used,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_ends_at_budget_and_is_strictly_increasing() {
        let g = linear_grid(170_000, 20);
        assert_eq!(g.len(), 20);
        assert_eq!(g[0], 8_500);
        assert_eq!(*g.last().unwrap(), 170_000);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(linear_grid(5, 20), vec![1, 2, 3, 4, 5]);
        assert!(linear_grid(0, 20).is_empty());
    }

    #[test]
    fn recorder_semantics() {
        let a = Some(Guess::firm(Entry::new(0, 0)));
        let b = Some(Guess::firm(Entry::new(1, 1)));
        let mut r = Recorder::new(&[10, 20, 30, 40]);
        r.record_before(20, a);
        r.record_through(20, b);
        r.record_before(35, b);
        let run = r.finish("x", a, 35);
        let guesses: Vec<_> = run.checkpoints.iter().map(|c| c.guess).collect();
        assert_eq!(guesses, vec![a, b, b, a]);
    }
}
