use crate::empirical::EmpiricalMatrix;
use crate::game::SamplingOracle;
use crate::run::{AlgorithmRun, Recorder};
use crate::AlgorithmError;

/// Samples the entries round-robin in row-major order for exactly `budget`
/// samples; the guess is the empirical saddle point of what has been sampled.
pub fn run_uniform(
    oracle: &mut SamplingOracle,
    budget: u64,
    grid: &[u64],
) -> Result<AlgorithmRun, AlgorithmError> {
    let (n, m) = (oracle.rows(), oracle.cols());
    let cells = (n * m) as u64;
    let mut table = EmpiricalMatrix::new(n, m);
    let mut recorder = Recorder::new(grid);
    let mut next = recorder.next_point();
    for t in 0..budget {
        let k = (t % cells) as usize;
        let (i, j) = (k / m, k % m);
        let x = oracle.sample(i, j)?;
        table.add(i, j, x, 1);
        if next == Some(t + 1) {
            recorder.record_through(t + 1, table.guess());
            next = recorder.next_point();
        }
    }
    Ok(recorder.finish("uniform", table.guess(), budget))
}
