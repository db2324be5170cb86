//! Identification of the pure strategy Nash equilibrium (PSNE) of a noisy
//! two-player zero-sum matrix game from entry-wise samples.
//!
//! The row player maximizes and the column player minimizes, so the PSNE is
//! the entry that is largest in its column and smallest in its row. Every
//! algorithm here sees the matrix only through a counting
//! [`SamplingOracle`](game::SamplingOracle).
//!
//! * [`midsearch`]: the mid-value elimination search for a known gap guess,
//!   plus a fixed-budget variant tuned for benchmarks.
//! * [`verify`]: best-arm identification, the acceptance test for a proposed
//!   pair, and the doubling meta-algorithm that needs no gap knowledge.
//! * [`baselines`]: EXP3-IX and Tsallis-INF self-play, LUCB-G and uniform sampling.
//! * [`instances`]: benchmark generators and dueling/multi-armed bandit adapters.
//! * [`harness`]: seeded multi-trial experiments with Wilson intervals.
//!
//! Indices are 0-based in the API; [`Entry`](game::Entry) prints them 1-based.

pub mod baselines;
pub mod empirical;
mod error;
pub mod game;
pub mod harness;
pub mod instances;
pub mod midsearch;
pub mod run;
pub mod seed;
pub mod verify;

pub use error::AlgorithmError;
pub(crate) use error::{ceil_count, check_delta};
