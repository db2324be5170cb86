//! Best-arm identification, the acceptance test for a proposed equilibrium,
//! and the doubling meta-algorithm built on them.

mod bai;
mod check;
mod meta;

pub use bai::{anytime_radius, best_arm_identify, BaiAlgorithm, BaiOutcome};
pub use check::{verify, verify_cap, Verdict, VerifyConfig, VerifyOutcome, DEFAULT_C1};
pub use meta::{
    meta_find_psne, meta_schedule, MetaConfig, MetaOutcome, MetaRound, DEFAULT_MAX_ROUNDS,
};
