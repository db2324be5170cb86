//! Mid-value estimators and the elimination search built on them.

mod gap;
mod heuristic;
mod midval;

pub use gap::{
    find_psne_with_gap, midval_delta, row_stage_pulls, stage_epsilon, terminal_pulls,
    GapSearchOutcome, StageKind, StageRecord,
};
pub use heuristic::{find_psne_heuristic, heuristic_min_budget, stage_plan, HeuristicOutcome};
pub use midval::{
    cmidval, rmidval, ArmSet, Line, LineArms, MidValConfig, MIDVAL_DELTA1, MIDVAL_DELTA2,
};
