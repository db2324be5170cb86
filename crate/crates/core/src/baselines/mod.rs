//! Fixed-budget competitors: no-regret self-play, LUCB-G and uniform sampling.

mod lucb;
mod selfplay;
mod uniform;

pub use lucb::{lucb_radius, run_lucb_g, LUCB_DELTA};
pub use selfplay::{
    run_exp3ix_selfplay, run_tsallis_inf_selfplay, self_play, unit_reward, Exp3Ix, Learner,
    TsallisInf, TSALLIS_TOL,
};
pub use uniform::run_uniform;
