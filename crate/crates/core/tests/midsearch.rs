use std::sync::Arc;

use midsearch::game::{hardness_stats, psne_exact, Entry, GameMatrix, NoiseModel, SamplingOracle};
use midsearch::instances::{make_a_hard, make_planted_strict, make_random_strict, AHardParams};
use midsearch::midsearch::{
    cmidval, find_psne_heuristic, find_psne_with_gap, heuristic_min_budget, rmidval, ArmSet,
    MidValConfig, StageKind,
};
use midsearch::run::linear_grid;
use midsearch::AlgorithmError;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Noise-free arms with arbitrary means.
struct Exact {
    means: Vec<f64>,
    rng: ChaCha8Rng,
    pulled: u64,
}

impl Exact {
    fn new(means: Vec<f64>, seed: u64) -> Self {
        Self {
            means,
            rng: ChaCha8Rng::seed_from_u64(seed),
            pulled: 0,
        }
    }
}

impl ArmSet for Exact {
    fn len(&self) -> usize {
        self.means.len()
    }

    fn pull_sum(&mut self, arm: usize, pulls: u64) -> Result<f64, AlgorithmError> {
        self.pulled += pulls;
        Ok(self.means[arm] * pulls as f64)
    }

    fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

fn oracle(m: GameMatrix, seed: u64) -> SamplingOracle {
    SamplingOracle::new(Arc::new(m), seed)
}

#[test]
fn midval_constants() {
    let c = MidValConfig::new(0.1, 0.05).unwrap();
    assert_eq!((c.k, c.z), (474, 159));
    assert_eq!(c.ell, (14.0 * 20f64.ln()).ceil() as u64);
    assert_eq!(c.ell, 42);
}

#[test]
fn midval_of_equal_means_is_exact() {
    for eps in [1.0, 0.1, 0.003] {
        let c = MidValConfig::new(eps, 0.05).unwrap();
        assert_eq!(
            cmidval(&mut Exact::new(vec![0.37; 8], 1), &c).unwrap(),
            0.37
        );
        assert_eq!(
            rmidval(&mut Exact::new(vec![0.37; 8], 2), &c).unwrap(),
            0.37
        );
    }
}

#[test]
fn midval_consumes_exactly_its_budget() {
    for (eps, delta) in [(0.1, 0.05), (0.3, 0.001), (0.02, 0.5)] {
        let c = MidValConfig::new(eps, delta).unwrap();
        let mut arms = Exact::new((0..5).map(f64::from).collect(), 3);
        cmidval(&mut arms, &c).unwrap();
        assert_eq!(arms.pulled, c.ell * c.k * c.per_arm_pulls);
        assert_eq!(arms.pulled, c.total_samples().unwrap());
    }
}

#[test]
fn cmidval_lands_between_the_quarter_and_half_order_statistics() {
    // Descending means 8..1: the 4th highest is 5 and the 3rd highest is 6.
    let c = MidValConfig::new(0.1, 0.05).unwrap();
    let inside = (0..100)
        .filter(|&seed| {
            let v = cmidval(
                &mut Exact::new((1..=8).rev().map(f64::from).collect(), seed),
                &c,
            )
            .unwrap();
            (4.9..=6.1).contains(&v)
        })
        .count();
    assert!(inside >= 95, "{inside}");
}

#[test]
fn rmidval_lands_between_the_quarter_and_half_order_statistics() {
    let c = MidValConfig::new(0.1, 0.05).unwrap();
    let inside = (0..100)
        .filter(|&seed| {
            let v = rmidval(&mut Exact::new((1..=8).map(f64::from).collect(), seed), &c).unwrap();
            (2.9..=4.1).contains(&v)
        })
        .count();
    assert!(inside >= 95, "{inside}");
}

#[test]
fn empty_arm_set_is_an_error() {
    let c = MidValConfig::new(0.1, 0.05).unwrap();
    assert!(matches!(
        cmidval(&mut Exact::new(vec![], 0), &c),
        Err(AlgorithmError::EmptyArmSet)
    ));
}

#[test]
fn two_by_two_is_solved_by_the_terminal_stage() {
    let a = GameMatrix::new(vec![vec![0.0, 0.25], vec![-0.25, 0.0]], NoiseModel::Zero).unwrap();
    for gap in [2.0, 0.25, 0.01] {
        let out = find_psne_with_gap(&mut oracle(a.clone(), 1), gap, 0.1).unwrap();
        assert_eq!(out.entry, Entry::new(0, 0));
        assert_eq!(out.stages.len(), 1);
        assert_eq!(out.stages[0].kind, StageKind::Terminal);
    }
}

#[test]
fn single_entry_needs_no_samples() {
    let a = GameMatrix::new(vec![vec![0.2]], NoiseModel::standard_gaussian()).unwrap();
    let mut o = oracle(a, 0);
    assert_eq!(
        find_psne_with_gap(&mut o, 0.5, 0.1).unwrap().entry,
        Entry::new(0, 0)
    );
    assert_eq!(o.total_count(), 0);
}

#[test]
fn finds_a_hard_equilibrium_at_the_harmonic_gap() {
    let a = make_a_hard(AHardParams::new(8, 0.05, 0.1)).unwrap();
    let gap = hardness_stats(&a).unwrap().delta_g;
    let a = Arc::new(a);
    let correct = (0..100)
        .filter(|&t| {
            let mut o = SamplingOracle::new(Arc::clone(&a), t);
            let out = find_psne_with_gap(&mut o, gap, 0.1).unwrap();
            out.entry == Entry::new(0, 0) && !out.degraded
        })
        .count();
    assert!(correct >= 90, "{correct}");
}

/// Independent sample count of one elimination search, stage by stage.
fn closed_form_count(n: usize, m: usize, gap: f64, delta: f64) -> u64 {
    let (nf, mf) = (n as f64, m as f64);
    let span = (n + m - 2) as f64;
    let mid_delta = delta / (2.0 * nf * nf * mf * mf);
    let ell = (14.0 * (1.0 / mid_delta).ln()).ceil() as u64;
    let mut k = (108.0 * (4.0f64 / 0.05).ln()).ceil() as u64;
    while !k.is_multiple_of(3) {
        k += 1;
    }
    let (mut x, mut y) = (n, m);
    let mut total = 0u64;
    while x.max(y) > 2 {
        let (halved, other) = if x >= y { (x, y) } else { (y, x) };
        let eps = (halved as f64 / span).sqrt() * gap / 9.0;
        let per_arm = (2.0 * (2.0 * k as f64 / 0.05).ln() / (eps * eps)).ceil() as u64;
        let line = (span / halved as f64 * 162.0 * (4.0 * nf * nf * mf * mf / delta).ln()
            / (gap * gap))
            .ceil() as u64;
        total += other as u64 * ell * k * per_arm + halved as u64 * line;
        if x >= y {
            x = x.div_ceil(2);
        } else {
            y = y.div_ceil(2);
        }
    }
    let terminal = (span / 2.0 * 50.0 * (16.0 / delta).ln() / (gap * gap)).ceil() as u64;
    total + (x * y) as u64 * terminal
}

#[test]
fn sixteen_by_sixteen_count_matches_closed_form() {
    let expected = closed_form_count(16, 16, 0.5, 0.1);
    for seed in 0..3 {
        let mut o = oracle(make_planted_strict(16, 16, seed).unwrap(), seed);
        let out = find_psne_with_gap(&mut o, 0.5, 0.1).unwrap();
        assert_eq!(o.total_count(), expected);
        assert_eq!(out.samples, expected);
        assert_eq!(out.stages.iter().map(|s| s.samples).sum::<u64>(), expected);
    }
}

#[test]
fn odd_sizes_count_matches_closed_form() {
    for (n, m, gap, delta) in [
        (5, 3, 0.7, 0.2),
        (1, 7, 0.3, 0.05),
        (9, 1, 1.1, 0.01),
        (6, 11, 0.9, 0.1),
    ] {
        let mut o = oracle(make_planted_strict(n, m, 4).unwrap(), 4);
        find_psne_with_gap(&mut o, gap, delta).unwrap();
        assert_eq!(
            o.total_count(),
            closed_form_count(n, m, gap, delta),
            "{n}x{m}"
        );
    }
}

#[test]
fn zero_noise_counts_do_not_depend_on_the_seed() {
    let a = make_random_strict(6, 6, 11)
        .unwrap()
        .with_noise(NoiseModel::Zero)
        .unwrap();
    let counts: Vec<u64> = (0..5)
        .map(|seed| {
            let mut o = oracle(a.clone(), seed);
            find_psne_with_gap(&mut o, 0.4, 0.1).unwrap();
            o.total_count()
        })
        .collect();
    assert!(counts.windows(2).all(|w| w[0] == w[1]), "{counts:?}");
}

#[test]
fn active_area_shrinks_every_stage() {
    let mut o = oracle(make_planted_strict(13, 7, 2).unwrap(), 2);
    let out = find_psne_with_gap(&mut o, 0.8, 0.1).unwrap();
    let areas: Vec<usize> = out
        .stages
        .iter()
        .map(|s| s.rows.len() * s.cols.len())
        .collect();
    assert!(areas.windows(2).all(|w| w[1] < w[0]), "{areas:?}");
    for s in &out.stages[..out.stages.len() - 1] {
        let halved = if s.kind == StageKind::Rows {
            s.rows.len()
        } else {
            s.cols.len()
        };
        assert_eq!(s.eliminated.len(), halved - halved.div_ceil(2));
    }
}

#[test]
fn invalid_gap_is_rejected() {
    let a = make_planted_strict(3, 3, 0).unwrap();
    for gap in [0.0, -1.0, 2.5, f64::NAN] {
        assert!(find_psne_with_gap(&mut oracle(a.clone(), 0), gap, 0.1).is_err());
    }
}

#[test]
fn heuristic_recovers_noiseless_equilibria() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for seed in 0..40 {
        let (n, m) = (rng.random_range(1..=12), rng.random_range(1..=12));
        let a = make_planted_strict(n, m, seed)
            .unwrap()
            .with_noise(NoiseModel::Zero)
            .unwrap();
        let truth = psne_exact(&a).unwrap().entry;
        let budget = heuristic_min_budget(n, m) * 3 + 10;
        let grid = linear_grid(budget, 5);
        let mut o = oracle(a, seed);
        let out = find_psne_heuristic(&mut o, budget, &grid).unwrap();
        assert!(out.run.identifies(truth), "{n}x{m}");
        assert!(o.total_count() <= budget);
    }
}

#[test]
fn heuristic_rejects_budgets_below_one_pull_per_stage_entry() {
    let a = make_planted_strict(8, 8, 0).unwrap();
    let min = heuristic_min_budget(8, 8);
    let err = find_psne_heuristic(&mut oracle(a.clone(), 0), min - 1, &[]).unwrap_err();
    assert!(matches!(err, AlgorithmError::BudgetTooSmall { .. }));
    assert!(find_psne_heuristic(&mut oracle(a, 0), min, &[min]).is_ok());
}

/// Gaps along the equilibrium column (rows) or row (columns), sorted ascending,
/// including the zero gap of the equilibrium itself.
fn sorted_gaps(a: &[Vec<f64>], rows: bool) -> Vec<f64> {
    let m = GameMatrix::new(a.to_vec(), NoiseModel::Zero).unwrap();
    let h = hardness_stats(&m).unwrap();
    let mut g = if rows { h.row_gaps } else { h.col_gaps };
    g.sort_by(f64::total_cmp);
    g
}

fn check_subset_bound(gaps_in_subset: &mut [f64], total: usize, delta_g: f64) -> bool {
    gaps_in_subset.sort_by(f64::total_cmp);
    let l = gaps_in_subset.len();
    let bound = 0.5 * (l as f64 / total as f64).sqrt() * delta_g;
    (l.div_ceil(4) + 1..=l).all(|s| gaps_in_subset[s - 1] >= bound * (1.0 - 1e-12))
}

#[test]
fn quantile_gap_bounds_hold_on_random_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut violations = 0;
    for t in 0..500 {
        let (n, m) = (rng.random_range(1..=16), rng.random_range(1..=16));
        let a = if n * m <= 16 {
            make_random_strict(n, m, t)
        } else {
            make_planted_strict(n, m, t)
        }
        .unwrap();
        let rows: Vec<Vec<f64>> = (0..n).map(|i| a.row(i).to_vec()).collect();
        let h = hardness_stats(&a).unwrap();
        if n + m <= 2 {
            continue;
        }
        let total = n + m - 2;
        for (is_rows, size) in [(true, n), (false, m)] {
            let gaps = sorted_gaps(&rows, is_rows);
            // The smallest gaps form the worst subset of each size.
            for l in 2..=size {
                violations += usize::from(!check_subset_bound(
                    &mut gaps[..l].to_vec(),
                    total,
                    h.delta_g,
                ));
            }
            for _ in 0..20 {
                let l = rng.random_range(2..=size.max(2)).min(size);
                if l < 2 {
                    break;
                }
                let mut pick = gaps.clone();
                pick.shuffle(&mut rng);
                violations += usize::from(!check_subset_bound(
                    &mut pick[..l].to_vec(),
                    total,
                    h.delta_g,
                ));
            }
        }
    }
    assert_eq!(violations, 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn heuristic_never_exceeds_its_budget(n in 1usize..=10, m in 1usize..=10, seed in any::<u64>(), extra in 0u64..5000) {
        let a = make_planted_strict(n, m, seed).unwrap();
        let budget = heuristic_min_budget(n, m) + extra;
        let grid = linear_grid(budget, 7);
        let mut o = oracle(a, seed);
        let out = find_psne_heuristic(&mut o, budget, &grid).unwrap();
        prop_assert!(o.total_count() <= budget);
        prop_assert_eq!(out.run.samples_used, o.total_count());
        prop_assert_eq!(out.run.checkpoints.len(), grid.len());
    }
}
