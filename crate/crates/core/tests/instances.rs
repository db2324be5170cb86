use std::sync::Arc;

use midsearch::game::{hardness_stats, psne_exact, Entry, GameError, NoiseModel, SamplingOracle};
use midsearch::instances::{
    dueling_to_game, mab_to_game, make_a_hard, make_planted_strict, make_random_strict,
    AHardParams, InstanceError,
};
use proptest::prelude::*;

#[test]
fn smallest_hard_instance_by_hand() {
    let a = make_a_hard(AHardParams::new(3, 0.05, 0.1)).unwrap();
    let expected = [[0.5, 0.55, 0.6], [0.45, 0.5, 1.0], [0.4, 0.0, 0.5]];
    for (i, row) in expected.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            assert!((a.get(i, j) - x).abs() < 1e-15, "({i}, {j})");
        }
    }
    assert_eq!(a.noise(), NoiseModel::Bernoulli);
    assert!(a.has_tag("dueling"));
}

#[test]
fn hard_instance_layout() {
    for d in 3..=64 {
        let (dmin, beta) = (0.05, 0.1);
        let a = make_a_hard(AHardParams::new(d, dmin, beta)).unwrap();
        for i in 0..d {
            for j in 0..d {
                let expected = match (i, j) {
                    (0, 0) => 0.5,
                    (0, 1) => 0.5 + dmin,
                    (0, _) => 0.5 + beta,
                    (1, 0) => 0.5 - dmin,
                    (_, 0) => 0.5 - beta,
                    _ if i == j => 0.5,
                    _ if i < j => 1.0,
                    _ => 0.0,
                };
                assert_eq!(a.get(i, j), expected);
                assert!((a.get(i, j) + a.get(j, i) - 1.0).abs() <= 1e-12);
                assert!((0.0..=1.0).contains(&a.get(i, j)));
            }
        }
        let p = psne_exact(&a).unwrap();
        assert!(p.strict);
        assert_eq!(p.entry, Entry::new(0, 0));
    }
}

#[test]
fn hard_instance_parameter_checks() {
    assert!(make_a_hard(AHardParams::new(2, 0.05, 0.1)).is_err());
    assert!(make_a_hard(AHardParams::new(32, 0.2, 0.1)).is_err());
    assert!(make_a_hard(AHardParams::new(32, 0.0, 0.1)).is_err());
    assert!(make_a_hard(AHardParams::new(32, 0.05, 0.6)).is_err());
    // Equal gaps, as in the largest experiments, are allowed.
    let h = hardness_stats(&make_a_hard(AHardParams::new(16, 0.1, 0.1)).unwrap()).unwrap();
    assert!((h.delta_min - 0.1).abs() < 1e-12);
}

#[test]
fn condorcet_winner_in_the_middle() {
    let p = vec![
        vec![0.5, 0.3, 0.6],
        vec![0.7, 0.5, 0.7],
        vec![0.4, 0.3, 0.5],
    ];
    let a = dueling_to_game(p).unwrap();
    assert_eq!(psne_exact(&a).unwrap().entry, Entry::new(1, 1));
    assert_eq!(a.noise(), NoiseModel::Bernoulli);
}

#[test]
fn single_dueler() {
    let a = dueling_to_game(vec![vec![0.5]]).unwrap();
    assert_eq!(psne_exact(&a).unwrap().entry, Entry::new(0, 0));
}

#[test]
fn cyclic_preferences_have_no_winner() {
    let p = vec![
        vec![0.5, 0.6, 0.4],
        vec![0.4, 0.5, 0.6],
        vec![0.6, 0.4, 0.5],
    ];
    assert!(psne_exact(&dueling_to_game(p).unwrap()).is_none());
}

#[test]
fn skew_is_checked() {
    let p = vec![vec![0.5, 0.6], vec![0.5, 0.5]];
    assert!(matches!(
        dueling_to_game(p),
        Err(InstanceError::SkewViolation { i: 0, j: 1, .. })
    ));
    assert!(dueling_to_game(vec![vec![0.5, 0.5]]).is_err());
}

#[test]
fn bandit_reductions() {
    let a = mab_to_game(&[0.9, 0.1]).unwrap();
    assert_eq!(psne_exact(&a).unwrap().entry, Entry::new(0, 0));
    assert_eq!(a.noise(), NoiseModel::standard_gaussian());
    let a = mab_to_game(&[0.1, 0.9, 0.5]).unwrap();
    assert_eq!(psne_exact(&a).unwrap().entry, Entry::new(1, 0));
    let a = mab_to_game(&[0.3, 0.9, 0.9]).unwrap();
    assert!(!psne_exact(&a).unwrap().strict);
    assert!(matches!(
        hardness_stats(&a),
        Err(GameError::NoStrictPsne { .. })
    ));
}

#[test]
fn duel_frequencies_match_preferences() {
    let p = vec![
        vec![0.5, 0.3, 0.85],
        vec![0.7, 0.5, 0.55],
        vec![0.15, 0.45, 0.5],
    ];
    let a = Arc::new(dueling_to_game(p.clone()).unwrap());
    for (i, row) in p.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            let mut o = SamplingOracle::new(Arc::clone(&a), (i * 3 + j) as u64);
            let wins: f64 = (0..100_000).map(|_| o.sample(i, j).unwrap()).sum();
            assert!((wins / 1e5 - x).abs() <= 0.01, "({i}, {j}): {}", wins / 1e5);
            // Only the queried entry is charged.
            assert_eq!(o.count(j, i), if i == j { 100_000 } else { 0 });
        }
    }
}

#[test]
fn random_strict_generation() {
    let one = make_random_strict(1, 1, 9).unwrap();
    assert!(psne_exact(&one).unwrap().strict);
    let x = make_random_strict(4, 4, 17).unwrap();
    let y = make_random_strict(4, 4, 17).unwrap();
    assert_eq!(x, y);
    assert_ne!(x, make_random_strict(4, 4, 18).unwrap());
    for n in 1..=8 {
        let a = make_random_strict(n, n, n as u64).unwrap();
        assert!(psne_exact(&a).unwrap().strict);
    }
    assert!(make_random_strict(0, 3, 0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn planted_instances_are_strict(n in 1usize..40, m in 1usize..40, seed in any::<u64>()) {
        let a = make_planted_strict(n, m, seed).unwrap();
        prop_assert!(psne_exact(&a).unwrap().strict);
        prop_assert_eq!(a, make_planted_strict(n, m, seed).unwrap());
    }

    #[test]
    fn hard_instances_are_strict(d in 3usize..80, dmin in 0.001f64..0.5, extra in 0.0f64..0.5) {
        let beta = (dmin + extra).min(0.5);
        let a = make_a_hard(AHardParams::new(d, dmin, beta)).unwrap();
        let h = hardness_stats(&a).unwrap();
        prop_assert_eq!(h.psne, Entry::new(0, 0));
        let expected = (d - 2) as f64 / (beta * beta) + 1.0 / (dmin * dmin);
        prop_assert!((h.budget_h1() - expected).abs() <= 1e-12 * expected);
    }
}
