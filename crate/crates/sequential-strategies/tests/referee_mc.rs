use chsh_game::{ideal_chsh_strategy, outcome_distribution};
use sequential_strategies::{
    adversary, evolve, hoeffding_pass_bound, referee_threshold, run_referee,
    sample_games, self_test_params, AdversaryKind, Error, SessionCount,
};

const COS2: f64 = 0.5 + 0.25 * std::f64::consts::SQRT_2;

#[test]
fn honest_win_rate_sits_at_the_quantum_value() {
    let s = adversary(AdversaryKind::Honest, 1).unwrap();
    let games = sample_games(&s, 10_000, 42).unwrap();
    let wins = games.iter().flatten().filter(|r| r.win).count() as f64;
    let sigma = (10_000.0 * COS2 * (1.0 - COS2)).sqrt();
    assert!(
        (wins - 10_000.0 * COS2).abs() < 4.0 * sigma,
        "wins {wins} vs expected {}",
        10_000.0 * COS2
    );
}

#[test]
fn classical_win_rate_respects_the_classical_bound() {
    let s = adversary(AdversaryKind::Classical, 1).unwrap();
    let games = sample_games(&s, 10_000, 43).unwrap();
    let wins = games.iter().flatten().filter(|r| r.win).count() as f64;
    let sigma = (10_000.0f64 * 0.75 * 0.25).sqrt();
    assert!(wins <= 10_000.0 * 0.75 + 4.0 * sigma);
    assert!(wins >= 10_000.0 * 0.75 - 4.0 * sigma, "the bound is attained");
}

#[test]
fn seeds_pin_the_samples_and_trials_are_streams() {
    let s = adversary(AdversaryKind::Honest, 2).unwrap();
    let a = sample_games(&s, 10, 7).unwrap();
    let b = sample_games(&s, 10, 7).unwrap();
    assert_eq!(a, b);
    // Each trial has its own stream, so a shorter run is a prefix.
    let c = sample_games(&s, 4, 7).unwrap();
    assert_eq!(&a[..4], &c[..]);
    let d = sample_games(&s, 10, 8).unwrap();
    assert_ne!(a, d);
}

#[test]
fn sampled_frequencies_match_the_exact_evolution() {
    let s = adversary(AdversaryKind::Honest, 1).unwrap();
    let n = 20_000usize;
    let games = sample_games(&s, n, 11).unwrap();
    let mut counts = std::collections::BTreeMap::new();
    for g in &games {
        let r = &g[0];
        *counts.entry((r.a, r.b, r.x, r.y)).or_insert(0usize) += 1;
    }
    let exact = evolve(&s, 1).unwrap();
    let mut chi2 = 0.0;
    for (key, rho) in exact.blocks() {
        let expect = rho.trace_re() * n as f64;
        let observed = *counts.get(&key[0]).unwrap_or(&0) as f64;
        chi2 += (observed - expect).powi(2) / expect;
    }
    // 15 degrees of freedom; 50 is far beyond any plausible fluctuation.
    assert!(chi2 < 50.0, "chi-square {chi2}");

    // The exact single-game blocks in turn match the one-shot oracle.
    let oracle = outcome_distribution(&ideal_chsh_strategy());
    for (key, rho) in exact.blocks() {
        assert!((rho.trace_re() - oracle[&key[0]]).abs() < 1e-12);
    }
}

#[test]
fn threshold_arithmetic_is_reproduced_independently() {
    let t = referee_threshold(5_000, 2).unwrap();
    let total = 10_000.0f64;
    let mean = total * 0.5 * (1.0 + 1.0 / std::f64::consts::SQRT_2);
    let dev = (total * total.ln()).sqrt() / (2.0 * std::f64::consts::SQRT_2);
    assert!((t - (mean - dev)).abs() < 1e-9, "threshold {t}");
    assert!((mean - 8535.533905932738).abs() < 1e-6);

    assert!(matches!(referee_threshold(1, 1), Err(Error::Strategy(_))));
    assert!(referee_threshold(u64::MAX, 2).is_err(), "overflow is caught");

    // The deduction is o(Nn), so the per-game threshold tends to cos^2(pi/8).
    let big = referee_threshold(100_000_000, 1).unwrap();
    assert!((big / 1e8 - COS2).abs() < 1e-3);
}

#[test]
fn referee_accepts_honest_play_and_rejects_classical_play() {
    let honest = adversary(AdversaryKind::Honest, 2).unwrap();
    let classical = adversary(AdversaryKind::Classical, 2).unwrap();
    let mut accepted = 0u32;
    for seed in 0..200u64 {
        if run_referee(&honest, 5_000, seed).unwrap().accepted {
            accepted += 1;
        }
        let verdict = run_referee(&classical, 5_000, seed).unwrap();
        assert!(!verdict.accepted, "classical accepted at seed {seed}");
    }
    let frequency = f64::from(accepted) / 200.0;
    // Hoeffding floor for Nn = 10^4; the observed rate should clear both it
    // and the stronger empirical bar.
    assert!(frequency >= 1.0 - 2.0 * (10_000.0f64).powf(-0.25));
    assert!(frequency >= 0.95, "honest acceptance {frequency}");
}

#[test]
fn verdict_is_consistent_with_its_own_count() {
    let s = adversary(AdversaryKind::Honest, 2).unwrap();
    let v = run_referee(&s, 100, 3).unwrap();
    assert_eq!(v.seed, 3);
    assert_eq!(v.accepted, v.games_won as f64 >= v.threshold);
    let again = run_referee(&s, 100, 3).unwrap();
    assert_eq!(v.games_won, again.games_won);
}

#[test]
fn hoeffding_bound_arithmetic_and_edge_cases() {
    let b = hoeffding_pass_bound(1_000, 0.1).unwrap();
    assert!((b - (1.0 - (-20.0f64).exp())).abs() < 1e-15);
    assert_eq!(hoeffding_pass_bound(12, 0.0).unwrap(), 0.0);
    assert!(hoeffding_pass_bound(12, 1.0).is_err());
    assert!(hoeffding_pass_bound(12, -0.1).is_err());
}

#[test]
fn honest_play_beats_the_hoeffding_bound() {
    let s = adversary(AdversaryKind::Honest, 1).unwrap();
    let (n, delta) = (2_000usize, 0.05);
    let mut passes = 0u32;
    for trial in 0..100u64 {
        let games = sample_games(&s, n, 1_000 + trial).unwrap();
        let wins = games.iter().flatten().filter(|r| r.win).count() as f64;
        if wins >= (COS2 - delta) * n as f64 {
            passes += 1;
        }
    }
    let bound = hoeffding_pass_bound(n as u64, delta).unwrap();
    assert!(f64::from(passes) / 100.0 >= bound, "{passes}/100 vs bound {bound}");
}

#[test]
fn session_requirement_matches_an_independent_solver() {
    let p = self_test_params(0.5, 1.0, 1.0, 100).unwrap();
    assert_eq!(p.rhs, 28_672.0);
    assert!((p.n_star / p.n_star.ln() - p.rhs).abs() < 1e-6);

    // Newton iteration on x/ln x - rhs from an independent starting point.
    let newton = |rhs: f64| {
        let mut x = rhs * rhs.ln().max(2.0);
        for _ in 0..200 {
            let f = x / x.ln() - rhs;
            let fp = (x.ln() - 1.0) / x.ln().powi(2);
            x -= f / fp;
        }
        x
    };
    assert!((p.n_star - newton(28_672.0)).abs() / p.n_star < 1e-9);

    let q = self_test_params(1.0, 1.0, 1.0, 100).unwrap();
    assert_eq!(q.rhs, 1_792.0);
    assert!((q.n_star - newton(1_792.0)).abs() / q.n_star < 1e-9);

    // Session count: exponent 4k*^2+2 = 6 over base max(n_games, n*).
    match self_test_params(1.0, 1.0, 1.0, 1_000_000).unwrap().sessions {
        SessionCount::Exact(v) => assert_eq!(v, 10u128.pow(36)),
        SessionCount::LnValue(_) => panic!("10^36 is exactly representable"),
    }
    match q.sessions {
        SessionCount::Exact(v) => {
            let expect = (q.n_star.round() as u128).pow(6);
            assert_eq!(v, expect);
        }
        SessionCount::LnValue(l) => assert!((l - 6.0 * q.n_star.ln()).abs() < 1e-9),
    }
}

#[test]
fn session_requirement_monotonicity_and_degeneracy() {
    let tight = self_test_params(0.4, 1.0, 1.0, 100).unwrap();
    let loose = self_test_params(0.6, 1.0, 1.0, 100).unwrap();
    assert!(tight.n_star > loose.n_star, "smaller eps needs more sessions");

    assert!(matches!(
        self_test_params(0.5, 0.001, 1.0, 100),
        Err(Error::Degenerate(_))
    ));
    assert!(self_test_params(-0.5, 1.0, 1.0, 100).is_err());
    assert!(self_test_params(0.5, 1.0, 0.5, 100).is_err());
}
