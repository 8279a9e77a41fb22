//! Exact game values of reference strategies.

use chsh_game::{
    answer_basis, answer_state, correlation_value, ideal_chsh_strategy, is_structured,
    outcome_distribution, post_measurement_state, win_probability, ChshStrategy, Device,
    TSIRELSON,
};
use linalg_core::{c, cr, epr_pair, gate_g, identity, pauli_z, CMat, CVec, PureState, Reflection};

fn cos2_pi8() -> f64 {
    let c = (std::f64::consts::PI / 8.0).cos();
    c * c
}

/// All answers fixed to 0: the best deterministic classical strategy.
fn classical_strategy() -> ChshStrategy {
    let mut amps = CVec::zeros(4);
    amps[0] = cr(1.0);
    let id = || Reflection::new(identity(2)).unwrap();
    ChshStrategy::new(
        PureState::new(amps).unwrap(),
        [2, 2, 1],
        [id(), id()],
        [id(), id()],
    )
    .unwrap()
}

#[test]
fn ideal_win_probability_and_correlation() {
    let s = ideal_chsh_strategy();
    assert!((win_probability(&s) - cos2_pi8()).abs() < 1e-12);
    assert!((correlation_value(&s) - TSIRELSON).abs() < 1e-12);
}

#[test]
fn ideal_wins_equally_well_against_every_question_and_own_answer() {
    let s = ideal_chsh_strategy();
    let dist = outcome_distribution(&s);
    for a in 0..2u8 {
        for b in 0..2u8 {
            for x in 0..2u8 {
                let total: f64 = (0..2u8).map(|y| dist[&(a, b, x, y)]).sum();
                let won: f64 = (0..2u8)
                    .filter(|&y| x ^ y == a & b)
                    .map(|y| dist[&(a, b, x, y)])
                    .sum();
                assert!((won / total - cos2_pi8()).abs() < 1e-12, "questions {a}{b} answer {x}");
            }
        }
    }
}

#[test]
fn ideal_outcome_cells() {
    // Each question pair carries weight 1/4 and splits it 1/4(1 +- 1/sqrt 2)
    // over the four answer pairs, so the winning cells get 1/16(1 + 1/sqrt 2)
    // and the losing cells 1/16(1 - 1/sqrt 2).
    let dist = outcome_distribution(&ideal_chsh_strategy());
    let win = 0.0625 * (1.0 + std::f64::consts::FRAC_1_SQRT_2);
    let lose = 0.0625 * (1.0 - std::f64::consts::FRAC_1_SQRT_2);
    assert!((dist[&(0, 0, 0, 0)] - win).abs() < 1e-12);
    assert!((dist[&(0, 0, 0, 1)] - lose).abs() < 1e-12);
    for ((a, b, x, y), p) in &dist {
        let target = if x ^ y == a & b { win } else { lose };
        assert!((p - target).abs() < 1e-12);
    }
    let total: f64 = dist.values().sum();
    assert!((total - 1.0).abs() < 1e-10);
}

#[test]
fn product_state_z_measurements_are_deterministic() {
    let mut amps = CVec::zeros(4);
    amps[0] = cr(1.0);
    let z = || Reflection::new(pauli_z()).unwrap();
    let s = ChshStrategy::new(
        PureState::new(amps).unwrap(),
        [2, 2, 1],
        [z(), z()],
        [z(), z()],
    )
    .unwrap();
    let dist = outcome_distribution(&s);
    for ((_, _, x, y), p) in &dist {
        if *x == 0 && *y == 0 {
            assert!((p - 0.25).abs() < 1e-12);
        } else {
            assert!(*p < 1e-12);
        }
    }
}

#[test]
fn classical_strategy_value() {
    let s = classical_strategy();
    assert!((win_probability(&s) - 0.75).abs() < 1e-12);
    assert!((correlation_value(&s) - 2.0).abs() < 1e-12);
}

#[test]
fn anti_ideal_flips_the_correlation_sign() {
    let ideal = ideal_chsh_strategy();
    let neg = |r: &Reflection| Reflection::new(r.matrix().scale(-1.0)).unwrap();
    let s = ChshStrategy::new(
        ideal.psi().clone(),
        ideal.dims(),
        [ideal.alice(0).clone(), ideal.alice(1).clone()],
        [neg(ideal.bob(0)), neg(ideal.bob(1))],
    )
    .unwrap();
    assert!((correlation_value(&s) + TSIRELSON).abs() < 1e-12);
}

#[test]
fn structuredness_thresholds() {
    assert!(is_structured(&ideal_chsh_strategy(), 0.0));
    assert!(!is_structured(&classical_strategy(), 0.1));

    // Bob's second observable rotated by 0.1 rad about y.
    let phi = 0.1f64;
    let (s, co) = ((phi / 2.0).sin(), (phi / 2.0).cos());
    let rot = CMat::from_row_slice(2, 2, &[c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0)]);
    let ideal = ideal_chsh_strategy();
    let rotated_b1 =
        Reflection::new(rot.adjoint() * ideal.bob(1).matrix() * &rot).unwrap();
    let strat = ChshStrategy::new(
        ideal.psi().clone(),
        ideal.dims(),
        [ideal.alice(0).clone(), ideal.alice(1).clone()],
        [ideal.bob(0).clone(), rotated_b1],
    )
    .unwrap();
    let expected = correlation_value(&strat) >= TSIRELSON - 0.05;
    assert_eq!(is_structured(&strat, 0.05), expected);
}

#[test]
fn post_measurement_states_are_unit_and_zero_branches_error() {
    let ideal = ideal_chsh_strategy();
    for a in 0..2u8 {
        for b in 0..2u8 {
            let st = post_measurement_state(&ideal, a, 0, b, 0).unwrap();
            assert!((st.amplitudes().norm() - 1.0).abs() < 1e-12);
        }
    }
    // Deterministic strategy: the answer-(1, 1) branch never occurs.
    let mut amps = CVec::zeros(4);
    amps[0] = cr(1.0);
    let z = || Reflection::new(pauli_z()).unwrap();
    let s = ChshStrategy::new(
        PureState::new(amps).unwrap(),
        [2, 2, 1],
        [z(), z()],
        [z(), z()],
    )
    .unwrap();
    assert!(post_measurement_state(&s, 0, 1, 0, 1).is_err());
}

#[test]
fn bob_observables_are_the_g_conjugated_pair() {
    let ideal = ideal_chsh_strategy();
    let g = gate_g();
    let want0 = g.adjoint() * linalg_core::pauli_x() * &g;
    let want1 = g.adjoint() * pauli_z() * &g;
    assert!(linalg_core::max_abs_diff(ideal.bob(0).matrix(), &want0) < 1e-14);
    assert!(linalg_core::max_abs_diff(ideal.bob(1).matrix(), &want1) < 1e-14);
    let e = epr_pair();
    assert!((ideal.psi().inner(&e).unwrap().re - 1.0).abs() < 1e-14);
}

#[test]
fn answer_states_are_signed_eigenvectors_of_the_ideal_reflections() {
    let ideal = ideal_chsh_strategy();
    for (device, refl_of) in [
        (Device::Alice, [ideal.alice(0), ideal.alice(1)]),
        (Device::Bob, [ideal.bob(0), ideal.bob(1)]),
    ] {
        for q in 0..2u8 {
            for ans in 0..2u8 {
                let ket = answer_state(device, q, ans);
                let want = if ans == 0 { 1.0 } else { -1.0 };
                let image = refl_of[q as usize].matrix() * &ket;
                assert!((&image - ket.scale(want)).norm() < 1e-14);
            }
        }
    }
}

#[test]
fn answer_bases_rotate_zero_onto_the_named_ket() {
    for device in [Device::Alice, Device::Bob] {
        for q in 0..2u8 {
            for ans in 0..2u8 {
                let u = answer_basis(device, q, ans);
                assert!(linalg_core::is_unitary(&u, 1e-12));
                let mut zero = CVec::zeros(2);
                zero[0] = cr(1.0);
                assert!((&u * zero - answer_state(device, q, ans)).norm() < 1e-14);
            }
        }
    }
}
