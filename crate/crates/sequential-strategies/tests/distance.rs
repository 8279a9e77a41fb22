use linalg_core::{cr, kron, trace_norm, CMat, CVec};
use sequential_strategies::{
    adversary, conjugate_strategy, simulation_distance, AdversaryKind, Error,
    SequentialStrategy,
};

fn honest(n: usize) -> SequentialStrategy {
    adversary(AdversaryKind::Honest, n).unwrap()
}

#[test]
fn identical_strategies_are_at_distance_zero() {
    let report = simulation_distance(&honest(2), &honest(2)).unwrap();
    assert!(report.max_gap < 1e-12);
    assert!(report.weak_gap < 1e-12);
    assert!(report.alice_gaps.iter().chain(&report.bob_gaps).all(|&g| g < 1e-12));
}

/// The qubit-shift strategy plays the same games in a permuted basis. It
/// sits at positive distance from the honest strategy until the comparison
/// is preceded by the right basis change, after which it vanishes.
#[test]
fn basis_change_explains_the_shift_strategy() {
    let shift = adversary(AdversaryKind::QubitShift, 2).unwrap();
    let raw = simulation_distance(&honest(2), &shift).unwrap();
    assert!(raw.max_gap > 1e-3, "raw gap {}", raw.max_gap);

    // sigma swaps Bob's two qubits, so undo it with the bit-swap unitary.
    let swap = CMat::from_fn(4, 4, |i, j| {
        let swapped = ((j & 1) << 1) | (j >> 1);
        cr(if i == swapped { 1.0 } else { 0.0 })
    });
    let aligned = conjugate_strategy(&shift, &linalg_core::identity(4), &swap).unwrap();
    let fixed = simulation_distance(&honest(2), &aligned).unwrap();
    assert!(fixed.max_gap < 1e-9, "aligned gap {}", fixed.max_gap);
    assert!(fixed.weak_gap < 1e-9);
}

/// One-round check of the gap computation against a dense reconstruction:
/// build every conditioned vector explicitly, form the rank-two residuals,
/// and sum their trace norms.
#[test]
fn gaps_match_a_dense_reconstruction() {
    let phi = 0.4;
    let s = honest(1);
    let t = adversary(AdversaryKind::Rotated(phi), 1).unwrap();
    let report = simulation_distance(&s, &t).unwrap();
    assert!(report.alice_gaps[0] < 1e-12, "alice untouched by the rotation");

    let amp = cr(std::f64::consts::FRAC_1_SQRT_2);
    let mut bob_oracle = 0.0;
    for b in 0..2u8 {
        for y in 0..2u8 {
            let pu = kron(&linalg_core::identity(2), &s.bob_rule(1, &[], b).outcome_projector(y));
            let pw = kron(&linalg_core::identity(2), &t.bob_rule(1, &[], b).outcome_projector(y));
            let u: CVec = pu * s.psi().amplitudes() * amp;
            let w: CVec = pw * t.psi().amplitudes() * amp;
            let residual = &u * u.adjoint() - &w * w.adjoint();
            bob_oracle += trace_norm(&residual).unwrap();
        }
    }
    assert!(
        (report.bob_gaps[0] - bob_oracle).abs() < 1e-10,
        "gap {} vs dense oracle {bob_oracle}",
        report.bob_gaps[0]
    );

    let mut weak_oracle = 0.0;
    for a in 0..2u8 {
        for x in 0..2u8 {
            for b in 0..2u8 {
                for y in 0..2u8 {
                    let block = |st: &SequentialStrategy| -> CVec {
                        let pa = kron(
                            &st.alice_rule(1, &[], a).outcome_projector(x),
                            &linalg_core::identity(2),
                        );
                        let pb = kron(
                            &linalg_core::identity(2),
                            &st.bob_rule(1, &[], b).outcome_projector(y),
                        );
                        pb * (pa * st.psi().amplitudes()) * cr(0.5)
                    };
                    let u = block(&s);
                    let w = block(&t);
                    let residual = &u * u.adjoint() - &w * w.adjoint();
                    weak_oracle += trace_norm(&residual).unwrap();
                }
            }
        }
    }
    assert!(
        (report.weak_gap - weak_oracle).abs() < 1e-10,
        "weak {} vs dense oracle {weak_oracle}",
        report.weak_gap
    );
}

#[test]
fn rotation_gap_grows_continuously_from_zero() {
    let mut last = 0.0;
    for phi in [0.0, 0.05, 0.15, 0.3] {
        let t = adversary(AdversaryKind::Rotated(phi), 2).unwrap();
        let gap = simulation_distance(&honest(2), &t).unwrap().max_gap;
        if phi == 0.0 {
            assert!(gap < 1e-12);
        } else {
            assert!(gap > last, "gap {gap} at phi {phi} not above {last}");
        }
        last = gap;
    }
    assert!(last < 1.0, "small rotations stay well below maximal gap");
}

#[test]
fn mismatched_strategies_are_rejected() {
    assert!(matches!(
        simulation_distance(&honest(1), &honest(2)),
        Err(Error::Strategy(_))
    ));
    let classical = adversary(AdversaryKind::Classical, 2).unwrap();
    assert!(matches!(
        simulation_distance(&classical, &honest(2)),
        Err(Error::Strategy(_))
    ));
}
