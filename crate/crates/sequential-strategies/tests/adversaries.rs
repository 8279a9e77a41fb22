use linalg_core::max_abs_diff;
use sequential_strategies::{
    adversary, adversary_by_name, evolve, AdversaryKind, Error,
};

const COS2: f64 = 0.5 + 0.25 * std::f64::consts::SQRT_2;

fn win_mass(s: &sequential_strategies::SequentialStrategy, n: usize) -> f64 {
    evolve(s, n)
        .unwrap()
        .blocks()
        .iter()
        .filter(|(t, _)| {
            let (a, b, x, y) = *t.last().unwrap();
            x ^ y == a & b
        })
        .map(|(_, rho)| rho.trace_re())
        .sum()
}

#[test]
fn classical_play_wins_exactly_three_quarters() {
    let s = adversary(AdversaryKind::Classical, 1).unwrap();
    assert!((win_mass(&s, 1) - 0.75).abs() < 1e-12);
}

#[test]
fn depolarizing_noise_interpolates_the_win_rate() {
    for p in [0.0, 0.1, 0.37, 1.0] {
        let s = adversary(AdversaryKind::Depolarized(p), 1).unwrap();
        let expect = (1.0 - p) * COS2 + p * 0.5;
        let got = win_mass(&s, 1);
        assert!((got - expect).abs() < 1e-9, "p={p}: {got} vs {expect}");
    }
    assert!(adversary(AdversaryKind::Depolarized(1.5), 1).is_err());
    assert!(adversary(AdversaryKind::Depolarized(-0.1), 1).is_err());
}

/// With no noise the third register factors out: tracing it away from every
/// block recovers the honest block for the same transcript.
#[test]
fn zero_noise_reduces_to_honest_play() {
    let noisy = adversary(AdversaryKind::Depolarized(0.0), 2).unwrap();
    let honest = adversary(AdversaryKind::Honest, 2).unwrap();
    let en = evolve(&noisy, 2).unwrap();
    let eh = evolve(&honest, 2).unwrap();
    assert_eq!(en.blocks().len(), eh.blocks().len());
    for (t, rho) in en.blocks() {
        let reduced = rho.partial_trace(&[4, 4, 16], &[0, 1]).unwrap();
        let reference = eh.block(t).expect("matching transcript");
        assert!(max_abs_diff(reduced.matrix(), reference.matrix()) < 1e-12);
    }
}

#[test]
fn shifting_qubits_leaves_the_score_unchanged() {
    let shift = adversary(AdversaryKind::QubitShift, 2).unwrap();
    let honest = adversary(AdversaryKind::Honest, 2).unwrap();
    let es = evolve(&shift, 2).unwrap();
    let eh = evolve(&honest, 2).unwrap();
    for (t, rho) in es.blocks() {
        let reference = eh.block(t).expect("matching transcript");
        assert!((rho.trace_re() - reference.trace_re()).abs() < 1e-12);
    }
}

/// The adaptive device plays honestly until its own answers contain a 1,
/// then locks onto answer 0 regardless of the question.
#[test]
fn adaptive_devices_freeze_after_the_first_one() {
    let s = adversary(AdversaryKind::TranscriptAdaptive, 2).unwrap();
    let ev = evolve(&s, 2).unwrap();
    for (t, rho) in ev.blocks() {
        let (_, _, x1, y1) = t[0];
        let (_, _, x2, y2) = t[1];
        if x1 == 1 && x2 == 1 {
            assert!(rho.trace_re() < 1e-12, "Alice answered 1 after freezing: {t:?}");
        }
        if y1 == 1 && y2 == 1 {
            assert!(rho.trace_re() < 1e-12, "Bob answered 1 after freezing: {t:?}");
        }
    }
    // Freezing costs: round-2 wins fall strictly below the quantum value.
    let round2: f64 = ev
        .blocks()
        .iter()
        .filter(|(t, _)| {
            let (a, b, x, y) = t[1];
            x ^ y == a & b
        })
        .map(|(_, rho)| rho.trace_re())
        .sum();
    assert!(round2 < COS2 - 0.01, "round-2 win mass {round2}");
    // Round 1 is still honest.
    let round1: f64 = ev
        .blocks()
        .iter()
        .filter(|(t, _)| {
            let (a, b, x, y) = t[0];
            x ^ y == a & b
        })
        .map(|(_, rho)| rho.trace_re())
        .sum();
    assert!((round1 - COS2).abs() < 1e-9);
}

#[test]
fn names_parse_with_and_without_parameters() {
    assert!(adversary_by_name("honest", 2).is_ok());
    assert!(adversary_by_name("classical", 1).is_ok());
    assert!(adversary_by_name("depolarized", 1).is_ok());
    assert!(adversary_by_name("depolarized:0.25", 1).is_ok());
    assert!(adversary_by_name("rotated:0.3", 2).is_ok());
    assert!(adversary_by_name("qubit-shift", 3).is_ok());
    assert!(adversary_by_name("adaptive", 2).is_ok());

    assert!(matches!(
        adversary_by_name("zeus", 1),
        Err(Error::UnknownAdversary(_))
    ));
    assert!(matches!(
        adversary_by_name("honest:1", 1),
        Err(Error::Strategy(_))
    ));
    assert!(matches!(
        adversary_by_name("rotated:sideways", 1),
        Err(Error::Strategy(_))
    ));
}

#[test]
fn size_limits_are_enforced() {
    assert!(adversary(AdversaryKind::Honest, 16).is_err());
    assert!(adversary(AdversaryKind::Depolarized(0.5), 11).is_err(), "4^n third register");
}
