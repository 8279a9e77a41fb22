mod common;

use chsh_game::Device;
use common::wobbled;
use linalg_core::max_abs_diff;
use sequential_strategies::{
    adversary, glue_to_ideal, glue_to_ideal_sampled, local_transcripts,
    make_multi_qubit_ideal, make_single_qubit_ideal, prepend_ancillas,
    simulation_distance, AdversaryKind, SequentialStrategy,
};

fn pipeline(s: &SequentialStrategy, seed: u64) -> SequentialStrategy {
    let single = make_single_qubit_ideal(s).unwrap();
    let multi = make_multi_qubit_ideal(&single).unwrap();
    glue_to_ideal_sampled(&multi, seed).unwrap().0
}

#[test]
fn honest_play_survives_the_whole_pipeline_exactly() {
    let s = adversary(AdversaryKind::Honest, 2).unwrap();
    let glued = pipeline(&s, 7);
    let reference = prepend_ancillas(&s, 2).unwrap();
    let report = simulation_distance(&reference, &glued).unwrap();
    assert!(report.max_gap < 1e-9, "gap {}", report.max_gap);
    assert!(report.weak_gap < 1e-9, "weak gap {}", report.weak_gap);
}

/// Three-round variant, checked statically (rules and state rather than the
/// joint evolution) to keep the memory footprint small.
#[test]
fn three_rounds_glue_to_the_same_rules_and_state() {
    let s = adversary(AdversaryKind::Honest, 3).unwrap();
    let glued = pipeline(&s, 7);
    let reference = prepend_ancillas(&s, 3).unwrap();
    assert_eq!(glued.dims(), reference.dims());

    for device in [Device::Alice, Device::Bob] {
        for j in 1..=3 {
            for h in local_transcripts(j - 1) {
                for q in 0..2u8 {
                    let diff = max_abs_diff(
                        glued.rule(device, j, &h, q).matrix(),
                        reference.rule(device, j, &h, q).matrix(),
                    );
                    assert!(diff < 1e-9, "{device:?} round {j} question {q}: {diff}");
                }
            }
        }
    }
    let overlap = glued.psi().inner(reference.psi()).unwrap().norm();
    assert!((overlap - 1.0).abs() < 1e-9, "states differ: overlap {overlap}");
}

#[test]
fn pipeline_distance_shrinks_with_the_perturbation() {
    let target = vec![(0, 0, 0, 0), (0, 0, 0, 0)];
    let mut gaps = Vec::new();
    for phi in [0.25, 0.15, 0.08, 0.0] {
        let s = wobbled(2, phi);
        let single = make_single_qubit_ideal(&s).unwrap();
        let multi = make_multi_qubit_ideal(&single).unwrap();
        let glued = glue_to_ideal(&multi, &target).unwrap();
        let reference = prepend_ancillas(&s, 2).unwrap();
        gaps.push(simulation_distance(&reference, &glued).unwrap().max_gap);
    }
    assert!(
        gaps.windows(2).all(|w| w[0] > w[1]),
        "gaps not strictly decreasing: {gaps:?}"
    );
    assert!(gaps[3] < 1e-9, "unperturbed input must be exact: {}", gaps[3]);
}
