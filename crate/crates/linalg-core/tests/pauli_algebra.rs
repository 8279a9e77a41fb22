//! Exhaustive checks of the Pauli string algebra against dense matrices.

use linalg_core::*;

const LETTERS: [PauliLetter; 4] = [
    PauliLetter::I,
    PauliLetter::X,
    PauliLetter::Y,
    PauliLetter::Z,
];

#[test]
fn single_qubit_products_match_matrices() {
    for &a in &LETTERS {
        for &b in &LETTERS {
            let pa = PauliString::new(vec![a]);
            let pb = PauliString::new(vec![b]);
            let prod = pa.mul(&pb).unwrap();
            let direct = pa.matrix() * pb.matrix();
            assert!(
                max_abs_diff(&prod.matrix(), &direct) < 1e-14,
                "{a} * {b} mismatch"
            );
        }
    }
}

#[test]
fn two_qubit_products_match_matrices() {
    for &a0 in &LETTERS {
        for &a1 in &LETTERS {
            for &b0 in &LETTERS {
                for &b1 in &LETTERS {
                    let pa = PauliString::new(vec![a0, a1]);
                    let pb = PauliString::new(vec![b0, b1]);
                    let prod = pa.mul(&pb).unwrap();
                    let direct = pa.matrix() * pb.matrix();
                    assert!(max_abs_diff(&prod.matrix(), &direct) < 1e-14);
                }
            }
        }
    }
}

#[test]
fn matrices_are_unitary_and_real_phase_is_hermitian() {
    for &a0 in &LETTERS {
        for &a1 in &LETTERS {
            for pow in 0..4u8 {
                let p = PauliString::with_phase(vec![a0, a1], pow);
                assert!(is_unitary(&p.matrix(), 1e-12));
                if pow == 0 || pow == 2 {
                    assert!(is_hermitian(&p.matrix(), 1e-12));
                }
            }
        }
    }
}

#[test]
fn weight_counts_non_identity_letters() {
    let p = PauliString::parse("IXIZY").unwrap();
    assert_eq!(p.n_qubits(), 5);
    assert_eq!(p.weight(), 3);
    assert_eq!(PauliString::identity(4).weight(), 0);
}

#[test]
fn parse_and_display_roundtrip() {
    let p = PauliString::parse("XZIY").unwrap();
    assert_eq!(p.to_string(), "XZIY");
    assert!(PauliString::parse("XQ").is_err());
}

#[test]
fn phase_wraps_modulo_four() {
    let x = PauliString::new(vec![PauliLetter::X]);
    let y = PauliString::new(vec![PauliLetter::Y]);
    // X Y = iZ, then (iZ)(Z) = i.
    let iz = x.mul(&y).unwrap();
    assert_eq!(iz.phase_pow(), 1);
    let z = PauliString::new(vec![PauliLetter::Z]);
    let phase_only = iz.mul(&z).unwrap();
    assert_eq!(phase_only.phase_pow(), 1);
    assert_eq!(phase_only.weight(), 0);
}
