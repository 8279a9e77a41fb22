//! Custom strategy instances shared across the integration tests.
#![allow(dead_code)]

use chsh_game::{ideal_chsh_strategy, Device};
use linalg_core::{c, cr, identity, kron, CMat, CVec, PureState, Reflection};
use sequential_strategies::SequentialStrategy;

/// Reflection acting as `op` on qubit j (1-based) of an n-qubit register.
pub fn at_qubit(n: usize, j: usize, op: &CMat) -> Reflection {
    let m = kron(
        &identity(1 << (j - 1)),
        &kron(op, &identity(1 << (n - j))),
    );
    Reflection::new(m).expect("embedded reflection")
}

/// n EPR pairs, pair ordering (A_i, B_i).
pub fn epr_chain(n: usize) -> PureState {
    let d = 1usize << n;
    let mut v = CVec::zeros(d * d);
    let amp = cr(1.0 / (d as f64).sqrt());
    for i in 0..d {
        v[i * d + i] = amp;
    }
    PureState::new(v).expect("unit norm")
}

pub fn ry(phi: f64) -> CMat {
    let (s, co) = (0.5 * phi).sin_cos();
    CMat::from_row_slice(2, 2, &[cr(co), cr(-s), cr(s), cr(co)])
}

/// Ideal play on qubit j at round j, with every reflection additionally
/// conjugated by a rotation whose angle differs per device and question.
/// The wobble leaves the strategy structured at scale phi but moves every
/// block angle off pi/4 except at phi = 0.
pub fn wobbled(n: usize, phi: f64) -> SequentialStrategy {
    let ideal = ideal_chsh_strategy();
    let build = |device: Device| -> Vec<[Reflection; 2]> {
        let pair = match device {
            Device::Alice => [ideal.alice(0).clone(), ideal.alice(1).clone()],
            Device::Bob => [ideal.bob(0).clone(), ideal.bob(1).clone()],
        };
        let tilt = match device {
            Device::Alice => [0.0, phi / 3.0],
            Device::Bob => [phi, -0.5 * phi],
        };
        (1..=n)
            .map(|j| {
                [0usize, 1].map(|q| {
                    let r = ry(tilt[q]);
                    let m = &r * pair[q].matrix() * r.adjoint();
                    at_qubit(n, j, &m)
                })
            })
            .collect()
    };
    let a = build(Device::Alice);
    let b = build(Device::Bob);
    SequentialStrategy::from_rules(
        n,
        [1 << n, 1 << n, 1],
        epr_chain(n),
        move |j, _h, q| a[j - 1][(q & 1) as usize].clone(),
        move |j, _h, q| b[j - 1][(q & 1) as usize].clone(),
    )
    .expect("wobbled instance is well formed")
}

/// Ideal two-round play on separate qubits, except that Bob's round-2 pair
/// is conjugated by exp(-i eta XX) across his two qubits, entangling the
/// round-2 qubit's location with round 1's. Single-qubit ideal for every
/// eta, multi-qubit ideal only at eta = 0.
pub fn coupled_rounds(eta: f64) -> SequentialStrategy {
    let n = 2;
    let ideal = ideal_chsh_strategy();
    let xx = kron(&linalg_core::pauli_x(), &linalg_core::pauli_x());
    let u = identity(4) * cr(eta.cos()) + &xx * c(0.0, -eta.sin());
    let a = [
        [at_qubit(n, 1, ideal.alice(0).matrix()), at_qubit(n, 1, ideal.alice(1).matrix())],
        [at_qubit(n, 2, ideal.alice(0).matrix()), at_qubit(n, 2, ideal.alice(1).matrix())],
    ];
    let b = [
        [at_qubit(n, 1, ideal.bob(0).matrix()), at_qubit(n, 1, ideal.bob(1).matrix())],
        [0u8, 1].map(|q| {
            let m = &u * at_qubit(n, 2, ideal.bob(q).matrix()).matrix() * u.adjoint();
            Reflection::new(m).expect("conjugated reflection")
        }),
    ];
    SequentialStrategy::from_rules(
        n,
        [4, 4, 1],
        epr_chain(n),
        move |j, _h, q| a[j - 1][(q & 1) as usize].clone(),
        move |j, _h, q| b[j - 1][(q & 1) as usize].clone(),
    )
    .expect("coupled instance is well formed")
}

/// Three EPR pairs, two rounds. Alice plays round 2 on her third qubit
/// instead of her second exactly when her round-1 view was (question 1,
/// answer 1), a quarter-probability branch; Bob always plays his second.
pub fn rare_branch() -> SequentialStrategy {
    let n = 3usize;
    let ideal = ideal_chsh_strategy();
    let alice_at = |j: usize| {
        [
            at_qubit(n, j, ideal.alice(0).matrix()),
            at_qubit(n, j, ideal.alice(1).matrix()),
        ]
    };
    let bob_at = |j: usize| {
        [
            at_qubit(n, j, ideal.bob(0).matrix()),
            at_qubit(n, j, ideal.bob(1).matrix()),
        ]
    };
    let a = [alice_at(1), alice_at(2), alice_at(3)];
    let b = [bob_at(1), bob_at(2)];
    SequentialStrategy::from_rules(
        2,
        [8, 8, 1],
        epr_chain(3),
        move |j, h, q| {
            let slot = if j == 2 && h[0] == (1, 1) { 2 } else { j - 1 };
            a[slot][(q & 1) as usize].clone()
        },
        move |j, _h, q| b[j - 1][(q & 1) as usize].clone(),
    )
    .expect("rare-branch instance is well formed")
}
