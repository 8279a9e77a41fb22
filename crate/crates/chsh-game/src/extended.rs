//! The nine-direction extension of the CHSH game.
//!
//! Each device measures spin observables along nine fixed Bloch directions:
//! the three axes and the six diagonal directions between pairs of axes.
//! Three CHSH games embed into the direction pairs, one per coordinate
//! plane, and together they pin down all three Pauli observables on both
//! sides. The y axis is special: complex conjugation flips Y but fixes the
//! shared state, so Y is only determined up to a sign witnessed by a
//! reflection on the ancilla. The analyzer extracts that reflection per
//! device and reports how well the devices' y observables match it.

use std::collections::BTreeMap;

use linalg_core::{
    cr, embed_factor, gate_g, hadamard, identity, jordan_decompose, kron, pauli_x, pauli_y,
    pauli_z, CMat, CVec, PureState, Reflection, VALIDATION_TOL,
};

use crate::error::{Error, Result};
use crate::rigidity::{analyze_frames, extend_operator, rigidity_analyze, RigidityReport};
use crate::strategy::{embed_pair, ChshStrategy};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum BlochDirection {
    X,
    Y,
    Z,
    PlusXy,
    MinusXy,
    PlusXz,
    MinusXz,
    PlusYz,
    MinusYz,
}

impl BlochDirection {
    pub const ALL: [BlochDirection; 9] = [
        BlochDirection::X,
        BlochDirection::Y,
        BlochDirection::Z,
        BlochDirection::PlusXy,
        BlochDirection::MinusXy,
        BlochDirection::PlusXz,
        BlochDirection::MinusXz,
        BlochDirection::PlusYz,
        BlochDirection::MinusYz,
    ];

    /// Unit vector (x, y, z) of the direction.
    pub fn vector(self) -> [f64; 3] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            BlochDirection::X => [1.0, 0.0, 0.0],
            BlochDirection::Y => [0.0, 1.0, 0.0],
            BlochDirection::Z => [0.0, 0.0, 1.0],
            BlochDirection::PlusXy => [h, h, 0.0],
            BlochDirection::MinusXy => [h, -h, 0.0],
            BlochDirection::PlusXz => [h, 0.0, h],
            BlochDirection::MinusXz => [h, 0.0, -h],
            BlochDirection::PlusYz => [0.0, h, h],
            BlochDirection::MinusYz => [0.0, h, -h],
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BlochDirection::X => "x",
            BlochDirection::Y => "y",
            BlochDirection::Z => "z",
            BlochDirection::PlusXy => "+xy",
            BlochDirection::MinusXy => "-xy",
            BlochDirection::PlusXz => "+xz",
            BlochDirection::MinusXz => "-xz",
            BlochDirection::PlusYz => "+yz",
            BlochDirection::MinusYz => "-yz",
        }
    }
}

/// Spin observable v . (X, Y, Z) for a unit vector v.
pub fn bloch_reflection(v: [f64; 3]) -> Result<Reflection> {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if (n - 1.0).abs() > 1e-9 {
        return Err(Error::Strategy(format!(
            "Bloch vector has norm {n}, expected 1"
        )));
    }
    let m = pauli_x().scale(v[0]) + pauli_y().scale(v[1]) + pauli_z().scale(v[2]);
    Reflection::new(m).map_err(Error::from)
}

#[derive(Clone)]
pub struct ExtendedStrategy {
    psi: PureState,
    dims: [usize; 3],
    alice: BTreeMap<BlochDirection, Reflection>,
    bob: BTreeMap<BlochDirection, Reflection>,
}

impl ExtendedStrategy {
    pub fn new(
        psi: PureState,
        dims: [usize; 3],
        alice: BTreeMap<BlochDirection, Reflection>,
        bob: BTreeMap<BlochDirection, Reflection>,
    ) -> Result<Self> {
        let total: usize = dims.iter().product();
        if total != psi.dim() {
            return Err(Error::Strategy(format!(
                "factor dims {dims:?} multiply to {total} but the state has dim {}",
                psi.dim()
            )));
        }
        if dims.iter().any(|&d| d == 0) {
            return Err(Error::Strategy("zero-dimensional factor".into()));
        }
        for (map, dim, who) in [(&alice, dims[0], "alice"), (&bob, dims[1], "bob")] {
            for dir in BlochDirection::ALL {
                match map.get(&dir) {
                    None => {
                        return Err(Error::Strategy(format!(
                            "{who} is missing direction {}",
                            dir.label()
                        )))
                    }
                    Some(r) if r.dim() != dim => {
                        return Err(Error::Strategy(format!(
                            "{who}[{}] acts on dim {} but the factor has dim {dim}",
                            dir.label(),
                            r.dim()
                        )))
                    }
                    Some(_) => {}
                }
            }
        }
        Ok(ExtendedStrategy {
            psi,
            dims,
            alice,
            bob,
        })
    }

    pub fn psi(&self) -> &PureState {
        &self.psi
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn alice(&self, dir: BlochDirection) -> &Reflection {
        &self.alice[&dir]
    }

    pub fn bob(&self, dir: BlochDirection) -> &Reflection {
        &self.bob[&dir]
    }

    /// Probability of answers (x, y) given measured directions (da, db).
    pub fn probability(&self, da: BlochDirection, db: BlochDirection, x: u8, y: u8) -> f64 {
        let pa = self.alice(da).outcome_projector(x);
        let pb = self.bob(db).outcome_projector(y);
        let proj = embed_pair(&pa, &pb, &self.dims);
        (&proj * self.psi.amplitudes()).norm_squared()
    }
}

/// EPR pair with the same nine spin observables on both devices.
pub fn ideal_extended_strategy() -> ExtendedStrategy {
    let map: BTreeMap<BlochDirection, Reflection> = BlochDirection::ALL
        .into_iter()
        .map(|d| {
            (
                d,
                bloch_reflection(d.vector()).expect("directions are unit vectors"),
            )
        })
        .collect();
    ExtendedStrategy::new(linalg_core::epr_pair(), [2, 2, 1], map.clone(), map)
        .expect("ideal extended strategy is well formed")
}

/// Answer distribution of the ideal strategy given measured directions.
///
/// The shared state correlates spins as <R(a) x R(b)> = axbx - ayby + azbz,
/// and both single-device marginals are unbiased.
pub fn ideal_extended_probability(da: BlochDirection, db: BlochDirection, x: u8, y: u8) -> f64 {
    let a = da.vector();
    let b = db.vector();
    let k = a[0] * b[0] - a[1] * b[1] + a[2] * b[2];
    let sign = if (x ^ y) & 1 == 1 { -1.0 } else { 1.0 };
    0.25 * (1.0 + sign * k)
}

/// Largest deviation of any conditional answer probability from ideal.
pub fn extended_structured_gap(s: &ExtendedStrategy) -> f64 {
    let mut gap = 0.0f64;
    for da in BlochDirection::ALL {
        for db in BlochDirection::ALL {
            for x in 0..2u8 {
                for y in 0..2u8 {
                    let diff =
                        (s.probability(da, db, x, y) - ideal_extended_probability(da, db, x, y))
                            .abs();
                    gap = gap.max(diff);
                }
            }
        }
    }
    gap
}

fn negated(r: &Reflection) -> Reflection {
    Reflection::new(r.matrix().scale(-1.0)).expect("negation preserves reflections")
}

/// One of the three CHSH games embedded in the direction pairs, indexed by
/// the coordinate plane it lives in: 0 = xz, 1 = yz, 2 = xy. Orientations
/// are chosen so the ideal strategy reaches correlation 2 sqrt 2.
pub fn sub_game(s: &ExtendedStrategy, plane: usize) -> Result<ChshStrategy> {
    use BlochDirection::*;
    let (alice, bob) = match plane {
        0 => (
            [s.alice(Z).clone(), s.alice(X).clone()],
            [s.bob(PlusXz).clone(), negated(s.bob(MinusXz))],
        ),
        1 => (
            [s.alice(Z).clone(), s.alice(Y).clone()],
            [negated(s.bob(MinusYz)), s.bob(PlusYz).clone()],
        ),
        2 => (
            [s.alice(X).clone(), negated(s.alice(Y))],
            [s.bob(PlusXy).clone(), s.bob(MinusXy).clone()],
        ),
        _ => {
            return Err(Error::Strategy(format!(
                "sub-game plane {plane} out of range 0..3"
            )))
        }
    };
    ChshStrategy::new(s.psi().clone(), s.dims(), alice, bob)
}

#[derive(Clone, Debug)]
pub struct ExtendedRigidityReport {
    /// Rigidity analyses of the xz, yz, and xy sub-games, in that order.
    pub sub_games: [RigidityReport; 3],
    /// A sub-game whose correlation is at most the classical bound 2 gives
    /// no qubit structure to build on.
    pub degenerate_sub_games: [bool; 3],
    /// Set when Alice's y observable shares eigenlines with Z x I in the
    /// xz frame, so no block change of basis relates the two frames.
    pub alice_frame_degenerate: bool,
    pub alice_y_residual: Option<f64>,
    pub bob_x_residual: Option<f64>,
    pub bob_z_residual: Option<f64>,
    pub bob_y_residual: Option<f64>,
    /// <psi_x| Delta_A x Delta_B |psi_x> on the normalized ancilla state;
    /// near 1 when the two y signs agree on the state.
    pub delta_overlap: Option<f64>,
}

/// Ancilla-space reflection rounding i(U - U^dag)/2 for the sign operator.
fn round_sign_operator(u: &CMat) -> Result<Reflection> {
    let nb = u.nrows();
    let s = (u - u.adjoint()) * linalg_core::c(0.0, 0.5);
    let mut e0 = CVec::zeros(nb);
    e0[0] = cr(1.0);
    let phi = PureState::new(e0).expect("basis vector");
    let (delta, _) = linalg_core::hermitian_to_reflection(&s, &phi, &identity(nb))?;
    Ok(delta)
}

/// Rigidity analysis of the full nine-direction strategy.
///
/// Runs the three embedded CHSH games, fixes frames from the xz game,
/// aligns Bob's qubit with the lab axes, and measures how far each device's
/// remaining observables sit from the matching Pauli on the extracted
/// qubit. The y observables are compared against Y x Delta for an extracted
/// ancilla sign reflection Delta per device.
pub fn extended_rigidity_metrics(s: &ExtendedStrategy) -> Result<ExtendedRigidityReport> {
    let games = [sub_game(s, 0)?, sub_game(s, 1)?, sub_game(s, 2)?];
    let sub_reports = [
        rigidity_analyze(&games[0])?,
        rigidity_analyze(&games[1])?,
        rigidity_analyze(&games[2])?,
    ];
    let degenerate = [
        sub_reports[0].correlation <= 2.0 + VALIDATION_TOL,
        sub_reports[1].correlation <= 2.0 + VALIDATION_TOL,
        sub_reports[2].correlation <= 2.0 + VALIDATION_TOL,
    ];

    let mut report = ExtendedRigidityReport {
        sub_games: sub_reports,
        degenerate_sub_games: degenerate,
        alice_frame_degenerate: false,
        alice_y_residual: None,
        bob_x_residual: None,
        bob_z_residual: None,
        bob_y_residual: None,
        delta_overlap: None,
    };
    if degenerate[0] {
        return Ok(report);
    }

    let frames = analyze_frames(&games[0])?;
    let dims_ext = frames.dims_ext;
    let (nba, nbb) = (frames.a.n_blocks, frames.b.n_blocks);

    // The xz frame sends Bob's game observables to (Z +- X)/sqrt 2 on the
    // qubit; one extra pi/8 rotation aligns his axes with the lab's.
    let hg = hadamard() * gate_g();
    let va = frames.a.v.clone();
    let vb_lab = &frames.b.v * kron(&hg, &identity(nbb));

    let frame_op_a = |dir: BlochDirection| {
        va.adjoint() * extend_operator(s.alice(dir).matrix(), frames.a.dim_ext) * &va
    };
    let frame_op_b = |dir: BlochDirection| {
        vb_lab.adjoint() * extend_operator(s.bob(dir).matrix(), frames.b.dim_ext) * &vb_lab
    };
    let basis_change = kron(
        &kron(&va.adjoint(), &vb_lab.adjoint()),
        &identity(dims_ext[2]),
    );
    let psi_al = &basis_change * &frames.psi_ext;

    let residual = |op_defect: &CMat, pos: usize| {
        (embed_factor(op_defect, &dims_ext, pos).expect("frame embed") * &psi_al).norm()
    };

    let rx_b = frame_op_b(BlochDirection::X);
    let rz_b = frame_op_b(BlochDirection::Z);
    report.bob_x_residual = Some(residual(&(&rx_b - kron(&pauli_x(), &identity(nbb))), 1));
    report.bob_z_residual = Some(residual(&(&rz_b - kron(&pauli_z(), &identity(nbb))), 1));

    // Bob's y sign reflection comes straight from the off-diagonal qubit
    // block of his y observable in the aligned frame.
    let ry_b = frame_op_b(BlochDirection::Y);
    let b_block = ry_b.view((0, nbb), (nbb, nbb)).into_owned();
    let delta_b = round_sign_operator(&b_block)?;
    report.bob_y_residual = Some(residual(
        &(&ry_b - kron(&pauli_y(), delta_b.matrix())),
        1,
    ));

    // Alice's comes from the change of basis between the xz frame and the
    // yz frame, which is block diagonal over the Z x I eigenspaces.
    let ry_a = frame_op_a(BlochDirection::Y);
    let z_ref = Reflection::new(kron(&pauli_z(), &identity(nba)))?;
    let ry_ref = Reflection::new(ry_a.clone())?;
    let blocks = jordan_decompose(&z_ref, &ry_ref)?;
    if blocks.iter().any(|b| b.padded()) {
        report.alice_frame_degenerate = true;
        return Ok(report);
    }
    let mut w0 = CMat::zeros(nba, nba);
    let mut w1 = CMat::zeros(nba, nba);
    for (k, b) in blocks.iter().enumerate() {
        let basis = b.basis();
        for i in 0..nba {
            w0[(i, k)] = basis[(i, 0)];
            w1[(i, k)] = basis[(nba + i, 1)];
        }
    }
    let u = w0 * w1.adjoint();
    let delta_a = round_sign_operator(&u)?;
    report.alice_y_residual = Some(residual(
        &(&ry_a - kron(&pauli_y(), delta_a.matrix())),
        0,
    ));

    // Collapse the qubit pair against the shared EPR target; what remains
    // is the ancilla state the two sign reflections act on.
    let dc = dims_ext[2];
    let mut w = CVec::zeros(nba * nbb * dc);
    for ka in 0..nba {
        for kb in 0..nbb {
            for c in 0..dc {
                let mut acc = cr(0.0);
                for q in 0..2 {
                    let idx = ((q * nba + ka) * dims_ext[1] + (q * nbb + kb)) * dc + c;
                    acc += psi_al[idx];
                }
                w[(ka * nbb + kb) * dc + c] = acc.scale(std::f64::consts::FRAC_1_SQRT_2);
            }
        }
    }
    let wn = w.norm();
    if wn > 1e-9 {
        let psix = w.scale(1.0 / wn);
        let op = kron(&kron(delta_a.matrix(), delta_b.matrix()), &identity(dc));
        report.delta_overlap = Some(psix.dotc(&(&op * &psix)).re);
    }
    Ok(report)
}
