//! Distance of a CHSH strategy from the ideal one, made quantitative.
//!
//! Each device's two observables decompose into joint 2x2 blocks. Writing
//! the device space as qubit x ancilla in that block basis sends the
//! question-0 observable to Z exactly and leaves all deviation from the
//! ideal in the question-1 observable, the state overlap, and the block
//! angles. Devices whose observables share eigenlines get explicit padding
//! directions appended so every block still spans a full qubit.

use linalg_core::{
    block_r1, embed_factor, hadamard, identity, jordan_decompose, kron, pauli_x, pauli_z, CMat,
    CVec, Reflection,
};

use crate::error::{Error, Result};
use crate::strategy::{correlation_value, ChshStrategy, Device, TSIRELSON};

#[derive(Clone, Copy, Debug)]
pub struct BlockSummary {
    pub theta: f64,
    pub weight: f64,
    pub padded: bool,
}

#[derive(Clone, Debug)]
pub struct RigidityReport {
    pub correlation: f64,
    /// max(0, 2 sqrt 2 - correlation).
    pub epsilon: f64,
    /// <psi| M_0^2 + M_1^2 |psi> for the two defect operators.
    pub m_residual: f64,
    pub alice_x_residual: f64,
    pub bob_x_residual: f64,
    pub state_residual: f64,
    pub alice_blocks: Vec<BlockSummary>,
    pub bob_blocks: Vec<BlockSummary>,
}

pub(crate) struct DeviceFrame {
    /// Unitary on the padded device space; column q * n_blocks + k is body
    /// q of block k, so the frame factors as qubit x block index.
    pub v: CMat,
    pub dim_ext: usize,
    pub n_blocks: usize,
    pub angles: Vec<f64>,
    pub weights: Vec<f64>,
    pub padded_flags: Vec<bool>,
}

impl DeviceFrame {
    /// The question-1 observable in frame coordinates.
    pub fn frame_r1(&self) -> CMat {
        let nb = self.n_blocks;
        let mut out = CMat::zeros(2 * nb, 2 * nb);
        for (k, &theta) in self.angles.iter().enumerate() {
            let blk = block_r1(theta);
            for q in 0..2 {
                for qq in 0..2 {
                    out[(q * nb + k, qq * nb + k)] = blk[(q, qq)];
                }
            }
        }
        out
    }
}

pub(crate) struct Frames {
    pub a: DeviceFrame,
    pub b: DeviceFrame,
    pub dims_ext: [usize; 3],
    /// Original state embedded in the padded spaces.
    pub psi_ext: CVec,
    /// State in frame coordinates, factors (qubit_A x anc_A, qubit_B x anc_B, C).
    pub psi_t: CVec,
}

fn device_frame(
    r0: &Reflection,
    r1: &Reflection,
    weight_of: impl Fn(&CMat) -> f64,
) -> Result<DeviceFrame> {
    let d = r0.dim();
    let blocks = jordan_decompose(r0, r1)?;
    let nb = blocks.len();
    let n_pad = blocks.iter().filter(|b| b.padded()).count();
    let dim_ext = d + n_pad;
    debug_assert_eq!(2 * nb, dim_ext);

    let mut v = CMat::zeros(dim_ext, dim_ext);
    let mut next_pad = d;
    let mut angles = Vec::with_capacity(nb);
    let mut weights = Vec::with_capacity(nb);
    let mut padded_flags = Vec::with_capacity(nb);
    for (k, b) in blocks.iter().enumerate() {
        for q in 0..2 {
            let col = b.basis().column(q);
            if col.norm() > 0.5 {
                for i in 0..d {
                    v[(i, q * nb + k)] = col[i];
                }
            } else {
                v[(next_pad, q * nb + k)] = linalg_core::cr(1.0);
                next_pad += 1;
            }
        }
        angles.push(b.theta());
        weights.push(weight_of(&b.projector()));
        padded_flags.push(b.padded());
    }
    Ok(DeviceFrame {
        v,
        dim_ext,
        n_blocks: nb,
        angles,
        weights,
        padded_flags,
    })
}

/// Extends an operator to padded coordinates, acting as identity there.
pub(crate) fn extend_operator(m: &CMat, dim_ext: usize) -> CMat {
    let d = m.nrows();
    let mut out = identity(dim_ext);
    for i in 0..d {
        for j in 0..d {
            out[(i, j)] = m[(i, j)];
        }
    }
    out
}

pub(crate) fn analyze_frames(s: &ChshStrategy) -> Result<Frames> {
    let dims = s.dims();
    let psi = s.psi().amplitudes();

    let weight_a = |proj: &CMat| {
        let full = embed_factor(proj, &dims, 0).expect("dims checked");
        (&full * psi).norm_squared()
    };
    let weight_b = |proj: &CMat| {
        let full = embed_factor(proj, &dims, 1).expect("dims checked");
        (&full * psi).norm_squared()
    };
    let fa = device_frame(s.alice(0), s.alice(1), weight_a)?;
    let fb = device_frame(s.bob(0), s.bob(1), weight_b)?;

    let dims_ext = [fa.dim_ext, fb.dim_ext, dims[2]];
    let total_ext: usize = dims_ext.iter().product();
    let mut psi_ext = CVec::zeros(total_ext);
    for ia in 0..dims[0] {
        for ib in 0..dims[1] {
            for ic in 0..dims[2] {
                let src = (ia * dims[1] + ib) * dims[2] + ic;
                let dst = (ia * dims_ext[1] + ib) * dims_ext[2] + ic;
                psi_ext[dst] = psi[src];
            }
        }
    }
    let basis_change = kron(
        &kron(&fa.v.adjoint(), &fb.v.adjoint()),
        &identity(dims_ext[2]),
    );
    let psi_t = &basis_change * &psi_ext;
    Ok(Frames {
        a: fa,
        b: fb,
        dims_ext,
        psi_ext,
        psi_t,
    })
}

/// State of the ideal strategy in its own frame coordinates, a 4-vector.
pub(crate) fn ideal_frame_target() -> CVec {
    let ideal = crate::strategy::ideal_chsh_strategy();
    let f = analyze_frames(&ideal).expect("ideal strategy decomposes");
    f.psi_t
}

/// Frame-coordinates overlap with the ideal two-qubit state: the vector
/// w on anc_A x anc_B x C maximizing |<target x w | psi_t>|, unnormalized.
pub(crate) fn qubit_overlap_vector(frames: &Frames, target: &CVec) -> CVec {
    let (db, dc) = (frames.dims_ext[1], frames.dims_ext[2]);
    let (nba, nbb) = (frames.a.n_blocks, frames.b.n_blocks);
    let mut w = CVec::zeros(nba * nbb * dc);
    for ka in 0..nba {
        for kb in 0..nbb {
            for c in 0..dc {
                let mut acc = linalg_core::cr(0.0);
                for qa in 0..2 {
                    for qb in 0..2 {
                        let idx = ((qa * nba + ka) * db + (qb * nbb + kb)) * dc + c;
                        acc += target[qa * 2 + qb].conj() * frames.psi_t[idx];
                    }
                }
                w[(ka * nbb + kb) * dc + c] = acc;
            }
        }
    }
    w
}

pub fn rigidity_analyze(s: &ChshStrategy) -> Result<RigidityReport> {
    let frames = analyze_frames(s)?;
    let correlation = correlation_value(s);
    let epsilon = (TSIRELSON - correlation).max(0.0);

    let dims_ext = frames.dims_ext;
    let r0a = extend_operator(s.alice(0).matrix(), frames.a.dim_ext);
    let r1a = extend_operator(s.alice(1).matrix(), frames.a.dim_ext);
    let r0b = extend_operator(s.bob(0).matrix(), frames.b.dim_ext);
    let r1b = extend_operator(s.bob(1).matrix(), frames.b.dim_ext);

    let mut m_residual = 0.0;
    for j in 0..2 {
        let sign = if j == 0 { 1.0 } else { -1.0 };
        let alice_half = (&r0a + &r1a.scale(sign)).scale(0.5);
        let bob = if j == 0 { &r0b } else { &r1b };
        let mj = embed_factor(&alice_half, &dims_ext, 0).expect("ext embed")
            - embed_factor(bob, &dims_ext, 1)
                .expect("ext embed")
                .scale(std::f64::consts::FRAC_1_SQRT_2);
        m_residual += (&mj * &frames.psi_ext).norm_squared();
    }

    let x_ideal_a = kron(&pauli_x(), &identity(frames.a.n_blocks));
    let defect_a = frames.a.frame_r1() - x_ideal_a;
    let alice_x_residual = (embed_factor(&defect_a, &dims_ext, 0).expect("frame embed")
        * &frames.psi_t)
        .norm();
    let x_ideal_b = kron(&pauli_x(), &identity(frames.b.n_blocks));
    let defect_b = frames.b.frame_r1() - x_ideal_b;
    let bob_x_residual = (embed_factor(&defect_b, &dims_ext, 1).expect("frame embed")
        * &frames.psi_t)
        .norm();

    let target = ideal_frame_target();
    let w = qubit_overlap_vector(&frames, &target);
    let state_residual = (2.0 - 2.0 * w.norm()).max(0.0).sqrt();

    let summarize = |f: &DeviceFrame| {
        (0..f.n_blocks)
            .map(|k| BlockSummary {
                theta: f.angles[k],
                weight: f.weights[k],
                padded: f.padded_flags[k],
            })
            .collect()
    };
    Ok(RigidityReport {
        correlation,
        epsilon,
        m_residual,
        alice_x_residual,
        bob_x_residual,
        state_residual,
        alice_blocks: summarize(&frames.a),
        bob_blocks: summarize(&frames.b),
    })
}

/// Norm of (own observable - the matching diagonal observable on the other
/// device's extracted qubit) applied to the frame state. Question alpha
/// matches (Z + (-1)^alpha X) / sqrt 2 on the far side.
pub fn pull_over_residual(s: &ChshStrategy, device: Device, alpha: u8) -> Result<f64> {
    if alpha > 1 {
        return Err(Error::Strategy(format!("question {alpha} out of range")));
    }
    let frames = analyze_frames(s)?;
    let dims_ext = frames.dims_ext;
    let sign = if alpha == 0 { 1.0 } else { -1.0 };
    let far_qubit = (pauli_z() + pauli_x().scale(sign)).scale(std::f64::consts::FRAC_1_SQRT_2);

    let (own_frame, own_pos, far_frame, far_pos) = match device {
        Device::Alice => (&frames.a, 0usize, &frames.b, 1usize),
        Device::Bob => (&frames.b, 1usize, &frames.a, 0usize),
    };
    let own_op = if alpha == 0 {
        kron(&pauli_z(), &identity(own_frame.n_blocks))
    } else {
        own_frame.frame_r1()
    };
    let far_op = kron(&far_qubit, &identity(far_frame.n_blocks));
    let diff = embed_factor(&own_op, &dims_ext, own_pos).expect("frame embed")
        - embed_factor(&far_op, &dims_ext, far_pos).expect("frame embed");
    Ok((&diff * &frames.psi_t).norm())
}

/// Single-qubit unitary taking the Alice-side post-measurement state for
/// question a' to the one for question a when the answers differ by delta,
/// exact for the ideal strategy up to a global phase.
pub fn outcome_relating_unitary(a: u8, a_prime: u8, delta: u8) -> CMat {
    let (a, a_prime, delta) = (a & 1, a_prime & 1, delta & 1);
    match (a, a_prime, delta) {
        (aa, bb, 0) if aa == bb => identity(2),
        (0, 0, 1) => pauli_x(),
        (1, 1, 1) => pauli_z(),
        (0, 1, 0) | (1, 0, 0) => hadamard(),
        (0, 1, 1) => pauli_x() * hadamard(),
        (1, 0, 1) => hadamard() * pauli_x(),
        _ => unreachable!("bits are masked"),
    }
}
