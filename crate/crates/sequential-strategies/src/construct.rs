//! Constructive rewrites of a strategy toward the ideal form.
//!
//! Three stages. The first snaps every rule pair onto an exact qubit block
//! structure (angle pi/4 in every joint block). The second re-routes each
//! round's qubit onto a dedicated fresh ancilla so that different rounds
//! measure different tensor factors. The third freezes the rules along one
//! target transcript and plants EPR states on the frozen qubit positions,
//! leaving a strategy whose rules no longer depend on the transcript.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;
use std::sync::Arc;

use chsh_game::{answer_basis, ideal_chsh_strategy, Device};
use linalg_core::{
    cr, identity, jordan_decompose, kron, max_abs_diff, CMat, CVec, JordanBlock, PureState,
    Reflection, VALIDATION_TOL,
};

use crate::error::{Error, Result};
use crate::evolve::ZERO_BLOCK_TRACE;
use crate::strategy::{
    apply_at_factor, local_transcripts, pad_state, LocalTranscript, SequentialStrategy,
    Transcript,
};

/// Basis change mapping a reflection pair onto (Z x I, X-shape x I) in
/// qubit-major layout: column q*nb + k is the q-th basis vector of block k.
/// The pair must decompose into full two-dimensional blocks.
pub(crate) fn qubit_frame(r0: &Reflection, r1: &Reflection) -> Result<CMat> {
    let blocks = jordan_decompose(r0, r1)?;
    if blocks.iter().any(JordanBlock::padded) {
        return Err(Error::Strategy(
            "reflection pair has an unpaired line, so no clean qubit factor exists".into(),
        ));
    }
    let d = r0.dim();
    let nb = d / 2;
    let mut v = CMat::zeros(d, d);
    for (k, b) in blocks.iter().enumerate() {
        for q in 0..2 {
            v.column_mut(q * nb + k).copy_from(&b.basis().column(q));
        }
    }
    Ok(v)
}

fn ideal_block_angle(b: &JordanBlock) -> bool {
    !b.padded() && (b.theta() - FRAC_PI_4).abs() <= VALIDATION_TOL
}

/// True when every rule pair of every round and transcript decomposes into
/// full blocks of angle pi/4, i.e. is unitarily equivalent to an ideal
/// qubit pair in tensor product with an untouched remainder.
pub fn is_single_qubit_ideal(s: &SequentialStrategy) -> Result<bool> {
    for device in [Device::Alice, Device::Bob] {
        for j in 1..=s.n() {
            for h in local_transcripts(j - 1) {
                let r0 = s.rule(device, j, &h, 0);
                let r1 = s.rule(device, j, &h, 1);
                if !jordan_decompose(&r0, &r1)?.iter().all(ideal_block_angle) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Exact-angle replacement for one decomposed pair on a space extended by
/// `ext - dim` extra coordinates. Padded lines get their missing partner
/// from the extension, in block order; leftover extension coordinates are
/// paired among themselves as fresh ideal blocks so the output is a valid
/// reflection pair on the whole extended space.
fn ideal_pair_on_extension(
    blocks: &[JordanBlock],
    dim: usize,
    ext: usize,
) -> Result<[Reflection; 2]> {
    let mut r0 = CMat::zeros(ext, ext);
    let mut r1 = CMat::zeros(ext, ext);
    let mut next = dim;
    for b in blocks {
        let mut basis = CMat::zeros(ext, 2);
        basis.view_mut((0, 0), (dim, 2)).copy_from(b.basis());
        if b.padded() {
            let zero_slot = if b.basis().column(0).norm() < 0.5 { 0 } else { 1 };
            basis[(next, zero_slot)] = cr(1.0);
            next += 1;
        }
        let c0 = basis.column(0);
        let c1 = basis.column(1);
        r0 += &c0 * c0.adjoint() - &c1 * c1.adjoint();
        r1 += &c0 * c1.adjoint() + &c1 * c0.adjoint();
    }
    while next < ext {
        r0[(next, next)] = cr(1.0);
        r0[(next + 1, next + 1)] = cr(-1.0);
        r1[(next, next + 1)] = cr(1.0);
        r1[(next + 1, next)] = cr(1.0);
        next += 2;
    }
    Ok([Reflection::new(r0)?, Reflection::new(r1)?])
}

type PairTable = BTreeMap<(usize, LocalTranscript), [Reflection; 2]>;

fn table_rule(table: Arc<PairTable>) -> impl Fn(usize, &[(u8, u8)], u8) -> Reflection {
    move |j, h, q| table[&(j, h.to_vec())][(q & 1) as usize].clone()
}

/// Replaces every rule pair by the exact-angle pair on its own joint
/// blocks, keeping the first reflection in place and snapping the second
/// onto the perpendicular direction inside each block.
///
/// Rule pairs with unpaired lines force a device-space extension: the
/// device dimension grows by the worst-case number of unpaired lines over
/// that device's rounds and transcripts, and the state is embedded with
/// zero amplitude on the new coordinates. A strategy that already passes
/// `is_single_qubit_ideal` comes back unchanged.
pub fn make_single_qubit_ideal(s: &SequentialStrategy) -> Result<SequentialStrategy> {
    let dims = s.dims();
    let mut tables: [PairTable; 2] = [BTreeMap::new(), BTreeMap::new()];
    let mut ext_dims = [0usize; 2];
    for (di, device) in [Device::Alice, Device::Bob].into_iter().enumerate() {
        let dim = dims[di];
        let mut decomposed = Vec::new();
        let mut pad = 0usize;
        for j in 1..=s.n() {
            for h in local_transcripts(j - 1) {
                let r0 = s.rule(device, j, &h, 0);
                let r1 = s.rule(device, j, &h, 1);
                let blocks = jordan_decompose(&r0, &r1)?;
                pad = pad.max(blocks.iter().filter(|b| b.padded()).count());
                decomposed.push(((j, h), blocks));
            }
        }
        let ext = dim + pad;
        ext_dims[di] = ext;
        for ((j, h), blocks) in decomposed {
            tables[di].insert((j, h), ideal_pair_on_extension(&blocks, dim, ext)?);
        }
    }
    let new_dims = [ext_dims[0], ext_dims[1], dims[2]];
    let psi = PureState::new(pad_state(s.psi(), dims, new_dims))?;
    let [ta, tb] = tables;
    SequentialStrategy::from_rules(
        s.n(),
        new_dims,
        psi,
        table_rule(Arc::new(ta)),
        table_rule(Arc::new(tb)),
    )
}

/// True when the strategy is single-qubit ideal and, for each device, rule
/// pairs of different rounds commute along every consistent transcript.
/// Commuting exact-angle pairs share a refinement into disjoint qubit
/// factors, so this is equivalent to round j's qubit being in tensor
/// product with the qubits of earlier rounds.
pub fn is_multi_qubit_ideal(s: &SequentialStrategy) -> Result<bool> {
    if !is_single_qubit_ideal(s)? {
        return Ok(false);
    }
    for device in [Device::Alice, Device::Bob] {
        for k in 2..=s.n() {
            for h in local_transcripts(k - 1) {
                let rk = [s.rule(device, k, &h, 0), s.rule(device, k, &h, 1)];
                for j in 1..k {
                    let rj = [
                        s.rule(device, j, &h[..j - 1], 0),
                        s.rule(device, j, &h[..j - 1], 1),
                    ];
                    for a in &rj {
                        for b in &rk {
                            let ab = a.matrix() * b.matrix();
                            let ba = b.matrix() * a.matrix();
                            if max_abs_diff(&ab, &ba) > VALIDATION_TOL {
                                return Ok(false);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Swap of ancilla qubit k (of n, big-endian) with the front qubit factor
/// of the trailing d-dimensional slot, as a permutation on 2^n * d.
fn swap_ancilla_with_front(n: usize, k: usize, d: usize) -> CMat {
    let nb = d / 2;
    let anc = 1usize << n;
    let mut m = CMat::zeros(anc * d, anc * d);
    for q in 0..anc {
        let bit = (q >> (n - k)) & 1;
        for g in 0..2 {
            let q2 = (q & !(1 << (n - k))) | (g << (n - k));
            for r in 0..nb {
                let from = q * d + g * nb + r;
                let to = q2 * d + bit * nb + r;
                m[(to, from)] = cr(1.0);
            }
        }
    }
    m
}

/// Per-device frame data for the multi-qubit rewrite.
struct DeviceFrames {
    device: Device,
    dim: usize,
    /// 2x2 frame of the device's own ideal reflection pair.
    w: CMat,
    /// Ideal reflections for questions 0 and 1, as 2x2 matrices.
    ideal: [CMat; 2],
}

impl DeviceFrames {
    fn new(device: Device, dim: usize) -> Result<Self> {
        let ideal_game = ideal_chsh_strategy();
        let pair = match device {
            Device::Alice => [ideal_game.alice(0).clone(), ideal_game.alice(1).clone()],
            Device::Bob => [ideal_game.bob(0).clone(), ideal_game.bob(1).clone()],
        };
        let w = qubit_frame(&pair[0], &pair[1])?;
        Ok(DeviceFrames {
            device,
            dim,
            w,
            ideal: [pair[0].matrix().clone(), pair[1].matrix().clone()],
        })
    }

    /// Frame of the rule pair at (j, h), composed so that the device's
    /// reflections become its own ideal pair on the front qubit factor.
    fn single_round_map(&self, s: &SequentialStrategy, j: usize, h: &[(u8, u8)]) -> Result<CMat> {
        let v = qubit_frame(&s.rule(self.device, j, h, 0), &s.rule(self.device, j, h, 1))?;
        Ok(kron(&self.w, &identity(self.dim / 2)) * v.adjoint())
    }
}

/// Re-routes each round's game qubit onto a dedicated ancilla.
///
/// Each device gets n fresh qubits prepended in |0...0>. Round j first
/// rewrites the front qubit slot of the original space to the answer ket
/// recorded for round j-1 (undoing the swap that parked a |0> there), pulls
/// the previous round's frame back off, applies its own frame, and swaps
/// the fresh game qubit up into ancilla j. The output rule for round j is
/// the device's ideal reflection on ancilla j conjugated by the accumulated
/// walk, so rules of different rounds act on disjoint qubit factors.
pub fn make_multi_qubit_ideal(s: &SequentialStrategy) -> Result<SequentialStrategy> {
    if !is_single_qubit_ideal(s)? {
        return Err(Error::Strategy(
            "multi-qubit rewrite needs a single-qubit ideal input".into(),
        ));
    }
    let n = s.n();
    let dims = s.dims();
    let anc = 1usize << n;
    let new_dims = [anc * dims[0], anc * dims[1], dims[2]];
    let mut tables: [PairTable; 2] = [BTreeMap::new(), BTreeMap::new()];
    for (di, device) in [Device::Alice, Device::Bob].into_iter().enumerate() {
        let d = dims[di];
        let nb = d / 2;
        let frames = DeviceFrames::new(device, d)?;
        let lift = |m: &CMat| kron(&identity(anc), m);
        let swaps: Vec<CMat> = (1..=n).map(|k| swap_ancilla_with_front(n, k, d)).collect();
        // Accumulated walk W_j keyed by the local transcript before round
        // j, stored with the round-j frame it ends in; grown through
        //   W_{j+1} = S_{j+1} (I x U_{j+1}) (I x U_j)^dag (I x V(q, ans)) W_j.
        let u1 = frames.single_round_map(s, 1, &[])?;
        let mut walks: BTreeMap<LocalTranscript, (CMat, CMat)> = BTreeMap::new();
        walks.insert(Vec::new(), (&swaps[0] * lift(&u1), u1));
        for j in 1..=n {
            let mut next_walks: BTreeMap<LocalTranscript, (CMat, CMat)> = BTreeMap::new();
            for (h, (walk, u_here)) in &walks {
                let pair = [0u8, 1].map(|q| {
                    let ideal_at_j = kron(
                        &identity(1 << (j - 1)),
                        &kron(&frames.ideal[q as usize], &identity((1 << (n - j)) * d)),
                    );
                    Reflection::new(walk.adjoint() * ideal_at_j * walk)
                });
                let [p0, p1] = pair;
                tables[di].insert((j, h.clone()), [p0?, p1?]);
                if j == n {
                    continue;
                }
                for q in 0..2u8 {
                    for ans in 0..2u8 {
                        let mut h2 = h.clone();
                        h2.push((q, ans));
                        let u_next = frames.single_round_map(s, j + 1, &h2)?;
                        let park = kron(&answer_basis(device, q, ans), &identity(nb));
                        let step = &swaps[j]
                            * lift(&u_next)
                            * lift(u_here).adjoint()
                            * lift(&park);
                        next_walks.insert(h2, (step * walk, u_next));
                    }
                }
            }
            if j < n {
                walks = next_walks;
            }
        }
    }
    let psi = PureState::new(pad_state(s.psi(), dims, new_dims))?;
    let [ta, tb] = tables;
    SequentialStrategy::from_rules(
        n,
        new_dims,
        psi,
        table_rule(Arc::new(ta)),
        table_rule(Arc::new(tb)),
    )
}

/// Bell-pair projector for round j's frozen rule pairs, applied to a joint
/// vector. The four correlation terms use Alice's pair directly and the
/// half-sum and half-difference of Bob's pair, which for an exact-angle
/// pair are again reflections aligned with Alice's.
fn bell_project(
    v: &CVec,
    dims: [usize; 3],
    alice: &[Reflection; 2],
    bob: &[Reflection; 2],
) -> CVec {
    let za = alice[0].matrix();
    let xa = alice[1].matrix();
    let s = cr(std::f64::consts::FRAC_1_SQRT_2);
    let zb = (bob[0].matrix() + bob[1].matrix()) * s;
    let xb = (bob[0].matrix() - bob[1].matrix()) * s;
    let mut out = v.clone();
    out += apply_at_factor(&apply_at_factor(v, dims, 0, xa), dims, 1, &xb);
    out += apply_at_factor(&apply_at_factor(v, dims, 0, za), dims, 1, &zb);
    let both_a = apply_at_factor(&apply_at_factor(v, dims, 0, za), dims, 0, xa);
    out += apply_at_factor(&apply_at_factor(&both_a, dims, 1, &zb), dims, 1, &xb);
    out * cr(0.25)
}

/// Freezes the rules along one full transcript and plants EPR states on the
/// frozen qubit positions.
///
/// The output's rules are the input's rules with each device's local view
/// of `target` substituted for the live transcript, so they no longer
/// depend on play. The output state is the input state conditioned on
/// `target`, pushed back through the frozen rounds' Bell projectors so that
/// each frozen qubit pair holds an EPR state.
pub fn glue_to_ideal(s: &SequentialStrategy, target: &Transcript) -> Result<SequentialStrategy> {
    if target.len() != s.n() {
        return Err(Error::Strategy(format!(
            "target transcript has {} rounds, the strategy {}",
            target.len(),
            s.n()
        )));
    }
    if !is_multi_qubit_ideal(s)? {
        return Err(Error::Strategy(
            "gluing needs a multi-qubit ideal input".into(),
        ));
    }
    let dims = s.dims();
    let mut frozen: [Vec<[Reflection; 2]>; 2] = [Vec::new(), Vec::new()];
    for (di, view) in [
        crate::strategy::alice_view(target),
        crate::strategy::bob_view(target),
    ]
    .into_iter()
    .enumerate()
    {
        let device = [Device::Alice, Device::Bob][di];
        for j in 1..=s.n() {
            frozen[di].push([
                s.rule(device, j, &view[..j - 1], 0),
                s.rule(device, j, &view[..j - 1], 1),
            ]);
        }
    }
    // State conditioned on the target transcript.
    let mut v = s.psi().amplitudes().clone();
    for (j, &(a, b, x, y)) in target.iter().enumerate() {
        let pa = frozen[0][j][a as usize].outcome_projector(x);
        let pb = frozen[1][j][b as usize].outcome_projector(y);
        v = apply_at_factor(&apply_at_factor(&v, dims, 0, &pa), dims, 1, &pb);
    }
    if v.norm_squared() < ZERO_BLOCK_TRACE {
        return Err(Error::ZeroProbability(format!(
            "target transcript {target:?} has zero probability"
        )));
    }
    v /= cr(v.norm());
    // Plant an EPR state on each round's frozen qubit pair, last round
    // first so earlier rounds see the later plants.
    for j in (0..s.n()).rev() {
        v = bell_project(&v, dims, &frozen[0][j], &frozen[1][j]);
    }
    let norm = v.norm();
    if norm < 1e-12 {
        return Err(Error::Degenerate(
            "EPR planting collapsed the conditioned state".into(),
        ));
    }
    v /= cr(norm);
    let [fa, fb] = frozen;
    SequentialStrategy::from_rules(
        s.n(),
        dims,
        PureState::new(v)?,
        move |j, _h, q| fa[j - 1][(q & 1) as usize].clone(),
        move |j, _h, q| fb[j - 1][(q & 1) as usize].clone(),
    )
}

/// Gluing with the target sampled from the strategy's own transcript
/// distribution, the default way to pick a typical transcript. Returns the
/// glued strategy together with the sampled target.
pub fn glue_to_ideal_sampled(
    s: &SequentialStrategy,
    seed: u64,
) -> Result<(SequentialStrategy, Transcript)> {
    let mut rng = seedstream::stream(seed, "glue-target");
    let target = crate::sample::sample_transcript(s, &mut rng)?;
    let glued = glue_to_ideal(s, &target)?;
    Ok((glued, target))
}
