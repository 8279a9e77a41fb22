//! Exact block-diagonal transcript evolution.
//!
//! After j rounds the joint state is classical on the transcript and
//! quantum on the devices: one sub-normalized block per transcript, equal
//! to the question weight 1/4 per round times the projected pure state.
//! Transcripts whose block trace falls below 1e-24 are dropped; they are
//! the zero-probability branches.

use std::collections::BTreeMap;

use chsh_game::{answer_basis, ChshStrategy, Device};
use linalg_core::{kron, CMat, CVec, DensityMatrix, PureState, trace_norm};

use crate::error::{Error, Result};
use crate::strategy::{
    alice_view, apply_at_factor, bob_view, LocalTranscript, SequentialStrategy, Transcript,
    EXACT_ROUND_CAP,
};

pub(crate) const ZERO_BLOCK_TRACE: f64 = 1e-24;

/// Block-diagonal cq-state over full transcripts after a fixed number of
/// rounds. Zero-probability transcripts are omitted.
#[derive(Clone, Debug)]
pub struct TranscriptState {
    j: usize,
    blocks: BTreeMap<Transcript, DensityMatrix>,
}

impl TranscriptState {
    /// Round index of the state: evolving `upto` rounds yields j = upto + 1.
    pub fn j(&self) -> usize {
        self.j
    }

    pub fn blocks(&self) -> &BTreeMap<Transcript, DensityMatrix> {
        &self.blocks
    }

    pub fn block(&self, h: &[(u8, u8, u8, u8)]) -> Option<&DensityMatrix> {
        self.blocks.get(h)
    }

    pub fn total_trace(&self) -> f64 {
        self.blocks.values().map(DensityMatrix::trace_re).sum()
    }
}

fn check_caps(s: &SequentialStrategy, upto: usize) -> Result<()> {
    if upto > s.n() {
        return Err(Error::Strategy(format!(
            "cannot evolve {upto} rounds of an {}-game strategy",
            s.n()
        )));
    }
    if upto > EXACT_ROUND_CAP {
        return Err(Error::Capacity(format!(
            "exact evolution enumerates 16^{upto} transcripts; the cap is {EXACT_ROUND_CAP} rounds"
        )));
    }
    Ok(())
}

/// Cached outcome projectors for one device and round, keyed by that
/// device's local transcript.
pub(crate) struct ProjectorCache<'s> {
    s: &'s SequentialStrategy,
    device: Device,
    j: usize,
    map: BTreeMap<LocalTranscript, [[CMat; 2]; 2]>,
}

impl<'s> ProjectorCache<'s> {
    pub(crate) fn new(s: &'s SequentialStrategy, device: Device, j: usize) -> Self {
        ProjectorCache {
            s,
            device,
            j,
            map: BTreeMap::new(),
        }
    }

    pub(crate) fn get(&mut self, local: &LocalTranscript) -> &[[CMat; 2]; 2] {
        if !self.map.contains_key(local) {
            let build = |q: u8| {
                let r = self.s.rule(self.device, self.j, local, q);
                [r.outcome_projector(0), r.outcome_projector(1)]
            };
            self.map.insert(local.clone(), [build(0), build(1)]);
        }
        &self.map[local]
    }
}

/// Unnormalized block vectors after `upto` rounds; the block density is the
/// outer product. Question weights are folded in as 1/2 per round.
pub(crate) fn evolve_vectors(
    s: &SequentialStrategy,
    upto: usize,
) -> Result<Vec<(Transcript, CVec)>> {
    check_caps(s, upto)?;
    let dims = s.dims();
    let mut blocks: Vec<(Transcript, CVec)> =
        vec![(Transcript::new(), s.psi().amplitudes().clone())];
    for j in 1..=upto {
        let mut pa = ProjectorCache::new(s, Device::Alice, j);
        let mut pb = ProjectorCache::new(s, Device::Bob, j);
        let mut next = Vec::with_capacity(blocks.len() * 16);
        for (h, v) in &blocks {
            let ha = alice_view(h);
            let hb = bob_view(h);
            let pas = pa.get(&ha).clone();
            let pbs = pb.get(&hb).clone();
            for a in 0..2usize {
                for x in 0..2usize {
                    let u = apply_at_factor(v, dims, 0, &pas[a][x]);
                    if u.norm_squared() < ZERO_BLOCK_TRACE {
                        continue;
                    }
                    for b in 0..2usize {
                        for y in 0..2usize {
                            let mut w = apply_at_factor(&u, dims, 1, &pbs[b][y]);
                            w *= linalg_core::cr(0.5);
                            if w.norm_squared() < ZERO_BLOCK_TRACE {
                                continue;
                            }
                            let mut hh = h.clone();
                            hh.push((a as u8, b as u8, x as u8, y as u8));
                            next.push((hh, w));
                        }
                    }
                }
            }
        }
        blocks = next;
    }
    Ok(blocks)
}

/// Exact evolution of the first `upto` rounds.
pub fn evolve(s: &SequentialStrategy, upto: usize) -> Result<TranscriptState> {
    let vectors = evolve_vectors(s, upto)?;
    let mut blocks = BTreeMap::new();
    for (h, v) in vectors {
        blocks.insert(h, DensityMatrix::from_outer(&v)?);
    }
    Ok(TranscriptState { j: upto + 1, blocks })
}

/// Sum of per-transcript trace norms between two evolutions of the same
/// round index on the same space; a transcript missing on one side counts
/// as a zero block.
pub fn transcript_distance(a: &TranscriptState, b: &TranscriptState) -> Result<f64> {
    if a.j != b.j {
        return Err(Error::Strategy(format!(
            "comparing round {} against round {}",
            a.j, b.j
        )));
    }
    let mut total = 0.0;
    for (h, block) in &a.blocks {
        match b.blocks.get(h) {
            Some(other) => {
                if other.dim() != block.dim() {
                    return Err(Error::Strategy(format!(
                        "block dims {} and {} do not match",
                        block.dim(),
                        other.dim()
                    )));
                }
                total += trace_norm(&(block.matrix() - other.matrix()))?;
            }
            None => total += block.trace_re(),
        }
    }
    for (h, block) in &b.blocks {
        if !a.blocks.contains_key(h) {
            total += block.trace_re();
        }
    }
    Ok(total)
}

/// Per-round mass of transcripts whose conditional game is eps-structured.
///
/// Round j's entry sums the probabilities of the round-(j-1) transcripts
/// whose conditional state, paired with the round-j reflections, comes
/// within eps of the quantum maximum. Zero-probability transcripts carry no
/// mass and are skipped.
pub fn structured_profile(s: &SequentialStrategy, eps: f64) -> Result<Vec<f64>> {
    let mut profile = Vec::with_capacity(s.n());
    for j in 1..=s.n() {
        let mut mass = 0.0;
        for (h, v) in evolve_vectors(s, j - 1)? {
            let p = v.norm_squared();
            let psi = PureState::normalized(v)?;
            let ha = alice_view(&h);
            let hb = bob_view(&h);
            let game = ChshStrategy::new(
                psi,
                s.dims(),
                [s.alice_rule(j, &ha, 0), s.alice_rule(j, &ha, 1)],
                [s.bob_rule(j, &hb, 0), s.bob_rule(j, &hb, 1)],
            )?;
            if chsh_game::is_structured(&game, eps) {
                mass += p;
            }
        }
        profile.push(mass);
    }
    Ok(profile)
}

/// Evolution in which only Alice measures and Bob's round outcome is
/// guessed from hers, then imprinted on his game qubit by a basis rotation.
///
/// Alice's round runs exactly as in `evolve`. The guess (b, y) is drawn
/// with the ideal conditional weights, and the correction maps Bob's game
/// qubit from Alice's answer ket onto the guessed answer ket, leaving the
/// rest of his space alone. Fails when a Bob rule pair has no clean qubit
/// to rotate (a padded block in its joint decomposition).
pub fn guess_and_correct_evolution(
    s: &SequentialStrategy,
    upto: usize,
) -> Result<TranscriptState> {
    check_caps(s, upto)?;
    let dims = s.dims();
    let cos2 = {
        let c = (std::f64::consts::PI / 8.0).cos();
        c * c
    };
    // Single-qubit correction shapes, expressed in the canonical block frame
    // of the ideal Bob pair so they transport to any structured Bob pair
    // through its own frame. Indexed by (a, b, delta).
    let xi: Vec<CMat> = {
        let ideal = chsh_game::ideal_chsh_strategy();
        let w = crate::construct::qubit_frame(ideal.bob(0), ideal.bob(1))?;
        let mut v = Vec::with_capacity(8);
        for a in 0..2u8 {
            for b in 0..2u8 {
                for delta in 0..2u8 {
                    let u = answer_basis(Device::Bob, b, delta)
                        * answer_basis(Device::Alice, a, 0).adjoint();
                    v.push(w.adjoint() * u * &w);
                }
            }
        }
        v
    };
    let mut blocks: Vec<(Transcript, CVec)> =
        vec![(Transcript::new(), s.psi().amplitudes().clone())];
    for j in 1..=upto {
        let mut pa = ProjectorCache::new(s, Device::Alice, j);
        // Corrections keyed by Bob's local transcript and (a, b, delta).
        let mut corrections: BTreeMap<LocalTranscript, Vec<CMat>> = BTreeMap::new();
        let mut next = Vec::with_capacity(blocks.len() * 16);
        for (h, v) in &blocks {
            let ha = alice_view(h);
            let hb = bob_view(h);
            let pas = pa.get(&ha).clone();
            if !corrections.contains_key(&hb) {
                let frame = crate::construct::qubit_frame(
                    &s.bob_rule(j, &hb, 0),
                    &s.bob_rule(j, &hb, 1),
                )?;
                let rest = linalg_core::identity(dims[1] / 2);
                let cs = xi
                    .iter()
                    .map(|x| &frame * kron(x, &rest) * frame.adjoint())
                    .collect();
                corrections.insert(hb.clone(), cs);
            }
            let cs = &corrections[&hb];
            for a in 0..2usize {
                for x in 0..2usize {
                    let u = apply_at_factor(v, dims, 0, &pas[a][x]);
                    if u.norm_squared() < ZERO_BLOCK_TRACE {
                        continue;
                    }
                    for b in 0..2usize {
                        for delta in 0..2usize {
                            let w_guess =
                                0.5 * if delta == (a & b) { cos2 } else { 1.0 - cos2 };
                            let correction = &cs[(a * 2 + b) * 2 + delta];
                            let mut w = apply_at_factor(&u, dims, 1, correction);
                            w *= linalg_core::cr((0.5 * w_guess).sqrt());
                            if w.norm_squared() < ZERO_BLOCK_TRACE {
                                continue;
                            }
                            let y = (x ^ delta) as u8;
                            let mut hh = h.clone();
                            hh.push((a as u8, b as u8, x as u8, y));
                            next.push((hh, w));
                        }
                    }
                }
            }
        }
        blocks = next;
    }
    let mut out = BTreeMap::new();
    for (h, v) in blocks {
        out.insert(h, DensityMatrix::from_outer(&v)?);
    }
    Ok(TranscriptState {
        j: upto + 1,
        blocks: out,
    })
}
