//! The n-game strategy model.
//!
//! A strategy is a shared tripartite pure state plus, for every round, one
//! reflection per question per device. Rules see their own device's past
//! questions and answers but never the other side's, so the two maps are
//! separate closures keyed by local transcripts.

use std::sync::Arc;

use chsh_game::Device;
use linalg_core::{is_unitary, kron, CMat, CVec, PureState, Reflection};

use crate::error::{Error, Result};

/// One device's record of completed rounds: (question, answer) per round.
pub type LocalTranscript = Vec<(u8, u8)>;

/// Full record of completed rounds: (a, b, x, y) per round.
pub type Transcript = Vec<(u8, u8, u8, u8)>;

type RuleFn = dyn Fn(usize, &[(u8, u8)], u8) -> Reflection + Send + Sync;

/// Largest round count served by exact transcript enumeration.
pub const EXACT_ROUND_CAP: usize = 6;

#[derive(Clone)]
pub struct SequentialStrategy {
    n: usize,
    dims: [usize; 3],
    psi: PureState,
    alice: Arc<RuleFn>,
    bob: Arc<RuleFn>,
}

impl SequentialStrategy {
    /// Builds a strategy from rule closures and checks every reachable rule
    /// once: closures must return a reflection of the right dimension for
    /// all (round, local transcript, question) triples up to round n.
    pub fn from_rules<A, B>(
        n: usize,
        dims: [usize; 3],
        psi: PureState,
        alice: A,
        bob: B,
    ) -> Result<Self>
    where
        A: Fn(usize, &[(u8, u8)], u8) -> Reflection + Send + Sync + 'static,
        B: Fn(usize, &[(u8, u8)], u8) -> Reflection + Send + Sync + 'static,
    {
        if n == 0 {
            return Err(Error::Strategy("a strategy needs at least one game".into()));
        }
        let total: usize = dims.iter().product();
        if dims.iter().any(|&d| d == 0) {
            return Err(Error::Strategy("zero-dimensional factor".into()));
        }
        if total != psi.dim() {
            return Err(Error::Strategy(format!(
                "factor dims {dims:?} multiply to {total} but the state has dim {}",
                psi.dim()
            )));
        }
        let s = SequentialStrategy {
            n,
            dims,
            psi,
            alice: Arc::new(alice),
            bob: Arc::new(bob),
        };
        for j in 1..=n {
            for h in local_transcripts(j - 1) {
                for q in 0..2u8 {
                    for (device, dim) in [(Device::Alice, dims[0]), (Device::Bob, dims[1])] {
                        let r = s.rule(device, j, &h, q);
                        if r.dim() != dim {
                            return Err(Error::Strategy(format!(
                                "{device:?} rule at round {j} has dim {} but the factor has dim {dim}",
                                r.dim()
                            )));
                        }
                    }
                }
            }
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn psi(&self) -> &PureState {
        &self.psi
    }

    /// Round-j reflection for the given question after the local transcript
    /// h. Panics outside 1 <= j <= n or when h is not j-1 rounds long; those
    /// are driver bugs, not data.
    pub fn rule(&self, device: Device, j: usize, h: &[(u8, u8)], question: u8) -> Reflection {
        assert!(j >= 1 && j <= self.n, "round {j} outside 1..={}", self.n);
        assert_eq!(h.len(), j - 1, "transcript length {} at round {j}", h.len());
        match device {
            Device::Alice => (self.alice)(j, h, question & 1),
            Device::Bob => (self.bob)(j, h, question & 1),
        }
    }

    pub fn alice_rule(&self, j: usize, h: &[(u8, u8)], question: u8) -> Reflection {
        self.rule(Device::Alice, j, h, question)
    }

    pub fn bob_rule(&self, j: usize, h: &[(u8, u8)], question: u8) -> Reflection {
        self.rule(Device::Bob, j, h, question)
    }
}

/// All local transcripts of the given length, in lexicographic order.
pub fn local_transcripts(len: usize) -> Vec<LocalTranscript> {
    let mut out = Vec::with_capacity(4usize.pow(len as u32));
    let mut cur = vec![(0u8, 0u8); len];
    fill(&mut out, &mut cur, 0);
    out
}

fn fill(out: &mut Vec<LocalTranscript>, cur: &mut LocalTranscript, at: usize) {
    if at == cur.len() {
        out.push(cur.clone());
        return;
    }
    for q in 0..2u8 {
        for ans in 0..2u8 {
            cur[at] = (q, ans);
            fill(out, cur, at + 1);
        }
    }
}

/// Alice's view of a full transcript.
pub fn alice_view(h: &[(u8, u8, u8, u8)]) -> LocalTranscript {
    h.iter().map(|&(a, _, x, _)| (a, x)).collect()
}

/// Bob's view of a full transcript.
pub fn bob_view(h: &[(u8, u8, u8, u8)]) -> LocalTranscript {
    h.iter().map(|&(_, b, _, y)| (b, y)).collect()
}

/// Applies a one-factor operator to a state vector over [dA, dB, dC]
/// without materializing the full-space embedding.
pub(crate) fn apply_at_factor(v: &CVec, dims: [usize; 3], factor: usize, op: &CMat) -> CVec {
    let (da, db, dc) = (dims[0], dims[1], dims[2]);
    let d = match factor {
        0 => da,
        1 => db,
        _ => dc,
    };
    debug_assert_eq!(op.nrows(), d);
    let mut out = CVec::zeros(v.len());
    // Flat index over [dA, dB, dC] is (iA*dB + iB)*dC + iC; the factor's
    // index contributes with the stride below, and the positions less
    // significant than it number exactly stride.
    let (stride, outer) = match factor {
        0 => (db * dc, 1),
        1 => (dc, da),
        _ => (1, da * db),
    };
    for o in 0..outer {
        let base = o * d * stride;
        for i in 0..stride {
            for row in 0..d {
                let mut acc = linalg_core::c(0.0, 0.0);
                for col in 0..d {
                    acc += op[(row, col)] * v[base + col * stride + i];
                }
                out[base + row * stride + i] = acc;
            }
        }
    }
    out
}

/// Zero-pads the state into enlarged device factors. New coordinates are
/// appended after the existing ones on each device.
pub(crate) fn pad_state(psi: &PureState, dims: [usize; 3], new_dims: [usize; 3]) -> CVec {
    let (da, db, dc) = (dims[0], dims[1], dims[2]);
    let (na, nb2, nc) = (new_dims[0], new_dims[1], new_dims[2]);
    assert!(na >= da && nb2 >= db && nc == dc);
    let mut out = CVec::zeros(na * nb2 * nc);
    let v = psi.amplitudes();
    for ia in 0..da {
        for ib in 0..db {
            for ic in 0..dc {
                out[(ia * nb2 + ib) * nc + ic] = v[(ia * db + ib) * dc + ic];
            }
        }
    }
    out
}

/// The explicit isometric extension that prepends `k` ancilla qubits in
/// |0...0> to each device, with rules acting as identity on them. Ancilla
/// qubits are the most significant factors of each enlarged device space.
pub fn prepend_ancillas(s: &SequentialStrategy, k: usize) -> Result<SequentialStrategy> {
    let anc = 1usize << k;
    let [da, db, dc] = s.dims();
    let new_dims = [anc * da, anc * db, dc];
    // With every ancilla in |0>, prepending leaves original amplitudes at
    // the low flat indices, which is the same layout zero-padding produces.
    let amps = pad_state(s.psi(), s.dims(), new_dims);
    let psi = PureState::new(amps).map_err(Error::from)?;
    let (sa, sb) = (s.clone(), s.clone());
    SequentialStrategy::from_rules(
        s.n(),
        new_dims,
        psi,
        move |j, h, q| {
            let r = sa.alice_rule(j, h, q);
            Reflection::new(kron(&linalg_core::identity(anc), r.matrix()))
                .expect("identity extension of a reflection")
        },
        move |j, h, q| {
            let r = sb.bob_rule(j, h, q);
            Reflection::new(kron(&linalg_core::identity(anc), r.matrix()))
                .expect("identity extension of a reflection")
        },
    )
}

/// Conjugates the state and every rule by fixed per-device unitaries. This
/// is the caller-supplied basis change used to line strategies up before a
/// simulation-distance comparison.
pub fn conjugate_strategy(
    s: &SequentialStrategy,
    u_alice: &CMat,
    u_bob: &CMat,
) -> Result<SequentialStrategy> {
    let [da, db, _] = s.dims();
    if u_alice.nrows() != da || u_alice.ncols() != da || u_bob.nrows() != db || u_bob.ncols() != db
    {
        return Err(Error::Strategy(format!(
            "conjugation dims ({}, {}) do not match device dims ({da}, {db})",
            u_alice.nrows(),
            u_bob.nrows()
        )));
    }
    if !is_unitary(u_alice, 1e-9) || !is_unitary(u_bob, 1e-9) {
        return Err(Error::Strategy("conjugation matrices must be unitary".into()));
    }
    let mut v = apply_at_factor(s.psi().amplitudes(), s.dims(), 0, u_alice);
    v = apply_at_factor(&v, s.dims(), 1, u_bob);
    let psi = PureState::normalized(v).map_err(Error::from)?;
    let (sa, ua) = (s.clone(), u_alice.clone());
    let (sb, ub) = (s.clone(), u_bob.clone());
    SequentialStrategy::from_rules(
        s.n(),
        s.dims(),
        psi,
        move |j, h, q| {
            let r = sa.alice_rule(j, h, q);
            Reflection::new(&ua * r.matrix() * ua.adjoint()).expect("conjugated reflection")
        },
        move |j, h, q| {
            let r = sb.bob_rule(j, h, q);
            Reflection::new(&ub * r.matrix() * ub.adjoint()).expect("conjugated reflection")
        },
    )
}
