//! Single-shot CHSH strategies and their basic figures of merit.
//!
//! A strategy is a shared pure state on three factors (Alice, Bob, and a
//! spectator register that purifies whatever else the devices hold) plus one
//! binary observable per question per device. Questions and answers are bits;
//! answer 0 is the +1 outcome of the observable.

use linalg_core::{cr, embed_factor, gate_g, pauli_x, pauli_z, CMat, CVec, PureState, Reflection};
use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Largest correlation value any quantum strategy can reach.
pub const TSIRELSON: f64 = 2.0 * std::f64::consts::SQRT_2;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Device {
    Alice,
    Bob,
}

#[derive(Clone)]
pub struct ChshStrategy {
    psi: PureState,
    dims: [usize; 3],
    alice: [Reflection; 2],
    bob: [Reflection; 2],
}

impl ChshStrategy {
    pub fn new(
        psi: PureState,
        dims: [usize; 3],
        alice: [Reflection; 2],
        bob: [Reflection; 2],
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
        for (r, d, who) in [
            (&alice[0], dims[0], "alice[0]"),
            (&alice[1], dims[0], "alice[1]"),
            (&bob[0], dims[1], "bob[0]"),
            (&bob[1], dims[1], "bob[1]"),
        ] {
            if r.dim() != d {
                return Err(Error::Strategy(format!(
                    "{who} acts on dim {} but the factor has dim {d}",
                    r.dim()
                )));
            }
        }
        Ok(ChshStrategy {
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

    pub fn alice(&self, question: u8) -> &Reflection {
        &self.alice[question as usize & 1]
    }

    pub fn bob(&self, question: u8) -> &Reflection {
        &self.bob[question as usize & 1]
    }

    /// P^A(a, x) tensor P^B(b, y) tensor I applied to psi, unnormalized.
    pub fn projected(&self, a: u8, x: u8, b: u8, y: u8) -> CVec {
        let pa = self.alice(a).outcome_projector(x);
        let pb = self.bob(b).outcome_projector(y);
        let full = embed_factor(&pa, &self.dims, 0).expect("dims checked at construction")
            * embed_factor(&pb, &self.dims, 1).expect("dims checked at construction");
        &full * self.psi.amplitudes()
    }

    fn correlation_term(&self, a: u8, b: u8) -> f64 {
        let op = embed_factor(self.alice(a).matrix(), &self.dims, 0)
            .expect("dims checked at construction")
            * embed_factor(self.bob(b).matrix(), &self.dims, 1)
                .expect("dims checked at construction");
        let v = self.psi.amplitudes();
        v.dotc(&(&op * v)).re
    }
}

/// EPR pair with Z/X on Alice and the pi/8-rotated pair on Bob.
pub fn ideal_chsh_strategy() -> ChshStrategy {
    let g = gate_g();
    let b0 = g.adjoint() * pauli_x() * &g;
    let b1 = g.adjoint() * pauli_z() * &g;
    ChshStrategy::new(
        linalg_core::epr_pair(),
        [2, 2, 1],
        [
            Reflection::new(pauli_z()).expect("Z is a reflection"),
            Reflection::new(pauli_x()).expect("X is a reflection"),
        ],
        [
            Reflection::new(b0).expect("conjugated X is a reflection"),
            Reflection::new(b1).expect("conjugated Z is a reflection"),
        ],
    )
    .expect("ideal strategy is well formed")
}

/// Probability of each (a, b, x, y) under uniformly random questions.
pub fn outcome_distribution(s: &ChshStrategy) -> BTreeMap<(u8, u8, u8, u8), f64> {
    let mut out = BTreeMap::new();
    for a in 0..2u8 {
        for b in 0..2u8 {
            for x in 0..2u8 {
                for y in 0..2u8 {
                    let amp = s.projected(a, x, b, y);
                    out.insert((a, b, x, y), 0.25 * amp.norm_squared());
                }
            }
        }
    }
    out
}

/// Probability that x xor y = a and b, over uniform questions.
pub fn win_probability(s: &ChshStrategy) -> f64 {
    outcome_distribution(s)
        .iter()
        .filter(|((a, b, x, y), _)| x ^ y == a & b)
        .map(|(_, p)| p)
        .sum()
}

/// <psi| sum_{a,b} (-1)^{ab} R^A_a R^B_b |psi>.
pub fn correlation_value(s: &ChshStrategy) -> f64 {
    let mut total = 0.0;
    for a in 0..2u8 {
        for b in 0..2u8 {
            let sign = if a & b == 1 { -1.0 } else { 1.0 };
            total += sign * s.correlation_term(a, b);
        }
    }
    total
}

/// Whether the correlation value is within eps of the quantum maximum.
pub fn is_structured(s: &ChshStrategy, eps: f64) -> bool {
    assert!(eps >= 0.0, "structuredness threshold must be nonnegative");
    correlation_value(s) >= TSIRELSON - eps
}

/// Normalized post-measurement state for questions (a, b), answers (x, y).
pub fn post_measurement_state(s: &ChshStrategy, a: u8, x: u8, b: u8, y: u8) -> Result<PureState> {
    let amp = s.projected(a, x, b, y);
    PureState::normalized(amp).map_err(Error::from)
}

/// Eigenvector of the device's ideal question-`question` reflection with
/// eigenvalue (-1)^answer, in that device's qubit basis. All entries real.
pub fn answer_state(device: Device, question: u8, answer: u8) -> CVec {
    let q = question & 1;
    let ans = answer & 1;
    let (c0, c1) = match device {
        Device::Alice => {
            if q == 0 {
                // Z eigenvectors.
                if ans == 0 {
                    (1.0, 0.0)
                } else {
                    (0.0, 1.0)
                }
            } else {
                // X eigenvectors.
                let s = std::f64::consts::FRAC_1_SQRT_2;
                (s, if ans == 0 { s } else { -s })
            }
        }
        Device::Bob => {
            let (sin, cos) = (std::f64::consts::FRAC_PI_8).sin_cos();
            let sign = if q == 0 { 1.0 } else { -1.0 };
            if ans == 0 {
                (cos, sign * sin)
            } else {
                (sin, -sign * cos)
            }
        }
    };
    CVec::from_vec(vec![cr(c0), cr(c1)])
}

/// Rotation taking |0> to the (question, answer) ket and |1> to its partner
/// with the opposite answer. Columns are answer_state(_, question, answer)
/// and answer_state(_, question, answer xor 1).
pub fn answer_basis(device: Device, question: u8, answer: u8) -> CMat {
    let k0 = answer_state(device, question, answer);
    let k1 = answer_state(device, question, answer ^ 1);
    CMat::from_columns(&[k0.column(0), k1.column(0)])
}

pub(crate) fn embed_pair(op_a: &CMat, op_b: &CMat, dims: &[usize; 3]) -> CMat {
    embed_factor(op_a, dims, 0).expect("factor 0 embed")
        * embed_factor(op_b, dims, 1).expect("factor 1 embed")
}
