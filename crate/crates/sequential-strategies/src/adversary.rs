//! Canned opponents for soundness probes, addressable by name.

use chsh_game::{ideal_chsh_strategy, Device};
use linalg_core::{c, cr, identity, kron, CMat, CVec, PureState, Reflection};

use crate::error::{Error, Result};
use crate::strategy::SequentialStrategy;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AdversaryKind {
    /// n EPR pairs, round j played ideally on qubit j.
    Honest,
    /// Deterministic answer 0 on a trivial space; the best classical play.
    Classical,
    /// Honest, but each EPR half is depolarized with probability p via a
    /// purifying register held by nobody.
    Depolarized(f64),
    /// Honest, but Bob's question-1 reflection is rotated by phi about Y.
    Rotated(f64),
    /// Honest apart from Bob cyclically relabelling which qubit belongs to
    /// which round. Indistinguishable in game statistics; detectable only
    /// by position-addressed probes.
    QubitShift,
    /// Plays honestly until its own first answer 1, then answers 0 forever.
    /// A genuinely transcript-dependent rule set.
    TranscriptAdaptive,
}

/// Constructors allocate dense states; keep them desk-sized.
const DIM_CAP: usize = 1 << 20;

fn at_qubit(n: usize, j: usize, op: &CMat) -> Reflection {
    let m = kron(
        &identity(1 << (j - 1)),
        &kron(op, &identity(1 << (n - j))),
    );
    Reflection::new(m).expect("an embedded reflection is a reflection")
}

/// Round-indexed ideal reflections acting on the round's own qubit.
fn qubit_rules(n: usize, device: Device) -> Vec<[Reflection; 2]> {
    let ideal = ideal_chsh_strategy();
    let pair = match device {
        Device::Alice => [ideal.alice(0).clone(), ideal.alice(1).clone()],
        Device::Bob => [ideal.bob(0).clone(), ideal.bob(1).clone()],
    };
    (1..=n)
        .map(|j| [at_qubit(n, j, pair[0].matrix()), at_qubit(n, j, pair[1].matrix())])
        .collect()
}

fn epr_chain(n: usize) -> PureState {
    let d = 1usize << n;
    let mut v = CVec::zeros(d * d);
    let amp = cr(1.0 / (d as f64).sqrt());
    for i in 0..d {
        v[i * d + i] = amp;
    }
    PureState::new(v).expect("unit norm by construction")
}

fn check_cap(total: usize) -> Result<()> {
    if total > DIM_CAP {
        return Err(Error::Capacity(format!(
            "adversary state dimension {total} exceeds the cap {DIM_CAP}"
        )));
    }
    Ok(())
}

fn honest(n: usize) -> Result<SequentialStrategy> {
    let d = 1usize << n;
    check_cap(d * d)?;
    let a = qubit_rules(n, Device::Alice);
    let b = qubit_rules(n, Device::Bob);
    SequentialStrategy::from_rules(
        n,
        [d, d, 1],
        epr_chain(n),
        move |j, _h, q| a[j - 1][(q & 1) as usize].clone(),
        move |j, _h, q| b[j - 1][(q & 1) as usize].clone(),
    )
}

fn classical(n: usize) -> Result<SequentialStrategy> {
    let plus = Reflection::new(identity(1)).expect("the 1x1 identity reflects");
    let a = plus.clone();
    let b = plus;
    SequentialStrategy::from_rules(
        n,
        [1, 1, 1],
        PureState::new(CVec::from_vec(vec![cr(1.0)]))?,
        move |_, _, _| a.clone(),
        move |_, _, _| b.clone(),
    )
}

/// Amplitude of (sigma_m x I)|EPR> at |a>|b>; labels 0,1,2,3 = I,X,Z,Y.
fn twisted_epr_amp(m: usize, a: usize, b: usize) -> linalg_core::C {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    match m {
        0 if a == b => cr(s),
        1 if a != b => cr(s),
        2 if a == b => cr(if a == 0 { s } else { -s }),
        3 if a != b => c(0.0, if b == 0 { s } else { -s }),
        _ => cr(0.0),
    }
}

fn depolarized(n: usize, p: f64) -> Result<SequentialStrategy> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Strategy(format!(
            "depolarizing probability {p} outside [0, 1]"
        )));
    }
    let d = 1usize << n;
    let labels = 1usize << (2 * n);
    check_cap(d * d * labels)?;
    let coeff = [
        (1.0 - 0.75 * p).sqrt(),
        (0.25 * p).sqrt(),
        (0.25 * p).sqrt(),
        (0.25 * p).sqrt(),
    ];
    let mut v = CVec::zeros(d * d * labels);
    for ia in 0..d {
        for ib in 0..d {
            for m in 0..labels {
                let mut amp = cr(1.0);
                for j in 1..=n {
                    let mj = (m >> (2 * (n - j))) & 3;
                    let aj = (ia >> (n - j)) & 1;
                    let bj = (ib >> (n - j)) & 1;
                    amp *= cr(coeff[mj]) * twisted_epr_amp(mj, aj, bj);
                    if amp.norm_sqr() == 0.0 {
                        break;
                    }
                }
                v[(ia * d + ib) * labels + m] = amp;
            }
        }
    }
    let a = qubit_rules(n, Device::Alice);
    let b = qubit_rules(n, Device::Bob);
    SequentialStrategy::from_rules(
        n,
        [d, d, labels],
        PureState::new(v)?,
        move |j, _h, q| a[j - 1][(q & 1) as usize].clone(),
        move |j, _h, q| b[j - 1][(q & 1) as usize].clone(),
    )
}

fn rotated(n: usize, phi: f64) -> Result<SequentialStrategy> {
    let d = 1usize << n;
    check_cap(d * d)?;
    let (s, co) = (0.5 * phi).sin_cos();
    let ry = CMat::from_row_slice(2, 2, &[cr(co), cr(-s), cr(s), cr(co)]);
    let ideal = ideal_chsh_strategy();
    let b1 = &ry * ideal.bob(1).matrix() * ry.adjoint();
    let b: Vec<[Reflection; 2]> = (1..=n)
        .map(|j| {
            [
                at_qubit(n, j, ideal.bob(0).matrix()),
                at_qubit(n, j, &b1),
            ]
        })
        .collect();
    let a = qubit_rules(n, Device::Alice);
    SequentialStrategy::from_rules(
        n,
        [d, d, 1],
        epr_chain(n),
        move |j, _h, q| a[j - 1][(q & 1) as usize].clone(),
        move |j, _h, q| b[j - 1][(q & 1) as usize].clone(),
    )
}

fn shift_of(n: usize, j: usize) -> usize {
    (j % n) + 1
}

fn qubit_shift(n: usize) -> Result<SequentialStrategy> {
    let d = 1usize << n;
    check_cap(d * d)?;
    let mut v = CVec::zeros(d * d);
    let amp = cr(1.0 / (d as f64).sqrt());
    for ia in 0..d {
        let mut ib = 0usize;
        for j in 1..=n {
            let bit = (ia >> (n - j)) & 1;
            ib |= bit << (n - shift_of(n, j));
        }
        v[ia * d + ib] = amp;
    }
    let ideal = ideal_chsh_strategy();
    let b: Vec<[Reflection; 2]> = (1..=n)
        .map(|j| {
            let pos = shift_of(n, j);
            [
                at_qubit(n, pos, ideal.bob(0).matrix()),
                at_qubit(n, pos, ideal.bob(1).matrix()),
            ]
        })
        .collect();
    let a = qubit_rules(n, Device::Alice);
    SequentialStrategy::from_rules(
        n,
        [d, d, 1],
        PureState::new(v)?,
        move |j, _h, q| a[j - 1][(q & 1) as usize].clone(),
        move |j, _h, q| b[j - 1][(q & 1) as usize].clone(),
    )
}

fn transcript_adaptive(n: usize) -> Result<SequentialStrategy> {
    let d = 1usize << n;
    check_cap(d * d)?;
    let gave_one = |h: &[(u8, u8)]| h.iter().any(|&(_, ans)| ans == 1);
    let freeze = Reflection::new(identity(d)).expect("the identity reflects");
    let a = qubit_rules(n, Device::Alice);
    let b = qubit_rules(n, Device::Bob);
    let fa = freeze.clone();
    let fb = freeze;
    SequentialStrategy::from_rules(
        n,
        [d, d, 1],
        epr_chain(n),
        move |j, h, q| {
            if gave_one(h) {
                fa.clone()
            } else {
                a[j - 1][(q & 1) as usize].clone()
            }
        },
        move |j, h, q| {
            if gave_one(h) {
                fb.clone()
            } else {
                b[j - 1][(q & 1) as usize].clone()
            }
        },
    )
}

pub fn adversary(kind: AdversaryKind, n: usize) -> Result<SequentialStrategy> {
    if n > 15 {
        return Err(Error::Capacity(format!("{n} games is far beyond desk scale")));
    }
    match kind {
        AdversaryKind::Honest => honest(n),
        AdversaryKind::Classical => classical(n),
        AdversaryKind::Depolarized(p) => depolarized(n, p),
        AdversaryKind::Rotated(phi) => rotated(n, phi),
        AdversaryKind::QubitShift => qubit_shift(n),
        AdversaryKind::TranscriptAdaptive => transcript_adaptive(n),
    }
}

/// Parses "name" or "name:param". Parameter defaults: depolarized 0.05,
/// rotated 0.1.
pub fn adversary_by_name(name: &str, n: usize) -> Result<SequentialStrategy> {
    let (head, param) = match name.split_once(':') {
        Some((h, p)) => (h, Some(p)),
        None => (name, None),
    };
    let value = |default: f64| -> Result<f64> {
        match param {
            None => Ok(default),
            Some(raw) => raw.parse().map_err(|_| {
                Error::Strategy(format!("adversary parameter {raw:?} is not a number"))
            }),
        }
    };
    let kind = match head {
        "honest" => AdversaryKind::Honest,
        "classical" => AdversaryKind::Classical,
        "depolarized" => AdversaryKind::Depolarized(value(0.05)?),
        "rotated" => AdversaryKind::Rotated(value(0.1)?),
        "qubit-shift" => AdversaryKind::QubitShift,
        "adaptive" => AdversaryKind::TranscriptAdaptive,
        other => return Err(Error::UnknownAdversary(other.to_string())),
    };
    if param.is_some() && !matches!(kind, AdversaryKind::Depolarized(_) | AdversaryKind::Rotated(_))
    {
        return Err(Error::Strategy(format!("adversary {head:?} takes no parameter")));
    }
    adversary(kind, n)
}
