//! Monte-Carlo front-end: plays games by sampling instead of enumerating.

use rand::Rng;
use serde::{Deserialize, Serialize};

use linalg_core::cr;

use crate::error::{Error, Result};
use crate::strategy::{alice_view, bob_view, apply_at_factor, SequentialStrategy, Transcript};

/// State-vector sampling is limited to this total dimension.
pub const SAMPLING_DIM_CAP: usize = 1 << 12;

/// One played game, in the order it was played. This is the run-log record:
/// one JSON object per line, one line per game.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameRecord {
    pub round: usize,
    pub a: u8,
    pub b: u8,
    pub x: u8,
    pub y: u8,
    pub win: bool,
}

impl GameRecord {
    pub fn from_transcript(t: &Transcript) -> Vec<GameRecord> {
        t.iter()
            .enumerate()
            .map(|(i, &(a, b, x, y))| GameRecord {
                round: i + 1,
                a,
                b,
                x,
                y,
                win: (x ^ y) == (a & b),
            })
            .collect()
    }
}

/// Plays one n-game sequence. Questions are uniform bits drawn as
/// (a, b) per round, then the joint answer pair is drawn from the four
/// projected weights and the state is collapsed and renormalized.
pub(crate) fn sample_transcript<R: Rng + ?Sized>(
    s: &SequentialStrategy,
    rng: &mut R,
) -> Result<Transcript> {
    if s.total_dim() > SAMPLING_DIM_CAP {
        return Err(Error::Capacity(format!(
            "sampling caps the total dimension at {SAMPLING_DIM_CAP}, got {}",
            s.total_dim()
        )));
    }
    let dims = s.dims();
    let mut v = s.psi().amplitudes().clone();
    let mut transcript = Transcript::new();
    for j in 1..=s.n() {
        let a: u8 = rng.gen_range(0..2);
        let b: u8 = rng.gen_range(0..2);
        let ra = s.alice_rule(j, &alice_view(&transcript), a);
        let rb = s.bob_rule(j, &bob_view(&transcript), b);
        let mut outcomes = Vec::with_capacity(4);
        for x in 0..2u8 {
            let u = apply_at_factor(&v, dims, 0, &ra.outcome_projector(x));
            for y in 0..2u8 {
                let w = apply_at_factor(&u, dims, 1, &rb.outcome_projector(y));
                let p = w.norm_squared();
                outcomes.push((x, y, p, w));
            }
        }
        let draw: f64 = rng.gen();
        let mut acc = 0.0;
        let mut pick = outcomes.len() - 1;
        for (i, (_, _, p, _)) in outcomes.iter().enumerate() {
            acc += p;
            if draw < acc {
                pick = i;
                break;
            }
        }
        let (x, y, p, w) = outcomes.swap_remove(pick);
        if p <= 0.0 {
            return Err(Error::ZeroProbability(format!(
                "sampled into a zero-probability outcome at round {j}"
            )));
        }
        v = w / cr(p.sqrt());
        transcript.push((a, b, x, y));
    }
    Ok(transcript)
}

/// Plays `count` independent n-game sequences. Each sequence gets its own
/// RNG stream derived from (seed, trial index), so results are independent
/// of evaluation order and reproducible per trial.
pub fn sample_games(
    s: &SequentialStrategy,
    count: usize,
    seed: u64,
) -> Result<Vec<Vec<GameRecord>>> {
    let mut out = Vec::with_capacity(count);
    for trial in 0..count {
        let mut rng = seedstream::substream(seed, "sequential-games", trial as u64);
        let t = sample_transcript(s, &mut rng)?;
        out.push(GameRecord::from_transcript(&t));
    }
    Ok(out)
}
