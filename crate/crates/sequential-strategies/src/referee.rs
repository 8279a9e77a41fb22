//! The statistical referee and the self-testing parameter solver.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sample::sample_games;
use crate::strategy::SequentialStrategy;

/// Minimal total wins for accepting N sessions of n games each:
/// cos^2(pi/8) * Nn - sqrt(Nn * ln(Nn)) / (2 sqrt 2). Natural log.
pub fn referee_threshold(sessions: u64, rounds: u64) -> Result<f64> {
    let total = sessions.checked_mul(rounds).ok_or_else(|| {
        Error::Strategy(format!("{sessions} sessions x {rounds} rounds overflows"))
    })?;
    if total < 2 {
        return Err(Error::Strategy(format!(
            "threshold needs at least 2 games total, got {total}"
        )));
    }
    let t = total as f64;
    let mean = (std::f64::consts::PI / 8.0).cos().powi(2) * t;
    Ok(mean - (t * t.ln()).sqrt() / (2.0 * std::f64::consts::SQRT_2))
}

/// Outcome of one refereed run.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct RefereeVerdict {
    pub games_won: u64,
    pub threshold: f64,
    pub accepted: bool,
    pub seed: u64,
}

/// Plays `sessions` independent n-game sequences against the strategy and
/// accepts iff the total win count reaches the threshold.
pub fn run_referee(
    s: &SequentialStrategy,
    sessions: u64,
    seed: u64,
) -> Result<RefereeVerdict> {
    let threshold = referee_threshold(sessions, s.n() as u64)?;
    let records = sample_games(s, sessions as usize, seed)?;
    let games_won = records
        .iter()
        .flat_map(|seq| seq.iter())
        .filter(|r| r.win)
        .count() as u64;
    Ok(RefereeVerdict {
        games_won,
        threshold,
        accepted: games_won as f64 >= threshold,
        seed,
    })
}

/// Lower bound on the probability that an honest device wins at least
/// (cos^2(pi/8) - delta) * n of n games: 1 - e^{-2 delta^2 n}. A zero delta
/// is allowed and gives the vacuous bound 0.
pub fn hoeffding_pass_bound(n: u64, delta: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::Strategy(format!(
            "deviation {delta} outside [0, 1)"
        )));
    }
    Ok(1.0 - (-2.0 * delta * delta * n as f64).exp())
}

/// Session count N, exact when it fits, otherwise carried as ln N.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum SessionCount {
    Exact(u128),
    LnValue(f64),
}

impl SessionCount {
    pub fn ln(&self) -> f64 {
        match *self {
            SessionCount::Exact(v) => (v as f64).ln(),
            SessionCount::LnValue(l) => l,
        }
    }
}

/// Solved self-testing parameters.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SelfTestParams {
    /// Solution of n*/ln n* = rhs on (e, infinity).
    pub n_star: f64,
    /// The equation's right-hand side, kept for reporting.
    pub rhs: f64,
    /// N = max(n, n*)^(4 kappa*^2 + 2).
    pub sessions: SessionCount,
}

/// Solves the games-per-session and session-count sizes for a soundness
/// target eps, confidence factor k, and exponent constant kappa*.
///
/// n* solves n*/ln n* = 256 k^2 (4 kappa*^2 + 3) kappa*^{4 kappa*} / eps^{4 kappa*}
/// by bisection; the left side is increasing on (e, infinity), so the
/// solution is unique there. `n_games` is the per-session game count the
/// caller intends to run; the session count uses whichever of n_games and
/// n* is larger.
pub fn self_test_params(
    eps: f64,
    k: f64,
    kappa_star: f64,
    n_games: u64,
) -> Result<SelfTestParams> {
    if !(eps > 0.0) || !(k > 0.0) || !(kappa_star >= 1.0) {
        return Err(Error::Strategy(format!(
            "need eps > 0, k > 0, kappa* >= 1; got ({eps}, {k}, {kappa_star})"
        )));
    }
    let e = std::f64::consts::E;
    let four_ks = 4.0 * kappa_star;
    let rhs = 256.0 * k * k * (kappa_star * four_ks + 3.0) * (kappa_star / eps).powf(four_ks);
    if !rhs.is_finite() || rhs <= e {
        return Err(Error::Degenerate(format!(
            "x/ln x = {rhs} has no solution above e"
        )));
    }
    let f = |x: f64| x / x.ln();
    let mut lo = e * (1.0 + 1e-9);
    let mut hi = lo * 2.0;
    while f(hi) < rhs {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < rhs {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let n_star = 0.5 * (lo + hi);
    let exponent = four_ks * kappa_star + 2.0;
    let base = (n_games as f64).max(n_star);
    let integral = |v: f64| (v - v.round()).abs() <= 1e-9;
    let sessions = if integral(exponent) && integral(base) && exponent >= 0.0 {
        match (base.round() as u128).checked_pow(exponent.round() as u32) {
            Some(v) => SessionCount::Exact(v),
            None => SessionCount::LnValue(exponent * base.ln()),
        }
    } else {
        SessionCount::LnValue(exponent * base.ln())
    };
    Ok(SelfTestParams {
        n_star,
        rhs,
        sessions,
    })
}
