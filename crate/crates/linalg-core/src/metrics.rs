//! Distance bounds and rounding utilities for states and observables.

use std::collections::BTreeMap;
use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::matrix::{cr, eigh, is_hermitian, sqrt_psd, trace_norm, CMat, CVec};
use crate::reflection::Reflection;
use crate::state::{DensityMatrix, PureState};
use crate::VALIDATION_TOL;

/// Distance data for two block-diagonal families over a common label set.
///
/// Returns (tv, expected_conditional) where tv is the total variation
/// distance between the trace distributions and expected_conditional is the
/// average trace-norm distance between renormalized blocks, weighted by the
/// first family. A block whose counterpart has zero trace is compared
/// against the zero matrix.
pub fn block_diag_distance<K: Ord + Debug>(
    rho1: &BTreeMap<K, DensityMatrix>,
    rho2: &BTreeMap<K, DensityMatrix>,
) -> Result<(f64, f64)> {
    if rho1.len() != rho2.len() || rho1.keys().zip(rho2.keys()).any(|(a, b)| a != b) {
        return Err(Error::Labels(format!(
            "{} vs {} labels",
            rho1.len(),
            rho2.len()
        )));
    }
    let mut tv = 0.0;
    let mut expected = 0.0;
    for (label, b1) in rho1 {
        let b2 = &rho2[label];
        if b1.dim() != b2.dim() {
            return Err(Error::Dimension(format!(
                "blocks at label {label:?} have dims {} and {}",
                b1.dim(),
                b2.dim()
            )));
        }
        let (t1, t2) = (b1.trace_re(), b2.trace_re());
        tv += 0.5 * (t1 - t2).abs();
        if t1 > 1e-15 {
            let n1 = b1.matrix().scale(1.0 / t1);
            let n2 = if t2 > 1e-15 {
                b2.matrix().scale(1.0 / t2)
            } else {
                CMat::zeros(b2.dim(), b2.dim())
            };
            expected += t1 * trace_norm(&(n1 - n2))?;
        }
    }
    Ok((tv, expected))
}

/// Rounds a Hermitian contraction to the nearest reflection along `phi`.
///
/// Each eigenvalue of `h` is rounded to the nearer of +-1 (ties go to +1).
/// With eps = ||(u - h) phi||, the returned residual ||(u - delta) phi|| is
/// at most eps + 2^{4/3} eps^{1/3}: eigenvalues within (2 eps)^{1/3} of a
/// pole move by at most that cutoff, and the remaining eigenspaces carry
/// little of phi because ||h phi|| is close to 1.
pub fn hermitian_to_reflection(
    h: &CMat,
    phi: &PureState,
    u: &CMat,
) -> Result<(Reflection, f64)> {
    let d = phi.dim();
    if h.nrows() != d || h.ncols() != d || u.nrows() != d || u.ncols() != d {
        return Err(Error::Dimension(format!(
            "operator dims {}x{} / {}x{} against state dim {d}",
            h.nrows(),
            h.ncols(),
            u.nrows(),
            u.ncols()
        )));
    }
    if !is_hermitian(h, 1e-8) {
        return Err(Error::Validation(
            "hermitian_to_reflection input is not Hermitian".into(),
        ));
    }
    let (vals, vecs) = eigh(h)?;
    let max_abs = vals.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    if max_abs > 1.0 + VALIDATION_TOL {
        return Err(Error::Validation(format!(
            "operator norm {max_abs} exceeds 1"
        )));
    }
    let mut delta = CMat::zeros(d, d);
    for i in 0..d {
        let sign = if vals[i] < 0.0 { -1.0 } else { 1.0 };
        let v = vecs.column(i);
        for r in 0..d {
            for cc in 0..d {
                delta[(r, cc)] += cr(sign) * v[r] * v[cc].conj();
            }
        }
    }
    let residual = ((u - &delta) * phi.amplitudes()).norm();
    Ok((Reflection::new(delta)?, residual))
}

/// Both sides of the gentle measurement bound.
///
/// Returns (lhs, rhs) with lhs = ||rho - sqrt(Pi) rho sqrt(Pi)||_1 and
/// rhs = 2 sqrt(1 - Tr(Pi rho)); lhs <= rhs always holds.
pub fn gentle_measurement_residual(rho: &DensityMatrix, pi: &CMat) -> Result<(f64, f64)> {
    if pi.nrows() != rho.dim() || pi.ncols() != rho.dim() {
        return Err(Error::Dimension(format!(
            "Pi is {}x{} against state dim {}",
            pi.nrows(),
            pi.ncols(),
            rho.dim()
        )));
    }
    if !is_hermitian(pi, 1e-8) {
        return Err(Error::Validation("Pi is not Hermitian".into()));
    }
    let (vals, _) = eigh(pi)?;
    for &v in &vals {
        if !(-VALIDATION_TOL..=1.0 + VALIDATION_TOL).contains(&v) {
            return Err(Error::Validation(format!(
                "Pi eigenvalue {v} outside [0, 1]"
            )));
        }
    }
    let root = sqrt_psd(pi)?;
    let lhs = trace_norm(&(rho.matrix() - &root * rho.matrix() * &root))?;
    let overlap = (pi * rho.matrix()).trace().re;
    let rhs = 2.0 * (1.0 - overlap).max(0.0).sqrt();
    Ok((lhs, rhs))
}

/// Indices of points within sqrt(2 delta / p) of the mean, for points in the
/// unit ball with delta = 1 - ||mean||.
///
/// The returned set always contains at least a (1 - p) fraction of the
/// points: the squared distances average to at most 2 delta, so by Markov at
/// most a p fraction can exceed 2 delta / p.
pub fn markov_unit_ball(points: &[Vec<f64>], p: f64) -> Result<Vec<usize>> {
    if points.is_empty() {
        return Err(Error::Validation("empty point set".into()));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Validation(format!("p = {p} outside (0, 1)")));
    }
    let dim = points[0].len();
    if points.iter().any(|x| x.len() != dim) {
        return Err(Error::Dimension("points of mixed dimension".into()));
    }
    for x in points {
        let n2: f64 = x.iter().map(|v| v * v).sum();
        if n2 > 1.0 + 2.0 * VALIDATION_TOL {
            return Err(Error::Validation(format!(
                "point norm {} exceeds 1",
                n2.sqrt()
            )));
        }
    }
    let n = points.len() as f64;
    let mean: Vec<f64> = (0..dim)
        .map(|i| points.iter().map(|x| x[i]).sum::<f64>() / n)
        .collect();
    let mean_norm = mean.iter().map(|v| v * v).sum::<f64>().sqrt();
    let delta = (1.0 - mean_norm).max(0.0);
    let thr = (2.0 * delta / p).sqrt() + 1e-12;
    Ok(points
        .iter()
        .enumerate()
        .filter(|(_, x)| {
            let d2: f64 = x
                .iter()
                .zip(&mean)
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            d2.sqrt() <= thr
        })
        .map(|(i, _)| i)
        .collect())
}

/// Three comparable distances between the rank-one operators of two vectors.
///
/// Returns (lower, mid, upper) with
///   lower = sqrt(2) min over phases of ||a - e^{i phi} b||,
///   mid   = || |a><a| - |b><b| ||_1,
///   upper = 2 ||a - b||,
/// and lower <= mid <= upper for unit vectors. The trace norm of a
/// difference of rank-one operators has the closed form
/// sqrt((||a||^2 + ||b||^2)^2 - 4 |<a,b>|^2).
pub fn vector_vs_trace_distance(a: &CVec, b: &CVec) -> Result<(f64, f64, f64)> {
    if a.len() != b.len() {
        return Err(Error::Dimension(format!(
            "vectors of dims {} and {}",
            a.len(),
            b.len()
        )));
    }
    let na2 = a.norm_squared();
    let nb2 = b.norm_squared();
    let ip = a.dotc(b).norm();
    let lower = (2.0 * (na2 + nb2 - 2.0 * ip).max(0.0)).sqrt();
    let mid = ((na2 + nb2).powi(2) - 4.0 * ip * ip).max(0.0).sqrt();
    let upper = 2.0 * (a - b).norm();
    Ok((lower, mid, upper))
}
