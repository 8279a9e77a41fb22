//! Joint block decomposition of a pair of reflections.
//!
//! Two reflections decompose the space into orthogonal subspaces of
//! dimension at most two, invariant under both. In a suitable basis for each
//! two-dimensional block the first reflection acts as Z and the second as
//! [[cos 2t, sin 2t], [sin 2t, -cos 2t]] for a block angle t. One-dimensional
//! invariant lines are paired up into such blocks when their signs allow it
//! (t = 0 or pi/2); an unpairable leftover line is padded with a zero column
//! standing for a direction in an implicit one-dimensional extension of the
//! space.
//!
//! ## Algorithm
//! Let W = R0 R1. The Hermitian parts A = (W + W^dag)/2 and
//! K = (W - W^dag)/(2i) commute, and R0 A R0 = A while R0 K R0 = -K. A joint
//! eigenvector v of (A, K) with K-eigenvalue s > 0 satisfies W v = e^{2it} v,
//! and R0 v is its partner with eigenvalue e^{-2it}. The pair
//!   p = (v + R0 v)/sqrt(2),  m = -i (v - R0 v)/sqrt(2)
//! is an orthonormal block basis in which R0 and R1 take exactly the shapes
//! above; the factor -i on m pins the phase so that the off-diagonal of the
//! restricted R1 is real positive. Joint eigenvectors with K-eigenvalue 0 are
//! W-eigenvectors with eigenvalue +-1; diagonalizing R0 on that subspace
//! yields the one-dimensional lines and their (R0, R1) sign pairs.

use crate::error::{Error, Result};
use crate::matrix::{c, check_reflection, cr, identity, max_abs_diff, CMat, CVec};
use crate::reflection::Reflection;
use crate::VALIDATION_TOL;

/// Eigenvalues of A closer than this are treated as one cluster, and
/// K-eigenvalues below it as zero.
const CLUSTER_TOL: f64 = 1e-8;

/// One invariant block of a reflection pair.
#[derive(Debug, Clone)]
pub struct JordanBlock {
    /// d x 2 matrix of orthonormal columns; padded blocks carry one zero
    /// column in the slot fixed by the sign of the restricted R0.
    basis: CMat,
    /// Block angle in [0, pi/2].
    theta: f64,
    /// True when the block is a padded one-dimensional line.
    padded: bool,
}

impl JordanBlock {
    pub fn basis(&self) -> &CMat {
        &self.basis
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn padded(&self) -> bool {
        self.padded
    }

    /// Dimension of the block inside the original space (1 when padded).
    pub fn rank(&self) -> usize {
        if self.padded {
            1
        } else {
            2
        }
    }

    /// Projector onto the block subspace.
    pub fn projector(&self) -> CMat {
        &self.basis * self.basis.adjoint()
    }

    /// 2x2 restriction B^dag op B of a full-space operator.
    pub fn restricted(&self, op: &CMat) -> CMat {
        self.basis.adjoint() * op * &self.basis
    }
}

/// Restricted shape of the second reflection at block angle `theta`.
pub fn block_r1(theta: f64) -> CMat {
    let (s, c2) = (2.0 * theta).sin_cos();
    CMat::from_row_slice(2, 2, &[cr(c2), cr(s), cr(s), cr(-c2)])
}

/// Decomposes a reflection pair into invariant blocks covering the space.
///
/// Blocks are returned sorted by angle and are deterministic for a fixed
/// input. The direct sum of the restricted operators reconstructs the inputs
/// within 1e-9; this is verified before returning.
pub fn jordan_decompose(r0: &Reflection, r1: &Reflection) -> Result<Vec<JordanBlock>> {
    if r0.dim() != r1.dim() {
        return Err(Error::Dimension(format!(
            "reflections have dims {} and {}",
            r0.dim(),
            r1.dim()
        )));
    }
    check_reflection(r0.matrix(), "jordan_decompose r0")?;
    check_reflection(r1.matrix(), "jordan_decompose r1")?;
    let d = r0.dim();
    let w = r0.matrix() * r1.matrix();
    let a = (&w + w.adjoint()).scale(0.5);
    let k = (&w - w.adjoint()) * c(0.0, -0.5);

    let (avals, avecs) = crate::matrix::eigh(&a)?;

    let mut blocks: Vec<JordanBlock> = Vec::new();
    let mut lines: [Vec<CVec>; 4] = [Vec::new(), Vec::new(), Vec::new(), Vec::new()];

    let mut start = 0;
    while start < d {
        let mut end = start + 1;
        while end < d && avals[end] - avals[end - 1] <= CLUSTER_TOL {
            end += 1;
        }
        let q = avecs.columns(start, end - start).into_owned();
        let kp = q.adjoint() * &k * &q;
        let (svals, wvecs) = crate::matrix::eigh(&kp)?;
        let joint = &q * wvecs;
        let mut zero_k: Vec<CVec> = Vec::new();
        for (i, &s) in svals.iter().enumerate() {
            let v = joint.column(i).into_owned();
            if s > CLUSTER_TOL {
                blocks.push(rotation_block(&v, r0.matrix(), &w));
            } else if s >= -CLUSTER_TOL {
                // Defer; R0 is diagonalized on the zero-K subspace below.
                zero_k.push(v);
            }
            // s < -CLUSTER_TOL vectors are the R0-partners of the s > 0 ones.
        }

        // Zero-K vectors of this cluster are W-eigenvectors with a real
        // eigenvalue, so R1 = +-R0 on them. Splitting them into R0
        // eigenlines must happen per cluster; mixing clusters would blend
        // R1-eigenvectors for different eigenvalues.
        if !zero_k.is_empty() {
            let mut t = CMat::zeros(d, zero_k.len());
            for (j, v) in zero_k.iter().enumerate() {
                t.set_column(j, v);
            }
            let r0t = t.adjoint() * r0.matrix() * &t;
            let (_, uvecs) = crate::matrix::eigh(&r0t)?;
            let lifted = &t * uvecs;
            for i in 0..lifted.ncols() {
                let x = lifted.column(i).into_owned();
                let s0 = rayleigh_sign(&x, r0.matrix())?;
                let s1 = rayleigh_sign(&x, r1.matrix())?;
                let class = match (s0 > 0.0, s1 > 0.0) {
                    (true, true) => 0,
                    (true, false) => 1,
                    (false, true) => 2,
                    (false, false) => 3,
                };
                lines[class].push(canonical_phase_vec(&x));
            }
        }
        start = end;
    }

    for class in &mut lines {
        class.sort_by(|a, b| vec_key(a).cmp(&vec_key(b)));
    }
    // (+,+) pairs with (-,-) at angle 0; (+,-) pairs with (-,+) at pi/2.
    pair_lines(&mut blocks, &mut lines, 0, 3, 0.0, d);
    pair_lines(&mut blocks, &mut lines, 1, 2, std::f64::consts::FRAC_PI_2, d);
    for (class, rest) in lines.into_iter().enumerate() {
        for x in rest {
            let plus_slot = class < 2;
            let theta = if class == 0 || class == 3 {
                0.0
            } else {
                std::f64::consts::FRAC_PI_2
            };
            let mut basis = CMat::zeros(d, 2);
            basis.set_column(if plus_slot { 0 } else { 1 }, &x);
            blocks.push(JordanBlock {
                basis,
                theta,
                padded: true,
            });
        }
    }

    blocks.sort_by(|a, b| {
        (a.theta, a.padded, vec_key(&flat(&a.basis))).partial_cmp(&(
            b.theta,
            b.padded,
            vec_key(&flat(&b.basis)),
        ))
        .unwrap()
    });

    // The decomposition must cover the space and reproduce the inputs.
    let mut proj = CMat::zeros(d, d);
    for b in &blocks {
        proj += b.projector();
    }
    let (rec0, rec1) = reconstruct_reflections(&blocks, d);
    if max_abs_diff(&proj, &identity(d)) > VALIDATION_TOL
        || max_abs_diff(&rec0, r0.matrix()) > VALIDATION_TOL
        || max_abs_diff(&rec1, r1.matrix()) > VALIDATION_TOL
    {
        return Err(Error::Validation(
            "block decomposition failed to reconstruct its inputs".into(),
        ));
    }
    Ok(blocks)
}

/// Direct sum of the restricted shapes over the given blocks.
pub fn reconstruct_reflections(blocks: &[JordanBlock], dim: usize) -> (CMat, CMat) {
    let z = crate::matrix::pauli_z();
    let mut rec0 = CMat::zeros(dim, dim);
    let mut rec1 = CMat::zeros(dim, dim);
    for b in blocks {
        rec0 += &b.basis * &z * b.basis.adjoint();
        rec1 += &b.basis * block_r1(b.theta) * b.basis.adjoint();
    }
    (rec0, rec1)
}

/// Builds the two-dimensional block for a joint eigenvector with positive
/// K-eigenvalue.
fn rotation_block(v: &CVec, r0: &CMat, w: &CMat) -> JordanBlock {
    let r0v = r0 * v;
    let sqrt_half = std::f64::consts::FRAC_1_SQRT_2;
    let mut p = (v + &r0v).scale(sqrt_half);
    p = p.scale(1.0 / p.norm());
    let mut m = ((v - &r0v) * c(0.0, -1.0)).scale(sqrt_half);
    m = m.scale(1.0 / m.norm());
    // <v|W|v> = e^{2i theta} on an exact eigenvector.
    let phase = v.dotc(&(w * v));
    let theta = 0.5 * phase.im.atan2(phase.re);

    let d = v.len();
    let mut basis = CMat::zeros(d, 2);
    basis.set_column(0, &p);
    basis.set_column(1, &m);
    let basis = canonical_phase(&basis);
    JordanBlock {
        basis,
        theta,
        padded: false,
    }
}

fn pair_lines(
    blocks: &mut Vec<JordanBlock>,
    lines: &mut [Vec<CVec>; 4],
    plus_class: usize,
    minus_class: usize,
    theta: f64,
    d: usize,
) {
    while !lines[plus_class].is_empty() && !lines[minus_class].is_empty() {
        let vp = lines[plus_class].remove(0);
        let vm = lines[minus_class].remove(0);
        let mut basis = CMat::zeros(d, 2);
        basis.set_column(0, &vp);
        basis.set_column(1, &vm);
        blocks.push(JordanBlock {
            basis,
            theta,
            padded: false,
        });
    }
}

/// Sign of <x|M|x> for x an approximate +-1 eigenvector of M.
fn rayleigh_sign(x: &CVec, m: &CMat) -> Result<f64> {
    let val = x.dotc(&(m * x)).re;
    if val.abs() < 0.5 {
        return Err(Error::Validation(format!(
            "expected a +-1 eigenvector, Rayleigh quotient {val}"
        )));
    }
    Ok(val.signum())
}

/// Rotates both columns by one phase so the largest-modulus entry of the
/// dominant column is real positive.
fn canonical_phase(basis: &CMat) -> CMat {
    let pivot_col = if basis.column(0).norm() > 0.5 { 0 } else { 1 };
    let col = basis.column(pivot_col);
    let mut best = 0usize;
    for i in 0..col.len() {
        if col[i].norm() > col[best].norm() + 1e-12 {
            best = i;
        }
    }
    let z = col[best];
    if z.norm() < 1e-12 {
        return basis.clone();
    }
    basis * (z.conj() / cr(z.norm()))
}

fn canonical_phase_vec(x: &CVec) -> CVec {
    let mut best = 0usize;
    for i in 0..x.len() {
        if x[i].norm() > x[best].norm() + 1e-12 {
            best = i;
        }
    }
    let z = x[best];
    if z.norm() < 1e-12 {
        return x.clone();
    }
    x * (z.conj() / cr(z.norm()))
}

/// Stable integer key for deterministic ordering of near-equal vectors.
fn vec_key(x: &CVec) -> Vec<(i64, i64)> {
    x.iter()
        .map(|z| ((z.re * 1e9).round() as i64, (z.im * 1e9).round() as i64))
        .collect()
}

fn flat(m: &CMat) -> CVec {
    CVec::from_iterator(m.nrows() * m.ncols(), m.iter().cloned())
}
