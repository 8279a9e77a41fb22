//! Matrix aliases, fixed gates, and spectral helpers.
//!
//! Tensor products are row-major: `kron(a, b)` puts `a` on the more
//! significant factor, so qubit 0 of a register owns the most significant
//! bit of a basis index.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::VALIDATION_TOL;

pub type C = Complex64;
pub type CMat = DMatrix<C>;
pub type CVec = DVector<C>;

/// Complex number from real and imaginary parts.
#[inline]
pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// Real number as a complex scalar.
#[inline]
pub fn cr(re: f64) -> C {
    C::new(re, 0.0)
}

/// n x n identity.
pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Conjugate transpose.
pub fn dagger(m: &CMat) -> CMat {
    m.adjoint()
}

/// Kronecker product, `a` on the more significant factor.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Kronecker product of a sequence; empty input gives the 1x1 identity.
pub fn kron_all(ms: &[CMat]) -> CMat {
    let mut out = identity(1);
    for m in ms {
        out = kron(&out, m);
    }
    out
}

/// 2x2 matrix from row-major entries.
pub fn mat2(a: C, b: C, cc: C, d: C) -> CMat {
    CMat::from_row_slice(2, 2, &[a, b, cc, d])
}

pub fn pauli_i() -> CMat {
    identity(2)
}

pub fn pauli_x() -> CMat {
    mat2(cr(0.0), cr(1.0), cr(1.0), cr(0.0))
}

pub fn pauli_y() -> CMat {
    mat2(cr(0.0), c(0.0, -1.0), c(0.0, 1.0), cr(0.0))
}

pub fn pauli_z() -> CMat {
    mat2(cr(1.0), cr(0.0), cr(0.0), cr(-1.0))
}

pub fn hadamard() -> CMat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    mat2(cr(s), cr(s), cr(s), cr(-s))
}

/// Real rotation by pi/8: [[cos, -sin], [sin, cos]] with angle pi/8.
pub fn gate_g() -> CMat {
    let a = std::f64::consts::PI / 8.0;
    mat2(cr(a.cos()), cr(-a.sin()), cr(a.sin()), cr(a.cos()))
}

/// CNOT on two qubits, control on the more significant factor.
pub fn cnot() -> CMat {
    let mut m = identity(4);
    m[(2, 2)] = cr(0.0);
    m[(3, 3)] = cr(0.0);
    m[(2, 3)] = cr(1.0);
    m[(3, 2)] = cr(1.0);
    m
}

/// Largest entrywise modulus of a - b.
pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!(a.shape(), b.shape(), "max_abs_diff shape mismatch");
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn is_hermitian(m: &CMat, tol: f64) -> bool {
    m.is_square() && max_abs_diff(m, &m.adjoint()) <= tol
}

pub fn is_unitary(m: &CMat, tol: f64) -> bool {
    m.is_square() && max_abs_diff(&(m.adjoint() * m), &identity(m.nrows())) <= tol
}

/// Sum of singular values.
pub fn trace_norm(m: &CMat) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "trace_norm requires a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let sv = m.clone().svd(false, false).singular_values;
    Ok(sv.iter().sum())
}

/// Largest singular value.
pub fn operator_norm(m: &CMat) -> f64 {
    let sv = m.clone().svd(false, false).singular_values;
    sv.iter().cloned().fold(0.0, f64::max)
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
///
/// The skew-Hermitian part of the input is discarded before decomposing, so
/// results are only meaningful when the input is Hermitian up to roundoff.
///
/// Cyclic Jacobi rather than a library QR solver: the rest of the crate
/// feeds this matrices with tightly clustered eigenvalues (reflection
/// products cluster at exactly +-1), and eigenvector residuals there must
/// stay near machine precision for block reconstruction to hold.
pub fn eigh(m: &CMat) -> Result<(Vec<f64>, CMat)> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "eigh requires a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if !is_hermitian(m, 1e-8) {
        return Err(Error::Validation(
            "eigh input is not Hermitian within 1e-8".into(),
        ));
    }
    let n = m.nrows();
    let mut a = (m + m.adjoint()).scale(0.5);
    let mut v = identity(n);
    let scale = a.iter().map(|z| z.norm()).fold(0.0f64, f64::max).max(1e-300);
    let tol = 1e-15 * scale;
    for _ in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[(p, q)].norm());
            }
        }
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let beta = a[(p, q)];
                let b = beta.norm();
                if b <= tol {
                    continue;
                }
                let alpha = a[(p, p)].re;
                let gamma = a[(q, q)].re;
                // Rotation angle from t^2 - 2*tau*t - 1 = 0, smaller root.
                let tau = (gamma - alpha) / (2.0 * b);
                let t = if tau >= 0.0 {
                    -1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c0 = 1.0 / (1.0 + t * t).sqrt();
                let s0 = t * c0;
                let u = beta / cr(b);
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = aip * c0 + aiq * s0 * u.conj();
                    a[(i, q)] = -aip * s0 * u + aiq * c0;
                }
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = apj * c0 + aqj * s0 * u;
                    a[(q, j)] = -apj * s0 * u.conj() + aqj * c0;
                }
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * c0 + viq * s0 * u.conj();
                    v[(i, q)] = -vip * s0 * u + viq * c0;
                }
            }
        }
    }
    let raw: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| raw[i].partial_cmp(&raw[j]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| raw[i]).collect();
    let mut vecs = CMat::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        vecs.set_column(k, &v.column(i));
    }
    Ok((vals, vecs))
}

/// Positive-semidefinite square root; negative eigenvalues are clamped to 0.
pub fn sqrt_psd(m: &CMat) -> Result<CMat> {
    let (vals, vecs) = eigh(m)?;
    let n = m.nrows();
    let mut out = CMat::zeros(n, n);
    for k in 0..n {
        let lam = vals[k].max(0.0).sqrt();
        let v = vecs.column(k);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] += cr(lam) * v[i] * v[j].conj();
            }
        }
    }
    Ok(out)
}

/// Embed a single-factor operator at `pos` in a tensor product with the
/// given factor dimensions.
pub fn embed_factor(op: &CMat, dims: &[usize], pos: usize) -> Result<CMat> {
    if pos >= dims.len() {
        return Err(Error::Dimension(format!(
            "factor index {pos} out of range for {} factors",
            dims.len()
        )));
    }
    if op.nrows() != dims[pos] || op.ncols() != dims[pos] {
        return Err(Error::Dimension(format!(
            "operator is {}x{} but factor {pos} has dimension {}",
            op.nrows(),
            op.ncols(),
            dims[pos]
        )));
    }
    let left: usize = dims[..pos].iter().product();
    let right: usize = dims[pos + 1..].iter().product();
    Ok(kron(&kron(&identity(left), op), &identity(right)))
}

/// Embed an operator acting on a subset of tensor factors (listed in the
/// operator's own factor order, not necessarily contiguous or ascending)
/// into the full product space.
pub fn embed_factors(op: &CMat, dims: &[usize], positions: &[usize]) -> Result<CMat> {
    for (i, &p) in positions.iter().enumerate() {
        if p >= dims.len() {
            return Err(Error::Dimension(format!(
                "factor index {p} out of range for {} factors",
                dims.len()
            )));
        }
        if positions[..i].contains(&p) {
            return Err(Error::Dimension(format!("duplicate factor index {p}")));
        }
    }
    let sub: usize = positions.iter().map(|&p| dims[p]).product();
    if op.nrows() != sub || op.ncols() != sub {
        return Err(Error::Dimension(format!(
            "operator is {}x{} but listed factors multiply to {sub}",
            op.nrows(),
            op.ncols()
        )));
    }
    let total: usize = dims.iter().product();
    let decode = |mut idx: usize| -> Vec<usize> {
        let mut digits = vec![0usize; dims.len()];
        for f in (0..dims.len()).rev() {
            digits[f] = idx % dims[f];
            idx /= dims[f];
        }
        digits
    };
    let sub_index = |digits: &[usize]| -> usize {
        positions.iter().fold(0, |acc, &p| acc * dims[p] + digits[p])
    };
    let mut out = CMat::zeros(total, total);
    for r in 0..total {
        let rd = decode(r);
        for cidx in 0..total {
            let cd = decode(cidx);
            let rest_match = (0..dims.len())
                .filter(|f| !positions.contains(f))
                .all(|f| rd[f] == cd[f]);
            if rest_match {
                out[(r, cidx)] = op[(sub_index(&rd), sub_index(&cd))];
            }
        }
    }
    Ok(out)
}

/// Check that a matrix squares to the identity and is Hermitian.
pub(crate) fn check_reflection(m: &CMat, context: &str) -> Result<()> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("{context}: not square")));
    }
    if !is_hermitian(m, 1e-10) {
        return Err(Error::Validation(format!(
            "{context}: not Hermitian within 1e-10"
        )));
    }
    let sq = m * m;
    if max_abs_diff(&sq, &identity(m.nrows())) > VALIDATION_TOL {
        return Err(Error::Validation(format!(
            "{context}: square differs from identity beyond {VALIDATION_TOL}"
        )));
    }
    Ok(())
}
