//! Seeded random generators for states and operators.
//!
//! Used by simulation drivers and by tests that sweep random instances. All
//! functions are deterministic in the supplied RNG.

use rand::Rng;

use crate::matrix::{c, cr, CMat, CVec};
use crate::reflection::Reflection;
use crate::state::{DensityMatrix, PureState, SuperOperator};

/// Standard normal sample via Box-Muller.
fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Complex number with independent standard normal parts.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> crate::matrix::C {
    c(gaussian(rng), gaussian(rng))
}

/// Vector of independent complex Gaussians.
pub fn gaussian_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CVec {
    CVec::from_fn(dim, |_, _| complex_gaussian(rng))
}

pub fn random_pure<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> PureState {
    PureState::normalized(gaussian_vector(dim, rng)).expect("gaussian vector is nonzero")
}

/// Modified Gram-Schmidt with one re-orthogonalization pass.
fn orthonormalize(cols: Vec<CVec>) -> Vec<CVec> {
    let mut q: Vec<CVec> = Vec::with_capacity(cols.len());
    for mut v in cols {
        for _ in 0..2 {
            for u in &q {
                let overlap = u.dotc(&v);
                v -= u * overlap;
            }
        }
        let n = v.norm();
        assert!(n > 1e-10, "rank-deficient random matrix");
        q.push(v.scale(1.0 / n));
    }
    q
}

/// Haar-ish random unitary from orthonormalized Gaussian columns.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMat {
    let cols = orthonormalize((0..dim).map(|_| gaussian_vector(dim, rng)).collect());
    let mut m = CMat::zeros(dim, dim);
    for (j, col) in cols.iter().enumerate() {
        m.set_column(j, col);
    }
    m
}

/// Random reflection U D U^dag with uniformly random +-1 diagonal.
pub fn random_reflection<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Reflection {
    let u = random_unitary(dim, rng);
    let mut d = CMat::zeros(dim, dim);
    for i in 0..dim {
        d[(i, i)] = cr(if rng.gen_bool(0.5) { 1.0 } else { -1.0 });
    }
    Reflection::new(&u * d * u.adjoint()).expect("constructed reflection")
}

/// Full-rank random density matrix from a normalized Gaussian Gram matrix.
pub fn random_density<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
    let g = CMat::from_fn(dim, dim, |_, _| complex_gaussian(rng));
    let gram = &g * g.adjoint();
    let t = gram.trace().re;
    DensityMatrix::new(gram.scale(1.0 / t)).expect("normalized Gram matrix")
}

/// Random Hermitian matrix with Gaussian entries (unbounded norm).
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMat {
    let g = CMat::from_fn(dim, dim, |_, _| complex_gaussian(rng));
    (&g + g.adjoint()).scale(0.5)
}

/// Random Hermitian matrix rescaled to operator norm at most `cap`.
pub fn random_hermitian_capped<R: Rng + ?Sized>(dim: usize, cap: f64, rng: &mut R) -> CMat {
    let h = random_hermitian(dim, rng);
    let norm = crate::matrix::operator_norm(&h);
    if norm <= cap {
        h
    } else {
        h.scale(cap / norm)
    }
}

/// Random operator with 0 <= Pi <= I from uniform eigenvalues.
pub fn random_effect<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMat {
    let u = random_unitary(dim, rng);
    let mut d = CMat::zeros(dim, dim);
    for i in 0..dim {
        d[(i, i)] = cr(rng.gen::<f64>());
    }
    &u * d * u.adjoint()
}

/// Random rank-r orthogonal projector.
pub fn random_projector<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> CMat {
    assert!(rank <= dim);
    let cols = orthonormalize((0..rank).map(|_| gaussian_vector(dim, rng)).collect());
    let mut p = CMat::zeros(dim, dim);
    for col in &cols {
        for i in 0..dim {
            for j in 0..dim {
                p[(i, j)] += col[i] * col[j].conj();
            }
        }
    }
    p
}

/// Random channel on `dim` with `n_env` Kraus operators, built from a
/// random isometry into system tensor environment.
pub fn random_superoperator<R: Rng + ?Sized>(
    dim: usize,
    n_env: usize,
    rng: &mut R,
) -> SuperOperator {
    assert!(n_env >= 1);
    let cols = orthonormalize(
        (0..dim)
            .map(|_| gaussian_vector(dim * n_env, rng))
            .collect(),
    );
    let kraus: Vec<CMat> = (0..n_env)
        .map(|e| {
            CMat::from_fn(dim, dim, |s, j| cols[j][e * dim + s])
        })
        .collect();
    SuperOperator::new(kraus).expect("isometry rows form a channel")
}
