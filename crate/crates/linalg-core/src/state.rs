//! Pure states, density matrices, and measurement super-operators.

use crate::error::{Error, Result};
use crate::matrix::{c, cr, identity, is_hermitian, CMat, CVec, C};
use crate::{EQUALITY_TOL, VALIDATION_TOL};

/// A unit vector of amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amps: CVec,
}

impl PureState {
    /// Requires the norm to be 1 within 1e-10.
    pub fn new(amps: CVec) -> Result<Self> {
        let n = amps.norm();
        if (n - 1.0).abs() > EQUALITY_TOL {
            return Err(Error::Validation(format!(
                "pure state norm {n} is not 1 within {EQUALITY_TOL}"
            )));
        }
        Ok(PureState { amps })
    }

    /// Rescales to unit norm; rejects vectors with norm below 1e-12.
    pub fn normalized(amps: CVec) -> Result<Self> {
        let n = amps.norm();
        if n < 1e-12 {
            return Err(Error::Validation("cannot normalize a zero vector".into()));
        }
        Ok(PureState {
            amps: amps.scale(1.0 / n),
        })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &CVec {
        &self.amps
    }

    /// Inner product <self|other>.
    pub fn inner(&self, other: &PureState) -> Result<C> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension(format!(
                "inner product between dims {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(self.amps.dotc(&other.amps))
    }

    /// Rank-one density matrix |psi><psi|.
    pub fn density(&self) -> DensityMatrix {
        let d = self.dim();
        let mut m = CMat::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                m[(i, j)] = self.amps[i] * self.amps[j].conj();
            }
        }
        DensityMatrix {
            m,
            subnormalized: false,
        }
    }
}

/// The maximally entangled pair (|00> + |11>) / sqrt(2).
pub fn epr_pair() -> PureState {
    let s = cr(std::f64::consts::FRAC_1_SQRT_2);
    PureState::new(CVec::from_vec(vec![s, c(0.0, 0.0), c(0.0, 0.0), s])).expect("exact norm")
}

/// A positive semidefinite matrix with trace 1, or trace in [0, 1] when
/// flagged sub-normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: CMat,
    subnormalized: bool,
}

impl DensityMatrix {
    /// Validates hermiticity, eigenvalue positivity, and unit trace.
    pub fn new(m: CMat) -> Result<Self> {
        Self::validate(&m, false)?;
        Ok(DensityMatrix {
            m,
            subnormalized: false,
        })
    }

    /// Same checks but the trace may be anywhere in [0, 1].
    pub fn new_subnormalized(m: CMat) -> Result<Self> {
        Self::validate(&m, true)?;
        Ok(DensityMatrix {
            m,
            subnormalized: true,
        })
    }

    /// Sub-normalized rank-one block |v><v| for a vector of norm at most 1.
    /// Positive by shape, so the eigenvalue scan is skipped.
    pub fn from_outer(v: &CVec) -> Result<Self> {
        let t = v.norm_squared();
        if t > 1.0 + EQUALITY_TOL {
            return Err(Error::Validation(format!(
                "outer-product trace {t} exceeds 1"
            )));
        }
        let d = v.len();
        let mut m = CMat::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        Ok(DensityMatrix {
            m,
            subnormalized: true,
        })
    }

    fn validate(m: &CMat, subnormalized: bool) -> Result<()> {
        if !is_hermitian(m, EQUALITY_TOL) {
            return Err(Error::Validation(
                "density matrix is not Hermitian within 1e-10".into(),
            ));
        }
        let (vals, _) = crate::matrix::eigh(m)?;
        if let Some(lo) = vals.first() {
            if *lo < -EQUALITY_TOL {
                return Err(Error::Validation(format!(
                    "density matrix has negative eigenvalue {lo}"
                )));
            }
        }
        let t = m.trace().re;
        if subnormalized {
            if !(-EQUALITY_TOL..=1.0 + EQUALITY_TOL).contains(&t) {
                return Err(Error::Validation(format!(
                    "sub-normalized trace {t} outside [0, 1]"
                )));
            }
        } else if (t - 1.0).abs() > EQUALITY_TOL {
            return Err(Error::Validation(format!(
                "density matrix trace {t} is not 1 within {EQUALITY_TOL}"
            )));
        }
        Ok(())
    }

    pub fn matrix(&self) -> &CMat {
        &self.m
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn is_subnormalized(&self) -> bool {
        self.subnormalized
    }

    pub fn trace_re(&self) -> f64 {
        self.m.trace().re
    }

    /// Renormalizes to unit trace; errors on (numerically) zero trace.
    pub fn renormalized(&self) -> Result<DensityMatrix> {
        let t = self.trace_re();
        if t < 1e-14 {
            return Err(Error::Validation(
                "cannot renormalize a zero-trace block".into(),
            ));
        }
        Ok(DensityMatrix {
            m: self.m.scale(1.0 / t),
            subnormalized: false,
        })
    }

    /// Partial trace over the factors not listed in `keep`.
    pub fn partial_trace(&self, dims: &[usize], keep: &[usize]) -> Result<DensityMatrix> {
        let m = partial_trace_matrix(&self.m, dims, keep)?;
        Ok(DensityMatrix {
            m,
            subnormalized: self.subnormalized,
        })
    }
}

/// Partial trace of a square matrix over the tensor factors not in `keep`.
///
/// `dims` lists every factor dimension in significance order; `keep` must be
/// strictly increasing. The result keeps the listed factors in their original
/// order.
pub fn partial_trace_matrix(m: &CMat, dims: &[usize], keep: &[usize]) -> Result<CMat> {
    let total: usize = dims.iter().product();
    if m.nrows() != total || m.ncols() != total {
        return Err(Error::Dimension(format!(
            "matrix is {}x{} but factors multiply to {total}",
            m.nrows(),
            m.ncols()
        )));
    }
    if keep.windows(2).any(|w| w[0] >= w[1]) || keep.iter().any(|&k| k >= dims.len()) {
        return Err(Error::Dimension(
            "keep set must be strictly increasing factor indices".into(),
        ));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !keep.contains(i)).collect();
    let keep_dim: usize = keep.iter().map(|&i| dims[i]).product();
    let trace_dim: usize = traced.iter().map(|&i| dims[i]).product();

    // Strides of each factor in the flat index.
    let mut stride = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        stride[i] = stride[i + 1] * dims[i + 1];
    }
    let expand = |compact: usize, factors: &[usize]| -> usize {
        let mut rem = compact;
        let mut idx = 0;
        for &f in factors.iter().rev() {
            idx += (rem % dims[f]) * stride[f];
            rem /= dims[f];
        }
        idx
    };

    let mut out = CMat::zeros(keep_dim, keep_dim);
    for r in 0..keep_dim {
        let rbase = expand(r, keep);
        for cidx in 0..keep_dim {
            let cbase = expand(cidx, keep);
            let mut acc = c(0.0, 0.0);
            for t in 0..trace_dim {
                let tofs = expand(t, &traced);
                acc += m[(rbase + tofs, cbase + tofs)];
            }
            out[(r, cidx)] = acc;
        }
    }
    Ok(out)
}

/// A completely positive trace-preserving map given by Kraus operators.
#[derive(Debug, Clone)]
pub struct SuperOperator {
    kraus: Vec<CMat>,
}

impl SuperOperator {
    /// Validates a nonempty Kraus family with sum E^dag E = I within 1e-9.
    pub fn new(kraus: Vec<CMat>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::Validation("empty Kraus family".into()))?;
        let (rows, cols) = first.shape();
        if kraus.iter().any(|e| e.shape() != (rows, cols)) {
            return Err(Error::Dimension(
                "Kraus operators must share one shape".into(),
            ));
        }
        let mut sum = CMat::zeros(cols, cols);
        for e in &kraus {
            sum += e.adjoint() * e;
        }
        if crate::matrix::max_abs_diff(&sum, &identity(cols)) > VALIDATION_TOL {
            return Err(Error::Validation(
                "Kraus completeness sum differs from identity beyond 1e-9".into(),
            ));
        }
        Ok(SuperOperator { kraus })
    }

    pub fn kraus(&self) -> &[CMat] {
        &self.kraus
    }

    pub fn input_dim(&self) -> usize {
        self.kraus[0].ncols()
    }

    pub fn output_dim(&self) -> usize {
        self.kraus[0].nrows()
    }

    /// Sum of E rho E^dag over the family.
    pub fn apply_matrix(&self, rho: &CMat) -> Result<CMat> {
        if rho.nrows() != self.input_dim() || rho.ncols() != self.input_dim() {
            return Err(Error::Dimension(format!(
                "state dim {} does not match Kraus input dim {}",
                rho.nrows(),
                self.input_dim()
            )));
        }
        let mut out = CMat::zeros(self.output_dim(), self.output_dim());
        for e in &self.kraus {
            out += e * rho * e.adjoint();
        }
        Ok(out)
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let m = self.apply_matrix(rho.matrix())?;
        if rho.is_subnormalized() {
            DensityMatrix::new_subnormalized(m)
        } else {
            DensityMatrix::new(m)
        }
    }
}
