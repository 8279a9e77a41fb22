//! Hermitian involutions (binary observables with outcomes +-1).

use crate::error::Result;
use crate::matrix::{check_reflection, CMat};

/// A Hermitian matrix squaring to the identity.
///
/// Eigenvalues are +-1, so a reflection is simultaneously a unitary and an
/// observable whose two outcomes label the +-1 eigenspaces.
#[derive(Debug, Clone, PartialEq)]
pub struct Reflection {
    m: CMat,
}

impl Reflection {
    /// Validates hermiticity (1e-10) and R^2 = I (1e-9).
    pub fn new(m: CMat) -> Result<Self> {
        check_reflection(&m, "Reflection::new")?;
        Ok(Reflection { m })
    }

    pub fn matrix(&self) -> &CMat {
        &self.m
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    /// Projector onto the +1 (outcome 0) or -1 (outcome 1) eigenspace.
    pub fn outcome_projector(&self, outcome: u8) -> CMat {
        let id = crate::matrix::identity(self.dim());
        let sign = if outcome == 0 { 1.0 } else { -1.0 };
        (&id + self.m.scale(sign)).scale(0.5)
    }
}
