//! Dense complex linear algebra for simulating small multi-qubit systems.
//!
//! Provides the shared vocabulary of the workspace: complex matrices and
//! state vectors, pure and mixed states, reflections (binary observables),
//! Pauli strings with phase, measurement super-operators, the joint block
//! decomposition of a reflection pair, and a handful of distance and
//! rounding utilities for comparing real devices against ideal ones.
//!
//! Conventions:
//! - Tensor products are row-major; `kron(a, b)` puts `a` on the more
//!   significant factor, and qubit 0 of a register owns the most
//!   significant basis-index bit.
//! - Everything is dense `Complex64`; the intended scale is dimension up to
//!   a few thousand.

pub mod error;
pub mod jordan;
pub mod matrix;
pub mod metrics;
pub mod pauli;
pub mod qubits;
pub mod randgen;
pub mod reflection;
pub mod state;

pub use error::{Error, Result};
pub use jordan::{block_r1, jordan_decompose, reconstruct_reflections, JordanBlock};
pub use matrix::{
    c, cnot, cr, dagger, eigh, embed_factor, embed_factors, gate_g, hadamard, identity,
    is_hermitian, is_unitary, kron, kron_all, mat2, max_abs_diff, operator_norm, pauli_i,
    pauli_x, pauli_y, pauli_z, sqrt_psd, trace_norm, CMat, CVec, C,
};
pub use metrics::{
    block_diag_distance, gentle_measurement_residual, hermitian_to_reflection, markov_unit_ball,
    vector_vs_trace_distance,
};
pub use pauli::{PauliLetter, PauliString};
pub use qubits::{apply_op_at, contract_at, num_qubits};
pub use reflection::Reflection;
pub use state::{epr_pair, partial_trace_matrix, DensityMatrix, PureState, SuperOperator};

/// Tolerance for structural validation (unitarity, completeness, R^2 = I).
pub const VALIDATION_TOL: f64 = 1e-9;
/// Tolerance for exact-value equality assertions.
pub const EQUALITY_TOL: f64 = 1e-10;
/// Slack added to derived inequalities before asserting them.
pub const INEQUALITY_SLACK: f64 = 1e-6;
