//! CHSH and extended-CHSH game engines with rigidity analyzers.
//!
//! Evaluates strategies for the single-shot CHSH game (win probability,
//! correlation value, outcome distributions), decomposes near-optimal
//! strategies into qubit blocks to measure their distance from the ideal
//! one, and does the same for the nine-direction extended game whose three
//! embedded CHSH games determine full Pauli frames on both devices.

pub mod error;
pub mod extended;
pub mod rigidity;
pub mod strategy;

pub use error::{Error, Result};
pub use extended::{
    bloch_reflection, extended_rigidity_metrics, extended_structured_gap,
    ideal_extended_probability, ideal_extended_strategy, sub_game, BlochDirection,
    ExtendedRigidityReport, ExtendedStrategy,
};
pub use rigidity::{
    outcome_relating_unitary, pull_over_residual, rigidity_analyze, BlockSummary, RigidityReport,
};
pub use strategy::{
    answer_basis, answer_state, correlation_value, ideal_chsh_strategy, is_structured,
    outcome_distribution, post_measurement_state, win_probability, ChshStrategy, Device,
    TSIRELSON,
};
