//! Sequentially repeated CHSH games.
//!
//! A strategy here is an initial tripartite pure state plus, for each
//! device, a reflection-valued rule for every round, local transcript, and
//! question. The crate evolves such strategies exactly (block-diagonal over
//! transcripts), profiles how structured each round's conditional game is,
//! measures how well one strategy simulates another, and rewrites any
//! strategy step by step into an ideal one: exact qubit blocks first, then
//! one fresh qubit per round, then transcript-independent rules with EPR
//! states planted on the round qubits. A seeded Monte-Carlo referee and a
//! small adversary library drive the statistical side.

pub mod adversary;
pub mod construct;
pub mod distance;
pub mod error;
pub mod evolve;
pub mod referee;
pub mod sample;
pub mod strategy;

pub use adversary::{adversary, adversary_by_name, AdversaryKind};
pub use construct::{
    glue_to_ideal, glue_to_ideal_sampled, is_multi_qubit_ideal, is_single_qubit_ideal,
    make_multi_qubit_ideal, make_single_qubit_ideal,
};
pub use distance::{simulation_distance, SimulationReport};
pub use error::{Error, Result};
pub use evolve::{
    evolve, guess_and_correct_evolution, structured_profile, transcript_distance, TranscriptState,
};
pub use referee::{
    hoeffding_pass_bound, referee_threshold, run_referee, self_test_params, RefereeVerdict,
    SelfTestParams, SessionCount,
};
pub use sample::{sample_games, GameRecord, SAMPLING_DIM_CAP};
pub use strategy::{
    alice_view, bob_view, conjugate_strategy, local_transcripts, prepend_ancillas, LocalTranscript,
    SequentialStrategy, Transcript, EXACT_ROUND_CAP,
};
