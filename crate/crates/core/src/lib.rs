//! Team building for port shift rostering on top of a small answer-set
//! programming system.

pub mod asp;
pub mod engine;
pub mod fixtures;
pub mod roster;
pub mod simulate;
pub mod store;
pub mod synthetic;

pub use engine::{
    check_team, check_team_prioritized, explain_team, solve, EngineError, EngineOptions, ModeRequest, SolveOutcome,
    SolveStatus,
};
pub use roster::*;
