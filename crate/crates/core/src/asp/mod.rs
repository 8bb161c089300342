//! A small answer-set programming system: parser, safety checker,
//! grounder, reference semantics and two solving engines.

pub mod exhaustive;
pub mod ground;
pub mod parser;
pub mod rewrite;
pub mod safety;
pub mod search;
pub mod semantics;
pub mod simplify;
pub mod solve;
pub mod syntax;

pub use exhaustive::{enumerate_exhaustive, ExhaustiveError};
pub use ground::{ground_naive, ground_program, ground_program_with, GroundError, GroundingBudget, DEFAULT_MAX_GROUND_RULES};
pub use parser::{parse_program, parse_rule, ParseError};
pub use rewrite::simulate_constraints;
pub use safety::{check_safety, SafetyCondition, SafetyViolation};
pub use semantics::{
    aggregate_satisfied, body_satisfied, eval_aggregate, eval_set, is_answer_set_ground, is_model, literal_satisfied,
    reduct, rule_satisfied,
};
pub use solve::{
    enumerate_answer_sets, enumerate_with, is_answer_set, is_minimal_model, solve_ground, Enumeration, Heuristic,
    SearchStats, SolveError, SolveOptions,
};
pub use syntax::*;
