//! Domain model of the team-building problem and its logic encoding.

pub mod audit;
pub mod encoding;
pub mod facts;
pub mod model;
pub mod report;
pub mod validate;

pub use audit::{audit, can_be_assigned, Preferences};
pub use encoding::{build_encoding, build_prioritized_check_encoding, EncodingMode};
pub use facts::{derive_crucial_counts, instance_to_facts, team_facts, InvalidInstance, NameMap};
pub use model::*;
pub use report::{CheckReport, Violation, ViolationKind};
pub use validate::{errors_only, validate_instance, Severity, ValidationIssue};
