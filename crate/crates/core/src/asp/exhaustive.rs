//! Reference engine: tries every subset of the head atoms of the naive
//! instantiation. Exponential; meant for cross-checking on tiny programs.

use super::ground::{ground_naive, GroundError};
use super::semantics::{has_smaller_model_brute_force, is_model, reduct};
use super::syntax::{GroundAtom, Interpretation, Program};

/// Largest number of head atoms the exhaustive engine accepts.
pub const EXHAUSTIVE_MAX_ATOMS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExhaustiveError {
    #[error(transparent)]
    Ground(#[from] GroundError),
    #[error("{atoms} candidate atoms exceed the exhaustive limit of {EXHAUSTIVE_MAX_ATOMS}")]
    TooLarge { atoms: usize },
}

/// Every answer set, sorted.
pub fn enumerate_exhaustive(program: &Program) -> Result<Vec<Interpretation>, ExhaustiveError> {
    let ground = ground_naive(program)?;
    let atoms: Vec<GroundAtom> = ground.head_atoms().into_iter().collect();
    if atoms.len() > EXHAUSTIVE_MAX_ATOMS {
        return Err(ExhaustiveError::TooLarge { atoms: atoms.len() });
    }
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << atoms.len()) {
        let candidate: Interpretation = atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, a)| a.clone())
            .collect();
        if !is_model(&candidate, &ground) {
            continue;
        }
        let reduced = reduct(&ground, &candidate);
        if !has_smaller_model_brute_force(&candidate, &reduced) {
            out.push(candidate);
        }
    }
    out.sort();
    Ok(out)
}
