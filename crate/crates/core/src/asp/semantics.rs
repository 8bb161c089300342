//! Reference evaluation of ground programs against interpretations.
//!
//! These functions follow the textbook definitions literally and favour
//! clarity over speed; the search engine in [`super::solve`] has its own
//! compiled representation.

use std::collections::BTreeSet;

use super::syntax::{
    AggregateFunction, Const, GroundAggregate, GroundLiteral, GroundProgram, GroundRule, GroundSet,
    Interpretation,
};

/// Largest interpretation for which minimality is checked by enumerating
/// every proper subset. Larger ones go through the search-based check.
pub const BRUTE_FORCE_MINIMALITY_LIMIT: usize = 16;

/// `I(S)`: the multiset of first constants of the distinct tuples whose
/// conjunction is true in `interp`.
pub fn eval_set(set: &GroundSet, interp: &Interpretation) -> Vec<Const> {
    let tuples: BTreeSet<&Vec<Const>> = set
        .pairs()
        .iter()
        .filter(|p| p.conj.iter().all(|a| interp.contains(a)))
        .map(|p| &p.consts)
        .collect();
    tuples.into_iter().filter_map(|t| t.first().cloned()).collect()
}

/// Applies an aggregate function to a multiset. `None` is the undefined
/// value: `#min`/`#max` of an empty bag, or `#sum` over a non-integer.
pub fn eval_aggregate(function: AggregateFunction, bag: &[Const]) -> Option<Const> {
    match function {
        AggregateFunction::Count => Some(Const::Int(bag.len() as i64)),
        AggregateFunction::Sum => {
            let mut total: i64 = 0;
            for c in bag {
                total = total.checked_add(c.as_int()?)?;
            }
            Some(Const::Int(total))
        }
        AggregateFunction::Min => bag.iter().min().cloned(),
        AggregateFunction::Max => bag.iter().max().cloned(),
    }
}

pub fn aggregate_satisfied(agg: &GroundAggregate, interp: &Interpretation) -> bool {
    let bag = eval_set(&agg.set, interp);
    match eval_aggregate(agg.function, &bag) {
        Some(v) => agg.comparator.holds(&v, &agg.guard),
        None => false,
    }
}

pub fn literal_satisfied(lit: &GroundLiteral, interp: &Interpretation) -> bool {
    match lit {
        GroundLiteral::Pos(a) => interp.contains(a),
        GroundLiteral::Neg(a) => !interp.contains(a),
        GroundLiteral::Aggregate(agg) => aggregate_satisfied(agg, interp),
        GroundLiteral::Builtin(b) => b.holds(),
    }
}

pub fn body_satisfied(rule: &GroundRule, interp: &Interpretation) -> bool {
    rule.body.iter().all(|l| literal_satisfied(l, interp))
}

/// Some head atom is true whenever the whole body is true.
pub fn rule_satisfied(rule: &GroundRule, interp: &Interpretation) -> bool {
    !body_satisfied(rule, interp) || rule.head.iter().any(|h| interp.contains(h))
}

pub fn is_model(interp: &Interpretation, program: &GroundProgram) -> bool {
    program.rules.iter().all(|r| rule_satisfied(r, interp))
}

/// Drops every rule with a body literal false in `interp`.
pub fn reduct(program: &GroundProgram, interp: &Interpretation) -> GroundProgram {
    GroundProgram::new(
        program
            .rules
            .iter()
            .filter(|r| body_satisfied(r, interp))
            .cloned()
            .collect(),
    )
}

/// `interp` is a model of its reduct and no proper subset is.
pub fn is_answer_set_ground(interp: &Interpretation, program: &GroundProgram) -> bool {
    let reduced = reduct(program, interp);
    if !is_model(interp, &reduced) {
        return false;
    }
    if interp.len() <= BRUTE_FORCE_MINIMALITY_LIMIT {
        !has_smaller_model_brute_force(interp, &reduced)
    } else {
        super::solve::is_minimal_model(interp, &reduced)
    }
}

/// Enumerates every proper subset of `interp` looking for a model of
/// `program`.
pub fn has_smaller_model_brute_force(interp: &Interpretation, program: &GroundProgram) -> bool {
    let atoms: Vec<_> = interp.iter().cloned().collect();
    assert!(atoms.len() < 64, "brute-force minimality is limited to small interpretations");
    let full: u64 = if atoms.is_empty() { 0 } else { (1u64 << atoms.len()) - 1 };
    (0..full).any(|mask| {
        let subset: Interpretation = atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, a)| a.clone())
            .collect();
        is_model(&subset, program)
    })
}
