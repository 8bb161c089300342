use std::sync::Arc;

use super::syntax::{Atom, Literal, Program, Rule};

/// Replaces every constraint `:- B.` by `co :- B, not co.` for a fresh
/// propositional atom `co`. Returns the rewritten program and the atom.
pub fn simulate_constraints(program: &Program) -> (Program, Atom) {
    let used = program.predicates();
    let mut name = String::from("co");
    let mut n = 0;
    while used.iter().any(|(p, _)| **p == *name) {
        n += 1;
        name = format!("co{n}");
    }
    let co = Atom { predicate: Arc::from(name.as_str()), terms: Vec::new() };
    let rules = program
        .rules
        .iter()
        .map(|r| {
            if r.is_constraint() {
                let mut body = r.body.clone();
                body.push(Literal::Neg(co.clone()));
                Rule { head: vec![co.clone()], body }
            } else {
                r.clone()
            }
        })
        .collect();
    (Program::new(rules), co)
}
