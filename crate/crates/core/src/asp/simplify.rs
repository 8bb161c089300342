//! Partial evaluation of a ground program.
//!
//! Computes atoms that are true in every answer set (`certain`) and an
//! over-approximation of the atoms that can be true in some answer set
//! (`possible`), and rewrites the rules accordingly: rules that can never
//! fire or are already satisfied disappear, literals with a fixed value are
//! dropped, and aggregate sets lose pairs that can never hold. Every answer
//! set lies between `certain` and `possible`, and the residual rules
//! together with `certain` as facts have exactly the same answer sets.

use std::collections::HashSet;

use super::semantics::eval_aggregate;
use super::syntax::{GroundAggregate, GroundAtom, GroundLiteral, GroundPair, GroundRule, GroundSet, Interpretation};

#[derive(Debug, Clone)]
pub struct Simplified {
    pub certain: Interpretation,
    pub possible: HashSet<GroundAtom>,
    pub rules: Vec<GroundRule>,
    /// A constraint or rule whose body is certainly true cannot be satisfied.
    pub inconsistent: bool,
}

enum Truth {
    True,
    False,
    Unknown(GroundLiteral),
}

struct Bounds<'a> {
    certain: &'a Interpretation,
    possible: &'a HashSet<GroundAtom>,
}

impl Bounds<'_> {
    fn atom(&self, a: &GroundAtom) -> Option<bool> {
        if self.certain.contains(a) {
            Some(true)
        } else if !self.possible.contains(a) {
            Some(false)
        } else {
            None
        }
    }

    fn literal(&self, lit: &GroundLiteral) -> Truth {
        match lit {
            GroundLiteral::Pos(a) => match self.atom(a) {
                Some(true) => Truth::True,
                Some(false) => Truth::False,
                None => Truth::Unknown(lit.clone()),
            },
            GroundLiteral::Neg(a) => match self.atom(a) {
                Some(true) => Truth::False,
                Some(false) => Truth::True,
                None => Truth::Unknown(lit.clone()),
            },
            GroundLiteral::Builtin(b) => {
                if b.holds() {
                    Truth::True
                } else {
                    Truth::False
                }
            }
            GroundLiteral::Aggregate(agg) => self.aggregate(agg),
        }
    }

    fn aggregate(&self, agg: &GroundAggregate) -> Truth {
        let mut pairs = Vec::with_capacity(agg.set.pairs().len());
        let mut undecided = false;
        'pairs: for p in agg.set.pairs() {
            let mut conj = Vec::new();
            for a in &p.conj {
                match self.atom(a) {
                    Some(true) => {}
                    Some(false) => continue 'pairs,
                    None => conj.push(a.clone()),
                }
            }
            undecided |= !conj.is_empty();
            pairs.push(GroundPair { consts: p.consts.clone(), conj });
        }
        if !undecided {
            let tuples: std::collections::BTreeSet<&Vec<_>> = pairs.iter().map(|p| &p.consts).collect();
            let bag: Vec<_> = tuples.into_iter().filter_map(|t| t.first().cloned()).collect();
            return match eval_aggregate(agg.function, &bag) {
                Some(v) if agg.comparator.holds(&v, &agg.guard) => Truth::True,
                _ => Truth::False,
            };
        }
        Truth::Unknown(GroundLiteral::Aggregate(GroundAggregate {
            function: agg.function,
            set: GroundSet::new(pairs),
            comparator: agg.comparator,
            guard: agg.guard.clone(),
        }))
    }
}

pub fn simplify(rules: &[GroundRule]) -> Simplified {
    let mut certain = Interpretation::new();
    let mut possible: HashSet<GroundAtom> = rules.iter().flat_map(|r| r.head.iter().cloned()).collect();
    let mut live: Vec<GroundRule> = rules.to_vec();
    let mut inconsistent = false;
    loop {
        let mut changed = false;
        let mut next = Vec::with_capacity(live.len());
        let mut new_facts = Vec::new();
        {
            let bounds = Bounds { certain: &certain, possible: &possible };
            'rules: for rule in &live {
                if rule.head.iter().any(|h| certain.contains(h)) {
                    changed = true;
                    continue;
                }
                let mut body = Vec::with_capacity(rule.body.len());
                for lit in &rule.body {
                    match bounds.literal(lit) {
                        Truth::True => {}
                        Truth::False => {
                            changed = true;
                            continue 'rules;
                        }
                        Truth::Unknown(l) => body.push(l),
                    }
                }
                let head: Vec<GroundAtom> = rule.head.iter().filter(|h| possible.contains(*h)).cloned().collect();
                if body.is_empty() && head.len() <= 1 {
                    changed = true;
                    match head.into_iter().next() {
                        Some(h) => new_facts.push(h),
                        None => inconsistent = true,
                    }
                    continue;
                }
                if body.len() != rule.body.len() || head.len() != rule.head.len() || body != rule.body {
                    changed = true;
                }
                next.push(GroundRule { head, body });
            }
        }
        for f in new_facts {
            certain.insert(f);
        }
        live = next;
        let mut still_possible: HashSet<GroundAtom> = certain.iter().cloned().collect();
        for r in &live {
            still_possible.extend(r.head.iter().cloned());
        }
        if still_possible.len() != possible.len() {
            changed = true;
        }
        possible = still_possible;
        if inconsistent || !changed {
            break;
        }
    }
    let mut seen = HashSet::new();
    live.retain(|r| seen.insert(r.clone()));
    Simplified { certain, possible, rules: live, inconsistent }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asp::{ground_program, parse_program};

    fn run(src: &str) -> Simplified {
        simplify(&ground_program(&parse_program(src).unwrap()).unwrap().rules)
    }

    #[test]
    fn stratified_program_is_fully_decided() {
        let s = run("d(1). d(2). e(2). p(X) :- d(X), not e(X). q :- p(1).");
        assert!(s.rules.is_empty());
        let names: Vec<String> = s.certain.iter().map(|a| a.to_string()).collect();
        assert_eq!(names, vec!["d(1)", "d(2)", "e(2)", "p(1)", "q"]);
    }

    #[test]
    fn disjunction_stays_open() {
        let s = run("a v b. c :- a.");
        assert_eq!(s.rules.len(), 2);
        assert!(s.certain.is_empty());
    }

    #[test]
    fn violated_constraint_is_detected() {
        assert!(run("a. :- a.").inconsistent);
        assert!(!run("a v b. :- a.").inconsistent);
    }

    #[test]
    fn aggregates_are_evaluated_when_decided() {
        let s = run("b(1). b(2). n :- #count{X: b(X)} = 2.");
        assert!(s.certain.iter().any(|a| &*a.predicate == "n"));
    }

    #[test]
    fn aggregate_pairs_are_pruned() {
        let s = run("b(1). c(2) v c(3). n :- #sum{X: b(X)} > 0, #sum{X: c(X)} > 2.");
        let r = s.rules.iter().find(|r| r.head.iter().any(|h| &*h.predicate == "n")).unwrap();
        assert_eq!(r.body.len(), 1);
    }
}
