use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use super::syntax::{Literal, Program, Rule, SetTerm, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SafetyCondition {
    /// A global variable does not occur in any positive standard body literal.
    GlobalUnbound,
    /// A local variable of a set term does not occur in the set's conjunction.
    LocalUnbound,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SafetyViolation {
    pub rule_index: usize,
    pub rule: String,
    pub variable: Arc<str>,
    pub condition: SafetyCondition,
}

impl fmt::Display for SafetyViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.condition {
            SafetyCondition::GlobalUnbound => write!(
                f,
                "rule {} `{}`: global variable {} does not occur in a positive body literal",
                self.rule_index + 1,
                self.rule,
                self.variable
            ),
            SafetyCondition::LocalUnbound => write!(
                f,
                "rule {} `{}`: local variable {} does not occur in its set's conjunction",
                self.rule_index + 1,
                self.rule,
                self.variable
            ),
        }
    }
}

/// Variables of a rule occurring outside set terms.
pub fn global_vars(rule: &Rule) -> BTreeSet<Arc<str>> {
    let mut out = BTreeSet::new();
    for h in &rule.head {
        out.extend(h.vars().cloned());
    }
    for lit in &rule.body {
        match lit {
            Literal::Pos(a) | Literal::Neg(a) => out.extend(a.vars().cloned()),
            Literal::Aggregate(agg) => {
                if let Term::Var(v) = &agg.guard {
                    out.insert(v.clone());
                }
            }
            Literal::Builtin(b) => {
                let mut vs = Vec::new();
                b.left.vars(&mut vs);
                b.right.vars(&mut vs);
                out.extend(vs);
            }
        }
    }
    out
}

/// Variables of a symbolic set term that are not global in `rule`.
pub fn local_vars(set: &SetTerm, globals: &BTreeSet<Arc<str>>) -> BTreeSet<Arc<str>> {
    let mut out = BTreeSet::new();
    if let SetTerm::Symbolic { terms, conj } = set {
        for t in terms {
            if let Term::Var(v) = t {
                if !globals.contains(v) {
                    out.insert(v.clone());
                }
            }
        }
        for a in conj {
            for v in a.vars() {
                if !globals.contains(v) {
                    out.insert(v.clone());
                }
            }
        }
    }
    out
}

pub fn check_rule(rule: &Rule, index: usize) -> Vec<SafetyViolation> {
    let globals = global_vars(rule);
    let bound: BTreeSet<Arc<str>> = rule.positive_body().flat_map(|a| a.vars().cloned()).collect();
    let mut out = Vec::new();
    let rendered = || rule.to_string();
    for v in &globals {
        if !bound.contains(v) {
            out.push(SafetyViolation {
                rule_index: index,
                rule: rendered(),
                variable: v.clone(),
                condition: SafetyCondition::GlobalUnbound,
            });
        }
    }
    for agg in rule.aggregates() {
        if let SetTerm::Symbolic { conj, .. } = &agg.set {
            let in_conj: BTreeSet<Arc<str>> = conj.iter().flat_map(|a| a.vars().cloned()).collect();
            for v in local_vars(&agg.set, &globals) {
                if !in_conj.contains(&v) {
                    out.push(SafetyViolation {
                        rule_index: index,
                        rule: rendered(),
                        variable: v,
                        condition: SafetyCondition::LocalUnbound,
                    });
                }
            }
        }
    }
    out
}

/// All safety violations of the program, in rule order. Empty iff safe.
pub fn check_safety(program: &Program) -> Vec<SafetyViolation> {
    program
        .rules
        .iter()
        .enumerate()
        .flat_map(|(i, r)| check_rule(r, i))
        .collect()
}
