#![allow(dead_code)]

use portroster::asp::{check_safety, parse_program, Program};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const VARS: [&str; 3] = ["X", "Y", "Z"];

struct Gen {
    rng: ChaCha8Rng,
    preds: Vec<(&'static str, usize)>,
    consts: Vec<String>,
}

impl Gen {
    fn term(&mut self, allow_vars: bool) -> String {
        if allow_vars && self.rng.random_bool(0.6) {
            VARS[self.rng.random_range(0..VARS.len())].to_string()
        } else {
            self.consts[self.rng.random_range(0..self.consts.len())].clone()
        }
    }

    fn atom(&mut self, allow_vars: bool) -> String {
        let (p, arity) = self.preds[self.rng.random_range(0..self.preds.len())];
        if arity == 0 {
            return p.to_string();
        }
        let terms: Vec<String> = (0..arity).map(|_| self.term(allow_vars)).collect();
        format!("{p}({})", terms.join(","))
    }

    fn aggregate(&mut self) -> String {
        let f = ["#count", "#sum", "#min", "#max"][self.rng.random_range(0..4)];
        let cmp = ["<", "<=", ">", ">=", "=", "!="][self.rng.random_range(0..6)];
        let unary: Vec<&'static str> = self.preds.iter().filter(|(_, a)| *a >= 1).map(|(p, _)| *p).collect();
        let p = unary[self.rng.random_range(0..unary.len())];
        let arity = self.preds.iter().find(|(q, _)| *q == p).unwrap().1;
        let conj = if arity == 1 {
            format!("{p}(V)")
        } else {
            let other = self.term(true);
            format!("{p}(V,{other})")
        };
        let conj = if self.rng.random_bool(0.25) {
            let extra = self.atom(true);
            format!("{conj}, {extra}")
        } else {
            conj
        };
        let guard = if self.rng.random_bool(0.2) {
            VARS[self.rng.random_range(0..VARS.len())].to_string()
        } else {
            self.term(false)
        };
        format!("{f}{{V: {conj}}} {cmp} {guard}")
    }

    fn literal(&mut self) -> String {
        match self.rng.random_range(0..10) {
            0..=3 => self.atom(true),
            4..=6 => format!("not {}", self.atom(true)),
            7 | 8 => self.aggregate(),
            _ => {
                let a = VARS[self.rng.random_range(0..VARS.len())];
                let b = self.term(true);
                let cmp = ["<", "!=", "="][self.rng.random_range(0..3)];
                format!("{a} {cmp} {b}")
            }
        }
    }

    fn rule(&mut self) -> String {
        if self.rng.random_bool(0.15) {
            let unary: Vec<&'static str> = self.preds.iter().filter(|(_, a)| *a == 1).map(|(p, _)| *p).collect();
            let a = unary[self.rng.random_range(0..unary.len())];
            let others: Vec<&'static str> = self.preds.iter().map(|(p, _)| *p).filter(|p| *p != a).collect();
            let b = others[self.rng.random_range(0..others.len())];
            let b_arity = self.preds.iter().find(|(p, _)| *p == b).unwrap().1;
            let b_atom = match b_arity {
                0 => b.to_string(),
                1 => format!("{b}(X)"),
                _ => format!("{b}(X,X)"),
            };
            let guard = self.atom(true);
            return format!("{a}(X) v {b_atom} :- {guard}, X = X.");
        }
        if self.rng.random_bool(0.25) {
            let heads: Vec<String> = (0..self.rng.random_range(1..=2)).map(|_| self.atom(false)).collect();
            return format!("{}.", heads.join(" v "));
        }
        let n_head = match self.rng.random_range(0..10) {
            0 | 1 => 0,
            2..=7 => 1,
            _ => 2,
        };
        let heads: Vec<String> = (0..n_head).map(|_| self.atom(true)).collect();
        let body: Vec<String> = (0..self.rng.random_range(1..=3)).map(|_| self.literal()).collect();
        if heads.is_empty() {
            format!(":- {}.", body.join(", "))
        } else {
            format!("{} :- {}.", heads.join(" v "), body.join(", "))
        }
    }
}

/// Makes a rule safe by binding each unsafe variable with a positive atom.
fn make_safe(text: &str, preds: &[(&str, usize)]) -> String {
    let mut text = text.to_string();
    for _ in 0..4 {
        let program = parse_program(&text).expect("generated text parses");
        let violations = check_safety(&program);
        if violations.is_empty() {
            return text;
        }
        let mut rules: Vec<String> = program.rules.iter().map(|r| r.to_string()).collect();
        let binders: Vec<(&str, usize)> = preds.iter().filter(|(_, a)| *a >= 1).copied().collect();
        for v in violations {
            let (p, arity) = binders[(v.rule_index + v.variable.len()) % binders.len()];
            let r = &mut rules[v.rule_index];
            let binder = if arity == 1 { format!("{p}({})", v.variable) } else { format!("{p}({},{})", v.variable, v.variable) };
            match v.condition {
                portroster::asp::SafetyCondition::GlobalUnbound => {
                    let body_start = r.find(":-");
                    *r = match body_start {
                        Some(0) => format!(":- {}, {}", binder, &r[3..]),
                        Some(i) => format!("{}:- {}, {}", &r[..i], binder, &r[i + 3..]),
                        None => format!("{} :- {}.", &r[..r.len() - 1], binder),
                    };
                }
                portroster::asp::SafetyCondition::LocalUnbound => {
                    // Local variables only come from the guard-free term
                    // position; add a binder inside every set.
                    *r = r.replace(": ", &format!(": {binder}, "));
                }
            }
        }
        text = rules.join("\n");
    }
    text
}

/// A random safe program with at most 3 predicates, 3 constants and 5
/// rules, mixing disjunction, negation, aggregates and builtins. The naive
/// instantiation has at most 15 head atoms.
pub fn random_program(seed: u64) -> Program {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_consts = rng.random_range(1..=3);
    let mut consts: Vec<String> = (0..n_consts).map(|i| i.to_string()).collect();
    if rng.random_bool(0.15) {
        consts[n_consts - 1] = "k".into();
    }
    let r_arity = rng.random_range(0..=2);
    let n_preds = rng.random_range(2..=3);
    let preds: Vec<(&'static str, usize)> = [("p", 1), ("q", 1), ("r", r_arity)].into_iter().take(n_preds).collect();
    let mut g = Gen { rng, preds: preds.clone(), consts };
    let n_rules = g.rng.random_range(1..=5);
    let rules: Vec<String> = (0..n_rules).map(|_| g.rule()).collect();
    let text = make_safe(&rules.join("\n"), &preds);
    parse_program(&text).expect("safe program parses")
}
