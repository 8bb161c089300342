//! Instantiation of safe programs.
//!
//! [`ground_program`] only instantiates rules whose positive body atoms can
//! be derived at all: it first computes an over-approximation of the
//! derivable atoms by a semi-naive fixpoint that ignores negation and
//! aggregates, and then enumerates global substitutions by joining the
//! positive body against that set. Set terms are instantiated exactly, over
//! the whole universe. [`ground_naive`] enumerates every global substitution
//! over the universe and is meant for cross-checking on small programs.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;
use std::time::Instant;

use super::safety::{check_safety, global_vars, SafetyViolation};
use super::syntax::{
    AggregateAtom, ArithOp, Atom, Const, Expr, GroundAggregate, GroundAtom,
    GroundLiteral, GroundPair, GroundProgram, GroundRule, GroundSet, Literal, Program, Rule,
    SetTerm, Term,
};

/// Default cap on the number of ground rules (plus ground set pairs).
pub const DEFAULT_MAX_GROUND_RULES: usize = 1_000_000;

#[derive(Debug, Clone, Copy)]
pub struct GroundingBudget {
    pub max_rules: usize,
    pub deadline: Option<Instant>,
}

impl Default for GroundingBudget {
    fn default() -> Self {
        GroundingBudget { max_rules: DEFAULT_MAX_GROUND_RULES, deadline: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroundError {
    #[error("program is not safe: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Unsafe(Vec<SafetyViolation>),
    #[error("rule {rule}: {message}")]
    Arithmetic { rule: usize, message: String },
    #[error("grounding exceeded the budget of {limit} ground rules")]
    RuleLimit { limit: usize },
    #[error("grounding exceeded the time budget")]
    Timeout,
}

/// The constant introduced when a program mentions no constant at all.
pub fn fresh_constant() -> Const {
    Const::sym("_xi")
}

fn universe(program: &Program) -> Vec<Const> {
    let u = program.universe();
    if u.is_empty() {
        vec![fresh_constant()]
    } else {
        u.into_iter().collect()
    }
}

fn eval_expr(expr: &Expr, binding: &[Option<Const>], vars: &VarMap) -> Result<Const, String> {
    match expr {
        Expr::Term(Term::Const(c)) => Ok(c.clone()),
        Expr::Term(Term::Var(v)) => binding[vars.index(v)]
            .clone()
            .ok_or_else(|| format!("variable {v} is unbound")),
        Expr::Binary(op, l, r) => {
            let l = eval_expr(l, binding, vars)?;
            let r = eval_expr(r, binding, vars)?;
            match (&l, &r) {
                (Const::Int(a), Const::Int(b)) => {
                    let v = match op {
                        ArithOp::Add => a.checked_add(*b),
                        ArithOp::Sub => a.checked_sub(*b),
                    };
                    v.map(Const::Int).ok_or_else(|| format!("integer overflow in {expr}"))
                }
                _ => Err(format!("arithmetic on symbol constant in {expr}")),
            }
        }
    }
}

#[derive(Debug, Default, Clone)]
struct VarMap {
    names: Vec<Arc<str>>,
    lookup: HashMap<Arc<str>, usize>,
}

impl VarMap {
    fn add(&mut self, v: &Arc<str>) -> usize {
        if let Some(&i) = self.lookup.get(v) {
            return i;
        }
        self.names.push(v.clone());
        self.lookup.insert(v.clone(), self.names.len() - 1);
        self.names.len() - 1
    }

    fn index(&self, v: &Arc<str>) -> usize {
        self.lookup[v]
    }

    fn len(&self) -> usize {
        self.names.len()
    }
}

fn subst_term(t: &Term, binding: &[Option<Const>], vars: &VarMap) -> Option<Const> {
    match t {
        Term::Const(c) => Some(c.clone()),
        Term::Var(v) => vars.lookup.get(v).and_then(|&i| binding[i].clone()),
    }
}

fn subst_atom(a: &Atom, binding: &[Option<Const>], vars: &VarMap) -> Option<GroundAtom> {
    let args = a
        .terms
        .iter()
        .map(|t| subst_term(t, binding, vars))
        .collect::<Option<Vec<_>>>()?;
    Some(GroundAtom { predicate: a.predicate.clone(), args })
}

/// Storage for derivable atoms with a per-argument index.
#[derive(Default)]
struct AtomStore {
    atoms: Vec<GroundAtom>,
    generation: Vec<u32>,
    ids: HashMap<GroundAtom, u32>,
    by_pred: HashMap<(Arc<str>, usize), Vec<u32>>,
    by_arg: HashMap<(Arc<str>, usize, usize, Const), Vec<u32>>,
}

impl AtomStore {
    fn insert(&mut self, atom: GroundAtom, generation: u32) -> bool {
        if self.ids.contains_key(&atom) {
            return false;
        }
        let id = self.atoms.len() as u32;
        let arity = atom.args.len();
        self.by_pred.entry((atom.predicate.clone(), arity)).or_default().push(id);
        for (pos, c) in atom.args.iter().enumerate() {
            self.by_arg
                .entry((atom.predicate.clone(), arity, pos, c.clone()))
                .or_default()
                .push(id);
        }
        self.ids.insert(atom.clone(), id);
        self.atoms.push(atom);
        self.generation.push(generation);
        true
    }

    fn candidates(&self, pattern: &Atom, binding: &[Option<Const>], vars: &VarMap) -> &[u32] {
        let arity = pattern.terms.len();
        let mut best: Option<&[u32]> = None;
        for (pos, t) in pattern.terms.iter().enumerate() {
            if let Some(c) = subst_term(t, binding, vars) {
                let list = self
                    .by_arg
                    .get(&(pattern.predicate.clone(), arity, pos, c))
                    .map(|v| v.as_slice())
                    .unwrap_or(&[]);
                if best.is_none_or(|b| list.len() < b.len()) {
                    best = Some(list);
                }
                if list.is_empty() {
                    break;
                }
            }
        }
        best.unwrap_or_else(|| {
            self.by_pred
                .get(&(pattern.predicate.clone(), arity))
                .map(|v| v.as_slice())
                .unwrap_or(&[])
        })
    }
}

/// Unifies `pattern` with a ground atom, extending `binding`. Returns the
/// variables newly bound, or `None` on mismatch (binding left unchanged).
fn unify(
    pattern: &Atom,
    atom: &GroundAtom,
    binding: &mut [Option<Const>],
    vars: &VarMap,
) -> Option<Vec<usize>> {
    let mut newly = Vec::new();
    for (t, c) in pattern.terms.iter().zip(&atom.args) {
        match t {
            Term::Const(k) => {
                if k != c {
                    for &i in &newly {
                        binding[i] = None;
                    }
                    return None;
                }
            }
            Term::Var(v) => {
                let i = vars.index(v);
                match &binding[i] {
                    Some(bound) if bound != c => {
                        for &j in &newly {
                            binding[j] = None;
                        }
                        return None;
                    }
                    Some(_) => {}
                    None => {
                        binding[i] = Some(c.clone());
                        newly.push(i);
                    }
                }
            }
        }
    }
    Some(newly)
}

/// A rule prepared for joining: variable map and positive body patterns.
struct Prepared<'r> {
    index: usize,
    rule: &'r Rule,
    vars: VarMap,
    positive: Vec<&'r Atom>,
}

impl<'r> Prepared<'r> {
    fn new(index: usize, rule: &'r Rule) -> Self {
        let mut vars = VarMap::default();
        for v in global_vars(rule) {
            vars.add(&v);
        }
        let positive = rule.positive_body().collect();
        Prepared { index, rule, vars, positive }
    }

    /// Greedy join order: the literal with the most bound arguments first,
    /// `first` (if given) leading.
    fn join_order(&self, first: Option<usize>) -> Vec<usize> {
        let mut order = Vec::new();
        let mut bound: HashSet<Arc<str>> = HashSet::new();
        let mut remaining: Vec<usize> = (0..self.positive.len()).collect();
        if let Some(f) = first {
            remaining.retain(|&i| i != f);
            order.push(f);
            bound.extend(self.positive[f].vars().cloned());
        }
        while !remaining.is_empty() {
            let (pos, _) = remaining
                .iter()
                .enumerate()
                .map(|(k, &i)| {
                    let a = self.positive[i];
                    let score = a
                        .terms
                        .iter()
                        .filter(|t| match t {
                            Term::Const(_) => true,
                            Term::Var(v) => bound.contains(v),
                        })
                        .count() as i64
                        * 4
                        - a.terms.len() as i64;
                    (k, score)
                })
                .max_by_key(|&(k, s)| (s, std::cmp::Reverse(k)))
                .unwrap();
            let i = remaining.remove(pos);
            bound.extend(self.positive[i].vars().cloned());
            order.push(i);
        }
        order
    }

    /// For each step of `order`, the builtins that become evaluable there.
    fn builtin_schedule(&self, order: &[usize]) -> Vec<Vec<usize>> {
        let builtins: Vec<_> = self.rule.builtins().collect();
        let mut sched = vec![Vec::new(); order.len().max(1)];
        let mut bound: HashSet<Arc<str>> = HashSet::new();
        let mut placed = vec![false; builtins.len()];
        for (step, &i) in order.iter().enumerate() {
            bound.extend(self.positive[i].vars().cloned());
            for (b, builtin) in builtins.iter().enumerate() {
                if placed[b] {
                    continue;
                }
                let mut vs = Vec::new();
                builtin.left.vars(&mut vs);
                builtin.right.vars(&mut vs);
                if vs.iter().all(|v| bound.contains(v)) {
                    sched[step].push(b);
                    placed[b] = true;
                }
            }
        }
        for (b, p) in placed.iter().enumerate() {
            if !p {
                sched[0].push(b);
            }
        }
        sched
    }
}

#[derive(Clone, Copy)]
enum GenFilter {
    Any,
    Delta(u32),
    Old(u32),
    UpTo(u32),
}

impl GenFilter {
    fn admits(self, g: u32) -> bool {
        match self {
            GenFilter::Any => true,
            GenFilter::Delta(k) => g == k,
            GenFilter::Old(k) => g < k,
            GenFilter::UpTo(k) => g <= k,
        }
    }
}

struct Joiner<'a, 'r> {
    store: &'a AtomStore,
    prepared: &'a Prepared<'r>,
    order: Vec<usize>,
    filters: Vec<GenFilter>,
    schedule: Vec<Vec<usize>>,
    builtins: Vec<&'r super::syntax::BuiltinAtom>,
}

type Emit<'e> = dyn FnMut(&[Option<Const>]) -> Result<(), GroundError> + 'e;

impl<'a, 'r> Joiner<'a, 'r> {
    fn run(
        &self,
        binding: &mut Vec<Option<Const>>,
        step: usize,
        emit: &mut Emit<'_>,
    ) -> Result<(), GroundError> {
        if self.order.is_empty() {
            return if self.schedule_ok(0, binding)? { emit(binding) } else { Ok(()) };
        }
        if step == self.order.len() {
            return emit(binding);
        }
        let lit = self.order[step];
        let pattern = self.prepared.positive[lit];
        let filter = self.filters[step];
        let vars = &self.prepared.vars;
        for &id in self.store.candidates(pattern, binding, vars) {
            if !filter.admits(self.store.generation[id as usize]) {
                continue;
            }
            let atom = &self.store.atoms[id as usize];
            if let Some(newly) = unify(pattern, atom, binding, vars) {
                let ok = self.schedule_ok(step, binding)?;
                if ok {
                    self.run(binding, step + 1, emit)?;
                }
                for i in newly {
                    binding[i] = None;
                }
            }
        }
        Ok(())
    }

    fn schedule_ok(&self, step: usize, binding: &[Option<Const>]) -> Result<bool, GroundError> {
        let Some(list) = self.schedule.get(step) else { return Ok(true) };
        for &b in list {
            let builtin = self.builtins[b];
            let vars = &self.prepared.vars;
            let err = |m| GroundError::Arithmetic { rule: self.prepared.index + 1, message: m };
            let l = eval_expr(&builtin.left, binding, vars).map_err(err)?;
            let r = eval_expr(&builtin.right, binding, vars).map_err(err)?;
            if !builtin.comparator.holds(&l, &r) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn joiner<'a, 'r>(
    store: &'a AtomStore,
    prepared: &'a Prepared<'r>,
    first: Option<usize>,
    filter_for: impl Fn(usize) -> GenFilter,
) -> Joiner<'a, 'r> {
    let order = prepared.join_order(first);
    let filters = order.iter().map(|&i| filter_for(i)).collect();
    let schedule = prepared.builtin_schedule(&order);
    Joiner {
        store,
        prepared,
        order,
        filters,
        schedule,
        builtins: prepared.rule.builtins().collect(),
    }
}

fn check_budget(count: usize, budget: &GroundingBudget) -> Result<(), GroundError> {
    if count > budget.max_rules {
        return Err(GroundError::RuleLimit { limit: budget.max_rules });
    }
    if count % 4096 == 0 {
        if let Some(d) = budget.deadline {
            if Instant::now() > d {
                return Err(GroundError::Timeout);
            }
        }
    }
    Ok(())
}

/// Over-approximates the derivable atoms with a semi-naive fixpoint.
fn possible_atoms(prepared: &[Prepared<'_>], budget: &GroundingBudget) -> Result<AtomStore, GroundError> {
    let mut store = AtomStore::default();
    let mut generation = 0u32;
    let mut produced = 0usize;
    // Generation 0: rules without positive body literals.
    let mut fresh: Vec<GroundAtom> = Vec::new();
    for p in prepared.iter().filter(|p| p.positive.is_empty()) {
        let j = joiner(&store, p, None, |_| GenFilter::Any);
        let mut b = vec![None; p.vars.len()];
        j.run(&mut b, 0, &mut |binding| {
            for h in &p.rule.head {
                if let Some(g) = subst_atom(h, binding, &p.vars) {
                    fresh.push(g);
                }
            }
            produced += 1;
            check_budget(produced, budget)
        })?;
    }
    for a in fresh.drain(..) {
        store.insert(a, generation);
    }
    loop {
        for p in prepared.iter().filter(|p| !p.positive.is_empty() && !p.rule.head.is_empty()) {
            for delta in 0..p.positive.len() {
                let j = joiner(&store, p, Some(delta), |i| {
                    if i == delta {
                        GenFilter::Delta(generation)
                    } else if i < delta {
                        GenFilter::Old(generation)
                    } else {
                        GenFilter::UpTo(generation)
                    }
                });
                let mut b = vec![None; p.vars.len()];
                j.run(&mut b, 0, &mut |binding| {
                    for h in &p.rule.head {
                        if let Some(g) = subst_atom(h, binding, &p.vars) {
                            fresh.push(g);
                        }
                    }
                    produced += 1;
                    check_budget(produced, budget)
                })?;
            }
        }
        generation += 1;
        let mut any = false;
        for a in fresh.drain(..) {
            any |= store.insert(a, generation);
        }
        if !any {
            return Ok(store);
        }
    }
}

/// Enumerates the local substitutions of a set term over the universe.
fn instantiate_set(
    agg: &AggregateAtom,
    binding: &[Option<Const>],
    vars: &VarMap,
    universe: &[Const],
    counter: &mut usize,
    budget: &GroundingBudget,
) -> Result<GroundSet, GroundError> {
    let (terms, conj) = match &agg.set {
        SetTerm::Ground(g) => return Ok(g.clone()),
        SetTerm::Symbolic { terms, conj } => (terms, conj),
    };
    let mut local = VarMap::default();
    for t in terms {
        if let Term::Var(v) = t {
            if !vars.lookup.contains_key(v) {
                local.add(v);
            }
        }
    }
    for a in conj {
        for v in a.vars() {
            if !vars.lookup.contains_key(v) {
                local.add(v);
            }
        }
    }
    let mut pairs = BTreeSet::new();
    let mut assignment = vec![0usize; local.len()];
    loop {
        let lookup = |t: &Term| -> Option<Const> {
            match t {
                Term::Const(c) => Some(c.clone()),
                Term::Var(v) => match local.lookup.get(v) {
                    Some(&i) => Some(universe[assignment[i]].clone()),
                    None => subst_term(t, binding, vars),
                },
            }
        };
        let consts = terms.iter().map(lookup).collect::<Option<Vec<_>>>();
        let atoms = conj
            .iter()
            .map(|a| {
                let args = a.terms.iter().map(lookup).collect::<Option<Vec<_>>>()?;
                Some(GroundAtom { predicate: a.predicate.clone(), args })
            })
            .collect::<Option<Vec<_>>>();
        if let (Some(consts), Some(mut atoms)) = (consts, atoms) {
            atoms.sort();
            atoms.dedup();
            pairs.insert(GroundPair { consts, conj: atoms });
            *counter += 1;
            check_budget(*counter, budget)?;
        }
        // Next local substitution, odometer style.
        let mut k = 0;
        loop {
            if k == assignment.len() {
                return Ok(GroundSet::new(pairs));
            }
            assignment[k] += 1;
            if assignment[k] < universe.len() {
                break;
            }
            assignment[k] = 0;
            k += 1;
        }
    }
}

/// Builds the ground instance of `rule` under a total global binding.
/// Returns `None` when a ground builtin is false.
fn instantiate_rule(
    index: usize,
    rule: &Rule,
    binding: &[Option<Const>],
    vars: &VarMap,
    universe: &[Const],
    counter: &mut usize,
    budget: &GroundingBudget,
) -> Result<Option<GroundRule>, GroundError> {
    let err = |m| GroundError::Arithmetic { rule: index + 1, message: m };
    let mut body = Vec::with_capacity(rule.body.len());
    for lit in &rule.body {
        match lit {
            Literal::Pos(a) => body.push(GroundLiteral::Pos(subst_atom(a, binding, vars).expect("safe rule"))),
            Literal::Neg(a) => body.push(GroundLiteral::Neg(subst_atom(a, binding, vars).expect("safe rule"))),
            Literal::Builtin(b) => {
                let l = eval_expr(&b.left, binding, vars).map_err(err)?;
                let r = eval_expr(&b.right, binding, vars).map_err(err)?;
                if !b.comparator.holds(&l, &r) {
                    return Ok(None);
                }
            }
            Literal::Aggregate(agg) => {
                let guard = subst_term(&agg.guard, binding, vars).expect("safe rule");
                let set = instantiate_set(agg, binding, vars, universe, counter, budget)?;
                body.push(GroundLiteral::Aggregate(GroundAggregate {
                    function: agg.function,
                    set,
                    comparator: agg.comparator,
                    guard,
                }));
            }
        }
    }
    let mut seen = HashSet::new();
    body.retain(|l| seen.insert(l.clone()));
    let head = rule
        .head
        .iter()
        .map(|h| subst_atom(h, binding, vars).expect("safe rule"))
        .collect();
    Ok(Some(GroundRule::new(head, body)))
}

struct Collector {
    rules: Vec<GroundRule>,
    seen: HashSet<GroundRule>,
}

impl Collector {
    fn push(&mut self, r: GroundRule) {
        if self.seen.insert(r.clone()) {
            self.rules.push(r);
        }
    }
}

pub fn ground_program(program: &Program) -> Result<GroundProgram, GroundError> {
    ground_program_with(program, &GroundingBudget::default())
}

/// Relevance-driven instantiation; see the module docs.
pub fn ground_program_with(program: &Program, budget: &GroundingBudget) -> Result<GroundProgram, GroundError> {
    let violations = check_safety(program);
    if !violations.is_empty() {
        return Err(GroundError::Unsafe(violations));
    }
    let universe = universe(program);
    let prepared: Vec<Prepared<'_>> = program
        .rules
        .iter()
        .enumerate()
        .map(|(i, r)| Prepared::new(i, r))
        .collect();
    let store = possible_atoms(&prepared, budget)?;
    let mut out = Collector { rules: Vec::new(), seen: HashSet::new() };
    let mut counter = 0usize;
    for p in &prepared {
        let j = joiner(&store, p, None, |_| GenFilter::Any);
        let mut b = vec![None; p.vars.len()];
        let mut local: Vec<GroundRule> = Vec::new();
        j.run(&mut b, 0, &mut |binding| {
            if let Some(r) = instantiate_rule(p.index, p.rule, binding, &p.vars, &universe, &mut counter, budget)? {
                local.push(r);
            }
            counter += 1;
            check_budget(counter, budget)
        })?;
        for r in local {
            out.push(r);
        }
    }
    Ok(GroundProgram::new(out.rules))
}

/// Every global substitution over the universe, with no relevance
/// filtering. Exponential in the number of variables per rule.
pub fn ground_naive(program: &Program) -> Result<GroundProgram, GroundError> {
    ground_naive_with(program, &GroundingBudget::default())
}

pub fn ground_naive_with(program: &Program, budget: &GroundingBudget) -> Result<GroundProgram, GroundError> {
    let violations = check_safety(program);
    if !violations.is_empty() {
        return Err(GroundError::Unsafe(violations));
    }
    let universe = universe(program);
    let mut out = Collector { rules: Vec::new(), seen: HashSet::new() };
    let mut counter = 0usize;
    for (index, rule) in program.rules.iter().enumerate() {
        let mut vars = VarMap::default();
        for v in global_vars(rule) {
            vars.add(&v);
        }
        let n = vars.len();
        let total = (universe.len() as f64).powi(n as i32);
        if total > budget.max_rules as f64 {
            return Err(GroundError::RuleLimit { limit: budget.max_rules });
        }
        let mut assignment = vec![0usize; n];
        loop {
            let binding: Vec<Option<Const>> = assignment.iter().map(|&i| Some(universe[i].clone())).collect();
            if let Some(r) = instantiate_rule(index, rule, &binding, &vars, &universe, &mut counter, budget)? {
                out.push(r);
            }
            counter += 1;
            check_budget(counter, budget)?;
            let mut k = 0;
            loop {
                if k == n {
                    break;
                }
                assignment[k] += 1;
                if assignment[k] < universe.len() {
                    break;
                }
                assignment[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
    }
    Ok(GroundProgram::new(out.rules))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asp::parse_program;

    fn ground_text(src: &str) -> Vec<String> {
        let g = ground_program(&parse_program(src).unwrap()).unwrap();
        let mut v: Vec<String> = g.rules.iter().map(|r| r.to_string()).collect();
        v.sort();
        v
    }

    #[test]
    fn instantiation_example() {
        let got = ground_text(
            "a(1) v b(2,2).
             a(2) v b(2,1).
             c(X) :- a(X), #sum{Y: b(X,Y)} >= 2.",
        );
        let mut want = vec![
            "a(1) v b(2,2).".to_string(),
            "a(2) v b(2,1).".to_string(),
            "c(1) :- a(1), #sum{⟨1: b(1,1)⟩, ⟨2: b(1,2)⟩} >= 2.".to_string(),
            "c(2) :- a(2), #sum{⟨1: b(2,1)⟩, ⟨2: b(2,2)⟩} >= 2.".to_string(),
        ];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn simple_join() {
        let got = ground_text("d(1). d(2). p(X) :- d(X).");
        assert_eq!(got, vec!["d(1).", "d(2).", "p(1) :- d(1).", "p(2) :- d(2)."]);
    }

    #[test]
    fn variable_free_program_is_unchanged() {
        let src = "a v b. c :- a, not b. :- c, b.";
        let p = parse_program(src).unwrap();
        let g = ground_program(&p).unwrap();
        let rendered: Vec<String> = g.rules.iter().map(|r| r.to_string()).collect();
        let original: Vec<String> = p.rules.iter().map(|r| r.to_string()).collect();
        assert_eq!(rendered, original);
    }

    #[test]
    fn builtins_are_evaluated() {
        let got = ground_text("n(1). n(2). n(3). lt(X,Y) :- n(X), n(Y), X < Y.");
        assert_eq!(got.iter().filter(|r| r.starts_with("lt")).count(), 3);
        assert!(got.iter().all(|r| !r.contains('<')));
    }

    #[test]
    fn arithmetic_on_symbols_is_an_error() {
        let p = parse_program("n(a). m(X) :- n(X), X + 1 > 0.").unwrap();
        assert!(matches!(ground_program(&p), Err(GroundError::Arithmetic { .. })));
    }

    #[test]
    fn symbols_compare_after_integers() {
        let got = ground_text("n(a). n(3). big(X) :- n(X), X > 100.");
        assert!(got.contains(&"big(a) :- n(a).".to_string()));
        assert!(!got.iter().any(|r| r.starts_with("big(3)")));
    }

    #[test]
    fn unsafe_program_is_rejected() {
        let p = parse_program("p(X) :- not q(X).").unwrap();
        assert!(matches!(ground_program(&p), Err(GroundError::Unsafe(_))));
    }

    #[test]
    fn recursion_reaches_fixpoint() {
        let got = ground_text("e(1,2). e(2,3). e(3,4). t(X,Y) :- e(X,Y). t(X,Z) :- t(X,Y), e(Y,Z).");
        let t: Vec<_> = got.iter().filter(|r| r.starts_with("t(")).collect();
        // 3 base instances and 3 recursive ones (1-3, 2-4, 1-4).
        assert_eq!(t.len(), 6, "{t:?}");
    }

    #[test]
    fn fresh_constant_for_constant_free_program() {
        let g = ground_naive(&parse_program("p(X) v q(X) :- r(X). r(X) :- s(X).").unwrap()).unwrap();
        assert!(g.to_string().contains("_xi"));
    }

    #[test]
    fn rule_budget_is_enforced() {
        let p = parse_program("n(1). n(2). n(3). p(X,Y) :- n(X), n(Y).").unwrap();
        let budget = GroundingBudget { max_rules: 5, deadline: None };
        assert_eq!(ground_program_with(&p, &budget), Err(GroundError::RuleLimit { limit: 5 }));
    }

    #[test]
    fn duplicate_instances_collapse() {
        let got = ground_text("a. a. b :- a, a.");
        assert_eq!(got, vec!["a.", "b :- a."]);
    }
}
