//! The guided answer-set engine.
//!
//! A ground program is simplified, then compiled into clauses over atom
//! variables plus reified conjunctions and aggregates. Besides the rules
//! themselves, every atom must be supported: some rule with a true body has
//! it as its only true head atom. Each total assignment found this way is a
//! supported model; it is emitted only after a second search has shown that
//! no proper subset is a model of its reduct.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;
use std::time::{Duration, Instant};

use super::ground::{ground_program_with, GroundError, GroundingBudget, DEFAULT_MAX_GROUND_RULES};
use super::search::{AggregateConstraint, Limits, Lit, Outcome, Solver, Var};
use super::semantics::{body_satisfied, eval_aggregate, is_answer_set_ground};
use super::simplify::simplify;
use super::syntax::{Const, GroundAggregate, GroundAtom, GroundLiteral, GroundProgram, GroundRule, Interpretation, Program};

/// Maps an atom to its branching key; atoms with a key are decided first,
/// in key order.
pub type BranchKey = Arc<dyn Fn(&GroundAtom) -> Option<Vec<Const>> + Send + Sync>;

#[derive(Clone, Default)]
pub struct Heuristic {
    pub key: Option<BranchKey>,
    /// Polarity tried first for keyed atoms. Other atoms are tried false first.
    pub prefer_true: bool,
}

impl Heuristic {
    /// Branch on atoms of `predicate` first, ordered by the given argument
    /// positions.
    pub fn by_predicate(predicate: &str, positions: Vec<usize>, prefer_true: bool) -> Self {
        let predicate: Arc<str> = Arc::from(predicate);
        Heuristic {
            key: Some(Arc::new(move |a: &GroundAtom| {
                if a.predicate != predicate {
                    return None;
                }
                positions.iter().map(|&i| a.args.get(i).cloned()).collect()
            })),
            prefer_true,
        }
    }
}

#[derive(Clone)]
pub struct SolveOptions {
    /// Stop after this many answer sets.
    pub limit: Option<usize>,
    /// Wall-clock budget for grounding and search together.
    pub timeout: Option<Duration>,
    pub max_ground_rules: usize,
    pub max_conflicts: Option<u64>,
    pub heuristic: Heuristic,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            limit: None,
            timeout: None,
            max_ground_rules: DEFAULT_MAX_GROUND_RULES,
            max_conflicts: None,
            heuristic: Heuristic::default(),
        }
    }
}

impl SolveOptions {
    pub fn with_limit(limit: usize) -> Self {
        SolveOptions { limit: Some(limit), ..Default::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error(transparent)]
    Ground(GroundError),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
}

impl SolveError {
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, SolveError::ResourceLimit(_))
    }
}

impl From<GroundError> for SolveError {
    fn from(e: GroundError) -> Self {
        match e {
            GroundError::RuleLimit { .. } | GroundError::Timeout => SolveError::ResourceLimit(e.to_string()),
            other => SolveError::Ground(other),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub ground_rules: usize,
    pub residual_rules: usize,
    pub variables: usize,
    pub decisions: u64,
    pub conflicts: u64,
    pub candidates: u64,
    pub rejected: u64,
}

#[derive(Debug, Clone, Default)]
pub struct Enumeration {
    pub answer_sets: Vec<Interpretation>,
    /// True when the search space was exhausted, so `answer_sets` is the
    /// full list.
    pub complete: bool,
    pub stats: SearchStats,
}

/// All answer sets, up to `limit`. Complete enumerations come back sorted.
pub fn enumerate_answer_sets(program: &Program, limit: Option<usize>) -> Result<Vec<Interpretation>, SolveError> {
    let options = SolveOptions { limit, ..Default::default() };
    Ok(enumerate_with(program, &options)?.answer_sets)
}

pub fn enumerate_with(program: &Program, options: &SolveOptions) -> Result<Enumeration, SolveError> {
    let deadline = options.timeout.map(|t| Instant::now() + t);
    let budget = GroundingBudget { max_rules: options.max_ground_rules, deadline };
    let ground = ground_program_with(program, &budget)?;
    solve_ground_until(&ground, options, deadline)
}

pub fn solve_ground(ground: &GroundProgram, options: &SolveOptions) -> Result<Enumeration, SolveError> {
    let deadline = options.timeout.map(|t| Instant::now() + t);
    solve_ground_until(ground, options, deadline)
}

fn solve_ground_until(
    ground: &GroundProgram,
    options: &SolveOptions,
    deadline: Option<Instant>,
) -> Result<Enumeration, SolveError> {
    let mut stats = SearchStats { ground_rules: ground.rules.len(), ..Default::default() };
    let simplified = simplify(&ground.rules);
    stats.residual_rules = simplified.rules.len();
    if simplified.inconsistent {
        return Ok(Enumeration { answer_sets: Vec::new(), complete: true, stats });
    }
    let limits = Limits { deadline, max_conflicts: options.max_conflicts };
    let domain = Domain::Candidates { certain: &simplified.certain, possible: &simplified.possible };
    let mut compiler = Compiler::new(domain);
    compiler.add_program(&simplified.rules);
    compiler.apply_heuristic(&options.heuristic);
    stats.variables = compiler.solver.num_vars();

    let mut answer_sets = Vec::new();
    let mut complete = false;
    if options.limit == Some(0) {
        return Ok(Enumeration { answer_sets, complete, stats });
    }
    loop {
        match compiler.solver.solve(&limits) {
            Outcome::Unsat => {
                complete = true;
                break;
            }
            Outcome::Limit => {
                return Err(SolveError::ResourceLimit(limit_message(&limits)));
            }
            Outcome::Sat => {
                stats.candidates += 1;
                let m = compiler.current_interpretation(&simplified.certain);
                match smaller_model_exists(&simplified.rules, &m, &simplified.certain, &limits) {
                    None => return Err(SolveError::ResourceLimit(limit_message(&limits))),
                    Some(true) => stats.rejected += 1,
                    Some(false) => {
                        debug_assert!(super::semantics::is_model(&m, ground));
                        answer_sets.push(m);
                        if options.limit.is_some_and(|k| answer_sets.len() >= k) {
                            break;
                        }
                    }
                }
                if !compiler.solver.block_current() {
                    complete = true;
                    break;
                }
            }
        }
    }
    stats.decisions = compiler.solver.stats.decisions;
    stats.conflicts = compiler.solver.stats.conflicts;
    if complete {
        answer_sets.sort();
    }
    Ok(Enumeration { answer_sets, complete, stats })
}

fn limit_message(limits: &Limits) -> String {
    match (limits.deadline, limits.max_conflicts) {
        (Some(_), _) if limits.deadline.is_some_and(|d| Instant::now() > d) => "time budget exhausted".into(),
        (_, Some(c)) => format!("conflict budget of {c} exhausted"),
        _ => "search budget exhausted".into(),
    }
}

/// Whether `interp` is an answer set of `program`, using the optimized
/// instantiation.
pub fn is_answer_set(interp: &Interpretation, program: &Program) -> Result<bool, GroundError> {
    let ground = super::ground::ground_program(program)?;
    Ok(is_answer_set_ground(interp, &ground))
}

/// Assuming `interp` is a model of `program`, whether no proper subset of it
/// is.
pub fn is_minimal_model(interp: &Interpretation, program: &GroundProgram) -> bool {
    !smaller_model_exists(&program.rules, interp, &Interpretation::new(), &Limits::default())
        .expect("no limits were set")
}

/// Searches for a model `N` of the reduct of `rules` with respect to `m`
/// such that `fixed ⊆ N ⊊ m`. `None` when the limits ran out.
fn smaller_model_exists(rules: &[GroundRule], m: &Interpretation, fixed: &Interpretation, limits: &Limits) -> Option<bool> {
    let free: Vec<&GroundAtom> = m.iter().filter(|a| !fixed.contains(a)).collect();
    if free.is_empty() {
        return Some(false);
    }
    let mut compiler = Compiler::new(Domain::Subsets { upper: m, fixed });
    for rule in rules.iter().filter(|r| body_satisfied(r, m)) {
        compiler.add_rule_clause(rule);
    }
    let some_false: Vec<Lit> = free.iter().map(|a| !compiler.atom_lit(a)).collect();
    compiler.solver.add_clause(some_false);
    match compiler.solver.solve(limits) {
        Outcome::Sat => Some(true),
        Outcome::Unsat => Some(false),
        Outcome::Limit => None,
    }
}

enum Domain<'a> {
    /// Atoms of `certain` are true, atoms outside `possible` false.
    Candidates { certain: &'a Interpretation, possible: &'a HashSet<GroundAtom> },
    /// Subsets of `upper` containing `fixed`.
    Subsets { upper: &'a Interpretation, fixed: &'a Interpretation },
}

impl Domain<'_> {
    fn fixed_value(&self, a: &GroundAtom) -> Option<bool> {
        match self {
            Domain::Candidates { certain, possible } => {
                if certain.contains(a) {
                    Some(true)
                } else if !possible.contains(a) {
                    Some(false)
                } else {
                    None
                }
            }
            Domain::Subsets { upper, fixed } => {
                if !upper.contains(a) {
                    Some(false)
                } else if fixed.contains(a) {
                    Some(true)
                } else {
                    None
                }
            }
        }
    }
}

struct Compiler<'a> {
    domain: Domain<'a>,
    solver: Solver,
    atom_vars: HashMap<GroundAtom, Var>,
    atoms: Vec<(Var, GroundAtom)>,
    and_cache: HashMap<Vec<Lit>, Lit>,
    or_cache: HashMap<Vec<Lit>, Lit>,
    agg_cache: HashMap<GroundAggregate, Lit>,
}

impl<'a> Compiler<'a> {
    fn new(domain: Domain<'a>) -> Self {
        Compiler {
            domain,
            solver: Solver::new(),
            atom_vars: HashMap::new(),
            atoms: Vec::new(),
            and_cache: HashMap::new(),
            or_cache: HashMap::new(),
            agg_cache: HashMap::new(),
        }
    }

    fn atom_lit(&mut self, a: &GroundAtom) -> Lit {
        match self.domain.fixed_value(a) {
            Some(true) => return self.solver.true_lit(),
            Some(false) => return self.solver.false_lit(),
            None => {}
        }
        if let Some(&v) = self.atom_vars.get(a) {
            return Lit::pos(v);
        }
        let v = self.solver.new_var();
        self.atom_vars.insert(a.clone(), v);
        self.atoms.push((v, a.clone()));
        Lit::pos(v)
    }

    fn is_true(&self, l: Lit) -> bool {
        l == self.solver.true_lit()
    }

    fn is_false(&self, l: Lit) -> bool {
        l == self.solver.false_lit()
    }

    /// A literal equivalent to the conjunction of `lits`.
    fn and_lit(&mut self, lits: Vec<Lit>) -> Lit {
        let mut lits: Vec<Lit> = lits.into_iter().filter(|&l| !self.is_true(l)).collect();
        if lits.iter().any(|&l| self.is_false(l)) {
            return self.solver.false_lit();
        }
        lits.sort();
        lits.dedup();
        if lits.windows(2).any(|w| w[0] == !w[1]) {
            return self.solver.false_lit();
        }
        match lits.len() {
            0 => return self.solver.true_lit(),
            1 => return lits[0],
            _ => {}
        }
        if let Some(&l) = self.and_cache.get(&lits) {
            return l;
        }
        let v = Lit::pos(self.solver.new_var());
        for &l in &lits {
            self.solver.add_clause(vec![!v, l]);
        }
        let mut back: Vec<Lit> = lits.iter().map(|&l| !l).collect();
        back.push(v);
        self.solver.add_clause(back);
        self.and_cache.insert(lits, v);
        v
    }

    fn or_lit(&mut self, lits: Vec<Lit>) -> Lit {
        let mut lits: Vec<Lit> = lits.into_iter().filter(|&l| !self.is_false(l)).collect();
        if lits.iter().any(|&l| self.is_true(l)) {
            return self.solver.true_lit();
        }
        lits.sort();
        lits.dedup();
        match lits.len() {
            0 => return self.solver.false_lit(),
            1 => return lits[0],
            _ => {}
        }
        if let Some(&l) = self.or_cache.get(&lits) {
            return l;
        }
        let v = Lit::pos(self.solver.new_var());
        for &l in &lits {
            self.solver.add_clause(vec![v, !l]);
        }
        let mut fwd = lits.clone();
        fwd.push(!v);
        self.solver.add_clause(fwd);
        self.or_cache.insert(lits, v);
        v
    }

    fn aggregate_lit(&mut self, agg: &GroundAggregate) -> Lit {
        if let Some(&l) = self.agg_cache.get(agg) {
            return l;
        }
        let mut by_tuple: BTreeMap<&Vec<Const>, Vec<Lit>> = BTreeMap::new();
        for p in agg.set.pairs() {
            let conj: Vec<Lit> = p.conj.iter().map(|a| self.atom_lit(a)).collect();
            let l = self.and_lit(conj);
            by_tuple.entry(&p.consts).or_default().push(l);
        }
        let mut values = Vec::new();
        let mut lits = Vec::new();
        for (tuple, conds) in by_tuple {
            let l = self.or_lit(conds);
            if self.is_false(l) {
                continue;
            }
            let Some(first) = tuple.first() else { continue };
            values.push(first.clone());
            lits.push(l);
        }
        let result = if lits.iter().all(|&l| self.is_true(l)) {
            let holds = eval_aggregate(agg.function, &values).is_some_and(|v| agg.comparator.holds(&v, &agg.guard));
            if holds {
                self.solver.true_lit()
            } else {
                self.solver.false_lit()
            }
        } else {
            let r = Lit::pos(self.solver.new_var());
            self.solver.add_aggregate(AggregateConstraint {
                function: agg.function,
                comparator: agg.comparator,
                guard: agg.guard.clone(),
                values,
                lits,
                result: r,
            });
            r
        };
        self.agg_cache.insert(agg.clone(), result);
        result
    }

    fn literal(&mut self, lit: &GroundLiteral) -> Lit {
        match lit {
            GroundLiteral::Pos(a) => self.atom_lit(a),
            GroundLiteral::Neg(a) => !self.atom_lit(a),
            GroundLiteral::Aggregate(agg) => self.aggregate_lit(agg),
            GroundLiteral::Builtin(b) => {
                if b.holds() {
                    self.solver.true_lit()
                } else {
                    self.solver.false_lit()
                }
            }
        }
    }

    /// `body → head₁ ∨ … ∨ headₙ`; returns the body and head literals.
    fn add_rule_clause(&mut self, rule: &GroundRule) -> (Vec<Lit>, Vec<Lit>) {
        let body: Vec<Lit> = rule.body.iter().map(|l| self.literal(l)).collect();
        let head: Vec<Lit> = rule.head.iter().map(|h| self.atom_lit(h)).collect();
        let mut clause: Vec<Lit> = body.iter().map(|&l| !l).collect();
        clause.extend(head.iter().copied());
        self.solver.add_clause(clause);
        (body, head)
    }

    /// Rule clauses plus support for every atom variable.
    fn add_program(&mut self, rules: &[GroundRule]) {
        let mut support: HashMap<Var, Vec<Lit>> = HashMap::new();
        for rule in rules {
            let (body, head) = self.add_rule_clause(rule);
            if head.is_empty() {
                continue;
            }
            let b = self.and_lit(body);
            for (i, &h) in head.iter().enumerate() {
                if self.is_true(h) || self.is_false(h) {
                    continue;
                }
                let mut cond = vec![b];
                cond.extend(head.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &o)| !o));
                let s = self.and_lit(cond);
                support.entry(h.var()).or_default().push(s);
            }
        }
        let vars: Vec<Var> = self.atoms.iter().map(|&(v, _)| v).collect();
        for v in vars {
            let mut clause = vec![Lit::neg(v)];
            clause.extend(support.remove(&v).unwrap_or_default());
            self.solver.add_clause(clause);
        }
    }

    fn apply_heuristic(&mut self, heuristic: &Heuristic) {
        let mut keyed: Vec<(Vec<Const>, &GroundAtom, Var)> = Vec::new();
        let mut rest: Vec<(&GroundAtom, Var)> = Vec::new();
        for (v, a) in &self.atoms {
            match heuristic.key.as_ref().and_then(|k| k(a)) {
                Some(key) => keyed.push((key, a, *v)),
                None => rest.push((a, *v)),
            }
        }
        keyed.sort();
        rest.sort();
        let mut order: Vec<(Var, bool)> = keyed.into_iter().map(|(_, _, v)| (v, heuristic.prefer_true)).collect();
        order.extend(rest.into_iter().map(|(_, v)| (v, false)));
        self.solver.set_order(order);
    }

    fn current_interpretation(&self, certain: &Interpretation) -> Interpretation {
        let mut m = certain.clone();
        for (v, a) in &self.atoms {
            if self.solver.value(*v) == Some(true) {
                m.insert(a.clone());
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asp::parse_program;

    fn answer_sets(src: &str) -> Vec<String> {
        enumerate_answer_sets(&parse_program(src).unwrap(), None)
            .unwrap()
            .into_iter()
            .map(|i| i.to_string())
            .collect()
    }

    #[test]
    fn example_programs() {
        assert_eq!(answer_sets("a(0) :- #count{X: b(X)} <= 0."), vec!["{a(0)}"]);
        assert_eq!(answer_sets("b(0) :- #count{X: b(X)} > 0."), vec!["{}"]);
        let p1 = answer_sets(
            "a(1) v b(2,2).
             a(2) v b(2,1).
             c(X) :- a(X), #sum{Y: b(X,Y)} >= 2.",
        );
        assert_eq!(p1.len(), 4);
        assert!(p1.contains(&"{a(2), b(2,2), c(2)}".to_string()));
    }

    #[test]
    fn even_loop_has_two_answer_sets() {
        assert_eq!(answer_sets("a :- not b. b :- not a."), vec!["{a}", "{b}"]);
    }

    #[test]
    fn odd_loop_has_none() {
        assert!(answer_sets("a :- not a.").is_empty());
    }

    #[test]
    fn positive_loop_is_unfounded() {
        assert_eq!(answer_sets("a :- b. b :- a."), vec!["{}"]);
        assert_eq!(answer_sets("a :- b. b :- a. c :- not a."), vec!["{c}"]);
        assert_eq!(answer_sets("a :- b. b :- a. a v c."), vec!["{a, b}", "{c}"]);
    }

    #[test]
    fn disjunction_is_minimal() {
        assert_eq!(answer_sets("a v b. a :- b. b :- a."), vec!["{a, b}"]);
        assert_eq!(answer_sets("a v b v c."), vec!["{a}", "{b}", "{c}"]);
    }

    #[test]
    fn constraints_filter() {
        assert_eq!(answer_sets("a v b. :- a."), vec!["{b}"]);
        assert!(answer_sets("a. :- a.").is_empty());
    }

    #[test]
    fn limit_is_respected() {
        let p = parse_program("a v b v c.").unwrap();
        assert_eq!(enumerate_answer_sets(&p, Some(2)).unwrap().len(), 2);
    }

    #[test]
    fn count_guess() {
        let sets = answer_sets("d(1). d(2). d(3). p(X) v q(X) :- d(X). :- #count{X: p(X)} != 2.");
        assert_eq!(sets.len(), 3);
    }

    #[test]
    fn minimality_check_directly() {
        let g = crate::asp::ground_program(&parse_program("a v b. a :- b.").unwrap()).unwrap();
        let ab: Interpretation = [GroundAtom::new("a", vec![]), GroundAtom::new("b", vec![])].into_iter().collect();
        let a: Interpretation = [GroundAtom::new("a", vec![])].into_iter().collect();
        assert!(!is_minimal_model(&ab, &g));
        assert!(is_minimal_model(&a, &g));
    }

    #[test]
    fn heuristic_orders_first_answer_set() {
        let p = parse_program("d(1). d(2). d(3). p(X) v q(X) :- d(X). :- #count{X: p(X)} != 1.").unwrap();
        let opts = SolveOptions {
            limit: Some(1),
            heuristic: Heuristic::by_predicate("p", vec![0], true),
            ..Default::default()
        };
        let first = enumerate_with(&p, &opts).unwrap().answer_sets;
        assert!(first[0].contains(&GroundAtom::new("p", vec![Const::Int(1)])));
    }

    #[test]
    fn conflict_budget_is_reported() {
        // Pigeonhole: 6 items into 5 slots needs many conflicts.
        let p = parse_program(
            "i(1). i(2). i(3). i(4). i(5). i(6). s(1). s(2). s(3). s(4). s(5).
             in(I,S) v out(I,S) :- i(I), s(S).
             :- i(I), #count{S: in(I,S)} != 1.
             :- s(S), i(I), i(J), in(I,S), in(J,S), I != J.",
        )
        .unwrap();
        let opts = SolveOptions { max_conflicts: Some(3), ..Default::default() };
        assert!(enumerate_with(&p, &opts).unwrap_err().is_resource_limit());
    }
}
