//! Conflict-driven search over boolean variables with clauses and reified
//! aggregate constraints.
//!
//! Branching follows a fixed variable order with a fixed polarity per
//! variable, so runs are reproducible. There are no restarts.

use std::time::Instant;

use super::syntax::{AggregateFunction, Comparator, Const};

pub type Var = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    pub fn pos(v: Var) -> Lit {
        Lit(v << 1)
    }

    pub fn neg(v: Var) -> Lit {
        Lit((v << 1) | 1)
    }

    pub fn new(v: Var, positive: bool) -> Lit {
        if positive {
            Lit::pos(v)
        } else {
            Lit::neg(v)
        }
    }

    pub fn var(self) -> Var {
        self.0 >> 1
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    pub fn negate(self) -> Lit {
        Lit(self.0 ^ 1)
    }

    fn index(self) -> usize {
        self.0 as usize
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        self.negate()
    }
}

/// `result ↔ function{values[i] : lits[i]} comparator guard`. Elements are
/// distinct tuples; `values[i]` is the first constant of tuple `i`.
#[derive(Debug, Clone)]
pub struct AggregateConstraint {
    pub function: AggregateFunction,
    pub comparator: Comparator,
    pub guard: Const,
    pub values: Vec<Const>,
    pub lits: Vec<Lit>,
    pub result: Lit,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Limits {
    pub deadline: Option<Instant>,
    pub max_conflicts: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Sat,
    Unsat,
    Limit,
}

#[derive(Debug, Default, Clone, Copy)]
pub struct Stats {
    pub decisions: u64,
    pub conflicts: u64,
    pub propagations: u64,
}

#[derive(Clone, Copy)]
enum Reason {
    Decision,
    Clause(u32),
    /// Offset and length into the reason arena.
    Arena(u32, u32),
}

struct Clause {
    lits: Vec<Lit>,
}

const UNASSIGNED: i8 = 0;

pub struct Solver {
    values: Vec<i8>,
    levels: Vec<u32>,
    reasons: Vec<Reason>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    arena: Vec<Lit>,
    arena_lim: Vec<usize>,
    qhead: usize,
    clauses: Vec<Clause>,
    watches: Vec<Vec<u32>>,
    aggregates: Vec<AggregateConstraint>,
    agg_watch: Vec<Vec<u32>>,
    order: Vec<Var>,
    polarity: Vec<bool>,
    order_pos: usize,
    seen: Vec<bool>,
    ok: bool,
    pub stats: Stats,
}

impl Default for Solver {
    fn default() -> Self {
        Self::new()
    }
}

enum AggCheck {
    Ok,
    Conflict(Vec<Lit>),
}

impl Solver {
    /// A solver with one variable, fixed true; see [`Solver::true_lit`].
    pub fn new() -> Self {
        let mut s = Solver {
            values: Vec::new(),
            levels: Vec::new(),
            reasons: Vec::new(),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            arena: Vec::new(),
            arena_lim: Vec::new(),
            qhead: 0,
            clauses: Vec::new(),
            watches: Vec::new(),
            aggregates: Vec::new(),
            agg_watch: Vec::new(),
            order: Vec::new(),
            polarity: Vec::new(),
            order_pos: 0,
            seen: Vec::new(),
            ok: true,
            stats: Stats::default(),
        };
        let t = s.new_var();
        s.assign(Lit::pos(t), Reason::Decision);
        s
    }

    pub fn true_lit(&self) -> Lit {
        Lit::pos(0)
    }

    pub fn false_lit(&self) -> Lit {
        Lit::neg(0)
    }

    pub fn num_vars(&self) -> usize {
        self.values.len()
    }

    pub fn new_var(&mut self) -> Var {
        let v = self.values.len() as Var;
        self.values.push(UNASSIGNED);
        self.levels.push(0);
        self.reasons.push(Reason::Decision);
        self.watches.push(Vec::new());
        self.watches.push(Vec::new());
        self.agg_watch.push(Vec::new());
        self.polarity.push(false);
        self.seen.push(false);
        v
    }

    fn lit_value(&self, l: Lit) -> i8 {
        let v = self.values[l.var() as usize];
        if l.is_positive() {
            v
        } else {
            -v
        }
    }

    pub fn value(&self, v: Var) -> Option<bool> {
        match self.values[v as usize] {
            1 => Some(true),
            -1 => Some(false),
            _ => None,
        }
    }

    pub fn lit_is_true(&self, l: Lit) -> bool {
        self.lit_value(l) == 1
    }

    fn level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn assign(&mut self, l: Lit, reason: Reason) {
        let v = l.var() as usize;
        self.values[v] = if l.is_positive() { 1 } else { -1 };
        self.levels[v] = self.level();
        self.reasons[v] = reason;
        self.trail.push(l);
    }

    /// Adds a clause before search starts. Returns false once the clause
    /// set is known to be unsatisfiable.
    pub fn add_clause(&mut self, mut lits: Vec<Lit>) -> bool {
        debug_assert_eq!(self.level(), 0);
        if !self.ok {
            return false;
        }
        lits.sort();
        lits.dedup();
        let mut kept = Vec::with_capacity(lits.len());
        for (i, &l) in lits.iter().enumerate() {
            if i + 1 < lits.len() && lits[i + 1] == l.negate() {
                return true;
            }
            match self.lit_value(l) {
                1 => return true,
                -1 => {}
                _ => kept.push(l),
            }
        }
        match kept.len() {
            0 => {
                self.ok = false;
                false
            }
            1 => {
                self.assign(kept[0], Reason::Decision);
                true
            }
            _ => {
                self.attach(kept);
                true
            }
        }
    }

    fn attach(&mut self, lits: Vec<Lit>) -> u32 {
        let idx = self.clauses.len() as u32;
        self.watches[lits[0].negate().index()].push(idx);
        self.watches[lits[1].negate().index()].push(idx);
        self.clauses.push(Clause { lits });
        idx
    }

    pub fn add_aggregate(&mut self, agg: AggregateConstraint) {
        let idx = self.aggregates.len() as u32;
        let mut vars: Vec<Var> = agg.lits.iter().map(|l| l.var()).collect();
        vars.push(agg.result.var());
        vars.sort_unstable();
        vars.dedup();
        for v in vars {
            self.agg_watch[v as usize].push(idx);
        }
        self.aggregates.push(agg);
    }

    /// Fixes the branching order: listed variables first, each tried with
    /// the given polarity; the rest afterwards in index order, false first.
    pub fn set_order(&mut self, order: Vec<(Var, bool)>) {
        let mut listed = vec![false; self.values.len()];
        self.order.clear();
        for (v, pol) in order {
            if !listed[v as usize] {
                listed[v as usize] = true;
                self.polarity[v as usize] = pol;
                self.order.push(v);
            }
        }
        for v in 0..self.values.len() as Var {
            if !listed[v as usize] {
                self.order.push(v);
            }
        }
        self.order_pos = 0;
    }

    /// Current decision literals, lowest level first.
    pub fn decisions(&self) -> Vec<Lit> {
        self.trail_lim.iter().map(|&i| self.trail[i]).collect()
    }

    fn backtrack(&mut self, level: u32) {
        if self.level() <= level {
            return;
        }
        let start = self.trail_lim[level as usize];
        for i in (start..self.trail.len()).rev() {
            let v = self.trail[i].var() as usize;
            self.values[v] = UNASSIGNED;
        }
        self.trail.truncate(start);
        self.arena.truncate(self.arena_lim[level as usize]);
        self.trail_lim.truncate(level as usize);
        self.arena_lim.truncate(level as usize);
        self.qhead = self.trail.len();
        self.order_pos = 0;
    }

    fn new_level(&mut self) {
        self.trail_lim.push(self.trail.len());
        self.arena_lim.push(self.arena.len());
    }

    fn imply_with_arena(&mut self, lit: Lit, others: &[Lit]) {
        let off = self.arena.len() as u32;
        self.arena.push(lit);
        self.arena.extend_from_slice(others);
        let reason = Reason::Arena(off, others.len() as u32 + 1);
        self.assign(lit, reason);
    }

    /// Unit propagation over clauses and aggregates. Returns a conflicting
    /// clause (all literals false) if one arises.
    fn propagate(&mut self) -> Option<Vec<Lit>> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            if let Some(c) = self.propagate_clauses(p) {
                return Some(c);
            }
            let n = self.agg_watch[p.var() as usize].len();
            for k in 0..n {
                let a = self.agg_watch[p.var() as usize][k];
                if let AggCheck::Conflict(c) = self.propagate_aggregate(a as usize) {
                    return Some(c);
                }
            }
        }
        None
    }

    fn propagate_clauses(&mut self, p: Lit) -> Option<Vec<Lit>> {
        let false_lit = p.negate();
        let mut ws = std::mem::take(&mut self.watches[p.index()]);
        let mut i = 0;
        let mut j = 0;
        let mut conflict = None;
        while i < ws.len() {
            let ci = ws[i];
            i += 1;
            let clause = &mut self.clauses[ci as usize].lits;
            if clause[0] == false_lit {
                clause.swap(0, 1);
            }
            let first = clause[0];
            let first_val = {
                let v = self.values[first.var() as usize];
                if first.is_positive() {
                    v
                } else {
                    -v
                }
            };
            if first_val == 1 {
                ws[j] = ci;
                j += 1;
                continue;
            }
            let mut moved = false;
            for k in 2..clause.len() {
                let l = clause[k];
                let v = self.values[l.var() as usize];
                let val = if l.is_positive() { v } else { -v };
                if val != -1 {
                    clause.swap(1, k);
                    let w = clause[1].negate().index();
                    self.watches[w].push(ci);
                    moved = true;
                    break;
                }
            }
            if moved {
                continue;
            }
            ws[j] = ci;
            j += 1;
            if first_val == -1 {
                conflict = Some(self.clauses[ci as usize].lits.clone());
                while i < ws.len() {
                    ws[j] = ws[i];
                    j += 1;
                    i += 1;
                }
            } else {
                self.assign(first, Reason::Clause(ci));
            }
        }
        ws.truncate(j);
        self.watches[p.index()] = ws;
        conflict
    }

    fn propagate_aggregate(&mut self, a: usize) -> AggCheck {
        let agg = &self.aggregates[a];
        let mut state = ElementState::default();
        let mut assigned: Vec<Lit> = Vec::new();
        let mut unknown: Vec<usize> = Vec::new();
        for (i, &l) in agg.lits.iter().enumerate() {
            match self.lit_value(l) {
                1 => {
                    state.add_true(&agg.values[i]);
                    assigned.push(l.negate());
                }
                -1 => assigned.push(l),
                _ => {
                    state.add_unknown(&agg.values[i]);
                    unknown.push(i);
                }
            }
        }
        let result = agg.result;
        let (can_true, can_false) = state.possible(agg);
        match self.lit_value(result) {
            1 | -1 => {
                let required = self.lit_value(result) == 1;
                let feasible = if required { can_true } else { can_false };
                let result_false = if required { result.negate() } else { result };
                if !feasible {
                    let mut c = assigned;
                    c.push(result_false);
                    return AggCheck::Conflict(c);
                }
                if unknown.is_empty() {
                    return AggCheck::Ok;
                }
                let mut forced: Vec<Lit> = Vec::new();
                for &i in &unknown {
                    let l = agg.lits[i];
                    let v = &agg.values[i];
                    let (t_true, t_false) = state.possible_if(agg, v, true);
                    if !(if required { t_true } else { t_false }) {
                        forced.push(l.negate());
                        continue;
                    }
                    let (f_true, f_false) = state.possible_if(agg, v, false);
                    if !(if required { f_true } else { f_false }) {
                        forced.push(l);
                    }
                }
                if forced.is_empty() {
                    return AggCheck::Ok;
                }
                let mut reason = assigned;
                reason.push(result_false);
                for l in forced {
                    match self.lit_value(l) {
                        1 => {}
                        -1 => {
                            let mut c = reason.clone();
                            c.push(l);
                            return AggCheck::Conflict(c);
                        }
                        _ => self.imply_with_arena(l, &reason),
                    }
                }
                AggCheck::Ok
            }
            _ => {
                if can_true && can_false {
                    return AggCheck::Ok;
                }
                if !can_true && !can_false {
                    // Only reachable with an empty achievable set, which the
                    // state never produces; keep the result unconstrained.
                    return AggCheck::Ok;
                }
                let l = if can_true { result } else { result.negate() };
                self.imply_with_arena(l, &assigned);
                AggCheck::Ok
            }
        }
    }

    fn reason_lits(&self, v: Var) -> &[Lit] {
        match self.reasons[v as usize] {
            Reason::Decision => &[],
            Reason::Clause(ci) => &self.clauses[ci as usize].lits[1..],
            Reason::Arena(off, len) => &self.arena[off as usize + 1..(off + len) as usize],
        }
    }

    /// First-UIP learning. `conflict` holds only false literals, at least
    /// one of them on the current level.
    fn analyze(&mut self, conflict: Vec<Lit>) -> (Vec<Lit>, u32) {
        let current = self.level();
        let mut learnt = vec![Lit(0)];
        let mut pending = 0usize;
        let mut idx = self.trail.len();
        let mut clause = conflict;
        let mut touched: Vec<Var> = Vec::new();
        let p = loop {
            for &q in &clause {
                let v = q.var();
                if !self.seen[v as usize] && self.levels[v as usize] > 0 {
                    self.seen[v as usize] = true;
                    touched.push(v);
                    if self.levels[v as usize] >= current {
                        pending += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            let p = loop {
                idx -= 1;
                if self.seen[self.trail[idx].var() as usize] {
                    break self.trail[idx];
                }
            };
            self.seen[p.var() as usize] = false;
            pending -= 1;
            if pending == 0 {
                break p;
            }
            clause = self.reason_lits(p.var()).to_vec();
        };
        for v in touched {
            self.seen[v as usize] = false;
        }
        learnt[0] = p.negate();
        let mut back = 0;
        if learnt.len() > 1 {
            let mut best = 1;
            for k in 1..learnt.len() {
                if self.levels[learnt[k].var() as usize] > self.levels[learnt[best].var() as usize] {
                    best = k;
                }
            }
            learnt.swap(1, best);
            back = self.levels[learnt[1].var() as usize];
        }
        (learnt, back)
    }

    /// Adds a clause whose literals may already be assigned, backjumping
    /// as needed so that it is not violated. Returns false if the formula
    /// became unsatisfiable.
    fn add_clause_during_search(&mut self, mut lits: Vec<Lit>) -> bool {
        lits.sort();
        lits.dedup();
        if lits.is_empty() {
            self.ok = false;
            return false;
        }
        // Order literals: unassigned/true first, then false by level desc.
        let key = |s: &Solver, l: Lit| -> (i8, i64) {
            match s.lit_value(l) {
                -1 => (1, -(s.levels[l.var() as usize] as i64)),
                _ => (0, 0),
            }
        };
        lits.sort_by_key(|&l| key(self, l));
        let all_false = lits.iter().all(|&l| self.lit_value(l) == -1);
        if all_false {
            let top = self.levels[lits[0].var() as usize];
            if top == 0 {
                self.ok = false;
                return false;
            }
            // Backtrack until at most one literal is unassigned.
            let second = if lits.len() > 1 { self.levels[lits[1].var() as usize] } else { 0 };
            if second == top {
                // Several false literals on the top level: undo it entirely
                // and let propagation handle the clause.
                self.backtrack(top - 1);
            } else {
                self.backtrack(second);
            }
        }
        lits.sort_by_key(|&l| key(self, l));
        if lits.len() == 1 {
            self.backtrack(0);
            match self.lit_value(lits[0]) {
                -1 => {
                    self.ok = false;
                    false
                }
                1 => true,
                _ => {
                    self.assign(lits[0], Reason::Decision);
                    true
                }
            }
        } else {
            let unit = self.lit_value(lits[0]) == UNASSIGNED && self.lit_value(lits[1]) == -1;
            let ci = self.attach(lits);
            if unit {
                let l = self.clauses[ci as usize].lits[0];
                self.assign(l, Reason::Clause(ci));
            }
            true
        }
    }

    /// Excludes the current total assignment by adding the negation of its
    /// decisions. Returns false when no other assignment can exist.
    pub fn block_current(&mut self) -> bool {
        let clause: Vec<Lit> = self.decisions().into_iter().map(|l| l.negate()).collect();
        if clause.is_empty() {
            self.ok = false;
            return false;
        }
        self.add_clause_during_search(clause)
    }

    fn pick_branch(&mut self) -> Option<Lit> {
        while self.order_pos < self.order.len() {
            let v = self.order[self.order_pos];
            if self.values[v as usize] == UNASSIGNED {
                return Some(Lit::new(v, self.polarity[v as usize]));
            }
            self.order_pos += 1;
        }
        None
    }

    /// Searches for the next total assignment satisfying every constraint.
    pub fn solve(&mut self, limits: &Limits) -> Outcome {
        if !self.ok {
            return Outcome::Unsat;
        }
        if self.order.len() != self.values.len() {
            let known: Vec<(Var, bool)> = self.order.iter().map(|&v| (v, self.polarity[v as usize])).collect();
            self.set_order(known);
        }
        let start_conflicts = self.stats.conflicts;
        let mut ticks = 0u32;
        loop {
            if let Some(conflict) = self.propagate() {
                self.stats.conflicts += 1;
                if self.level() == 0 {
                    self.ok = false;
                    return Outcome::Unsat;
                }
                let conflict = self.conflict_at_current_level(conflict);
                let Some(conflict) = conflict else {
                    self.ok = false;
                    return Outcome::Unsat;
                };
                let (learnt, back) = self.analyze(conflict);
                self.backtrack(back);
                if learnt.len() == 1 {
                    self.assign(learnt[0], Reason::Decision);
                } else {
                    let ci = self.attach(learnt);
                    let l = self.clauses[ci as usize].lits[0];
                    self.assign(l, Reason::Clause(ci));
                }
                if let Some(max) = limits.max_conflicts {
                    if self.stats.conflicts - start_conflicts >= max {
                        return Outcome::Limit;
                    }
                }
                continue;
            }
            ticks += 1;
            if ticks % 256 == 0 {
                if let Some(d) = limits.deadline {
                    if Instant::now() > d {
                        return Outcome::Limit;
                    }
                }
            }
            match self.pick_branch() {
                None => return Outcome::Sat,
                Some(l) => {
                    self.stats.decisions += 1;
                    self.new_level();
                    self.assign(l, Reason::Decision);
                }
            }
        }
    }

    /// Aggregate conflicts can be detected late, with no literal on the
    /// current level; backtrack to the highest level they mention.
    fn conflict_at_current_level(&mut self, conflict: Vec<Lit>) -> Option<Vec<Lit>> {
        let top = conflict.iter().map(|l| self.levels[l.var() as usize]).max().unwrap_or(0);
        if top == 0 {
            return None;
        }
        if top < self.level() {
            self.backtrack(top);
        }
        Some(conflict)
    }
}

/// Summary of the true and unknown elements of an aggregate.
#[derive(Default, Clone)]
struct ElementState {
    true_count: i64,
    unknown_count: i64,
    true_sum: i128,
    unknown_neg: i128,
    unknown_pos: i128,
    true_non_int: u32,
    unknown_non_int: u32,
    true_min: Option<Const>,
    true_max: Option<Const>,
    unknown_values: Vec<Const>,
}

impl ElementState {
    fn add_true(&mut self, v: &Const) {
        self.true_count += 1;
        match v {
            Const::Int(i) => self.true_sum += *i as i128,
            Const::Sym(_) => self.true_non_int += 1,
        }
        if self.true_min.as_ref().is_none_or(|m| v < m) {
            self.true_min = Some(v.clone());
        }
        if self.true_max.as_ref().is_none_or(|m| v > m) {
            self.true_max = Some(v.clone());
        }
    }

    fn add_unknown(&mut self, v: &Const) {
        self.unknown_count += 1;
        match v {
            Const::Int(i) if *i < 0 => self.unknown_neg += *i as i128,
            Const::Int(i) => self.unknown_pos += *i as i128,
            Const::Sym(_) => self.unknown_non_int += 1,
        }
        self.unknown_values.push(v.clone());
    }

    /// Whether the aggregate can still end up true, and false.
    fn possible(&self, agg: &AggregateConstraint) -> (bool, bool) {
        let cmp = agg.comparator;
        let k = &agg.guard;
        match agg.function {
            AggregateFunction::Count => {
                let lo = self.true_count as i128;
                let hi = lo + self.unknown_count as i128;
                (interval_meets(lo, hi, cmp, k), interval_meets(lo, hi, negate(cmp), k))
            }
            AggregateFunction::Sum => {
                if self.true_non_int > 0 {
                    return (false, true);
                }
                let lo = self.true_sum + self.unknown_neg;
                let hi = self.true_sum + self.unknown_pos;
                let undefined_possible = self.unknown_non_int > 0;
                (
                    interval_meets(lo, hi, cmp, k),
                    undefined_possible || interval_meets(lo, hi, negate(cmp), k),
                )
            }
            AggregateFunction::Min | AggregateFunction::Max => {
                let is_min = agg.function == AggregateFunction::Min;
                let current = if is_min { &self.true_min } else { &self.true_max };
                let mut can_true = false;
                let mut can_false = false;
                let mut consider = |v: &Const| {
                    if cmp.holds(v, k) {
                        can_true = true;
                    } else {
                        can_false = true;
                    }
                };
                match current {
                    Some(m) => {
                        consider(m);
                        for u in &self.unknown_values {
                            if (is_min && u < m) || (!is_min && u > m) {
                                consider(u);
                            }
                        }
                    }
                    None => {
                        for u in &self.unknown_values {
                            consider(u);
                        }
                        can_false = true;
                    }
                }
                (can_true, can_false)
            }
        }
    }

    /// `possible` after moving one unknown element with value `v` to true
    /// or false.
    fn possible_if(&self, agg: &AggregateConstraint, v: &Const, value: bool) -> (bool, bool) {
        let mut s = match agg.function {
            AggregateFunction::Min | AggregateFunction::Max => {
                let mut s = self.clone();
                if let Some(pos) = s.unknown_values.iter().position(|u| u == v) {
                    s.unknown_values.swap_remove(pos);
                }
                s
            }
            _ => ElementState { unknown_values: Vec::new(), ..self.clone_counters() },
        };
        s.unknown_count -= 1;
        match v {
            Const::Int(i) if *i < 0 => s.unknown_neg -= *i as i128,
            Const::Int(i) => s.unknown_pos -= *i as i128,
            Const::Sym(_) => s.unknown_non_int -= 1,
        }
        if value {
            s.add_true_counters(v);
        }
        s.possible(agg)
    }

    fn clone_counters(&self) -> ElementState {
        ElementState {
            true_count: self.true_count,
            unknown_count: self.unknown_count,
            true_sum: self.true_sum,
            unknown_neg: self.unknown_neg,
            unknown_pos: self.unknown_pos,
            true_non_int: self.true_non_int,
            unknown_non_int: self.unknown_non_int,
            true_min: self.true_min.clone(),
            true_max: self.true_max.clone(),
            unknown_values: Vec::new(),
        }
    }

    fn add_true_counters(&mut self, v: &Const) {
        self.true_count += 1;
        match v {
            Const::Int(i) => self.true_sum += *i as i128,
            Const::Sym(_) => self.true_non_int += 1,
        }
        if self.true_min.as_ref().is_none_or(|m| v < m) {
            self.true_min = Some(v.clone());
        }
        if self.true_max.as_ref().is_none_or(|m| v > m) {
            self.true_max = Some(v.clone());
        }
    }
}

fn negate(cmp: Comparator) -> Comparator {
    match cmp {
        Comparator::Lt => Comparator::Ge,
        Comparator::Le => Comparator::Gt,
        Comparator::Gt => Comparator::Le,
        Comparator::Ge => Comparator::Lt,
        Comparator::Eq => Comparator::Ne,
        Comparator::Ne => Comparator::Eq,
    }
}

/// Whether some integer `v` in `[lo, hi]` satisfies `v cmp k`. Integers
/// order before symbols.
fn interval_meets(lo: i128, hi: i128, cmp: Comparator, k: &Const) -> bool {
    let k = match k {
        Const::Int(k) => *k as i128,
        Const::Sym(_) => return matches!(cmp, Comparator::Lt | Comparator::Le | Comparator::Ne),
    };
    match cmp {
        Comparator::Lt => lo < k,
        Comparator::Le => lo <= k,
        Comparator::Gt => hi > k,
        Comparator::Ge => hi >= k,
        Comparator::Eq => lo <= k && k <= hi,
        Comparator::Ne => !(lo == k && hi == k),
    }
}
