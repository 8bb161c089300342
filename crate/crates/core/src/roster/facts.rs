//! Translation of a roster instance into input facts.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::asp::{Atom, Const, GroundAtom, Program, Rule, Term};

use super::model::{Assignment, RosterInstance, Triple};
use super::validate::{errors_only, validate_instance, ValidationIssue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Employee,
    Shift,
    Skill,
}

impl Kind {
    fn prefix(self) -> &'static str {
        match self {
            Kind::Employee => "e_",
            Kind::Shift => "sh_",
            Kind::Skill => "sk_",
        }
    }
}

/// Bidirectional mapping between domain identifiers and symbolic constants.
///
/// Identifiers that already are valid constants map to themselves; others
/// are lowercased with every other character replaced by `_` and prefixed
/// by their kind, with a numeric suffix on collision.
#[derive(Debug, Clone, Default)]
pub struct NameMap {
    forward: HashMap<(Kind, String), Const>,
    backward: HashMap<(Kind, Const), String>,
    used: HashMap<Kind, HashSet<String>>,
}

pub fn is_plain_constant(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && s != "not"
        && s != "v"
}

impl NameMap {
    pub fn for_instance(instance: &RosterInstance) -> Self {
        let mut m = NameMap::default();
        for e in &instance.employees {
            m.intern(Kind::Employee, &e.id);
        }
        for s in &instance.shifts {
            m.intern(Kind::Shift, &s.id);
        }
        for s in &instance.skills {
            m.intern(Kind::Skill, &s.id);
        }
        m
    }

    pub fn intern(&mut self, kind: Kind, id: &str) -> Const {
        if let Some(c) = self.forward.get(&(kind, id.to_string())) {
            return c.clone();
        }
        let used = self.used.entry(kind).or_default();
        let base = if is_plain_constant(id) {
            id.to_string()
        } else {
            let cleaned: String = id
                .chars()
                .map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_lowercase() } else { '_' })
                .collect();
            format!("{}{}", kind.prefix(), cleaned)
        };
        let mut name = base.clone();
        let mut n = 1;
        while used.contains(&name) {
            name = format!("{base}_{n}");
            n += 1;
        }
        used.insert(name.clone());
        let c = Const::sym(&name);
        self.forward.insert((kind, id.to_string()), c.clone());
        self.backward.insert((kind, c.clone()), id.to_string());
        c
    }

    pub fn constant(&self, kind: Kind, id: &str) -> Option<&Const> {
        self.forward.get(&(kind, id.to_string()))
    }

    pub fn id(&self, kind: Kind, c: &Const) -> Option<&str> {
        self.backward.get(&(kind, c.clone())).map(String::as_str)
    }

    pub fn employee(&self, id: &str) -> Const {
        self.constant(Kind::Employee, id).cloned().unwrap_or_else(|| Const::sym(id))
    }

    pub fn shift(&self, id: &str) -> Const {
        self.constant(Kind::Shift, id).cloned().unwrap_or_else(|| Const::sym(id))
    }

    pub fn skill(&self, id: &str) -> Const {
        self.constant(Kind::Skill, id).cloned().unwrap_or_else(|| Const::sym(id))
    }

    /// Reads an `assign(E,Sh,Sk)` atom back as a triple.
    pub fn triple(&self, atom: &GroundAtom) -> Option<Triple> {
        match atom.args.as_slice() {
            [e, sh, sk] => Some(Triple {
                employee: self.id(Kind::Employee, e)?.to_string(),
                shift: self.id(Kind::Shift, sh)?.to_string(),
                skill: self.id(Kind::Skill, sk)?.to_string(),
            }),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("instance has {} validation error(s); first: {}", .0.len(), .0.first().map(|i| i.message.as_str()).unwrap_or(""))]
pub struct InvalidInstance(pub Vec<ValidationIssue>);

/// Number of crucial skills held by each employee.
pub fn derive_crucial_counts(instance: &RosterInstance) -> BTreeMap<String, usize> {
    let crucial = instance.crucial_skills();
    instance
        .employees
        .iter()
        .map(|e| (e.id.clone(), e.skills.iter().filter(|s| crucial.contains(s.as_str())).count()))
        .collect()
}

fn fact(pred: &str, args: Vec<Const>) -> Rule {
    Rule::fact(Atom::new(pred, args.into_iter().map(Term::Const).collect()))
}

fn int(v: impl Into<i64>) -> Const {
    Const::Int(v.into())
}

/// Input facts for a validated instance, including pre-assignments as
/// `assign` facts.
pub fn instance_to_facts(instance: &RosterInstance) -> Result<(Program, NameMap), InvalidInstance> {
    let errors = errors_only(validate_instance(instance));
    if !errors.is_empty() {
        return Err(InvalidInstance(errors));
    }
    let names = NameMap::for_instance(instance);
    let mut rules = facts_unchecked(instance, &names);
    for t in &instance.pre_assignments {
        rules.push(assign_fact(&names, t));
    }
    Ok((Program::new(rules), names))
}

pub(crate) fn assign_fact(names: &NameMap, t: &Triple) -> Rule {
    fact("assign", vec![names.employee(&t.employee), names.shift(&t.shift), names.skill(&t.skill)])
}

/// Team given as `assign` facts.
pub fn team_facts(names: &NameMap, team: &Assignment) -> Program {
    Program::new(team.iter().map(|t| assign_fact(names, t)).collect())
}

pub(crate) fn facts_unchecked(instance: &RosterInstance, names: &NameMap) -> Vec<Rule> {
    let mut rules = Vec::new();
    let p = &instance.parameters;
    rules.push(fact("dailyHours", vec![int(p.daily_hours_max)]));
    rules.push(fact("weekHours", vec![int(p.week_hours_max)]));
    rules.push(fact("weekOvertime", vec![int(p.week_overtime_max)]));
    rules.push(fact("fairGap", vec![int(p.fair_gap)]));
    for s in &instance.skills {
        if s.heavy {
            rules.push(fact("heavyRole", vec![names.skill(&s.id)]));
        }
        if s.crucial {
            rules.push(fact("crucialRole", vec![names.skill(&s.id)]));
        }
    }
    for s in &instance.shifts {
        rules.push(fact("shift", vec![names.shift(&s.id), int(s.duration)]));
        if let Some(prev) = &s.predecessor {
            rules.push(fact("previousShift", vec![names.shift(&s.id), names.shift(prev)]));
        }
    }
    for r in &instance.requirements {
        rules.push(fact("neededEmployees", vec![names.shift(&r.shift), names.skill(&r.skill), int(r.count)]));
    }
    for l in &instance.double_shifts {
        rules.push(fact("isDouble", vec![names.shift(&l.small), names.shift(&l.big)]));
    }
    let crucial = derive_crucial_counts(instance);
    for e in &instance.employees {
        let ec = names.employee(&e.id);
        for sk in &e.skills {
            rules.push(fact("hasSkill", vec![ec.clone(), names.skill(sk)]));
            rules.push(fact("lastAllocation", vec![ec.clone(), names.skill(sk), int(e.history.last_allocation_day(sk))]));
        }
        for sh in &e.absences {
            rules.push(fact("absent", vec![ec.clone(), names.shift(sh)]));
        }
        rules.push(fact("workedWeeklyHours", vec![ec.clone(), int(e.history.weekly_hours)]));
        rules.push(fact("workedDailyHours", vec![ec.clone(), int(e.history.daily_hours)]));
        rules.push(fact("workedWeekOvertimeHours", vec![ec.clone(), int(e.history.week_overtime_hours)]));
        rules.push(fact("hasCrucial", vec![ec.clone(), int(crucial[&e.id] as i64)]));
    }
    for x in &instance.exclusions {
        rules.push(fact("manuallyExcluded", vec![names.employee(&x.employee), names.shift(&x.shift)]));
    }
    rules
}
