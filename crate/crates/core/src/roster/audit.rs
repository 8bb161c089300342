//! Direct recomputation of every constraint over a team, written without the
//! logic engine so it can serve as an independent referee.

use std::collections::{BTreeMap, BTreeSet};

use super::model::{Assignment, Employee, RosterInstance, Shift};
use super::report::{Violation, ViolationKind};

/// Which preference constraints apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preferences {
    Strict,
    Prioritized,
    Ignored,
}

fn exceeds_limits(inst: &RosterInstance, e: &Employee, sh: &Shift) -> bool {
    let p = &inst.parameters;
    let h = &e.history;
    sh.duration + h.weekly_hours > p.week_hours_max
        || sh.duration + h.daily_hours > p.daily_hours_max
        || sh.duration + h.week_overtime_hours > p.week_overtime_max
}

/// Availability of an employee for a role in a shift.
pub fn can_be_assigned(inst: &RosterInstance, employee: &str, shift: &str, skill: &str) -> bool {
    let (Some(e), Some(sh)) = (inst.employee(employee), inst.shift(shift)) else {
        return false;
    };
    e.skills.contains(skill)
        && inst.requirements.iter().any(|r| r.shift == shift && r.skill == skill)
        && !e.absences.contains(shift)
        && !inst.exclusions.iter().any(|x| x.employee == employee && x.shift == shift)
        && !exceeds_limits(inst, e, sh)
}

/// Every `(preferred, other, shift, skill)` preference of one kind.
pub fn preferences(inst: &RosterInstance, kind: ViolationKind) -> BTreeSet<(String, String, String, String)> {
    let crucial = inst.crucial_skills();
    let crucial_count = |e: &Employee| e.skills.iter().filter(|s| crucial.contains(s.as_str())).count();
    let mut out = BTreeSet::new();
    for r in &inst.requirements {
        let heavy = inst.skill(&r.skill).is_some_and(|s| s.heavy);
        if kind == ViolationKind::Turnover && !heavy {
            continue;
        }
        let eligible: Vec<&Employee> =
            inst.employees.iter().filter(|e| can_be_assigned(inst, &e.id, &r.shift, &r.skill)).collect();
        for a in &eligible {
            for b in &eligible {
                let prefers = match kind {
                    ViolationKind::Turnover => {
                        a.history.last_allocation_day(&r.skill) < b.history.last_allocation_day(&r.skill)
                    }
                    ViolationKind::Fairness => a.history.weekly_hours + inst.parameters.fair_gap < b.history.weekly_hours,
                    ViolationKind::Crucial => crucial_count(a) < crucial_count(b),
                    _ => false,
                };
                if prefers {
                    out.insert((a.id.clone(), b.id.clone(), r.shift.clone(), r.skill.clone()));
                }
            }
        }
    }
    out
}

/// All violations of `team`, sorted.
pub fn audit(inst: &RosterInstance, team: &Assignment, prefs: Preferences) -> Vec<Violation> {
    let mut out = Vec::new();

    for t in team.iter() {
        if !can_be_assigned(inst, &t.employee, &t.shift, &t.skill) {
            out.push(Violation::new(ViolationKind::Eligibility, &[&t.employee], &t.shift).with_skill(&t.skill));
        }
    }

    for r in &inst.requirements {
        let actual = team.iter().filter(|t| t.shift == r.shift && t.skill == r.skill).count() as u32;
        if actual != r.count {
            out.push(Violation::new(ViolationKind::Count, &[], &r.shift).with_skill(&r.skill).with_counts(r.count, actual));
        }
    }

    let mut roles: BTreeMap<(&str, &str), BTreeSet<&str>> = BTreeMap::new();
    let mut shifts_of: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for t in team.iter() {
        roles.entry((&t.employee, &t.shift)).or_default().insert(&t.skill);
        shifts_of.entry(&t.employee).or_default().insert(&t.shift);
    }
    for ((e, sh), skills) in &roles {
        for a in skills {
            for b in skills {
                if a < b {
                    out.push(Violation::new(ViolationKind::MultiRole, &[e], sh).with_skill(a).with_other_skill(b));
                }
            }
        }
    }
    for (e, shifts) in &shifts_of {
        for a in shifts {
            for b in shifts {
                if a < b && !inst.double_linked(a, b) {
                    out.push(Violation::new(ViolationKind::MultiShift, &[e], a).with_other_shift(b));
                }
            }
        }
    }

    for l in &inst.double_shifts {
        let small = team.staff(&l.small);
        let big = team.staff(&l.big);
        for e in small.difference(&big) {
            out.push(Violation::new(ViolationKind::DoubleShift, &[e], &l.small).with_other_shift(&l.big));
        }
        let (Some(s1), Some(s2)) = (inst.shift(&l.small), inst.shift(&l.big)) else {
            continue;
        };
        let both = s1.duration + s2.duration;
        let p = &inst.parameters;
        for e in small.intersection(&big) {
            let Some(emp) = inst.employee(e) else { continue };
            let h = &emp.history;
            if h.weekly_hours + both > p.week_hours_max
                || h.daily_hours + both > p.daily_hours_max
                || h.week_overtime_hours + both > p.week_overtime_max
            {
                out.push(Violation::new(ViolationKind::TimeLimit, &[e], &l.small).with_other_shift(&l.big));
            }
        }
    }

    if prefs != Preferences::Ignored {
        let turnover = preferences(inst, ViolationKind::Turnover);
        let fairness = preferences(inst, ViolationKind::Fairness);
        let crucial = preferences(inst, ViolationKind::Crucial);
        let related = |set: &BTreeSet<(String, String, String, String)>, a: &str, b: &str, sh: &str| {
            set.iter().any(|(x, y, s, _)| s == sh && ((x == a && y == b) || (x == b && y == a)))
        };
        for (kind, set) in [
            (ViolationKind::Turnover, &turnover),
            (ViolationKind::Fairness, &fairness),
            (ViolationKind::Crucial, &crucial),
        ] {
            for (a, b, sh, sk) in set {
                if !team.contains(b, sh, sk) || team.contains(a, sh, sk) {
                    continue;
                }
                if prefs == Preferences::Prioritized {
                    let waived = match kind {
                        ViolationKind::Fairness => related(&turnover, a, b, sh),
                        ViolationKind::Crucial => related(&turnover, a, b, sh) || related(&fairness, a, b, sh),
                        _ => false,
                    };
                    if waived {
                        continue;
                    }
                }
                out.push(Violation::new(kind, &[a, b], sh).with_skill(sk));
            }
        }
    }

    out.sort();
    out.dedup();
    out
}
