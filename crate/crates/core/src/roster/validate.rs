use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::model::{RosterInstance, Triple};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationIssue {
    pub severity: Severity,
    pub code: String,
    pub message: String,
    /// Location in the instance document, e.g. `requirements[2].skill`.
    pub path: String,
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{sev} [{}] at {}: {}", self.code, self.path, self.message)
    }
}

pub fn errors_only(issues: Vec<ValidationIssue>) -> Vec<ValidationIssue> {
    issues.into_iter().filter(|i| i.severity == Severity::Error).collect()
}

struct Issues(Vec<ValidationIssue>);

impl Issues {
    fn error(&mut self, code: &str, path: String, message: String) {
        self.0.push(ValidationIssue { severity: Severity::Error, code: code.into(), message, path });
    }

    fn warning(&mut self, code: &str, path: String, message: String) {
        self.0.push(ValidationIssue { severity: Severity::Warning, code: code.into(), message, path });
    }
}

fn duplicates<'a>(ids: impl Iterator<Item = &'a str>) -> BTreeSet<&'a str> {
    let mut seen = HashSet::new();
    ids.filter(|id| !seen.insert(*id)).collect()
}

/// Checks every structural invariant of an instance. Errors block solving;
/// warnings are informational.
pub fn validate_instance(inst: &RosterInstance) -> Vec<ValidationIssue> {
    let mut out = Issues(Vec::new());
    let skills: HashSet<&str> = inst.skills.iter().map(|s| s.id.as_str()).collect();
    let shifts: HashSet<&str> = inst.shifts.iter().map(|s| s.id.as_str()).collect();
    let employees: HashSet<&str> = inst.employees.iter().map(|e| e.id.as_str()).collect();

    for d in duplicates(inst.employees.iter().map(|e| e.id.as_str())) {
        out.error("duplicate-id", "employees".into(), format!("employee id `{d}` appears more than once"));
    }
    for d in duplicates(inst.skills.iter().map(|s| s.id.as_str())) {
        out.error("duplicate-id", "skills".into(), format!("skill id `{d}` appears more than once"));
    }
    for d in duplicates(inst.shifts.iter().map(|s| s.id.as_str())) {
        out.error("duplicate-id", "shifts".into(), format!("shift id `{d}` appears more than once"));
    }

    let p = &inst.parameters;
    for (name, v) in [
        ("dailyHoursMax", p.daily_hours_max),
        ("weekHoursMax", p.week_hours_max),
        ("weekOvertimeMax", p.week_overtime_max),
        ("fairGap", p.fair_gap),
    ] {
        if v == 0 {
            out.error("parameter", format!("parameters.{name}"), format!("{name} must be positive"));
        }
    }

    for (i, e) in inst.employees.iter().enumerate() {
        let path = format!("employees[{i}]");
        if e.id.is_empty() {
            out.error("empty-id", format!("{path}.id"), "employee id is empty".into());
        }
        if e.skills.is_empty() {
            out.error("no-skills", format!("{path}.skills"), format!("employee `{}` has no skills", e.id));
        }
        for sk in &e.skills {
            if !skills.contains(sk.as_str()) {
                out.error("unknown-skill", format!("{path}.skills"), format!("employee `{}` has unknown skill `{sk}`", e.id));
            }
        }
        for sh in &e.absences {
            if !shifts.contains(sh.as_str()) {
                out.warning(
                    "unknown-shift",
                    format!("{path}.absences"),
                    format!("employee `{}` is absent from unknown shift `{sh}`", e.id),
                );
            }
        }
        let h = &e.history;
        if h.week_overtime_hours > h.weekly_hours {
            out.error(
                "history",
                format!("{path}.history.weekOvertimeHours"),
                format!("employee `{}` has more overtime ({}) than weekly hours ({})", e.id, h.week_overtime_hours, h.weekly_hours),
            );
        }
        for sk in h.last_allocation.keys() {
            if !skills.contains(sk.as_str()) {
                out.warning(
                    "unknown-skill",
                    format!("{path}.history.lastAllocation.{sk}"),
                    format!("employee `{}` has an allocation date for unknown skill `{sk}`", e.id),
                );
            }
        }
    }

    for (i, s) in inst.skills.iter().enumerate() {
        if s.id.is_empty() {
            out.error("empty-id", format!("skills[{i}].id"), "skill id is empty".into());
        }
    }

    for (i, s) in inst.shifts.iter().enumerate() {
        let path = format!("shifts[{i}]");
        if s.id.is_empty() {
            out.error("empty-id", format!("{path}.id"), "shift id is empty".into());
        }
        if s.duration < 1 {
            out.error("duration", format!("{path}.duration"), format!("shift `{}` must last at least one hour", s.id));
        } else if !(6..=12).contains(&s.duration) {
            out.warning(
                "duration",
                format!("{path}.duration"),
                format!("shift `{}` lasts {} hours, outside the usual 6-12", s.id, s.duration),
            );
        }
        if let Some(prev) = &s.predecessor {
            if !shifts.contains(prev.as_str()) {
                out.error(
                    "unknown-shift",
                    format!("{path}.predecessor"),
                    format!("shift `{}` follows unknown shift `{prev}`", s.id),
                );
            }
        }
    }

    let mut seen_req = HashSet::new();
    for (i, r) in inst.requirements.iter().enumerate() {
        let path = format!("requirements[{i}]");
        if !shifts.contains(r.shift.as_str()) {
            out.error("unknown-shift", format!("{path}.shift"), format!("requirement references unknown shift `{}`", r.shift));
        }
        if !skills.contains(r.skill.as_str()) {
            out.error("unknown-skill", format!("{path}.skill"), format!("requirement references unknown skill `{}`", r.skill));
        }
        if r.count == 0 {
            out.error("count", format!("{path}.count"), "requirement count must be positive".into());
        }
        if !seen_req.insert((r.shift.as_str(), r.skill.as_str())) {
            out.error(
                "duplicate-requirement",
                path,
                format!("skill `{}` is required twice in shift `{}`", r.skill, r.shift),
            );
        }
    }

    for (i, l) in inst.double_shifts.iter().enumerate() {
        let path = format!("doubleShifts[{i}]");
        let (Some(small), Some(big)) = (inst.shift(&l.small), inst.shift(&l.big)) else {
            out.error(
                "unknown-shift",
                path,
                format!("double shift references unknown shift `{}` or `{}`", l.small, l.big),
            );
            continue;
        };
        if l.small == l.big {
            out.error("double-shift", path, format!("shift `{}` cannot be doubled with itself", l.small));
            continue;
        }
        let (ns, nb) = (inst.required_total(&l.small), inst.required_total(&l.big));
        if ns > nb {
            out.error(
                "double-shift-order",
                path.clone(),
                format!("double-shift count ordering: `{}` requires {ns} employees but `{}` only {nb}", l.small, l.big),
            );
        }
        let chained = small.predecessor.as_deref() == Some(big.id.as_str())
            || big.predecessor.as_deref() == Some(small.id.as_str());
        let adjacent = match (small.start_time(), small.end_time(), big.start_time(), big.end_time()) {
            (Some(s1), Some(e1), Some(s2), Some(e2)) => e1 == s2 || e2 == s1,
            _ => false,
        };
        if !chained && !adjacent {
            out.error(
                "double-shift",
                path,
                format!("shifts `{}` and `{}` are not consecutive", l.small, l.big),
            );
        }
    }

    let mut pre_pairs = HashSet::new();
    for (i, t) in inst.pre_assignments.iter().enumerate() {
        let path = format!("preAssignments[{i}]");
        pre_pairs.insert((t.employee.as_str(), t.shift.as_str()));
        if let Some(reason) = ineligibility(inst, t) {
            out.error("pre-assignment", path, format!("pre-assignment {t}: {reason}"));
        }
    }
    for (i, x) in inst.exclusions.iter().enumerate() {
        let path = format!("exclusions[{i}]");
        if !employees.contains(x.employee.as_str()) {
            out.error("unknown-employee", format!("{path}.employee"), format!("exclusion of unknown employee `{}`", x.employee));
        }
        if !shifts.contains(x.shift.as_str()) {
            out.error("unknown-shift", format!("{path}.shift"), format!("exclusion from unknown shift `{}`", x.shift));
        }
        if pre_pairs.contains(&(x.employee.as_str(), x.shift.as_str())) {
            out.error(
                "pre-assignment-excluded",
                path,
                format!("employee `{}` is both pre-assigned to and excluded from shift `{}`", x.employee, x.shift),
            );
        }
    }
    out.0
}

/// Why a triple fails the availability conditions, if it does.
pub fn ineligibility(inst: &RosterInstance, t: &Triple) -> Option<String> {
    let Some(e) = inst.employee(&t.employee) else {
        return Some(format!("unknown employee `{}`", t.employee));
    };
    let Some(sh) = inst.shift(&t.shift) else {
        return Some(format!("unknown shift `{}`", t.shift));
    };
    if inst.skill(&t.skill).is_none() {
        return Some(format!("unknown skill `{}`", t.skill));
    }
    if !e.has_skill(&t.skill) {
        return Some(format!("skill mismatch: `{}` lacks skill `{}`", e.id, t.skill));
    }
    if inst.required(&t.shift, &t.skill) == 0 {
        return Some(format!("shift `{}` does not require skill `{}`", t.shift, t.skill));
    }
    if e.absences.contains(&t.shift) {
        return Some(format!("`{}` is absent from shift `{}`", e.id, t.shift));
    }
    if inst.is_excluded(&t.employee, &t.shift) {
        return Some(format!("`{}` is excluded from shift `{}`", e.id, t.shift));
    }
    let p = &inst.parameters;
    let h = &e.history;
    if h.weekly_hours + sh.duration > p.week_hours_max
        || h.daily_hours + sh.duration > p.daily_hours_max
        || h.week_overtime_hours + sh.duration > p.week_overtime_max
    {
        return Some(format!("`{}` would exceed the working-time limits on shift `{}`", e.id, t.shift));
    }
    None
}
