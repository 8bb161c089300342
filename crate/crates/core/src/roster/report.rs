use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ViolationKind {
    Eligibility,
    Count,
    MultiRole,
    MultiShift,
    DoubleShift,
    TimeLimit,
    Turnover,
    Fairness,
    Crucial,
}

impl ViolationKind {
    pub fn is_preference(self) -> bool {
        matches!(self, ViolationKind::Turnover | ViolationKind::Fairness | ViolationKind::Crucial)
    }

    pub fn label(self) -> &'static str {
        match self {
            ViolationKind::Eligibility => "ELIGIBILITY",
            ViolationKind::Count => "COUNT",
            ViolationKind::MultiRole => "MULTIROLE",
            ViolationKind::MultiShift => "MULTISHIFT",
            ViolationKind::DoubleShift => "DOUBLESHIFT",
            ViolationKind::TimeLimit => "TIMELIMIT",
            ViolationKind::Turnover => "TURNOVER",
            ViolationKind::Fairness => "FAIRNESS",
            ViolationKind::Crucial => "CRUCIAL",
        }
    }
}

/// One broken constraint. For preference kinds `employees` is
/// `[preferred, assigned]`; for `multiShift`, `doubleShift` and `timeLimit`
/// the second shift is in `otherShift`; for `multiRole` the second skill is
/// in `otherSkill`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Violation {
    pub kind: ViolationKind,
    pub employees: Vec<String>,
    pub shift: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub other_shift: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skill: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub other_skill: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub required_count: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub actual_count: Option<u32>,
}

impl Violation {
    pub fn new(kind: ViolationKind, employees: &[&str], shift: &str) -> Self {
        Violation {
            kind,
            employees: employees.iter().map(|e| e.to_string()).collect(),
            shift: shift.to_string(),
            other_shift: None,
            skill: None,
            other_skill: None,
            required_count: None,
            actual_count: None,
        }
    }

    pub fn with_skill(mut self, skill: &str) -> Self {
        self.skill = Some(skill.to_string());
        self
    }

    pub fn with_other_skill(mut self, skill: &str) -> Self {
        self.other_skill = Some(skill.to_string());
        self
    }

    pub fn with_other_shift(mut self, shift: &str) -> Self {
        self.other_shift = Some(shift.to_string());
        self
    }

    pub fn with_counts(mut self, required: u32, actual: u32) -> Self {
        self.required_count = Some(required);
        self.actual_count = Some(actual);
        self
    }

    /// `(e1, e2, shift, skill)` of a preference violation.
    pub fn preference_tuple(&self) -> Option<(&str, &str, &str, &str)> {
        match (self.kind.is_preference(), self.employees.as_slice(), &self.skill) {
            (true, [a, b], Some(sk)) => Some((a, b, &self.shift, sk)),
            _ => None,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.label())?;
        for e in &self.employees {
            write!(f, " {e}")?;
        }
        write!(f, " {}", self.shift)?;
        for extra in [&self.other_shift, &self.skill, &self.other_skill].into_iter().flatten() {
            write!(f, " {extra}")?;
        }
        if let (Some(r), Some(a)) = (self.required_count, self.actual_count) {
            write!(f, " required={r} actual={a}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckReport {
    pub consistent: bool,
    pub violations: Vec<Violation>,
}

impl CheckReport {
    pub fn from_violations(mut violations: Vec<Violation>) -> Self {
        violations.sort();
        violations.dedup();
        CheckReport { consistent: violations.is_empty(), violations }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lines() {
        let v = Violation::new(ViolationKind::Turnover, &["e1", "e2"], "sh").with_skill("sk");
        assert_eq!(v.to_string(), "TURNOVER e1 e2 sh sk");
        let c = Violation::new(ViolationKind::Count, &[], "sh").with_skill("sk").with_counts(3, 2);
        assert_eq!(c.to_string(), "COUNT sh sk required=3 actual=2");
        let m = Violation::new(ViolationKind::MultiShift, &["e1"], "a").with_other_shift("b");
        assert_eq!(m.to_string(), "MULTISHIFT e1 a b");
    }

    #[test]
    fn json_shape() {
        let c = Violation::new(ViolationKind::Count, &[], "sh").with_skill("sk").with_counts(3, 2);
        assert_eq!(
            serde_json::to_string(&c).unwrap(),
            r#"{"kind":"count","employees":[],"shift":"sh","skill":"sk","requiredCount":3,"actualCount":2}"#
        );
    }
}
