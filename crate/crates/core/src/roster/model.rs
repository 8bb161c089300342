use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use chrono::{NaiveDate, NaiveDateTime, Timelike};
use serde::{Deserialize, Serialize};

/// Everything needed to build one team: staff, roles, shifts and the
/// requirements to cover.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RosterInstance {
    #[serde(default)]
    pub employees: Vec<Employee>,
    #[serde(default)]
    pub skills: Vec<Skill>,
    #[serde(default)]
    pub shifts: Vec<Shift>,
    #[serde(default)]
    pub requirements: Vec<Requirement>,
    #[serde(default)]
    pub double_shifts: Vec<DoubleShiftLink>,
    pub parameters: Parameters,
    #[serde(default)]
    pub pre_assignments: Vec<Triple>,
    #[serde(default)]
    pub exclusions: Vec<Exclusion>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Employee {
    pub id: String,
    pub skills: BTreeSet<String>,
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub absences: BTreeSet<String>,
    #[serde(default)]
    pub history: History,
}

impl Employee {
    pub fn new(id: &str, skills: &[&str]) -> Self {
        Employee {
            id: id.to_string(),
            skills: skills.iter().map(|s| s.to_string()).collect(),
            absences: BTreeSet::new(),
            history: History::default(),
        }
    }

    pub fn has_skill(&self, skill: &str) -> bool {
        self.skills.contains(skill)
    }
}

/// Worked hours so far and the last allocation date on each skill.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct History {
    #[serde(default)]
    pub weekly_hours: u32,
    #[serde(default)]
    pub daily_hours: u32,
    #[serde(default)]
    pub week_overtime_hours: u32,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub last_allocation: BTreeMap<String, NaiveDate>,
}

impl History {
    /// Days since 1970-01-01 of the last allocation on `skill`; 0 if never.
    pub fn last_allocation_day(&self, skill: &str) -> i64 {
        self.last_allocation.get(skill).map(|d| day_number(*d)).unwrap_or(0)
    }
}

pub fn day_number(date: NaiveDate) -> i64 {
    date.signed_duration_since(NaiveDate::from_ymd_opt(1970, 1, 1).expect("valid epoch")).num_days()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Skill {
    pub id: String,
    #[serde(default)]
    pub heavy: bool,
    #[serde(default)]
    pub crucial: bool,
}

impl Skill {
    pub fn new(id: &str) -> Self {
        Skill { id: id.to_string(), heavy: false, crucial: false }
    }

    pub fn heavy(mut self) -> Self {
        self.heavy = true;
        self
    }

    pub fn crucial(mut self) -> Self {
        self.crucial = true;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Shift {
    pub id: String,
    /// Start time; when absent, the id itself is read as a date-time.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "iso_datetime")]
    pub start: Option<NaiveDateTime>,
    pub duration: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predecessor: Option<String>,
}

impl Shift {
    pub fn new(id: &str, duration: u32) -> Self {
        Shift { id: id.to_string(), start: None, duration, predecessor: None }
    }

    pub fn starting(mut self, start: NaiveDateTime) -> Self {
        self.start = Some(start);
        self
    }

    pub fn after(mut self, predecessor: &str) -> Self {
        self.predecessor = Some(predecessor.to_string());
        self
    }

    pub fn start_time(&self) -> Option<NaiveDateTime> {
        self.start.or_else(|| iso_datetime::parse(&self.id))
    }

    pub fn end_time(&self) -> Option<NaiveDateTime> {
        self.start_time().map(|s| s + chrono::Duration::hours(self.duration as i64))
    }

    /// Starts between 22:00 and 06:00.
    pub fn is_night(&self) -> bool {
        self.start_time().is_some_and(|s| s.hour() >= 22 || s.hour() < 6)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Requirement {
    pub shift: String,
    pub skill: String,
    pub count: u32,
}

impl Requirement {
    pub fn new(shift: &str, skill: &str, count: u32) -> Self {
        Requirement { shift: shift.to_string(), skill: skill.to_string(), count }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct DoubleShiftLink {
    pub small: String,
    pub big: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Parameters {
    #[serde(default = "defaults::daily_hours_max")]
    pub daily_hours_max: u32,
    #[serde(default = "defaults::week_hours_max")]
    pub week_hours_max: u32,
    #[serde(default = "defaults::week_overtime_max")]
    pub week_overtime_max: u32,
    #[serde(default = "defaults::fair_gap")]
    pub fair_gap: u32,
}

impl Parameters {
    /// Weekly hours before overtime starts.
    pub fn regular_threshold(&self) -> u32 {
        self.week_hours_max.saturating_sub(self.week_overtime_max)
    }
}

impl Default for Parameters {
    fn default() -> Self {
        Parameters {
            daily_hours_max: defaults::daily_hours_max(),
            week_hours_max: defaults::week_hours_max(),
            week_overtime_max: defaults::week_overtime_max(),
            fair_gap: defaults::fair_gap(),
        }
    }
}

mod defaults {
    pub fn daily_hours_max() -> u32 {
        12
    }
    pub fn week_hours_max() -> u32 {
        48
    }
    pub fn week_overtime_max() -> u32 {
        12
    }
    pub fn fair_gap() -> u32 {
        8
    }
}

/// One (employee, shift, skill) allocation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Triple {
    pub employee: String,
    pub shift: String,
    pub skill: String,
}

impl Triple {
    pub fn new(employee: &str, shift: &str, skill: &str) -> Self {
        Triple { employee: employee.to_string(), shift: shift.to_string(), skill: skill.to_string() }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.employee, self.shift, self.skill)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Exclusion {
    pub employee: String,
    pub shift: String,
}

/// A team: a set of triples, kept sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Assignment {
    pub triples: BTreeSet<Triple>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, t: Triple) -> bool {
        self.triples.insert(t)
    }

    pub fn contains(&self, employee: &str, shift: &str, skill: &str) -> bool {
        self.triples.contains(&Triple::new(employee, shift, skill))
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter()
    }

    /// Employees working `shift`, in any role.
    pub fn staff(&self, shift: &str) -> BTreeSet<&str> {
        self.triples.iter().filter(|t| t.shift == shift).map(|t| t.employee.as_str()).collect()
    }
}

impl FromIterator<Triple> for Assignment {
    fn from_iter<T: IntoIterator<Item = Triple>>(iter: T) -> Self {
        Assignment { triples: iter.into_iter().collect() }
    }
}

impl RosterInstance {
    pub fn new(parameters: Parameters) -> Self {
        RosterInstance {
            employees: Vec::new(),
            skills: Vec::new(),
            shifts: Vec::new(),
            requirements: Vec::new(),
            double_shifts: Vec::new(),
            parameters,
            pre_assignments: Vec::new(),
            exclusions: Vec::new(),
        }
    }

    pub fn employee(&self, id: &str) -> Option<&Employee> {
        self.employees.iter().find(|e| e.id == id)
    }

    pub fn skill(&self, id: &str) -> Option<&Skill> {
        self.skills.iter().find(|s| s.id == id)
    }

    pub fn shift(&self, id: &str) -> Option<&Shift> {
        self.shifts.iter().find(|s| s.id == id)
    }

    /// Required headcount for a role in a shift; 0 when not required.
    pub fn required(&self, shift: &str, skill: &str) -> u32 {
        self.requirements.iter().filter(|r| r.shift == shift && r.skill == skill).map(|r| r.count).sum()
    }

    /// Total headcount required by a shift over all roles.
    pub fn required_total(&self, shift: &str) -> u32 {
        self.requirements.iter().filter(|r| r.shift == shift).map(|r| r.count).sum()
    }

    pub fn is_excluded(&self, employee: &str, shift: &str) -> bool {
        self.exclusions.iter().any(|x| x.employee == employee && x.shift == shift)
    }

    /// Whether the two shifts form a double shift, in either orientation.
    pub fn double_linked(&self, a: &str, b: &str) -> bool {
        self.double_shifts.iter().any(|l| (l.small == a && l.big == b) || (l.small == b && l.big == a))
    }

    pub fn crucial_skills(&self) -> BTreeSet<&str> {
        self.skills.iter().filter(|s| s.crucial).map(|s| s.id.as_str()).collect()
    }
}

/// Shift start times as `YYYY-MM-DDTHH:MM`, seconds optional on input.
pub mod iso_datetime {
    use chrono::NaiveDateTime;
    use serde::{Deserialize, Deserializer, Serializer};

    const FORMATS: [&str; 3] = ["%Y-%m-%dT%H:%M:%S", "%Y-%m-%dT%H:%M", "%Y-%m-%d %H:%M"];

    pub fn parse(s: &str) -> Option<NaiveDateTime> {
        FORMATS.iter().find_map(|f| NaiveDateTime::parse_from_str(s, f).ok())
    }

    pub fn format(t: &NaiveDateTime) -> String {
        t.format("%Y-%m-%dT%H:%M").to_string()
    }

    pub fn serialize<S: Serializer>(value: &Option<NaiveDateTime>, s: S) -> Result<S::Ok, S::Error> {
        match value {
            Some(t) => s.serialize_str(&format(t)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<NaiveDateTime>, D::Error> {
        let raw: Option<String> = Option::deserialize(d)?;
        raw.map(|s| parse(&s).ok_or_else(|| serde::de::Error::custom(format!("invalid date-time `{s}`"))))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameters_default_when_fields_missing() {
        let p: Parameters = serde_json::from_str("{}").unwrap();
        assert_eq!(p, Parameters::default());
        assert_eq!(p.regular_threshold(), 36);
    }

    #[test]
    fn instance_round_trips_through_json() {
        let mut inst = RosterInstance::new(Parameters::default());
        let mut e = Employee::new("e1", &["driver"]);
        e.history.last_allocation.insert("driver".into(), NaiveDate::from_ymd_opt(2024, 3, 1).unwrap());
        inst.employees.push(e);
        inst.skills.push(Skill::new("driver").heavy());
        inst.shifts.push(Shift::new("2024-03-04T06:00", 6));
        inst.requirements.push(Requirement::new("2024-03-04T06:00", "driver", 1));
        let text = serde_json::to_string(&inst).unwrap();
        assert!(text.contains("\"lastAllocation\":{\"driver\":\"2024-03-01\"}"));
        let back: RosterInstance = serde_json::from_str(&text).unwrap();
        assert_eq!(back, inst);
    }

    #[test]
    fn shift_start_from_id_and_night_detection() {
        let s = Shift::new("2024-03-04T22:00", 8);
        assert!(s.is_night());
        assert_eq!(s.end_time().unwrap().to_string(), "2024-03-05 06:00:00");
        assert!(!Shift::new("2024-03-04T06:00", 6).is_night());
        assert!(!Shift::new("morning", 6).is_night());
    }

    #[test]
    fn day_numbers() {
        assert_eq!(day_number(NaiveDate::from_ymd_opt(1970, 1, 1).unwrap()), 0);
        assert_eq!(day_number(NaiveDate::from_ymd_opt(1970, 5, 1).unwrap()), 120);
    }

    #[test]
    fn assignment_serializes_as_a_list() {
        let a: Assignment = [Triple::new("e1", "sh", "s1")].into_iter().collect();
        assert_eq!(serde_json::to_string(&a).unwrap(), r#"[{"employee":"e1","shift":"sh","skill":"s1"}]"#);
    }
}
