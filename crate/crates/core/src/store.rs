//! Depot persistence and history accrual.
//!
//! A depot is one JSON document holding staff, meta-plans, committed plans
//! and a revision number. Writers hold `<depot>.lock` while they compare the
//! on-disk revision with the one they loaded, then replace the file through
//! a temporary file and a rename.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::thread;
use std::time::{Duration, SystemTime};

use chrono::{Datelike, NaiveDate, Weekday};
use serde::{Deserialize, Serialize};

use crate::roster::model::{Assignment, DoubleShiftLink, Requirement, RosterInstance, Shift};

/// Shifts and role requirements for one ship call.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct MetaPlan {
    pub date: NaiveDate,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ship: Option<String>,
    pub shifts: Vec<Shift>,
    pub requirements: Vec<Requirement>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub double_shifts: Vec<DoubleShiftLink>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct CommittedPlan {
    pub date: NaiveDate,
    pub assignment: Assignment,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum RestWindow {
    /// Every shift starting less than this many hours after the night
    /// shift ends.
    Hours(u32),
    /// The next `n` shifts along the predecessor chain.
    Shifts(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct StoreSettings {
    #[serde(default = "default_week_start", with = "weekday_name")]
    pub week_start: Weekday,
    #[serde(default = "default_night_start")]
    pub night_start_hour: u32,
    #[serde(default = "default_night_end")]
    pub night_end_hour: u32,
    #[serde(default = "default_rest")]
    pub rest: RestWindow,
}

fn default_week_start() -> Weekday {
    Weekday::Mon
}
fn default_night_start() -> u32 {
    22
}
fn default_night_end() -> u32 {
    6
}
fn default_rest() -> RestWindow {
    RestWindow::Hours(12)
}

impl Default for StoreSettings {
    fn default() -> Self {
        StoreSettings {
            week_start: default_week_start(),
            night_start_hour: default_night_start(),
            night_end_hour: default_night_end(),
            rest: default_rest(),
        }
    }
}

impl StoreSettings {
    pub fn is_night(&self, shift: &Shift) -> bool {
        use chrono::Timelike;
        shift.start_time().is_some_and(|s| {
            let h = s.hour();
            if self.night_start_hour <= self.night_end_hour {
                h >= self.night_start_hour && h < self.night_end_hour
            } else {
                h >= self.night_start_hour || h < self.night_end_hour
            }
        })
    }

    /// First day of the week containing `date`.
    pub fn week_of(&self, date: NaiveDate) -> NaiveDate {
        let back = (7 + date.weekday().num_days_from_monday() - self.week_start.num_days_from_monday()) % 7;
        date - chrono::Duration::days(back as i64)
    }
}

mod weekday_name {
    use chrono::Weekday;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(w: &Weekday, s: S) -> Result<S::Ok, S::Error> {
        let name = match w {
            Weekday::Mon => "monday",
            Weekday::Tue => "tuesday",
            Weekday::Wed => "wednesday",
            Weekday::Thu => "thursday",
            Weekday::Fri => "friday",
            Weekday::Sat => "saturday",
            Weekday::Sun => "sunday",
        };
        s.serialize_str(name)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Weekday, D::Error> {
        let s = String::deserialize(d)?;
        s.parse::<Weekday>().map_err(|_| serde::de::Error::custom(format!("unknown weekday `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Snapshot {
    #[serde(default)]
    pub revision: u64,
    /// Staff, skills and parameters; shifts and requirements here are
    /// merged into every solve.
    pub instance: RosterInstance,
    #[serde(default)]
    pub meta_plans: BTreeMap<String, MetaPlan>,
    #[serde(default)]
    pub committed_plans: Vec<CommittedPlan>,
    /// Day the history counters refer to.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub history_as_of: Option<NaiveDate>,
    #[serde(default)]
    pub settings: StoreSettings,
}

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("depot not found: {0}")]
    Missing(PathBuf),
    #[error("i/o error on {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("malformed depot at `{path}`: {message}")]
    Malformed { path: String, message: String },
    #[error("revision conflict: expected {expected}, depot is at {found}")]
    RevisionConflict { expected: u64, found: u64 },
    #[error("depot is locked by another writer")]
    Locked,
    #[error("unknown meta-plan `{0}`")]
    UnknownMetaPlan(String),
    #[error("unknown employee `{0}`")]
    UnknownEmployee(String),
    #[error("unknown shift `{0}`")]
    UnknownShift(String),
    #[error("commit for {date} precedes history date {as_of}")]
    OutOfOrder { date: NaiveDate, as_of: NaiveDate },
    #[error("employee `{employee}` would reach {hours} overtime hours (limit {limit})")]
    OvertimeExceeded { employee: String, hours: u32, limit: u32 },
}

impl Snapshot {
    pub fn new(instance: RosterInstance) -> Self {
        Snapshot {
            revision: 0,
            instance,
            meta_plans: BTreeMap::new(),
            committed_plans: Vec::new(),
            history_as_of: None,
            settings: StoreSettings::default(),
        }
    }

    pub fn meta_plans_on(&self, date: NaiveDate) -> Vec<String> {
        self.meta_plans.iter().filter(|(_, m)| m.date == date).map(|(id, _)| id.clone()).collect()
    }

    /// The base instance with the shifts and requirements of the given
    /// meta-plans merged in. Requirements for the same role in the same
    /// shift add up.
    pub fn instance_for(&self, meta_plan_ids: &[String]) -> Result<RosterInstance, StoreError> {
        let mut inst = self.instance.clone();
        for id in meta_plan_ids {
            let m = self.meta_plans.get(id).ok_or_else(|| StoreError::UnknownMetaPlan(id.clone()))?;
            for s in &m.shifts {
                if !inst.shifts.iter().any(|x| x.id == s.id) {
                    inst.shifts.push(s.clone());
                }
            }
            for r in &m.requirements {
                match inst.requirements.iter_mut().find(|x| x.shift == r.shift && x.skill == r.skill) {
                    Some(x) => x.count += r.count,
                    None => inst.requirements.push(r.clone()),
                }
            }
            for l in &m.double_shifts {
                if !inst.double_shifts.contains(l) {
                    inst.double_shifts.push(l.clone());
                }
            }
        }
        let known: BTreeSet<String> = inst.shifts.iter().map(|s| s.id.clone()).collect();
        for s in &mut inst.shifts {
            if s.predecessor.as_ref().is_some_and(|p| !known.contains(p)) {
                s.predecessor = None;
            }
        }
        Ok(inst)
    }

    /// Every shift known to the depot.
    pub fn all_shifts(&self) -> Vec<&Shift> {
        let mut seen = BTreeSet::new();
        self.instance
            .shifts
            .iter()
            .chain(self.meta_plans.values().flat_map(|m| m.shifts.iter()))
            .filter(|s| seen.insert(s.id.as_str()))
            .collect()
    }
}

pub fn parse_snapshot(text: &str) -> Result<Snapshot, StoreError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        StoreError::Malformed { path, message: e.into_inner().to_string() }
    })
}

pub fn load_snapshot(path: &Path) -> Result<Snapshot, StoreError> {
    let text = fs::read_to_string(path).map_err(|e| match e.kind() {
        io::ErrorKind::NotFound => StoreError::Missing(path.to_path_buf()),
        _ => StoreError::Io { path: path.to_path_buf(), source: e },
    })?;
    parse_snapshot(&text)
}

struct LockGuard(PathBuf);

impl Drop for LockGuard {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.0);
    }
}

const LOCK_WAIT: Duration = Duration::from_secs(10);
const STALE_LOCK: Duration = Duration::from_secs(60);

fn lock_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".lock");
    path.with_file_name(name)
}

fn acquire(path: &Path) -> Result<LockGuard, StoreError> {
    let lock = lock_path(path);
    let start = SystemTime::now();
    loop {
        match fs::OpenOptions::new().write(true).create_new(true).open(&lock) {
            Ok(_) => return Ok(LockGuard(lock)),
            Err(e) if e.kind() == io::ErrorKind::AlreadyExists => {
                let stale = fs::metadata(&lock)
                    .and_then(|m| m.modified())
                    .ok()
                    .and_then(|t| t.elapsed().ok())
                    .is_some_and(|age| age > STALE_LOCK);
                if stale {
                    let _ = fs::remove_file(&lock);
                    continue;
                }
                if start.elapsed().unwrap_or_default() > LOCK_WAIT {
                    return Err(StoreError::Locked);
                }
                thread::sleep(Duration::from_millis(5));
            }
            Err(e) => return Err(StoreError::Io { path: lock, source: e }),
        }
    }
}

fn on_disk_revision(path: &Path) -> Result<Option<u64>, StoreError> {
    #[derive(Deserialize)]
    struct Head {
        #[serde(default)]
        revision: u64,
    }
    match fs::read_to_string(path) {
        Ok(text) => {
            let head: Head = serde_json::from_str(&text)
                .map_err(|e| StoreError::Malformed { path: "revision".into(), message: e.to_string() })?;
            Ok(Some(head.revision))
        }
        Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(StoreError::Io { path: path.to_path_buf(), source: e }),
    }
}

/// Writes `snapshot` if the depot is still at `snapshot.revision` (or does
/// not exist yet), bumping the revision in place.
pub fn save_snapshot(snapshot: &mut Snapshot, path: &Path) -> Result<u64, StoreError> {
    let _guard = acquire(path)?;
    if let Some(found) = on_disk_revision(path)? {
        if found != snapshot.revision {
            return Err(StoreError::RevisionConflict { expected: snapshot.revision, found });
        }
    }
    let mut next = snapshot.clone();
    next.revision += 1;
    let text = serde_json::to_string_pretty(&next).expect("snapshot serializes");
    let io_err = |source| StoreError::Io { path: path.to_path_buf(), source };
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(text.as_bytes()).map_err(io_err)?;
    tmp.as_file().sync_all().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    snapshot.revision = next.revision;
    Ok(next.revision)
}

/// Hours and overtime added to one employee by a commit.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Accrual {
    pub hours: u32,
    pub overtime: u32,
}

/// Resets the daily counters when `date` is a new day and the weekly ones
/// when it starts a new week.
pub fn roll_history_to(snapshot: &mut Snapshot, date: NaiveDate) -> Result<(), StoreError> {
    if let Some(as_of) = snapshot.history_as_of {
        if date < as_of {
            return Err(StoreError::OutOfOrder { date, as_of });
        }
        let new_week = snapshot.settings.week_of(date) != snapshot.settings.week_of(as_of);
        for e in &mut snapshot.instance.employees {
            if date != as_of {
                e.history.daily_hours = 0;
            }
            if new_week {
                e.history.weekly_hours = 0;
                e.history.week_overtime_hours = 0;
            }
        }
    }
    snapshot.history_as_of = Some(date);
    Ok(())
}

/// Rolls the history counters forward to `date`, then adds the worked
/// hours of `assignment`, records heavy-role allocations, blocks rest
/// windows after night shifts and appends the plan to the committed list.
pub fn apply_assignment_to_history(
    snapshot: &Snapshot,
    date: NaiveDate,
    assignment: &Assignment,
) -> Result<(Snapshot, BTreeMap<String, Accrual>), StoreError> {
    let mut next = snapshot.clone();
    roll_history_to(&mut next, date)?;

    let shifts: BTreeMap<&str, &Shift> = snapshot.all_shifts().into_iter().map(|s| (s.id.as_str(), s)).collect();
    let heavy: BTreeSet<&str> = snapshot.instance.skills.iter().filter(|s| s.heavy).map(|s| s.id.as_str()).collect();
    let threshold = snapshot.instance.parameters.regular_threshold();
    let limit = snapshot.instance.parameters.week_overtime_max;

    let mut worked: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for t in assignment.iter() {
        if !shifts.contains_key(t.shift.as_str()) {
            return Err(StoreError::UnknownShift(t.shift.clone()));
        }
        if snapshot.instance.employee(&t.employee).is_none() {
            return Err(StoreError::UnknownEmployee(t.employee.clone()));
        }
        worked.entry(&t.employee).or_default().insert(&t.shift);
    }

    let mut accruals = BTreeMap::new();
    for e in &mut next.instance.employees {
        let Some(their) = worked.get(e.id.as_str()) else { continue };
        let hours: u32 = their.iter().map(|s| shifts[s].duration).sum();
        let h = &mut e.history;
        let before = h.weekly_hours.saturating_sub(threshold);
        h.daily_hours += hours;
        h.weekly_hours += hours;
        let overtime = h.weekly_hours.saturating_sub(threshold) - before;
        h.week_overtime_hours += overtime;
        if h.week_overtime_hours > limit {
            return Err(StoreError::OvertimeExceeded { employee: e.id.clone(), hours: h.week_overtime_hours, limit });
        }
        accruals.insert(e.id.clone(), Accrual { hours, overtime });
        for t in assignment.iter().filter(|t| t.employee == e.id) {
            if heavy.contains(t.skill.as_str()) {
                h.last_allocation.insert(t.skill.clone(), date);
            }
        }
        for s in their {
            let shift = shifts[s];
            if next.settings.is_night(shift) {
                for blocked in rest_window(&next.settings, shift, &shifts) {
                    e.absences.insert(blocked.to_string());
                }
            }
        }
    }
    next.committed_plans.push(CommittedPlan { date, assignment: assignment.clone() });
    Ok((next, accruals))
}

fn rest_window<'a>(settings: &StoreSettings, night: &Shift, shifts: &BTreeMap<&'a str, &'a Shift>) -> Vec<&'a str> {
    match settings.rest {
        RestWindow::Hours(h) => {
            let Some(end) = night.end_time() else { return Vec::new() };
            let until = end + chrono::Duration::hours(h as i64);
            shifts
                .values()
                .filter(|s| s.start_time().is_some_and(|t| t >= end && t < until))
                .map(|s| s.id.as_str())
                .collect()
        }
        RestWindow::Shifts(n) => {
            let mut out = Vec::new();
            let mut current = night.id.as_str();
            for _ in 0..n {
                match shifts.values().find(|s| s.predecessor.as_deref() == Some(current)) {
                    Some(s) => {
                        out.push(s.id.as_str());
                        current = s.id.as_str();
                    }
                    None => break,
                }
            }
            out
        }
    }
}

/// Per-employee allocation statistics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EmployeeStats {
    pub employee: String,
    pub weekly_hours: u32,
    pub daily_hours: u32,
    pub week_overtime_hours: u32,
    pub last_heavy_allocation: Option<NaiveDate>,
    pub committed_shifts: usize,
}

pub fn employee_stats(snapshot: &Snapshot) -> Vec<EmployeeStats> {
    let heavy: BTreeSet<&str> = snapshot.instance.skills.iter().filter(|s| s.heavy).map(|s| s.id.as_str()).collect();
    snapshot
        .instance
        .employees
        .iter()
        .map(|e| EmployeeStats {
            employee: e.id.clone(),
            weekly_hours: e.history.weekly_hours,
            daily_hours: e.history.daily_hours,
            week_overtime_hours: e.history.week_overtime_hours,
            last_heavy_allocation: e
                .history
                .last_allocation
                .iter()
                .filter(|(sk, _)| heavy.contains(sk.as_str()))
                .map(|(_, d)| *d)
                .max(),
            committed_shifts: snapshot
                .committed_plans
                .iter()
                .map(|p| p.assignment.iter().filter(|t| t.employee == e.id).map(|t| &t.shift).collect::<BTreeSet<_>>().len())
                .sum(),
        })
        .collect()
}

pub fn write_stats_csv<W: io::Write>(rows: &[EmployeeStats], out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["employee", "weeklyHours", "dailyHours", "weekOvertimeHours", "lastHeavyAllocation", "committedShifts"])?;
    for r in rows {
        w.write_record([
            r.employee.clone(),
            r.weekly_hours.to_string(),
            r.daily_hours.to_string(),
            r.week_overtime_hours.to_string(),
            r.last_heavy_allocation.map(|d| d.to_string()).unwrap_or_default(),
            r.committed_shifts.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
