//! Day-by-day planning over a window. Within a day, shifts are solved one
//! at a time in start order (double shifts together), and each team is
//! committed to a scratch copy of the depot history before the next.

use std::collections::BTreeMap;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::engine::{solve, EngineError, EngineOptions, ModeRequest, SolveStatus};
use crate::roster::audit::{audit, Preferences};
use crate::roster::model::{Assignment, RosterInstance, Shift};
use crate::roster::report::Violation;
use crate::store::{apply_assignment_to_history, roll_history_to, Snapshot, StoreError};
use crate::synthetic::synthetic_meta_plans;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SimulationRequest {
    pub start_date: NaiveDate,
    pub days: u32,
    /// Keep the updated history instead of discarding it.
    #[serde(default)]
    pub commit: bool,
    /// Generate the window's meta-plans with this seed instead of using
    /// the depot's.
    #[serde(default, alias = "seedPlanGenerator", skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DayOutcome {
    pub date: NaiveDate,
    pub meta_plans: Vec<String>,
    pub status: SolveStatus,
    pub assignment: Option<Assignment>,
    #[serde(default, rename = "waivedPreferences", alias = "waived")]
    pub waived: Vec<Violation>,
    /// Hard-constraint violations found by the imperative audit.
    pub hard_violations: usize,
    pub hours_accrued: u32,
    pub overtime_accrued: u32,
    #[serde(default)]
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Range {
    pub min: u32,
    pub max: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AggregateStats {
    pub total_hours: u32,
    pub total_overtime_hours: u32,
    pub feasible_days: usize,
    pub degraded_days: usize,
    pub infeasible_days: usize,
    pub resource_limit_days: usize,
    pub hard_violations: usize,
    /// Lowest and highest end-of-day weekly hours of each employee.
    pub weekly_hours: BTreeMap<String, Range>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SimulationReport {
    pub per_day_outcomes: Vec<DayOutcome>,
    pub aggregate_stats: AggregateStats,
}

#[derive(Debug, thiserror::Error)]
pub enum SimulateError {
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error("{date}: {source}")]
    Engine { date: NaiveDate, source: EngineError },
}

/// Runs the window and returns the report with the depot as it stands
/// after the last committed day.
pub fn simulate(
    snapshot: &Snapshot,
    request: &SimulationRequest,
    options: &EngineOptions,
) -> Result<(SimulationReport, Snapshot), SimulateError> {
    let mut scratch = snapshot.clone();
    if let Some(seed) = request.seed {
        for d in 0..request.days {
            let date = request.start_date + chrono::Duration::days(d as i64);
            scratch.meta_plans.extend(synthetic_meta_plans(date, seed));
        }
    }
    let mut days = Vec::new();
    let mut stats = AggregateStats::default();
    for d in 0..request.days {
        let date = request.start_date + chrono::Duration::days(d as i64);
        roll_history_to(&mut scratch, date)?;
        let ids = scratch.meta_plans_on(date);
        let day_instance = scratch.instance_for(&ids)?;
        let mut day = DayOutcome {
            date,
            meta_plans: ids,
            status: SolveStatus::Feasible,
            assignment: None,
            waived: Vec::new(),
            hard_violations: 0,
            hours_accrued: 0,
            overtime_accrued: 0,
            diagnostics: Vec::new(),
        };
        for unit in solve_units(&day_instance) {
            let instance = restrict(&scratch.instance_for(&day.meta_plans)?, &unit);
            let outcome = solve(&instance, ModeRequest::Auto, options)
                .map_err(|source| SimulateError::Engine { date, source })?;
            day.status = worse(day.status, outcome.status);
            day.waived.extend(outcome.waived);
            day.diagnostics.extend(outcome.diagnostics.into_iter().map(|n| format!("{}: {n}", unit.join("+"))));
            if let Some(team) = &outcome.assignment {
                day.hard_violations += audit(&instance, team, Preferences::Ignored).len();
                let (next, accruals) = apply_assignment_to_history(&scratch, date, team)?;
                scratch = next;
                day.hours_accrued += accruals.values().map(|a| a.hours).sum::<u32>();
                day.overtime_accrued += accruals.values().map(|a| a.overtime).sum::<u32>();
                day.assignment.get_or_insert_with(Assignment::new).triples.extend(team.triples.iter().cloned());
            }
        }
        match day.status {
            SolveStatus::Feasible => stats.feasible_days += 1,
            SolveStatus::Degraded => stats.degraded_days += 1,
            SolveStatus::Infeasible => stats.infeasible_days += 1,
            SolveStatus::ResourceLimit => stats.resource_limit_days += 1,
        }
        stats.total_hours += day.hours_accrued;
        stats.total_overtime_hours += day.overtime_accrued;
        stats.hard_violations += day.hard_violations;
        for e in &scratch.instance.employees {
            let w = e.history.weekly_hours;
            stats
                .weekly_hours
                .entry(e.id.clone())
                .and_modify(|r| {
                    r.min = r.min.min(w);
                    r.max = r.max.max(w);
                })
                .or_insert(Range { min: w, max: w });
        }
        days.push(day);
    }
    Ok((SimulationReport { per_day_outcomes: days, aggregate_stats: stats }, scratch))
}

fn rank(s: SolveStatus) -> u8 {
    match s {
        SolveStatus::Feasible => 0,
        SolveStatus::Degraded => 1,
        SolveStatus::Infeasible => 2,
        SolveStatus::ResourceLimit => 3,
    }
}

fn worse(a: SolveStatus, b: SolveStatus) -> SolveStatus {
    if rank(b) > rank(a) {
        b
    } else {
        a
    }
}

/// Shifts of a day grouped by double-shift links, in order of start time.
pub fn solve_units(instance: &RosterInstance) -> Vec<Vec<String>> {
    let mut order: Vec<&Shift> = instance.shifts.iter().collect();
    order.sort_by_key(|s| (s.start_time(), s.id.clone()));
    let mut units: Vec<Vec<String>> = Vec::new();
    for s in order {
        let linked = units.iter().position(|u| u.iter().any(|o| instance.double_linked(o, &s.id)));
        match linked {
            Some(i) => units[i].push(s.id.clone()),
            None => units.push(vec![s.id.clone()]),
        }
    }
    units
}

/// The part of `instance` concerning only the given shifts.
pub fn restrict(instance: &RosterInstance, shifts: &[String]) -> RosterInstance {
    let keep = |id: &String| shifts.contains(id);
    let mut out = instance.clone();
    out.shifts.retain(|s| keep(&s.id));
    for s in &mut out.shifts {
        if s.predecessor.as_ref().is_some_and(|p| !keep(p)) {
            s.predecessor = None;
        }
    }
    out.requirements.retain(|r| keep(&r.shift));
    out.double_shifts.retain(|l| keep(&l.small) && keep(&l.big));
    out.pre_assignments.retain(|t| keep(&t.shift));
    out.exclusions.retain(|x| keep(&x.shift));
    for e in &mut out.employees {
        e.absences.retain(|a| keep(a));
    }
    out
}
