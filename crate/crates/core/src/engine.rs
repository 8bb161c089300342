//! Solving, checking and explaining teams.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::asp::{enumerate_with, Const, GroundAtom, Heuristic, Interpretation, Program, SolveError, SolveOptions};
use crate::asp::DEFAULT_MAX_GROUND_RULES;
use crate::roster::encoding::{build_encoding, build_prioritized_check_encoding, EncodingMode};
use crate::roster::facts::{facts_unchecked, instance_to_facts, team_facts, InvalidInstance, Kind, NameMap};
use crate::roster::model::{Assignment, RosterInstance};
use crate::roster::report::{CheckReport, Violation, ViolationKind};
use crate::roster::validate::{errors_only, validate_instance};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeRequest {
    #[default]
    Auto,
    Strict,
    Prioritized,
}

impl FromStr for ModeRequest {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(ModeRequest::Auto),
            "strict" => Ok(ModeRequest::Strict),
            "prioritized" => Ok(ModeRequest::Prioritized),
            _ => Err(format!("unknown mode `{s}` (expected auto, strict or prioritized)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Feasible,
    Degraded,
    Infeasible,
    ResourceLimit,
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveStatus::Feasible => "feasible",
            SolveStatus::Degraded => "degraded",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::ResourceLimit => "resource-limit",
        })
    }
}

#[derive(Debug, Clone)]
pub struct EngineOptions {
    /// Wall-clock budget for the whole call, cascade included.
    pub timeout: Option<Duration>,
    pub max_ground_rules: usize,
    pub max_conflicts: Option<u64>,
    /// Number of teams requested; the first is the answer, the rest are
    /// alternatives.
    pub alternatives: usize,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions { timeout: None, max_ground_rules: DEFAULT_MAX_GROUND_RULES, max_conflicts: None, alternatives: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SolveOutcome {
    pub status: SolveStatus,
    pub assignment: Option<Assignment>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub alternatives: Vec<Assignment>,
    pub mode_used: EncodingMode,
    /// Preference tuples the returned team does not honour (degraded only).
    #[serde(default, rename = "waivedPreferences", alias = "waived")]
    pub waived: Vec<Violation>,
    #[serde(default)]
    pub diagnostics: Vec<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum EngineError {
    #[error(transparent)]
    Invalid(#[from] InvalidInstance),
    #[error("team references {0}")]
    UnknownReference(String),
    #[error(transparent)]
    Solver(#[from] SolveError),
}

fn branching() -> Heuristic {
    Heuristic::by_predicate("assign", vec![1, 2, 0], true)
}

fn assignment_of(names: &NameMap, model: &Interpretation) -> Assignment {
    model.with_predicate("assign").filter_map(|a| names.triple(a)).collect()
}

enum Run {
    Found(Vec<Assignment>, String),
    None(String),
    Limit(String),
}

fn run(
    facts: &Program,
    names: &NameMap,
    mode: EncodingMode,
    double: bool,
    opts: &EngineOptions,
    deadline: Option<Instant>,
) -> Result<Run, EngineError> {
    let mut program = facts.clone();
    program.extend(build_encoding(mode, double));
    let timeout = match deadline {
        Some(d) => match d.checked_duration_since(Instant::now()) {
            Some(left) => Some(left),
            None => return Ok(Run::Limit(format!("{mode}: time budget exhausted before start"))),
        },
        None => None,
    };
    let options = SolveOptions {
        limit: Some(opts.alternatives.max(1)),
        timeout,
        max_ground_rules: opts.max_ground_rules,
        max_conflicts: opts.max_conflicts,
        heuristic: branching(),
    };
    match enumerate_with(&program, &options) {
        Ok(e) => {
            let s = &e.stats;
            let note = format!(
                "{mode}: {} ground rules, {} residual, {} decisions, {} conflicts, {} answer set(s)",
                s.ground_rules,
                s.residual_rules,
                s.decisions,
                s.conflicts,
                e.answer_sets.len()
            );
            if e.answer_sets.is_empty() {
                Ok(Run::None(note))
            } else {
                Ok(Run::Found(e.answer_sets.iter().map(|m| assignment_of(names, m)).collect(), note))
            }
        }
        Err(err) if err.is_resource_limit() => Ok(Run::Limit(format!("{mode}: {err}"))),
        Err(err) => Err(err.into()),
    }
}

/// Builds a team, falling back to prioritized preferences when the strict
/// encoding is inconsistent (in `Auto` mode).
pub fn solve(instance: &RosterInstance, mode: ModeRequest, opts: &EngineOptions) -> Result<SolveOutcome, EngineError> {
    let (facts, names) = instance_to_facts(instance)?;
    let double = !instance.double_shifts.is_empty();
    let deadline = opts.timeout.map(|t| Instant::now() + t);
    let plan: &[EncodingMode] = match mode {
        ModeRequest::Auto => &[EncodingMode::Strict, EncodingMode::Prioritized],
        ModeRequest::Strict => &[EncodingMode::Strict],
        ModeRequest::Prioritized => &[EncodingMode::Prioritized],
    };
    let mut diagnostics = Vec::new();
    let mut last = plan[0];
    for &m in plan {
        last = m;
        match run(&facts, &names, m, double, opts, deadline)? {
            Run::Found(mut teams, note) => {
                diagnostics.push(note);
                let assignment = teams.remove(0);
                let (status, waived) = if m == EncodingMode::Strict {
                    (SolveStatus::Feasible, Vec::new())
                } else {
                    let report = explain_team(instance, &assignment)?;
                    let waived: Vec<Violation> =
                        report.violations.into_iter().filter(|v| v.kind.is_preference()).collect();
                    diagnostics.push(format!("relaxed preferences applied: {} tuple(s) waived", waived.len()));
                    (SolveStatus::Degraded, waived)
                };
                return Ok(SolveOutcome {
                    status,
                    assignment: Some(assignment),
                    alternatives: teams,
                    mode_used: m,
                    waived,
                    diagnostics,
                });
            }
            Run::None(note) => diagnostics.push(note),
            Run::Limit(note) => {
                diagnostics.push(note);
                return Ok(SolveOutcome {
                    status: SolveStatus::ResourceLimit,
                    assignment: None,
                    alternatives: Vec::new(),
                    mode_used: m,
                    waived: Vec::new(),
                    diagnostics,
                });
            }
        }
    }
    Ok(SolveOutcome {
        status: SolveStatus::Infeasible,
        assignment: None,
        alternatives: Vec::new(),
        mode_used: last,
        waived: Vec::new(),
        diagnostics,
    })
}

fn team_program(instance: &RosterInstance, team: &Assignment, rules: Program) -> Result<(Program, NameMap), EngineError> {
    let errors = errors_only(validate_instance(instance));
    if !errors.is_empty() {
        return Err(InvalidInstance(errors).into());
    }
    let names = NameMap::for_instance(instance);
    for t in team.iter() {
        if instance.employee(&t.employee).is_none() {
            return Err(EngineError::UnknownReference(format!("unknown employee `{}`", t.employee)));
        }
        if instance.shift(&t.shift).is_none() {
            return Err(EngineError::UnknownReference(format!("unknown shift `{}`", t.shift)));
        }
        if instance.skill(&t.skill).is_none() {
            return Err(EngineError::UnknownReference(format!("unknown skill `{}`", t.skill)));
        }
    }
    let mut program = Program::new(facts_unchecked(instance, &names));
    program.extend(team_facts(&names, team));
    program.extend(rules);
    Ok((program, names))
}

fn has_answer_set(program: &Program) -> Result<bool, EngineError> {
    let e = enumerate_with(program, &SolveOptions::with_limit(1))?;
    Ok(!e.answer_sets.is_empty())
}

/// Whether `team` satisfies every constraint, preferences included.
pub fn check_team(instance: &RosterInstance, team: &Assignment) -> Result<bool, EngineError> {
    let rules = build_encoding(EncodingMode::Check, !instance.double_shifts.is_empty());
    let (program, _) = team_program(instance, team, rules)?;
    has_answer_set(&program)
}

/// Like [`check_team`], with lower-priority preferences waived where a
/// higher-priority one relates the same pair of employees.
pub fn check_team_prioritized(instance: &RosterInstance, team: &Assignment) -> Result<bool, EngineError> {
    let rules = build_prioritized_check_encoding(!instance.double_shifts.is_empty());
    let (program, _) = team_program(instance, team, rules)?;
    has_answer_set(&program)
}

/// Every constraint `team` breaks.
pub fn explain_team(instance: &RosterInstance, team: &Assignment) -> Result<CheckReport, EngineError> {
    let rules = build_encoding(EncodingMode::Explain, !instance.double_shifts.is_empty());
    let (program, names) = team_program(instance, team, rules)?;
    let e = enumerate_with(&program, &SolveOptions::with_limit(1))?;
    let model = e.answer_sets.into_iter().next().unwrap_or_default();
    let mut violations = Vec::new();
    for atom in model.iter() {
        if let Some(v) = violation_of(&names, team, atom) {
            violations.push(v);
        }
    }
    Ok(CheckReport::from_violations(violations))
}

fn violation_of(names: &NameMap, team: &Assignment, atom: &GroundAtom) -> Option<Violation> {
    let e = |c: &Const| names.id(Kind::Employee, c);
    let sh = |c: &Const| names.id(Kind::Shift, c);
    let sk = |c: &Const| names.id(Kind::Skill, c);
    let kind = match &*atom.predicate {
        "violatedTurnover" => ViolationKind::Turnover,
        "violatedFairness" => ViolationKind::Fairness,
        "violatedCrucial" => ViolationKind::Crucial,
        "violatedEligibility" => ViolationKind::Eligibility,
        "violatedCount" => ViolationKind::Count,
        "violatedMultiRole" => ViolationKind::MultiRole,
        "violatedMultiShift" => ViolationKind::MultiShift,
        "violatedDoubleShift" => ViolationKind::DoubleShift,
        "violatedTimeLimit" => ViolationKind::TimeLimit,
        _ => return None,
    };
    let a = atom.args.as_slice();
    Some(match kind {
        ViolationKind::Turnover | ViolationKind::Fairness | ViolationKind::Crucial => {
            Violation::new(kind, &[e(&a[0])?, e(&a[1])?], sh(&a[2])?).with_skill(sk(&a[3])?)
        }
        ViolationKind::Eligibility => Violation::new(kind, &[e(&a[0])?], sh(&a[1])?).with_skill(sk(&a[2])?),
        ViolationKind::Count => {
            let (shift, skill) = (sh(&a[0])?, sk(&a[1])?);
            let required = a[2].as_int()? as u32;
            let actual = team.iter().filter(|t| t.shift == shift && t.skill == skill).count() as u32;
            Violation::new(kind, &[], shift).with_skill(skill).with_counts(required, actual)
        }
        ViolationKind::MultiRole => {
            let (s1, s2) = (sk(&a[2])?, sk(&a[3])?);
            if s1 >= s2 {
                return None;
            }
            Violation::new(kind, &[e(&a[0])?], sh(&a[1])?).with_skill(s1).with_other_skill(s2)
        }
        ViolationKind::MultiShift => {
            let (h1, h2) = (sh(&a[1])?, sh(&a[2])?);
            if h1 >= h2 {
                return None;
            }
            Violation::new(kind, &[e(&a[0])?], h1).with_other_shift(h2)
        }
        ViolationKind::DoubleShift | ViolationKind::TimeLimit => {
            Violation::new(kind, &[e(&a[0])?], sh(&a[1])?).with_other_shift(sh(&a[2])?)
        }
    })
}
