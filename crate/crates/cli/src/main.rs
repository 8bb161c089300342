use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand};
use portroster::asp::{check_safety, enumerate_answer_sets, parse_program};
use portroster::simulate::{simulate, SimulationRequest};
use portroster::store::{employee_stats, load_snapshot, save_snapshot, write_stats_csv};
use portroster::{
    check_team, errors_only, explain_team, solve, validate_instance, Assignment, EngineOptions, ModeRequest,
    RosterInstance, SolveOutcome, SolveStatus, Severity,
};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Staff allocation for container terminals.
#[derive(Parser)]
#[command(name = "portroster", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a team for an instance.
    Solve(SolveArgs),
    /// Check a team against an instance; exit 1 if it breaks anything.
    Check(TeamArgs),
    /// List every constraint a team breaks, one per line.
    Explain(TeamArgs),
    /// Plan a window of days against a depot.
    Simulate(SimulateArgs),
    /// Print the answer sets of a logic program.
    Asp(AspArgs),
    /// Export per-employee statistics of a depot as CSV.
    Stats(StatsArgs),
}

#[derive(Args)]
struct Budget {
    /// Wall-clock budget in seconds.
    #[arg(long)]
    timeout: Option<u64>,
    /// Largest ground program allowed.
    #[arg(long)]
    max_ground_rules: Option<usize>,
}

impl Budget {
    fn options(&self) -> EngineOptions {
        let mut o = EngineOptions { timeout: self.timeout.map(Duration::from_secs), ..Default::default() };
        if let Some(n) = self.max_ground_rules {
            o.max_ground_rules = n;
        }
        o
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, default_value = "auto")]
    mode: ModeRequest,
    /// Where to write the outcome document; stdout when omitted, with the
    /// summary moved to stderr.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    alternatives: usize,
    #[command(flatten)]
    budget: Budget,
}

#[derive(Args)]
struct TeamArgs {
    #[arg(long)]
    instance: PathBuf,
    /// A list of triples or a solve outcome document.
    #[arg(long)]
    team: PathBuf,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    depot: PathBuf,
    #[arg(long)]
    start: NaiveDate,
    #[arg(long, default_value_t = 1)]
    days: u32,
    /// Write the updated history back to the depot.
    #[arg(long)]
    commit: bool,
    /// Generate the window's meta-plans from this seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Where to write the full report.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    budget: Budget,
}

#[derive(Args)]
struct AspArgs {
    #[arg(long)]
    program: PathBuf,
    /// Stop after this many answer sets; 0 prints all.
    #[arg(long, default_value_t = 0)]
    models: usize,
}

#[derive(Args)]
struct StatsArgs {
    #[arg(long)]
    depot: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Check(a) => cmd_check(a, false),
        Command::Explain(a) => cmd_check(a, true),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Asp(a) => cmd_asp(a),
        Command::Stats(a) => cmd_stats(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let at = e.path().to_string();
        anyhow::anyhow!("{}: at `{at}`: {}", path.display(), e.into_inner())
    })
}

fn write_json<T: Serialize>(value: &T, out: impl Write) -> Result<()> {
    let mut out = out;
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

/// Reads an instance and rejects it when validation finds errors;
/// warnings go to stderr.
fn read_instance(path: &Path) -> Result<RosterInstance> {
    let inst: RosterInstance = read_json(path)?;
    let issues = validate_instance(&inst);
    for i in issues.iter().filter(|i| i.severity == Severity::Warning) {
        eprintln!("warning: {i}");
    }
    let errors = errors_only(issues);
    if !errors.is_empty() {
        for i in &errors {
            eprintln!("{i}");
        }
        bail!("{}: {} validation error(s)", path.display(), errors.len());
    }
    Ok(inst)
}

fn read_team(path: &Path) -> Result<Assignment> {
    let value: serde_json::Value = read_json(path)?;
    if value.is_array() {
        return serde_json::from_value(value).with_context(|| format!("{}: not a list of triples", path.display()));
    }
    let outcome: SolveOutcome =
        serde_json::from_value(value).with_context(|| format!("{}: not a team or solve outcome", path.display()))?;
    Ok(outcome.assignment.unwrap_or_default())
}

fn table(team: &Assignment, out: &mut dyn Write) -> io::Result<()> {
    let rows: Vec<[&str; 3]> = team.iter().map(|t| [t.employee.as_str(), t.shift.as_str(), t.skill.as_str()]).collect();
    let header = ["employee", "shift", "skill"];
    let width = |c: usize| rows.iter().map(|r| r[c].len()).chain([header[c].len()]).max().unwrap_or(0);
    let (w0, w1) = (width(0), width(1));
    writeln!(out, "{:w0$}  {:w1$}  {}", header[0], header[1], header[2])?;
    for r in rows {
        writeln!(out, "{:w0$}  {:w1$}  {}", r[0], r[1], r[2])?;
    }
    Ok(())
}

fn exit_code(status: SolveStatus) -> u8 {
    match status {
        SolveStatus::Feasible => 0,
        SolveStatus::Degraded => 3,
        SolveStatus::Infeasible => 4,
        SolveStatus::ResourceLimit => 5,
    }
}

fn cmd_solve(a: SolveArgs) -> Result<u8> {
    let inst = read_instance(&a.instance)?;
    let mut options = a.budget.options();
    options.alternatives = a.alternatives.max(1);
    let outcome = solve(&inst, a.mode, &options)?;
    let mut summary: Box<dyn Write> = if a.out.is_some() { Box::new(io::stdout()) } else { Box::new(io::stderr()) };
    writeln!(summary, "status: {} ({})", outcome.status, outcome.mode_used)?;
    if let Some(team) = &outcome.assignment {
        table(team, &mut summary)?;
    }
    for v in &outcome.waived {
        writeln!(summary, "waived: {v}")?;
    }
    if outcome.status == SolveStatus::ResourceLimit {
        for d in &outcome.diagnostics {
            writeln!(summary, "{d}")?;
        }
    }
    match &a.out {
        Some(path) => {
            let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
            write_json(&outcome, io::BufWriter::new(file))?;
        }
        None => write_json(&outcome, io::stdout().lock())?,
    }
    Ok(exit_code(outcome.status))
}

fn cmd_check(a: TeamArgs, explain: bool) -> Result<u8> {
    let inst = read_instance(&a.instance)?;
    let team = read_team(&a.team)?;
    let consistent = check_team(&inst, &team)?;
    if explain {
        let report = explain_team(&inst, &team)?;
        for v in &report.violations {
            println!("{v}");
        }
    } else if consistent {
        println!("consistent");
    } else {
        println!("inconsistent");
    }
    Ok(if consistent { 0 } else { 1 })
}

fn cmd_simulate(a: SimulateArgs) -> Result<u8> {
    let snap = load_snapshot(&a.depot)?;
    let request = SimulationRequest { start_date: a.start, days: a.days, commit: a.commit, seed: a.seed };
    if a.days == 0 {
        bail!("--days must be positive");
    }
    let (report, mut end) = simulate(&snap, &request, &a.budget.options())?;
    for d in &report.per_day_outcomes {
        let staffed = d.assignment.as_ref().map_or(0, |t| t.len());
        println!(
            "{} {:<14} {:>3} staffed {:>4}h {:>3}h overtime {} waived",
            d.date,
            d.status.to_string().to_uppercase(),
            staffed,
            d.hours_accrued,
            d.overtime_accrued,
            d.waived.len()
        );
    }
    let s = &report.aggregate_stats;
    println!();
    println!("days       feasible {} degraded {} infeasible {} resource-limit {}", s.feasible_days, s.degraded_days, s.infeasible_days, s.resource_limit_days);
    println!("hours      {} worked, {} overtime", s.total_hours, s.total_overtime_hours);
    println!("hard violations {}", s.hard_violations);
    println!();
    println!("{:<12} {:>6} {:>6}", "employee", "min", "max");
    for (e, r) in &s.weekly_hours {
        println!("{e:<12} {:>6} {:>6}", r.min, r.max);
    }
    if let Some(path) = &a.out {
        let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
        write_json(&report, io::BufWriter::new(file))?;
    }
    if a.commit {
        let revision = save_snapshot(&mut end, &a.depot)?;
        println!("committed revision {revision}");
    }
    Ok(0)
}

fn cmd_asp(a: AspArgs) -> Result<u8> {
    let text = fs::read_to_string(&a.program).with_context(|| format!("reading {}", a.program.display()))?;
    let program = parse_program(&text).map_err(|e| anyhow::anyhow!("{}:{e}", a.program.display()))?;
    let unsafe_rules = check_safety(&program);
    if !unsafe_rules.is_empty() {
        for v in &unsafe_rules {
            eprintln!("{v}");
        }
        bail!("{}: program is not safe", a.program.display());
    }
    let limit = (a.models > 0).then_some(a.models);
    let sets = enumerate_answer_sets(&program, limit)?;
    let mut lines: Vec<String> = sets
        .iter()
        .map(|m| {
            let mut atoms: Vec<String> = m.iter().map(|x| x.to_string()).collect();
            atoms.sort();
            format!("{{{}}}", atoms.join(", "))
        })
        .collect();
    lines.sort();
    for l in &lines {
        println!("{l}");
    }
    Ok(if lines.is_empty() { 1 } else { 0 })
}

fn cmd_stats(a: StatsArgs) -> Result<u8> {
    let snap = load_snapshot(&a.depot)?;
    let rows = employee_stats(&snap);
    match &a.out {
        Some(path) => {
            let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
            write_stats_csv(&rows, file)?;
        }
        None => write_stats_csv(&rows, io::stdout().lock())?,
    }
    Ok(0)
}
