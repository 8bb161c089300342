//! HTTP interface over a depot file: meta-plan maintenance, staff and
//! statistics, solving, checking and simulation.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};
use std::time::Duration;

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::{Json, Router};
use portroster::simulate::{simulate, SimulateError, SimulationReport, SimulationRequest};
use portroster::store::{employee_stats, load_snapshot, save_snapshot, EmployeeStats, MetaPlan, Snapshot, StoreError};
use portroster::{
    check_team, errors_only, explain_team, solve, validate_instance, Assignment, CheckReport, EngineError,
    EngineOptions, Employee, Exclusion, ModeRequest, Parameters, RosterInstance, Skill, SolveOutcome, SolveStatus,
    Triple, ValidationIssue,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use tokio::sync::{oneshot, Semaphore};

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub depot: PathBuf,
    pub engine: EngineOptions,
    /// Solves still running after this long are answered with a job id;
    /// zero makes every solve a job.
    pub async_after: Duration,
    pub workers: usize,
}

impl ServiceConfig {
    pub fn new(depot: impl Into<PathBuf>) -> Self {
        ServiceConfig {
            depot: depot.into(),
            engine: EngineOptions { timeout: Some(Duration::from_secs(300)), ..Default::default() },
            async_after: Duration::from_secs(2),
            workers: 2,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.workers == 0 {
            return Err("worker pool must have at least one worker".into());
        }
        if self.engine.timeout.is_some_and(|t| t.is_zero()) || self.engine.max_ground_rules == 0 {
            return Err("solver budgets must be positive".into());
        }
        Ok(())
    }
}

/// Error body shared by every endpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
    pub issues: Vec<ValidationIssue>,
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: ErrorBody,
}

impl ApiError {
    fn new(status: StatusCode, code: &str, message: impl Into<String>) -> Self {
        ApiError { status, body: ErrorBody { code: code.into(), message: message.into(), issues: Vec::new() } }
    }

    fn with_issues(mut self, issues: Vec<ValidationIssue>) -> Self {
        self.body.issues = issues;
        self
    }

    fn internal(message: impl Into<String>) -> Self {
        ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        let message = e.to_string();
        match e {
            StoreError::UnknownMetaPlan(_) => ApiError::new(StatusCode::NOT_FOUND, "unknown-meta-plan", message),
            StoreError::RevisionConflict { .. } => ApiError::new(StatusCode::CONFLICT, "revision-conflict", message),
            StoreError::Locked => ApiError::new(StatusCode::SERVICE_UNAVAILABLE, "depot-locked", message),
            StoreError::UnknownEmployee(_) | StoreError::UnknownShift(_) => {
                ApiError::new(StatusCode::CONFLICT, "unknown-reference", message)
            }
            StoreError::OutOfOrder { .. } | StoreError::OvertimeExceeded { .. } => {
                ApiError::new(StatusCode::CONFLICT, "history", message)
            }
            StoreError::Missing(_) | StoreError::Io { .. } | StoreError::Malformed { .. } => {
                ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "depot", message)
            }
        }
    }
}

impl From<EngineError> for ApiError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::Invalid(invalid) => {
                ApiError::new(StatusCode::CONFLICT, "invalid-instance", invalid.to_string()).with_issues(invalid.0)
            }
            EngineError::UnknownReference(r) => ApiError::new(StatusCode::CONFLICT, "unknown-reference", r),
            EngineError::Solver(s) if s.is_resource_limit() => {
                ApiError::new(StatusCode::SERVICE_UNAVAILABLE, "resource-limit", s.to_string())
            }
            EngineError::Solver(s) => ApiError::internal(s.to_string()),
        }
    }
}

impl From<SimulateError> for ApiError {
    fn from(e: SimulateError) -> Self {
        match e {
            SimulateError::Store(s) => s.into(),
            SimulateError::Engine { date, source } => {
                let mut err = ApiError::from(source);
                err.body.message = format!("{date}: {}", err.body.message);
                err
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SolveRequest {
    pub meta_plan_ids: Vec<String>,
    #[serde(default)]
    pub pre_assignments: Vec<Triple>,
    #[serde(default)]
    pub exclusions: Vec<Exclusion>,
    #[serde(default)]
    pub mode: ModeRequest,
    #[serde(default)]
    pub alternatives: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct CheckRequest {
    pub meta_plan_ids: Vec<String>,
    pub team: Assignment,
    #[serde(default)]
    pub exclusions: Vec<Exclusion>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MetaPlanEntry {
    pub id: String,
    #[serde(flatten)]
    pub plan: MetaPlan,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StaffResponse {
    pub parameters: Parameters,
    pub skills: Vec<Skill>,
    pub employees: Vec<Employee>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Written {
    pub id: String,
    pub revision: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JobState {
    Running,
    Done,
    Failed,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct JobResponse {
    pub job_id: u64,
    pub state: JobState,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<SolveOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorBody>,
}

type JobResult = Result<SolveOutcome, ApiError>;

#[derive(Default)]
struct Jobs {
    next: AtomicU64,
    finished: Mutex<HashMap<u64, Option<JobResult>>>,
}

struct Shared {
    config: ServiceConfig,
    pool: Semaphore,
    jobs: Jobs,
    writes: tokio::sync::Mutex<()>,
}

#[derive(Clone)]
pub struct AppState(Arc<Shared>);

impl AppState {
    pub fn new(config: ServiceConfig) -> Self {
        let pool = Semaphore::new(config.workers.max(1));
        AppState(Arc::new(Shared { config, pool, jobs: Jobs::default(), writes: tokio::sync::Mutex::new(()) }))
    }

    fn load(&self) -> Result<Snapshot, ApiError> {
        Ok(load_snapshot(&self.0.config.depot)?)
    }

    /// Runs `work` on the blocking pool once a worker is free.
    async fn run<T: Send + 'static>(&self, work: impl FnOnce() -> T + Send + 'static) -> Result<T, ApiError> {
        let _permit = self.0.pool.acquire().await.map_err(|e| ApiError::internal(e.to_string()))?;
        tokio::task::spawn_blocking(work).await.map_err(|e| ApiError::internal(e.to_string()))
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/metaplans", get(list_meta_plans))
        .route("/metaplans/{id}", put(put_meta_plan).delete(delete_meta_plan))
        .route("/staff", get(staff))
        .route("/stats", get(stats))
        .route("/solve", post(solve_handler))
        .route("/jobs/{id}", get(job))
        .route("/check", post(check_handler))
        .route("/simulate", post(simulate_handler))
        .with_state(state)
}

fn parse_body<T: DeserializeOwned>(body: &Bytes) -> Result<T, ApiError> {
    let de = &mut serde_json::Deserializer::from_slice(body);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        ApiError::new(StatusCode::CONFLICT, "malformed-request", format!("at `{path}`: {}", e.into_inner()))
    })
}

async fn list_meta_plans(State(state): State<AppState>) -> Result<Json<Vec<MetaPlanEntry>>, ApiError> {
    let snap = state.load()?;
    Ok(Json(snap.meta_plans.into_iter().map(|(id, plan)| MetaPlanEntry { id, plan }).collect()))
}

async fn put_meta_plan(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<(StatusCode, Json<Written>), ApiError> {
    let plan: MetaPlan = parse_body(&body)?;
    let _guard = state.0.writes.lock().await;
    let mut snap = state.load()?;
    let created = snap.meta_plans.insert(id.clone(), plan).is_none();
    let issues = errors_only(validate_instance(&snap.instance_for(std::slice::from_ref(&id))?));
    if !issues.is_empty() {
        return Err(ApiError::new(StatusCode::CONFLICT, "invalid-meta-plan", format!("meta-plan `{id}` is invalid"))
            .with_issues(issues));
    }
    let revision = save_snapshot(&mut snap, &state.0.config.depot)?;
    let status = if created { StatusCode::CREATED } else { StatusCode::OK };
    Ok((status, Json(Written { id, revision })))
}

async fn delete_meta_plan(State(state): State<AppState>, Path(id): Path<String>) -> Result<StatusCode, ApiError> {
    let _guard = state.0.writes.lock().await;
    let mut snap = state.load()?;
    if snap.meta_plans.remove(&id).is_none() {
        return Err(StoreError::UnknownMetaPlan(id).into());
    }
    save_snapshot(&mut snap, &state.0.config.depot)?;
    Ok(StatusCode::NO_CONTENT)
}

async fn staff(State(state): State<AppState>) -> Result<Json<StaffResponse>, ApiError> {
    let inst = state.load()?.instance;
    Ok(Json(StaffResponse { parameters: inst.parameters, skills: inst.skills, employees: inst.employees }))
}

async fn stats(State(state): State<AppState>) -> Result<Json<Vec<EmployeeStats>>, ApiError> {
    Ok(Json(employee_stats(&state.load()?)))
}

fn instance_for(snap: &Snapshot, ids: &[String], exclusions: &[Exclusion]) -> Result<RosterInstance, ApiError> {
    if ids.is_empty() {
        return Err(ApiError::new(StatusCode::CONFLICT, "malformed-request", "no meta-plans selected"));
    }
    let mut inst = snap.instance_for(ids)?;
    inst.exclusions.extend(exclusions.iter().cloned());
    Ok(inst)
}

fn solve_response(outcome: SolveOutcome) -> Response {
    if outcome.status == SolveStatus::ResourceLimit {
        let message = format!("solver budget exhausted: {}", outcome.diagnostics.join("; "));
        return ApiError::new(StatusCode::SERVICE_UNAVAILABLE, "resource-limit", message).into_response();
    }
    Json(outcome).into_response()
}

async fn solve_handler(State(state): State<AppState>, body: Bytes) -> Result<Response, ApiError> {
    let req: SolveRequest = parse_body(&body)?;
    let snap = state.load()?;
    let mut inst = instance_for(&snap, &req.meta_plan_ids, &req.exclusions)?;
    inst.pre_assignments.extend(req.pre_assignments);
    let mut options = state.0.config.engine.clone();
    if let Some(k) = req.alternatives {
        options.alternatives = k.max(1);
    }

    let id = state.0.jobs.next.fetch_add(1, Ordering::Relaxed) + 1;
    state.0.jobs.finished.lock().expect("job table").insert(id, None);
    let (tx, rx) = oneshot::channel::<()>();
    let worker = state.clone();
    tokio::spawn(async move {
        let result = match worker.run(move || solve(&inst, req.mode, &options)).await {
            Ok(r) => r.map_err(ApiError::from),
            Err(e) => Err(e),
        };
        worker.0.jobs.finished.lock().expect("job table").insert(id, Some(result));
        let _ = tx.send(());
    });

    let wait = state.0.config.async_after;
    if !wait.is_zero() && tokio::time::timeout(wait, rx).await.is_ok() {
        let done = state.0.jobs.finished.lock().expect("job table").remove(&id).flatten();
        return match done {
            Some(Ok(outcome)) => Ok(solve_response(outcome)),
            Some(Err(e)) => Err(e),
            None => Err(ApiError::internal("solver job vanished")),
        };
    }
    let body = JobResponse { job_id: id, state: JobState::Running, result: None, error: None };
    Ok((StatusCode::ACCEPTED, [(header::LOCATION, format!("/jobs/{id}"))], Json(body)).into_response())
}

async fn job(State(state): State<AppState>, Path(id): Path<u64>) -> Result<Response, ApiError> {
    let jobs = state.0.jobs.finished.lock().expect("job table");
    let entry = jobs
        .get(&id)
        .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, "unknown-job", format!("unknown job `{id}`")))?;
    let body = match entry {
        None => JobResponse { job_id: id, state: JobState::Running, result: None, error: None },
        Some(Ok(outcome)) => JobResponse { job_id: id, state: JobState::Done, result: Some(outcome.clone()), error: None },
        Some(Err(e)) => JobResponse { job_id: id, state: JobState::Failed, result: None, error: Some(e.body.clone()) },
    };
    Ok(Json(body).into_response())
}

async fn check_handler(State(state): State<AppState>, body: Bytes) -> Result<Json<CheckReport>, ApiError> {
    let req: CheckRequest = parse_body(&body)?;
    let snap = state.load()?;
    let inst = instance_for(&snap, &req.meta_plan_ids, &req.exclusions)?;
    let team = req.team;
    let (consistent, mut report) = state
        .run(move || -> Result<(bool, CheckReport), EngineError> {
            Ok((check_team(&inst, &team)?, explain_team(&inst, &team)?))
        })
        .await??;
    report.consistent = consistent;
    Ok(Json(report))
}

async fn simulate_handler(State(state): State<AppState>, body: Bytes) -> Result<Json<SimulationReport>, ApiError> {
    let req: SimulationRequest = parse_body(&body)?;
    if req.days == 0 {
        return Err(ApiError::new(StatusCode::CONFLICT, "malformed-request", "days must be positive"));
    }
    let _guard = if req.commit { Some(state.0.writes.lock().await) } else { None };
    let snap = state.load()?;
    let options = state.0.config.engine.clone();
    let request = req.clone();
    let (report, mut end) = state.run(move || simulate(&snap, &request, &options)).await??;
    if req.commit {
        save_snapshot(&mut end, &state.0.config.depot)?;
    }
    Ok(Json(report))
}
