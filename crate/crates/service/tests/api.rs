use std::path::PathBuf;
use std::time::Duration;

use axum::body::{to_bytes, Body};
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use chrono::NaiveDate;
use portroster::store::{load_snapshot, save_snapshot, MetaPlan, Snapshot};
use portroster::synthetic::synthetic_depot;
use portroster::*;
use portroster_service::{router, AppState, ServiceConfig};
use serde_json::{json, Value};
use tempfile::TempDir;
use tower::ServiceExt;

const SCHEMA: &str = include_str!("../schemas/api.json");

fn assert_schema(name: &str, value: &Value) {
    let mut schema: Value = serde_json::from_str(SCHEMA).unwrap();
    schema["$ref"] = json!(format!("#/$defs/{name}"));
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(value).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}\n{value:#}");
}

fn date() -> NaiveDate {
    NaiveDate::from_ymd_opt(2024, 3, 4).unwrap()
}

/// A depot holding the instance's staff, with its shifts and requirements
/// as one meta-plan.
fn depot_from(inst: RosterInstance, plan: &str) -> Snapshot {
    let mut snap = Snapshot::new(RosterInstance { shifts: vec![], requirements: vec![], double_shifts: vec![], ..inst.clone() });
    snap.meta_plans.insert(
        plan.into(),
        MetaPlan {
            date: date(),
            ship: None,
            shifts: inst.shifts,
            requirements: inst.requirements,
            double_shifts: inst.double_shifts,
        },
    );
    snap
}

struct Harness {
    _dir: TempDir,
    path: PathBuf,
    app: Router,
}

fn harness_with(mut snap: Snapshot, tweak: impl FnOnce(&mut ServiceConfig)) -> Harness {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("depot.json");
    save_snapshot(&mut snap, &path).unwrap();
    let mut config = ServiceConfig::new(&path);
    tweak(&mut config);
    config.validate().unwrap();
    Harness { _dir: dir, path, app: router(AppState::new(config)) }
}

fn harness(snap: Snapshot) -> Harness {
    harness_with(snap, |_| {})
}

async fn call(app: &Router, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri).header("content-type", "application/json");
    let req = match body {
        Some(b) => req.body(Body::from(b.to_string())).unwrap(),
        None => req.body(Body::empty()).unwrap(),
    };
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = to_bytes(resp.into_body(), usize::MAX).await.unwrap();
    let value = if bytes.is_empty() { Value::Null } else { serde_json::from_slice(&bytes).unwrap() };
    (status, value)
}

#[tokio::test]
async fn solve_two_employees() {
    let h = harness(depot_from(fixtures::two_employees(), "mp1"));
    let (status, body) = call(&h.app, Method::POST, "/solve", Some(json!({"metaPlanIds": ["mp1"]}))).await;
    assert_eq!(status, StatusCode::OK, "{body}");
    assert_schema("SolveOutcome", &body);
    assert_eq!(body["status"], "feasible");
    assert_eq!(body["assignment"].as_array().unwrap().len(), 2);
    let direct = solve(&fixtures::two_employees(), ModeRequest::Auto, &EngineOptions::default()).unwrap();
    assert_eq!(body, serde_json::to_value(&direct).unwrap());
}

#[tokio::test]
async fn strict_conflict_is_infeasible_and_auto_degrades() {
    let h = harness(depot_from(fixtures::conflict_scenario(), "c"));
    let (status, body) = call(&h.app, Method::POST, "/solve", Some(json!({"metaPlanIds": ["c"], "mode": "strict"}))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["status"], "infeasible");
    assert_schema("SolveOutcome", &body);
    let (_, body) = call(&h.app, Method::POST, "/solve", Some(json!({"metaPlanIds": ["c"]}))).await;
    assert_eq!(body["status"], "degraded");
    assert_eq!(body["waivedPreferences"][0]["kind"], "fairness");
    assert_schema("SolveOutcome", &body);
}

#[tokio::test]
async fn errors_have_codes_and_statuses() {
    let h = harness(depot_from(fixtures::two_employees(), "mp1"));
    let (status, body) = call(&h.app, Method::POST, "/solve", Some(json!({"metaPlanIds": ["ghost"]}))).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(body["code"], "unknown-meta-plan");
    assert_schema("Error", &body);

    let req = json!({"metaPlanIds": ["mp1"], "preAssignments": [{"employee": "nobody", "shift": "sh", "skill": "s1"}]});
    let (status, body) = call(&h.app, Method::POST, "/solve", Some(req)).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert!(!body["issues"].as_array().unwrap().is_empty());
    assert_schema("Error", &body);

    let (status, body) = call(&h.app, Method::POST, "/check", Some(json!({"metaPlanIds": ["mp1"], "team": [{"employee": 3}]}))).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(body["code"], "malformed-request");
    assert!(body["message"].as_str().unwrap().contains("team[0].employee"), "{body}");

    let (status, body) = call(&h.app, Method::GET, "/jobs/99", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_schema("Error", &body);
}

#[tokio::test]
async fn exhausted_budget_is_503() {
    let h = harness_with(depot_from(fixtures::two_employees(), "mp1"), |c| c.engine.max_ground_rules = 1);
    let (status, body) = call(&h.app, Method::POST, "/solve", Some(json!({"metaPlanIds": ["mp1"]}))).await;
    assert_eq!(status, StatusCode::SERVICE_UNAVAILABLE, "{body}");
    assert_eq!(body["code"], "resource-limit");
    assert_schema("Error", &body);
}

#[tokio::test]
async fn slow_solves_become_jobs() {
    let h = harness_with(depot_from(fixtures::two_employees(), "mp1"), |c| c.async_after = Duration::ZERO);
    let (status, body) = call(&h.app, Method::POST, "/solve", Some(json!({"metaPlanIds": ["mp1"]}))).await;
    assert_eq!(status, StatusCode::ACCEPTED);
    assert_schema("Job", &body);
    let uri = format!("/jobs/{}", body["jobId"]);
    let mut polled = Value::Null;
    for _ in 0..500 {
        let (status, b) = call(&h.app, Method::GET, &uri, None).await;
        assert_eq!(status, StatusCode::OK);
        assert_schema("Job", &b);
        if b["state"] != "running" {
            polled = b;
            break;
        }
        tokio::time::sleep(Duration::from_millis(10)).await;
    }
    assert_eq!(polled["state"], "done");
    let body = &polled["result"];
    assert_eq!(body["status"], "feasible");
}

fn two_shift_depot() -> Snapshot {
    let mut inst = fixtures::two_employees();
    inst.employees.push(Employee::new("e3", &["s1", "s2"]));
    inst.shifts.push(Shift::new("sh2", 6));
    inst.requirements.push(Requirement::new("sh2", "s2", 1));
    depot_from(inst, "mp1")
}

#[tokio::test]
async fn check_reports_without_touching_the_depot() {
    let h = harness(two_shift_depot());
    let before = std::fs::read(&h.path).unwrap();
    let (_, solved) = call(&h.app, Method::POST, "/solve", Some(json!({"metaPlanIds": ["mp1"]}))).await;
    let team = solved["assignment"].clone();
    let (status, body) = call(&h.app, Method::POST, "/check", Some(json!({"metaPlanIds": ["mp1"], "team": team}))).await;
    assert_eq!(status, StatusCode::OK);
    assert_schema("CheckReport", &body);
    assert_eq!(body, json!({"consistent": true, "violations": []}));

    let excluded = json!({
        "metaPlanIds": ["mp1"],
        "team": team,
        "exclusions": [{"employee": "e1", "shift": "sh"}]
    });
    let (_, body) = call(&h.app, Method::POST, "/check", Some(excluded)).await;
    assert_eq!(body["consistent"], false);
    assert!(body["violations"].as_array().unwrap().iter().any(|v| v["kind"] == "eligibility" && v["employees"] == json!(["e1"])));

    let double = json!({
        "metaPlanIds": ["mp1"],
        "team": [
            {"employee": "e1", "shift": "sh", "skill": "s1"},
            {"employee": "e2", "shift": "sh", "skill": "s2"},
            {"employee": "e2", "shift": "sh2", "skill": "s2"}
        ]
    });
    let (_, body) = call(&h.app, Method::POST, "/check", Some(double)).await;
    assert_schema("CheckReport", &body);
    assert_eq!(body["consistent"], false);
    assert!(body["violations"].as_array().unwrap().iter().any(|v| v["kind"] == "multiShift"));
    assert_eq!(std::fs::read(&h.path).unwrap(), before);
}

#[tokio::test]
async fn meta_plan_crud() {
    let h = harness(depot_from(fixtures::two_employees(), "mp1"));
    let (status, list) = call(&h.app, Method::GET, "/metaplans", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_schema("MetaPlans", &list);
    assert_eq!(list[0]["id"], "mp1");

    let plan = json!({
        "date": "2024-03-05",
        "ship": "MSC Aurora",
        "shifts": [{"id": "2024-03-05T06:00", "duration": 8}],
        "requirements": [{"shift": "2024-03-05T06:00", "skill": "s2", "count": 1}]
    });
    let (status, body) = call(&h.app, Method::PUT, "/metaplans/aurora", Some(plan.clone())).await;
    assert_eq!(status, StatusCode::CREATED, "{body}");
    assert_schema("Written", &body);
    assert_eq!(body["revision"], 2);
    let (status, _) = call(&h.app, Method::PUT, "/metaplans/aurora", Some(plan)).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(load_snapshot(&h.path).unwrap().meta_plans.len(), 2);

    let bad = json!({
        "date": "2024-03-05",
        "shifts": [{"id": "x", "duration": 8}],
        "requirements": [{"shift": "x", "skill": "welding", "count": 1}]
    });
    let (status, body) = call(&h.app, Method::PUT, "/metaplans/bad", Some(bad)).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_schema("Error", &body);
    assert!(body["issues"][0]["message"].as_str().unwrap().contains("welding"));

    let (status, _) = call(&h.app, Method::DELETE, "/metaplans/aurora", None).await;
    assert_eq!(status, StatusCode::NO_CONTENT);
    let (status, _) = call(&h.app, Method::DELETE, "/metaplans/aurora", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(load_snapshot(&h.path).unwrap().meta_plans.len(), 1);
}

#[tokio::test]
async fn staff_and_stats() {
    let h = harness(synthetic_depot(30, 5));
    let (status, staff) = call(&h.app, Method::GET, "/staff", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_schema("Staff", &staff);
    assert_eq!(staff["employees"].as_array().unwrap().len(), 30);
    let (status, stats) = call(&h.app, Method::GET, "/stats", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_schema("Stats", &stats);
    let snap = load_snapshot(&h.path).unwrap();
    assert_eq!(stats, serde_json::to_value(portroster::store::employee_stats(&snap)).unwrap());
}

#[tokio::test]
async fn simulation_commits_only_on_request() {
    let h = harness(synthetic_depot(30, 5));
    let req = json!({"startDate": "2024-03-07", "days": 2, "seedPlanGenerator": 5});
    let (status, report) = call(&h.app, Method::POST, "/simulate", Some(req)).await;
    assert_eq!(status, StatusCode::OK, "{report}");
    assert_schema("SimulationReport", &report);
    assert_eq!(report["perDayOutcomes"].as_array().unwrap().len(), 2);
    assert_eq!(load_snapshot(&h.path).unwrap().revision, 1);

    let req = json!({"startDate": "2024-03-07", "days": 2, "seedPlanGenerator": 5, "commit": true});
    let (status, committed) = call(&h.app, Method::POST, "/simulate", Some(req)).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(committed, report);
    let after = load_snapshot(&h.path).unwrap();
    assert_eq!(after.revision, 2);
    assert_eq!(after.history_as_of, NaiveDate::from_ymd_opt(2024, 3, 8));
    assert!(!after.committed_plans.is_empty());
}

#[tokio::test]
async fn concurrent_solves_share_the_pool() {
    let h = harness(depot_from(fixtures::double_shift(), "ds"));
    let handles: Vec<_> = (0..6)
        .map(|_| {
            let app = h.app.clone();
            tokio::spawn(async move { call(&app, Method::POST, "/solve", Some(json!({"metaPlanIds": ["ds"]}))).await })
        })
        .collect();
    let mut results = Vec::new();
    for handle in handles {
        results.push(handle.await.unwrap());
    }
    for (status, body) in &results {
        assert_eq!(*status, StatusCode::OK);
        assert_eq!(body, &results[0].1);
    }
}
