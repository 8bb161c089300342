use std::hint::black_box;

use chrono::NaiveDate;
use criterion::{criterion_group, criterion_main, Criterion};
use portroster::asp::enumerate_answer_sets;
use portroster::simulate::{simulate, SimulationRequest};
use portroster::synthetic::{desk_instance, synthetic_depot};
use portroster::{fixtures, solve, EngineOptions, ModeRequest};
use portroster_bench::colouring;

fn asp(c: &mut Criterion) {
    let ring = colouring(8);
    c.bench_function("asp/colouring-ring-8/all", |b| b.iter(|| enumerate_answer_sets(black_box(&ring), None).unwrap()));
    let ring = colouring(40);
    c.bench_function("asp/colouring-ring-40/first", |b| b.iter(|| enumerate_answer_sets(black_box(&ring), Some(1)).unwrap()));
}

fn roster(c: &mut Criterion) {
    let options = EngineOptions::default();
    let conflict = fixtures::conflict_scenario();
    c.bench_function("roster/conflict/auto", |b| b.iter(|| solve(black_box(&conflict), ModeRequest::Auto, &options).unwrap()));
    let mut g = c.benchmark_group("desk");
    g.sample_size(10);
    let desk = desk_instance(130, 1);
    g.bench_function("shift-130/auto", |b| b.iter(|| solve(black_box(&desk), ModeRequest::Auto, &options).unwrap()));
    let depot = synthetic_depot(30, 5);
    let request = SimulationRequest {
        start_date: NaiveDate::from_ymd_opt(2024, 3, 7).unwrap(),
        days: 1,
        commit: false,
        seed: Some(5),
    };
    g.bench_function("depot-30/one-day", |b| b.iter(|| simulate(black_box(&depot), &request, &options).unwrap()));
    g.finish();
}

criterion_group!(benches, asp, roster);
criterion_main!(benches);
