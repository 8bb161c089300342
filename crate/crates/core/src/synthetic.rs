//! Seeded generators for staff, meta-plans and whole instances.

use chrono::{NaiveDate, NaiveDateTime};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::roster::model::{Employee, Exclusion, Parameters, Requirement, RosterInstance, Shift, Skill};
use crate::store::{MetaPlan, Snapshot};

/// Skill catalogue of the synthetic depot: id, heavy, crucial.
pub const SKILLS: [(&str, bool, bool); 6] = [
    ("crane", true, false),
    ("straddle", true, false),
    ("lasher", false, false),
    ("checker", false, true),
    ("foreman", false, true),
    ("clerk", false, false),
];

/// Start hours and durations of the three daily shifts; the last one is a
/// night shift.
pub const DAY_SHIFTS: [(u32, u32); 3] = [(6, 8), (14, 8), (22, 8)];

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn skills() -> Vec<Skill> {
    SKILLS.iter().map(|(id, heavy, crucial)| Skill { id: id.to_string(), heavy: *heavy, crucial: *crucial }).collect()
}

pub fn shift_id(at: NaiveDateTime) -> String {
    at.format("%Y-%m-%dT%H:%M").to_string()
}

/// `n` employees with one to three skills each and scattered past heavy
/// allocations; every skill is held by at least a quarter of the staff.
pub fn synthetic_staff(n: usize, seed: u64) -> RosterInstance {
    let mut r = rng(seed);
    let mut inst = RosterInstance::new(Parameters::default());
    inst.skills = skills();
    let base = NaiveDate::from_ymd_opt(2024, 1, 1).expect("valid date");
    for i in 0..n {
        let mut ids: Vec<&str> = Vec::new();
        ids.push(SKILLS[i % SKILLS.len()].0);
        let extra = r.random_range(0..=2);
        for _ in 0..extra {
            let s = SKILLS.choose(&mut r).expect("non-empty").0;
            if !ids.contains(&s) {
                ids.push(s);
            }
        }
        let mut e = Employee::new(&format!("w{:03}", i + 1), &ids);
        for (id, heavy, _) in SKILLS {
            if heavy && e.has_skill(id) && r.random_bool(0.8) {
                e.history.last_allocation.insert(id.to_string(), base + chrono::Duration::days(r.random_range(0..60)));
            }
        }
        inst.employees.push(e);
    }
    inst
}

/// Meta-plans for one day over the three daily shifts: one or two ships
/// per shift, each asking for a few roles.
pub fn synthetic_meta_plans(date: NaiveDate, seed: u64) -> Vec<(String, MetaPlan)> {
    let mut r = rng(seed ^ (crate::roster::model::day_number(date) as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let mut out = Vec::new();
    let mut previous: Option<String> = None;
    for (k, (hour, duration)) in DAY_SHIFTS.iter().enumerate() {
        let start = date.and_hms_opt(*hour, 0, 0).expect("valid time");
        let mut shift = Shift::new(&shift_id(start), *duration).starting(start);
        shift.predecessor = previous.clone();
        previous = Some(shift.id.clone());
        let ships = if k == 2 { 1 } else { r.random_range(1..=2) };
        for ship in 0..ships {
            let mut roles: Vec<&str> = SKILLS.iter().map(|s| s.0).collect();
            roles.shuffle(&mut r);
            let n_roles = r.random_range(2..=3);
            let requirements = roles[..n_roles]
                .iter()
                .map(|sk| Requirement::new(&shift.id, sk, if ships == 1 { r.random_range(1..=2) } else { 1 }))
                .collect();
            let id = format!("{}-s{}-{}", date.format("%Y%m%d"), k + 1, (b'a' + ship as u8) as char);
            out.push((
                id.clone(),
                MetaPlan {
                    date,
                    ship: Some(format!("ship-{id}")),
                    shifts: vec![shift.clone()],
                    requirements,
                    double_shifts: Vec::new(),
                },
            ));
        }
    }
    out
}

/// Day on which the synthetic depot's history counters stand: a
/// Wednesday, so the week already has some hours in it.
pub fn depot_history_date() -> NaiveDate {
    NaiveDate::from_ymd_opt(2024, 3, 6).expect("valid date")
}

/// A depot with `n` synthetic employees, no meta-plans, and up to four
/// eight-hour shifts already worked this week.
pub fn synthetic_depot(n: usize, seed: u64) -> Snapshot {
    let mut staff = synthetic_staff(n, seed);
    let mut r = rng(seed.wrapping_add(2));
    let threshold = staff.parameters.regular_threshold();
    for e in &mut staff.employees {
        e.history.weekly_hours = 8 * r.random_range(0..=4);
        e.history.week_overtime_hours = e.history.weekly_hours.saturating_sub(threshold);
    }
    let mut snap = Snapshot::new(staff);
    snap.history_as_of = Some(depot_history_date());
    snap
}

/// A depot with meta-plans for `days` consecutive days from `start`.
pub fn synthetic_depot_with_plans(n: usize, seed: u64, start: NaiveDate, days: u32) -> Snapshot {
    let mut snap = synthetic_depot(n, seed);
    for d in 0..days {
        let date = start + chrono::Duration::days(d as i64);
        snap.meta_plans.extend(synthetic_meta_plans(date, seed));
    }
    snap
}

/// A small random instance: up to `max_employees` employees, `max_shifts`
/// shifts of one day and `max_skills` skills, with random histories,
/// absences and exclusions.
pub fn random_instance(seed: u64, max_employees: usize, max_shifts: usize, max_skills: usize) -> RosterInstance {
    let mut r = rng(seed);
    let mut inst = RosterInstance::new(Parameters::default());
    let n_skills = r.random_range(1..=max_skills);
    for i in 0..n_skills {
        let mut s = Skill::new(&format!("k{}", i + 1));
        s.heavy = r.random_bool(0.4);
        s.crucial = r.random_bool(0.3);
        inst.skills.push(s);
    }
    let n_shifts = r.random_range(1..=max_shifts);
    let day = NaiveDate::from_ymd_opt(2024, 3, 4).expect("valid date");
    let mut hour = 6;
    for i in 0..n_shifts {
        let duration = r.random_range(6..=8);
        let start = day.and_hms_opt(hour, 0, 0).expect("valid time");
        let mut s = Shift::new(&format!("t{}", i + 1), duration).starting(start);
        if i > 0 {
            s.predecessor = Some(format!("t{i}"));
        }
        hour += duration;
        inst.shifts.push(s);
    }
    let n_employees = r.random_range(1..=max_employees);
    let base = NaiveDate::from_ymd_opt(2024, 2, 1).expect("valid date");
    for i in 0..n_employees {
        let mut ids: Vec<String> = inst.skills.iter().filter(|_| r.random_bool(0.5)).map(|s| s.id.clone()).collect();
        if ids.is_empty() {
            ids.push(inst.skills.choose(&mut r).expect("non-empty").id.clone());
        }
        let refs: Vec<&str> = ids.iter().map(String::as_str).collect();
        let mut e = Employee::new(&format!("p{}", i + 1), &refs);
        e.history.weekly_hours = r.random_range(0..=44);
        e.history.week_overtime_hours = e.history.weekly_hours.saturating_sub(36);
        e.history.daily_hours = if r.random_bool(0.2) { r.random_range(0..=6) } else { 0 };
        for sk in &ids {
            if r.random_bool(0.7) {
                e.history.last_allocation.insert(sk.clone(), base + chrono::Duration::days(r.random_range(0..10)));
            }
        }
        if r.random_bool(0.15) {
            e.absences.insert(inst.shifts.choose(&mut r).expect("non-empty").id.clone());
        }
        inst.employees.push(e);
    }
    for s in &inst.shifts {
        for k in &inst.skills {
            if r.random_bool(0.4) {
                inst.requirements.push(Requirement::new(&s.id, &k.id, r.random_range(1..=2)));
            }
        }
    }
    if inst.requirements.is_empty() {
        inst.requirements.push(Requirement::new(&inst.shifts[0].id, &inst.skills[0].id, 1));
    }
    if r.random_bool(0.2) {
        let e = inst.employees.choose(&mut r).expect("non-empty").id.clone();
        let s = inst.shifts.choose(&mut r).expect("non-empty").id.clone();
        inst.exclusions.push(Exclusion { employee: e, shift: s });
    }
    inst
}

/// One shift with `n` employees and roughly a quarter of them required,
/// spread over the synthetic skill catalogue.
pub fn desk_instance(n: usize, seed: u64) -> RosterInstance {
    let mut inst = synthetic_staff(n, seed);
    let mut r = rng(seed.wrapping_add(1));
    for e in &mut inst.employees {
        e.history.weekly_hours = r.random_range(0..=40);
        e.history.week_overtime_hours = e.history.weekly_hours.saturating_sub(36);
    }
    let start = NaiveDate::from_ymd_opt(2024, 3, 4).expect("valid date").and_hms_opt(6, 0, 0).expect("valid time");
    let shift = Shift::new(&shift_id(start), 8).starting(start);
    let per_skill = (n / 4 / SKILLS.len()).max(1) as u32;
    for (id, _, _) in SKILLS {
        inst.requirements.push(Requirement::new(&shift.id, id, per_skill));
    }
    inst.shifts.push(shift);
    inst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roster::validate::{errors_only, validate_instance};

    #[test]
    fn generators_are_deterministic_and_valid() {
        assert_eq!(synthetic_staff(30, 7), synthetic_staff(30, 7));
        assert_ne!(synthetic_staff(30, 7), synthetic_staff(30, 8));
        for seed in 0..50 {
            let inst = random_instance(seed, 10, 3, 4);
            assert!(errors_only(validate_instance(&inst)).is_empty(), "{seed}: {:?}", validate_instance(&inst));
        }
        let snap = synthetic_depot_with_plans(30, 1, NaiveDate::from_ymd_opt(2024, 3, 4).unwrap(), 7);
        let day = snap.meta_plans_on(NaiveDate::from_ymd_opt(2024, 3, 5).unwrap());
        let inst = snap.instance_for(&day).unwrap();
        assert_eq!(inst.shifts.len(), 3);
        assert!(errors_only(validate_instance(&inst)).is_empty());
        assert!(errors_only(validate_instance(&desk_instance(130, 3))).is_empty());
    }
}
