//! Small hand-built instances used by tests, examples and the CLI.

use chrono::NaiveDate;

use crate::roster::model::{DoubleShiftLink, Employee, Parameters, Requirement, RosterInstance, Shift, Skill};

fn date(y: i32, m: u32, d: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(y, m, d).expect("valid date")
}

/// One shift needing one `s1` and one `s2`; `e1` has both skills, `e2`
/// only `s2`.
pub fn two_employees() -> RosterInstance {
    let mut inst = RosterInstance::new(Parameters::default());
    inst.skills = vec![Skill::new("s1"), Skill::new("s2")];
    inst.employees = vec![Employee::new("e1", &["s1", "s2"]), Employee::new("e2", &["s2"])];
    inst.shifts = vec![Shift::new("sh", 6)];
    inst.requirements = vec![Requirement::new("sh", "s1", 1), Requirement::new("sh", "s2", 1)];
    inst
}

/// Two roles in one shift where `e1` is first in line for the heavy role
/// `s1` by turnover and first in line for `s2` by workload, so no team
/// honours every preference.
pub fn conflict_scenario() -> RosterInstance {
    let mut inst = RosterInstance::new(Parameters::default());
    inst.skills = vec![Skill::new("s1").heavy(), Skill::new("s2")];
    let mut e1 = Employee::new("e1", &["s1", "s2"]);
    e1.history.weekly_hours = 10;
    e1.history.last_allocation.insert("s1".into(), date(2024, 1, 2));
    let mut e2 = Employee::new("e2", &["s1", "s2"]);
    e2.history.weekly_hours = 20;
    e2.history.last_allocation.insert("s1".into(), date(2024, 3, 1));
    let mut e3 = Employee::new("e3", &["s2"]);
    e3.history.weekly_hours = 20;
    inst.employees = vec![e1, e2, e3];
    inst.shifts = vec![Shift::new("sh", 6)];
    inst.requirements = vec![Requirement::new("sh", "s1", 1), Requirement::new("sh", "s2", 1)];
    inst
}

/// One heavy role `sk` in shift `sh`, with three candidates whose last
/// allocations are ordered `e1 < e2 < e3`.
pub fn turnover_round() -> RosterInstance {
    let mut inst = RosterInstance::new(Parameters::default());
    inst.skills = vec![Skill::new("sk").heavy()];
    inst.employees = ["e1", "e2", "e3"]
        .iter()
        .enumerate()
        .map(|(i, id)| {
            let mut e = Employee::new(id, &["sk"]);
            e.history.last_allocation.insert("sk".into(), date(2024, 3, 1 + i as u32));
            e
        })
        .collect();
    inst.shifts = vec![Shift::new("sh", 6)];
    inst.requirements = vec![Requirement::new("sh", "sk", 1)];
    inst
}

/// Two consecutive six-hour shifts linked as a double shift.
pub fn double_shift() -> RosterInstance {
    let mut inst = RosterInstance::new(Parameters::default());
    inst.skills = vec![Skill::new("crane").heavy(), Skill::new("lasher")];
    let mut staff = Vec::new();
    for (i, (skills, hours, overtime)) in [
        (&["crane", "lasher"][..], 12, 0),
        (&["crane", "lasher"][..], 20, 0),
        (&["lasher"][..], 16, 0),
        (&["crane"][..], 40, 4),
        (&["lasher"][..], 8, 0),
    ]
    .into_iter()
    .enumerate()
    {
        let mut e = Employee::new(&format!("d{}", i + 1), skills);
        e.history.weekly_hours = hours;
        e.history.week_overtime_hours = overtime;
        e.history.last_allocation.insert("crane".into(), date(2024, 2, 1 + i as u32));
        staff.push(e);
    }
    inst.employees = staff;
    let start = date(2024, 3, 4).and_hms_opt(6, 0, 0).expect("valid time");
    inst.shifts = vec![
        Shift::new("2024-03-04T06:00", 6).starting(start),
        Shift::new("2024-03-04T12:00", 6).starting(start + chrono::Duration::hours(6)).after("2024-03-04T06:00"),
    ];
    inst.requirements = vec![
        Requirement::new("2024-03-04T06:00", "crane", 1),
        Requirement::new("2024-03-04T12:00", "crane", 1),
        Requirement::new("2024-03-04T12:00", "lasher", 1),
    ];
    inst.double_shifts = vec![DoubleShiftLink { small: "2024-03-04T06:00".into(), big: "2024-03-04T12:00".into() }];
    inst
}
