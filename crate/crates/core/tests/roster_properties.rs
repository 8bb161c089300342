use std::collections::BTreeSet;

use portroster::asp::{parse_program, Program};
use portroster::synthetic::random_instance;
use portroster::*;
use proptest::prelude::*;

const ALL: usize = 256;

fn options(alternatives: usize) -> EngineOptions {
    EngineOptions { alternatives, ..Default::default() }
}

fn candidates(inst: &RosterInstance) -> Vec<Triple> {
    let mut out = Vec::new();
    for r in &inst.requirements {
        for e in &inst.employees {
            if can_be_assigned(inst, &e.id, &r.shift, &r.skill) {
                out.push(Triple::new(&e.id, &r.shift, &r.skill));
            }
        }
    }
    out
}

fn brute_force(inst: &RosterInstance, prefs: Preferences) -> Option<BTreeSet<Assignment>> {
    let c = candidates(inst);
    if c.len() > 14 {
        return None;
    }
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << c.len()) {
        let t: Assignment = c.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, t)| t.clone()).collect();
        if audit(inst, &t, prefs).is_empty() {
            out.insert(t);
        }
    }
    Some(out)
}

fn all_teams(out: &SolveOutcome) -> BTreeSet<Assignment> {
    out.assignment.iter().cloned().chain(out.alternatives.iter().cloned()).collect()
}

/// Any combination of employees, required shifts and known skills,
/// eligible or not.
fn arbitrary_team(inst: &RosterInstance, picks: &[(usize, usize, usize)]) -> Assignment {
    picks
        .iter()
        .map(|&(e, sh, sk)| {
            let e = &inst.employees[e % inst.employees.len()];
            let sh = &inst.shifts[sh % inst.shifts.len()];
            let sk = &inst.skills[sk % inst.skills.len()];
            Triple::new(&e.id, &sh.id, &sk.id)
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solver_agrees_with_brute_force(seed in any::<u64>()) {
        let inst = random_instance(seed, 6, 2, 3);
        let Some(strict) = brute_force(&inst, Preferences::Strict) else { return Ok(()) };
        let prioritized = brute_force(&inst, Preferences::Prioritized).unwrap();
        let s = solve(&inst, ModeRequest::Strict, &options(ALL)).unwrap();
        let p = solve(&inst, ModeRequest::Prioritized, &options(ALL)).unwrap();
        prop_assert_eq!(all_teams(&s), strict.clone());
        prop_assert_eq!(all_teams(&p), prioritized.clone());
        prop_assert!(strict.is_subset(&prioritized));
        let auto = solve(&inst, ModeRequest::Auto, &options(1)).unwrap();
        let expected = if !strict.is_empty() {
            SolveStatus::Feasible
        } else if !prioritized.is_empty() {
            SolveStatus::Degraded
        } else {
            SolveStatus::Infeasible
        };
        prop_assert_eq!(auto.status, expected);
    }

    #[test]
    fn solved_teams_hold_up(seed in any::<u64>()) {
        let inst = random_instance(seed, 10, 3, 4);
        let out = solve(&inst, ModeRequest::Auto, &options(3)).unwrap();
        for t in all_teams(&out) {
            prop_assert!(audit(&inst, &t, Preferences::Ignored).is_empty());
            prop_assert!(inst.pre_assignments.iter().all(|p| t.triples.contains(p)));
            match out.status {
                SolveStatus::Feasible => {
                    prop_assert!(audit(&inst, &t, Preferences::Strict).is_empty());
                    prop_assert!(check_team(&inst, &t).unwrap());
                }
                SolveStatus::Degraded => {
                    prop_assert!(audit(&inst, &t, Preferences::Prioritized).is_empty());
                    prop_assert!(check_team_prioritized(&inst, &t).unwrap());
                    let report = explain_team(&inst, &t).unwrap();
                    prop_assert!(report.violations.iter().all(|v| v.kind.is_preference()));
                    prop_assert!(report.violations.iter().all(|v| v.kind != ViolationKind::Turnover));
                }
                other => prop_assert!(false, "team with status {}", other),
            }
        }
        if let Some(t) = &out.assignment {
            let waived: BTreeSet<String> = out.waived.iter().map(|v| v.to_string()).collect();
            let explained: BTreeSet<String> = explain_team(&inst, t).unwrap().violations.iter().map(|v| v.to_string()).collect();
            prop_assert_eq!(waived, explained);
        }
    }

    #[test]
    fn explanations_match_the_audit(seed in any::<u64>(), picks in proptest::collection::vec((0usize..10, 0usize..3, 0usize..4), 0..10)) {
        let inst = random_instance(seed, 10, 3, 4);
        let team = arbitrary_team(&inst, &picks);
        let report = explain_team(&inst, &team).unwrap();
        prop_assert_eq!(&report.violations, &audit(&inst, &team, Preferences::Strict));
        prop_assert_eq!(report.consistent, report.violations.is_empty());
        prop_assert_eq!(check_team(&inst, &team).unwrap(), report.consistent);
        prop_assert_eq!(check_team_prioritized(&inst, &team).unwrap(), audit(&inst, &team, Preferences::Prioritized).is_empty());
    }

    #[test]
    fn crucial_counts_are_emitted(seed in any::<u64>()) {
        let inst = random_instance(seed, 10, 3, 4);
        let (program, names) = instance_to_facts(&inst).unwrap();
        let text = program.to_string();
        for e in &inst.employees {
            let n = e.skills.iter().filter(|s| inst.skill(s).is_some_and(|k| k.crucial)).count();
            prop_assert_eq!(derive_crucial_counts(&inst)[&e.id], n);
            let expected = format!("hasCrucial({},{}).", names.employee(&e.id), n);
            prop_assert!(text.lines().any(|l| l.trim() == expected), "missing {}", expected);
        }
    }

    #[test]
    fn facts_and_encodings_reparse(seed in any::<u64>(), double in any::<bool>()) {
        let inst = random_instance(seed, 10, 3, 4);
        let (facts, _) = instance_to_facts(&inst).unwrap();
        let back: Program = parse_program(&facts.to_string()).unwrap();
        prop_assert_eq!(back, facts);
        for mode in [EncodingMode::Strict, EncodingMode::Prioritized, EncodingMode::Check, EncodingMode::Explain] {
            let p = build_encoding(mode, double);
            prop_assert_eq!(parse_program(&p.to_string()).unwrap(), p);
        }
    }

    #[test]
    fn containment_holds_for_double_shifts(drop in proptest::collection::btree_set(0usize..5, 0..3), extra in 0u32..2) {
        let mut inst = fixtures::double_shift();
        let ids: Vec<String> = inst.employees.iter().map(|e| e.id.clone()).collect();
        inst.employees.retain(|e| !drop.iter().any(|&d| ids[d] == e.id));
        inst.requirements[0].count += extra;
        let out = solve(&inst, ModeRequest::Auto, &options(16)).unwrap();
        for t in all_teams(&out) {
            prop_assert!(t.staff("2024-03-04T06:00").is_subset(&t.staff("2024-03-04T12:00")));
            prop_assert!(audit(&inst, &t, Preferences::Ignored).is_empty());
        }
        if let Some(expected) = brute_force(&inst, Preferences::Prioritized) {
            prop_assert_eq!(out.assignment.is_some(), !expected.is_empty());
        }
    }
}
