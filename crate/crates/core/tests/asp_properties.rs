mod common;

use std::collections::BTreeMap;

use portroster::asp::{
    check_safety, enumerate_answer_sets, enumerate_exhaustive, eval_set, ground_naive, ground_program, is_model,
    parse_program, reduct, simulate_constraints, solve_ground, Const, GroundAtom, GroundPair, GroundSet,
    Interpretation, SolveOptions,
};
use proptest::prelude::*;

fn subsets(m: &Interpretation) -> impl Iterator<Item = Interpretation> + '_ {
    let atoms: Vec<&GroundAtom> = m.iter().collect();
    let n = atoms.len();
    (0..(1u64 << n) - 1).map(move |mask| {
        atoms.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, a)| (*a).clone()).collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn guided_matches_exhaustive(seed in any::<u64>()) {
        let p = common::random_program(seed);
        let guided = enumerate_answer_sets(&p, None).unwrap();
        let oracle = enumerate_exhaustive(&p).unwrap();
        prop_assert_eq!(guided, oracle, "program:\n{}", p);
    }

    #[test]
    fn answer_sets_are_minimal_models(seed in any::<u64>()) {
        let p = common::random_program(seed);
        let ground = ground_program(&p).unwrap();
        for m in enumerate_answer_sets(&p, None).unwrap() {
            prop_assert!(is_model(&m, &ground));
            if m.len() <= 12 {
                let reduced = reduct(&ground, &m);
                for n in subsets(&m) {
                    prop_assert!(!is_model(&n, &reduced), "{} is smaller than {}", n, m);
                }
            }
        }
    }

    #[test]
    fn optimized_grounding_is_transparent(seed in any::<u64>()) {
        let p = common::random_program(seed);
        let naive = ground_naive(&p).unwrap();
        prop_assume!(naive.rules.len() <= 10_000);
        let via_naive = solve_ground(&naive, &SolveOptions::default()).unwrap().answer_sets;
        let via_optimized = enumerate_answer_sets(&p, None).unwrap();
        prop_assert_eq!(via_naive, via_optimized);
    }

    #[test]
    fn constraint_simulation_is_equivalent(seed in any::<u64>()) {
        let p = common::random_program(seed);
        let (q, co) = simulate_constraints(&p);
        let co = co.to_ground().unwrap();
        let original = enumerate_answer_sets(&p, None).unwrap();
        let simulated = enumerate_answer_sets(&q, None).unwrap();
        prop_assert!(simulated.iter().all(|m| !m.contains(&co)));
        prop_assert_eq!(original, simulated);
    }

    #[test]
    fn safe_programs_ground_without_errors(seed in any::<u64>()) {
        let p = common::random_program(seed);
        prop_assert!(check_safety(&p).is_empty());
        prop_assert!(ground_program(&p).is_ok());
        prop_assert!(ground_naive(&p).is_ok());
    }

    #[test]
    fn printed_programs_reparse(seed in any::<u64>()) {
        let p = common::random_program(seed);
        let q = parse_program(&p.to_string()).unwrap();
        prop_assert_eq!(&p, &q);
        let g = ground_program(&p).unwrap();
        let reparsed = ground_program(&parse_program(&g.to_string()).unwrap()).unwrap();
        prop_assert_eq!(g, reparsed);
    }

    #[test]
    fn eval_set_is_monotone(
        pairs in prop::collection::vec((0i64..3, 0i64..3, prop::collection::vec(0usize..4, 0..3)), 0..8),
        small in prop::collection::btree_set(0usize..4, 0..4),
        extra in prop::collection::btree_set(0usize..4, 0..4),
    ) {
        let atom = |i: usize| GroundAtom::new(["a", "b", "c", "d"][i], vec![]);
        let set = GroundSet::new(pairs.iter().map(|(x, y, conj)| GroundPair {
            consts: vec![Const::Int(*x), Const::Int(*y)],
            conj: conj.iter().map(|&i| atom(i)).collect(),
        }));
        let i: Interpretation = small.iter().map(|&k| atom(k)).collect();
        let j: Interpretation = small.union(&extra).map(|&k| atom(k)).collect();
        let bag = |v: Vec<Const>| v.into_iter().fold(BTreeMap::new(), |mut m, c| { *m.entry(c).or_insert(0) += 1; m });
        let bi = bag(eval_set(&set, &i));
        let bj = bag(eval_set(&set, &j));
        for (c, n) in bi {
            prop_assert!(bj.get(&c).copied().unwrap_or(0) >= n);
        }
    }
}

#[test]
fn unsafe_programs_are_rejected_by_the_grounder() {
    for src in ["p(X) :- not q(X).", "c(X) :- q(X,Y,V), #min{Z: a(Z), b(Z,V)} > T.", "p(X)."] {
        let p = parse_program(src).unwrap();
        assert!(!check_safety(&p).is_empty());
        assert!(ground_program(&p).is_err());
    }
}
