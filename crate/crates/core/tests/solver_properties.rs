use proptest::prelude::*;
use rainbow_core::generators::{random_family, random_partite_family};
use rainbow_core::solver::{
    brute_force_rainbow, find_rainbow, matching_number, NuValue, OrderHeuristic, SolverConfig, Verdict,
};
use rainbow_core::{binomial, validate_rainbow, Family, Hypergraph};

/// A uniform random family with each member filling `fill` of its edge pool.
fn family(n: u32, ks: &[usize], fill: &[f64], seed: u64) -> Family {
    let sizes: Vec<usize> = ks
        .iter()
        .zip(fill)
        .map(|(&k, &f)| (binomial(n as u64, k as u64).unwrap() as f64 * f).round() as usize)
        .collect();
    random_family(n, ks, &sizes, false, seed).unwrap()
}

fn uniform_case() -> impl Strategy<Value = Family> {
    (4u32..=8, prop::collection::vec((2usize..=3, 0.0f64..0.6), 2..=3), any::<u64>()).prop_map(|(n, spec, seed)| {
        let ks: Vec<usize> = spec.iter().map(|s| s.0).collect();
        let fill: Vec<f64> = spec.iter().map(|s| s.1).collect();
        family(n, &ks, &fill, seed)
    })
}

const HEURISTICS: [OrderHeuristic; 3] =
    [OrderHeuristic::InputOrder, OrderHeuristic::SmallestFamilyFirst, OrderHeuristic::MinDegreeVertex];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn search_agrees_with_enumeration(f in uniform_case()) {
        prop_assume!(f.members().iter().map(|m| m.len() as u128).product::<u128>() <= 100_000);
        let out = find_rainbow(&f, &SolverConfig::default());
        let oracle = brute_force_rainbow(&f).unwrap();
        prop_assert_eq!(out.verdict.is_found(), oracle.is_some());
        if let Verdict::Found(m) = &out.verdict {
            prop_assert_eq!(validate_rainbow(&f, m), Ok(()));
        }
    }

    #[test]
    fn verdict_ignores_heuristic_and_seed(f in uniform_case(), seed in any::<u64>()) {
        let base = find_rainbow(&f, &SolverConfig::default()).verdict.is_found();
        for order in HEURISTICS {
            let cfg = SolverConfig { node_budget: None, order, seed };
            let v = find_rainbow(&f, &cfg).verdict;
            prop_assert_eq!(v.is_found(), base);
            if let Verdict::Found(m) = &v {
                prop_assert_eq!(validate_rainbow(&f, m), Ok(()));
            }
        }
    }

    #[test]
    fn adding_edges_keeps_a_matching(f in uniform_case(), extra_seed in any::<u64>()) {
        prop_assume!(find_rainbow(&f, &SolverConfig::default()).verdict.is_found());
        // superset: union each member with a fresh random sample of the same uniformity
        let ks: Vec<usize> = f.members().iter().map(Hypergraph::uniformity).collect();
        let fresh = family(f.universe(), &ks, &vec![0.3; ks.len()], extra_seed);
        let mut bigger = f.clone();
        for (i, m) in fresh.members().iter().enumerate() {
            let mut h = bigger.member(i).clone();
            for e in m.edges() {
                if let Some(g) = h.with_edge(e.clone()) {
                    h = g;
                }
            }
            bigger = bigger.with_member(i, h).unwrap();
        }
        prop_assert!(find_rainbow(&bigger, &SolverConfig::default()).verdict.is_found());
    }

    #[test]
    fn matching_number_bridges_to_copies(n in 4u32..=8, k in 2usize..=3, fill in 0.02f64..0.5, seed in any::<u64>()) {
        let h = family(n, &[k], &[fill], seed).into_members().remove(0);
        let nu = match matching_number(&h, &SolverConfig::default()).value {
            NuValue::Exact(v) => v,
            NuValue::Bounds { .. } => unreachable!("no budget"),
        };
        for t in 1..=4 {
            let copies = Family::repeated(h.clone(), t).unwrap();
            prop_assert_eq!(nu >= t, find_rainbow(&copies, &SolverConfig::default()).verdict.is_found(), "t = {}", t);
        }
    }

    #[test]
    fn partite_families_agree_with_enumeration(n in 2u32..=4, t in 2usize..=3, fill in 0.05f64..0.9, seed in any::<u64>()) {
        let size = ((n * n) as f64 * fill).round() as usize;
        let sets = vec![vec![1, 2]; t];
        let f = random_partite_family(n, 2, &sets, &vec![size; t], seed).unwrap();
        let out = find_rainbow(&f, &SolverConfig::default());
        prop_assert_eq!(out.verdict.is_found(), brute_force_rainbow(&f).unwrap().is_some());
    }
}

#[test]
fn budget_verdict_is_separate() {
    let f = family(8, &[3, 3, 3], &[0.1, 0.1, 0.1], 5);
    let out = find_rainbow(&f, &SolverConfig::with_budget(1));
    assert!(matches!(out.verdict, Verdict::BudgetExceeded | Verdict::Found(_)));
    assert!(out.nodes <= 1);
}
