use rainbow_core::constructive::{
    bipartite_greedy, partite_hypothesis, partite_recursive, verify_greedy_trace, verify_recursion_trace,
};
use rainbow_core::generators::random_partite_family;
use rainbow_core::solver::{find_rainbow, SolverConfig};
use rainbow_core::threshold;
use rainbow_core::validate_rainbow;

const INSTANCES: u64 = 1000;

/// Members spread over `r`-subsets of the `k` parts in rotation.
fn part_sets(k: u32, r: u32, t: usize) -> Vec<Vec<u32>> {
    (0..t).map(|i| (0..r).map(|j| (i as u32 + j) % k + 1).collect()).collect()
}

fn sorted(mut v: Vec<u32>) -> Vec<u32> {
    v.sort_unstable();
    v
}

#[test]
fn greedy_never_fails_above_threshold() {
    for t in 1..=3usize {
        for n in [t as u32 + 1, t as u32 + 3] {
            let size = (threshold::partite(n as u64, 2, t as u64).unwrap() + 1) as usize;
            let sets = vec![vec![1, 2]; t];
            for seed in 0..INSTANCES {
                let f = random_partite_family(n, 2, &sets, &vec![size; t], seed).unwrap();
                let out = bipartite_greedy(&f).unwrap_or_else(|e| panic!("t={t} n={n} seed={seed}: {e}"));
                assert_eq!(validate_rainbow(&f, &out.matching), Ok(()));
                assert_eq!(verify_greedy_trace(&f, &out.trace), Ok(()));
            }
        }
    }
}

#[test]
fn recursion_never_fails_above_threshold() {
    for k in 2..=3u32 {
        for r in 2..=k {
            for t in 1..=3usize {
                let lo = (3 * (k - 1) * (t as u32 - 1)).max(t as u32 + 1);
                for n in [lo, lo + 2] {
                    let size = (threshold::partite(n as u64, r, t as u64).unwrap() + 1) as usize;
                    let sets: Vec<Vec<u32>> = part_sets(k, r, t).into_iter().map(sorted).collect();
                    for seed in 0..INSTANCES {
                        let f = random_partite_family(n, k, &sets, &vec![size; t], seed).unwrap();
                        assert!(partite_hypothesis(&f).unwrap());
                        let out = partite_recursive(&f)
                            .unwrap_or_else(|e| panic!("k={k} r={r} t={t} n={n} seed={seed}: {e}"));
                        assert_eq!(validate_rainbow(&f, &out.matching), Ok(()));
                        assert_eq!(verify_recursion_trace(&f, &out.events), Ok(()));
                    }
                }
            }
        }
    }
}

#[test]
fn constructive_success_implies_search_success() {
    // below the size hypothesis the algorithms may fail; when they do not,
    // the exact search must agree
    for seed in 0..300 {
        let f = random_partite_family(4, 3, &[vec![1, 2, 3], vec![1, 2, 3]], &[10, 10], seed).unwrap();
        if let Ok(out) = partite_recursive(&f) {
            assert_eq!(validate_rainbow(&f, &out.matching), Ok(()));
            assert!(find_rainbow(&f, &SolverConfig::default()).verdict.is_found());
        }
        let g = random_partite_family(4, 2, &vec![vec![1, 2]; 3], &[6, 6, 6], seed).unwrap();
        if let Ok(out) = bipartite_greedy(&g) {
            assert_eq!(validate_rainbow(&g, &out.matching), Ok(()));
            assert!(find_rainbow(&g, &SolverConfig::default()).verdict.is_found());
        }
    }
}
