use num_bigint::BigInt;
use proptest::prelude::*;

use dicho_core::bench::generate;
use dicho_core::engine::{bd_dichotomy, dummy_dichotomy, final_filter, inflate_balloon, run, Algorithm};
use dicho_core::oracle::{enumerate_outcomes, instance_ysn1, pareto_filter};
use dicho_core::solvers::{dominates, ProblemKind};
use dicho_core::{EngineConfig, Instance, RunStats, WeightedSumOracle};

fn instance() -> impl Strategy<Value = Instance> {
    (any::<bool>(), 2usize..=4, any::<u64>()).prop_map(|(ap, p, seed)| {
        let raw = if ap {
            generate(ProblemKind::Assignment, p, 3 + (seed % 3) as usize, seed)
        } else {
            generate(ProblemKind::Knapsack, p, 6 + (seed % 6) as usize, seed)
        };
        Instance::canonicalize(raw.unwrap()).unwrap()
    })
}

fn big(y: &[i64]) -> Vec<BigInt> {
    y.iter().map(|&v| BigInt::from(v)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn both_algorithms_match_enumeration(inst in instance()) {
        let want = instance_ysn1(&inst).unwrap();
        for cfg in [EngineConfig::exact(), EngineConfig::float()] {
            prop_assert_eq!(dummy_dichotomy(&inst, &cfg).unwrap().outcomes(), want.clone());
            prop_assert_eq!(bd_dichotomy(&inst, &cfg).unwrap().outcomes(), want.clone());
        }
    }

    #[test]
    fn found_points_are_nondominated(inst in instance()) {
        let all: Vec<Vec<i64>> = enumerate_outcomes(&inst).unwrap().into_iter().map(|o| o.y).collect();
        let front = pareto_filter(&all);
        let r = bd_dichotomy(&inst, &EngineConfig::exact()).unwrap();
        for y in r.outcomes() {
            prop_assert!(front.contains(&y));
            prop_assert!(!all.iter().any(|z| dominates(z, &y)));
        }
    }

    #[test]
    fn certificates_are_optimal(inst in instance()) {
        let r = dummy_dichotomy(&inst, &EngineConfig::exact()).unwrap();
        prop_assert!(!r.certificates.is_empty());
        for c in &r.certificates {
            let mut stats = RunStats::default();
            let best = inst.solve(&c.weight, &mut stats).unwrap();
            prop_assert_eq!(c.weight.dot_exact(&big(&best.y)), c.weight.dot_exact(&big(&c.point)));
        }
    }

    #[test]
    fn final_filter_is_idempotent(
        pts in proptest::collection::vec(proptest::collection::vec(-20i64..=20, 3), 1..15)
    ) {
        let once = final_filter(&pts).unwrap();
        prop_assert_eq!(final_filter(&once).unwrap(), once.clone());
        for y in &once {
            prop_assert!(pts.contains(y));
        }
    }

    #[test]
    fn balloon_contains_the_frontier(inst in instance()) {
        let want = instance_ysn1(&inst).unwrap();
        if let Ok(r) = run(&inst, Algorithm::Balloon, &EngineConfig::exact(), true) {
            let got = r.outcomes();
            for y in &want {
                prop_assert!(got.contains(y));
            }
        }
    }
}

#[test]
fn final_filter_drops_a_midpoint() {
    let pts = vec![vec![0, 4], vec![2, 2], vec![4, 0]];
    assert_eq!(final_filter(&pts).unwrap(), vec![vec![0, 4], vec![4, 0]]);
}

#[test]
fn balloon_rejects_flat_start() {
    let inst = Instance::canonicalize(generate(ProblemKind::Assignment, 3, 4, 3).unwrap()).unwrap();
    let flat = vec![vec![1, 1, 1], vec![2, 2, 2]];
    assert!(inflate_balloon(&inst, &flat, &EngineConfig::exact()).is_err());
    assert_eq!(inst.num_objectives(), 3);
}
