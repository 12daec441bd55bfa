mod common;

use std::collections::BTreeMap;

use k3bound::classify::{classify_small_p5, enumerate, ConstraintProblem};
use k3bound::orchestrator::prove_main;
use k3bound::wps::{x12_15, x21, x28};
use k3bound::{invert_p2_p3, BasketSet, Rational};

fn solution_pairs(problem: &ConstraintProblem) -> Vec<(Vec<(i64, i64)>, Rational)> {
    let report = enumerate(problem).unwrap();
    let mut got: Vec<_> = report.solutions.iter().map(|s| (s.baskets.pairs(), s.k3.clone())).collect();
    got.sort();
    got
}

/// Every `chi = 0` problem with `sigma <= 4`, against multisets of up to four baskets.
#[test]
fn agrees_with_brute_force_up_to_four_baskets() {
    let filter_sets = [BTreeMap::new(), BTreeMap::from([(4, 3), (5, 4)]), BTreeMap::from([(4, 4)])];
    let mut nonempty = 0;
    for (p2, p3s) in [(1, 1..=5), (2, 6..=10)] {
        for p3 in p3s {
            for filters in &filter_sets {
                for r_max in [7, 10] {
                    let problem = ConstraintProblem::new(0, p2, p3, filters.clone(), r_max);
                    let want = common::brute_force(0, p2, p3, filters, r_max, 4);
                    assert_eq!(solution_pairs(&problem), want, "p2 {p2} p3 {p3} {filters:?} r_max {r_max}");
                    nonempty += usize::from(!want.is_empty());
                }
            }
        }
    }
    assert!(nonempty > 5, "oracle grid too thin: {nonempty} non-empty cases");
}

#[test]
fn negative_chi_agrees_with_brute_force() {
    // P_2 + 3 chi >= 1 needs P_2 >= 4
    for p3 in 6..=10 {
        let p2 = 4;
        let problem = ConstraintProblem::new(-1, p2, p3, BTreeMap::new(), 8);
        assert_eq!(solution_pairs(&problem), common::brute_force(-1, p2, p3, &BTreeMap::new(), 8, 4));
    }
}

#[test]
fn solutions_satisfy_the_linear_invariants() {
    for (p2, p3) in [(1, 2), (1, 3), (2, 7), (2, 9)] {
        let report = enumerate(&ConstraintProblem::new(0, p2, p3, BTreeMap::new(), 20)).unwrap();
        let inv = invert_p2_p3(p2, p3, 0).unwrap();
        assert_eq!(report.sigma, inv.sigma);
        for s in &report.solutions {
            assert_eq!(s.baskets.sigma(), inv.sigma);
            assert_eq!(s.baskets.tau(), &s.k3 + &inv.tau_offset);
            assert!(s.k3.is_positive());
        }
    }
}

#[test]
fn small_p5_volumes_are_at_most_one_half() {
    let report = classify_small_p5();
    for s in &report.solutions {
        assert!(s.k3.is_positive() && s.k3 <= Rational::new(1, 2));
    }
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    let problem = ConstraintProblem::new(0, 1, 2, BTreeMap::from([(4, 3), (5, 4)]), 50);
    let parallel = serde_json::to_string(&enumerate(&problem).unwrap()).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let serial = pool.install(|| serde_json::to_string(&enumerate(&problem).unwrap()).unwrap());
    assert_eq!(parallel, serial);
}

#[test]
fn weighted_examples_appear_among_the_cases() {
    let report = classify_small_p5();
    let examples = [
        (x28(), vec![(2, 1), (3, 1), (5, 1)]),
        (x21(), vec![(4, 1), (5, 2)]),
        (x12_15(), vec![(2, 1), (7, 2)]),
    ];
    for (x, pairs) in examples {
        let volume = x.canonical_volume().unwrap();
        let baskets = BasketSet::from_pairs(&pairs).unwrap();
        assert!(x.reid_consistency(&baskets, 0, 20).unwrap().pass);
        assert!(
            report.solutions.iter().any(|s| s.baskets == baskets && s.k3 == volume),
            "{pairs:?} with volume {volume} not classified"
        );
    }
}

#[test]
fn global_bound_is_the_branch_minimum() {
    let main = prove_main();
    let min = main.branches.iter().map(|b| b.bound.clone()).min().unwrap();
    assert_eq!(main.global_bound, min);
}
