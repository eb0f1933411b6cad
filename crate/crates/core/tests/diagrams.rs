// SPDX-License-Identifier: Apache-2.0

mod common;

use common::{bit, eval, min_robdd_size, paths_consistent, robdd_size, shannon};
use infoengine::corpus::{random_distribution, random_function, rng_from_seed};
use infoengine::dd::build_ordered;
use infoengine::entropy_dd::Frontier;
use infoengine::info::InputDistribution;
use infoengine::{
    build_entropy_dd, dd_to_truth_table, exhaustive_best_ordering, function_entropy, partial_conditional_entropy,
    reduce, DdMode, EntropyDdBuilder, TruthTable,
};
use proptest::prelude::*;
use rand::Rng;

const TOL: f64 = 1e-9;

/// `H(f|DD)` straight from the original column: every frontier path weighs
/// the entropy of `f` over the rows that reach it.
fn frontier_oracle(f: &TruthTable, frontier: &Frontier, weights: &[f64]) -> f64 {
    let n = f.num_inputs();
    frontier
        .entries
        .iter()
        .map(|e| {
            let bound: Vec<(usize, bool)> = e
                .prefix
                .bindings()
                .iter()
                .map(|(name, v)| (f.input_index(name).unwrap(), *v))
                .collect();
            let rows: Vec<usize> = (0..f.num_rows())
                .filter(|&r| bound.iter().all(|&(v, b)| bit(r, v, n) == b))
                .collect();
            let mass: f64 = rows.iter().map(|&r| weights[r]).sum();
            if mass == 0.0 {
                return 0.0;
            }
            let ones: f64 = rows.iter().filter(|&&r| f.column(0)[r]).map(|&r| weights[r]).sum();
            mass * shannon([ones / mass, 1.0 - ones / mass])
        })
        .sum()
}

fn all_n3() -> impl Iterator<Item = TruthTable> {
    (0u32..256).map(|k| TruthTable::from_column((0..8).map(|r| k >> r & 1 == 1).collect()).unwrap())
}

fn random_suite() -> Vec<(TruthTable, InputDistribution)> {
    let mut rng = rng_from_seed(2024);
    (0..200)
        .map(|_| {
            let n = rng.random_range(2..=8);
            let f = random_function(n, &mut rng);
            let d = random_distribution(n, &mut rng);
            (f, d)
        })
        .collect()
}

#[test]
fn trajectory_identity_and_monotonicity() {
    for (f, dist) in random_suite() {
        for mode in [DdMode::Ordered, DdMode::Free] {
            let (_, trace) = build_entropy_dd(&f, &dist, mode).unwrap();
            let h = function_entropy(&f, &dist).unwrap().value();
            assert!((trace.steps[0].h_f_given_dd - h).abs() <= TOL);
            for s in &trace.steps {
                assert!((s.i_f_dd + s.h_f_given_dd - h).abs() <= TOL, "step {s:?}");
            }
            for w in trace.steps.windows(2) {
                assert!(w[1].h_f_given_dd <= w[0].h_f_given_dd);
            }
            assert!(trace.final_entropy() <= TOL);
        }
    }
}

#[test]
fn builder_matches_frontier_recomputation_at_every_step() {
    let mut rng = rng_from_seed(5);
    for _ in 0..60 {
        let n = rng.random_range(1..=6);
        let f = random_function(n, &mut rng);
        let dist = random_distribution(n, &mut rng);
        let weights = dist.weights(n).unwrap();
        for mode in [DdMode::Ordered, DdMode::Free] {
            let mut b = EntropyDdBuilder::new(&f, &dist, mode).unwrap();
            loop {
                let fr = b.frontier();
                let h = b.trace().last().unwrap().h_f_given_dd;
                let recomputed = partial_conditional_entropy(&fr, &dist).unwrap().value();
                let oracle = frontier_oracle(&f, &fr, &weights);
                assert!((h - recomputed).abs() <= TOL, "{h} vs {recomputed}");
                assert!((recomputed - oracle).abs() <= TOL, "{recomputed} vs {oracle}");
                assert!((fr.total_prob() - 1.0).abs() <= 1e-9);
                if b.step().is_none() {
                    break;
                }
            }
            assert!(b.is_done());
        }
    }
}

#[test]
fn round_trip_all_three_input_functions() {
    for f in all_n3() {
        for mode in [DdMode::Ordered, DdMode::Free] {
            let (dd, _) = build_entropy_dd(&f, &InputDistribution::Uniform, mode).unwrap();
            assert_eq!(dd_to_truth_table(&dd, f.input_names()).unwrap().column(0), f.column(0));
            for row in 0..8 {
                assert_eq!(eval(&dd, row, 3), f.column(0)[row]);
            }
        }
    }
}

#[test]
fn round_trip_random_suite() {
    for (f, dist) in random_suite() {
        for mode in [DdMode::Ordered, DdMode::Free] {
            let (dd, _) = build_entropy_dd(&f, &dist, mode).unwrap();
            assert_eq!(dd_to_truth_table(&dd, f.input_names()).unwrap(), f);
        }
    }
}

#[test]
fn greedy_ordered_size_matches_oracle_and_dominates() {
    let mut equal = 0;
    for f in all_n3() {
        let (dd, _) = build_entropy_dd(&f, &InputDistribution::Uniform, DdMode::Ordered).unwrap();
        let order = dd.order().unwrap().to_vec();
        assert_eq!(dd.size(), robdd_size(f.column(0), 3, &order));
        let sweep = exhaustive_best_ordering(&f).unwrap();
        assert_eq!(sweep.best_size, min_robdd_size(f.column(0), 3));
        assert!(dd.size() >= sweep.best_size);
        equal += usize::from(dd.size() == sweep.best_size);
    }
    assert!(equal > 0);
}

#[test]
fn sweep_sizes_match_oracle() {
    let mut rng = rng_from_seed(9);
    for _ in 0..10 {
        let n = rng.random_range(2..=5);
        let f = random_function(n, &mut rng);
        let sweep = exhaustive_best_ordering(&f).unwrap();
        for entry in &sweep.sizes {
            let order: Vec<usize> = entry.order.iter().map(|name| f.input_index(name).unwrap()).collect();
            assert_eq!(entry.size, robdd_size(f.column(0), n, &order));
        }
    }
}

#[test]
fn diagrams_are_consistent_and_reduced() {
    let mut rng = rng_from_seed(17);
    for _ in 0..100 {
        let n = rng.random_range(1..=7);
        let f = random_function(n, &mut rng);
        let dist = random_distribution(n, &mut rng);
        let (ordered, _) = build_entropy_dd(&f, &dist, DdMode::Ordered).unwrap();
        let order = ordered.order().unwrap().to_vec();
        assert!(paths_consistent(&ordered, Some(&order)));
        assert!(ordered.respects_order(&order));
        assert_eq!(reduce(&ordered), ordered);
        assert_eq!(build_ordered(&f, &order).unwrap(), ordered);

        let (free, _) = build_entropy_dd(&f, &dist, DdMode::Free).unwrap();
        assert!(paths_consistent(&free, None));
        assert_eq!(reduce(&free), free);
    }
}

#[test]
fn parity_needs_a_node_per_variable_and_level() {
    // Without complement edges the reduced diagram of n-input parity has
    // 2n - 1 nodes.
    for n in 2..=6 {
        let f = TruthTable::from_fn(n, |x| x.iter().filter(|&&b| b).count() % 2 == 1).unwrap();
        let (dd, trace) = build_entropy_dd(&f, &InputDistribution::Uniform, DdMode::Ordered).unwrap();
        assert_eq!(dd.size(), 2 * n - 1);
        assert_eq!(robdd_size(f.column(0), n, &(0..n).collect::<Vec<_>>()), 2 * n - 1);
        // nothing is learned until the last level
        let flat = (1usize << (n - 1)) - 1;
        assert!(trace.steps[..=flat].iter().all(|s| s.h_f_given_dd == 1.0));
    }
}

#[test]
fn constant_and_projection() {
    let zero = TruthTable::from_column(vec![false; 8]).unwrap();
    let (dd, trace) = build_entropy_dd(&zero, &InputDistribution::Uniform, DdMode::Ordered).unwrap();
    assert_eq!(dd.size(), 0);
    assert_eq!(trace.steps.len(), 1);
    let x1 = TruthTable::from_fn(3, |x| x[0]).unwrap();
    let (dd, trace) = build_entropy_dd(&x1, &InputDistribution::Uniform, DdMode::Ordered).unwrap();
    assert_eq!(dd.size(), 1);
    assert_eq!(trace.steps.len(), 2);
}

#[test]
fn dot_output_lists_every_node() {
    let f = TruthTable::from_fn(3, |x| (x[0] && x[1]) || x[2]).unwrap();
    let (dd, _) = build_entropy_dd(&f, &InputDistribution::Uniform, DdMode::Ordered).unwrap();
    let dot = dd.to_dot();
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("style=dashed").count(), dd.size());
    assert_eq!(dot.matches("style=solid").count(), dd.size());
}

proptest! {
    #[test]
    fn build_ordered_matches_oracle(n in 1usize..=6, seed in any::<u64>(), perm_seed in any::<u64>()) {
        let f = random_function(n, &mut rng_from_seed(seed));
        let mut order: Vec<usize> = (0..n).collect();
        let mut rng = rng_from_seed(perm_seed);
        for i in (1..n).rev() {
            order.swap(i, rng.random_range(0..=i));
        }
        let dd = build_ordered(&f, &order).unwrap();
        prop_assert_eq!(dd.size(), robdd_size(f.column(0), n, &order));
        prop_assert!(paths_consistent(&dd, Some(&order)));
        for row in 0..f.num_rows() {
            prop_assert_eq!(eval(&dd, row, n), f.column(0)[row]);
        }
    }
}
