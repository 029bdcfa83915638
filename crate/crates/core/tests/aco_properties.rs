mod common;

use common::one_per_cluster;
use gtsp_core::aco::{
    choose_next, global_update, local_update, run, transition_distribution, AcoParams, AntState, Colony,
    PheromoneMatrix, Variant,
};
use gtsp_core::construct::{nn_reference_cost, Tour};
use gtsp_core::exact::{exact_solve, DEFAULT_SEQUENCE_CAP};
use gtsp_core::generate::{random_costs, random_euclidean};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn between(x: f64, a: f64, b: f64) -> bool {
    let (lo, hi) = (a.min(b), a.max(b));
    x >= lo * (1.0 - 1e-12) && x <= hi * (1.0 + 1e-12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn local_update_is_a_convex_combination(
        old in 1e-6f64..1.0, rho in 0.01f64..0.99, l_plus in 1u64..10_000, n in 2usize..200,
    ) {
        let mut ph = PheromoneMatrix::with_bounds(n, 1e-3, 10.0);
        ph.set(0, 1, old);
        local_update(&mut ph, (0, 1), rho, l_plus, n, Variant::Racs, true);
        let deposit = 1.0 / (n as f64 * l_plus as f64);
        prop_assert!(between(ph.get(0, 1), old, deposit));
        prop_assert!(ph.get(0, 1) > 0.0);
        prop_assert_eq!(ph.get(1, 0), ph.get(0, 1));

        ph.set(0, 1, old);
        local_update(&mut ph, (0, 1), rho, l_plus, n, Variant::Acs, false);
        prop_assert!(between(ph.get(0, 1), old, 1e-3));
    }

    #[test]
    fn global_update_is_a_convex_combination(old in 1e-6f64..1.0, rho in 0.01f64..0.99, cost in 1u64..10_000) {
        let mut ph = PheromoneMatrix::with_bounds(3, old, 10.0);
        let best = Tour { nodes: vec![0, 2], cost };
        global_update(&mut ph, &best, rho, true);
        prop_assert!(between(ph.get(0, 2), old, 1.0 / cost as f64));
        prop_assert!(between(ph.get(2, 0), old, 1.0 / cost as f64));
        prop_assert_eq!(ph.get(0, 1), old);
    }
}

#[test]
fn distribution_normalizes_on_random_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..1000u64 {
        let n = rng.gen_range(4..25);
        let p = rng.gen_range(2..=n.min(8));
        let inst = random_costs(n, p, rng.gen_range(1..500), case).unwrap();
        let mut ph = PheromoneMatrix::with_bounds(n, 1e-3, 1.0);
        for i in 0..n {
            for j in 0..n {
                ph.set(i, j, rng.gen_range(1e-6..1.0));
            }
        }
        let mut ant = AntState::new(case, 0);
        ant.place_randomly(&inst);
        // walk a random number of steps to get a partial tabu list
        let steps = rng.gen_range(0..p - 1);
        let params = AcoParams { beta: rng.gen_range(0.0..6.0), ..AcoParams::default() };
        for _ in 0..steps {
            let next = choose_next(&mut ant, &ph, &inst, &params).unwrap();
            ant.move_to(&inst, next);
        }
        let d = transition_distribution(&ant, &ph, &inst, params.beta);
        let total: f64 = d.iter().map(|x| x.1).sum();
        assert!((total - 1.0).abs() <= 1e-12, "case {case}: {total}");
        assert!(d.iter().all(|&(v, _)| !ant.visited_clusters[inst.cluster_of(v)]));
    }
}

#[test]
fn ten_thousand_constructions_are_valid_tours() {
    let mut built = 0;
    let mut seed = 0;
    while built < 10_000 {
        let inst = random_euclidean(12 + (seed as usize % 20), 3 + (seed as usize % 6), seed).unwrap();
        let mut colony = Colony::new(&inst, AcoParams::racs().with_iterations(25).with_seed(seed)).unwrap();
        for _ in 0..25 {
            let it = colony.step().unwrap();
            for t in &it.ant_tours {
                assert!(one_per_cluster(&inst, &t.nodes), "{:?}", t.nodes);
                assert_eq!(t.cost, common::cycle(&inst, &t.nodes));
                built += 1;
            }
        }
        seed += 1;
    }
}

#[test]
fn trace_is_non_increasing_and_bounded_by_nn() {
    for seed in 0..10 {
        let inst = random_euclidean(30, 7, seed).unwrap();
        for variant in [Variant::Acs, Variant::Racs] {
            let params = AcoParams { variant, ..AcoParams::racs().with_iterations(60).with_seed(seed) };
            let r = run(&inst, &params).unwrap();
            assert_eq!(r.trace.len(), 60);
            assert!(r.trace.windows(2).all(|w| w[1] <= w[0]));
            assert!(r.cost <= nn_reference_cost(&inst).0);
            assert_eq!(*r.trace.last().unwrap(), r.cost);
            assert!(r.best_tour.is_valid_for(&inst));
        }
    }
}

#[test]
fn colony_never_beats_the_optimum() {
    for seed in 0..15 {
        let inst = random_costs(14, 5, 80, 300 + seed).unwrap();
        let opt = exact_solve(&inst, DEFAULT_SEQUENCE_CAP).unwrap().cost;
        let r = run(&inst, &AcoParams::racs().with_iterations(200).with_seed(seed)).unwrap();
        assert!(r.cost >= opt);
        assert!(r.best_tour.is_valid_for(&inst));
    }
}

#[test]
fn same_seed_same_trace_different_seed_diverges() {
    let inst = random_euclidean(40, 8, 2).unwrap();
    let p = AcoParams::racs().with_iterations(80).with_seed(17);
    let a = run(&inst, &p).unwrap();
    let b = run(&inst, &p).unwrap();
    assert_eq!(a.without_timing(), b.without_timing());
    let mut seen_other = false;
    for s in 0..5 {
        let c = run(&inst, &AcoParams { seed: s, ..p.clone() }).unwrap();
        seen_other |= c.trace != a.trace || c.best_tour != a.best_tour;
    }
    assert!(seen_other);
}

#[test]
fn time_budget_stops_the_run() {
    let inst = random_euclidean(60, 12, 1).unwrap();
    let params = AcoParams { time_max: Some(0.2), max_iterations: None, ..AcoParams::racs() };
    let r = run(&inst, &params).unwrap();
    assert!(r.iterations > 0);
    assert!(r.elapsed_seconds < 5.0);
}
