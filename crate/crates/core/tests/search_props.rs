mod common;

use causal_mwis::generate::gnp_uniform;
use causal_mwis::localsearch::{causal_search, causal_search_reduced, Cutoff, SearchConfig, SearchState};
use causal_mwis::reduce::ReducePipeline;
use proptest::prelude::*;

fn iters(k: u64, cit: bool, seed: u64) -> SearchConfig {
    SearchConfig { cutoff: Cutoff::Iterations(k), cit, seed, ..SearchConfig::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn cover_stays_valid_every_iteration(n in 2usize..=40, p in 0.05f64..0.6, cit in any::<bool>(), seed in any::<u64>()) {
        let g = gnp_uniform(n, p, 1, 200, seed);
        let mut st = SearchState::new(&g, iters(0, cit, seed));
        prop_assert!(st.is_valid_cover());
        let mut best = st.best_weight();
        for _ in 0..300 {
            if !st.step() {
                break;
            }
            prop_assert!(st.is_valid_cover());
            prop_assert!(st.best_weight() <= best);
            best = st.best_weight();
            prop_assert_eq!(g.weight_of(&st.cover()), st.cover_weight());
        }
        prop_assert_eq!(g.weight_of(&st.best_cover()), st.best_weight());
    }

    #[test]
    fn report_duality(n in 1usize..=16, p in 0.0f64..0.7, seed in any::<u64>()) {
        let g = gnp_uniform(n, p, 1, 200, seed);
        let total: i64 = g.vertices().map(|v| g.weight(v)).sum();
        let best = common::alpha(&g);
        for r in [
            causal_search(&g, &iters(500, true, seed)),
            causal_search_reduced(&g, &iters(500, true, seed), &ReducePipeline::default()),
        ] {
            prop_assert!(common::is_independent(&g, &r.independent_set));
            prop_assert_eq!(r.cover_weight + r.independent_weight, total);
            prop_assert_eq!(g.weight_of(&r.cover), r.cover_weight);
            prop_assert!(r.independent_weight <= best);
        }
    }

    #[test]
    fn iteration_cutoff_is_deterministic(n in 2usize..=40, seed in any::<u64>(), cit in any::<bool>()) {
        let g = gnp_uniform(n, 0.2, 20, 100, seed);
        let a = causal_search(&g, &iters(400, cit, seed));
        let b = causal_search(&g, &iters(400, cit, seed));
        prop_assert_eq!(a.cover, b.cover);
        prop_assert_eq!(a.cover_weight, b.cover_weight);
        prop_assert_eq!(a.iterations, b.iterations);
    }
}

#[test]
fn ten_thousand_iterations_with_bulk_removals() {
    // validity must survive the inferred-set removals over a long run
    let mut bulk = 0;
    for seed in 0..4 {
        let g = gnp_uniform(20, 0.15, 20, 100, seed);
        let mut st = SearchState::new(&g, iters(0, true, seed));
        for _ in 0..10_000 {
            if !st.step() {
                break;
            }
            assert!(st.is_valid_cover());
        }
        bulk += st.bulk_removals();
    }
    assert!(bulk > 0, "no inferred-set removal happened; the test exercises nothing");
}
