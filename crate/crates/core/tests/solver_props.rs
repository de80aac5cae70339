mod common;

use causal_mwis::generate::gnp_uniform;
use causal_mwis::reduce::ReducePipeline;
use causal_mwis::solver::{clique_cover_upper_bound, greedy_lower_bound, solve, Branching, SolverConfig};
use proptest::prelude::*;

fn config(constraints: bool, branching: Branching) -> SolverConfig {
    SolverConfig { constraints, branching, ..SolverConfig::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn solver_matches_brute_force(n in 1usize..=18, p in 0.05f64..0.7, narrow in any::<bool>(), seed in any::<u64>()) {
        let (lo, hi) = if narrow { (1, 3) } else { (1, 200) };
        let g = gnp_uniform(n, p, lo, hi, seed);
        let best = common::alpha(&g);
        for constraints in [true, false] {
            for branching in [Branching::Confining, Branching::Plain] {
                let r = solve(&g, &config(constraints, branching));
                prop_assert!(r.optimal);
                prop_assert_eq!(r.best_weight, best);
                prop_assert!(common::is_independent(&g, &r.solution));
                prop_assert_eq!(g.weight_of(&r.solution), best);
            }
        }
    }

    #[test]
    fn solver_without_reductions(n in 1usize..=16, seed in any::<u64>()) {
        let g = gnp_uniform(n, 0.3, 1, 4, seed);
        let cfg = SolverConfig { pipeline: ReducePipeline::new(vec![], Default::default()), ..SolverConfig::default() };
        let r = solve(&g, &cfg);
        prop_assert_eq!(r.best_weight, common::alpha(&g));
        prop_assert!(common::is_independent(&g, &r.solution));
    }

    #[test]
    fn bounds_sandwich_the_optimum(n in 1usize..=16, p in 0.0f64..0.9, seed in any::<u64>()) {
        let g = gnp_uniform(n, p, 1, 200, seed);
        let best = common::alpha(&g);
        let (lb, witness) = greedy_lower_bound(&g);
        prop_assert!(common::is_independent(&g, &witness));
        prop_assert_eq!(g.weight_of(&witness), lb);
        prop_assert!(lb <= best);
        prop_assert!(best <= clique_cover_upper_bound(&g));
    }
}
