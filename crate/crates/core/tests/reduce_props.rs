mod common;

use causal_mwis::generate::gnp_uniform;
use causal_mwis::reduce::{causal_reduce, ReducePipeline};
use causal_mwis::subsolve::{mwis_of_graph, SubsolveBudget};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn kernel_preserves_weight(n in 4usize..=16, pi in 0usize..3, wide in any::<bool>(), seed in any::<u64>()) {
        let p = [0.1, 0.3, 0.5][pi];
        let (lo, hi) = if wide { (1, 200) } else { (20, 100) };
        let g = gnp_uniform(n, p, lo, hi, seed);
        let best = common::alpha(&g);
        let r = causal_reduce(&g);
        r.kernel.check_invariants().unwrap();
        prop_assert_eq!(best, r.offset + common::alpha(&r.kernel));
        let (_, ks) = mwis_of_graph(&r.kernel, &SubsolveBudget::oracle()).unwrap();
        let lifted = r.trace.reconstruct(&r.kernel, &ks).unwrap();
        prop_assert!(common::is_independent(&g, &lifted));
        prop_assert_eq!(g.weight_of(&lifted), best);
    }

    #[test]
    fn reduction_is_idempotent(n in 4usize..=16, seed in any::<u64>()) {
        let g = gnp_uniform(n, 0.3, 1, 200, seed);
        let r = causal_reduce(&g);
        let mut again = r.kernel.clone();
        let mut t = causal_mwis::ReductionTrace::new();
        ReducePipeline::default().run(&mut again, &mut t);
        prop_assert!(t.is_empty());
    }

    #[test]
    fn basic_rules_alone_are_sound(n in 4usize..=16, seed in any::<u64>()) {
        let g = gnp_uniform(n, 0.3, 1, 200, seed);
        let r = causal_mwis::reduce::reduce_with(&g, &ReducePipeline::basic());
        prop_assert_eq!(common::alpha(&g), r.offset + common::alpha(&r.kernel));
    }
}
