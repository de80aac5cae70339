//! Vertex-cover local search, stepping the state by hand and comparing the
//! bulk-removal variant against the plain one.

use causal_mwis::generate::gnp_uniform;
use causal_mwis::localsearch::{causal_search, Cutoff, SearchConfig, SearchState};
use causal_mwis::solver::{solve, SolverConfig};

fn main() {
    let g = gnp_uniform(80, 0.15, 20, 100, 11);
    let optimum = g.total_weight() - solve(&g, &SolverConfig::default()).best_weight;
    println!("optimal cover weight {optimum}");

    let cfg = SearchConfig { cutoff: Cutoff::Iterations(5_000), seed: 1, ..SearchConfig::default() };
    let mut st = SearchState::new(&g, cfg.clone());
    println!("initial cover {}", st.best_weight());
    while st.best_weight() > optimum && st.step() {
        assert!(st.is_valid_cover());
    }
    println!("reached {} after {} iterations, {} bulk removals", st.best_weight(), st.iterations(), st.bulk_removals());

    for cit in [true, false] {
        let r = causal_search(&g, &SearchConfig { cit, ..cfg.clone() });
        println!(
            "cit {cit:<5}: cover {} / independent set {} in {} iterations",
            r.cover_weight, r.independent_weight, r.iterations
        );
    }
}
