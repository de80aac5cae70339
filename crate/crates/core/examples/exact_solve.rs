//! Branch-and-reduce with and without packing constraints / confining
//! branching, on the same instance.

use std::time::Duration;

use causal_mwis::generate::gnp_uniform;
use causal_mwis::solver::{clique_cover_upper_bound, greedy_lower_bound, solve, Branching, SolverConfig};

fn main() {
    let g = gnp_uniform(90, 0.08, 1, 200, 3);
    println!(
        "n {} m {}: greedy {} <= alpha <= clique cover {}",
        g.alive_count(),
        g.edge_count(),
        greedy_lower_bound(&g).0,
        clique_cover_upper_bound(&g)
    );
    for (constraints, branching) in [
        (true, Branching::Confining),
        (false, Branching::Confining),
        (true, Branching::Plain),
        (false, Branching::Plain),
    ] {
        let cfg = SolverConfig {
            constraints,
            branching,
            time_limit: Some(Duration::from_secs(60)),
            ..SolverConfig::default()
        };
        let r = solve(&g, &cfg);
        println!(
            "constraints {:<5} {:<9} weight {} optimal {} nodes {:>6} bound prunes {:>5} constraint prunes {:>5} {:.3}s",
            constraints,
            format!("{branching:?}"),
            r.best_weight,
            r.optimal,
            r.nodes,
            r.prunes_bound,
            r.prunes_constraint,
            r.elapsed_secs
        );
    }
}
