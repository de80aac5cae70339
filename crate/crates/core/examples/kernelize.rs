//! Reduce a random graph and lift an exact kernel solution back.
//!
//! cargo run --example kernelize -- [n] [p] [seed]

use anyhow::Result;
use causal_mwis::generate::gnp_uniform;
use causal_mwis::reduce::causal_reduce;
use causal_mwis::solver::{solve, SolverConfig};

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(Ok(300), |s| s.parse())?;
    let p: f64 = args.next().map_or(Ok(0.02), |s| s.parse())?;
    let seed: u64 = args.next().map_or(Ok(7), |s| s.parse())?;

    let g = gnp_uniform(n, p, 1, 200, seed);
    let k = causal_reduce(&g);
    let s = k.summary(&g);
    println!("graph: {} vertices, {} edges", s.n, s.m);
    println!("kernel: {} vertices, {} edges ({:.1}%), offset {}", s.kernel_n, s.kernel_m, s.ratio_percent, s.offset);
    for (rule, st) in &s.per_rule {
        println!("  {rule:<12} {st:?}");
    }

    // solve what is left, then undo the reductions
    let (dense, ids) = k.kernel.compact();
    let r = solve(&dense, &SolverConfig::default());
    let kernel_set: Vec<_> = r.solution.iter().map(|v| ids[v.index()]).collect();
    let lifted = k.trace.reconstruct(&k.kernel, &kernel_set)?;
    assert!(g.is_independent(&lifted));
    println!(
        "kernel optimum {} + offset {} = {} ({} vertices in the lifted set)",
        r.best_weight,
        k.offset,
        g.weight_of(&lifted),
        lifted.len()
    );
    Ok(())
}
