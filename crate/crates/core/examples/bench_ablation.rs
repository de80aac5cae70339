//! Kernel sizes per reduction pipeline on random sparse graphs.

use anyhow::Result;
use causal_mwis::bench::{run_bench, Algorithm, BenchConfig};

fn main() -> Result<()> {
    env_logger::init();
    let cfg = BenchConfig {
        algorithms: vec![Algorithm::ReduceAblation],
        ..BenchConfig::random(10, 200, 0.02, 1, 200, 1)
    };
    let out = run_bench(&cfg)?;
    print!("{}", out.to_csv(false)?);
    Ok(())
}
