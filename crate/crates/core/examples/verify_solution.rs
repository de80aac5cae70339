//! Round-trip a graph and a solution through files, then check it.

use anyhow::Result;
use causal_mwis::generate::gnp_uniform;
use causal_mwis::io::{format_solution, load_graph, parse_solution, to_metis, LoadOptions};
use causal_mwis::solver::{solve, SolverConfig};
use causal_mwis::verify::verify;

fn main() -> Result<()> {
    let dir = std::env::temp_dir().join(format!("mwis-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("g.graph");

    let g = gnp_uniform(40, 0.1, 1, 50, 5);
    std::fs::write(&path, to_metis(&g).0)?;
    let loaded = load_graph(&path, &LoadOptions::default())?;

    let r = solve(&loaded, &SolverConfig::default());
    let ids: Vec<usize> = r.solution.iter().map(|v| v.index()).collect();
    let text = format_solution(&ids);
    let report = verify(&loaded, &parse_solution(&text)?)?;
    println!("{}", serde_json::to_string_pretty(&report)?);

    // add a neighbour of a chosen vertex: no longer independent
    let v = r.solution[0];
    if let Some(u) = loaded.neighbors(v).next() {
        let mut bad = ids.clone();
        bad.push(u.index());
        println!("with {} added: {}", u.index(), verify(&loaded, &bad).unwrap_err());
    }
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
