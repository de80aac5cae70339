//! Confining / covering / inferred sets on a small weighted tree.

use anyhow::Result;
use causal_mwis::cit::{explain, CitBudget};
use causal_mwis::{VertexId, WeightedGraph};

fn main() -> Result<()> {
    let names = "abcdefghijkl";
    let edges = [(0, 1), (0, 11), (1, 2), (2, 3), (3, 4), (3, 9), (4, 5), (5, 6), (5, 7), (8, 9), (8, 10)];
    let g = WeightedGraph::from_edges(12, &edges, vec![5, 6, 4, 9, 4, 15, 10, 10, 5, 4, 5, 1])?;
    let label = |s: &[VertexId]| s.iter().map(|v| &names[v.index()..=v.index()]).collect::<Vec<_>>().join(",");
    for v in g.vertices() {
        let r = explain(&g, v, &CitBudget::default())?;
        println!(
            "{} (w {:>2}): IS = {{{}}}, IC = {{{}}}",
            &names[v.index()..=v.index()],
            r.weight,
            label(&r.inferred_confining),
            label(&r.inferred_covering)
        );
    }
    println!("{}", serde_json::to_string_pretty(&explain(&g, VertexId::new(0), &CitBudget::default())?)?);
    Ok(())
}
