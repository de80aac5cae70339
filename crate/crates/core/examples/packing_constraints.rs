//! Constraints created by branching on a path, and how the checker uses them.

use causal_mwis::cit::{compute_confining, CitBudget, ConfiningOutcome};
use causal_mwis::generate::path;
use causal_mwis::solver::{
    check_constraints, make_exclude_constraint, make_include_constraints, ConstraintCheck, ConstraintStore,
};
use causal_mwis::{ReductionTrace, VertexId};

fn main() {
    let g = path(vec![2, 3, 2, 1]);
    let v = VertexId::new(0);
    let ConfiningOutcome::Confined(s) = compute_confining(&g, v, &CitBudget::default()).unwrap() else {
        unreachable!("vertex 0 of this path is confined")
    };
    println!("confining set of 0: {s:?}");
    for c in make_include_constraints(&g, v, &s) {
        println!("include branch: {c}");
    }
    let exclude = make_exclude_constraint(&g, v).unwrap();
    println!("exclude branch: {exclude}");

    // exclude 0: 3·x1 < 1 forces vertex 1 out
    let mut h = g.clone();
    let mut trace = ReductionTrace::new();
    h.exclude_vertex(&mut trace, v).unwrap();
    let mut store = ConstraintStore::new();
    store.add(exclude);
    let outcome = check_constraints(&mut h, &mut store, &mut trace);
    println!("after check: {outcome:?}, alive {:?}", h.vertices().collect::<Vec<_>>());
    assert_eq!(outcome, ConstraintCheck::Simplified);
}
