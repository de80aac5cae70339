//! Conflict analyses on vertex sets.
//!
//! Starting from the assumption that a single vertex is in every (or some)
//! maximum weight independent set, the assumption is propagated to a larger
//! set through satellites (neighbours-of-children that must join the set) or
//! mirrors (distance-two vertices that must leave it). A propagation that
//! contradicts the local upper bound w(I ∩ N[X]) ≥ w(X) proves the starting
//! assumption false.
//!
//! | analysis            | assumes v is in        | grows by   | conflict means        |
//! |---------------------|------------------------|------------|-----------------------|
//! | confining           | every MWIS             | satellites | v can be deleted      |
//! | covering            | every MWVC             | mirrors    | v can be taken        |
//! | inferred confining  | some MWIS              | satellites | (no conflict test)    |
//! | inferred covering   | some MWVC              | mirrors    | (no conflict test)    |
//!
//! Every α_w term is computed by [`crate::subsolve`]; when an instance is over
//! budget the corresponding test is skipped, which can only make a result
//! weaker, never wrong.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{VertexId, Weight, WeightedGraph};
use crate::subsolve::{self, SubsolveBudget};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CitBudget {
    pub subsolve: SubsolveBudget,
    /// Largest non-independent satellite ground set that is enumerated.
    pub max_satellite_ground: usize,
    /// Sets stop growing once they reach this size.
    pub max_set_growth: usize,
}

impl Default for CitBudget {
    fn default() -> Self {
        CitBudget {
            subsolve: SubsolveBudget::default(),
            max_satellite_ground: 12,
            max_set_growth: 64,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CitError {
    #[error("vertex {0} is not alive")]
    DeadVertex(VertexId),
    #[error("vertex {0} is not a child of the given set")]
    NotAChild(VertexId),
    #[error("satellite ground set of {size} vertices exceeds the budget")]
    BudgetExceeded { size: usize },
    #[error("vertices {0} and {1} are adjacent")]
    AdjacentPair(VertexId, VertexId),
    #[error("a vertex cannot pair with itself")]
    SamePair,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConfiningOutcome {
    Unconfined,
    Confined(Vec<VertexId>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoveringOutcome {
    Uncovered,
    Covered(Vec<VertexId>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Satellite {
    Unique(Vec<VertexId>),
    NotUnique,
    NoneSatisfies,
}

fn ensure_alive(g: &WeightedGraph, v: VertexId) -> Result<(), CitError> {
    if g.is_alive(v) {
        Ok(())
    } else {
        Err(CitError::DeadVertex(v))
    }
}

fn insert_sorted(set: &mut Vec<VertexId>, extra: &[VertexId]) {
    set.extend_from_slice(extra);
    set.sort_unstable();
    set.dedup();
}

/// Neighbours of an independent set together with w(S ∩ N(u)), ascending.
fn boundary(g: &WeightedGraph, set: &[VertexId]) -> BTreeMap<VertexId, Weight> {
    let mut out = BTreeMap::new();
    for &s in set {
        let ws = g.weight(s);
        for u in g.neighbors(s) {
            *out.entry(u).or_insert(0) += ws;
        }
    }
    out
}

/// N(u) \ N[S] for an independent set S.
fn ground(g: &WeightedGraph, set: &[VertexId], u: VertexId) -> Vec<VertexId> {
    g.neighbors(u)
        .filter(|x| set.binary_search(x).is_err() && !set.iter().any(|&s| g.is_adjacent(s, *x)))
        .collect()
}

/// Counts independent subsets T of `ground` with w(T) ≥ `need`, stopping at two.
fn satellite_in(
    g: &WeightedGraph,
    ground: &[VertexId],
    need: Weight,
    budget: &CitBudget,
) -> Result<Satellite, CitError> {
    let total = g.weight_of(ground);
    if total < need {
        return Ok(Satellite::NoneSatisfies);
    }
    if need <= 0 {
        // the empty set satisfies, and so does anything above it
        return Ok(if ground.is_empty() { Satellite::Unique(Vec::new()) } else { Satellite::NotUnique });
    }
    if g.is_independent(ground) {
        // Satisfying sets are closed upwards: unique iff no proper subset,
        // in particular not the heaviest one, reaches `need`.
        let lightest = ground.iter().map(|&z| g.weight(z)).min().unwrap_or(0);
        return Ok(if total - lightest < need {
            Satellite::Unique(ground.to_vec())
        } else {
            Satellite::NotUnique
        });
    }
    let k = ground.len();
    if k > budget.max_satellite_ground {
        return Err(CitError::BudgetExceeded { size: k });
    }
    let mut nbr = vec![0u32; k];
    for i in 0..k {
        for j in i + 1..k {
            if g.is_adjacent(ground[i], ground[j]) {
                nbr[i] |= 1 << j;
                nbr[j] |= 1 << i;
            }
        }
    }
    let mut hit: Option<u32> = None;
    'masks: for mask in 1u32..(1 << k) {
        let mut w = 0;
        let mut rest = mask;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            if nbr[i] & mask != 0 {
                continue 'masks;
            }
            w += g.weight(ground[i]);
            rest &= rest - 1;
        }
        if w >= need {
            if hit.is_some() {
                return Ok(Satellite::NotUnique);
            }
            hit = Some(mask);
        }
    }
    Ok(match hit {
        Some(mask) => Satellite::Unique(
            (0..k).filter(|i| mask >> i & 1 == 1).map(|i| ground[i]).collect(),
        ),
        None => Satellite::NoneSatisfies,
    })
}

/// Satellite of child `u` of the independent set `set`.
///
/// With `strict`, `u` must satisfy w(u) ≥ w(S ∩ N(u)) and satisfying sets are
/// those with w(u) < w(S ∩ N(u)) + w(T); otherwise `u` must satisfy
/// w(u) > w(S ∩ N(u)) and the inequality is non-strict (inferred satellite).
pub fn satellite_of(
    g: &WeightedGraph,
    set: &[VertexId],
    u: VertexId,
    strict: bool,
    budget: &CitBudget,
) -> Result<Satellite, CitError> {
    ensure_alive(g, u)?;
    let mut set = set.to_vec();
    set.sort_unstable();
    if set.binary_search(&u).is_ok() {
        return Err(CitError::NotAChild(u));
    }
    let wsn: Weight = set.iter().filter(|&&s| g.is_adjacent(s, u)).map(|&s| g.weight(s)).sum();
    let is_neighbor = set.iter().any(|&s| g.is_adjacent(s, u));
    let slack = g.weight(u) - wsn;
    if !is_neighbor || slack < 0 || (!strict && slack == 0) {
        return Err(CitError::NotAChild(u));
    }
    let need = if strict { slack + 1 } else { slack };
    satellite_in(g, &ground(g, &set, u), need, budget)
}

/// Grows S = {v} by satellites of extending children until no child extends
/// (Confined) or some child u has w(u) ≥ w(S ∩ N(u)) + α_w(G[N(u) \ N[S]])
/// (Unconfined). Children are scanned in ascending id order, all conflict
/// tests run before the first extension of a round.
pub fn compute_confining(
    g: &WeightedGraph,
    v: VertexId,
    budget: &CitBudget,
) -> Result<ConfiningOutcome, CitError> {
    ensure_alive(g, v)?;
    let mut set = vec![v];
    'grow: loop {
        let children: Vec<(VertexId, Weight, Vec<VertexId>)> = boundary(g, &set)
            .into_iter()
            .filter(|&(u, wsn)| g.weight(u) >= wsn)
            .map(|(u, wsn)| (u, wsn, ground(g, &set, u)))
            .collect();
        for (u, wsn, ground) in &children {
            if let Ok(a) = subsolve::alpha(g, ground, &budget.subsolve) {
                if g.weight(*u) >= wsn + a {
                    return Ok(ConfiningOutcome::Unconfined);
                }
            }
        }
        if set.len() >= budget.max_set_growth {
            return Ok(ConfiningOutcome::Confined(set));
        }
        for (u, wsn, ground) in &children {
            let need = g.weight(*u) - wsn + 1;
            if let Ok(Satellite::Unique(extra)) = satellite_in(g, ground, need, budget) {
                if !extra.is_empty() {
                    insert_sorted(&mut set, &extra);
                    continue 'grow;
                }
            }
        }
        return Ok(ConfiningOutcome::Confined(set));
    }
}

/// Mirrors of `v` with respect to the set `c`: vertices u ∈ N²(v) \ C with
/// w(v) ≥ α_w(G[N(v) \ (C ∪ N(u))]), or `>` when `strict` is false
/// (inferred mirrors).
pub fn mirrors_of(
    g: &WeightedGraph,
    c: &[VertexId],
    v: VertexId,
    strict: bool,
    budget: &CitBudget,
) -> Result<Vec<VertexId>, CitError> {
    ensure_alive(g, v)?;
    let second = g.second_neighborhood(v).map_err(|_| CitError::DeadVertex(v))?;
    let open: Vec<VertexId> = g.neighbors(v).filter(|x| !c.contains(x)).collect();
    let wv = g.weight(v);
    let mut out = Vec::new();
    for u in second {
        if c.contains(&u) {
            continue;
        }
        let rest: Vec<VertexId> = open.iter().copied().filter(|&x| !g.is_adjacent(x, u)).collect();
        if let Ok(a) = subsolve::alpha(g, &rest, &budget.subsolve) {
            if (strict && wv >= a) || (!strict && wv > a) {
                out.push(u);
            }
        }
    }
    Ok(out)
}

/// Grows C = {v} by the mirror sets of extending fathers until none extends
/// (Covered) or some u ∈ C has w(u) ≥ α_w(G[N(u) \ C]) (Uncovered).
pub fn compute_covering(
    g: &WeightedGraph,
    v: VertexId,
    budget: &CitBudget,
) -> Result<CoveringOutcome, CitError> {
    ensure_alive(g, v)?;
    let mut c = vec![v];
    'grow: loop {
        let mut fathers = Vec::new();
        for &u in &c {
            let rest: Vec<VertexId> = g.neighbors(u).filter(|x| c.binary_search(x).is_err()).collect();
            if let Ok(a) = subsolve::alpha(g, &rest, &budget.subsolve) {
                if g.weight(u) >= a {
                    return Ok(CoveringOutcome::Uncovered);
                }
                fathers.push(u);
            }
        }
        if c.len() >= budget.max_set_growth {
            return Ok(CoveringOutcome::Covered(c));
        }
        for f in fathers {
            let mirrors = mirrors_of(g, &c, f, true, budget)?;
            if !mirrors.is_empty() {
                insert_sorted(&mut c, &mirrors);
                continue 'grow;
            }
        }
        return Ok(CoveringOutcome::Covered(c));
    }
}

/// Fixed point of inferred-satellite extension from {v}. Every MWIS that
/// contains `v` contains the returned set.
pub fn inferred_confining(
    g: &WeightedGraph,
    v: VertexId,
    budget: &CitBudget,
) -> Result<Vec<VertexId>, CitError> {
    ensure_alive(g, v)?;
    let mut set = vec![v];
    'grow: while set.len() < budget.max_set_growth {
        for (u, wsn) in boundary(g, &set) {
            if g.weight(u) <= wsn {
                continue;
            }
            let ground = ground(g, &set, u);
            let need = g.weight(u) - wsn;
            if let Ok(Satellite::Unique(extra)) = satellite_in(g, &ground, need, budget) {
                if !extra.is_empty() {
                    insert_sorted(&mut set, &extra);
                    continue 'grow;
                }
            }
        }
        break;
    }
    Ok(set)
}

/// Fixed point of inferred-mirror extension from {v}. Every MWVC that
/// contains `v` contains the returned set.
pub fn inferred_covering(
    g: &WeightedGraph,
    v: VertexId,
    budget: &CitBudget,
) -> Result<Vec<VertexId>, CitError> {
    ensure_alive(g, v)?;
    let mut c = vec![v];
    'grow: while c.len() < budget.max_set_growth {
        for i in 0..c.len() {
            let f = c[i];
            let rest: Vec<VertexId> = g.neighbors(f).filter(|x| c.binary_search(x).is_err()).collect();
            let Ok(a) = subsolve::alpha(g, &rest, &budget.subsolve) else {
                continue;
            };
            if g.weight(f) > a {
                continue;
            }
            let mirrors = mirrors_of(g, &c, f, false, budget)?;
            if !mirrors.is_empty() {
                insert_sorted(&mut c, &mirrors);
                continue 'grow;
            }
        }
        break;
    }
    Ok(c)
}

/// Both vertices confined and each in the other's confining set.
pub fn confining_simultaneous(
    g: &WeightedGraph,
    u: VertexId,
    v: VertexId,
    budget: &CitBudget,
) -> Result<bool, CitError> {
    if u == v {
        return Err(CitError::SamePair);
    }
    ensure_alive(g, u)?;
    ensure_alive(g, v)?;
    if g.is_adjacent(u, v) {
        return Ok(false);
    }
    let ConfiningOutcome::Confined(su) = compute_confining(g, u, budget)? else {
        return Ok(false);
    };
    if su.binary_search(&v).is_err() {
        return Ok(false);
    }
    Ok(matches!(compute_confining(g, v, budget)?,
        ConfiningOutcome::Confined(sv) if sv.binary_search(&u).is_ok()))
}

/// Both vertices covered, non-adjacent, and each in the other's covering set.
pub fn covering_simultaneous(
    g: &WeightedGraph,
    u: VertexId,
    v: VertexId,
    budget: &CitBudget,
) -> Result<bool, CitError> {
    if u == v {
        return Err(CitError::SamePair);
    }
    ensure_alive(g, u)?;
    ensure_alive(g, v)?;
    if g.is_adjacent(u, v) {
        return Err(CitError::AdjacentPair(u, v));
    }
    let CoveringOutcome::Covered(cu) = compute_covering(g, u, budget)? else {
        return Ok(false);
    };
    if cu.binary_search(&v).is_err() {
        return Ok(false);
    }
    Ok(matches!(compute_covering(g, v, budget)?,
        CoveringOutcome::Covered(cv) if cv.binary_search(&u).is_ok()))
}

/// First u ∈ S_v \ {v} (ascending) forming a confining simultaneous pair with
/// `v`, given v's confining set.
pub fn confining_partner(
    g: &WeightedGraph,
    v: VertexId,
    confining: &[VertexId],
    budget: &CitBudget,
) -> Result<Option<VertexId>, CitError> {
    for &u in confining.iter().filter(|&&u| u != v) {
        if let ConfiningOutcome::Confined(su) = compute_confining(g, u, budget)? {
            if su.binary_search(&v).is_ok() {
                return Ok(Some(u));
            }
        }
    }
    Ok(None)
}

/// First non-adjacent u ∈ C_v \ {v} (ascending) forming a covering
/// simultaneous pair with `v`, given v's covering set.
pub fn covering_partner(
    g: &WeightedGraph,
    v: VertexId,
    covering: &[VertexId],
    budget: &CitBudget,
) -> Result<Option<VertexId>, CitError> {
    for &u in covering.iter().filter(|&&u| u != v && !g.is_adjacent(u, v)) {
        if let CoveringOutcome::Covered(cu) = compute_covering(g, u, budget)? {
            if cu.binary_search(&v).is_ok() {
                return Ok(Some(u));
            }
        }
    }
    Ok(None)
}

/// All four analyses for one vertex, as printed by `mwis explain`.
#[derive(Clone, Debug, Serialize)]
pub struct VertexReport {
    pub vertex: VertexId,
    pub weight: Weight,
    pub confining: ConfiningOutcome,
    pub covering: CoveringOutcome,
    pub inferred_confining: Vec<VertexId>,
    pub inferred_covering: Vec<VertexId>,
}

pub fn explain(
    g: &WeightedGraph,
    v: VertexId,
    budget: &CitBudget,
) -> Result<VertexReport, CitError> {
    Ok(VertexReport {
        vertex: v,
        weight: g.weight(v),
        confining: compute_confining(g, v, budget)?,
        covering: compute_covering(g, v, budget)?,
        inferred_confining: inferred_confining(g, v, budget)?,
        inferred_covering: inferred_covering(g, v, budget)?,
    })
}
