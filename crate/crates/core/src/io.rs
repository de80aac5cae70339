//! Graph and solution file formats.
//!
//! Three graph formats are understood:
//!
//! - METIS: header `n m [fmt]`, then one line per vertex (1-indexed). With
//!   `fmt = 10` each line starts with the vertex weight.
//! - DIMACS-like: `p edge n m`, `v <id> <weight>`, `e <u> <v>` (1-indexed).
//! - edge list: `u v` per line plus a separate weight file, one integer per line.
//!
//! Solution files hold one vertex id per line, ascending.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::graph::{GraphError, Weight, WeightedGraph};
use crate::weights::{gen_weights, WeightGenSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Metis,
    Dimacs,
    EdgeList,
}

impl Format {
    /// Guess from the file extension: `.graph`/`.metis`, `.dimacs`/`.clq`/`.col`,
    /// `.edges`/`.el`/`.txt`.
    pub fn from_path(path: &Path) -> Option<Format> {
        let ext = path.extension()?.to_str()?.to_ascii_lowercase();
        match ext.as_str() {
            "graph" | "metis" => Some(Format::Metis),
            "dimacs" | "clq" | "col" | "wclq" | "dim" => Some(Format::Dimacs),
            "edges" | "edgelist" | "el" | "txt" => Some(Format::EdgeList),
            _ => None,
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Metis => "metis",
            Format::Dimacs => "dimacs",
            Format::EdgeList => "edgelist",
        })
    }
}

impl FromStr for Format {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "metis" => Ok(Format::Metis),
            "dimacs" => Ok(Format::Dimacs),
            "edgelist" | "edge-list" | "edges" => Ok(Format::EdgeList),
            other => Err(GraphError::MalformedInput(format!("unknown format '{other}'"))),
        }
    }
}

/// Where vertex weights come from when the graph file does not carry them
/// (or when they should be replaced).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightSource {
    File(PathBuf),
    Generated(WeightGenSpec),
}

impl FromStr for WeightSource {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.starts_with("gen:") {
            s.parse()
                .map(WeightSource::Generated)
                .map_err(|e| GraphError::MalformedInput(e.to_string()))
        } else {
            Ok(WeightSource::File(PathBuf::from(s)))
        }
    }
}

impl WeightSource {
    pub fn resolve(&self, n: usize) -> Result<Vec<Weight>, GraphError> {
        match self {
            WeightSource::File(path) => {
                let weights = parse_weights(&read_text(path)?)?;
                if weights.len() != n {
                    return Err(GraphError::MalformedInput(format!(
                        "{}: expected {n} weights, got {}",
                        path.display(),
                        weights.len()
                    )));
                }
                Ok(weights)
            }
            WeightSource::Generated(spec) => Ok(gen_weights(n, spec)),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct LoadOptions {
    /// Overrides extension-based detection.
    pub format: Option<Format>,
    /// Edge lists only: ids start at 1.
    pub one_indexed: bool,
    /// Replaces any weights stored in the graph file.
    pub weights: Option<WeightSource>,
}

/// Vertex count, edges (0-indexed) and optional in-file weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub weights: Option<Vec<Weight>>,
}

impl RawGraph {
    pub fn build(self, weights: Option<&WeightSource>) -> Result<WeightedGraph, GraphError> {
        let weights = match (weights, self.weights) {
            (Some(src), _) => src.resolve(self.n)?,
            (None, Some(w)) => w,
            (None, None) => {
                return Err(GraphError::MalformedInput(
                    "graph file has no vertex weights; supply a weight source".into(),
                ))
            }
        };
        WeightedGraph::from_edges(self.n, &self.edges, weights)
    }
}

fn bad(line: usize, msg: impl fmt::Display) -> GraphError {
    GraphError::MalformedInput(format!("line {line}: {msg}"))
}

fn num<T: FromStr>(tok: &str, line: usize) -> Result<T, GraphError> {
    tok.parse().map_err(|_| bad(line, format_args!("cannot parse '{tok}'")))
}

fn read_text(path: &Path) -> Result<String, GraphError> {
    fs::read_to_string(path)
        .map_err(|e| GraphError::MalformedInput(format!("{}: {e}", path.display())))
}

pub fn parse_metis(text: &str) -> Result<RawGraph, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.starts_with('%'));
    let (hline, header) = lines
        .by_ref()
        .find(|(_, l)| !l.is_empty())
        .ok_or_else(|| GraphError::MalformedInput("empty METIS file".into()))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() < 2 {
        return Err(bad(hline, "header needs `n m [fmt]`"));
    }
    let n: usize = num(head[0], hline)?;
    let m: usize = num(head[1], hline)?;
    let fmt = head.get(2).copied().unwrap_or("0");
    let weighted = match fmt.trim_start_matches('0') {
        "" | "0" => false,
        "10" => true,
        other => return Err(bad(hline, format_args!("unsupported fmt '{other}' (use 0 or 10)"))),
    };
    // ncon > 1 would mean multiple weights per vertex
    if let Some(ncon) = head.get(3) {
        if num::<usize>(ncon, hline)? != 1 {
            return Err(bad(hline, "only one vertex weight per vertex is supported"));
        }
    }

    let mut edges = Vec::with_capacity(m);
    let mut weights = weighted.then(|| Vec::with_capacity(n));
    let mut v = 0usize;
    for (lineno, line) in lines {
        if v == n {
            if line.is_empty() {
                continue;
            }
            return Err(bad(lineno, format_args!("more than {n} vertex lines")));
        }
        let mut toks = line.split_whitespace();
        if let Some(ws) = weights.as_mut() {
            let tok = toks.next().ok_or_else(|| bad(lineno, "missing vertex weight"))?;
            ws.push(num(tok, lineno)?);
        }
        for tok in toks {
            let u: usize = num(tok, lineno)?;
            if u == 0 || u > n {
                return Err(bad(lineno, format_args!("neighbour {u} outside 1..={n}")));
            }
            if u - 1 > v {
                edges.push((v, u - 1));
            }
        }
        v += 1;
    }
    if v != n {
        return Err(GraphError::MalformedInput(format!("expected {n} vertex lines, found {v}")));
    }
    // Each edge is listed from both sides; only the forward copy was kept.
    if edges.len() != m {
        log::warn!("METIS header declares {m} edges, found {}", edges.len());
    }
    Ok(RawGraph { n, edges, weights })
}

pub fn parse_dimacs(text: &str) -> Result<RawGraph, GraphError> {
    let mut n = None;
    let mut edges = Vec::new();
    let mut weights: Vec<Option<Weight>> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.first().copied() {
            None | Some("c") | Some("%") | Some("#") => {}
            Some("p") => {
                if n.is_some() {
                    return Err(bad(lineno, "second problem line"));
                }
                if toks.len() < 4 {
                    return Err(bad(lineno, "expected `p edge n m`"));
                }
                let count: usize = num(toks[2], lineno)?;
                n = Some(count);
                weights = vec![None; count];
                edges.reserve(num::<usize>(toks[3], lineno)?);
            }
            Some(kind @ ("v" | "n" | "e")) => {
                let count = n.ok_or_else(|| bad(lineno, "data before the problem line"))?;
                if toks.len() < 3 {
                    return Err(bad(lineno, "expected two fields"));
                }
                let a: usize = num(toks[1], lineno)?;
                if a == 0 || a > count {
                    return Err(bad(lineno, format_args!("vertex {a} outside 1..={count}")));
                }
                if kind == "e" {
                    let b: usize = num(toks[2], lineno)?;
                    if b == 0 || b > count {
                        return Err(bad(lineno, format_args!("vertex {b} outside 1..={count}")));
                    }
                    edges.push((a - 1, b - 1));
                } else {
                    weights[a - 1] = Some(num(toks[2], lineno)?);
                }
            }
            Some(other) => return Err(bad(lineno, format_args!("unknown line type '{other}'"))),
        }
    }
    let n = n.ok_or_else(|| GraphError::MalformedInput("missing `p edge n m` line".into()))?;
    let weights = if weights.iter().all(Option::is_none) {
        None
    } else if let Some(missing) = weights.iter().position(Option::is_none) {
        return Err(GraphError::MalformedInput(format!("vertex {} has no weight line", missing + 1)));
    } else {
        Some(weights.into_iter().flatten().collect())
    };
    Ok(RawGraph { n, edges, weights })
}

/// Plain `u v` pairs. `#` and `%` start comments. The vertex count is the
/// largest id seen plus one, unless `n` is given (e.g. from a weight file).
pub fn parse_edge_list(
    text: &str,
    one_indexed: bool,
    n: Option<usize>,
) -> Result<RawGraph, GraphError> {
    let mut edges = Vec::new();
    let mut max_id = None;
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = line.split(['#', '%']).next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut toks = line.split_whitespace();
        let (Some(a), Some(b)) = (toks.next(), toks.next()) else {
            return Err(bad(lineno, "expected `u v`"));
        };
        let mut a: usize = num(a, lineno)?;
        let mut b: usize = num(b, lineno)?;
        if one_indexed {
            if a == 0 || b == 0 {
                return Err(bad(lineno, "id 0 in a 1-indexed edge list"));
            }
            a -= 1;
            b -= 1;
        }
        max_id = max_id.max(Some(a.max(b)));
        edges.push((a, b));
    }
    let needed = max_id.map_or(0, |m| m + 1);
    let n = match n {
        Some(n) if n < needed => {
            return Err(GraphError::MalformedInput(format!(
                "edge list mentions vertex {} but only {n} weights are given",
                needed - 1
            )))
        }
        Some(n) => n,
        None => needed,
    };
    Ok(RawGraph { n, edges, weights: None })
}

/// One integer per line; blank lines and `#` comments are skipped.
pub fn parse_weights(text: &str) -> Result<Vec<Weight>, GraphError> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .map(|(lineno, l)| num(l, lineno))
        .collect()
}

/// Loads a graph, picking the format from `opts.format` or the extension.
pub fn load_graph(path: &Path, opts: &LoadOptions) -> Result<WeightedGraph, GraphError> {
    let format = opts.format.or_else(|| Format::from_path(path)).ok_or_else(|| {
        GraphError::MalformedInput(format!(
            "cannot tell the format of {}; pass one explicitly",
            path.display()
        ))
    })?;
    let text = read_text(path)?;
    let raw = match format {
        Format::Metis => parse_metis(&text)?,
        Format::Dimacs => parse_dimacs(&text)?,
        Format::EdgeList => {
            // The weight file fixes n, so isolated high ids survive.
            let weights = match &opts.weights {
                Some(WeightSource::File(p)) => Some(parse_weights(&read_text(p)?)?),
                _ => None,
            };
            let mut raw = parse_edge_list(&text, opts.one_indexed, weights.as_ref().map(Vec::len))?;
            if let Some(w) = weights {
                raw.weights = Some(w);
                return raw.build(None);
            }
            raw
        }
    };
    raw.build(opts.weights.as_ref())
}

/// METIS text (fmt 10) of the alive part of `g`. Vertices are renumbered in
/// ascending id order; the returned vector maps new index → old id.
pub fn to_metis(g: &WeightedGraph) -> (String, Vec<usize>) {
    let (c, old) = g.compact();
    let mut out = format!("{} {} 10\n", c.alive_count(), c.edge_count());
    for v in c.vertices() {
        out.push_str(&c.weight(v).to_string());
        for u in c.neighbors(v) {
            out.push(' ');
            out.push_str(&(u.index() + 1).to_string());
        }
        out.push('\n');
    }
    (out, old.into_iter().map(|v| v.index()).collect())
}

pub fn parse_solution(text: &str) -> Result<Vec<usize>, GraphError> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .map(|(lineno, l)| num(l, lineno))
        .collect()
}

pub fn read_solution(path: &Path) -> Result<Vec<usize>, GraphError> {
    parse_solution(&read_text(path)?)
}

/// Ascending ids, one per line.
pub fn format_solution(ids: &[usize]) -> String {
    let mut sorted = ids.to_vec();
    sorted.sort_unstable();
    let mut out = String::new();
    for v in sorted {
        out.push_str(&v.to_string());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::VertexId;

    fn edges_of(g: &WeightedGraph) -> Vec<(usize, usize)> {
        g.vertices()
            .flat_map(|v| g.neighbors(v).filter(move |&u| u > v).map(move |u| (v.index(), u.index())))
            .collect()
    }

    #[test]
    fn metis_p3() {
        let text = "% comment\n3 2 10\n1 2\n3 1 3\n1 2\n";
        let g = parse_metis(text).unwrap().build(None).unwrap();
        assert_eq!(edges_of(&g), vec![(0, 1), (1, 2)]);
        assert_eq!(g.weight(VertexId::new(1)), 3);
    }

    #[test]
    fn metis_unweighted_needs_source() {
        let raw = parse_metis("2 1\n2\n1\n").unwrap();
        assert!(raw.weights.is_none());
        assert!(raw.clone().build(None).is_err());
        let spec = WeightGenSpec::uniform(1, 1, 0).unwrap();
        let g = raw.build(Some(&WeightSource::Generated(spec))).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn metis_errors() {
        assert!(parse_metis("").is_err());
        assert!(parse_metis("2 1 10\n1 3\n1 1\n").is_err());
        assert!(parse_metis("2 1 10\n1 2\n").is_err());
        assert!(parse_metis("1 0 11\n1\n").is_err());
        // zero weight is rejected when building
        let raw = parse_metis("1 0 10\n0\n").unwrap();
        assert_eq!(raw.build(None).unwrap_err(), GraphError::ZeroWeight(0));
    }

    #[test]
    fn dimacs_roundtrip_shape() {
        let text = "c hi\np edge 3 2\nv 1 4\nv 2 5\nv 3 6\ne 1 2\ne 2 3\n";
        let g = parse_dimacs(text).unwrap().build(None).unwrap();
        assert_eq!(edges_of(&g), vec![(0, 1), (1, 2)]);
        assert_eq!(g.weight_of(&[VertexId::new(0), VertexId::new(2)]), 10);
        assert!(parse_dimacs("p edge 2 1\nv 1 3\ne 1 2\n").is_err());
        assert!(parse_dimacs("e 1 2\n").is_err());
        assert!(parse_dimacs("p edge 2 1\ne 1 3\n").is_err());
        assert!(parse_dimacs("p edge 2 0\n").unwrap().weights.is_none());
    }

    #[test]
    fn edge_list_indexing() {
        let raw = parse_edge_list("0 1\n# x\n1 2\n", false, None).unwrap();
        assert_eq!((raw.n, raw.edges.clone()), (3, vec![(0, 1), (1, 2)]));
        let raw = parse_edge_list("1 2\n2 3 % tail\n", true, Some(5)).unwrap();
        assert_eq!((raw.n, raw.edges), (5, vec![(0, 1), (1, 2)]));
        assert!(parse_edge_list("0 1\n", true, None).is_err());
        assert!(parse_edge_list("0 4\n", false, Some(3)).is_err());
        assert!(parse_edge_list("0\n", false, None).is_err());
    }

    #[test]
    fn weights_and_solutions() {
        assert_eq!(parse_weights("3\n\n# c\n4\n").unwrap(), vec![3, 4]);
        assert!(parse_weights("x\n").is_err());
        assert_eq!(format_solution(&[5, 1, 3]), "1\n3\n5\n");
        assert_eq!(parse_solution("1\n3\n\n5\n").unwrap(), vec![1, 3, 5]);
        assert_eq!(parse_solution("").unwrap(), Vec::<usize>::new());
    }

    #[test]
    fn metis_writer_roundtrips() {
        let g = WeightedGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)], vec![2, 3, 2, 1]).unwrap();
        let (text, map) = to_metis(&g);
        assert_eq!(map, vec![0, 1, 2, 3]);
        let h = parse_metis(&text).unwrap().build(None).unwrap();
        assert_eq!(edges_of(&h), edges_of(&g));
        assert_eq!(h.weight_of(&h.vertices().collect::<Vec<_>>()), 8);
    }

    #[test]
    fn format_detection() {
        assert_eq!(Format::from_path(Path::new("a.graph")), Some(Format::Metis));
        assert_eq!(Format::from_path(Path::new("a.DIMACS")), Some(Format::Dimacs));
        assert_eq!(Format::from_path(Path::new("a.edges")), Some(Format::EdgeList));
        assert_eq!(Format::from_path(Path::new("a")), None);
        assert_eq!("edge-list".parse::<Format>().unwrap(), Format::EdgeList);
        assert!("json".parse::<Format>().is_err());
        assert!(matches!("gen:uniform:1:200:7".parse(), Ok(WeightSource::Generated(_))));
        assert!(matches!("w.txt".parse(), Ok(WeightSource::File(_))));
        assert!("gen:uniform:0:3:1".parse::<WeightSource>().is_err());
    }
}
