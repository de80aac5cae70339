//! Benchmark harness: runs (instance, algorithm) cells in parallel and
//! collects one row per measurement.
//!
//! Reduction rows carry time / kernel size / ratio; solve and search rows
//! carry time / result. Parsing (or generating) an instance is timed
//! separately from the algorithm itself. A failing cell becomes a row with
//! the `error` column set; the run continues.

use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::generate::gnp_uniform;
use crate::graph::{Weight, WeightedGraph};
use crate::io::{load_graph, Format, LoadOptions, WeightSource};
use crate::localsearch::{causal_search_reduced, Cutoff, SearchConfig};
use crate::reduce::{reduce_with, ReducePipeline, Step};
use crate::solver::{solve, SolverConfig};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("benchmark config lists no instances")]
    NoInstances,
    #[error("benchmark config lists no algorithms")]
    NoAlgorithms,
    #[error("bad search cutoff: {0}")]
    Cutoff(String),
    #[error("cannot build thread pool: {0}")]
    Pool(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Reduce,
    ReduceAblation,
    Solve,
    Search,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Reduce => "reduce",
            Algorithm::ReduceAblation => "reduce-ablation",
            Algorithm::Solve => "solve",
            Algorithm::Search => "search",
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [Algorithm::Reduce, Algorithm::ReduceAblation, Algorithm::Solve, Algorithm::Search]
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum InstanceSpec {
    /// A local graph file. Nothing is ever downloaded.
    File {
        path: PathBuf,
        #[serde(default)]
        format: Option<Format>,
        /// A weight file path or `gen:uniform:LO:HI:SEED`.
        #[serde(default)]
        weights: Option<String>,
        #[serde(default)]
        one_indexed: bool,
    },
    /// G(n, p) with uniform integer weights.
    Random { n: usize, p: f64, lo: Weight, hi: Weight, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchInstance {
    pub name: String,
    #[serde(flatten)]
    pub spec: InstanceSpec,
}

impl BenchInstance {
    fn load(&self) -> Result<WeightedGraph, String> {
        match &self.spec {
            InstanceSpec::File { path, format, weights, one_indexed } => {
                let weights = weights
                    .as_deref()
                    .map(str::parse::<WeightSource>)
                    .transpose()
                    .map_err(|e| e.to_string())?;
                let opts = LoadOptions { format: *format, one_indexed: *one_indexed, weights };
                load_graph(path, &opts).map_err(|e| e.to_string())
            }
            InstanceSpec::Random { n, p, lo, hi, seed } => {
                if !(1 <= *lo && lo <= hi) || !(0.0..=1.0).contains(p) {
                    return Err(format!("bad random instance parameters n={n} p={p} [{lo},{hi}]"));
                }
                Ok(gnp_uniform(*n, *p, *lo, *hi, *seed))
            }
        }
    }
}

fn default_time_limit() -> f64 {
    1000.0
}

fn default_cutoff() -> String {
    "10".into()
}

fn default_seed() -> u64 {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub instances: Vec<BenchInstance>,
    pub algorithms: Vec<Algorithm>,
    #[serde(default = "default_time_limit")]
    pub solve_time_limit_secs: f64,
    /// `<secs>` or `iters:N`; iteration cutoffs make search rows reproducible.
    #[serde(default = "default_cutoff")]
    pub search_cutoff: String,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Worker threads; defaults to rayon's choice.
    #[serde(default)]
    pub threads: Option<usize>,
}

impl BenchConfig {
    /// `count` random G(n, p) instances, seeds `seed..seed+count`, weights on [lo, hi].
    pub fn random(count: usize, n: usize, p: f64, lo: Weight, hi: Weight, seed: u64) -> Self {
        let instances = (0..count as u64)
            .map(|i| BenchInstance {
                name: format!("gnp-{n}-{p}-{}", seed + i),
                spec: InstanceSpec::Random { n, p, lo, hi, seed: seed + i },
            })
            .collect();
        BenchConfig {
            instances,
            algorithms: vec![Algorithm::Reduce],
            solve_time_limit_secs: default_time_limit(),
            search_cutoff: default_cutoff(),
            seed,
            threads: None,
        }
    }

    pub fn from_json_file(path: &Path) -> Result<Self, BenchError> {
        let text = fs::read_to_string(path)
            .map_err(|source| BenchError::Io { path: path.to_path_buf(), source })?;
        Ok(serde_json::from_str(&text)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub instance: String,
    pub algorithm: &'static str,
    /// Pipeline for reduction rows, `cit`/`plain` for search rows.
    pub variant: String,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub kernel_n: Option<usize>,
    /// kernel_n / n × 100
    pub ratio_percent: Option<f64>,
    /// Independent set weight found.
    pub result: Option<Weight>,
    pub cover_weight: Option<Weight>,
    pub optimal: Option<bool>,
    pub error: Option<String>,
    pub parse_secs: f64,
    pub time_secs: f64,
}

const TIMING_COLUMNS: [&str; 2] = ["parse_secs", "time_secs"];

impl BenchRow {
    fn blank(instance: &BenchInstance, algorithm: Algorithm, variant: &str) -> Self {
        BenchRow {
            instance: instance.name.clone(),
            algorithm: algorithm.name(),
            variant: variant.into(),
            n: None,
            m: None,
            kernel_n: None,
            ratio_percent: None,
            result: None,
            cover_weight: None,
            optimal: None,
            error: None,
            parse_secs: 0.0,
            time_secs: 0.0,
        }
    }
}

/// The ablation variants, smallest rule set first.
pub fn ablation_pipelines() -> Vec<(&'static str, ReducePipeline)> {
    let budget = ReducePipeline::default().budget().clone();
    let with = |extra: &[Step]| {
        let mut steps = Step::BASIC.to_vec();
        steps.extend_from_slice(extra);
        ReducePipeline::new(steps, budget.clone())
    };
    vec![
        ("basic", ReducePipeline::basic()),
        ("basic+confining", with(&[Step::Confining])),
        ("basic+covering", with(&[Step::Covering])),
        ("full", ReducePipeline::default()),
    ]
}

fn opt<T>(s: &Option<T>, f: impl Fn(&T) -> String) -> String {
    s.as_ref().map(f).unwrap_or_default()
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct BenchOutput {
    pub rows: Vec<BenchRow>,
}

impl BenchOutput {
    /// CSV text; timing columns are left out when `timing` is false, which
    /// makes the output byte-identical across runs of the same config.
    pub fn to_csv(&self, timing: bool) -> Result<String, BenchError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec![
            "instance", "algorithm", "variant", "n", "m", "kernel_n", "ratio_percent", "result",
            "cover_weight", "optimal", "error",
        ];
        if timing {
            header.extend(TIMING_COLUMNS);
        }
        w.write_record(&header)?;
        for r in &self.rows {
            let mut rec = vec![
                r.instance.clone(),
                r.algorithm.to_string(),
                r.variant.clone(),
                opt(&r.n, usize::to_string),
                opt(&r.m, usize::to_string),
                opt(&r.kernel_n, usize::to_string),
                opt(&r.ratio_percent, |x| format!("{x:.2}")),
                opt(&r.result, Weight::to_string),
                opt(&r.cover_weight, Weight::to_string),
                opt(&r.optimal, bool::to_string),
                r.error.clone().unwrap_or_default(),
            ];
            if timing {
                rec.push(format!("{:.6}", r.parse_secs));
                rec.push(format!("{:.6}", r.time_secs));
            }
            w.write_record(&rec)?;
        }
        let bytes = w.into_inner().map_err(|e| BenchError::Csv(e.into_error().into()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> Result<String, BenchError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Writes `bench.csv` and `bench.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<(PathBuf, PathBuf), BenchError> {
        let io = |path: &Path| {
            let path = path.to_path_buf();
            move |source| BenchError::Io { path, source }
        };
        fs::create_dir_all(dir).map_err(io(dir))?;
        let csv_path = dir.join("bench.csv");
        let json_path = dir.join("bench.json");
        fs::write(&csv_path, self.to_csv(true)?).map_err(io(&csv_path))?;
        fs::write(&json_path, self.to_json()?).map_err(io(&json_path))?;
        Ok((csv_path, json_path))
    }
}

struct CellSettings {
    time_limit: Duration,
    cutoff: Cutoff,
    seed: u64,
}

fn run_cell(inst: &BenchInstance, alg: Algorithm, s: &CellSettings) -> Vec<BenchRow> {
    let t0 = Instant::now();
    let g = match inst.load() {
        Ok(g) => g,
        Err(e) => {
            let mut row = BenchRow::blank(inst, alg, "");
            row.error = Some(e);
            return vec![row];
        }
    };
    let parse_secs = t0.elapsed().as_secs_f64();
    let (n, m) = (g.alive_count(), g.edge_count());
    let base = |variant: &str| BenchRow {
        n: Some(n),
        m: Some(m),
        parse_secs,
        ..BenchRow::blank(inst, alg, variant)
    };
    let reduce_row = |variant: &str, pipeline: &ReducePipeline| {
        let t = Instant::now();
        let k = reduce_with(&g, pipeline);
        let kn = k.kernel.alive_count();
        BenchRow {
            kernel_n: Some(kn),
            ratio_percent: Some(if n == 0 { 0.0 } else { kn as f64 / n as f64 * 100.0 }),
            time_secs: t.elapsed().as_secs_f64(),
            ..base(variant)
        }
    };
    let total: Weight = g.vertices().map(|v| g.weight(v)).sum();
    let outcome = catch_unwind(AssertUnwindSafe(|| match alg {
        Algorithm::Reduce => vec![reduce_row("full", &ReducePipeline::default())],
        Algorithm::ReduceAblation => {
            ablation_pipelines().iter().map(|(name, p)| reduce_row(name, p)).collect()
        }
        Algorithm::Solve => {
            let cfg = SolverConfig { time_limit: Some(s.time_limit), ..SolverConfig::default() };
            let r = solve(&g, &cfg);
            vec![BenchRow {
                result: Some(r.best_weight),
                cover_weight: Some(total - r.best_weight),
                optimal: Some(r.optimal),
                time_secs: r.elapsed_secs,
                ..base("confining")
            }]
        }
        Algorithm::Search => [("cit", true), ("plain", false)]
            .into_iter()
            .map(|(variant, cit)| {
                let cfg = SearchConfig { cutoff: s.cutoff, seed: s.seed, cit, ..SearchConfig::default() };
                let r = causal_search_reduced(&g, &cfg, &ReducePipeline::default());
                BenchRow {
                    result: Some(r.independent_weight),
                    cover_weight: Some(r.cover_weight),
                    time_secs: r.elapsed_secs,
                    ..base(variant)
                }
            })
            .collect(),
    }));
    outcome.unwrap_or_else(|panic| {
        let msg = panic
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        let mut row = base("");
        row.error = Some(msg);
        vec![row]
    })
}

/// Runs every (instance, algorithm) cell, in parallel, one graph per worker.
/// Rows come back in config order.
pub fn run_bench(cfg: &BenchConfig) -> Result<BenchOutput, BenchError> {
    if cfg.instances.is_empty() {
        return Err(BenchError::NoInstances);
    }
    if cfg.algorithms.is_empty() {
        return Err(BenchError::NoAlgorithms);
    }
    let cutoff: Cutoff =
        cfg.search_cutoff.parse().map_err(|e: crate::localsearch::SearchError| BenchError::Cutoff(e.to_string()))?;
    let time_limit = Duration::try_from_secs_f64(cfg.solve_time_limit_secs)
        .map_err(|e| BenchError::Cutoff(e.to_string()))?;
    let settings = CellSettings { time_limit, cutoff, seed: cfg.seed };
    let cells: Vec<(&BenchInstance, Algorithm)> = cfg
        .instances
        .iter()
        .flat_map(|i| cfg.algorithms.iter().map(move |&a| (i, a)))
        .collect();
    let go = || -> Vec<BenchRow> {
        cells.par_iter().flat_map_iter(|&(i, a)| run_cell(i, a, &settings)).collect()
    };
    let rows = match cfg.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| BenchError::Pool(e.to_string()))?
            .install(go),
        None => go(),
    };
    log::info!("bench: {} cells, {} rows", cells.len(), rows.len());
    Ok(BenchOutput { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_reduce_rows() {
        let cfg = BenchConfig::random(3, 40, 0.1, 1, 200, 5);
        let out = run_bench(&cfg).unwrap();
        assert_eq!(out.rows.len(), 3);
        let csv = out.to_csv(true).unwrap();
        let mut lines = csv.lines();
        let header = lines.next().unwrap();
        assert!(header.contains("time_secs") && header.contains("kernel_n") && header.contains("ratio_percent"));
        assert_eq!(lines.count(), 3);
        for r in &out.rows {
            let ratio = r.kernel_n.unwrap() as f64 / r.n.unwrap() as f64 * 100.0;
            assert_eq!(r.ratio_percent, Some(ratio));
        }
    }

    #[test]
    fn csv_is_reproducible_without_timing() {
        let mut cfg = BenchConfig::random(4, 30, 0.2, 1, 50, 9);
        cfg.algorithms = vec![Algorithm::ReduceAblation, Algorithm::Solve, Algorithm::Search];
        cfg.search_cutoff = "iters:200".into();
        let a = run_bench(&cfg).unwrap().to_csv(false).unwrap();
        let b = run_bench(&cfg).unwrap().to_csv(false).unwrap();
        assert_eq!(a, b);
        assert!(!a.contains("time_secs"));
    }

    #[test]
    fn time_limited_solve_is_flagged() {
        let mut cfg = BenchConfig::random(1, 220, 0.5, 1, 200, 3);
        cfg.algorithms = vec![Algorithm::Solve];
        cfg.solve_time_limit_secs = 0.05;
        let out = run_bench(&cfg).unwrap();
        let row = &out.rows[0];
        assert_eq!(row.optimal, Some(false));
        assert!(row.result.unwrap() > 0);
    }

    #[test]
    fn bad_cells_do_not_stop_the_run() {
        let mut cfg = BenchConfig::random(1, 10, 0.3, 1, 9, 0);
        cfg.instances.push(BenchInstance {
            name: "missing".into(),
            spec: InstanceSpec::File {
                path: "/nonexistent/x.graph".into(),
                format: None,
                weights: None,
                one_indexed: false,
            },
        });
        let out = run_bench(&cfg).unwrap();
        assert_eq!(out.rows.len(), 2);
        assert!(out.rows[0].error.is_none());
        assert!(out.rows[1].error.is_some());
    }

    #[test]
    fn config_json() {
        let text = r#"{
            "instances": [
                {"name": "a", "source": "random", "n": 12, "p": 0.3, "lo": 1, "hi": 200, "seed": 4},
                {"name": "b", "source": "file", "path": "g.graph", "weights": "gen:uniform:20:100:1"}
            ],
            "algorithms": ["reduce", "reduce-ablation"]
        }"#;
        let cfg: BenchConfig = serde_json::from_str(text).unwrap();
        assert_eq!(cfg.instances.len(), 2);
        assert_eq!(cfg.solve_time_limit_secs, 1000.0);
        assert_eq!(cfg.algorithms[1], Algorithm::ReduceAblation);
        assert!(run_bench(&BenchConfig { instances: vec![], ..cfg.clone() }).is_err());
    }

    #[test]
    fn ablation_variants_in_order() {
        let names: Vec<_> = ablation_pipelines().into_iter().map(|(n, _)| n).collect();
        assert_eq!(names, ["basic", "basic+confining", "basic+covering", "full"]);
    }
}
