//! `mwis` — command-line front end.
//!
//! Exit codes: 0 success, 2 input error, 3 verification failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use causal_mwis::bench::{run_bench, Algorithm, BenchConfig};
use causal_mwis::cit::{explain, CitBudget};
use causal_mwis::io::{format_solution, load_graph, read_solution, to_metis, Format, LoadOptions, WeightSource};
use causal_mwis::localsearch::{causal_search_reduced, Cutoff, SearchConfig};
use causal_mwis::reduce::{reduce_with, ReducePipeline, Step};
use causal_mwis::solver::{solve, Branching, SolverConfig};
use causal_mwis::verify::{verify, verify_cover, VerifyError};
use causal_mwis::weights::{gen_weights, WeightGenSpec};
use causal_mwis::{VertexId, WeightedGraph};

#[derive(Parser)]
#[command(name = "mwis", version, about = "Maximum weight independent set / minimum weight vertex cover toolkit")]
struct Cli {
    /// Graph format; guessed from the file extension when omitted.
    #[arg(long, global = true)]
    format: Option<Format>,
    /// Random seed (search, gen-weights, bench).
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Print machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args)]
struct GraphArgs {
    /// Input graph.
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    /// Weight file or `gen:uniform:LO:HI:SEED`; replaces in-file weights.
    #[arg(long, value_name = "PATH|gen:uniform:LO:HI:SEED")]
    weights: Option<WeightSource>,
    /// Edge lists only: vertex ids start at 1.
    #[arg(long)]
    one_indexed: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Toggle {
    On,
    Off,
}

impl Toggle {
    fn on(self) -> bool {
        matches!(self, Toggle::On)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BranchArg {
    Confining,
    Plain,
}

#[derive(Subcommand)]
enum Command {
    /// Kernelize a graph.
    Reduce {
        #[command(flatten)]
        graph: GraphArgs,
        /// Write the (renumbered) kernel in METIS format.
        #[arg(long)]
        out_kernel: Option<PathBuf>,
        /// Write the reduction trace and kernel id map as JSON.
        #[arg(long)]
        out_trace: Option<PathBuf>,
        #[arg(long, value_name = "PATH.json")]
        stats: Option<PathBuf>,
        /// Skip a pipeline step (isolated, neighborhood, pendant, domination, confining, covering).
        #[arg(long, value_name = "NAME")]
        disable_step: Vec<Step>,
    },
    /// Exact branch-and-reduce.
    Solve {
        #[command(flatten)]
        graph: GraphArgs,
        /// Seconds.
        #[arg(long, default_value_t = 1000.0)]
        time_limit: f64,
        #[arg(long, value_enum, default_value = "on")]
        constraints: Toggle,
        #[arg(long, value_enum, default_value = "confining")]
        branching: BranchArg,
        #[arg(long)]
        out_solution: Option<PathBuf>,
        #[arg(long, value_name = "PATH.json")]
        stats: Option<PathBuf>,
    },
    /// Local search for a light vertex cover (heavy independent set).
    Search {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value = "10", value_name = "SECS|iters:N")]
        cutoff: Cutoff,
        #[arg(long, value_enum, default_value = "on")]
        cit: Toggle,
        /// Independent set (complement of the best cover).
        #[arg(long)]
        out_solution: Option<PathBuf>,
        #[arg(long)]
        out_cover: Option<PathBuf>,
        #[arg(long, value_name = "PATH.json")]
        stats: Option<PathBuf>,
    },
    /// Check a solution file against a graph.
    Verify {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_name = "PATH")]
        solution: PathBuf,
        /// The file lists a vertex cover rather than an independent set.
        #[arg(long)]
        cover: bool,
    },
    /// Print the confining, covering and inferred sets of a vertex as JSON.
    Explain {
        #[command(flatten)]
        graph: GraphArgs,
        /// 0-indexed vertex id.
        #[arg(long)]
        vertex: usize,
    },
    /// Reproducible uniform integer weights, one per line.
    GenWeights {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        lo: i64,
        #[arg(long, default_value_t = 200)]
        hi: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a benchmark matrix and emit CSV + JSON.
    Bench {
        /// JSON benchmark config.
        #[arg(long, conflicts_with = "random")]
        config: Option<PathBuf>,
        /// Instead of a config: this many random G(n, p) instances.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 200)]
        n: usize,
        #[arg(long, default_value_t = 0.05)]
        p: f64,
        #[arg(long, default_value_t = 1)]
        lo: i64,
        #[arg(long, default_value_t = 200)]
        hi: i64,
        /// Comma-separated: reduce, reduce-ablation, solve, search.
        #[arg(long, value_delimiter = ',', default_value = "reduce")]
        algorithms: Vec<Algorithm>,
        /// Per-cell solve limit in seconds (overrides the config).
        #[arg(long)]
        time_limit: Option<f64>,
        /// Search cutoff (overrides the config).
        #[arg(long, value_name = "SECS|iters:N")]
        cutoff: Option<String>,
        #[arg(long)]
        threads: Option<usize>,
        /// Directory for bench.csv and bench.json.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

/// Verification failures map to exit code 3.
#[derive(Debug, thiserror::Error)]
#[error("verification failed: {0}")]
struct VerificationFailed(VerifyError);

fn load(args: &GraphArgs, format: Option<Format>) -> Result<WeightedGraph> {
    let opts = LoadOptions { format, one_indexed: args.one_indexed, weights: args.weights.clone() };
    let g = load_graph(&args.input, &opts).with_context(|| format!("loading {}", args.input.display()))?;
    log::info!("{}: {} vertices, {} edges", args.input.display(), g.alive_count(), g.edge_count());
    Ok(g)
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write(path, &serde_json::to_string_pretty(value)?)
}

fn ids(set: &[VertexId]) -> Vec<usize> {
    set.iter().map(|v| v.index()).collect()
}

fn run(cli: Cli) -> Result<()> {
    let Cli { format, seed, json, cmd } = cli;
    match cmd {
        Command::Reduce { graph, out_kernel, out_trace, stats, disable_step } => {
            let g = load(&graph, format)?;
            let pipeline = ReducePipeline::default().without(&disable_step);
            let k = reduce_with(&g, &pipeline);
            let summary = k.summary(&g);
            if let Some(path) = out_kernel {
                write(&path, &to_metis(&k.kernel).0)?;
            }
            if let Some(path) = out_trace {
                let (_, map) = to_metis(&k.kernel);
                write_json(&path, &json!({ "offset": k.offset, "kernel_ids": map, "trace": k.trace }))?;
            }
            if let Some(path) = stats {
                write_json(&path, &summary)?;
            }
            if json {
                println!("{}", serde_json::to_string_pretty(&summary)?);
            } else {
                println!(
                    "kernel {} / {} vertices ({:.2}%), {} edges, offset {}, {:.1} ms",
                    summary.kernel_n, summary.n, summary.ratio_percent, summary.kernel_m, summary.offset,
                    summary.total_millis
                );
            }
        }
        Command::Solve { graph, time_limit, constraints, branching, out_solution, stats } => {
            let g = load(&graph, format)?;
            let limit = Duration::try_from_secs_f64(time_limit).context("bad --time-limit")?;
            let cfg = SolverConfig {
                constraints: constraints.on(),
                branching: match branching {
                    BranchArg::Confining => Branching::Confining,
                    BranchArg::Plain => Branching::Plain,
                },
                time_limit: Some(limit),
                ..SolverConfig::default()
            };
            let r = solve(&g, &cfg);
            let record = json!({
                "best_weight": r.best_weight,
                "optimal": r.optimal,
                "nodes": r.nodes,
                "prunes_bound": r.prunes_bound,
                "prunes_constraint": r.prunes_constraint,
                "simplifications": r.simplifications,
                "elapsed_secs": r.elapsed_secs,
            });
            if let Some(path) = out_solution {
                write(&path, &format_solution(&ids(&r.solution)))?;
            }
            if let Some(path) = stats {
                write_json(&path, &record)?;
            }
            if json {
                println!("{}", serde_json::to_string_pretty(&record)?);
            } else {
                println!(
                    "weight {} ({}), {} vertices, {} nodes, {:.3} s",
                    r.best_weight,
                    if r.optimal { "optimal" } else { "time limit" },
                    r.solution.len(),
                    r.nodes,
                    r.elapsed_secs
                );
            }
        }
        Command::Search { graph, cutoff, cit, out_solution, out_cover, stats } => {
            let g = load(&graph, format)?;
            let cfg = SearchConfig { cutoff, seed, cit: cit.on(), ..SearchConfig::default() };
            let r = causal_search_reduced(&g, &cfg, &ReducePipeline::default());
            let record = json!({
                "best_is_weight": r.independent_weight,
                "best_cover_weight": r.cover_weight,
                "iterations": r.iterations,
                "cit_bulk_removals": r.cit_bulk_removals,
                "elapsed_secs": r.elapsed_secs,
                "seed": r.seed,
            });
            if let Some(path) = out_solution {
                write(&path, &format_solution(&ids(&r.independent_set)))?;
            }
            if let Some(path) = out_cover {
                write(&path, &format_solution(&ids(&r.cover)))?;
            }
            if let Some(path) = stats {
                write_json(&path, &record)?;
            }
            if json {
                println!("{}", serde_json::to_string_pretty(&record)?);
            } else {
                println!(
                    "independent set {} / cover {} after {} iterations, {:.3} s",
                    r.independent_weight, r.cover_weight, r.iterations, r.elapsed_secs
                );
            }
        }
        Command::Verify { graph, solution, cover } => {
            let g = load(&graph, format)?;
            let set = read_solution(&solution).with_context(|| format!("reading {}", solution.display()))?;
            if cover {
                let w = verify_cover(&g, &set).map_err(VerificationFailed)?;
                let total: i64 = g.vertices().map(|v| g.weight(v)).sum();
                if json {
                    println!("{}", json!({ "cover_valid": true, "cover_weight": w, "independent_weight": total - w }));
                } else {
                    println!("valid cover, weight {w}; complement weight {}", total - w);
                }
            } else {
                let r = verify(&g, &set).map_err(VerificationFailed)?;
                if json {
                    println!("{}", serde_json::to_string_pretty(&r)?);
                } else {
                    println!(
                        "independent, {} vertices, weight {}; complement cover weight {} ({})",
                        r.size,
                        r.weight,
                        r.cover_weight,
                        if r.cover_valid { "valid" } else { "invalid" }
                    );
                }
            }
        }
        Command::Explain { graph, vertex } => {
            let g = load(&graph, format)?;
            if vertex >= g.capacity() {
                bail!("vertex {vertex} out of range (graph has {} vertices)", g.capacity());
            }
            let report = explain(&g, VertexId::new(vertex), &CitBudget::default())?;
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        Command::GenWeights { n, lo, hi, out } => {
            if n == 0 {
                bail!("--n must be at least 1");
            }
            let spec = WeightGenSpec::uniform(lo, hi, seed)?;
            let w = gen_weights(n, &spec);
            let text: String = w.iter().map(|x| format!("{x}\n")).collect();
            match out {
                Some(path) => write(&path, &text)?,
                None if json => println!("{}", serde_json::to_string(&w)?),
                None => print!("{text}"),
            }
        }
        Command::Bench { config, random, n, p, lo, hi, algorithms, time_limit, cutoff, threads, out_dir } => {
            let mut cfg = match (config, random) {
                (Some(path), _) => BenchConfig::from_json_file(&path)?,
                (None, Some(count)) => {
                    BenchConfig { algorithms, ..BenchConfig::random(count, n, p, lo, hi, seed) }
                }
                (None, None) => bail!("give either --config or --random"),
            };
            if let Some(t) = time_limit {
                cfg.solve_time_limit_secs = t;
            }
            if let Some(c) = cutoff {
                cfg.search_cutoff = c;
            }
            if threads.is_some() {
                cfg.threads = threads;
            }
            let out = run_bench(&cfg)?;
            if let Some(dir) = out_dir {
                let (c, j) = out.write(&dir)?;
                log::info!("wrote {} and {}", c.display(), j.display());
            }
            if json {
                println!("{}", out.to_json()?);
            } else {
                print!("{}", out.to_csv(true)?);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<VerificationFailed>().is_some() {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
