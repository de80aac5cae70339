use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn mwis(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mwis")).args(args).output().expect("run mwis")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn p3(dir: &Path) -> String {
    let path = dir.join("p3.graph");
    fs::write(&path, "3 2 10\n1 2\n3 1 3\n1 2\n").unwrap();
    path.to_str().unwrap().to_string()
}

fn random_dimacs(dir: &Path) -> String {
    let g = causal_mwis::generate::gnp_uniform(70, 0.07, 1, 200, 5);
    let mut s = format!("p edge {} {}\n", g.alive_count(), g.edge_count());
    for v in g.vertices() {
        s += &format!("v {} {}\n", v.index() + 1, g.weight(v));
        for u in g.neighbors(v).filter(|&u| u > v) {
            s += &format!("e {} {}\n", v.index() + 1, u.index() + 1);
        }
    }
    let path = dir.join("g.dimacs");
    fs::write(&path, s).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let g = p3(dir.path());
    let sol = dir.path().join("s.txt");

    fs::write(&sol, "1\n").unwrap();
    let o = mwis(&["verify", "--in", &g, "--solution", sol.to_str().unwrap(), "--json"]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(v["weight"], 3);
    assert_eq!(v["cover_weight"], 2);
    assert_eq!(v["cover_valid"], true);

    fs::write(&sol, "0\n1\n").unwrap();
    assert_eq!(code(&mwis(&["verify", "--in", &g, "--solution", sol.to_str().unwrap()])), 3);
    fs::write(&sol, "7\n").unwrap();
    assert_eq!(code(&mwis(&["verify", "--in", &g, "--solution", sol.to_str().unwrap()])), 3);

    fs::write(&sol, "").unwrap();
    let o = mwis(&["verify", "--in", &g, "--solution", sol.to_str().unwrap(), "--json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["weight"], 0);

    fs::write(&sol, "0\n2\n").unwrap();
    let o = mwis(&["verify", "--in", &g, "--solution", sol.to_str().unwrap(), "--cover"]);
    assert_eq!(code(&o), 0);
    fs::write(&sol, "0\n").unwrap();
    assert_eq!(code(&mwis(&["verify", "--in", &g, "--solution", sol.to_str().unwrap(), "--cover"])), 3);
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.graph");
    assert_eq!(code(&mwis(&["solve", "--in", missing.to_str().unwrap()])), 2);
    let bad = dir.path().join("bad.graph");
    fs::write(&bad, "2 1 10\n1 3\n").unwrap();
    assert_eq!(code(&mwis(&["reduce", "--in", bad.to_str().unwrap()])), 2);
    let g = p3(dir.path());
    assert_eq!(code(&mwis(&["reduce", "--in", &g, "--disable-step", "nonsense"])), 2);
    assert_eq!(code(&mwis(&["reduce", "--in", &g, "--weights", "gen:uniform:0:5:1"])), 2);
    assert_eq!(code(&mwis(&["gen-weights", "--n", "3", "--lo", "0"])), 2);
    assert_eq!(code(&mwis(&["explain", "--in", &g, "--vertex", "9"])), 2);
}

#[test]
fn reduce_writes_stats_kernel_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let g = random_dimacs(dir.path());
    let stats = dir.path().join("stats.json");
    let kernel = dir.path().join("k.graph");
    let trace = dir.path().join("t.json");
    let o = mwis(&[
        "reduce", "--in", &g, "--stats", stats.to_str().unwrap(), "--out-kernel", kernel.to_str().unwrap(),
        "--out-trace", trace.to_str().unwrap(), "--disable-step", "covering",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let s: Value = serde_json::from_str(&fs::read_to_string(&stats).unwrap()).unwrap();
    for key in ["n", "m", "kernel_n", "kernel_m", "offset", "ratio_percent", "per_rule", "total_millis"] {
        assert!(s.get(key).is_some(), "missing {key}");
    }
    assert!(s["per_rule"].get("covering").is_none());
    for key in ["removed", "included", "contracted", "millis"] {
        assert!(s["per_rule"]["isolated"].get(key).is_some(), "missing per_rule.{key}");
    }
    let kn = s["kernel_n"].as_u64().unwrap();
    let header = fs::read_to_string(&kernel).unwrap().lines().next().unwrap().to_string();
    assert!(header.starts_with(&format!("{kn} ")));
    let t: Value = serde_json::from_str(&fs::read_to_string(&trace).unwrap()).unwrap();
    assert_eq!(t["kernel_ids"].as_array().unwrap().len() as u64, kn);
    assert_eq!(t["offset"], s["offset"]);
}

#[test]
fn solve_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let g = random_dimacs(dir.path());
    let sol = dir.path().join("s.txt");
    let stats = dir.path().join("st.json");
    let mut weights = Vec::new();
    for (constraints, branching) in [("on", "confining"), ("off", "plain")] {
        let o = mwis(&[
            "solve", "--in", &g, "--constraints", constraints, "--branching", branching, "--time-limit", "60",
            "--out-solution", sol.to_str().unwrap(), "--stats", stats.to_str().unwrap(), "--json",
        ]);
        assert_eq!(code(&o), 0);
        let v = stdout_json(&o);
        for key in ["best_weight", "optimal", "nodes", "prunes_bound", "prunes_constraint", "simplifications", "elapsed_secs"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["optimal"], true);
        let file: Value = serde_json::from_str(&fs::read_to_string(&stats).unwrap()).unwrap();
        assert_eq!(file["best_weight"], v["best_weight"]);
        let ids: Vec<usize> = fs::read_to_string(&sol).unwrap().lines().map(|l| l.parse().unwrap()).collect();
        assert!(ids.windows(2).all(|w| w[0] < w[1]), "solution file must be ascending");
        let check = mwis(&["verify", "--in", &g, "--solution", sol.to_str().unwrap(), "--json"]);
        assert_eq!(code(&check), 0);
        assert_eq!(stdout_json(&check)["weight"], v["best_weight"]);
        weights.push(v["best_weight"].clone());
    }
    assert_eq!(weights[0], weights[1]);
}

#[test]
fn search_reports_and_solution_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let g = random_dimacs(dir.path());
    let sol = dir.path().join("s.txt");
    let run = |seed: &str| {
        let o = mwis(&[
            "search", "--in", &g, "--cutoff", "iters:2000", "--seed", seed, "--cit", "on", "--out-solution",
            sol.to_str().unwrap(), "--json",
        ]);
        assert_eq!(code(&o), 0);
        stdout_json(&o)
    };
    let a = run("9");
    for key in ["best_is_weight", "best_cover_weight", "iterations", "cit_bulk_removals", "elapsed_secs", "seed"] {
        assert!(a.get(key).is_some(), "missing {key}");
    }
    assert_eq!(a["seed"], 9);
    let check = mwis(&["verify", "--in", &g, "--solution", sol.to_str().unwrap(), "--json"]);
    assert_eq!(code(&check), 0);
    assert_eq!(stdout_json(&check)["weight"], a["best_is_weight"]);
    let b = run("9");
    assert_eq!(a["best_is_weight"], b["best_is_weight"]);
    assert_eq!(a["iterations"], b["iterations"]);
}

#[test]
fn explain_prints_sets() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p4.graph");
    // P4 with weights 2,3,2,1: vertex 0 is confined by {0, 2}
    fs::write(&path, "4 3 10\n2 2\n3 1 3\n2 2 4\n1 3\n").unwrap();
    let o = mwis(&["explain", "--in", path.to_str().unwrap(), "--vertex", "0"]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(v["confining"]["confined"], serde_json::json!([0, 2]));
    assert_eq!(v["inferred_confining"], serde_json::json!([0, 2]));
    assert!(v.get("covering").is_some() && v.get("inferred_covering").is_some());
}

#[test]
fn gen_weights_is_reproducible() {
    let a = mwis(&["gen-weights", "--n", "6", "--lo", "20", "--hi", "100", "--seed", "42"]);
    let b = mwis(&["gen-weights", "--n", "6", "--lo", "20", "--hi", "100", "--seed", "42"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let spec = causal_mwis::weights::WeightGenSpec::uniform(20, 100, 42).unwrap();
    let expect: String = causal_mwis::weights::gen_weights(6, &spec).iter().map(|w| format!("{w}\n")).collect();
    assert_eq!(String::from_utf8(a.stdout).unwrap(), expect);
}

#[test]
fn bench_writes_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = mwis(&[
        "bench", "--random", "3", "--n", "40", "--p", "0.1", "--algorithms", "reduce", "--out-dir",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(out.join("bench.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    assert!(csv.lines().next().unwrap().contains("kernel_n,ratio_percent"));
    let json: Value = serde_json::from_str(&fs::read_to_string(out.join("bench.json")).unwrap()).unwrap();
    assert_eq!(json["rows"].as_array().unwrap().len(), 3);

    let cfg = dir.path().join("bench.json");
    fs::write(
        &cfg,
        r#"{"instances": [{"name": "r", "source": "random", "n": 30, "p": 0.1, "lo": 1, "hi": 200, "seed": 2}],
            "algorithms": ["reduce-ablation", "search"], "search_cutoff": "iters:300"}"#,
    )
    .unwrap();
    let o = mwis(&["bench", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 1 + 4 + 2);
}
