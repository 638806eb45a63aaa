use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use treelab::exact::parse_exact;
use treelab::{Tree, TreeData};

fn treelab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_treelab"))
        .args(args)
        .env_remove("TREELAB_SEED")
        .env_remove("TREELAB_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_tree(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name);
    let path = path.to_str().unwrap().to_string();
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", &path]);
    stdout(&treelab(&full));
    path
}

#[test]
fn enum_lists_catalog() {
    let out = stdout(&treelab(&["enum", "--k", "6"]));
    let trees: Vec<TreeData> = serde_json::from_str(&out).unwrap();
    assert_eq!(trees.len(), 6);
    let first = Tree::try_from(trees[0].clone()).unwrap();
    assert_eq!(first.max_degree(), 2);
}

#[test]
fn profile_of_a_path() {
    let dir = tempfile::tempdir().unwrap();
    let p9 = write_tree(dir.path(), "p9.json", &["path", "--n", "9"]);
    let out = stdout(&treelab(&["profile", "--tree", &p9, "--k", "5", "--counts"]));
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["k"], 5);
    assert_eq!(v["coords"], serde_json::json!(["1", "0", "0"]));
    assert_eq!(v["counts"], serde_json::json!(["5", "0", "0"]));
    let csv = stdout(&treelab(&["profile", "--tree", &p9, "--k", "4", "--format", "csv"]));
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.lines().nth(1).unwrap().ends_with(",1,1"));
}

#[test]
fn profile_round_trips_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let m = write_tree(dir.path(), "m.json", &["millipede", "--d", "2", "--length", "5"]);
    let out = stdout(&treelab(&["profile", "--tree", &m, "--k", "5", "--counts"]));
    let v: Value = serde_json::from_str(&out).unwrap();
    let coords: Vec<_> = v["coords_exact"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| parse_exact(c.as_str().unwrap()).unwrap())
        .collect();
    assert_eq!(coords[0], parse_exact("27/104").unwrap());
    assert_eq!(coords[1], parse_exact("5/104").unwrap());
    assert_eq!(coords[2], parse_exact("72/104").unwrap());
    assert_eq!(v["total"], "104");
}

#[test]
fn profile_refuses_small_host() {
    let dir = tempfile::tempdir().unwrap();
    let p3 = write_tree(dir.path(), "p3.json", &["path", "--n", "3"]);
    let o = treelab(&["profile", "--tree", &p3, "--k", "5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn generated_trees_parse_back() {
    let dir = tempfile::tempdir().unwrap();
    let star = write_tree(dir.path(), "s.json", &["star", "--n", "6"]);
    let path = write_tree(dir.path(), "p.json", &["path", "--n", "5"]);
    let glued = write_tree(dir.path(), "g.json", &["glue", "--t", &star, "--s", &path, "--k", "5"]);
    let t = Tree::parse(&std::fs::read_to_string(&glued).unwrap()).unwrap();
    assert_eq!(t.len(), 6 + 5 + 4);
    let power = write_tree(dir.path(), "w.json", &["gluepower", "--tree", &star, "--k", "4", "--ell", "3"]);
    let w = Tree::parse(&std::fs::read_to_string(&power).unwrap()).unwrap();
    assert_eq!(w.len(), 3 * 6 + 2 * 3);
    let a = stdout(&treelab(&["gen", "random", "--n", "30", "--seed", "9"]));
    let b = stdout(&treelab(&["gen", "random", "--n", "30", "--seed", "9"]));
    assert_eq!(a, b);
    assert_eq!(Tree::parse(&a).unwrap().len(), 30);
    let o = treelab(&["gen", "convex", "--t", &path, "--s", &star, "--k", "5", "--alpha", "1", "--beta", "2", "--reduce"]);
    assert!(Tree::parse(&stdout(&o)).is_ok());
}

#[test]
fn verify_passes_and_is_thread_independent() {
    let mut outputs = Vec::new();
    for threads in ["1", "2", "8"] {
        let o = treelab(&["verify", "--suite", "all", "--max-n", "9", "--seed", "5", "--random", "30", "--threads", threads]);
        assert_eq!(o.status.code(), Some(0));
        outputs.push(o.stdout);
    }
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
    let reports: Vec<Value> = serde_json::from_slice(&outputs[0]).unwrap();
    assert!(reports.iter().all(|r| r["holds"] == true || r["asserted"] == false));
}

#[test]
fn verify_reference_run() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let o = treelab(&["verify", "--suite", "all", "--max-n", "11", "--report", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let reports: Vec<Value> = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert!(!reports.is_empty());
}

#[test]
fn region_and_scan_and_inducibility() {
    let csv = stdout(&treelab(&["region", "--d-max", "4"]));
    assert!(csv.lines().any(|l| l == "m,1,0.5,0,1/2,0"));
    let scan = stdout(&treelab(&["scan", "--max-n", "9", "--budget", "10", "--seed", "3"]));
    let v: Value = serde_json::from_str(&scan).unwrap();
    assert!(v["max_value"].as_str().unwrap().parse::<i64>().unwrap() >= 4);

    let dir = tempfile::tempdir().unwrap();
    let star = write_tree(dir.path(), "s5.json", &["star", "--n", "5"]);
    let ind = stdout(&treelab(&["inducibility", "--tree", &star, "--schedule", "1,2"]));
    let v: Value = serde_json::from_str(&ind).unwrap();
    assert_eq!(v["steps"][0]["density_exact"], "1");
}

#[test]
fn config_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("treelab.conf");
    std::fs::write(&cfg, "seed = 1\n").unwrap();
    let run = |env_seed: Option<&str>, flag: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_treelab"));
        c.args(["gen", "random", "--n", "20", "--config", cfg.to_str().unwrap()]);
        c.env_remove("TREELAB_SEED");
        if let Some(s) = env_seed {
            c.env("TREELAB_SEED", s);
        }
        if let Some(s) = flag {
            c.args(["--seed", s]);
        }
        stdout(&c.output().unwrap())
    };
    let by_seed = |s: &str| stdout(&treelab(&["gen", "random", "--n", "20", "--seed", s]));
    assert_eq!(run(None, None), by_seed("1"));
    assert_eq!(run(Some("2"), None), by_seed("2"));
    assert_eq!(run(Some("2"), Some("3")), by_seed("3"));
}

#[test]
fn exit_codes() {
    assert_eq!(treelab(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(treelab(&["enum"]).status.code(), Some(2));
    assert_eq!(treelab(&["enum", "--k", "40"]).status.code(), Some(2));
    assert_eq!(treelab(&["--help"]).status.code(), Some(0));
    assert_eq!(treelab(&["verify", "--help"]).status.code(), Some(0));
    let v = treelab(&["--version"]);
    assert!(stdout(&v).starts_with("treelab "));
}
