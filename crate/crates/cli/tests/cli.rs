// SPDX-License-Identifier: MPL-2.0

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gaid::io::to_adjacency_matrix;
use gaid::simbench::{random_cpdag, random_dag, rng_for};
use gaid::{Distance, Graph, GraphKind, PairFilter};
use tempfile::TempDir;

fn gaid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gaid"))
        .args(args)
        .env_remove("GAID_THREADS")
        .output()
        .unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn full(p: usize) -> Graph {
    let edges: Vec<_> = (0..p).flat_map(|i| (i + 1..p).map(move |j| (i, j))).collect();
    Graph::from_edges(p, GraphKind::Dag, &edges, &[]).unwrap()
}

fn chain(p: usize) -> Graph {
    let edges: Vec<_> = (1..p).map(|i| (i - 1, i)).collect();
    Graph::from_edges(p, GraphKind::Dag, &edges, &[]).unwrap()
}

#[test]
fn parent_distance_full_vs_chain() {
    let dir = TempDir::new().unwrap();
    let t = write(&dir, "full5.csv", &to_adjacency_matrix(&full(5)));
    let g = write(&dir, "chain5.csv", &to_adjacency_matrix(&chain(5)));
    let o = gaid(&["dist", "--distance", "parent", "--true", s(&t), "--guess", s(&g)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), "count=9 normalized=0.45\n");
}

#[test]
fn json_output_schema() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.csv", &to_adjacency_matrix(&full(4)));
    let o = gaid(&["dist", "--distance", "shd", "--true", s(&g), "--guess", s(&g), "--json", "--threads", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["count"], 0);
    assert_eq!(v["normalized"], 0.0);
    assert_eq!(v["distance"], "shd");
    assert_eq!(v["p"], 4);
    assert_eq!(v["pair_total"], 6);
    assert_eq!(v["threads"], 2);
    assert!(v["elapsed_ms"].is_number());
    assert!(v["versions"]["gaid"].is_string());
}

#[test]
fn cycle_is_a_validation_error() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.csv", "0,1,0\n0,0,1\n1,0,0\n");
    let o = gaid(&["dist", "--distance", "parent", "--true", s(&bad), "--guess", s(&bad)]);
    assert_eq!(o.status.code(), Some(3));
    let err = stderr(&o);
    assert!(err.contains("bad.csv") && err.contains("cycle"), "{err}");
}

#[test]
fn parse_errors_name_file_and_line() {
    let dir = TempDir::new().unwrap();
    let ok = write(&dir, "ok.csv", "0,1\n0,0\n");
    let bad = write(&dir, "ill.csv", "0,1\n0,7\n");
    let o = gaid(&["dist", "--distance", "oset", "--true", s(&ok), "--guess", s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("ill.csv") && err.contains("line 2"), "{err}");

    let ragged = write(&dir, "ragged.csv", "0,1,0\n0,0\n0,0,0\n");
    let o = gaid(&["dist", "--distance", "oset", "--true", s(&ragged), "--guess", s(&ok)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(gaid(&["dist", "--distance", "parent"]).status.code(), Some(2));
    assert_eq!(gaid(&["dist", "--distance", "nope", "--true", "a", "--guess", "b"]).status.code(), Some(2));
    assert_eq!(gaid(&["gen", "--nodes", "4", "--unknown"]).status.code(), Some(2));
    assert_eq!(gaid(&["dist", "--distance", "parent", "--true", "/nonexistent", "--guess", "/nonexistent"]).status.code(), Some(2));
}

#[test]
fn node_count_mismatch_and_bad_filter() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.csv", &to_adjacency_matrix(&full(3)));
    let b = write(&dir, "b.csv", &to_adjacency_matrix(&full(4)));
    let o = gaid(&["dist", "--distance", "parent", "--true", s(&a), "--guess", s(&b)]);
    assert_eq!(o.status.code(), Some(3));
    let o = gaid(&["dist", "--distance", "parent", "--true", s(&a), "--guess", s(&a), "--treatments", "9"]);
    assert_eq!(o.status.code(), Some(2));
    let o = gaid(&["dist", "--distance", "shd", "--true", s(&a), "--guess", s(&a), "--targets", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn counts_match_library_on_random_pairs() {
    let dir = TempDir::new().unwrap();
    for i in 0..12u64 {
        let mut rng = rng_for(5, i);
        let p = 3 + (i as usize % 8);
        let (t, g) = if i % 2 == 0 {
            (random_dag(p, 0.4, &mut rng), random_dag(p, 0.4, &mut rng))
        } else {
            (random_cpdag(p, 0.4, &mut rng), random_cpdag(p, 0.4, &mut rng))
        };
        let tp = write(&dir, "t.csv", &to_adjacency_matrix(&t));
        let gp = write(&dir, "g.csv", &to_adjacency_matrix(&g));
        for d in ["parent", "ancestor", "oset", "shd"] {
            let want = d.parse::<Distance>().unwrap().compute(&t, &g, &PairFilter::all()).unwrap().count;
            let o = gaid(&["dist", "--distance", d, "--true", s(&tp), "--guess", s(&gp), "--kind", t.kind_name(), "--json"]);
            assert!(o.status.success(), "{}", stderr(&o));
            let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
            assert_eq!(v["count"].as_u64(), Some(want), "pair {i} {d}");
        }
    }
}

trait KindName {
    fn kind_name(&self) -> &'static str;
}

impl KindName for Graph {
    fn kind_name(&self) -> &'static str {
        match self.kind() {
            GraphKind::Dag => "dag",
            GraphKind::Cpdag => "cpdag",
        }
    }
}

#[test]
fn edge_list_and_header_inputs() {
    let dir = TempDir::new().unwrap();
    let t = write(&dir, "t.txt", "p 3\n0 1 d\n1 2 d\n0 2 d\n");
    let g = write(&dir, "g.txt", "# chain\n0 1 d\n1 2 d\n");
    let o = gaid(&["dist", "--distance", "parent", "--format", "edgelist", "--true", s(&t), "--guess", s(&g)]);
    assert_eq!(stdout(&o), "count=1 normalized=0.16666666666666666\n", "{}", stderr(&o));

    let h = write(&dir, "h.csv", "a,b,c\n0,1,1\n0,0,1\n0,0,0\n");
    let o = gaid(&["dist", "--distance", "shd", "--header", "--true", s(&h), "--guess", s(&h)]);
    assert_eq!(stdout(&o), "count=0 normalized=0\n", "{}", stderr(&o));
}

#[test]
fn order_subcommand() {
    let dir = TempDir::new().unwrap();
    let t = write(&dir, "chain.csv", &to_adjacency_matrix(&chain(4)));
    let forward = write(&dir, "fwd.txt", "0 1\n1 2\n2 3\n");
    let backward = write(&dir, "bwd.txt", "3 2\n2 1\n1 0\n");
    let o = gaid(&["order", "--true", s(&t), "--order", s(&forward)]);
    assert_eq!(stdout(&o), "count=0 normalized=0\n", "{}", stderr(&o));
    let o = gaid(&["order", "--true", s(&t), "--order", s(&backward), "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["count"], 12);
    let cyclic = write(&dir, "cyc.txt", "0 1\n1 0\n");
    assert_eq!(gaid(&["order", "--true", s(&t), "--order", s(&cyclic)]).status.code(), Some(3));
}

#[test]
fn gen_is_deterministic_and_parseable() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let o = gaid(&["gen", "--nodes", "12", "--density", "0.4", "--seed", "9", "-o", s(path)]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let o = gaid(&["dist", "--distance", "ancestor", "--true", s(&a), "--guess", s(&b)]);
    assert_eq!(stdout(&o), "count=0 normalized=0\n");
}

#[test]
fn bench_and_compare_reports() {
    let o = gaid(&["bench", "--sizes", "8,16", "--reps", "1", "--distance", "parent"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.starts_with("p,m,mean_ms,rel_p2,rel_p3,rel_p4"), "{out}");
    assert_eq!(out.lines().count(), 3);
    assert_eq!(gaid(&["bench", "--distance", "shd"]).status.code(), Some(2));

    let o = gaid(&["compare", "--nodes", "8", "--pairs", "4", "--json", "--seed", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
    assert!(v["correlations"].is_array());
}
