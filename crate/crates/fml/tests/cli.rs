use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fml::format::{parse_graph, parse_labeling, parse_tree};

fn fml(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fml")).args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn gen_geometric(dir: &Path) -> PathBuf {
    let path = dir.join("g.txt");
    let o = fml(&["gen", "--family", "geometric", "--n", "200", "--radius", "0.15", "--colors", "16,16", "--seed", "3", "-o", s(&path)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    path
}

#[test]
fn gen_solve_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let inst = gen_geometric(dir.path());
    let g = parse_graph(&std::fs::read_to_string(&inst).unwrap()).unwrap();
    assert_eq!((g.blue_count(), g.red_count()), (16, 16));

    let sol = dir.path().join("sol.txt");
    let tree = dir.path().join("tree.txt");
    let rec = dir.path().join("rec.json");
    let o = fml(&[
        "solve", "--instance", s(&inst), "--algorithm", "fml-exact", "--alpha", "0.5", "-o", s(&sol), "--record", s(&rec),
        "--dump-tree", s(&tree),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let record: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&rec).unwrap()).unwrap();
    assert_eq!(record["feasible"], true);
    let labeling = parse_labeling(&std::fs::read_to_string(&sol).unwrap()).unwrap();
    assert_eq!(record["cost"].as_u64().unwrap() as usize, labeling.size());
    assert_eq!(parse_tree(&std::fs::read_to_string(&tree).unwrap()).unwrap().n(), g.n());

    let o = fml(&["verify", "--instance", s(&inst), "--solution", s(&sol), "--alpha", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    // Asking for everything is not met by a half-coverage labeling.
    let o = fml(&["verify", "--instance", s(&inst), "--solution", s(&sol), "--alpha", "1.0"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bicriteria_needs_xi_and_greedy_needs_pooled() {
    let dir = tempfile::tempdir().unwrap();
    let inst = gen_geometric(dir.path());
    let sol = dir.path().join("bi.txt");
    let o = fml(&["solve", "--instance", s(&inst), "--algorithm", "fml-bicriteria", "--alpha", "0.5", "--epsilon", "0.5", "-o", s(&sol)]);
    assert_eq!(o.status.code(), Some(0));
    let record: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let xi = record["xi"].as_f64().unwrap();
    assert!(xi >= 1.0);
    let o = fml(&["verify", "--instance", s(&inst), "--solution", s(&sol), "--alpha", "0.5", "--xi", &xi.to_string()]);
    assert_eq!(o.status.code(), Some(0));

    let greedy = dir.path().join("greedy.txt");
    fml(&["solve", "--instance", s(&inst), "--algorithm", "greedy", "--alpha", "0.5", "-o", s(&greedy)]);
    let o = fml(&["verify", "--instance", s(&inst), "--solution", s(&greedy), "--alpha", "0.5", "--pooled"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "3 2\n0 1\n1 7\nterminals 0\n").unwrap();
    let o = fml(&["solve", "--instance", s(&bad), "--algorithm", "closest", "--alpha", "0.5"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.txt:3"));

    let inst = gen_geometric(dir.path());
    let o = fml(&["solve", "--instance", s(&inst), "--algorithm", "closest", "--alpha", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
    let o = fml(&["solve", "--instance", s(&inst), "--algorithm", "closest"]);
    assert_eq!(o.status.code(), Some(2));
    let o = fml(&["solve", "--instance", s(&dir.path().join("missing.txt")), "--algorithm", "closest", "--alpha", "0.5"]);
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn setcover_gen_reports_closed_form() {
    let o = fml(&["gen", "--family", "setcover", "--universe", "4", "--sets", "0,1;2,3", "--chain", "3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let g = parse_graph(&text).unwrap();
    // terminal + 4 elements + 2 sets + 2 chain nodes per set
    assert_eq!(g.n(), 1 + 4 + 2 + 2 * 2);
    assert_eq!(g.blue_count(), 4);
    assert!(text.contains("10"), "closed form 4 + 3 * 2 should be reported:\n{text}");
}

#[test]
fn edge_list_ingestion() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("edges.txt");
    let colors = dir.path().join("colors.txt");
    std::fs::write(&edges, "# raw\n100 200\n200 300\n300 100\n300 400\n").unwrap();
    std::fs::write(&colors, "200 B\n400 R\n").unwrap();
    let out = dir.path().join("inst.txt");
    let o = fml(&[
        "gen", "--family", "edgelist", "--input", s(&edges), "--color-file", s(&colors), "--terminal", "100", "-o", s(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let g = parse_graph(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!((g.n(), g.m(), g.blue_count(), g.red_count()), (4, 4, 1, 1));
    let o = fml(&["solve", "--instance", s(&out), "--algorithm", "fml-exact", "--alpha", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let record: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(record["cost"], 3);
}

#[test]
fn bench_csv_shape() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bench.csv");
    let o = fml(&[
        "bench", "--family", "ba", "--n", "120", "--mbar", "2", "--colors", "10,10", "--algorithms", "closest,alternating", "--seeds",
        "0..3", "--alpha", "0.5", "-o", s(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let blocks: Vec<Vec<&str>> = text.split("\n\n").map(|b| b.lines().filter(|l| !l.is_empty()).collect()).collect();
    assert_eq!(blocks.len(), 2);
    assert_eq!(blocks[0].len(), 1 + 6);
    assert_eq!(blocks[1].len(), 1 + 2);
    assert!(blocks[0][0].starts_with("algorithm,"));
    let sidecar: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("bench.csv.json")).unwrap()).unwrap();
    assert!(sidecar.is_object());
}

#[test]
fn bench_reports_ratios_when_both_tree_solvers_run() {
    let dir = tempfile::tempdir().unwrap();
    let inst = gen_geometric(dir.path());
    let out = dir.path().join("bench.csv");
    let o = fml(&[
        "bench", "--instance", s(&inst), "--algorithms", "fml-exact,fml-bicriteria", "--epsilon", "0.1,0.01", "--seeds", "1,2",
        "--alpha", "0.5", "-o", s(&out),
    ]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let blocks: Vec<&str> = text.split("\n\n").collect();
    assert_eq!(blocks.len(), 3);
    let ratio_rows: Vec<&str> = blocks[2].lines().filter(|l| !l.is_empty()).collect();
    assert!(ratio_rows[0].starts_with("epsilon,"));
    assert_eq!(ratio_rows.len(), 1 + 2);
}
