use std::path::PathBuf;
use std::process::{Command, Output};

fn khwp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_khwp")).args(args).output().expect("binary runs")
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("khwp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn tree_walk_round_trips_through_validate() {
    let walk = scratch("fig1-k4.txt");
    let o = khwp(&["solvek", &fixture("fig1.txt"), "--k", "4", "-o", walk.to_str().unwrap()]);
    assert!(o.status.success());
    let v = khwp(&["validate", &fixture("fig1.txt"), walk.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0));
    assert_eq!(stdout(&v).trim(), "length 15 spanning 1");
}

#[test]
fn validate_rejects_a_broken_walk() {
    let walk = scratch("broken.txt");
    std::fs::write(&walk, "k 1 length 1 spanning 1\n0: 0\n1: 5\n").unwrap();
    let v = khwp(&["validate", &fixture("fig1.txt"), walk.to_str().unwrap()]);
    assert_ne!(v.status.code(), Some(0));
}

#[test]
fn oracle_on_p4() {
    let g = scratch("p4.txt");
    std::fs::write(&g, "4 3\n0 1\n1 2\n2 3\n").unwrap();
    let o = khwp(&["oracle", g.to_str().unwrap(), "--k", "2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().last(), Some("optimal 2"));
}

#[test]
fn generate_is_deterministic() {
    let args = ["generate", "--kind", "random-graph", "--n", "8", "--p", "0.4", "--seed", "7"];
    let a = khwp(&args);
    let b = khwp(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn tree_optimality_bench() {
    let o = khwp(&["bench", "--suite", "tree-optimality", "--n", "40", "--trials", "200", "--seed", "5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("id,n,m,k,algo,len,oracle,bound,ms,seed"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 200);
    assert!(rows.iter().all(|r| r[5] == r[7] && r[9].starts_with("chacha8:")));
}

#[test]
fn hypergraph_fixture() {
    let o = khwp(&["solveh", &fixture("fig6.hg"), "--oracle", "--record", scratch("h.csv").to_str().unwrap()]);
    assert!(o.status.success());
    let first = stdout(&o).lines().next().unwrap().to_string();
    let len: usize = first.split_whitespace().nth(3).unwrap().parse().unwrap();
    assert!((3..=8).contains(&len));
}

#[test]
fn exit_codes() {
    let g = scratch("dup.txt");
    std::fs::write(&g, "3 2\n0 1\n0 1\n").unwrap();
    assert_eq!(khwp(&["solve1", g.to_str().unwrap()]).status.code(), Some(1));

    let cfg = scratch("caps.toml");
    std::fs::write(&cfg, "oracle_max_n = 3\n").unwrap();
    let o = khwp(&["--config", cfg.to_str().unwrap(), "oracle", &fixture("fig1.txt"), "--k", "2"]);
    assert_eq!(o.status.code(), Some(3));

    let lone = scratch("lone.txt");
    std::fs::write(&lone, "1 0\n").unwrap();
    assert_eq!(khwp(&["solve2", lone.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn solve2_writes_diagnostics() {
    let diag = scratch("diag.csv");
    let o = khwp(&[
        "solve2",
        &fixture("fig5.txt"),
        "--packing",
        "exact",
        "--diagnostics",
        diag.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&diag).unwrap();
    assert!(text.starts_with("n,m,c4,grids,sol_weight,tr_len,match_cost,walk_len,oracle_h2\n16,19,"));
}

#[test]
fn odd_node_bound_breach_exits_with_invariant_code() {
    // 2x3 grid with a pendant on a middle vertex
    let g = scratch("grid-pendant.txt");
    std::fs::write(&g, "7 8\n0 1\n1 2\n3 4\n4 5\n0 3\n1 4\n2 5\n1 6\n").unwrap();
    let o = khwp(&["solve2", g.to_str().unwrap(), "--packing", "exact"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).starts_with("k 2 length 4 spanning 1"));
}
