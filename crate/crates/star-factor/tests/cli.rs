//! End-to-end command-line tests: formats, exit codes, and the bench CSV.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_star-factor")
}

fn tmp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sf-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

#[test]
fn gen_lower_bound_vertex_count() {
    let dir = tmp_dir("gen-lb");
    let out_path = dir.join("lb.graph");
    let out = run(&[
        "gen",
        "lower-bound",
        "--d",
        "4",
        "--n",
        "10",
        "--seed",
        "1",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("vertices: 34"), "{stdout}");
    let g = star_factor::io::read_graph(&out_path).unwrap();
    assert_eq!(g.vertex_count(), 34);
    assert_eq!(g.min_degree(), 4);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn gen_regular_and_read_back() {
    let dir = tmp_dir("gen-reg");
    let out_path = dir.join("r.graph");
    let out = run(&[
        "gen",
        "regular",
        "--n",
        "10",
        "--d",
        "3",
        "--seed",
        "1",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let g = star_factor::io::read_graph(&out_path).unwrap();
    for v in 0..10 {
        assert_eq!(g.degree(v), 3);
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn gen_regular_parity_error_exits_2() {
    let dir = tmp_dir("gen-parity");
    let out = run(&[
        "gen",
        "regular",
        "--n",
        "5",
        "--d",
        "3",
        "--seed",
        "0",
        "--out",
        dir.join("x.graph").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn solve_k10_end_to_end() {
    let dir = tmp_dir("solve");
    let graph_path = dir.join("k10.graph");
    let mut text = String::from("graph 10\n");
    for u in 0..10 {
        for v in u + 1..10 {
            text.push_str(&format!("e {u} {v}\n"));
        }
    }
    std::fs::write(&graph_path, text).unwrap();

    let pack = dir.join("k10.pack");
    let report = dir.join("k10.json");
    let out = run(&[
        "solve",
        graph_path.to_str().unwrap(),
        "--d",
        "9",
        "--seed",
        "3",
        "--out",
        pack.to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    // the emitted packing re-verifies through the CLI
    let parsed = star_factor::io::read_packing(&pack).unwrap();
    let ell = parsed.declared_ell();
    assert!(ell >= 1);
    let out = run(&[
        "verify",
        graph_path.to_str().unwrap(),
        pack.to_str().unwrap(),
        "--ell",
        &ell.to_string(),
    ]);
    assert_eq!(out.status.code(), Some(0));

    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    for field in [
        "achieved_ell",
        "paper_target_ell",
        "stages",
        "resamples",
        "fallbacks",
        "seed",
        "wall_time_ms",
    ] {
        assert!(json.get(field).is_some(), "report missing {field}");
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn solve_d_above_min_degree_exits_2() {
    let dir = tmp_dir("solve-bad-d");
    let graph_path = dir.join("p.graph");
    std::fs::write(&graph_path, "graph 3\ne 0 1\ne 1 2\n").unwrap();
    let out = run(&[
        "solve",
        graph_path.to_str().unwrap(),
        "--d",
        "2",
        "--seed",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn solve_faithful_failure_exits_3() {
    let dir = tmp_dir("solve-faithful");
    let graph_path = dir.join("k12.graph");
    let mut text = String::from("graph 12\n");
    for u in 0..12 {
        for v in u + 1..12 {
            text.push_str(&format!("e {u} {v}\n"));
        }
    }
    std::fs::write(&graph_path, text).unwrap();
    let out = run(&[
        "solve",
        graph_path.to_str().unwrap(),
        "--d",
        "11",
        "--mode",
        "faithful",
        "--seed",
        "0",
    ]);
    assert_eq!(
        out.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn verify_detects_uncovered_and_malformed() {
    let dir = tmp_dir("verify");
    let graph_path = dir.join("c4.graph");
    std::fs::write(&graph_path, "graph 4\ne 0 1\ne 1 2\ne 2 3\ne 0 3\n").unwrap();

    let pack_path = dir.join("bad.pack");
    std::fs::write(&pack_path, "ell 2\ns 0 1 3\n").unwrap();
    let out = run(&[
        "verify",
        graph_path.to_str().unwrap(),
        pack_path.to_str().unwrap(),
        "--ell",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("uncovered: 2"), "{stdout}");

    // cover=none accepts the same packing
    let out = run(&[
        "verify",
        graph_path.to_str().unwrap(),
        pack_path.to_str().unwrap(),
        "--ell",
        "2",
        "--cover",
        "none",
    ]);
    assert_eq!(out.status.code(), Some(0));

    let malformed = dir.join("malformed.pack");
    std::fs::write(&malformed, "ell 2\nstar 0 1\n").unwrap();
    let out = run(&[
        "verify",
        graph_path.to_str().unwrap(),
        malformed.to_str().unwrap(),
        "--ell",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn oracle_command_outputs() {
    let dir = tmp_dir("oracle");
    let k4 = dir.join("k4.graph");
    std::fs::write(&k4, "graph 4\ne 0 1\ne 0 2\ne 0 3\ne 1 2\ne 1 3\ne 2 3\n").unwrap();
    let out = run(&["oracle", k4.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "3");

    let c4 = dir.join("c4.graph");
    std::fs::write(&c4, "graph 4\ne 0 1\ne 1 2\ne 2 3\ne 0 3\n").unwrap();
    let out = run(&["oracle", c4.to_str().unwrap(), "--ell", "2"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "no");

    // over the limit without raising it
    let big = dir.join("big.graph");
    let mut text = String::from("graph 20\n");
    for u in 0..19 {
        text.push_str(&format!("e {u} {}\n", u + 1));
    }
    std::fs::write(&big, text).unwrap();
    let out = run(&["oracle", big.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["oracle", big.to_str().unwrap(), "--limit", "20"]);
    assert_eq!(out.status.code(), Some(0));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn bench_writes_csv_rows() {
    let dir = tmp_dir("bench");
    let csv_path = dir.join("bench.csv");
    let out = run(&[
        "bench",
        "--family",
        "min-degree",
        "--d-list",
        "9,16,25",
        "--n",
        "500",
        "--trials",
        "3",
        "--seed",
        "11",
        "--csv",
        csv_path.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let body = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = body.lines();
    let header = lines.next().unwrap();
    assert_eq!(
        header,
        "family,n,d,trial,seed,achieved_ell,sqrt_d,paper_target_ell,c_tilde,fallback_used,wall_time_ms,error"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 9);
    for row in rows {
        assert!(row.starts_with("min-degree,500,"), "{row}");
        assert!(!row.ends_with(",failed"), "{row}");
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn bench_lower_bound_rows_respect_ceiling() {
    let dir = tmp_dir("bench-lb");
    let csv_path = dir.join("lb.csv");
    let out = run(&[
        "bench",
        "--family",
        "lower-bound",
        "--d-list",
        "4,9",
        "--n",
        "40",
        "--trials",
        "2",
        "--seed",
        "3",
        "--csv",
        csv_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let body = std::fs::read_to_string(&csv_path).unwrap();
    for line in body.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let d: usize = cols[2].parse().unwrap();
        let achieved: usize = cols[5].parse().unwrap();
        let bound = star_factor::util::ceil_sqrt(d) + 1;
        assert!(achieved <= bound, "{line}");
        assert!(cols[11].is_empty(), "row recorded an error: {line}");
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn missing_d_list_is_usage_error() {
    let out = run(&[
        "bench",
        "--family",
        "min-degree",
        "--n",
        "100",
        "--csv",
        "/tmp/x.csv",
    ]);
    assert_ne!(out.status.code(), Some(0));
}

#[test]
fn seed_is_printed_when_drawn_from_entropy() {
    let dir = tmp_dir("entropy");
    let out_path = dir.join("g.graph");
    let out = run(&[
        "gen",
        "min-degree",
        "--n",
        "30",
        "--d",
        "3",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.lines().any(|l| l.starts_with("seed: ")), "{stdout}");
    std::fs::remove_dir_all(&dir).ok();
}
