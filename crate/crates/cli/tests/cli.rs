use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn gtsp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gtsp")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn generated(dir: &Path, nodes: usize, clusters: usize) -> PathBuf {
    let path = dir.join(format!("{clusters}gen{nodes}.gtsp"));
    let out = gtsp(&[
        "gen",
        "--nodes",
        &nodes.to_string(),
        "--clusters",
        &clusters.to_string(),
        "--seed",
        "4",
        "--out",
        s(&path),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn solve_writes_tour_json() {
    let dir = tempfile::tempdir().unwrap();
    let inst = generated(dir.path(), 16, 4);
    let out_path = dir.path().join("tour.json");
    let out = gtsp(&["solve", s(&inst), "--algo", "exact", "--out", s(&out_path)]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    let obj = v.as_object().unwrap();
    assert_eq!(obj.len(), 2);
    assert_eq!(obj["nodes"].as_array().unwrap().len(), 4);
    let exact_cost = obj["cost"].as_u64().unwrap();

    for algo in ["nn", "acs", "racs"] {
        let out = gtsp(&["solve", s(&inst), "--algo", algo, "--max-iters", "30", "--seed", "2"]);
        assert_eq!(code(&out), 0, "{algo}");
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        let cost = v.get("cost").or_else(|| v.pointer("/best_tour/cost")).unwrap().as_u64().unwrap();
        assert!(cost >= exact_cost, "{algo}");
    }
}

#[test]
fn racs_is_reproducible_from_the_command_line() {
    let dir = tempfile::tempdir().unwrap();
    let inst = generated(dir.path(), 30, 6);
    let run = || {
        let out = gtsp(&["solve", s(&inst), "--algo", "racs", "--max-iters", "40", "--seed", "9", "--format", "text"]);
        assert_eq!(code(&out), 0);
        let text = String::from_utf8(out.stdout).unwrap();
        text.lines().filter(|l| !l.starts_with("elapsed")).collect::<Vec<_>>().join("\n")
    };
    assert_eq!(run(), run());
}

#[test]
fn csv_and_text_formats() {
    let dir = tempfile::tempdir().unwrap();
    let inst = generated(dir.path(), 12, 3);
    let out = gtsp(&["solve", s(&inst), "--algo", "nn", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("problem,nc,n,algorithm,cost"));
    assert!(lines.next().unwrap().starts_with("3GEN12,3,12,NN,"));
    let out = gtsp(&["solve", s(&inst), "--algo", "exact", "--format", "text"]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("EXACT: cost"));
}

#[test]
fn cluster_then_solve() {
    let dir = tempfile::tempdir().unwrap();
    let tsp = dir.path().join("sq.tsp");
    std::fs::write(
        &tsp,
        "NAME : sq\nTYPE : TSP\nDIMENSION : 6\nEDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n\
         1 0 0\n2 1 0\n3 10 0\n4 11 0\n5 0 10\n6 1 10\nEOF\n",
    )
    .unwrap();
    let clustered = dir.path().join("3sq.gtsp");
    let out = gtsp(&["cluster", s(&tsp), "--out", s(&clustered), "--clusters", "3"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&clustered).unwrap();
    assert!(text.contains("NAME : 3SQ"));
    assert!(text.contains("GTSP_SET_SECTION"));

    let a = gtsp(&["solve", s(&clustered), "--algo", "exact"]);
    let b = gtsp(&["solve", s(&tsp), "--clusters", "3", "--algo", "exact"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let c = gtsp(&["solve", s(&tsp), "--cluster-file", s(&clustered), "--algo", "exact"]);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn bench_writes_tables() {
    let dir = tempfile::tempdir().unwrap();
    let inst = generated(dir.path(), 15, 4);
    let prefix = dir.path().join("res");
    let config = dir.path().join("exp.json");
    let body = serde_json::json!({
        "instances": [
            {"type": "clustered", "path": inst},
            {"type": "euclidean", "nodes": 18, "clusters": 5, "seed": 1}
        ],
        "algorithms": ["EXACT", "NN", "RACS"],
        "repetitions": 2,
        "time_max": null,
        "max_iterations": 20,
        "output": prefix,
    });
    std::fs::write(&config, body.to_string()).unwrap();
    let out = gtsp(&["bench", "--config", s(&config)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8(out.stdout).unwrap().contains("4GEN15"));
    let csv = std::fs::read_to_string(dir.path().join("res.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 2 * 3);
    assert!(dir.path().join("res.json").exists());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&gtsp(&[])), 1);
    assert_eq!(code(&gtsp(&["solve"])), 1);
    assert_eq!(code(&gtsp(&["--help"])), 0);
    assert_eq!(code(&gtsp(&["--version"])), 0);

    let inst = generated(dir.path(), 20, 5);
    assert_eq!(code(&gtsp(&["solve", s(&inst), "--algo", "nope"])), 1);
    assert_eq!(code(&gtsp(&["solve", s(&inst), "--algo", "racs", "--rho", "1.5"])), 1);
    assert_eq!(code(&gtsp(&["solve", s(&inst), "--algo", "racs", "--ants", "0"])), 1);

    assert_eq!(code(&gtsp(&["solve", s(&dir.path().join("missing")), "--algo", "nn"])), 2);
    let bad = dir.path().join("bad.gtsp");
    std::fs::write(&bad, "NAME : x\nDIMENSION : 3\nEDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n1 0 0\nEOF\n")
        .unwrap();
    let out = gtsp(&["solve", s(&bad), "--algo", "nn"]);
    assert_eq!(code(&out), 2);
    assert!(!out.stderr.is_empty());

    let out = gtsp(&["solve", s(&inst), "--algo", "exact", "--exact-cap", "10"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8(out.stderr).unwrap().contains("refusing"));
}
