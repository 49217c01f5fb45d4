use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn resqpass(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_resqpass")).args(args).output().expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

// 3x2 problem whose unconstrained solution is (1, -1); the bound x₂ ≥ 0 moves it to (0.5, 0)
fn write_problem(dir: &Path) {
    fs::write(
        dir.join("a.mtx"),
        "%%MatrixMarket matrix coordinate real general\n3 2 4\n1 1 1.0\n2 2 1.0\n3 1 1.0\n3 2 1.0\n",
    )
    .unwrap();
    fs::write(dir.join("b.txt"), "1\n-1\n0\n").unwrap();
    fs::write(dir.join("l.txt"), "-inf\n0\n").unwrap();
}

#[test]
fn solve_prints_the_unconstrained_solution() {
    let dir = tempfile::tempdir().unwrap();
    write_problem(dir.path());
    let out = resqpass(&["solve", path(&dir.path().join("a.mtx")), path(&dir.path().join("b.txt")), "--tol", "1e-12"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let x: Vec<f64> = String::from_utf8(out.stdout).unwrap().lines().map(|l| l.parse().unwrap()).collect();
    assert!((x[0] - 1.0).abs() < 1e-10 && (x[1] + 1.0).abs() < 1e-10, "{x:?}");
}

#[test]
fn solve_writes_outputs_with_bounds() {
    let dir = tempfile::tempdir().unwrap();
    write_problem(dir.path());
    let out_dir = dir.path().join("out");
    let d = dir.path();
    let out = resqpass(&[
        "solve",
        path(&d.join("a.mtx")),
        path(&d.join("b.txt")),
        "--lower",
        path(&d.join("l.txt")),
        "--factorization",
        "mgs",
        "--out",
        path(&out_dir),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let x: Vec<f64> = fs::read_to_string(out_dir.join("x.txt")).unwrap().lines().map(|l| l.parse().unwrap()).collect();
    assert!((x[0] - 0.5).abs() < 1e-8 && x[1].abs() < 1e-12, "{x:?}");
    assert!(fs::read_to_string(out_dir.join("solve.csv")).unwrap().lines().count() >= 2);
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("solve.json")).unwrap()).unwrap();
    assert_eq!(json["termination"], "residual-tol");
}

#[test]
fn bench_families_write_history_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = path(dir.path());
    let runs: [&[&str]; 3] = [
        &["bench", "cg", "--m", "60", "--n", "30", "--out", o],
        &["bench", "bvls", "--m", "80", "--n", "40", "--imax", "4", "--seed", "3", "--maxit-inner", "none", "--out", o],
        &["bench", "contact", "--grid", "6", "--precond", "ilut:0.1", "--recurrence", "on", "--out", o],
    ];
    for args in runs {
        let out = resqpass(args);
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
    for f in ["cg_resqpass.csv", "cg_lsqr.json", "bvls_resqpass.csv", "contact_resqpass_ilut.json"] {
        assert!(dir.path().join(f).exists(), "missing {f}");
    }
}

#[test]
fn bad_input_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    write_problem(dir.path());
    let d = dir.path();
    fs::write(d.join("short.txt"), "1\n").unwrap();
    let mismatch = resqpass(&["solve", path(&d.join("a.mtx")), path(&d.join("short.txt"))]);
    assert!(!mismatch.status.success());
    let missing = resqpass(&["solve", path(&d.join("nope.mtx")), path(&d.join("b.txt"))]);
    assert!(!missing.status.success());
    assert!(String::from_utf8_lossy(&missing.stderr).contains("nope.mtx"));
    let bad_tol = resqpass(&["solve", path(&d.join("a.mtx")), path(&d.join("b.txt")), "--tol", "-1"]);
    assert!(!bad_tol.status.success());
    assert!(!resqpass(&["bench", "cg", "--precond", "ilut"]).status.success());
}
