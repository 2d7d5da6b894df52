use std::path::Path;
use std::process::{Command, Output};

fn svdupdate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_svdupdate")).args(args).output().unwrap()
}

fn write(path: &Path, text: &str) -> String {
    std::fs::write(path, text).unwrap();
    path.to_str().unwrap().to_string()
}

// diag(3, 2, 1) followed by three zero rows
const TINY: &str = "%%MatrixMarket matrix coordinate real general\n6 3 3\n1 1 3\n2 2 2\n3 3 1\n";

fn random_mtx(path: &Path, m: usize, n: usize) -> String {
    let mut lines = Vec::new();
    let mut state = 12345u64;
    for i in 1..=m {
        for j in 1..=n {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            if (state >> 33) % 3 == 0 {
                let v = ((state >> 11) % 1000) as f64 / 100.0 - 5.0;
                lines.push(format!("{i} {j} {v}"));
            }
        }
    }
    let text = format!(
        "%%MatrixMarket matrix coordinate real general\n{m} {n} {}\n{}\n",
        lines.len(),
        lines.join("\n")
    );
    write(path, &text)
}

fn parse_csv(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap_or(f64::NAN)).collect())
        .collect()
}

#[test]
fn update_tiny_diagonal() {
    let dir = tempfile::tempdir().unwrap();
    let tiny = write(&dir.path().join("tiny.mtx"), TINY);
    let out = svdupdate(&["update", &tiny, "--k", "2", "--method", "rrsvd-a"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("i,sigma,rel_err,residual\n"));
    let rows = parse_csv(&text);
    assert_eq!(rows.len(), 2);
    assert!((rows[0][1] - 3.0).abs() < 1e-12);
    assert!((rows[1][1] - 2.0).abs() < 1e-12);
    assert!(rows.iter().all(|r| r[3] < 1e-8));
}

#[test]
fn missing_file_names_the_path() {
    let out = svdupdate(&["update", "/nonexistent/none.mtx", "--k", "2", "--method", "rrsvd-a"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/none.mtx"));
}

#[test]
fn bad_arguments_exit_one_and_help_exits_zero() {
    assert_eq!(svdupdate(&["update"]).status.code(), Some(1));
    assert_eq!(svdupdate(&["update", "x.mtx", "--k", "2", "--method", "nope"]).status.code(), Some(1));
    assert_eq!(svdupdate(&["--help"]).status.code(), Some(0));
}

#[test]
fn enhanced_rank_defaults_to_k() {
    let dir = tempfile::tempdir().unwrap();
    let a = random_mtx(&dir.path().join("a.mtx"), 30, 16);
    let json = dir.path().join("s.json");
    let out = svdupdate(&["update", &a, "--k", "3", "--method", "rrsvd-b", "--json", json.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["config"]["r"], 3);
    assert_eq!(v["config"]["k"], 3);
}

#[test]
fn csv_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = random_mtx(&dir.path().join("a.mtx"), 30, 16);
    for method in ["rrsvd-a", "rrsvd-b", "zha-simon", "vecharynski"] {
        let run = || svdupdate(&["update", &a, "--k", "4", "--method", method, "--seed", "7"]).stdout;
        let first = run();
        assert!(!first.is_empty());
        assert_eq!(first, run(), "{method}");
    }
}

#[test]
fn sequence_writes_batches_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let a = random_mtx(&dir.path().join("a.mtx"), 40, 16);
    let out_dir = dir.path().join("out");
    let out = svdupdate(&[
        "sequence",
        &a,
        "--k",
        "3",
        "--method",
        "rrsvd-b",
        "--phi",
        "4",
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for i in 1..=4 {
        let csv = std::fs::read_to_string(out_dir.join(format!("batch_{i:02}.csv"))).unwrap();
        assert_eq!(parse_csv(&csv).len(), 3);
    }
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out_dir.join("summary.json")).unwrap()).unwrap();
    assert_eq!(v["updates"].as_array().unwrap().len(), 4);
}

#[test]
fn column_direction_and_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let a = random_mtx(&dir.path().join("a.mtx"), 12, 30);
    let out = svdupdate(&["update", &a, "--k", "3", "--method", "zha-simon", "--direction", "cols"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = parse_csv(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(rows.len(), 3);

    let tiny = write(&dir.path().join("tiny.mtx"), TINY);
    let out = svdupdate(&["oracle", &tiny, "--k", "3"]);
    assert!(out.status.success());
    let rows = parse_csv(&String::from_utf8(out.stdout).unwrap());
    let s: Vec<f64> = rows.iter().map(|r| r[1]).collect();
    assert_eq!(s, vec![3.0, 2.0, 1.0]);
}

#[test]
fn convert_raw_triplets() {
    let dir = tempfile::tempdir().unwrap();
    let raw = write(&dir.path().join("ratings.dat"), "1::1::5::0\n2::3::4::0\n");
    let out = svdupdate(&["convert", &raw]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let mtx = std::fs::read_to_string(dir.path().join("ratings.mtx")).unwrap();
    assert!(mtx.starts_with("%%MatrixMarket matrix coordinate real general"));
    assert!(mtx.contains("2 3 2"));
    let out = svdupdate(&["convert", &raw, "--out", &raw]);
    assert_eq!(out.status.code(), Some(1));
}
