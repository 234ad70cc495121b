use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn hilbzeta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hilbzeta"))
        .args(args)
        .output()
        .unwrap()
}

fn copy_into(dir: &Path, names: &[&str]) {
    for name in names {
        std::fs::copy(corpus().join(name), dir.join(name)).unwrap();
    }
}

#[test]
fn global_writes_report_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    copy_into(dir.path(), &["cuspidal_cubic_f5.json"]);
    let curve = dir.path().join("cuspidal_cubic_f5.json");
    let out = dir.path().join("report.json");
    let run = hilbzeta(&[
        "global",
        "--curve",
        curve.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8_lossy(&run.stdout).contains("1 + 5t^2"));

    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["numerator"], serde_json::json!(["1", "0", "5"]));
    assert_eq!(report["verdicts"]["functional_equation"], true);
    assert!(dir.path().join(".hilbzeta-cache.json").exists());
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    copy_into(dir.path(), &["nodal_cubic_split_f3.json"]);
    let curve = dir.path().join("nodal_cubic_split_f3.json");
    let mut reports = Vec::new();
    for (i, extra) in [&[][..], &[][..], &["--verify-cache"][..]].iter().enumerate() {
        let out = dir.path().join(format!("r{i}.json"));
        let mut args = vec![
            "global",
            "--curve",
            curve.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ];
        args.extend_from_slice(extra);
        assert_eq!(hilbzeta(&args).status.code(), Some(0));
        reports.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(reports[0], reports[1]);
    assert_eq!(reports[1], reports[2]);
}

#[test]
fn tampered_cache_is_caught_by_verification() {
    let dir = tempfile::tempdir().unwrap();
    copy_into(dir.path(), &["elliptic_f3.json"]);
    let curve = dir.path().join("elliptic_f3.json");
    let curve = curve.to_str().unwrap();
    assert_eq!(hilbzeta(&["global", "--curve", curve]).status.code(), Some(0));

    let cache_path = dir.path().join(".hilbzeta-cache.json");
    let mut cache: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&cache_path).unwrap()).unwrap();
    let entry = cache.as_object_mut().unwrap().values_mut().next().unwrap();
    entry["1"] = serde_json::json!(5);
    std::fs::write(&cache_path, cache.to_string()).unwrap();

    assert_eq!(
        hilbzeta(&["global", "--curve", curve, "--verify-cache"]).status.code(),
        Some(1)
    );
}

#[test]
fn nonintegral_curve_is_an_input_error() {
    let bad = corpus().join("invalid/two_lines_f3.json");
    let run = hilbzeta(&["global", "--curve", bad.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(3));
    assert!(!run.stderr.is_empty());
}

#[test]
fn missing_and_malformed_documents() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.json");
    assert_eq!(
        hilbzeta(&["global", "--curve", missing.to_str().unwrap()])
            .status
            .code(),
        Some(3)
    );

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"name": "x", "p": 4, "k": 1, "terms": [[1, 0, 0, "1"]]}"#).unwrap();
    assert_eq!(
        hilbzeta(&["global", "--curve", bad.to_str().unwrap()]).status.code(),
        Some(3)
    );
}

#[test]
fn local_command() {
    let run = hilbzeta(&[
        "local",
        "--f",
        "y^2-x^3",
        "--q",
        "5",
        "--branches",
        "1",
        "--delta",
        "1",
        "--nmax",
        "6",
    ]);
    assert_eq!(run.status.code(), Some(0));
    let serial = hilbzeta(&[
        "local",
        "--f",
        "y^2-x^3",
        "--q",
        "5",
        "--branches",
        "1",
        "--delta",
        "1",
        "--nmax",
        "6",
        "--serial",
    ]);
    assert_eq!(run.stdout, serial.stdout);

    // Wrong delta is a check failure, a non-prime-power q an input error.
    let wrong = hilbzeta(&[
        "local",
        "--f",
        "y^2-x^3",
        "--q",
        "5",
        "--branches",
        "1",
        "--delta",
        "2",
        "--nmax",
        "6",
    ]);
    assert_eq!(wrong.status.code(), Some(1));
    let bad_q = hilbzeta(&["local", "--f", "y^2-x^3", "--q", "6", "--branches", "1", "--nmax", "6"]);
    assert_eq!(bad_q.status.code(), Some(3));
}

#[test]
fn local_command_with_inert_branches() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("node.json");
    let run = hilbzeta(&[
        "local",
        "--f",
        "y^2+x^2",
        "--q",
        "3",
        "--orbit-degrees",
        "2",
        "--nmax",
        "6",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(run.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["numerator"], serde_json::json!(["1", "1", "3"]));
}

#[test]
fn corpus_command_isolates_broken_documents() {
    let dir = tempfile::tempdir().unwrap();
    copy_into(dir.path(), &["line_f2.json", "local_a2_cusp_f3.json"]);
    std::fs::write(dir.path().join("corrupt.json"), "{ not json").unwrap();
    let run = hilbzeta(&["corpus", "--dir", dir.path().to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(1));
    let table = String::from_utf8_lossy(&run.stdout);
    let rows: Vec<&str> = table.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].starts_with("corrupt.json") && rows[0].contains("error"));
    assert!(rows[1].starts_with("line_f2.json") && rows[1].contains("pass"));
    assert!(rows[2].starts_with("local_a2_cusp_f3.json") && rows[2].contains("pass"));
}

#[test]
fn shipped_corpus_passes() {
    let dir = tempfile::tempdir().unwrap();
    for path in hilbzeta::report::corpus_files(&corpus()).unwrap() {
        std::fs::copy(&path, dir.path().join(path.file_name().unwrap())).unwrap();
    }
    let run = hilbzeta(&["corpus", "--dir", dir.path().to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stdout));
}
