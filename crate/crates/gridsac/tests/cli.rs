//! Command-line behavior: exit codes, file errors, end-to-end pipelines.

use std::path::PathBuf;
use std::process::Command;

fn gridsac(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_gridsac"))
        .args(args)
        .output()
        .expect("spawn");
    (
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
        out.status.code().unwrap_or(-1),
    )
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("gridsac_cli_tests");
    std::fs::create_dir_all(&dir).expect("tmp dir");
    dir.join(name)
}

#[test]
fn usage_errors_exit_one() {
    let (_, _, code) = gridsac(&["estimate"]); // missing required flags
    assert_eq!(code, 1);
    let (_, _, code) = gridsac(&["synth", "--model", "zz", "--out", "/tmp/x"]);
    assert_eq!(code, 1);
    let (_, err, code) = gridsac(&["bench", "--models", "h", "--strategies", "warp"]);
    assert_eq!(code, 1, "stderr: {err}");
}

#[test]
fn help_exits_zero_and_documents_schema() {
    let (out, _, code) = gridsac(&["--help"]);
    assert_eq!(code, 0);
    assert!(
        out.contains("family,strategy,cells,iters"),
        "CSV schema missing"
    );
    assert!(out.contains("extent1 w h"), "matches format missing");
}

#[test]
fn data_errors_exit_two() {
    let (_, _, code) = gridsac(&["estimate", "--in", "/nonexistent/file", "--model", "h"]);
    assert_eq!(code, 2);
    let bad = tmp("bad.txt");
    std::fs::write(&bad, "1 2 3\n").unwrap();
    let (_, err, code) = gridsac(&["estimate", "--in", bad.to_str().unwrap(), "--model", "h"]);
    assert_eq!(code, 2);
    assert!(
        err.contains("line 1"),
        "error should carry the line number: {err}"
    );
}

#[test]
fn numerical_failures_exit_three() {
    // Ten coincident correspondences admit no homography.
    let degenerate = tmp("degenerate.txt");
    std::fs::write(&degenerate, "1 1 2 2\n".repeat(10)).unwrap();
    let (_, _, code) = gridsac(&[
        "estimate",
        "--in",
        degenerate.to_str().unwrap(),
        "--model",
        "h",
        "--iters",
        "5",
        "--strategy",
        "trad",
    ]);
    assert_eq!(code, 3);
}

#[test]
fn essential_requires_intrinsics() {
    let m = tmp("e.txt");
    let (_, _, code) = gridsac(&[
        "synth",
        "--model",
        "e",
        "--n",
        "300",
        "--ratio",
        "0.5",
        "--seed",
        "1",
        "--out",
        m.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let (_, _, code) = gridsac(&[
        "estimate",
        "--in",
        m.to_str().unwrap(),
        "--model",
        "e",
        "--iters",
        "20",
    ]);
    assert_eq!(code, 1, "missing --focal must be a usage error");
    let (out, err, code) = gridsac(&[
        "estimate",
        "--in",
        m.to_str().unwrap(),
        "--model",
        "e",
        "--iters",
        "60",
        "--focal",
        "768",
        "--cx",
        "320",
        "--cy",
        "240",
        "--threshold",
        "2.0",
    ]);
    assert_eq!(code, 0, "stderr: {err}");
    assert!(out.contains("model_essential"), "stdout: {out}");
}

#[test]
fn synth_estimate_bench_plot_pipeline() {
    let matches = tmp("pipe.txt");
    let (_, err, code) = gridsac(&[
        "synth",
        "--model",
        "h",
        "--n",
        "500",
        "--ratio",
        "0.4",
        "--sigma",
        "1.0",
        "--seed",
        "3",
        "--out",
        matches.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let text = std::fs::read_to_string(&matches).unwrap();
    assert!(text.starts_with("extent1 640 480\nextent2 640 480\n"));
    assert_eq!(text.lines().count(), 502);

    let (out, err, code) = gridsac(&[
        "estimate",
        "--in",
        matches.to_str().unwrap(),
        "--model",
        "h",
        "--strategy",
        "grid",
        "--cells",
        "4",
        "--threshold",
        "3.0",
        "--seed",
        "3",
    ]);
    assert_eq!(code, 0, "{err}");
    let inliers: usize = out
        .lines()
        .find_map(|l| l.strip_prefix("inliers "))
        .expect("inliers line")
        .parse()
        .expect("count");
    assert!(inliers >= 190, "found only {inliers} of ~200 inliers");

    let csv = tmp("pipe.csv");
    let (_, err, code) = gridsac(&[
        "bench",
        "--models",
        "h",
        "--strategies",
        "grid,sprt",
        "--cells",
        "2",
        "--iters",
        "30",
        "--seeds",
        "1",
        "--n",
        "300",
        "--ratio",
        "0.3",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let svg = tmp("pipe.svg");
    for kind in ["relative_time_vs_iters", "cdf_times", "points_verified"] {
        let (_, err, code) = gridsac(&[
            "plot",
            "--in",
            csv.to_str().unwrap(),
            "--kind",
            kind,
            "--out",
            svg.to_str().unwrap(),
        ]);
        assert_eq!(code, 0, "{kind}: {err}");
        let doc = std::fs::read_to_string(&svg).unwrap();
        assert!(doc.contains("<svg xmlns"));
        assert!(doc.contains("<polyline"));
    }
    // Plot of a non-CSV input is a data error.
    let (_, _, code) = gridsac(&[
        "plot",
        "--in",
        matches.to_str().unwrap(),
        "--kind",
        "cdf_times",
        "--out",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
}

#[test]
fn radial_pipeline_with_lambdas() {
    let matches = tmp("radial.txt");
    let (_, err, code) = gridsac(&[
        "synth",
        "--model",
        "rh",
        "--n",
        "400",
        "--ratio",
        "0.5",
        "--sigma",
        "0.001",
        "--seed",
        "9",
        "--out",
        matches.to_str().unwrap(),
        "--lambda1",
        "-0.2",
        "--lambda2",
        "-0.15",
    ]);
    assert_eq!(code, 0, "{err}");
    let (out, err, code) = gridsac(&[
        "estimate",
        "--in",
        matches.to_str().unwrap(),
        "--model",
        "rh",
        "--strategy",
        "grid",
        "--cells",
        "3",
        "--threshold",
        "0.01",
        "--seed",
        "9",
        "--lambda1",
        "-0.2",
        "--lambda2",
        "-0.15",
    ]);
    assert_eq!(code, 0, "{err}");
    let inliers: usize = out
        .lines()
        .find_map(|l| l.strip_prefix("inliers "))
        .expect("inliers line")
        .parse()
        .expect("count");
    assert!(inliers >= 190, "found only {inliers} of ~200 inliers");
}
