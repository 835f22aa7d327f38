//! End-to-end tests of the conefix binary: exit-code contract, file
//! emission, config ingestion, and tabulated-map inputs.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_conefix")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("conefix_cli_tests").join(name);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run_in(dir: &Path, args: &[&str]) -> (i32, String, String) {
    let output = Command::new(bin())
        .current_dir(dir)
        .args(args)
        .output()
        .expect("spawn conefix");
    (
        output.status.code().expect("exit code"),
        String::from_utf8_lossy(&output.stdout).into_owned(),
        String::from_utf8_lossy(&output.stderr).into_owned(),
    )
}

#[test]
fn delta_prints_enumerated_distance() {
    let dir = scratch("delta_basic");
    std::fs::write(dir.join("a.csv"), "0\n").unwrap();
    std::fs::write(dir.join("b.csv"), "1\n3\n").unwrap();
    let (code, stdout, _) = run_in(&dir, &["delta", "--set-a", "a.csv", "--set-b", "b.csv"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.trim(), "3");
}

#[test]
fn delta_of_identical_files_is_zero() {
    let dir = scratch("delta_identical");
    std::fs::write(dir.join("a.csv"), "0.5,1.5\n2,3\n").unwrap();
    std::fs::write(dir.join("b.csv"), "0.5,1.5\n2,3\n").unwrap();
    let (code, stdout, _) = run_in(&dir, &["delta", "--set-a", "a.csv", "--set-b", "b.csv"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.trim(), "0");
}

#[test]
fn delta_dimension_mismatch_exits_2() {
    let dir = scratch("delta_mismatch");
    std::fs::write(dir.join("a.csv"), "0\n").unwrap();
    std::fs::write(dir.join("b.csv"), "1,2\n").unwrap();
    let (code, _, stderr) = run_in(&dir, &["delta", "--set-a", "a.csv", "--set-b", "b.csv"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("dimension"), "stderr: {stderr}");
}

#[test]
fn delta_malformed_csv_names_row_and_column() {
    let dir = scratch("delta_malformed");
    std::fs::write(dir.join("a.csv"), "0\n").unwrap();
    std::fs::write(dir.join("b.csv"), "1\nx7\n").unwrap();
    let (code, _, stderr) = run_in(&dir, &["delta", "--set-a", "a.csv", "--set-b", "b.csv"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("row 2"), "stderr: {stderr}");
    assert!(stderr.contains("column 1"), "stderr: {stderr}");
}

#[test]
fn unknown_map_name_exits_2() {
    let dir = scratch("unknown_map");
    let (code, _, stderr) = run_in(&dir, &["solve-decreasing", "--map", "mystery", "--out", "o"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("unknown decreasing map"), "stderr: {stderr}");
}

#[test]
fn unknown_kernel_exits_2_and_constant_kernel_exits_4() {
    let dir = scratch("kernels");
    let (code, _, _) = run_in(&dir, &["solve-integral", "--kernel", "mystery", "--out", "o"]);
    assert_eq!(code, 2);

    let (code, _, stderr) = run_in(
        &dir,
        &["solve-integral", "--kernel", "constant_one", "--grid-size", "17", "--out", "o"],
    );
    assert_eq!(code, 4);
    assert!(stderr.contains("validation failed"), "stderr: {stderr}");
}

#[test]
fn integral_solve_emits_solution_and_summary() {
    let dir = scratch("integral_files");
    let (code, _, _) = run_in(
        &dir,
        &[
            "solve-integral",
            "--kernel",
            "separable_unit",
            "--grid-size",
            "65",
            "--out",
            "out",
        ],
    );
    assert_eq!(code, 0);
    let csv = std::fs::read_to_string(dir.join("out/solution.csv")).unwrap();
    assert!(csv.starts_with("x,psi,Psi,g\n"));
    assert_eq!(csv.lines().count(), 66);
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("out/summary.json")).unwrap())
            .unwrap();
    assert!(summary["analytic_gap"].as_f64().unwrap() <= 1e-6);
    assert_eq!(summary["terminated_by"], "converged");
}

#[test]
fn zero_kernel_solves_to_theta() {
    let dir = scratch("integral_zero");
    let (code, _, _) = run_in(
        &dir,
        &["solve-integral", "--kernel", "zero", "--grid-size", "17", "--out", "out"],
    );
    assert_eq!(code, 0);
    let csv = std::fs::read_to_string(dir.join("out/solution.csv")).unwrap();
    for line in csv.lines().skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells[1], "0"); // psi
        assert_eq!(cells[2], "1"); // Psi
    }
}

#[test]
fn setvalued_solve_and_poset_agree() {
    let dir = scratch("setvalued");
    let (code, stdout, _) = run_in(
        &dir,
        &[
            "solve-setvalued",
            "--map",
            "strict_climb",
            "--selector",
            "lexicographic",
            "--tol",
            "1e-12",
            "--out",
            "out",
        ],
    );
    assert_eq!(code, 0);
    assert!(stdout.contains("converged"));

    let (code, _, _) = run_in(&dir, &["analyze-poset", "--map", "strict_climb", "--out", "out"]);
    assert_eq!(code, 0);
    let poset: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("out/poset.json")).unwrap())
            .unwrap();
    assert_eq!(poset["is_nonempty"], true);
    let result: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("out/result.json")).unwrap())
            .unwrap();
    let point = result["point"].as_array().unwrap();
    let fixed = poset["fixed_points"].as_array().unwrap();
    assert!(fixed.iter().any(|p| p == &serde_json::json!(point)));
}

#[test]
fn tabulated_point_map_runs_through_the_increasing_engine() {
    let dir = scratch("tabulated_point");
    // Chain 0 -> 1 -> 2 -> 2 on a 3-point domain.
    std::fs::write(
        dir.join("map.json"),
        r#"{"domain": [[0.0], [1.0], [2.0]], "images": [[1.0], [2.0], [2.0]]}"#,
    )
    .unwrap();
    let (code, stdout, _) = run_in(
        &dir,
        &["solve-increasing", "--map-file", "map.json", "--out", "out"],
    );
    assert_eq!(code, 0);
    assert!(stdout.contains("point=[2.0]"), "stdout: {stdout}");
}

#[test]
fn check_h1h2_reports_and_exits_zero() {
    let dir = scratch("h1h2");
    let (code, stdout, _) = run_in(&dir, &["check-h1h2", "--images", "1,0", "--out", "out"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("equivalent=true"));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("out/h1h2.json")).unwrap())
            .unwrap();
    assert_eq!(report["two_cycles"][0], serde_json::json!([0, 1]));
    assert_eq!(report["h1_holds"], false);
    assert_eq!(report["h2_holds"], false);
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = scratch("config");
    std::fs::write(
        dir.join("run.json"),
        r#"{"map": "c_over_1px", "param": 5.0, "tol": 1e-8, "out": "from_config"}"#,
    )
    .unwrap();
    let (code, stdout, _) = run_in(&dir, &["solve-decreasing", "--config", "run.json"]);
    assert_eq!(code, 0);
    assert!(dir.join("from_config/result.json").exists());
    // Positive root of x(1+x) = 5.
    let expected = ((1.0f64 + 20.0).sqrt() - 1.0) / 2.0;
    let result: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.join("from_config/result.json")).unwrap(),
    )
    .unwrap();
    let point = result["point"][0].as_f64().unwrap();
    assert!((point - expected).abs() <= 1e-7, "{point} vs {expected}");
    assert!(stdout.contains("converged"));

    // Flag overrides the config's out dir.
    let (code, _, _) = run_in(
        &dir,
        &["solve-decreasing", "--config", "run.json", "--out", "from_flag"],
    );
    assert_eq!(code, 0);
    assert!(dir.join("from_flag/result.json").exists());
}

#[test]
fn config_with_missing_input_file_fails_at_parse_time() {
    let dir = scratch("config_missing");
    std::fs::write(
        dir.join("run.json"),
        r#"{"map_file": "does_not_exist.json"}"#,
    )
    .unwrap();
    let (code, _, stderr) = run_in(&dir, &["check-h1h2", "--config", "run.json"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("does_not_exist.json"), "stderr: {stderr}");
}

#[test]
fn max_iter_cap_exits_1() {
    let dir = scratch("max_iter");
    // affine_halfway needs ~35 steps at 1e-10; cap it at 3.
    let (code, stdout, _) = run_in(
        &dir,
        &[
            "solve-increasing",
            "--map",
            "affine_halfway",
            "--max-iter",
            "3",
            "--out",
            "out",
        ],
    );
    assert_eq!(code, 1);
    assert!(stdout.contains("max_iter"));
}

#[test]
fn tabulated_kernel_csv_round_trips_through_solver() {
    let dir = scratch("tabulated_kernel");
    // Tabulate R(x,y) = (x-y)(x+y) on a coarse 5x5 grid; bilinear
    // interpolation then feeds the skip-mode quadrature.
    let grid = [0.0, 0.25, 0.5, 0.75, 1.0];
    let mut csv = String::from(",0,0.25,0.5,0.75,1\n");
    for &x in &grid {
        let mut row = vec![format!("{x}")];
        for &y in &grid {
            row.push(format!("{}", (x - y) * (x + y)));
        }
        csv.push_str(&row.join(","));
        csv.push('\n');
    }
    std::fs::write(dir.join("kernel.csv"), csv).unwrap();
    let (code, stdout, stderr) = run_in(
        &dir,
        &[
            "solve-integral",
            "--kernel-csv",
            "kernel.csv",
            "--grid-size",
            "33",
            "--nu",
            "1",
            "--m-bound",
            "2",
            "--out",
            "out",
        ],
    );
    assert_eq!(code, 0, "stdout: {stdout} stderr: {stderr}");
    assert!(dir.join("out/solution.csv").exists());
}
