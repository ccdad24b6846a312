//! End-to-end tests of the `spectraflow` binary: file formats, exit
//! codes, and output determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spectraflow"))
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = bin();
    cmd.args(args);
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn read_rows(path: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn spectrum_small_jc_run() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "cfg.json",
        r#"{"model": "jc", "g_min": 0.0, "g_max": 0.5, "g_steps": 2, "levels": 3, "n_cut": 16}"#,
    );
    let out = run(
        &[
            "spectrum",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            tmp.path().to_str().unwrap(),
        ],
        &[],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let rows = read_rows(&tmp.path().join("spectrum.csv"));
    assert_eq!(rows[0], vec!["g", "line_id", "sorted_index", "energy", "parity"]);
    assert_eq!(rows.len(), 1 + 6, "expected 6 data rows");

    // g = 0 energies: -0.5, 0.5, 0.5 in line order.
    let energies: Vec<f64> = rows[1..4].iter().map(|r| r[3].parse().unwrap()).collect();
    assert!((energies[0] + 0.5).abs() < 1e-10);
    assert!((energies[1] - 0.5).abs() < 1e-10);
    assert!((energies[2] - 0.5).abs() < 1e-10);
}

#[test]
fn invalid_grid_exits_2_without_output() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "cfg.json",
        r#"{"model": "rabi", "g_min": 1.0, "g_max": 0.5}"#,
    );
    let out = run(
        &[
            "spectrum",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            tmp.path().to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(!tmp.path().join("spectrum.csv").exists());
    assert!(String::from_utf8_lossy(&out.stderr).contains("config error"));
}

#[test]
fn config_parse_failures_exit_2() {
    let tmp = TempDir::new().unwrap();
    for body in [
        r#"{"model": "rabi", "unknown_key": 1}"#,
        r#"{"model": "rabi", "#,
        r#"{"model": "jc", "epsilon": 0.25}"#,
        r#"{"model": "rabi", "n_cut": "huge"}"#,
    ] {
        let cfg = write_config(tmp.path(), "cfg.json", body);
        let out = run(&["histogram", "--config", cfg.to_str().unwrap()], &[]);
        assert_eq!(out.status.code(), Some(2), "config: {body}");
    }

    let out = run(&["spectrum", "--config", "/nonexistent/cfg.json"], &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn converge_reports_json_and_cap_exits_4() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "cfg.json",
        r#"{"model": "jc", "levels": 4, "g_max": 1.0}"#,
    );
    let out = run(&["converge", "--config", cfg.to_str().unwrap()], &[]);
    assert!(out.status.success());
    let report: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("stdout is one JSON object");
    assert_eq!(report["n_cut"], 32);
    assert!(!report["steps"].as_array().unwrap().is_empty());

    // An unreachable tolerance drives the controller into the cap.
    let cfg = write_config(
        tmp.path(),
        "cfg.json",
        r#"{"model": "rabi", "levels": 4, "g_max": 1.5, "converge_tol": 1e-30, "n_cut_cap": 64}"#,
    );
    let out = run(&["converge", "--config", cfg.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn crossings_contains_analytic_jc_crossing() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "cfg.json",
        r#"{"model": "jc", "g_min": 0.0, "g_max": 1.0, "g_steps": 51, "levels": 5, "n_cut": 32}"#,
    );
    let out = run(
        &[
            "crossings",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            tmp.path().to_str().unwrap(),
        ],
        &[],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let rows = read_rows(&tmp.path().join("crossings.csv"));
    assert_eq!(rows[0], vec!["g_star", "energy", "line_a", "line_b", "min_gap", "kind"]);
    let g_exact = 2f64.sqrt() - 1.0;
    let hit = rows[1..]
        .iter()
        .find(|r| {
            r[5] == "TRUE_CROSSING"
                && (r[0].parse::<f64>().unwrap() - g_exact).abs() < 1e-6
        })
        .expect("true crossing near sqrt(2) - 1");
    assert!((hit[1].parse::<f64>().unwrap() - (0.5 + g_exact)).abs() < 1e-6);

    // Sorted by g_star.
    let stars: Vec<f64> = rows[1..].iter().map(|r| r[0].parse().unwrap()).collect();
    assert!(stars.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn uncertainty_rows_satisfy_robertson_bound() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "cfg.json",
        r#"{"model": "asym_rabi", "epsilon": 0.3, "g_min": 0.0, "g_max": 1.2,
            "g_steps": 4, "levels": 8, "n_cut": 48}"#,
    );
    let out = run(
        &[
            "uncertainty",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            tmp.path().to_str().unwrap(),
        ],
        &[],
    );
    assert!(out.status.success());

    let rows = read_rows(&tmp.path().join("uncertainty.csv"));
    assert_eq!(rows[0], vec!["g", "eigen_index", "sx", "sz", "dsx", "dsy", "delta"]);
    assert_eq!(rows.len(), 1 + 4 * 8);
    for r in &rows[1..] {
        let sz: f64 = r[3].parse().unwrap();
        let delta: f64 = r[6].parse().unwrap();
        assert!(delta >= sz.abs() / 2.0 - 1e-12);
        assert!((0.0..=0.5 + 1e-12).contains(&delta));
    }
    // At g = 0 every bare eigenstate sits at the ceiling... only for
    // epsilon = 0; with the symmetry-breaking term the g = 0 states mix.
    // Check the epsilon = 0 statement through a separate config.
    let cfg = write_config(
        tmp.path(),
        "cfg0.json",
        r#"{"model": "rabi", "g_min": 0.0, "g_max": 0.5, "g_steps": 2, "levels": 8, "n_cut": 32}"#,
    );
    let out = run(
        &[
            "uncertainty",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            tmp.path().to_str().unwrap(),
        ],
        &[],
    );
    assert!(out.status.success());
    let rows = read_rows(&tmp.path().join("uncertainty.csv"));
    for r in rows[1..].iter().filter(|r| r[0].parse::<f64>().unwrap() == 0.0) {
        let delta: f64 = r[6].parse().unwrap();
        assert!((delta - 0.5).abs() < 1e-12, "bare state with delta {delta}");
    }
    // Ground-line delta climbs toward (or stays at) the ceiling.
    let ground: Vec<f64> = rows[1..]
        .iter()
        .filter(|r| r[1] == "0")
        .map(|r| r[6].parse().unwrap())
        .collect();
    assert!(ground.last().unwrap() >= ground.first().unwrap());
}

#[test]
fn histogram_rows_normalized() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "cfg.json",
        r#"{"model": "asym_rabi", "epsilon": 0.3, "levels": 20, "n_cut": 64,
            "histogram_g": 1.2, "n_bins": 10}"#,
    );
    let out = run(
        &[
            "histogram",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            tmp.path().to_str().unwrap(),
        ],
        &[],
    );
    assert!(out.status.success());

    let rows = read_rows(&tmp.path().join("histogram.csv"));
    assert_eq!(rows[0], vec!["bin_lo", "bin_hi", "count", "probability"]);
    assert_eq!(rows.len(), 1 + 10);
    let total: usize = rows[1..].iter().map(|r| r[2].parse::<usize>().unwrap()).sum();
    assert_eq!(total, 20);
    let psum: f64 = rows[1..].iter().map(|r| r[3].parse::<f64>().unwrap()).sum();
    assert!((psum - 1.0).abs() <= 1e-12);
}

#[test]
fn svg_flag_adds_files_without_touching_csv() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "cfg.json",
        r#"{"model": "jc", "g_min": 0.0, "g_max": 0.6, "g_steps": 7, "levels": 4, "n_cut": 24}"#,
    );
    let plain = tmp.path().join("plain");
    let with_svg = tmp.path().join("svg");
    assert!(run(
        &["spectrum", "--config", cfg.to_str().unwrap(), "--out", plain.to_str().unwrap()],
        &[],
    )
    .status
    .success());
    assert!(run(
        &["spectrum", "--config", cfg.to_str().unwrap(), "--svg", "--out", with_svg.to_str().unwrap()],
        &[],
    )
    .status
    .success());

    assert!(!plain.join("spectrum.svg").exists());
    assert!(with_svg.join("spectrum.svg").exists());
    let a = std::fs::read(plain.join("spectrum.csv")).unwrap();
    let b = std::fs::read(with_svg.join("spectrum.csv")).unwrap();
    assert_eq!(a, b, "svg emission altered the csv bytes");

    let svg = std::fs::read_to_string(with_svg.join("spectrum.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("<polyline"));
}

#[test]
fn bad_worker_env_exits_2() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "cfg.json",
        r#"{"model": "jc", "levels": 3, "n_cut": 16}"#,
    );
    for bad in ["zero", "0", "-3"] {
        let out = run(
            &["spectrum", "--config", cfg.to_str().unwrap()],
            &[("SPECTRAFLOW_WORKERS", bad)],
        );
        assert_eq!(out.status.code(), Some(2), "workers = {bad}");
    }
}
