//! End-to-end runs of the `flavorsim` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use flavorsim::cli::read_csv;
use serde_json::Value;

fn flavorsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flavorsim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn summary(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap()
}

fn out_arg(dir: &Path) -> String {
    dir.to_str().unwrap().to_string()
}

#[test]
fn seeded_run_matches_closed_form() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("seeded");
    let out = flavorsim(&["seeded", "--param", "seed=1e-3", "--out", &out_arg(&dir)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let table = read_csv(&dir.join("seeded.csv")).unwrap();
    assert_eq!(table.header, ["time", "zeta", "zeta_b", "balance_drift"]);
    assert_eq!(table.rows[0][0], 0.0);
    assert!((table.rows[0][1] - 1.0).abs() < 1e-5);
    let s = summary(&dir);
    let t = s["runs"][0]["results"]["break_time"].as_f64().unwrap();
    assert!((t - 3.45).abs() < 0.01, "{t}");
    assert_eq!(s["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(s["config"]["parameters"]["seed"], 1e-3);
}

#[test]
fn stability_sweep_classifies() {
    let tmp = tempfile::tempdir().unwrap();
    let out = flavorsim(&["stability", "--sweep", "lambda=0,0.5,1,1.5", "--out", &out_arg(tmp.path())]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let s = summary(tmp.path());
    let classes: Vec<&str> = s["aggregate"]["classifications"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_str().unwrap())
        .collect();
    assert_eq!(classes, ["unstable", "unstable", "marginal", "stable"]);
    let rate = s["runs"][1]["results"]["empirical"]["rate"].as_f64().unwrap();
    assert!((rate - 0.75f64.sqrt()).abs() < 0.05);
    assert!(s["runs"][3]["results"]["empirical"]["rate"].is_null());
}

#[test]
fn config_errors_exit_2_and_write_nothing() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("never");
    let cases: &[&[&str]] = &[
        &["quantum", "--param", "bogus=1"],
        &["quantum", "--param", "n=abc"],
        &["quantum", "--sweep", "method=1,2"],
        &["quantum", "--sweep", "nope=1,2"],
        &["meanfield", "--dt", "-1"],
        &["estimate", "--horizon", "5"],
        &["seeded", "--param", "seed=-1"],
        &["quantum", "--param", "n=0"],
        &["quantum", "--workers", "0"],
        &["isotropic-compare", "--param", "sampling=grid"],
    ];
    for args in cases {
        let mut full = args.to_vec();
        let o = out_arg(&dir);
        full.extend(["--out", o.as_str()]);
        let out = flavorsim(&full);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
        assert!(!dir.exists(), "{args:?} wrote files");
    }
    let out = flavorsim(&["no-such-experiment"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_and_flag_precedence() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.json");
    fs::write(
        &cfg,
        r#"{"parameters": {"n": 64, "lambda": 0.5}, "dt": 0.05, "horizon": 4.0}"#,
    )
    .unwrap();
    let dir = tmp.path().join("q");
    let out = flavorsim(&[
        "quantum",
        "--config",
        cfg.to_str().unwrap(),
        "--param",
        "n=32",
        "--horizon",
        "3",
        "--out",
        &out_arg(&dir),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let s = summary(&dir);
    assert_eq!(s["config"]["parameters"]["n"], 32);
    assert_eq!(s["config"]["parameters"]["lambda"], 0.5);
    assert_eq!(s["config"]["dt"], 0.05);
    assert_eq!(s["config"]["horizon"], 3.0);
    let table = read_csv(&dir.join("quantum.csv")).unwrap();
    assert_eq!(table.rows.len(), 61);

    fs::write(&cfg, r#"{"parameters": {"n": 64}, "worker": 2}"#).unwrap();
    let out = flavorsim(&["quantum", "--config", cfg.to_str().unwrap(), "--out", &out_arg(&dir)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweeps_are_identical_for_any_worker_count() {
    let tmp = tempfile::tempdir().unwrap();
    let mut listings = Vec::new();
    for workers in ["1", "3", "8"] {
        let dir = tmp.path().join(format!("w{workers}"));
        let out = flavorsim(&[
            "quantum",
            "--sweep",
            "n=16,64,256,1024",
            "--horizon",
            "8",
            "--workers",
            workers,
            "--out",
            &out_arg(&dir),
        ]);
        assert_eq!(out.status.code(), Some(0));
        let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(&dir)
            .unwrap()
            .map(|e| e.unwrap().path())
            .filter(|p| p.extension().is_some_and(|x| x == "csv"))
            .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
            .collect();
        files.sort();
        assert_eq!(files.len(), 4);
        listings.push(files);
        let s = summary(&dir);
        let slope = s["aggregate"]["log_fit"]["slope"].as_f64().unwrap();
        assert!(slope > 0.4 && slope < 0.8, "{slope}");
    }
    assert_eq!(listings[0], listings[1]);
    assert_eq!(listings[0], listings[2]);
}

#[test]
fn isotropic_compare_writes_both_curves() {
    let tmp = tempfile::tempdir().unwrap();
    let out = flavorsim(&[
        "isotropic-compare",
        "--param",
        "m=8",
        "--horizon",
        "20",
        "--stride",
        "10",
        "--out",
        &out_arg(tmp.path()),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let beams = read_csv(&tmp.path().join("isotropic-compare_beams.csv")).unwrap();
    let iso = read_csv(&tmp.path().join("isotropic-compare_isotropic.csv")).unwrap();
    assert_eq!(beams.rows.len(), 401);
    assert_eq!(iso.rows.len(), 401);
    let ratio = summary(tmp.path())["runs"][0]["results"]["ratio"].as_f64().unwrap();
    assert!((1.4..=2.6).contains(&ratio));
}

#[test]
fn estimate_prints_verdict_and_provenance() {
    let tmp = tempfile::tempdir().unwrap();
    let out = flavorsim(&["estimate", "--out", &out_arg(tmp.path())]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("xi ="), "{stdout}");
    let s = summary(tmp.path());
    let steps = s["runs"][0]["results"]["report"]["density"]["provenance"]["steps"]
        .as_array()
        .unwrap();
    assert!(steps.iter().any(|st| st["name"] == "graviton_density" && st["unit"] == "MeV^3"));
    assert_eq!(s["runs"][0]["results"]["report"]["scenario"]["frequency_hz"], 250.0);

    let out = flavorsim(&["estimate", "--param", "density_mev3=1e22", "--out", &out_arg(tmp.path())]);
    assert_eq!(out.status.code(), Some(0));
    let xi = summary(tmp.path())["runs"][0]["results"]["overrides"]["xi"]["xi"]
        .as_f64()
        .unwrap();
    assert!((xi - 0.0182).abs() < 5e-4, "{xi}");
}

#[test]
fn reruns_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    for dir in [&a, &b] {
        let out = flavorsim(&["meanfield", "--param", "lambda=0.4", "--horizon", "6", "--out", &out_arg(dir)]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(
        fs::read(a.join("meanfield.csv")).unwrap(),
        fs::read(b.join("meanfield.csv")).unwrap()
    );
}
