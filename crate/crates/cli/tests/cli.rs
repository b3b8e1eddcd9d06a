//! End-to-end CLI checks through the real binary.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_clap-estimate")
}

fn run(args: &[&str]) -> std::process::Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary runs")
}

fn tmp_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("clap_estimate_cli_{name}_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn synth_localize_roundtrip_recovers_gt() {
    let dir = tmp_dir("loc");
    let map = dir.join("map.json");
    let obs = dir.join("obs.json");
    let gt = dir.join("gt.json");
    let out = dir.join("pose.json");

    let s = run(&[
        "synth",
        "scene3d",
        "--n-landmarks",
        "8",
        "--n-observed",
        "8",
        "--seed",
        "7",
        "--out-map",
        path_str(&map),
        "--out-obs",
        path_str(&obs),
        "--out-gt",
        path_str(&gt),
    ]);
    assert!(s.status.success(), "{}", String::from_utf8_lossy(&s.stderr));

    let l = run(&[
        "localize3d",
        "--map",
        path_str(&map),
        "--obs",
        path_str(&obs),
        "--seed",
        "0",
        "--out",
        path_str(&out),
    ]);
    assert!(l.status.success(), "{}", String::from_utf8_lossy(&l.stderr));

    let estimate: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let truth: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&gt).unwrap()).unwrap();
    for key in ["R", "t"] {
        assert!(estimate.get(key).is_some());
    }
    for (a, b) in estimate["t"]
        .as_array()
        .unwrap()
        .iter()
        .zip(truth["t"].as_array().unwrap())
    {
        assert!((a.as_f64().unwrap() - b.as_f64().unwrap()).abs() < 1e-6);
    }
    assert!(estimate.get("survivors").is_some());
    assert!(estimate.get("mode").is_some());
    assert!(estimate.get("flags").is_some());
}

#[test]
fn stitch_writes_panorama_and_report() {
    let dir = tmp_dir("stitch");
    // A small gradient image, saved through the library's own writer.
    let mut img = clap_core::raster::Raster::new(48, 36, 3);
    for y in 0..36 {
        for x in 0..48 {
            img.pixel_mut(x, y)
                .copy_from_slice(&[(x * 5) as u8, (y * 7) as u8, 128]);
        }
    }
    let left = dir.join("left.ppm");
    let right = dir.join("right.ppm");
    img.save_pnm(&left).unwrap();
    img.save_pnm(&right).unwrap();

    // Identity correspondences on a grid.
    let mut matches = Vec::new();
    for y in (4..36).step_by(8) {
        for x in (4..48).step_by(8) {
            matches.push(serde_json::json!({"p": [x as f64, y as f64], "q": [x as f64, y as f64]}));
        }
    }
    let matches_path = dir.join("matches.json");
    std::fs::write(
        &matches_path,
        serde_json::json!({ "matches": matches }).to_string(),
    )
    .unwrap();

    let out = dir.join("pano.ppm");
    let report = dir.join("report.json");
    let s = run(&[
        "stitch",
        "--left",
        path_str(&left),
        "--right",
        path_str(&right),
        "--matches",
        path_str(&matches_path),
        "--seed",
        "1",
        "--out",
        path_str(&out),
        "--report",
        path_str(&report),
    ]);
    assert!(s.status.success(), "{}", String::from_utf8_lossy(&s.stderr));

    let pano = clap_core::raster::Raster::load_pnm(&out).unwrap();
    assert_eq!((pano.width, pano.height), (48, 36));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    for key in ["H", "sre_mean", "sre_samples", "inlier_ratio", "survivors_per_round", "fallback_pairs"] {
        assert!(report.get(key).is_some(), "report missing {key}");
    }
}

#[test]
fn bench_runs_a_spec_and_exports() {
    let dir = tmp_dir("bench");
    let spec = dir.join("bench.toml");
    std::fs::write(
        &spec,
        r#"
        methods = ["clap", "ransac"]
        n_seeds = 1

        [[scenes]]
        id = "s0"
        kind = "matches2d"
        n_matches = 40
        noise_sigma = 0.5

        [pipeline.stitch]
        n_candidates = 50

        [pipeline.ransac]
        iterations = 100
        "#,
    )
    .unwrap();
    let out_dir = dir.join("results");
    let s = run(&[
        "bench",
        "--spec",
        path_str(&spec),
        "--out-dir",
        path_str(&out_dir),
    ]);
    assert!(s.status.success(), "{}", String::from_utf8_lossy(&s.stderr));
    let records = std::fs::read_to_string(out_dir.join("records.csv")).unwrap();
    assert_eq!(records.lines().count(), 3);
    assert!(records.starts_with("method,scene_id,seed,"));
}

#[test]
fn config_file_is_honored() {
    let dir = tmp_dir("cfg");
    let cfg = dir.join("cfg.toml");
    std::fs::write(&cfg, "[cluster]\nmetric = \"not-a-metric\"").unwrap();
    let map = dir.join("map.json");
    let obs = dir.join("obs.json");
    run(&[
        "synth",
        "scene3d",
        "--n-landmarks",
        "6",
        "--n-observed",
        "6",
        "--out-map",
        path_str(&map),
        "--out-obs",
        path_str(&obs),
    ]);
    let bad = run(&[
        "localize3d",
        "--map",
        path_str(&map),
        "--obs",
        path_str(&obs),
        "--config",
        path_str(&cfg),
        "--out",
        path_str(&dir.join("pose.json")),
    ]);
    assert!(!bad.status.success());
    let stderr = String::from_utf8_lossy(&bad.stderr);
    assert!(stderr.contains("metric"), "unhelpful error: {stderr}");
}
