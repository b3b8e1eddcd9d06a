//! Spec-driven benchmark runner with deterministic CSV exports.
//!
//! A bench spec lists scenes (synthetic 2D match sets, synthetic 3D
//! localization scenes, or external match files), the methods to compare,
//! and the trial seeds. Every (scene, method, seed) cell runs exactly once
//! — failures become status-tagged rows — and the exports are byte-stable
//! across runs and thread counts:
//!
//! - `records.csv` — one row per cell.
//! - `hist_linear.csv` / `hist_log.csv` — fixed-count (50) histograms of
//!   the Lie distance to ground truth, linear and log-spaced bins (log bins
//!   offset by ε = 1e-8 to admit zero distances).
//! - `per_scene.csv` — per-scene mean Lie distance by method.
//! - `sre_cdf.csv` — empirical CDF samples of the mean SRE by method.
//! - `timings.csv` — wall-clock runtimes; the one export that is *not*
//!   covered by the determinism guarantee.

use std::path::Path;
use std::time::Instant;

use clap_core::config::PipelineConfig;
use clap_core::jsonio;
use clap_core::localize::{localize3d, LocalizeConfig};
use clap_core::metrics::lie_log_distance;
use clap_core::ransac::{inlier_ratio, ransac_homography, ransac_pose, RansacConfig};
use clap_core::solvers::Match2D;
use clap_core::stitch::{clap_homography, StitchConfig};
use nalgebra::Vector3;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eval::{lie_distance_to_gt, EvalRecord};
use crate::synth::{synth_matches_2d, synth_scene_3d, SynthMatchParams, SynthSceneParams};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("cannot read bench spec: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot parse bench spec: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid bench spec: {0}")]
    Invalid(String),
    #[error("config error: {0}")]
    Config(#[from] clap_core::config::ConfigError),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("external matches: {0}")]
    Matches(#[from] clap_core::jsonio::JsonIoError),
}

/// One scene entry in a bench spec.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneSpec {
    pub id: String,
    #[serde(flatten)]
    pub kind: SceneKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SceneKind {
    /// Synthetic 2D match set with planted homography ground truth.
    Matches2d {
        #[serde(default = "default_n_matches")]
        n_matches: usize,
        #[serde(default)]
        outlier_fraction: f64,
        #[serde(default = "default_noise_sigma")]
        noise_sigma: f64,
        #[serde(default = "default_image_size")]
        image_size: (usize, usize),
        #[serde(default = "default_spread")]
        gt_spread: f64,
        #[serde(default = "default_has_gt")]
        has_gt: bool,
        #[serde(default)]
        seed: u64,
    },
    /// Synthetic 3D localization scene with planted pose ground truth.
    Scene3d {
        #[serde(default = "default_n_landmarks")]
        n_landmarks: usize,
        #[serde(default = "default_n_observed")]
        n_observed: usize,
        #[serde(default)]
        outlier_fraction: f64,
        #[serde(default)]
        noise_sigma: f64,
        #[serde(default = "default_labels")]
        labels: Vec<String>,
        #[serde(default = "default_extent")]
        scene_extent: [f64; 3],
        /// Inlier threshold for the 3D RANSAC baseline, scene units.
        #[serde(default = "default_ransac_threshold_3d")]
        ransac_threshold: f64,
        #[serde(default)]
        seed: u64,
    },
    /// Externally produced match file (no ground truth): evaluated by SRE
    /// and inlier ratio only.
    External { path: String },
}

fn default_n_matches() -> usize {
    200
}
fn default_noise_sigma() -> f64 {
    0.5
}
fn default_image_size() -> (usize, usize) {
    (640, 480)
}
fn default_spread() -> f64 {
    0.1
}
fn default_has_gt() -> bool {
    true
}
fn default_n_landmarks() -> usize {
    12
}
fn default_n_observed() -> usize {
    20
}
fn default_labels() -> Vec<String> {
    ["G", "L", "X", "T"].map(String::from).to_vec()
}
fn default_extent() -> [f64; 3] {
    [10.0, 10.0, 4.0]
}
fn default_ransac_threshold_3d() -> f64 {
    0.15
}

/// Top-level bench specification (TOML).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchSpec {
    pub scenes: Vec<SceneSpec>,
    /// Method tags: `"clap"` and/or `"ransac"`.
    pub methods: Vec<String>,
    /// Explicit trial seeds, or use `n_seeds` for 0..n.
    #[serde(default)]
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub n_seeds: Option<usize>,
    /// Pipeline configuration applied to every cell.
    #[serde(default)]
    pub pipeline: PipelineConfig,
}

impl BenchSpec {
    pub fn from_toml_str(text: &str) -> Result<Self, BenchError> {
        let spec: BenchSpec = toml::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_file<P: AsRef<Path>>(path: P) -> Result<Self, BenchError> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    fn validate(&self) -> Result<(), BenchError> {
        if self.scenes.is_empty() {
            return Err(BenchError::Invalid("no scenes listed".into()));
        }
        if self.methods.is_empty() {
            return Err(BenchError::Invalid("no methods listed".into()));
        }
        for m in &self.methods {
            if m != "clap" && m != "ransac" {
                return Err(BenchError::Invalid(format!("unknown method `{m}`")));
            }
        }
        if self.trial_seeds().is_empty() {
            return Err(BenchError::Invalid("no trial seeds".into()));
        }
        let mut ids: Vec<&str> = self.scenes.iter().map(|s| s.id.as_str()).collect();
        ids.sort_unstable();
        ids.dedup();
        if ids.len() != self.scenes.len() {
            return Err(BenchError::Invalid("duplicate scene ids".into()));
        }
        Ok(())
    }

    pub fn trial_seeds(&self) -> Vec<u64> {
        if !self.seeds.is_empty() {
            self.seeds.clone()
        } else {
            (0..self.n_seeds.unwrap_or(0) as u64).collect()
        }
    }
}

/// All records plus the derived tables, ready to export.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchOutput {
    pub records: Vec<EvalRecord>,
}

/// Mix a scene seed and a trial seed into one generation seed.
fn cell_seed(scene_seed: u64, trial_seed: u64) -> u64 {
    scene_seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(trial_seed)
        .wrapping_mul(0xBF58_476D_1CE4_E5B9)
}

fn run_cell_2d(
    matches: &[Match2D],
    gt: Option<&clap_core::geom::Homography>,
    method: &str,
    seed: u64,
    pipeline: &PipelineConfig,
) -> (Option<f64>, Option<f64>, Option<f64>, String) {
    let threshold = pipeline.ransac.threshold_px;
    let estimate = match method {
        "clap" => {
            let cfg = match StitchConfig::from_pipeline(pipeline) {
                Ok(c) => c,
                Err(e) => return (None, None, None, format!("config: {e}")),
            };
            clap_homography(matches, &cfg, seed)
                .map(|(h, _)| h)
                .map_err(|e| e.to_string())
        }
        _ => {
            let cfg = RansacConfig {
                iterations: pipeline.ransac.iterations,
                threshold_px: threshold,
                seed,
            };
            ransac_homography(matches, &cfg)
                .map(|r| r.homography)
                .map_err(|e| e.to_string())
        }
    };
    match estimate {
        Ok(h) => {
            let (per, sre_mean) = clap_core::ransac::symmetric_reprojection_error(&h, matches);
            let inliers = per.iter().filter(|&&e| e <= threshold).count();
            let lie = gt.map(|gt| lie_distance_to_gt(&h, gt).unwrap_or(f64::INFINITY));
            (
                lie,
                Some(sre_mean),
                Some(inlier_ratio(inliers, matches.len())),
                "ok".into(),
            )
        }
        Err(e) => (None, None, None, e),
    }
}

fn run_cell_3d(
    scene: &crate::synth::SynthScene,
    ransac_threshold: f64,
    method: &str,
    seed: u64,
    pipeline: &PipelineConfig,
) -> (Option<f64>, Option<f64>, Option<f64>, String) {
    match method {
        "clap" => {
            let cfg = match LocalizeConfig::from_pipeline(pipeline) {
                Ok(c) => c,
                Err(e) => return (None, None, None, format!("config: {e}")),
            };
            match localize3d(&scene.observations, &scene.map, &cfg, seed) {
                Ok(est) => (
                    Some(lie_log_distance(&est.pose, &scene.gt_pose, 1.0)),
                    None,
                    None,
                    "ok".into(),
                ),
                Err(e) => (None, None, None, e.to_string()),
            }
        }
        _ => {
            match ransac_pose(
                &scene.observations,
                &scene.map,
                pipeline.ransac.iterations,
                ransac_threshold,
                seed,
            ) {
                Ok(res) => (
                    Some(lie_log_distance(&res.pose, &scene.gt_pose, 1.0)),
                    None,
                    Some(inlier_ratio(
                        res.inlier_indices.len(),
                        scene.observations.len(),
                    )),
                    "ok".into(),
                ),
                Err(e) => (None, None, None, e.to_string()),
            }
        }
    }
}

/// Run every (scene, method, seed) cell. Cells execute in parallel and are
/// gathered in spec order, so the output is independent of thread count.
pub fn run_bench(spec: &BenchSpec) -> Result<BenchOutput, BenchError> {
    let trial_seeds = spec.trial_seeds();

    // External match files load once, up front.
    let mut external: Vec<Option<Vec<Match2D>>> = Vec::with_capacity(spec.scenes.len());
    for scene in &spec.scenes {
        external.push(match &scene.kind {
            SceneKind::External { path } => Some(jsonio::read_matches(path)?),
            _ => None,
        });
    }

    let mut cells: Vec<(usize, String, u64)> = Vec::new();
    for (si, _) in spec.scenes.iter().enumerate() {
        for method in &spec.methods {
            for &seed in &trial_seeds {
                cells.push((si, method.clone(), seed));
            }
        }
    }

    let records: Vec<EvalRecord> = cells
        .par_iter()
        .map(|(si, method, trial_seed)| {
            let scene = &spec.scenes[*si];
            let start = Instant::now();
            let (lie, sre, ratio, status) = match &scene.kind {
                SceneKind::Matches2d {
                    n_matches,
                    outlier_fraction,
                    noise_sigma,
                    image_size,
                    gt_spread,
                    has_gt,
                    seed,
                } => {
                    let params = SynthMatchParams {
                        n_matches: *n_matches,
                        outlier_fraction: *outlier_fraction,
                        noise_sigma: *noise_sigma,
                        image_size: *image_size,
                        gt_homography_spread: *gt_spread,
                        seed: cell_seed(*seed, *trial_seed),
                    };
                    let synth = synth_matches_2d(&params);
                    run_cell_2d(
                        &synth.matches,
                        has_gt.then_some(&synth.gt_h),
                        method,
                        *trial_seed,
                        &spec.pipeline,
                    )
                }
                SceneKind::Scene3d {
                    n_landmarks,
                    n_observed,
                    outlier_fraction,
                    noise_sigma,
                    labels,
                    scene_extent,
                    ransac_threshold,
                    seed,
                } => {
                    let params = SynthSceneParams {
                        n_landmarks: *n_landmarks,
                        n_observed: *n_observed,
                        outlier_fraction: *outlier_fraction,
                        noise_sigma: *noise_sigma,
                        label_alphabet: labels.clone(),
                        scene_extent: Vector3::new(
                            scene_extent[0],
                            scene_extent[1],
                            scene_extent[2],
                        ),
                        seed: cell_seed(*seed, *trial_seed),
                    };
                    let scene3d = synth_scene_3d(&params);
                    run_cell_3d(
                        &scene3d,
                        *ransac_threshold,
                        method,
                        *trial_seed,
                        &spec.pipeline,
                    )
                }
                SceneKind::External { .. } => {
                    let matches = external[*si].as_ref().expect("preloaded above");
                    run_cell_2d(matches, None, method, *trial_seed, &spec.pipeline)
                }
            };
            EvalRecord {
                method: method.clone(),
                scene_id: scene.id.clone(),
                seed: *trial_seed,
                lie_distance_to_gt: lie,
                sre_mean: sre,
                inlier_ratio: ratio,
                runtime_ms: start.elapsed().as_secs_f64() * 1e3,
                status,
            }
        })
        .collect();

    Ok(BenchOutput { records })
}

// ── Exports ──────────────────────────────────────────────────────────────

/// Format a float with the shortest round-trip representation; infinities
/// print as `inf`.
fn fmt_f64(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v}")
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

impl BenchOutput {
    /// Write all export tables into `out_dir` (created if needed).
    pub fn write_exports<P: AsRef<Path>>(&self, out_dir: P) -> Result<(), BenchError> {
        let dir = out_dir.as_ref();
        std::fs::create_dir_all(dir)?;
        self.write_records(dir.join("records.csv"))?;
        self.write_histogram(dir.join("hist_linear.csv"), false)?;
        self.write_histogram(dir.join("hist_log.csv"), true)?;
        self.write_per_scene(dir.join("per_scene.csv"))?;
        self.write_sre_cdf(dir.join("sre_cdf.csv"))?;
        self.write_timings(dir.join("timings.csv"))?;
        Ok(())
    }

    fn write_records(&self, path: impl AsRef<Path>) -> Result<(), BenchError> {
        let mut w = csv::Writer::from_path(path.as_ref())?;
        w.write_record([
            "method",
            "scene_id",
            "seed",
            "lie_distance_to_gt",
            "sre_mean",
            "inlier_ratio",
            "status",
        ])?;
        for r in &self.records {
            w.write_record([
                r.method.clone(),
                r.scene_id.clone(),
                r.seed.to_string(),
                fmt_opt(r.lie_distance_to_gt),
                fmt_opt(r.sre_mean),
                fmt_opt(r.inlier_ratio),
                r.status.clone(),
            ])?;
        }
        w.flush().map_err(std::io::Error::from)?;
        Ok(())
    }

    /// Fixed-count histogram (50 bins) of the finite Lie distances, shared
    /// bin edges across methods. Log bins span log10(d + ε) with ε = 1e-8.
    fn write_histogram(&self, path: impl AsRef<Path>, log_bins: bool) -> Result<(), BenchError> {
        const BINS: usize = 50;
        const EPS: f64 = 1e-8;
        let finite: Vec<(&str, f64)> = self
            .records
            .iter()
            .filter_map(|r| {
                r.lie_distance_to_gt
                    .filter(|d| d.is_finite())
                    .map(|d| (r.method.as_str(), d))
            })
            .collect();
        let mut w = csv::Writer::from_path(path.as_ref())?;
        w.write_record(["method", "bin_low", "bin_high", "count"])?;
        if finite.is_empty() {
            w.flush().map_err(std::io::Error::from)?;
            return Ok(());
        }
        let max = finite.iter().map(|(_, d)| *d).fold(0.0, f64::max);
        let transform = |d: f64| if log_bins { (d + EPS).log10() } else { d };
        let lo = transform(0.0);
        let hi = transform(max).max(lo + 1e-12);
        let width = (hi - lo) / BINS as f64;
        let mut methods: Vec<&str> = finite.iter().map(|(m, _)| *m).collect();
        methods.sort_unstable();
        methods.dedup();
        for method in methods {
            let mut counts = [0usize; BINS];
            for (m, d) in &finite {
                if *m == method {
                    let idx = (((transform(*d) - lo) / width) as usize).min(BINS - 1);
                    counts[idx] += 1;
                }
            }
            for (i, count) in counts.iter().enumerate() {
                let (bl, bh) = (lo + width * i as f64, lo + width * (i + 1) as f64);
                let (bl, bh) = if log_bins {
                    (10f64.powf(bl) - EPS, 10f64.powf(bh) - EPS)
                } else {
                    (bl, bh)
                };
                w.write_record([
                    method.to_string(),
                    fmt_f64(bl),
                    fmt_f64(bh),
                    count.to_string(),
                ])?;
            }
        }
        w.flush().map_err(std::io::Error::from)?;
        Ok(())
    }

    /// Per-scene mean Lie distance (finite values) and failure count per
    /// method, in spec order.
    fn write_per_scene(&self, path: impl AsRef<Path>) -> Result<(), BenchError> {
        let mut w = csv::Writer::from_path(path.as_ref())?;
        w.write_record(["scene_id", "method", "mean_lie_distance", "cells", "failed"])?;
        let mut seen: Vec<(String, String)> = Vec::new();
        for r in &self.records {
            let key = (r.scene_id.clone(), r.method.clone());
            if !seen.contains(&key) {
                seen.push(key);
            }
        }
        for (scene_id, method) in seen {
            let rows: Vec<&EvalRecord> = self
                .records
                .iter()
                .filter(|r| r.scene_id == scene_id && r.method == method)
                .collect();
            let finite: Vec<f64> = rows
                .iter()
                .filter_map(|r| r.lie_distance_to_gt.filter(|d| d.is_finite()))
                .collect();
            let failed = rows
                .iter()
                .filter(|r| {
                    r.status != "ok"
                        || r.lie_distance_to_gt.is_some_and(|d| !d.is_finite())
                })
                .count();
            let mean = if finite.is_empty() {
                None
            } else {
                Some(finite.iter().sum::<f64>() / finite.len() as f64)
            };
            w.write_record([
                scene_id,
                method,
                fmt_opt(mean),
                rows.len().to_string(),
                failed.to_string(),
            ])?;
        }
        w.flush().map_err(std::io::Error::from)?;
        Ok(())
    }

    /// Empirical CDF of the mean SRE per method: one row per sample, the
    /// cumulative fraction non-decreasing and ending at 1.
    fn write_sre_cdf(&self, path: impl AsRef<Path>) -> Result<(), BenchError> {
        let mut w = csv::Writer::from_path(path.as_ref())?;
        w.write_record(["method", "sre", "fraction"])?;
        let mut methods: Vec<&str> = self.records.iter().map(|r| r.method.as_str()).collect();
        methods.sort_unstable();
        methods.dedup();
        for method in methods {
            let mut values: Vec<f64> = self
                .records
                .iter()
                .filter(|r| r.method == method)
                .filter_map(|r| r.sre_mean)
                .collect();
            values.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let n = values.len();
            for (i, v) in values.iter().enumerate() {
                w.write_record([
                    method.to_string(),
                    fmt_f64(*v),
                    fmt_f64((i + 1) as f64 / n as f64),
                ])?;
            }
        }
        w.flush().map_err(std::io::Error::from)?;
        Ok(())
    }

    fn write_timings(&self, path: impl AsRef<Path>) -> Result<(), BenchError> {
        let mut w = csv::Writer::from_path(path.as_ref())?;
        w.write_record(["method", "scene_id", "seed", "runtime_ms"])?;
        for r in &self.records {
            w.write_record([
                r.method.clone(),
                r.scene_id.clone(),
                r.seed.to_string(),
                format!("{:.3}", r.runtime_ms),
            ])?;
        }
        w.flush().map_err(std::io::Error::from)?;
        Ok(())
    }
}
