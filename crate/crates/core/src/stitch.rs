//! End-to-end stitching: matches → sampled homography candidates → trim
//! clustering → robust center → guarded refinement → warp and composite.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::average::{average_homographies, HomographyAverageScheme};
use crate::blend::{composite, BlendMode};
use crate::cluster::{mad_filter, trim_iterate, TrimConfig};
use crate::geom::{Homography, NormalizationMode};
use crate::jsonio::HomographyJson;
use crate::metrics::{HomographyMetric, HomographyMetricKind, Metric};
use crate::ransac::{inlier_ratio, refine_homography, symmetric_reprojection_error};
use crate::raster::Raster;
use crate::solvers::{sample_homography_candidates, Match2D, SolverError};
use crate::warp::{union_canvas_bounds, warp_image};

#[derive(Debug, Error)]
pub enum StitchError {
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("averaging failed: {0}")]
    Averaging(String),
    #[error("compositing failed: {0}")]
    Raster(#[from] crate::raster::RasterError),
}

/// Stitching pipeline configuration. Defaults follow the fixed-budget
/// protocol: 400 candidates, 5 rounds of 20% trimming, medoid center with
/// refinement on, feather blending.
#[derive(Debug, Clone, PartialEq)]
pub struct StitchConfig {
    pub n_candidates: usize,
    pub metric: HomographyMetric,
    pub trim: TrimConfig,
    pub center: HomographyAverageScheme,
    pub refine: bool,
    /// Inlier threshold (px) for refinement and the report's inlier ratio.
    pub threshold_px: f64,
    pub blend: BlendMode,
    pub average_max_iter: usize,
    pub average_tol: f64,
}

impl Default for StitchConfig {
    fn default() -> Self {
        StitchConfig {
            n_candidates: 400,
            metric: HomographyMetric(HomographyMetricKind::LieAlgebra),
            trim: TrimConfig::default(),
            center: HomographyAverageScheme::Medoid,
            refine: true,
            threshold_px: 2.0,
            blend: BlendMode::Feather,
            average_max_iter: 100,
            average_tol: 1e-10,
        }
    }
}

impl StitchConfig {
    pub fn from_pipeline(
        cfg: &crate::config::PipelineConfig,
    ) -> Result<Self, crate::config::ConfigError> {
        Ok(StitchConfig {
            n_candidates: cfg.stitch.n_candidates,
            metric: cfg.cluster.homography_metric(),
            trim: cfg.cluster.trim(),
            center: cfg.stitch.center_scheme()?,
            refine: cfg.stitch.refine,
            threshold_px: cfg.ransac.threshold_px,
            blend: cfg.stitch.blend_mode()?,
            average_max_iter: cfg.average.max_iter,
            average_tol: cfg.average.tol,
        })
    }
}

/// Cluster diagnostics accompanying an estimated homography.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StitchDiagnostics {
    pub survivors_per_round: Vec<usize>,
    /// Survivor count after the MAD prune (what the center was computed
    /// from).
    pub survivor_count: usize,
    pub fallback_pairs: usize,
    /// Mean pairwise-metric distance from the final center to the
    /// survivors.
    pub spread_mean: f64,
    pub spread_max: f64,
    /// Averaging hit its iteration cap.
    pub non_convergence: bool,
    /// Members the averaging scheme had to exclude (log-domain failures).
    pub excluded: usize,
    /// The guarded refinement replaced the cluster center.
    pub refined: bool,
}

/// Estimate a homography by candidate clustering.
///
/// Pipeline: seeded candidate sampling → iterative trimming under the
/// configured metric (Lie-algebra by default, Frobenius fallback counted)
/// → MAD prune → center per `cfg.center` → optional guarded refinement.
/// Deterministic given the seed.
pub fn clap_homography(
    matches: &[Match2D],
    cfg: &StitchConfig,
    seed: u64,
) -> Result<(Homography, StitchDiagnostics), StitchError> {
    let candidates = sample_homography_candidates(matches, cfg.n_candidates, seed)?;
    let hs: Vec<Homography> = candidates.iter().map(|c| c.homography).collect();

    let trim_res = trim_iterate(&hs, &cfg.metric, &cfg.trim)
        .expect("candidate minimum guarantees ≥ 2 for trimming");
    let survivors: Vec<Homography> = trim_res.survivors.iter().map(|&i| hs[i]).collect();
    let trim_center = hs[trim_res.center_index];

    let pruned: Vec<Homography> = if cfg.trim.mad_k > 0.0 {
        mad_filter(&survivors, &trim_center, &cfg.metric, cfg.trim.mad_k)
            .into_iter()
            .map(|i| survivors[i])
            .collect()
    } else {
        survivors
    };

    // The medoid scheme selects the clustering's own center candidate; the
    // averaging schemes condense the pruned survivor set.
    let mean = match cfg.center {
        HomographyAverageScheme::Medoid => crate::average::MeanResult {
            value: trim_center,
            converged: true,
            iterations: 0,
            excluded: 0,
        },
        scheme => average_homographies(&pruned, scheme, cfg.average_max_iter, cfg.average_tol)
            .map_err(|e| StitchError::Averaging(e.to_string()))?,
    };
    let mut center = mean
        .value
        .renormalized(NormalizationMode::UnitLowerRight)
        .map_err(|e| StitchError::Averaging(e.to_string()))?;

    let mut refined = false;
    if cfg.refine {
        // Iterate the guarded refinement to a fixed point: each pass can
        // recruit inliers the previous model barely missed.
        for _ in 0..10 {
            let res = refine_homography(&center, matches, cfg.threshold_px);
            center = res.homography;
            if res.improved {
                refined = true;
            } else {
                break;
            }
        }
    }

    let dists: Vec<f64> = pruned
        .iter()
        .map(|h| cfg.metric.distance(&center, h).value)
        .collect();
    let spread_mean = dists.iter().sum::<f64>() / dists.len().max(1) as f64;
    let spread_max = dists.iter().cloned().fold(0.0, f64::max);

    Ok((
        center,
        StitchDiagnostics {
            survivors_per_round: trim_res.per_round_counts,
            survivor_count: pruned.len(),
            fallback_pairs: trim_res.fallback_pairs,
            spread_mean,
            spread_max,
            non_convergence: !mean.converged,
            excluded: mean.excluded,
            refined,
        },
    ))
}

/// Stitch report: the estimated homography (p → q, unit-lower-right form)
/// extended with the evaluation metrics and cluster diagnostics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StitchReport {
    #[serde(flatten)]
    pub homography: HomographyJson,
    pub sre_mean: f64,
    pub sre_samples: Vec<f64>,
    pub inlier_ratio: f64,
    pub survivors_per_round: Vec<usize>,
    pub fallback_pairs: usize,
    #[serde(flatten)]
    pub diagnostics: StitchDiagnosticsReport,
}

/// The diagnostics fields that are not already top-level report keys.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StitchDiagnosticsReport {
    pub survivor_count: usize,
    pub spread_mean: f64,
    pub spread_max: f64,
    pub non_convergence: bool,
    pub excluded: usize,
    pub refined: bool,
}

/// Full stitch: estimate the left→right homography from matches, warp the
/// right image into the left frame, composite under the configured blend
/// mode, and report metrics.
pub fn stitch(
    left: &Raster,
    right: &Raster,
    matches: &[Match2D],
    cfg: &StitchConfig,
    seed: u64,
) -> Result<(Raster, StitchReport), StitchError> {
    let (h, diag) = clap_homography(matches, cfg, seed)?;

    // h maps left pixels onto right pixels; placing right-image content in
    // the left frame warps it through the inverse.
    let right_to_canvas = h
        .inverse()
        .map_err(|e| StitchError::Averaging(e.to_string()))?;
    let bounds = union_canvas_bounds(
        (left.width, left.height),
        (right.width, right.height),
        &right_to_canvas,
        8.0,
    );
    let (warped_right, right_mask) = warp_image(right, &right_to_canvas, bounds);
    let identity = Homography::identity(NormalizationMode::UnitLowerRight);
    let (placed_left, left_mask) = warp_image(left, &identity, bounds);

    let pano = composite(&placed_left, &warped_right, &left_mask, &right_mask, cfg.blend)?;

    let (sre_samples, sre_mean) = symmetric_reprojection_error(&h, matches);
    let inliers = sre_samples
        .iter()
        .filter(|&&e| e <= cfg.threshold_px)
        .count();
    let report = StitchReport {
        homography: HomographyJson::from(&h),
        sre_mean,
        sre_samples,
        inlier_ratio: inlier_ratio(inliers, matches.len()),
        survivors_per_round: diag.survivors_per_round.clone(),
        fallback_pairs: diag.fallback_pairs,
        diagnostics: StitchDiagnosticsReport {
            survivor_count: diag.survivor_count,
            spread_mean: diag.spread_mean,
            spread_max: diag.spread_max,
            non_convergence: diag.non_convergence,
            excluded: diag.excluded,
            refined: diag.refined,
        },
    };
    Ok((pano, report))
}
