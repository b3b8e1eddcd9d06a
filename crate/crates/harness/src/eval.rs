//! Evaluation metrics and the per-cell record schema.

use clap_core::geom::{gl3, Homography, NormalizationMode};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("degenerate homography: {0}")]
    DegenerateHomography(String),
}

/// Lie distance to a ground-truth homography, exactly as the evaluation
/// figures define it: both arguments normalized so H₃₃ = 1, then
/// ‖log(H_gt⁻¹·H)‖_F. Out-of-domain logs return +∞ as a visible sentinel.
pub fn lie_distance_to_gt(h: &Homography, gt: &Homography) -> Result<f64, EvalError> {
    let h = h
        .renormalized(NormalizationMode::UnitLowerRight)
        .map_err(|e| EvalError::DegenerateHomography(e.to_string()))?;
    let gt = gt
        .renormalized(NormalizationMode::UnitLowerRight)
        .map_err(|e| EvalError::DegenerateHomography(e.to_string()))?;
    let gt_inv = gt
        .matrix()
        .try_inverse()
        .ok_or_else(|| EvalError::DegenerateHomography("ground truth not invertible".into()))?;
    match gl3::log(&(gt_inv * h.matrix())) {
        Ok(l) => Ok(l.norm()),
        Err(_) => Ok(f64::INFINITY),
    }
}

/// One benchmark cell result. 2D cells fill the SRE and inlier columns; 3D
/// cells reuse `lie_distance_to_gt` for the SE(3) Lie-log distance to the
/// true pose and leave the 2D-only columns empty. `runtime_ms` is wall
/// clock and excluded from the determinism guarantee.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub method: String,
    pub scene_id: String,
    pub seed: u64,
    pub lie_distance_to_gt: Option<f64>,
    pub sre_mean: Option<f64>,
    pub inlier_ratio: Option<f64>,
    pub runtime_ms: f64,
    /// "ok" or an error tag; failed cells still produce exactly one row.
    pub status: String,
}
