//! End-to-end 6-DoF localization: labeled observations + map → candidate
//! poses → local/global filtering → trim clustering → MAD prune → robust
//! average.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::average::{average_poses, AveragingConfig, PoseAverageScheme};
use crate::cluster::{local_filter, mad_filter, trim_iterate, ClusterError, ClusterMode, TrimConfig};
use crate::geom::Pose;
use crate::metrics::PoseMetric;
use crate::solvers::{enumerate_pose_candidates, Landmark, LandmarkMap, SolverError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LocalizeError {
    #[error("need at least 3 observations, got {0}")]
    TooFewObservations(usize),
    #[error("every candidate triplet was degenerate")]
    AllCandidatesDegenerate,
    #[error("averaging failed: {0}")]
    Averaging(String),
}

/// Full pipeline configuration. The default is global-mode clustering with
/// the Lie-log metric and a Karcher-mean center.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalizeConfig {
    pub metric: PoseMetric,
    /// Scene-units-per-radian weight used for local-filter ranking.
    pub lambda: f64,
    pub trim: TrimConfig,
    pub mode: ClusterMode,
    pub average: AveragingConfig,
    pub max_candidates: usize,
    /// Reference pose for local mode; without it the pipeline runs global.
    pub initial_pose: Option<Pose>,
}

impl Default for LocalizeConfig {
    fn default() -> Self {
        LocalizeConfig {
            metric: PoseMetric::LieLog { lambda: 1.0 },
            lambda: 1.0,
            trim: TrimConfig::default(),
            mode: ClusterMode::Global,
            average: AveragingConfig::default(),
            max_candidates: 2000,
            initial_pose: None,
        }
    }
}

impl LocalizeConfig {
    /// Assemble from the TOML pipeline config.
    pub fn from_pipeline(
        cfg: &crate::config::PipelineConfig,
    ) -> Result<Self, crate::config::ConfigError> {
        Ok(LocalizeConfig {
            metric: cfg.cluster.pose_metric()?,
            lambda: cfg.cluster.lambda,
            trim: cfg.cluster.trim(),
            mode: cfg.cluster.mode()?,
            average: cfg.average.averaging()?,
            max_candidates: cfg.localize.max_candidates,
            initial_pose: None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeUsed {
    Local,
    Global,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct EstimateFlags {
    /// The iterative averaging scheme hit its iteration cap.
    pub non_convergence: bool,
    /// Local filtering retained nothing and the pipeline reran globally.
    pub fallback_to_global: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoseEstimate {
    pub pose: Pose,
    pub survivor_count: usize,
    pub scheme_used: PoseAverageScheme,
    pub mode_used: ModeUsed,
    pub flags: EstimateFlags,
    pub per_round_counts: Vec<usize>,
}

/// Run the localization pipeline. Deterministic given `seed` (which drives
/// only candidate subsampling when the enumeration exceeds
/// `cfg.max_candidates`).
pub fn localize3d(
    observations: &[Landmark],
    map: &LandmarkMap,
    cfg: &LocalizeConfig,
    seed: u64,
) -> Result<PoseEstimate, LocalizeError> {
    let candidates = enumerate_pose_candidates(observations, map, cfg.max_candidates, seed)
        .map_err(|e| match e {
            SolverError::TooFewObservations { got, .. } => LocalizeError::TooFewObservations(got),
            _ => LocalizeError::AllCandidatesDegenerate,
        })?;
    if candidates.is_empty() {
        return Err(LocalizeError::AllCandidatesDegenerate);
    }

    let mut flags = EstimateFlags::default();
    let (working, mode_used) = match (cfg.mode, &cfg.initial_pose) {
        (ClusterMode::Local { tol_t, tol_r }, Some(reference)) => {
            match local_filter(&candidates, reference, tol_t, tol_r, cfg.lambda) {
                Ok(kept) => {
                    let poses: Vec<Pose> = kept.iter().map(|&i| candidates[i].pose).collect();
                    (poses, ModeUsed::Local)
                }
                Err(ClusterError::EmptyAfterFilter) => {
                    flags.fallback_to_global = true;
                    (
                        candidates.iter().map(|c| c.pose).collect(),
                        ModeUsed::Global,
                    )
                }
                Err(_) => unreachable!("local_filter only fails with EmptyAfterFilter"),
            }
        }
        _ => (
            candidates.iter().map(|c| c.pose).collect(),
            ModeUsed::Global,
        ),
    };

    // Trim down to the dense cluster; a single survivor of local filtering
    // short-circuits (nothing left to trim).
    let (mut survivors, cluster_center, per_round_counts) = if working.len() >= 2 {
        let res = trim_iterate(&working, &cfg.metric, &cfg.trim)
            .expect("trim_iterate on ≥2 candidates cannot fail");
        let poses: Vec<Pose> = res.survivors.iter().map(|&i| working[i]).collect();
        let center = working[res.center_index];
        let pruned = if cfg.trim.mad_k > 0.0 {
            mad_filter(&poses, &center, &cfg.metric, cfg.trim.mad_k)
                .into_iter()
                .map(|i| poses[i])
                .collect()
        } else {
            poses
        };
        (pruned, Some(center), res.per_round_counts)
    } else {
        (working, None, Vec::new())
    };
    if survivors.is_empty() {
        // MAD pruning always keeps the center; this is unreachable, but
        // degrade gracefully rather than panic.
        survivors = candidates.iter().map(|c| c.pose).collect();
    }

    // The medoid scheme selects the clustering's own center candidate; the
    // averaging schemes condense the pruned survivor set.
    let mean = match (cfg.average.scheme, cluster_center) {
        (PoseAverageScheme::Medoid, Some(center)) => crate::average::MeanResult {
            value: center,
            converged: true,
            iterations: 0,
            excluded: 0,
        },
        _ => average_poses(&survivors, &cfg.average)
            .map_err(|e| LocalizeError::Averaging(e.to_string()))?,
    };
    flags.non_convergence = !mean.converged;

    Ok(PoseEstimate {
        pose: mean.value,
        survivor_count: survivors.len(),
        scheme_used: cfg.average.scheme,
        mode_used,
        flags,
        per_round_counts,
    })
}
