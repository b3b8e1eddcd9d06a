//! TOML pipeline configuration shared by the CLI and the benchmark
//! harness.
//!
//! Every key has a default, so an empty (or absent) file configures the
//! stock pipelines:
//!
//! ```toml
//! [cluster]
//! metric = "lielog"      # rte | lielog | pointset | hlie | hfro
//! lambda = 1.0
//! trim_fraction = 0.2
//! rounds = 5
//! mad_k = 3.0
//! mode = "global"        # local | global
//! tol_t = 0.5
//! tol_r = 0.35
//!
//! [average]
//! scheme = "karcher"     # karcher | logeuclidean | split | medoid
//! max_iter = 100
//! tol = 1e-10
//!
//! [localize]
//! max_candidates = 2000
//!
//! [stitch]
//! n_candidates = 400
//! center = "medoid"      # medoid | liemean | liemedian
//! refine = true
//! blend = "feather"      # noblend | overwrite | feather
//!
//! [ransac]
//! iterations = 1000
//! threshold_px = 2.0
//! ```

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::average::{AveragingConfig, HomographyAverageScheme, PoseAverageScheme};
use crate::blend::BlendMode;
use crate::cluster::{ClusterMode, TrimConfig};
use crate::metrics::{HomographyMetric, HomographyMetricKind, PoseMetric};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot parse config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub cluster: ClusterSection,
    pub average: AverageSection,
    pub localize: LocalizeSection,
    pub stitch: StitchSection,
    pub ransac: RansacSection,
}

impl PipelineConfig {
    pub fn from_toml_str(s: &str) -> Result<Self, ConfigError> {
        let cfg: PipelineConfig = toml::from_str(s)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file<P: AsRef<std::path::Path>>(path: P) -> Result<Self, ConfigError> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        let c = &self.cluster;
        if !(0.0..1.0).contains(&c.trim_fraction) {
            return Err(ConfigError::Invalid("trim_fraction must be in [0, 1)".into()));
        }
        if c.rounds == 0 {
            return Err(ConfigError::Invalid("rounds must be ≥ 1".into()));
        }
        if c.mad_k < 0.0 {
            return Err(ConfigError::Invalid("mad_k must be ≥ 0".into()));
        }
        if c.lambda < 0.0 {
            return Err(ConfigError::Invalid("lambda must be ≥ 0".into()));
        }
        if c.metric == "pointset" && c.points.as_ref().is_none_or(|p| p.is_empty()) {
            return Err(ConfigError::Invalid(
                "pointset metric needs a nonempty `points` list".into(),
            ));
        }
        if self.stitch.n_candidates < 4 {
            return Err(ConfigError::Invalid("n_candidates must be ≥ 4".into()));
        }
        if self.ransac.iterations == 0 {
            return Err(ConfigError::Invalid("ransac.iterations must be ≥ 1".into()));
        }
        if self.ransac.threshold_px <= 0.0 {
            return Err(ConfigError::Invalid("ransac.threshold_px must be > 0".into()));
        }
        self.cluster.pose_metric()?;
        self.average.pose_scheme()?;
        self.stitch.center_scheme()?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClusterSection {
    pub metric: String,
    pub lambda: f64,
    pub points: Option<Vec<[f64; 3]>>,
    pub trim_fraction: f64,
    pub rounds: usize,
    pub mad_k: f64,
    pub mode: String,
    pub tol_t: f64,
    pub tol_r: f64,
}

impl Default for ClusterSection {
    fn default() -> Self {
        ClusterSection {
            metric: "lielog".into(),
            lambda: 1.0,
            points: None,
            trim_fraction: 0.2,
            rounds: 5,
            mad_k: 3.0,
            mode: "global".into(),
            tol_t: 0.5,
            tol_r: 0.35,
        }
    }
}

impl ClusterSection {
    pub fn trim(&self) -> TrimConfig {
        TrimConfig {
            trim_fraction: self.trim_fraction,
            rounds: self.rounds,
            mad_k: self.mad_k,
        }
    }

    pub fn mode(&self) -> Result<ClusterMode, ConfigError> {
        match self.mode.as_str() {
            "local" => Ok(ClusterMode::Local {
                tol_t: self.tol_t,
                tol_r: self.tol_r,
            }),
            "global" => Ok(ClusterMode::Global),
            other => Err(ConfigError::Invalid(format!("unknown mode `{other}`"))),
        }
    }

    pub fn pose_metric(&self) -> Result<PoseMetric, ConfigError> {
        match self.metric.as_str() {
            "rte" => Ok(PoseMetric::Rte { lambda: self.lambda }),
            "lielog" => Ok(PoseMetric::LieLog { lambda: self.lambda }),
            "pointset" => {
                let points = self
                    .points
                    .as_ref()
                    .ok_or_else(|| {
                        ConfigError::Invalid("pointset metric needs `points`".into())
                    })?
                    .iter()
                    .map(|p| Vector3::new(p[0], p[1], p[2]))
                    .collect();
                Ok(PoseMetric::PointSet { points })
            }
            // Homography metric names are valid config but not pose metrics.
            "hlie" | "hfro" => Err(ConfigError::Invalid(format!(
                "`{}` is a homography metric, not usable for poses",
                self.metric
            ))),
            other => Err(ConfigError::Invalid(format!("unknown metric `{other}`"))),
        }
    }

    pub fn homography_metric(&self) -> HomographyMetric {
        match self.metric.as_str() {
            "hfro" => HomographyMetric(HomographyMetricKind::Frobenius),
            // The Lie metric is the default for homography clustering; pose
            // metric names fall through to it.
            _ => HomographyMetric(HomographyMetricKind::LieAlgebra),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AverageSection {
    pub scheme: String,
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for AverageSection {
    fn default() -> Self {
        AverageSection {
            scheme: "karcher".into(),
            max_iter: 100,
            tol: 1e-10,
        }
    }
}

impl AverageSection {
    pub fn pose_scheme(&self) -> Result<PoseAverageScheme, ConfigError> {
        match self.scheme.as_str() {
            "karcher" => Ok(PoseAverageScheme::Karcher),
            "logeuclidean" => Ok(PoseAverageScheme::LogEuclidean),
            "split" => Ok(PoseAverageScheme::Split),
            "medoid" => Ok(PoseAverageScheme::Medoid),
            other => Err(ConfigError::Invalid(format!(
                "unknown averaging scheme `{other}`"
            ))),
        }
    }

    pub fn averaging(&self) -> Result<AveragingConfig, ConfigError> {
        Ok(AveragingConfig {
            scheme: self.pose_scheme()?,
            max_iter: self.max_iter,
            tol: self.tol,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LocalizeSection {
    pub max_candidates: usize,
}

impl Default for LocalizeSection {
    fn default() -> Self {
        LocalizeSection {
            max_candidates: 2000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StitchSection {
    pub n_candidates: usize,
    pub center: String,
    pub refine: bool,
    pub blend: String,
}

impl Default for StitchSection {
    fn default() -> Self {
        StitchSection {
            n_candidates: 400,
            center: "medoid".into(),
            refine: true,
            blend: "feather".into(),
        }
    }
}

impl StitchSection {
    pub fn center_scheme(&self) -> Result<HomographyAverageScheme, ConfigError> {
        match self.center.as_str() {
            "medoid" => Ok(HomographyAverageScheme::Medoid),
            "liemean" => Ok(HomographyAverageScheme::LieMean),
            "liemedian" => Ok(HomographyAverageScheme::LieMedian),
            other => Err(ConfigError::Invalid(format!("unknown center `{other}`"))),
        }
    }

    pub fn blend_mode(&self) -> Result<BlendMode, ConfigError> {
        match self.blend.as_str() {
            "noblend" => Ok(BlendMode::NoBlend),
            "overwrite" => Ok(BlendMode::Overwrite),
            "feather" => Ok(BlendMode::Feather),
            other => Err(ConfigError::Invalid(format!("unknown blend `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RansacSection {
    pub iterations: usize,
    pub threshold_px: f64,
}

impl Default for RansacSection {
    fn default() -> Self {
        RansacSection {
            iterations: 1000,
            threshold_px: 2.0,
        }
    }
}
