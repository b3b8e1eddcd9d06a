//! JSON wire formats shared by the CLI, the benchmark harness and external
//! data producers.
//!
//! Matrices serialize as row-major nested arrays:
//!
//! - Pose: `{"R": [[r00,r01,r02],[r10,r11,r12],[r20,r21,r22]], "t": [x,y,z]}`
//! - Homography: `{"H": [[..3×3..]], "norm": "h33" | "det1"}`
//! - Landmark sets: `{"labels": ["G","L"], "landmarks": [{"p": [x,y,z], "c": "G"}, ...]}`
//! - Matches: `{"matches": [{"p": [u,v], "q": [u,v]}, ...]}`
//!
//! Deserialized rotations are validated (orthonormality within 1e-6) and
//! snapped back onto SO(3), so hand-edited or low-precision inputs stay
//! usable without breaking downstream invariants.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{Homography, NormalizationMode, Pose, Rotation};
use crate::solvers::{Landmark, LandmarkMap, Match2D};

#[derive(Debug, Error)]
pub enum JsonIoError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid data: {0}")]
    Invalid(String),
}

fn rows_of(m: &Matrix3<f64>) -> [[f64; 3]; 3] {
    [
        [m[(0, 0)], m[(0, 1)], m[(0, 2)]],
        [m[(1, 0)], m[(1, 1)], m[(1, 2)]],
        [m[(2, 0)], m[(2, 1)], m[(2, 2)]],
    ]
}

fn matrix_of(rows: &[[f64; 3]; 3]) -> Matrix3<f64> {
    Matrix3::new(
        rows[0][0], rows[0][1], rows[0][2], //
        rows[1][0], rows[1][1], rows[1][2], //
        rows[2][0], rows[2][1], rows[2][2],
    )
}

/// Pose wire format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PoseJson {
    #[serde(rename = "R")]
    pub r: [[f64; 3]; 3],
    pub t: [f64; 3],
}

impl From<&Pose> for PoseJson {
    fn from(p: &Pose) -> Self {
        PoseJson {
            r: rows_of(p.rotation.matrix()),
            t: [p.translation.x, p.translation.y, p.translation.z],
        }
    }
}

impl PoseJson {
    /// Validate within 1e-6 and snap onto SO(3) exactly.
    pub fn to_pose(&self) -> Result<Pose, JsonIoError> {
        let m = matrix_of(&self.r);
        Rotation::try_new(m, 1e-6)
            .and_then(|_| Rotation::project(&m))
            .map(|r| Pose::new(r, Vector3::new(self.t[0], self.t[1], self.t[2])))
            .map_err(|e| JsonIoError::Invalid(e.to_string()))
    }
}

/// Homography wire format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HomographyJson {
    #[serde(rename = "H")]
    pub h: [[f64; 3]; 3],
    pub norm: NormalizationMode,
}

impl From<&Homography> for HomographyJson {
    fn from(h: &Homography) -> Self {
        HomographyJson {
            h: rows_of(h.matrix()),
            norm: h.mode(),
        }
    }
}

impl HomographyJson {
    pub fn to_homography(&self) -> Result<Homography, JsonIoError> {
        Homography::new(matrix_of(&self.h), self.norm)
            .map_err(|e| JsonIoError::Invalid(e.to_string()))
    }
}

/// Match-list wire format; also the ingestion format for externally
/// produced correspondences.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatchesJson {
    pub matches: Vec<Match2D>,
}

/// Landmark-set wire format (map in the global frame, observations in the
/// robot frame — same shape).
pub type LandmarkSetJson = LandmarkMap;

pub fn read_matches<P: AsRef<std::path::Path>>(path: P) -> Result<Vec<Match2D>, JsonIoError> {
    let text = std::fs::read_to_string(path)?;
    let parsed: MatchesJson = serde_json::from_str(&text)?;
    for m in &parsed.matches {
        if !(m.p.x.is_finite() && m.p.y.is_finite() && m.q.x.is_finite() && m.q.y.is_finite()) {
            return Err(JsonIoError::Invalid("non-finite match coordinates".into()));
        }
    }
    Ok(parsed.matches)
}

pub fn read_landmark_set<P: AsRef<std::path::Path>>(
    path: P,
) -> Result<LandmarkMap, JsonIoError> {
    let text = std::fs::read_to_string(path)?;
    let parsed: LandmarkMap = serde_json::from_str(&text)?;
    for l in &parsed.landmarks {
        if !l.position.iter().all(|v| v.is_finite()) {
            return Err(JsonIoError::Invalid("non-finite landmark position".into()));
        }
        if !parsed.labels.contains(&l.class_label) {
            return Err(JsonIoError::Invalid(format!(
                "label `{}` not in the declared alphabet",
                l.class_label
            )));
        }
    }
    Ok(parsed)
}

pub fn write_json<T: Serialize, P: AsRef<std::path::Path>>(
    value: &T,
    path: P,
) -> Result<(), JsonIoError> {
    let text = serde_json::to_string_pretty(value)?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

/// Observation of a Landmark list convenience: split a landmark set into
/// plain landmarks.
pub fn landmarks_of(set: &LandmarkMap) -> &[Landmark] {
    &set.landmarks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::so3;

    #[test]
    fn pose_json_shape_and_roundtrip() {
        let pose = Pose::new(
            so3::exp(&Vector3::new(0.2, -0.5, 1.0)),
            Vector3::new(1.0, 2.0, 3.0),
        );
        let json = serde_json::to_value(PoseJson::from(&pose)).unwrap();
        assert!(json.get("R").unwrap().as_array().unwrap().len() == 3);
        assert_eq!(
            json.get("t").unwrap().as_array().unwrap()[1]
                .as_f64()
                .unwrap(),
            2.0
        );
        let back: PoseJson = serde_json::from_value(json).unwrap();
        let recovered = back.to_pose().unwrap();
        assert!(crate::metrics::lie_log_distance(&pose, &recovered, 1.0) < 1e-12);
    }

    #[test]
    fn sloppy_rotation_is_snapped_not_rejected() {
        let pose = Pose::new(so3::exp(&Vector3::new(0.1, 0.2, 0.3)), Vector3::zeros());
        let mut json = PoseJson::from(&pose);
        json.r[0][0] += 3e-7;
        let recovered = json.to_pose().unwrap();
        let r = recovered.rotation.matrix();
        assert!((r * r.transpose() - Matrix3::identity()).norm() < 1e-12);
    }

    #[test]
    fn truly_broken_rotation_is_rejected() {
        let json = PoseJson {
            r: [[1.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 1.0]],
            t: [0.0; 3],
        };
        assert!(json.to_pose().is_err());
    }

    #[test]
    fn homography_json_norm_tags() {
        let h = Homography::new(
            Matrix3::new(2.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0),
            NormalizationMode::UnitDeterminant,
        )
        .unwrap();
        let json = serde_json::to_value(HomographyJson::from(&h)).unwrap();
        assert_eq!(json.get("norm").unwrap().as_str().unwrap(), "det1");
        let back: HomographyJson = serde_json::from_value(json).unwrap();
        let recovered = back.to_homography().unwrap();
        assert!((recovered.matrix() - h.matrix()).norm() < 1e-12);
    }

    #[test]
    fn matches_json_shape() {
        let text = r#"{"matches": [{"p": [1.0, 2.0], "q": [3.0, 4.0]}]}"#;
        let parsed: MatchesJson = serde_json::from_str(text).unwrap();
        assert_eq!(parsed.matches[0].q.y, 4.0);
    }

    #[test]
    fn landmark_set_rejects_undeclared_labels() {
        let dir = std::env::temp_dir().join("clap_core_jsonio_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad_map.json");
        std::fs::write(
            &path,
            r#"{"labels": ["G"], "landmarks": [{"p": [0,0,0], "c": "L"}]}"#,
        )
        .unwrap();
        assert!(read_landmark_set(&path).is_err());
    }
}
