//! Lie-group types for rigid and projective transforms.
//!
//! - [`Rotation`]: 3×3 orthonormal matrix with det +1 (SO(3)).
//! - [`Pose`]: rotation + translation (SE(3)).
//! - [`Twist`]: tangent coordinates (ρ, φ) of SE(3).
//! - [`Homography`]: normalized invertible 3×3 matrix (projective group).
//!
//! Exponential and logarithm maps live in the [`so3`], [`se3`] and [`gl3`]
//! submodules. Everything is double precision; matrices serialize as
//! row-major nested arrays.

use nalgebra::{Matrix3, Matrix4, Vector3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub mod gl3;
pub mod se3;
pub mod so3;

/// Angle below which trig coefficients switch to their Taylor expansions.
///
/// The exact formulas contain (1−cos θ)/θ² style quotients that lose all
/// precision (and can hit 0/0) once 1−cos θ underflows; at 1e-2 the
/// second-order expansions are accurate to ~1e-13 relative.
pub(crate) const SMALL_ANGLE: f64 = 1e-2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    /// Matrix is outside the principal-logarithm domain: an eigenvalue on
    /// the closed negative real axis, or effectively singular. Callers fall
    /// back to the Frobenius distance.
    #[error("matrix logarithm undefined: {0}")]
    LogDomain(&'static str),
    /// Homography precondition violated (singular, or H33 ~ 0 in
    /// unit-lower-right mode).
    #[error("degenerate homography: {0}")]
    DegenerateHomography(&'static str),
    /// Matrix fails the rotation invariants beyond repair.
    #[error("not a rotation matrix: {0}")]
    NotARotation(&'static str),
}

// ── Rotation ─────────────────────────────────────────────────────────────

/// Element of SO(3): orthonormal 3×3 matrix with determinant +1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation(Matrix3<f64>);

impl Rotation {
    pub fn identity() -> Self {
        Rotation(Matrix3::identity())
    }

    /// Wrap a matrix that is orthonormal by construction (e.g. from
    /// [`so3::exp`] or an SVD projection). Invariants are the caller's
    /// responsibility; use [`Rotation::try_new`] for unchecked input.
    pub fn from_matrix_unchecked(m: Matrix3<f64>) -> Self {
        Rotation(m)
    }

    /// Validate the SO(3) invariants (R·Rᵀ = I and det R = +1, both within
    /// `tol`) and wrap.
    pub fn try_new(m: Matrix3<f64>, tol: f64) -> Result<Self, GeomError> {
        let ortho = (m * m.transpose() - Matrix3::identity()).norm();
        if ortho > tol {
            return Err(GeomError::NotARotation("R·Rᵀ deviates from identity"));
        }
        if (m.determinant() - 1.0).abs() > tol {
            return Err(GeomError::NotARotation("determinant is not +1"));
        }
        Ok(Rotation(m))
    }

    /// Nearest rotation to an arbitrary matrix in the Frobenius sense:
    /// SVD projection with determinant correction.
    pub fn project(m: &Matrix3<f64>) -> Result<Self, GeomError> {
        let svd = m.svd(true, true);
        let (u, v_t) = match (svd.u, svd.v_t) {
            (Some(u), Some(v_t)) => (u, v_t),
            _ => return Err(GeomError::NotARotation("SVD failed")),
        };
        let mut d = Matrix3::identity();
        if (u * v_t).determinant() < 0.0 {
            d[(2, 2)] = -1.0;
        }
        Ok(Rotation(u * d * v_t))
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    /// Inverse rotation (the transpose).
    pub fn inverse(&self) -> Self {
        Rotation(self.0.transpose())
    }

    pub fn apply(&self, p: &Vector3<f64>) -> Vector3<f64> {
        self.0 * p
    }

    /// Principal rotation angle in [0, π].
    pub fn angle(&self) -> f64 {
        so3::log(self).norm()
    }
}

impl std::ops::Mul for Rotation {
    type Output = Rotation;
    fn mul(self, rhs: Rotation) -> Rotation {
        Rotation(self.0 * rhs.0)
    }
}

// ── Pose ─────────────────────────────────────────────────────────────────

/// Rigid transform in SE(3): `p ↦ R·p + t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    pub rotation: Rotation,
    pub translation: Vector3<f64>,
}

impl Pose {
    pub fn identity() -> Self {
        Pose {
            rotation: Rotation::identity(),
            translation: Vector3::zeros(),
        }
    }

    pub fn new(rotation: Rotation, translation: Vector3<f64>) -> Self {
        Pose {
            rotation,
            translation,
        }
    }

    /// Group composition: `(self ∘ rhs)(p) = self(rhs(p))`.
    pub fn compose(&self, rhs: &Pose) -> Pose {
        Pose {
            rotation: self.rotation * rhs.rotation,
            translation: self.rotation.apply(&rhs.translation) + self.translation,
        }
    }

    pub fn inverse(&self) -> Pose {
        let rinv = self.rotation.inverse();
        Pose {
            rotation: rinv,
            translation: -rinv.apply(&self.translation),
        }
    }

    pub fn apply(&self, p: &Vector3<f64>) -> Vector3<f64> {
        self.rotation.apply(p) + self.translation
    }

    /// 4×4 homogeneous matrix form.
    pub fn matrix4(&self) -> Matrix4<f64> {
        let mut m = Matrix4::identity();
        m.fixed_view_mut::<3, 3>(0, 0).copy_from(self.rotation.matrix());
        m.fixed_view_mut::<3, 1>(0, 3).copy_from(&self.translation);
        m
    }
}

impl std::ops::Mul for Pose {
    type Output = Pose;
    fn mul(self, rhs: Pose) -> Pose {
        self.compose(&rhs)
    }
}

// ── Twist ────────────────────────────────────────────────────────────────

/// Tangent element of SE(3): translational part `rho` (scene units) and
/// rotational part `phi` (axis-angle, radians).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Twist {
    pub rho: Vector3<f64>,
    pub phi: Vector3<f64>,
}

impl Twist {
    pub fn zero() -> Self {
        Twist {
            rho: Vector3::zeros(),
            phi: Vector3::zeros(),
        }
    }

    pub fn new(rho: Vector3<f64>, phi: Vector3<f64>) -> Self {
        Twist { rho, phi }
    }

    /// Euclidean norm of the stacked 6-vector.
    pub fn norm(&self) -> f64 {
        (self.rho.norm_squared() + self.phi.norm_squared()).sqrt()
    }

    pub fn scaled(&self, s: f64) -> Twist {
        Twist {
            rho: self.rho * s,
            phi: self.phi * s,
        }
    }
}

impl std::ops::Add for Twist {
    type Output = Twist;
    fn add(self, rhs: Twist) -> Twist {
        Twist {
            rho: self.rho + rhs.rho,
            phi: self.phi + rhs.phi,
        }
    }
}

// ── Homography ───────────────────────────────────────────────────────────

/// How a homography's projective scale is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormalizationMode {
    /// Lower-right entry pinned to exactly 1 (the convention used when
    /// comparing against ground truth).
    #[serde(rename = "h33")]
    UnitLowerRight,
    /// Determinant pinned to 1 (SL(3)); better conditioned for the matrix
    /// logarithm, used for pairwise clustering distances.
    #[serde(rename = "det1")]
    UnitDeterminant,
}

/// Invertible 3×3 projective transform, stored in normalized form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Homography {
    m: Matrix3<f64>,
    mode: NormalizationMode,
}

impl Homography {
    /// Normalize `m` under `mode` and wrap. This is the only constructor;
    /// a `Homography` value is always in normalized form.
    ///
    /// Unit-lower-right divides by H₃₃. Unit-determinant flips the sign
    /// first when det < 0 (projective equivalence H ~ −H), then divides by
    /// the real cube root of the determinant.
    pub fn new(m: Matrix3<f64>, mode: NormalizationMode) -> Result<Self, GeomError> {
        let det = m.determinant();
        if det.abs() < 1e-12 {
            return Err(GeomError::DegenerateHomography("determinant below 1e-12"));
        }
        let normalized = match mode {
            NormalizationMode::UnitLowerRight => {
                let h33 = m[(2, 2)];
                if h33.abs() < 1e-9 {
                    return Err(GeomError::DegenerateHomography("H33 below 1e-9"));
                }
                m / h33
            }
            NormalizationMode::UnitDeterminant => {
                // Pre-scaling by the largest magnitude keeps the determinant
                // well conditioned before the cube root.
                let peak = m.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
                let m = m / peak;
                let m = if m.determinant() < 0.0 { -m } else { m };
                m / m.determinant().cbrt()
            }
        };
        if normalized.determinant().abs() < 1e-12 {
            return Err(GeomError::DegenerateHomography(
                "determinant below 1e-12 after normalization",
            ));
        }
        Ok(Homography { m: normalized, mode })
    }

    pub fn identity(mode: NormalizationMode) -> Self {
        Homography {
            m: Matrix3::identity(),
            mode,
        }
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.m
    }

    pub fn mode(&self) -> NormalizationMode {
        self.mode
    }

    /// The same projective transform re-normalized under another mode.
    pub fn renormalized(&self, mode: NormalizationMode) -> Result<Self, GeomError> {
        Homography::new(self.m, mode)
    }

    pub fn inverse(&self) -> Result<Self, GeomError> {
        let inv = self
            .m
            .try_inverse()
            .ok_or(GeomError::DegenerateHomography("not invertible"))?;
        Homography::new(inv, self.mode)
    }

    /// Apply to a 2D point via homogeneous coordinates. Returns `None` when
    /// the point maps to the line at infinity (|w| < 1e-12).
    pub fn apply(&self, p: &nalgebra::Vector2<f64>) -> Option<nalgebra::Vector2<f64>> {
        let q = self.m * Vector3::new(p.x, p.y, 1.0);
        if q.z.abs() < 1e-12 {
            return None;
        }
        Some(nalgebra::Vector2::new(q.x / q.z, q.y / q.z))
    }
}

/// Normalize a raw 3×3 matrix as a homography under `mode`.
///
/// Free-function form of [`Homography::new`].
pub fn normalize_homography(
    m: Matrix3<f64>,
    mode: NormalizationMode,
) -> Result<Homography, GeomError> {
    Homography::new(m, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn sample_pose() -> Pose {
        let r = so3::exp(&Vector3::new(0.4, -0.2, 0.9));
        Pose::new(r, Vector3::new(1.0, -2.0, 0.5))
    }

    #[test]
    fn compose_with_identity_is_identity_op() {
        let t = sample_pose();
        let c = t.compose(&Pose::identity());
        assert_relative_eq!(c.matrix4(), t.matrix4(), epsilon = 1e-15);
    }

    #[test]
    fn inverse_is_involution() {
        let t = sample_pose();
        let back = t.inverse().inverse();
        assert_relative_eq!(back.matrix4(), t.matrix4(), epsilon = 1e-10);
    }

    #[test]
    fn inverse_composes_to_identity() {
        let t = sample_pose();
        let id = t.inverse().compose(&t);
        assert_relative_eq!(id.matrix4(), Matrix4::identity(), epsilon = 1e-9);
    }

    #[test]
    fn compose_matches_homogeneous_matrix_oracle() {
        // Dense 4×4 arithmetic as the independent route.
        let t1 = sample_pose();
        let t2 = Pose::new(
            so3::exp(&Vector3::new(-0.1, 0.7, 0.2)),
            Vector3::new(0.3, 0.3, -1.1),
        );
        let lhs = t1.inverse().compose(&t2).matrix4();
        let rhs = t1.matrix4().try_inverse().unwrap() * t2.matrix4();
        assert_relative_eq!(lhs, rhs, epsilon = 1e-10);
    }

    #[test]
    fn rotation_validation_rejects_reflections() {
        let mut m = Matrix3::identity();
        m[(0, 0)] = -1.0;
        assert!(Rotation::try_new(m, 1e-9).is_err());
    }

    #[test]
    fn normalize_unit_lower_right_removes_scale() {
        let h = Homography::new(Matrix3::identity() * 2.0, NormalizationMode::UnitLowerRight)
            .unwrap();
        assert_relative_eq!(*h.matrix(), Matrix3::identity(), epsilon = 1e-15);
    }

    #[test]
    fn normalize_unit_determinant_flips_sign() {
        let h =
            Homography::new(-Matrix3::identity(), NormalizationMode::UnitDeterminant).unwrap();
        assert_relative_eq!(*h.matrix(), Matrix3::identity(), epsilon = 1e-15);
    }

    #[test]
    fn normalize_rejects_singular() {
        let mut m = Matrix3::identity();
        m[(2, 2)] = 0.0;
        m[(1, 1)] = 0.0;
        assert!(Homography::new(m, NormalizationMode::UnitDeterminant).is_err());
    }

    #[test]
    fn normalize_rejects_zero_h33_in_lower_right_mode() {
        let m = Matrix3::new(1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0);
        assert!(Homography::new(m, NormalizationMode::UnitLowerRight).is_err());
    }

    proptest! {
        // Projective equivalence: normalization is invariant to pre-scaling.
        #[test]
        fn normalization_is_scale_invariant(
            entries in proptest::array::uniform9(-3.0..3.0f64),
            s in prop_oneof![-7.5..-0.1f64, 0.1..7.5f64],
        ) {
            let m = Matrix3::from_row_slice(&entries);
            // Generic (well-conditioned) homographies; the 1e-12 bound has
            // no headroom for determinant cancellation near singularity.
            prop_assume!(m.determinant().abs() > 1e-1);
            prop_assume!(m[(2, 2)].abs() > 1e-3);
            for mode in [NormalizationMode::UnitLowerRight, NormalizationMode::UnitDeterminant] {
                let a = Homography::new(m, mode).unwrap();
                let b = Homography::new(m * s, mode).unwrap();
                prop_assert!((a.matrix() - b.matrix()).norm() < 1e-12);
            }
        }
    }
}
