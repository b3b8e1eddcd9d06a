//! Exponential and logarithm maps on SO(3).

use nalgebra::{Matrix3, Vector3};

use super::{Rotation, SMALL_ANGLE};

/// Trace threshold for the near-π logarithm branch: the sinc-based formula
/// is singular at θ = π, so angles with trace(R) < −1 + 1e-6 go through the
/// symmetric-part eigenvector extraction instead.
const PI_BRANCH_TRACE: f64 = -1.0 + 1e-6;

/// Skew-symmetric (hat) matrix of `v`: hat(v)·w = v × w.
pub fn hat(v: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(
        0.0, -v.z, v.y, //
        v.z, 0.0, -v.x, //
        -v.y, v.x, 0.0,
    )
}

/// Inverse of [`hat`] on the antisymmetric part: vee(A) for A = hat(v).
pub fn vee(m: &Matrix3<f64>) -> Vector3<f64> {
    Vector3::new(m[(2, 1)], m[(0, 2)], m[(1, 0)])
}

/// Rodrigues exponential: axis-angle vector to rotation. Total on all finite
/// inputs; the zero vector maps to the identity.
pub fn exp(omega: &Vector3<f64>) -> Rotation {
    let theta2 = omega.norm_squared();
    let theta = theta2.sqrt();
    // R = I + A·hat(ω) + B·hat(ω)², A = sin θ/θ, B = (1−cos θ)/θ².
    let (a, b) = if theta < SMALL_ANGLE {
        (
            1.0 - theta2 / 6.0 + theta2 * theta2 / 120.0,
            0.5 - theta2 / 24.0 + theta2 * theta2 / 720.0,
        )
    } else {
        (theta.sin() / theta, (1.0 - theta.cos()) / theta2)
    };
    let k = hat(omega);
    Rotation::from_matrix_unchecked(Matrix3::identity() + k * a + k * k * b)
}

/// Principal logarithm: rotation to axis-angle with ‖result‖ ∈ [0, π].
///
/// Generic angles use the antisymmetric-part formula; near θ = π the axis is
/// recovered from the symmetric part (the rank-one nnᵀ factor), with the
/// sign fixed by the largest antisymmetric component when one remains. At
/// exactly π both signs are valid and either may be returned.
pub fn log(r: &Rotation) -> Vector3<f64> {
    let m = r.matrix();
    let tr = m.trace();
    let cos_theta = ((tr - 1.0) * 0.5).clamp(-1.0, 1.0);
    let theta = cos_theta.acos();

    if tr < PI_BRANCH_TRACE {
        // Near π: R + Rᵀ = 2cosθ·I + 2(1−cosθ)·nnᵀ.
        let s = (m + m.transpose()) * 0.5;
        let denom = 1.0 - cos_theta;
        let b = (s - Matrix3::identity() * cos_theta) / denom; // ≈ nnᵀ
        let diag = Vector3::new(b[(0, 0)], b[(1, 1)], b[(2, 2)]);
        let k = diag.imax();
        let mut n = Vector3::zeros();
        n[k] = diag[k].max(0.0).sqrt();
        for i in 0..3 {
            if i != k {
                n[i] = b[(i, k)] / n[k];
            }
        }
        n.normalize_mut();
        // Overall sign from the antisymmetric part, 2sinθ·n, if any survives.
        let a = vee(&(m - m.transpose()));
        let j = a.iamax();
        if a[j].abs() > 1e-12 && a[j] * n[j] < 0.0 {
            n = -n;
        }
        return n * theta;
    }

    let a = vee(&(m - m.transpose())); // = 2 sinθ · n
    let factor = if theta < SMALL_ANGLE {
        // θ/(2 sin θ) = 1/2 + θ²/12 + 7θ⁴/720 + …
        let t2 = theta * theta;
        0.5 + t2 / 12.0 + 7.0 * t2 * t2 / 720.0
    } else {
        theta / (2.0 * theta.sin())
    };
    a * factor
}
