//! Exponential and logarithm maps on SE(3).
//!
//! Convention: a twist (ρ, φ) maps to the pose with rotation exp(φ) and
//! translation V(φ)·ρ, where V is the left Jacobian of SO(3). The logarithm
//! inverts both parts; pairwise distances built on it are insensitive to the
//! left/right pairing choice.

use nalgebra::{Matrix3, Vector3};

use super::{so3, Pose, Twist, SMALL_ANGLE};

/// Left Jacobian V(φ) = I + B·hat(φ) + C·hat(φ)², with B = (1−cos θ)/θ²
/// and C = (θ−sin θ)/θ³.
fn left_jacobian(phi: &Vector3<f64>) -> Matrix3<f64> {
    let theta2 = phi.norm_squared();
    let theta = theta2.sqrt();
    let (b, c) = if theta < SMALL_ANGLE {
        (
            0.5 - theta2 / 24.0 + theta2 * theta2 / 720.0,
            1.0 / 6.0 - theta2 / 120.0 + theta2 * theta2 / 5040.0,
        )
    } else {
        (
            (1.0 - theta.cos()) / theta2,
            (theta - theta.sin()) / (theta2 * theta),
        )
    };
    let k = so3::hat(phi);
    Matrix3::identity() + k * b + k * k * c
}

/// Inverse left Jacobian V(φ)⁻¹ = I − ½·hat(φ) + c·hat(φ)², with
/// c = (1 − A/(2B))/θ².
fn left_jacobian_inv(phi: &Vector3<f64>) -> Matrix3<f64> {
    let theta2 = phi.norm_squared();
    let theta = theta2.sqrt();
    let c = if theta < SMALL_ANGLE {
        1.0 / 12.0 + theta2 / 720.0 + theta2 * theta2 / 30240.0
    } else {
        let a = theta.sin() / theta;
        let b = (1.0 - theta.cos()) / theta2;
        (1.0 - a / (2.0 * b)) / theta2
    };
    let k = so3::hat(phi);
    Matrix3::identity() - k * 0.5 + k * k * c
}

/// Exponential map: twist to pose.
pub fn exp(xi: &Twist) -> Pose {
    Pose {
        rotation: so3::exp(&xi.phi),
        translation: left_jacobian(&xi.phi) * xi.rho,
    }
}

/// Principal logarithm: pose to twist. Unique whenever the rotation angle is
/// below π; at the π boundary it inherits the axis-sign convention of
/// [`so3::log`].
pub fn log(t: &Pose) -> Twist {
    let phi = so3::log(&t.rotation);
    Twist {
        rho: left_jacobian_inv(&phi) * t.translation,
        phi,
    }
}
