//! Principal matrix exponential and logarithm for 3×3 real matrices.
//!
//! `exp` is scaling-and-squaring over the Taylor series. `log` is inverse
//! scaling-and-squaring: repeated principal square roots (scaled
//! Denman–Beavers iteration) bring the matrix near the identity, a Gregory
//! series evaluates log there, and the result is doubled back. Everything
//! stays in real arithmetic; no Schur or eigendecomposition is required.
//!
//! The principal logarithm exists iff no eigenvalue lies on the closed
//! negative real axis. That is checked up front through the characteristic
//! cubic, so out-of-domain inputs surface as [`GeomError::LogDomain`]
//! instead of a non-converging iteration.

use nalgebra::Matrix3;

use super::GeomError;

/// Matrix exponential by scaling and squaring.
pub fn exp(a: &Matrix3<f64>) -> Matrix3<f64> {
    let norm = a.norm();
    let squarings = if norm > 0.5 {
        ((norm / 0.5).log2().ceil() as i32).max(0)
    } else {
        0
    };
    let scaled = a / 2f64.powi(squarings);

    let mut term = Matrix3::identity();
    let mut acc = Matrix3::identity();
    for k in 1..=24 {
        term = term * scaled / k as f64;
        acc += term;
        if term.norm() <= 1e-18 * acc.norm() {
            break;
        }
    }
    let mut result = acc;
    for _ in 0..squarings {
        result *= result;
    }
    result
}

/// Principal matrix logarithm by inverse scaling and squaring.
///
/// Errors with [`GeomError::LogDomain`] when |det| < 1e-12, when an
/// eigenvalue sits on (or numerically indistinguishably near) the negative
/// real axis, or when the square-root iteration fails to contract.
pub fn log(m: &Matrix3<f64>) -> Result<Matrix3<f64>, GeomError> {
    if m.determinant().abs() < 1e-12 {
        return Err(GeomError::LogDomain("determinant below 1e-12"));
    }
    check_spectrum(m)?;

    let mut current = *m;
    let mut halvings = 0u32;
    while (current - Matrix3::identity()).norm() > 0.25 {
        if halvings >= 40 {
            return Err(GeomError::LogDomain("square-root scaling did not contract"));
        }
        current = sqrtm(&current)?;
        halvings += 1;
    }

    // Gregory series: log M = 2·Σ Z^(2k+1)/(2k+1), Z = (M−I)(M+I)⁻¹.
    let eye = Matrix3::identity();
    let denom = (current + eye)
        .try_inverse()
        .ok_or(GeomError::LogDomain("M + I singular near identity"))?;
    let z = (current - eye) * denom;
    let z2 = z * z;
    let mut power = z;
    let mut acc = z;
    let mut k = 3u32;
    while k <= 41 {
        power *= z2;
        let term = power / k as f64;
        acc += term;
        if term.norm() <= 1e-18 * acc.norm().max(1e-300) {
            break;
        }
        k += 2;
    }
    Ok(acc * 2f64.powi(halvings as i32 + 1))
}

/// Principal square root via the scaled Denman–Beavers iteration.
fn sqrtm(m: &Matrix3<f64>) -> Result<Matrix3<f64>, GeomError> {
    let mut y = *m;
    let mut z: Matrix3<f64> = Matrix3::identity();
    for _ in 0..60 {
        // Determinantal scaling accelerates the pre-contraction phase.
        let dets: f64 = (y.determinant() * z.determinant()).abs();
        if dets > 0.0 {
            let gamma = dets.powf(-1.0 / 6.0);
            if gamma.is_finite() && gamma > 0.0 {
                y *= gamma;
                z *= gamma;
            }
        }
        let y_inv = y
            .try_inverse()
            .ok_or(GeomError::LogDomain("singular iterate in square root"))?;
        let z_inv = z
            .try_inverse()
            .ok_or(GeomError::LogDomain("singular iterate in square root"))?;
        let y_next = (y + z_inv) * 0.5;
        let z_next = (z + y_inv) * 0.5;
        let delta = (y_next - y).norm();
        y = y_next;
        z = z_next;
        if delta <= 1e-15 * y.norm() {
            break;
        }
    }
    if (y * y - m).norm() > 1e-9 * m.norm().max(1.0) {
        return Err(GeomError::LogDomain("square-root iteration did not converge"));
    }
    Ok(y)
}

/// Reject matrices whose spectrum touches the closed negative real axis.
///
/// Solves the characteristic cubic in closed form. Real eigenvalues must be
/// strictly positive; a complex pair whose imaginary part is negligible
/// relative to the matrix scale while its real part is negative counts as on
/// the axis (the principal log is unbounded there).
fn check_spectrum(m: &Matrix3<f64>) -> Result<(), GeomError> {
    let scale = m.norm().max(1.0);
    let tr = m.trace();
    let tr2 = (m * m).trace();
    let det = m.determinant();
    // λ³ + b λ² + c λ + d with b = −tr, c = (tr² − tr(M²))/2, d = −det.
    let b = -tr;
    let c = 0.5 * (tr * tr - tr2);
    let d = -det;

    // Depressed cubic y³ + p y + q, λ = y − b/3.
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let shift = -b / 3.0;
    let disc = 0.25 * q * q + p * p * p / 27.0;

    let positive = |lambda: f64| lambda > 1e-12 * scale;

    if disc >= 0.0 {
        // One real root and a conjugate pair (coincident at disc = 0).
        let sq = disc.sqrt();
        let u = (-0.5 * q + sq).cbrt();
        let v = (-0.5 * q - sq).cbrt();
        let real_root = u + v + shift;
        if !positive(real_root) {
            return Err(GeomError::LogDomain("real eigenvalue on negative axis"));
        }
        let pair_re = -0.5 * (u + v) + shift;
        let pair_im = 0.5 * 3f64.sqrt() * (u - v);
        if pair_im.abs() < 1e-9 * scale && !positive(pair_re) {
            return Err(GeomError::LogDomain(
                "complex pair collapses onto negative axis",
            ));
        }
    } else {
        // disc < 0 implies p < 0 strictly: three distinct real roots.
        let r = (-p / 3.0).sqrt();
        let arg = (3.0 * q / (2.0 * p * r)).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        for k in 0..3 {
            let y = 2.0 * r * (phi - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos();
            if !positive(y + shift) {
                return Err(GeomError::LogDomain("real eigenvalue on negative axis"));
            }
        }
    }
    Ok(())
}
