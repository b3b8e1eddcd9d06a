//! Direct Linear Transform homography estimation and seeded candidate
//! sampling.

use nalgebra::{DMatrix, Matrix3, Vector2};
use rand::seq::index::sample as sample_indices;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geom::{Homography, NormalizationMode};

use super::{Match2D, SolverError};

/// A candidate homography with the four match indices that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct HomographyCandidate {
    pub homography: Homography,
    pub source_indices: [usize; 4],
}

/// Hartley normalization: translate the centroid to the origin and scale the
/// mean distance to √2. Returns the similarity transform and mapped points.
fn hartley_normalize(pts: &[Vector2<f64>]) -> Option<(Matrix3<f64>, Vec<Vector2<f64>>)> {
    let n = pts.len() as f64;
    let cx = pts.iter().map(|p| p.x).sum::<f64>() / n;
    let cy = pts.iter().map(|p| p.y).sum::<f64>() / n;
    let mean_dist = pts
        .iter()
        .map(|p| ((p.x - cx).powi(2) + (p.y - cy).powi(2)).sqrt())
        .sum::<f64>()
        / n;
    if mean_dist < 1e-12 {
        return None;
    }
    let s = std::f64::consts::SQRT_2 / mean_dist;
    let t = Matrix3::new(s, 0.0, -s * cx, 0.0, s, -s * cy, 0.0, 0.0, 1.0);
    let mapped = pts
        .iter()
        .map(|p| Vector2::new(s * (p.x - cx), s * (p.y - cy)))
        .collect();
    Some((t, mapped))
}

/// Normalized DLT: the homography mapping `p → q` from ≥4 correspondences.
///
/// Both point sets are Hartley-normalized, the 2-rows-per-match 9-column
/// system is solved by SVD null vector, and the result is de-normalized and
/// returned in unit-lower-right form. Errors when the solution is not
/// unique — the second-smallest singular value of the design matrix below
/// 1e-9 relative to the largest (e.g. three collinear source points).
pub fn dlt_homography(matches: &[Match2D]) -> Result<Homography, SolverError> {
    if matches.len() < 4 {
        return Err(SolverError::TooFewObservations {
            needed: 4,
            got: matches.len(),
        });
    }
    let src: Vec<_> = matches.iter().map(|m| m.p).collect();
    let dst: Vec<_> = matches.iter().map(|m| m.q).collect();
    let (t_src, src_n) = hartley_normalize(&src).ok_or(
        SolverError::DegenerateConfiguration("coincident source points"),
    )?;
    let (t_dst, dst_n) = hartley_normalize(&dst).ok_or(
        SolverError::DegenerateConfiguration("coincident destination points"),
    )?;

    // Design matrix, padded with zero rows to at least 9×9 so the full set
    // of right singular vectors (including the null one) is available.
    let rows = (2 * matches.len()).max(9);
    let mut a = DMatrix::<f64>::zeros(rows, 9);
    for (i, (s, d)) in src_n.iter().zip(&dst_n).enumerate() {
        let (x, y) = (s.x, s.y);
        let (u, v) = (d.x, d.y);
        let r0 = 2 * i;
        let r1 = 2 * i + 1;
        a[(r0, 0)] = -x;
        a[(r0, 1)] = -y;
        a[(r0, 2)] = -1.0;
        a[(r0, 6)] = u * x;
        a[(r0, 7)] = u * y;
        a[(r0, 8)] = u;
        a[(r1, 3)] = -x;
        a[(r1, 4)] = -y;
        a[(r1, 5)] = -1.0;
        a[(r1, 6)] = v * x;
        a[(r1, 7)] = v * y;
        a[(r1, 8)] = v;
    }

    let svd = a.svd(true, true);
    let sv = &svd.singular_values;
    // Singular values are sorted descending; sv[7] is the second smallest of
    // the 9. A vanishing sv[7] means a ≥2-dimensional null space.
    if sv[7] < 1e-9 * sv[0] {
        return Err(SolverError::DegenerateConfiguration(
            "homography not unique (rank-deficient design matrix)",
        ));
    }
    let v_t = svd
        .v_t
        .ok_or(SolverError::DegenerateConfiguration("SVD failed"))?;
    let h_vec = v_t.row(8);
    let h_norm = Matrix3::from_row_slice(h_vec.transpose().as_slice());

    let t_dst_inv = t_dst
        .try_inverse()
        .ok_or(SolverError::DegenerateConfiguration("normalization singular"))?;
    let h = t_dst_inv * h_norm * t_src;
    Homography::new(h, NormalizationMode::UnitLowerRight)
        .map_err(|_| SolverError::DegenerateConfiguration("denormalized homography singular"))
}

/// Draw up to `n` candidate homographies from seeded 4-subsets of `matches`.
///
/// Degenerate draws are discarded and redrawn, up to 20·n attempts in total.
/// Fails with [`SolverError::InsufficientValidCandidates`] when fewer than
/// max(10, n/10) candidates survive. Identical inputs and seed give an
/// identical candidate list.
pub fn sample_homography_candidates(
    matches: &[Match2D],
    n: usize,
    seed: u64,
) -> Result<Vec<HomographyCandidate>, SolverError> {
    if matches.len() < 4 {
        return Err(SolverError::TooFewObservations {
            needed: 4,
            got: matches.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    let mut attempts = 0usize;
    while out.len() < n && attempts < 20 * n {
        attempts += 1;
        let idx = sample_indices(&mut rng, matches.len(), 4).into_vec();
        let subset: Vec<Match2D> = idx.iter().map(|&i| matches[i]).collect();
        if let Ok(h) = dlt_homography(&subset) {
            out.push(HomographyCandidate {
                homography: h,
                source_indices: [idx[0], idx[1], idx[2], idx[3]],
            });
        }
    }
    let minimum = 10.max(n / 10);
    if out.len() < minimum {
        return Err(SolverError::InsufficientValidCandidates {
            requested: n,
            got: out.len(),
            minimum,
        });
    }
    Ok(out)
}
