//! Compositing of warped layers: no-blend, overwrite, and
//! distance-transform feathering.
//!
//! Feathering weighs each layer by its exact Euclidean distance to the edge
//! of its own coverage (two-pass Felzenszwalb squared-distance transform),
//! normalized so the two weights sum to exactly 1.0 in the overlap.

use serde::{Deserialize, Serialize};

use crate::raster::{Mask, Raster, RasterError};

/// Overlap policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlendMode {
    /// Left layer wins in the overlap.
    NoBlend,
    /// Warped layer wins in the overlap.
    Overwrite,
    /// Distance-transform feathering.
    Feather,
}

/// Exact Euclidean distance (in pixels) from every covered pixel to the
/// nearest uncovered pixel; 0 outside the mask. Canvas edges do not count
/// as boundary.
pub fn distance_to_boundary(mask: &Mask) -> Vec<f64> {
    let (w, h) = (mask.width, mask.height);
    const INF: f64 = 1e20;
    let mut grid: Vec<f64> = mask
        .data
        .iter()
        .map(|&covered| if covered { INF } else { 0.0 })
        .collect();

    // Columns, then rows.
    let mut scratch = vec![0.0f64; w.max(h)];
    for x in 0..w {
        for y in 0..h {
            scratch[y] = grid[y * w + x];
        }
        let d = dt_1d(&scratch[..h]);
        for y in 0..h {
            grid[y * w + x] = d[y];
        }
    }
    for y in 0..h {
        scratch[..w].copy_from_slice(&grid[y * w..(y + 1) * w]);
        let d = dt_1d(&scratch[..w]);
        grid[y * w..(y + 1) * w].copy_from_slice(&d);
    }
    grid.iter_mut().for_each(|v| *v = v.sqrt());
    grid
}

/// One-dimensional squared distance transform (lower envelope of
/// parabolas).
fn dt_1d(f: &[f64]) -> Vec<f64> {
    let n = f.len();
    let mut d = vec![0.0; n];
    let mut v = vec![0usize; n];
    let mut z = vec![0.0f64; n + 1];
    let mut k = 0usize;
    v[0] = 0;
    z[0] = f64::NEG_INFINITY;
    z[1] = f64::INFINITY;
    for q in 1..n {
        loop {
            let p = v[k];
            let s = ((f[q] + (q * q) as f64) - (f[p] + (p * p) as f64))
                / (2.0 * q as f64 - 2.0 * p as f64);
            if s <= z[k] {
                if k == 0 {
                    break;
                }
                k -= 1;
            } else {
                k += 1;
                v[k] = q;
                z[k] = s;
                z[k + 1] = f64::INFINITY;
                break;
            }
        }
    }
    k = 0;
    for q in 0..n {
        while z[k + 1] < q as f64 {
            k += 1;
        }
        let p = v[k];
        let dq = q as f64 - p as f64;
        d[q] = dq * dq + f[p];
    }
    d
}

/// Per-pixel feather weights for the left layer (the warped layer gets
/// exactly 1 − w). Left-only pixels get 1, warped-only 0; when both layers
/// cover every pixel they touch with no boundary in sight, overlap weights
/// fall back to ½.
pub fn feather_weights(left_mask: &Mask, warped_mask: &Mask) -> Vec<f64> {
    let dl = distance_to_boundary(left_mask);
    let dr = distance_to_boundary(warped_mask);
    left_mask
        .data
        .iter()
        .zip(&warped_mask.data)
        .zip(dl.iter().zip(&dr))
        .map(|((&l, &r), (&a, &b))| match (l, r) {
            (true, false) => 1.0,
            (false, true) => 0.0,
            (false, false) => 0.0,
            (true, true) => {
                let sum = a + b;
                if sum > 0.0 && sum.is_finite() {
                    a / sum
                } else {
                    0.5
                }
            }
        })
        .collect()
}

/// Composite two canvas-sized layers under `mode`. Pixels covered by
/// neither mask stay zero.
pub fn composite(
    left: &Raster,
    warped: &Raster,
    left_mask: &Mask,
    warped_mask: &Mask,
    mode: BlendMode,
) -> Result<Raster, RasterError> {
    if left.width != warped.width
        || left.height != warped.height
        || left.channels != warped.channels
        || left_mask.width != left.width
        || warped_mask.width != left.width
        || left_mask.height != left.height
        || warped_mask.height != left.height
    {
        return Err(RasterError::DimensionMismatch(
            "composite layers and masks must share canvas dimensions",
        ));
    }
    let mut out = Raster::new(left.width, left.height, left.channels);
    let channels = left.channels;
    let weights = match mode {
        BlendMode::Feather => Some(feather_weights(left_mask, warped_mask)),
        _ => None,
    };
    for i in 0..left.width * left.height {
        let l = left_mask.data[i];
        let r = warped_mask.data[i];
        let base = i * channels;
        match (l, r) {
            (false, false) => {}
            (true, false) => {
                out.data[base..base + channels]
                    .copy_from_slice(&left.data[base..base + channels]);
            }
            (false, true) => {
                out.data[base..base + channels]
                    .copy_from_slice(&warped.data[base..base + channels]);
            }
            (true, true) => match mode {
                BlendMode::NoBlend => {
                    out.data[base..base + channels]
                        .copy_from_slice(&left.data[base..base + channels]);
                }
                BlendMode::Overwrite => {
                    out.data[base..base + channels]
                        .copy_from_slice(&warped.data[base..base + channels]);
                }
                BlendMode::Feather => {
                    let wl = weights.as_ref().unwrap()[i];
                    let wr = 1.0 - wl;
                    for c in 0..channels {
                        let v = wl * left.data[base + c] as f64
                            + wr * warped.data[base + c] as f64;
                        // Round half-up.
                        out.data[base + c] = (v + 0.5).floor().clamp(0.0, 255.0) as u8;
                    }
                }
            },
        }
    }
    Ok(out)
}
