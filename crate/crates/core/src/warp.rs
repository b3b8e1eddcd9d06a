//! Projective image warping with inverse mapping and bilinear sampling.

use nalgebra::{Matrix3, Vector2, Vector3};
use rayon::prelude::*;

use crate::geom::Homography;
use crate::raster::{Mask, Raster};

/// Output placement on an unbounded canvas: the output raster's pixel
/// (0, 0) sits at canvas coordinate (x0, y0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutBounds {
    pub x0: f64,
    pub y0: f64,
    pub width: usize,
    pub height: usize,
}

/// Warp `src` by `h` (source coords → canvas coords) into a raster covering
/// `out_bounds`.
///
/// Each output pixel is inverse-mapped through h⁻¹ and bilinearly sampled;
/// pixels that land outside the source (or map through w ≈ 0) are zeroed
/// and masked out. Rows are processed in parallel.
pub fn warp_image(src: &Raster, h: &Homography, out_bounds: OutBounds) -> (Raster, Mask) {
    let h_inv = h
        .matrix()
        .try_inverse()
        .expect("Homography values are invertible by construction");
    let mut out = Raster::new(out_bounds.width, out_bounds.height, src.channels);
    let mut mask = Mask::new(out_bounds.width, out_bounds.height);

    let channels = src.channels;
    let width = out_bounds.width;
    let rows: Vec<(usize, &mut [u8])> = out
        .data
        .chunks_mut(width * channels)
        .enumerate()
        .collect();
    let mask_rows: Vec<(usize, &mut [bool])> = mask.data.chunks_mut(width).enumerate().collect();

    rows.into_par_iter()
        .zip(mask_rows.into_par_iter())
        .for_each(|((y, row), (_, mask_row))| {
            for x in 0..width {
                let canvas = Vector2::new(x as f64 + out_bounds.x0, y as f64 + out_bounds.y0);
                if let Some(sample) = inverse_sample(src, &h_inv, canvas) {
                    for c in 0..channels {
                        row[x * channels + c] = sample[c];
                    }
                    mask_row[x] = true;
                }
            }
        });

    (out, mask)
}

fn inverse_sample(src: &Raster, h_inv: &Matrix3<f64>, canvas: Vector2<f64>) -> Option<[u8; 3]> {
    let v = h_inv * Vector3::new(canvas.x, canvas.y, 1.0);
    if v.z.abs() < 1e-12 {
        return None;
    }
    let sx = v.x / v.z;
    let sy = v.y / v.z;
    if sx < 0.0 || sy < 0.0 || sx > (src.width - 1) as f64 || sy > (src.height - 1) as f64 {
        return None;
    }
    let x0 = sx.floor() as usize;
    let y0 = sy.floor() as usize;
    let x1 = (x0 + 1).min(src.width - 1);
    let y1 = (y0 + 1).min(src.height - 1);
    let fx = sx - x0 as f64;
    let fy = sy - y0 as f64;
    let mut out = [0u8; 3];
    for c in 0..src.channels {
        let v00 = src.sample(x0, y0, c);
        let v10 = src.sample(x1, y0, c);
        let v01 = src.sample(x0, y1, c);
        let v11 = src.sample(x1, y1, c);
        let top = v00 + (v10 - v00) * fx;
        let bottom = v01 + (v11 - v01) * fx;
        let value = top + (bottom - top) * fy;
        out[c] = (value + 0.5).floor().clamp(0.0, 255.0) as u8;
    }
    Some(out)
}

/// Axis-aligned canvas bounds covering the left image and the warped
/// corners of the right image, clamped so the canvas area never exceeds
/// `area_factor` times the combined input area (margins beyond the left
/// image shrink proportionally on degenerate homographies).
pub fn union_canvas_bounds(
    left: (usize, usize),
    right: (usize, usize),
    right_to_canvas: &Homography,
    area_factor: f64,
) -> OutBounds {
    let (lw, lh) = (left.0 as f64, left.1 as f64);
    let (rw, rh) = (right.0 as f64, right.1 as f64);
    let corners = [
        Vector2::new(0.0, 0.0),
        Vector2::new(rw - 1.0, 0.0),
        Vector2::new(rw - 1.0, rh - 1.0),
        Vector2::new(0.0, rh - 1.0),
    ];
    let mut min_x: f64 = 0.0;
    let mut min_y: f64 = 0.0;
    let mut max_x: f64 = lw - 1.0;
    let mut max_y: f64 = lh - 1.0;
    for c in corners {
        if let Some(p) = right_to_canvas.apply(&c) {
            min_x = min_x.min(p.x);
            min_y = min_y.min(p.y);
            max_x = max_x.max(p.x);
            max_y = max_y.max(p.y);
        }
    }

    // Shrink margins beyond the left image's box if the union is too large.
    // Sub-microppixel margins are numerical dust from the estimation, not
    // real overhang; snapping them keeps an identity stitch bit-exact.
    let snap = |v: f64| if v < 1e-6 { 0.0 } else { v };
    let limit = area_factor * (lw * lh + rw * rh);
    let margins = (
        snap((0.0 - min_x).max(0.0)),
        snap((max_x - (lw - 1.0)).max(0.0)),
        snap((0.0 - min_y).max(0.0)),
        snap((max_y - (lh - 1.0)).max(0.0)),
    );
    let area = |alpha: f64| -> f64 {
        (lw + alpha * (margins.0 + margins.1)) * (lh + alpha * (margins.2 + margins.3))
    };
    let mut alpha = 1.0;
    if area(1.0) > limit {
        // Bisection on the monotone area(α); fine resolution is pointless
        // beyond a pixel.
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..40 {
            let mid = 0.5 * (lo + hi);
            if area(mid) > limit {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        alpha = lo;
    }
    let x0 = -(margins.0 * alpha).ceil();
    let y0 = -(margins.2 * alpha).ceil();
    let x1 = (lw - 1.0) + (margins.1 * alpha).ceil();
    let y1 = (lh - 1.0) + (margins.3 * alpha).ceil();
    OutBounds {
        x0,
        y0,
        width: (x1 - x0 + 1.0) as usize,
        height: (y1 - y0 + 1.0) as usize,
    }
}
