//! Density-driven candidate clustering: pairwise distances, medoid centers,
//! local filtering, iterative trimming and MAD pruning.
//!
//! Correct hypotheses concentrate; wrong ones scatter. The trim loop
//! repeatedly recenters on the medoid of the survivors and discards the
//! farthest fraction, homing in on the dense cluster without assuming any
//! vector-space structure on the candidates. All tie-breaks are
//! lowest-index, so entire pipelines are bit-reproducible.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::Pose;
use crate::metrics::{relative_transform_error, Metric};
use crate::solvers::PoseCandidate;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClusterError {
    /// Local filtering retained nothing; the pipeline should fall back to
    /// global clustering.
    #[error("no candidates within the local tolerances")]
    EmptyAfterFilter,
    #[error("clustering needs at least {needed} candidates, got {got}")]
    TooFewCandidates { needed: usize, got: usize },
}

/// Clustering mode: restrict candidates to a neighborhood of a reference
/// pose (fast, smooth updates) or consider everything (recovers from
/// arbitrary failures).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "mode")]
pub enum ClusterMode {
    Local { tol_t: f64, tol_r: f64 },
    Global,
}

/// Trimming/MAD parameters. Defaults: 5 rounds of 20% trimming, MAD prune
/// at k = 3 (k = 0 disables the MAD step).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrimConfig {
    pub trim_fraction: f64,
    pub rounds: usize,
    pub mad_k: f64,
}

impl Default for TrimConfig {
    fn default() -> Self {
        TrimConfig {
            trim_fraction: 0.2,
            rounds: 5,
            mad_k: 3.0,
        }
    }
}

/// Result of a trim run. `survivors` holds original candidate indices in
/// ascending order; `center_index` is the original index of the density
/// peak of the final survivor set (always a member of `survivors`).
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterResult {
    pub center_index: usize,
    pub survivors: Vec<usize>,
    pub per_round_counts: Vec<usize>,
    /// Pairs where the Lie-algebra metric fell back to Frobenius.
    pub fallback_pairs: usize,
}

/// Symmetric pairwise distance matrix with a zero diagonal, plus the count
/// of metric fallbacks. Rows are evaluated in parallel and gathered in
/// order, so the result does not depend on thread count.
pub fn pairwise_distances<E: Sync>(
    candidates: &[E],
    metric: &dyn Metric<E>,
) -> (DMatrix<f64>, usize) {
    let n = candidates.len();
    let rows: Vec<(Vec<f64>, usize)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut row = vec![0.0; n];
            let mut fallbacks = 0;
            for j in (i + 1)..n {
                let d = metric.distance(&candidates[i], &candidates[j]);
                row[j] = d.value;
                if d.fell_back {
                    fallbacks += 1;
                }
            }
            (row, fallbacks)
        })
        .collect();

    let mut m = DMatrix::zeros(n, n);
    let mut fallback_pairs = 0;
    for (i, (row, fb)) in rows.into_iter().enumerate() {
        fallback_pairs += fb;
        for (j, v) in row.into_iter().enumerate().skip(i + 1) {
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    (m, fallback_pairs)
}

/// Index of the candidate minimizing the sum of distances to all others
/// (ties broken by lowest index).
pub fn medoid<E: Sync>(candidates: &[E], metric: &dyn Metric<E>) -> Result<usize, ClusterError> {
    if candidates.is_empty() {
        return Err(ClusterError::TooFewCandidates { needed: 1, got: 0 });
    }
    let (d, _) = pairwise_distances(candidates, metric);
    Ok(medoid_of_subset(&d, &(0..candidates.len()).collect::<Vec<_>>()))
}

/// Medoid of `subset` given a full pairwise matrix (row-sum argmin over the
/// subset; lowest index on ties). Returns an index into the original set.
fn medoid_of_subset(d: &DMatrix<f64>, subset: &[usize]) -> usize {
    let mut best = subset[0];
    let mut best_sum = f64::INFINITY;
    for &i in subset {
        let sum: f64 = subset.iter().map(|&j| d[(i, j)]).sum();
        if sum < best_sum {
            best_sum = sum;
            best = i;
        }
    }
    best
}

/// Density peak of `subset`: the member with the smallest distance to its
/// k-th nearest neighbor, k = max(3, 1% of the subset). Ties break by
/// smaller distance sum, then lower index.
///
/// This is the trim-loop center. The sum-of-distances medoid is a lottery
/// when most candidates are scattered garbage at heavy-tailed distances —
/// a tight minority cluster shifts a row sum by less than the sum's
/// scatter-driven variance, so the medoid lands anywhere. The k-NN radius
/// is rank-based and scale-free, and the dense cluster is exactly where it
/// collapses.
fn density_peak_of_subset(d: &DMatrix<f64>, subset: &[usize]) -> usize {
    let n = subset.len();
    if n <= 2 {
        return subset[0];
    }
    let k = (n / 100).max(3).min(n - 1);
    let mut best = subset[0];
    let mut best_key = (f64::INFINITY, f64::INFINITY);
    for &i in subset {
        let mut dists: Vec<f64> = subset
            .iter()
            .filter(|&&j| j != i)
            .map(|&j| d[(i, j)])
            .collect();
        let (_, kth, _) =
            dists.select_nth_unstable_by(k - 1, |a, b| a.partial_cmp(b).unwrap());
        let dk = *kth;
        let sum: f64 = subset.iter().map(|&j| d[(i, j)]).sum();
        if (dk, sum) < best_key {
            best_key = (dk, sum);
            best = i;
        }
    }
    best
}

/// Keep candidates within both tolerances of `reference`, ranked ascending
/// by e_t + λ·e_r (ties by index). Errors with
/// [`ClusterError::EmptyAfterFilter`] when nothing survives, which signals
/// the pipeline to fall back to global mode.
pub fn local_filter(
    candidates: &[PoseCandidate],
    reference: &Pose,
    tol_t: f64,
    tol_r: f64,
    lambda: f64,
) -> Result<Vec<usize>, ClusterError> {
    let mut kept: Vec<(usize, f64)> = candidates
        .iter()
        .enumerate()
        .filter_map(|(i, c)| {
            let (et, er) = relative_transform_error(reference, &c.pose);
            (et <= tol_t && er <= tol_r).then_some((i, et + lambda * er))
        })
        .collect();
    if kept.is_empty() {
        return Err(ClusterError::EmptyAfterFilter);
    }
    kept.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(a.0.cmp(&b.0)));
    Ok(kept.into_iter().map(|(i, _)| i).collect())
}

/// Iterative fractional trimming.
///
/// Each round recenters on the density peak of the current survivors and
/// keeps the nearest ceil((1−trim_fraction)·count) of them — candidates
/// tied with the cutoff distance are all kept, and the survivor count never
/// drops below 2. The returned center is the density peak of the final
/// survivor set.
pub fn trim_iterate<E: Sync>(
    candidates: &[E],
    metric: &dyn Metric<E>,
    cfg: &TrimConfig,
) -> Result<ClusterResult, ClusterError> {
    if candidates.len() < 2 {
        return Err(ClusterError::TooFewCandidates {
            needed: 2,
            got: candidates.len(),
        });
    }
    let (d, fallback_pairs) = pairwise_distances(candidates, metric);
    let mut survivors: Vec<usize> = (0..candidates.len()).collect();
    let mut per_round_counts = Vec::with_capacity(cfg.rounds);

    for _ in 0..cfg.rounds {
        let center = density_peak_of_subset(&d, &survivors);
        let keep = (((1.0 - cfg.trim_fraction) * survivors.len() as f64).ceil() as usize).max(2);
        if keep < survivors.len() {
            let mut by_dist: Vec<(usize, f64)> =
                survivors.iter().map(|&i| (i, d[(center, i)])).collect();
            by_dist.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(a.0.cmp(&b.0)));
            let cutoff = by_dist[keep - 1].1;
            survivors = by_dist
                .into_iter()
                .filter(|&(_, dist)| dist <= cutoff)
                .map(|(i, _)| i)
                .collect();
            survivors.sort_unstable();
        }
        per_round_counts.push(survivors.len());
    }

    let center_index = density_peak_of_subset(&d, &survivors);
    Ok(ClusterResult {
        center_index,
        survivors,
        per_round_counts,
        fallback_pairs,
    })
}

/// Median absolute deviation prune around a given center element.
///
/// Keeps candidate `i` iff its distance to the center is within
/// median + k·MAD; when the MAD collapses (identical candidates) everything
/// at the median survives.
pub fn mad_filter<E: Sync>(
    candidates: &[E],
    center: &E,
    metric: &dyn Metric<E>,
    k: f64,
) -> Vec<usize> {
    let dists: Vec<f64> = candidates
        .iter()
        .map(|c| metric.distance(center, c).value)
        .collect();
    let m = median(&dists);
    let deviations: Vec<f64> = dists.iter().map(|d| (d - m).abs()).collect();
    let mad = median(&deviations);
    let cutoff = if mad < 1e-12 { m + 1e-12 } else { m + k * mad };
    (0..candidates.len())
        .filter(|&i| dists[i] <= cutoff)
        .collect()
}

fn median(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}
