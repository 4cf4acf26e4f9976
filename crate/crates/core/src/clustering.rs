//! Bandwidth estimation and flat-kernel MeanShift.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::neighbors::distance;

pub const DEFAULT_QUANTILE: f64 = 0.3;
pub const DEFAULT_MAX_ITER: usize = 300;
/// Convergence tolerance as a fraction of the bandwidth.
pub const DEFAULT_TOL_FACTOR: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterModel {
    pub centers: Vec<Vec<f64>>,
    /// Index into `centers` for every input point.
    pub assignment: Vec<usize>,
    pub bandwidth: f64,
}

impl ClusterModel {
    pub fn n_clusters(&self) -> usize {
        self.centers.len()
    }
}

/// Mean over all points of the distance to their `⌈quantile·(n−1)⌉`-th
/// nearest other point.
pub fn estimate_bandwidth(points: &[Vec<f64>], quantile: f64) -> Result<f64> {
    let n = points.len();
    if n < 2 {
        return Err(Error::InvalidParameter("bandwidth estimation needs at least 2 points".into()));
    }
    if !(quantile > 0.0 && quantile <= 1.0) {
        return Err(Error::InvalidParameter(format!("quantile must lie in (0, 1], got {quantile}")));
    }
    let rank = ((quantile * (n - 1) as f64).ceil() as usize).clamp(1, n - 1);
    let total: f64 = points
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let mut d: Vec<f64> = points
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, q)| distance(p, q))
                .collect();
            let (_, kth, _) = d.select_nth_unstable_by(rank - 1, f64::total_cmp);
            *kth
        })
        .collect::<Vec<f64>>()
        .iter()
        .sum();
    let bw = total / n as f64;
    if bw <= 0.0 {
        return Err(Error::ZeroBandwidth);
    }
    Ok(bw)
}

fn shift_to_mode(points: &[Vec<f64>], start: &[f64], bandwidth: f64, tol: f64, max_iter: usize) -> Vec<f64> {
    let dims = start.len();
    let mut x = start.to_vec();
    for _ in 0..max_iter {
        let mut sum = vec![0.0; dims];
        let mut count = 0usize;
        for p in points {
            if distance(p, &x) <= bandwidth {
                for (s, v) in sum.iter_mut().zip(p) {
                    *s += v;
                }
                count += 1;
            }
        }
        if count == 0 {
            break;
        }
        let mean: Vec<f64> = sum.into_iter().map(|s| s / count as f64).collect();
        let shift = distance(&mean, &x);
        x = mean;
        if shift < tol {
            break;
        }
    }
    x
}

/// Flat-kernel MeanShift seeded from every point.
///
/// Each seed moves to the mean of the points within `bandwidth` until the
/// shift drops below `tol` or `max_iter` is reached. Converged modes closer
/// than `bandwidth / 2` are merged, keeping the one with more points inside
/// its window (ties to the lower seed index); points are then assigned to
/// their nearest surviving center.
pub fn mean_shift(points: &[Vec<f64>], bandwidth: f64, tol: f64, max_iter: usize) -> Result<ClusterModel> {
    mean_shift_from_seeds(points, points, bandwidth, tol, max_iter)
}

pub fn mean_shift_from_seeds(
    points: &[Vec<f64>],
    seeds: &[Vec<f64>],
    bandwidth: f64,
    tol: f64,
    max_iter: usize,
) -> Result<ClusterModel> {
    if !(bandwidth > 0.0 && bandwidth.is_finite()) {
        return Err(Error::InvalidParameter(format!("bandwidth must be positive, got {bandwidth}")));
    }
    if tol.is_nan() || tol <= 0.0 || max_iter == 0 {
        return Err(Error::InvalidParameter("tol must be positive and max_iter at least 1".into()));
    }
    if points.is_empty() || seeds.is_empty() {
        return Err(Error::InvalidParameter("mean shift needs at least one point".into()));
    }

    let modes: Vec<(Vec<f64>, usize)> = seeds
        .par_iter()
        .map(|s| {
            let mode = shift_to_mode(points, s, bandwidth, tol, max_iter);
            let support = points.iter().filter(|p| distance(p, &mode) <= bandwidth).count();
            (mode, support)
        })
        .collect();

    let mut order: Vec<usize> = (0..modes.len()).collect();
    order.sort_by(|&a, &b| modes[b].1.cmp(&modes[a].1).then(a.cmp(&b)));
    let merge_radius = bandwidth / 2.0;
    let mut centers: Vec<Vec<f64>> = Vec::new();
    for i in order {
        let m = &modes[i].0;
        if centers.iter().all(|c| distance(c, m) >= merge_radius) {
            centers.push(m.clone());
        }
    }

    let assignment = points.iter().map(|p| nearest(&centers, p)).collect();
    Ok(ClusterModel { centers, assignment, bandwidth })
}

fn nearest(centers: &[Vec<f64>], p: &[f64]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (j, c) in centers.iter().enumerate() {
        let d = distance(c, p);
        if d < best_d {
            best = j;
            best_d = d;
        }
    }
    best
}

/// Bandwidth from `quantile`, then MeanShift with the default tolerance and
/// iteration cap.
pub fn discover(points: &[Vec<f64>], quantile: f64) -> Result<ClusterModel> {
    let bw = estimate_bandwidth(points, quantile)?;
    mean_shift(points, bw, DEFAULT_TOL_FACTOR * bw, DEFAULT_MAX_ITER)
}
