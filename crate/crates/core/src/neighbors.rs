//! Euclidean distance and exact k-nearest-neighbor search.

use std::cmp::Ordering;

use crate::data::Dataset;
use crate::error::{Error, Result};

pub fn euclidean(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), found: b.len() });
    }
    Ok(distance(a, b))
}

/// Unchecked L2 distance; callers guarantee equal lengths.
#[inline]
pub(crate) fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub index: usize,
    pub distance: f64,
}

fn by_distance_then_index(a: &Neighbor, b: &Neighbor) -> Ordering {
    a.distance.total_cmp(&b.distance).then(a.index.cmp(&b.index))
}

/// The `k` nearest rows of `train` to `query`, closest first.
///
/// Distance ties are broken by ascending row index; `exclude` removes one
/// row (typically the query itself) from consideration.
pub fn knn(train: &Dataset, query: &[f64], k: usize, exclude: Option<usize>) -> Result<Vec<Neighbor>> {
    if query.len() != train.dims() {
        return Err(Error::DimensionMismatch { expected: train.dims(), found: query.len() });
    }
    let available = train.len() - usize::from(exclude.is_some_and(|e| e < train.len()));
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if k > available {
        return Err(Error::KTooLarge { k, available });
    }
    let mut all: Vec<Neighbor> = train
        .rows()
        .enumerate()
        .filter(|(i, _)| Some(*i) != exclude)
        .map(|(index, row)| Neighbor { index, distance: distance(row, query) })
        .collect();
    if k < all.len() {
        all.select_nth_unstable_by(k - 1, by_distance_then_index);
        all.truncate(k);
    }
    all.sort_unstable_by(by_distance_then_index);
    Ok(all)
}

pub fn knn_indices(train: &Dataset, query: &[f64], k: usize, exclude: Option<usize>) -> Result<Vec<usize>> {
    Ok(knn(train, query, k, exclude)?.into_iter().map(|n| n.index).collect())
}
