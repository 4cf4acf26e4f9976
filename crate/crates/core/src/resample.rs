//! Pre-processing methods that change a dataset's class distribution.
//!
//! * RO: random oversampling of the minority class up to balance.
//! * CO: cluster oversampling, equalising minority sub-clusters while
//!   balancing the classes.
//! * SMOTE: synthetic minority points interpolated towards minority
//!   nearest neighbors.
//! * NCR: neighborhood cleaning rule, removing majority points that are
//!   misclassified by, or spoil the neighborhoods of, minority points.
//! * Sparsity: spreads every point away from its sub-cluster mean by a
//!   factor `alpha`, leaving labels and counts alone. This is a
//!   center-anchored affine interpretation of "making the data more sparse
//!   from its class centers".

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;

use crate::clustering::{discover, DEFAULT_QUANTILE};
use crate::data::{summarize, ClassSummary, Dataset, Label};
use crate::error::{invalid, Error, Result};
use crate::neighbors::knn_indices;
use crate::rng::Stream;

/// Where sub-cluster memberships come from for CO and Sparsity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClusterSource {
    /// Use the assignment supplied by the caller (usually the generator's
    /// ground truth).
    GroundTruth,
    /// Discover sub-clusters with MeanShift at the given bandwidth quantile.
    MeanShift { quantile: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SparsityScope {
    MinorityOnly,
    BothClasses,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ResampleMethod {
    RandomOversample,
    ClusterOversample { clusters: ClusterSource },
    Smote { k: usize, amount_pct: usize },
    Ncr { k: usize },
    Sparsity { alpha: f64, scope: SparsityScope, clusters: ClusterSource },
}

pub const DEFAULT_NCR_K: usize = 3;
pub const DEFAULT_SMOTE_K: usize = 5;
pub const DEFAULT_SPARSITY_ALPHA: f64 = 1.5;

impl ResampleMethod {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ResampleMethod::Smote { k, amount_pct } => {
                if k == 0 {
                    return Err(invalid("SMOTE k must be at least 1"));
                }
                if amount_pct == 0 || amount_pct % 100 != 0 {
                    return Err(invalid(format!(
                        "SMOTE amount must be a positive multiple of 100%, got {amount_pct}"
                    )));
                }
            }
            ResampleMethod::Ncr { k: 0 } => return Err(invalid("NCR k must be at least 1")),
            ResampleMethod::Sparsity { alpha, .. } if !(alpha >= 1.0 && alpha.is_finite()) => {
                return Err(invalid(format!("sparsity alpha must be at least 1, got {alpha}")))
            }
            _ => {}
        }
        if let ResampleMethod::ClusterOversample { clusters: ClusterSource::MeanShift { quantile } }
        | ResampleMethod::Sparsity { clusters: ClusterSource::MeanShift { quantile }, .. } = *self
        {
            if !(quantile > 0.0 && quantile <= 1.0) {
                return Err(invalid(format!("MeanShift quantile must lie in (0, 1], got {quantile}")));
            }
        }
        Ok(())
    }

    /// Whether the method needs a caller-supplied cluster assignment.
    pub fn needs_assignment(&self) -> bool {
        matches!(
            self,
            ResampleMethod::ClusterOversample { clusters: ClusterSource::GroundTruth }
                | ResampleMethod::Sparsity { clusters: ClusterSource::GroundTruth, .. }
        )
    }
}

impl fmt::Display for ResampleMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResampleMethod::RandomOversample => write!(f, "ro"),
            ResampleMethod::ClusterOversample { clusters: ClusterSource::GroundTruth } => write!(f, "co"),
            ResampleMethod::ClusterOversample { clusters: ClusterSource::MeanShift { .. } } => write!(f, "co-ms"),
            ResampleMethod::Smote { k, amount_pct } => write!(f, "smote-k{k}-a{amount_pct}"),
            ResampleMethod::Ncr { k } => write!(f, "ncr-k{k}"),
            ResampleMethod::Sparsity { alpha, scope, clusters } => {
                write!(f, "sparsity-a{alpha}")?;
                if *scope == SparsityScope::BothClasses {
                    write!(f, "-both")?;
                }
                if matches!(clusters, ClusterSource::MeanShift { .. }) {
                    write!(f, "-ms")?;
                }
                Ok(())
            }
        }
    }
}

/// Run `method` on `ds`. `assignment` gives a sub-cluster index per row and
/// is required when the method reads clusters from the ground truth.
pub fn resample(ds: &Dataset, method: &ResampleMethod, assignment: Option<&[usize]>, rng: &mut Stream) -> Result<Dataset> {
    method.validate()?;
    match *method {
        ResampleMethod::RandomOversample => random_oversample(ds, rng),
        ResampleMethod::ClusterOversample { clusters } => {
            let owned;
            let assignment = match clusters {
                ClusterSource::GroundTruth => require(assignment, ds)?,
                ClusterSource::MeanShift { quantile } => {
                    owned = discover_minority_clusters(ds, quantile)?;
                    &owned
                }
            };
            cluster_oversample(ds, assignment, rng)
        }
        ResampleMethod::Smote { k, amount_pct } => smote(ds, k, amount_pct, rng),
        ResampleMethod::Ncr { k } => ncr(ds, k),
        ResampleMethod::Sparsity { alpha, scope, clusters } => {
            let given = match clusters {
                ClusterSource::GroundTruth => Some(require(assignment, ds)?),
                ClusterSource::MeanShift { .. } => None,
            };
            let quantile = match clusters {
                ClusterSource::MeanShift { quantile } => quantile,
                ClusterSource::GroundTruth => DEFAULT_QUANTILE,
            };
            sparsity(ds, alpha, scope, given, quantile)
        }
    }
}

fn require<'a>(assignment: Option<&'a [usize]>, ds: &Dataset) -> Result<&'a [usize]> {
    match assignment {
        Some(a) if a.len() == ds.len() => Ok(a),
        Some(a) => Err(invalid(format!("cluster assignment has {} entries for {} rows", a.len(), ds.len()))),
        None => Err(invalid("method needs a sub-cluster assignment")),
    }
}

fn binary_summary(ds: &Dataset) -> Result<ClassSummary> {
    let s = summarize(ds)?;
    if s.counts.len() != 2 {
        return Err(Error::DegenerateClasses(format!(
            "resampling is defined for two classes, found {}",
            s.counts.len()
        )));
    }
    Ok(s)
}

/// Duplicate uniformly drawn minority rows until both classes are equal.
/// Output: every original row in order, then the duplicates in draw order.
pub fn random_oversample(ds: &Dataset, rng: &mut Stream) -> Result<Dataset> {
    let s = binary_summary(ds)?;
    let minority = ds.indices_of(s.minority_label);
    let needed = s.majority_count() - s.minority_count();
    let mut rows: Vec<usize> = (0..ds.len()).collect();
    rows.extend((0..needed).map(|_| minority[rng.random_range(0..minority.len())]));
    Ok(ds.select(&rows))
}

/// Minority sub-cluster assignment discovered with MeanShift. Majority rows
/// get index 0; only minority entries are meaningful.
pub fn discover_minority_clusters(ds: &Dataset, quantile: f64) -> Result<Vec<usize>> {
    let s = binary_summary(ds)?;
    let minority = ds.indices_of(s.minority_label);
    let mut assignment = vec![0; ds.len()];
    if minority.len() < 2 {
        return Ok(assignment);
    }
    let points: Vec<Vec<f64>> = minority.iter().map(|&i| ds.point(i).to_vec()).collect();
    match discover(&points, quantile) {
        Ok(model) => {
            for (&i, &c) in minority.iter().zip(&model.assignment) {
                assignment[i] = c;
            }
            Ok(assignment)
        }
        Err(Error::ZeroBandwidth) => Ok(assignment),
        Err(e) => Err(e),
    }
}

/// Oversample each minority sub-cluster (with replacement) to
/// `⌈majority / clusters⌉`, then drop randomly chosen duplicates so the
/// minority total equals the majority count. Majority rows are untouched.
///
/// `assignment[i]` is the sub-cluster of row `i`; clusters must be numbered
/// `0..K` over the minority rows without gaps.
pub fn cluster_oversample(ds: &Dataset, assignment: &[usize], rng: &mut Stream) -> Result<Dataset> {
    let s = binary_summary(ds)?;
    require(Some(assignment), ds)?;
    let minority = ds.indices_of(s.minority_label);
    let n_clusters = minority.iter().map(|&i| assignment[i]).max().map_or(0, |m| m + 1);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); n_clusters];
    for &i in &minority {
        members[assignment[i]].push(i);
    }
    if let Some(empty) = members.iter().position(Vec::is_empty) {
        return Err(Error::EmptyCluster(empty));
    }

    let majority = s.majority_count();
    let target = majority.div_ceil(n_clusters);
    let mut duplicates: Vec<usize> = Vec::new();
    for group in &members {
        for _ in group.len()..target {
            duplicates.push(group[rng.random_range(0..group.len())]);
        }
    }
    let surplus = (minority.len() + duplicates.len()).saturating_sub(majority);
    if surplus > 0 {
        let drop = rand::seq::index::sample(rng, duplicates.len(), surplus);
        let mut keep = vec![true; duplicates.len()];
        for d in drop.iter() {
            keep[d] = false;
        }
        duplicates = duplicates
            .into_iter()
            .zip(keep)
            .filter_map(|(row, k)| k.then_some(row))
            .collect();
    }
    let rows: Vec<usize> = (0..ds.len()).chain(duplicates).collect();
    Ok(ds.select(&rows))
}

/// SMOTE: for every minority row, `amount_pct / 100` synthetic rows
/// `x + λ·(nn − x)` with `λ ~ U[0, 1)` and `nn` drawn uniformly from the
/// row's `k` nearest minority neighbors. Synthetic rows are appended after
/// the originals and inherit the base row's kind tag.
pub fn smote(ds: &Dataset, k: usize, amount_pct: usize, rng: &mut Stream) -> Result<Dataset> {
    ResampleMethod::Smote { k, amount_pct }.validate()?;
    let s = binary_summary(ds)?;
    let minority = ds.indices_of(s.minority_label);
    if minority.len() <= k {
        return Err(invalid(format!(
            "SMOTE with k = {k} needs more than {k} minority points, found {}",
            minority.len()
        )));
    }
    let minority_ds = ds.select(&minority);
    let per_point = amount_pct / 100;
    let mut builder = Dataset::builder(ds.dims(), ds.kinds().is_some());
    for i in 0..ds.len() {
        builder.push_row(ds, i);
    }
    let mut synthetic = vec![0.0; ds.dims()];
    for (local, &row) in minority.iter().enumerate() {
        let base = ds.point(row);
        let neighbors = knn_indices(&minority_ds, base, k, Some(local))?;
        for _ in 0..per_point {
            let nn = minority_ds.point(neighbors[rng.random_range(0..k)]);
            let lambda: f64 = rng.random();
            for ((out, x), n) in synthetic.iter_mut().zip(base).zip(nn) {
                *out = x + lambda * (n - x);
            }
            builder.push(&synthetic, s.minority_label, ds.kind(row));
        }
    }
    builder.build()
}

/// Rows removed by the neighborhood cleaning rule, ascending.
///
/// (a) a majority row whose `k` nearest neighbors vote it minority is
/// removed; (b) for each minority row whose neighbors vote it majority, the
/// majority rows among those neighbors are removed. Votes that tie go to
/// the majority class. Minority rows are never removed.
pub fn ncr_removals(ds: &Dataset, k: usize) -> Result<Vec<usize>> {
    if k == 0 {
        return Err(invalid("NCR k must be at least 1"));
    }
    let s = binary_summary(ds)?;
    if ds.len() <= k {
        return Err(invalid(format!("NCR with k = {k} needs more than {k} points")));
    }
    let minority_label = s.minority_label;
    let mut removed = vec![false; ds.len()];
    for i in 0..ds.len() {
        let neighbors = knn_indices(ds, ds.point(i), k, Some(i))?;
        let minority_votes = neighbors.iter().filter(|&&j| ds.label(j) == minority_label).count();
        let predicted_minority = minority_votes > k - minority_votes;
        if ds.label(i) == minority_label {
            if !predicted_minority {
                for &j in &neighbors {
                    if ds.label(j) != minority_label {
                        removed[j] = true;
                    }
                }
            }
        } else if predicted_minority {
            removed[i] = true;
        }
    }
    Ok((0..ds.len()).filter(|&i| removed[i]).collect())
}

pub fn ncr(ds: &Dataset, k: usize) -> Result<Dataset> {
    let removals = ncr_removals(ds, k)?;
    let mut keep = vec![true; ds.len()];
    for i in removals {
        keep[i] = false;
    }
    let rows: Vec<usize> = (0..ds.len()).filter(|&i| keep[i]).collect();
    Ok(ds.select(&rows))
}

/// Spread every in-scope point away from its sub-cluster mean:
/// `x ← c + alpha·(x − c)`.
///
/// Sub-clusters come from `assignment` when given (grouped per class), else
/// from MeanShift at `quantile` on each in-scope class. `alpha = 1` returns
/// the input unchanged.
pub fn sparsity(
    ds: &Dataset,
    alpha: f64,
    scope: SparsityScope,
    assignment: Option<&[usize]>,
    quantile: f64,
) -> Result<Dataset> {
    if !(alpha >= 1.0 && alpha.is_finite()) {
        return Err(invalid(format!("sparsity alpha must be at least 1, got {alpha}")));
    }
    let s = binary_summary(ds)?;
    if let Some(a) = assignment {
        require(Some(a), ds)?;
    }
    if alpha == 1.0 {
        return Ok(ds.clone());
    }
    let classes: Vec<Label> = match scope {
        SparsityScope::MinorityOnly => vec![s.minority_label],
        SparsityScope::BothClasses => s.counts.keys().copied().collect(),
    };

    let dims = ds.dims();
    let mut points = ds.raw_points().to_vec();
    for label in classes {
        let rows = ds.indices_of(label);
        let groups: Vec<usize> = match assignment {
            Some(a) => rows.iter().map(|&i| a[i]).collect(),
            None => class_clusters(ds, &rows, quantile)?,
        };
        let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (&row, &g) in rows.iter().zip(&groups) {
            members.entry(g).or_default().push(row);
        }
        for group in members.values() {
            let mut center = vec![0.0; dims];
            for &i in group {
                for (c, v) in center.iter_mut().zip(ds.point(i)) {
                    *c += v;
                }
            }
            center.iter_mut().for_each(|c| *c /= group.len() as f64);
            for &i in group {
                for (j, c) in center.iter().enumerate() {
                    let x = &mut points[i * dims + j];
                    *x = c + alpha * (*x - c);
                }
            }
        }
    }
    ds.with_points(points)
}

fn class_clusters(ds: &Dataset, rows: &[usize], quantile: f64) -> Result<Vec<usize>> {
    if rows.len() < 2 {
        return Ok(vec![0; rows.len()]);
    }
    let points: Vec<Vec<f64>> = rows.iter().map(|&i| ds.point(i).to_vec()).collect();
    match discover(&points, quantile) {
        Ok(model) => Ok(model.assignment),
        Err(Error::ZeroBandwidth) => Ok(vec![0; rows.len()]),
        Err(e) => Err(e),
    }
}
