//! Dataset model and class summaries.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub type Label = u32;

/// Role of a point in a generated dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExampleKind {
    Safe,
    Borderline,
    Rare,
    Majority,
}

impl ExampleKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ExampleKind::Safe => "safe",
            ExampleKind::Borderline => "borderline",
            ExampleKind::Rare => "rare",
            ExampleKind::Majority => "majority",
        }
    }

    pub fn is_minority(self) -> bool {
        !matches!(self, ExampleKind::Majority)
    }
}

impl fmt::Display for ExampleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExampleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "safe" => Ok(ExampleKind::Safe),
            "borderline" => Ok(ExampleKind::Borderline),
            "rare" => Ok(ExampleKind::Rare),
            "majority" => Ok(ExampleKind::Majority),
            other => Err(Error::InvalidData(format!("unknown example kind `{other}`"))),
        }
    }
}

/// An `n × d` matrix of finite features with one class label per row and
/// optional per-row [`ExampleKind`] tags. Rows are stored contiguously.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    dims: usize,
    points: Vec<f64>,
    labels: Vec<Label>,
    kinds: Option<Vec<ExampleKind>>,
}

impl Dataset {
    pub fn new(
        dims: usize,
        points: Vec<f64>,
        labels: Vec<Label>,
        kinds: Option<Vec<ExampleKind>>,
    ) -> Result<Self> {
        if dims == 0 {
            return Err(Error::InvalidData("datasets need at least one feature".into()));
        }
        if points.len() != dims * labels.len() {
            return Err(Error::InvalidData(format!(
                "{} feature values do not form {} rows of {} features",
                points.len(),
                labels.len(),
                dims
            )));
        }
        if let Some(k) = &kinds {
            if k.len() != labels.len() {
                return Err(Error::InvalidData(format!(
                    "{} kind tags for {} rows",
                    k.len(),
                    labels.len()
                )));
            }
        }
        if let Some(pos) = points.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidData(format!(
                "non-finite feature value in row {}",
                pos / dims
            )));
        }
        Ok(Dataset { dims, points, labels, kinds })
    }

    pub fn from_rows(rows: &[Vec<f64>], labels: Vec<Label>) -> Result<Self> {
        let dims = rows.first().map_or(1, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != dims) {
            return Err(Error::DimensionMismatch { expected: dims, found: bad.len() });
        }
        Dataset::new(dims, rows.concat(), labels, None)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dims..(i + 1) * self.dims]
    }

    pub fn label(&self, i: usize) -> Label {
        self.labels[i]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn kinds(&self) -> Option<&[ExampleKind]> {
        self.kinds.as_deref()
    }

    pub fn kind(&self, i: usize) -> Option<ExampleKind> {
        self.kinds.as_ref().map(|k| k[i])
    }

    /// Flat row-major feature storage.
    pub fn raw_points(&self) -> &[f64] {
        &self.points
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.points.chunks_exact(self.dims)
    }

    pub fn without_kinds(mut self) -> Self {
        self.kinds = None;
        self
    }

    /// Indices of all rows carrying `label`, ascending.
    pub fn indices_of(&self, label: Label) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.labels[i] == label).collect()
    }

    /// New dataset made of the given rows, in the given order (repeats allowed).
    pub fn select(&self, indices: &[usize]) -> Dataset {
        let mut points = Vec::with_capacity(indices.len() * self.dims);
        for &i in indices {
            points.extend_from_slice(self.point(i));
        }
        Dataset {
            dims: self.dims,
            points,
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            kinds: self
                .kinds
                .as_ref()
                .map(|k| indices.iter().map(|&i| k[i]).collect()),
        }
    }

    /// Same labels and tags, replaced features.
    pub(crate) fn with_points(&self, points: Vec<f64>) -> Result<Dataset> {
        Dataset::new(self.dims, points, self.labels.clone(), self.kinds.clone())
    }

    pub(crate) fn builder(dims: usize, tagged: bool) -> DatasetBuilder {
        DatasetBuilder {
            dims,
            points: Vec::new(),
            labels: Vec::new(),
            kinds: tagged.then(Vec::new),
        }
    }
}

pub(crate) struct DatasetBuilder {
    dims: usize,
    points: Vec<f64>,
    labels: Vec<Label>,
    kinds: Option<Vec<ExampleKind>>,
}

impl DatasetBuilder {
    pub fn push(&mut self, point: &[f64], label: Label, kind: Option<ExampleKind>) {
        debug_assert_eq!(point.len(), self.dims);
        self.points.extend_from_slice(point);
        self.labels.push(label);
        if let Some(k) = &mut self.kinds {
            k.push(kind.unwrap_or(ExampleKind::Majority));
        }
    }

    pub fn push_row(&mut self, ds: &Dataset, i: usize) {
        self.push(ds.point(i), ds.label(i), ds.kind(i));
    }

    pub fn build(self) -> Result<Dataset> {
        Dataset::new(self.dims, self.points, self.labels, self.kinds)
    }
}

/// Per-class counts together with the derived minority / majority roles.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassSummary {
    pub counts: BTreeMap<Label, usize>,
    pub minority_label: Label,
    pub majority_label: Label,
    /// Majority count over minority count, at full precision.
    pub imbalance_ratio: f64,
}

impl ClassSummary {
    pub fn minority_count(&self) -> usize {
        self.counts[&self.minority_label]
    }

    pub fn majority_count(&self) -> usize {
        self.counts[&self.majority_label]
    }

    pub fn roles(&self) -> ClassRoles {
        ClassRoles { minority: self.minority_label, majority: self.majority_label }
    }
}

/// Which label counts as the positive (minority) class.
///
/// Resampling can flip which class is numerically larger, so evaluation keeps
/// the roles fixed from the original data rather than recomputing them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassRoles {
    pub minority: Label,
    pub majority: Label,
}

impl ClassRoles {
    pub fn infer(ds: &Dataset) -> Result<ClassRoles> {
        summarize(ds).map(|s| s.roles())
    }
}

/// Count classes and identify minority and majority.
///
/// The minority is the class with the strictly smallest count, ties going to
/// the lowest label; the majority is the largest class, ties going to the
/// highest label, so that a balanced two-class set still has two roles.
pub fn summarize(ds: &Dataset) -> Result<ClassSummary> {
    summarize_labels(ds.labels())
}

pub fn summarize_labels(labels: &[Label]) -> Result<ClassSummary> {
    let mut counts = BTreeMap::new();
    for &l in labels {
        *counts.entry(l).or_insert(0usize) += 1;
    }
    if counts.len() < 2 {
        return Err(Error::DegenerateClasses(format!(
            "{} distinct label(s), need at least 2",
            counts.len()
        )));
    }
    // BTreeMap iterates in ascending label order.
    let (&minority_label, &min_count) = counts
        .iter()
        .min_by(|a, b| a.1.cmp(b.1).then(a.0.cmp(b.0)))
        .expect("non-empty");
    let (&majority_label, &maj_count) = counts
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then(a.0.cmp(b.0)))
        .expect("non-empty");
    Ok(ClassSummary {
        imbalance_ratio: maj_count as f64 / min_count as f64,
        counts,
        minority_label,
        majority_label,
    })
}

/// Human-readable characteristics block:
///
/// ```text
/// Number of samples: 400
/// Number of features: 2
/// Majority class label: 0
/// Number of majority class samples: 316
/// Minority class label: 1
/// Number of Minority class sample: 84
/// Imbalance Ratio : 3.8
/// ```
pub fn characteristics(ds: &Dataset) -> Result<String> {
    let s = summarize(ds)?;
    Ok(format!(
        "Number of samples: {}\n\
         Number of features: {}\n\
         Majority class label: {}\n\
         Number of majority class samples: {}\n\
         Minority class label: {}\n\
         Number of Minority class sample: {}\n\
         Imbalance Ratio : {:.1}\n",
        ds.len(),
        ds.dims(),
        s.majority_label,
        s.majority_count(),
        s.minority_label,
        s.minority_count(),
        s.imbalance_ratio
    ))
}
