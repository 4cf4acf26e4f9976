//! k-NN and CART-style decision tree classifiers for two classes.
//!
//! Both emit a minority-class score for ranking metrics. Ties in votes and
//! leaf counts resolve to the majority class.

use std::fmt::Write as _;

use crate::data::{ClassRoles, Dataset, Label};
use crate::error::{invalid, Error, Result};
use crate::neighbors::knn_indices;

pub const DEFAULT_KNN_K: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub label: Label,
    /// Evidence for the minority class in `[0, 1]`.
    pub score: f64,
}

#[derive(Debug, Clone)]
pub struct KnnModel {
    train: Dataset,
    k: usize,
    roles: ClassRoles,
}

impl KnnModel {
    pub fn fit(train: Dataset, k: usize, roles: ClassRoles) -> Result<Self> {
        if k == 0 || k > train.len() {
            return Err(invalid(format!("k = {k} is outside 1..={}", train.len())));
        }
        Ok(KnnModel { train, k, roles })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn predict(&self, query: &[f64]) -> Result<Prediction> {
        let neighbors = knn_indices(&self.train, query, self.k, None)?;
        let votes = neighbors
            .iter()
            .filter(|&&i| self.train.label(i) == self.roles.minority)
            .count();
        let label = if votes > self.k - votes { self.roles.minority } else { self.roles.majority };
        Ok(Prediction { label, score: votes as f64 / self.k as f64 })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeParams {
    pub max_depth: usize,
    pub min_leaf: usize,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams { max_depth: 12, min_leaf: 2 }
    }
}

/// Per-node class counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Counts {
    pub minority: usize,
    pub majority: usize,
}

impl Counts {
    pub fn total(&self) -> usize {
        self.minority + self.majority
    }

    pub fn gini(&self) -> f64 {
        let n = self.total() as f64;
        if n == 0.0 {
            return 0.0;
        }
        let p = self.minority as f64 / n;
        let q = self.majority as f64 / n;
        1.0 - p * p - q * q
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
        counts: Counts,
    },
    Leaf {
        counts: Counts,
    },
}

#[derive(Debug, Clone)]
pub struct TreeModel {
    nodes: Vec<Node>,
    dims: usize,
    roles: ClassRoles,
    params: TreeParams,
}

struct Builder<'a> {
    ds: &'a Dataset,
    roles: ClassRoles,
    params: TreeParams,
    nodes: Vec<Node>,
}

impl Builder<'_> {
    fn counts(&self, rows: &[usize]) -> Counts {
        let mut c = Counts::default();
        for &i in rows {
            if self.ds.label(i) == self.roles.minority {
                c.minority += 1;
            } else if self.ds.label(i) == self.roles.majority {
                c.majority += 1;
            }
        }
        c
    }

    /// Best `(feature, threshold)` by weighted child Gini; ties keep the
    /// lower feature, then the lower threshold.
    fn best_split(&self, rows: &[usize]) -> Option<(usize, f64)> {
        let n = rows.len();
        let min_leaf = self.params.min_leaf.max(1);
        let mut best: Option<(f64, usize, f64)> = None;
        let mut sorted = rows.to_vec();
        for f in 0..self.ds.dims() {
            let value = |i: usize| self.ds.point(i)[f];
            sorted.sort_by(|&a, &b| value(a).total_cmp(&value(b)).then(a.cmp(&b)));
            let total = self.counts(&sorted);
            let mut left = Counts::default();
            for pos in 0..n - 1 {
                let row = sorted[pos];
                if self.ds.label(row) == self.roles.minority {
                    left.minority += 1;
                } else if self.ds.label(row) == self.roles.majority {
                    left.majority += 1;
                }
                let (lo, hi) = (value(row), value(sorted[pos + 1]));
                let n_left = pos + 1;
                if lo == hi || n_left < min_leaf || n - n_left < min_leaf {
                    continue;
                }
                let right = Counts {
                    minority: total.minority - left.minority,
                    majority: total.majority - left.majority,
                };
                let impurity = (left.total() as f64 * left.gini() + right.total() as f64 * right.gini())
                    / total.total().max(1) as f64;
                if best.is_none_or(|(b, _, _)| impurity < b - 1e-12) {
                    let mut threshold = 0.5 * (lo + hi);
                    if threshold >= hi {
                        threshold = lo;
                    }
                    best = Some((impurity, f, threshold));
                }
            }
        }
        best.map(|(_, f, t)| (f, t))
    }

    fn grow(&mut self, rows: Vec<usize>, depth: usize) -> usize {
        let counts = self.counts(&rows);
        let id = self.nodes.len();
        self.nodes.push(Node::Leaf { counts });
        let pure = counts.minority == 0 || counts.majority == 0;
        if pure || depth >= self.params.max_depth || rows.len() < 2 * self.params.min_leaf.max(1) {
            return id;
        }
        let Some((feature, threshold)) = self.best_split(&rows) else {
            return id;
        };
        let (l, r): (Vec<usize>, Vec<usize>) =
            rows.into_iter().partition(|&i| self.ds.point(i)[feature] <= threshold);
        let left = self.grow(l, depth + 1);
        let right = self.grow(r, depth + 1);
        self.nodes[id] = Node::Split { feature, threshold, left, right, counts };
        id
    }
}

impl TreeModel {
    /// Greedy binary tree minimising weighted Gini impurity. Candidate
    /// thresholds are midpoints between consecutive distinct feature values;
    /// growth stops at purity, `max_depth` or when a split would leave fewer
    /// than `min_leaf` rows on a side.
    pub fn fit(ds: &Dataset, roles: ClassRoles, params: TreeParams) -> Result<Self> {
        if params.min_leaf == 0 {
            return Err(invalid("min_leaf must be at least 1"));
        }
        if ds.len() < 2 * params.min_leaf {
            return Err(invalid(format!(
                "{} rows cannot form two leaves of at least {}",
                ds.len(),
                params.min_leaf
            )));
        }
        let mut b = Builder { ds, roles, params, nodes: Vec::new() };
        b.grow((0..ds.len()).collect(), 0);
        Ok(TreeModel { nodes: b.nodes, dims: ds.dims(), roles, params })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn params(&self) -> TreeParams {
        self.params
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], id: usize) -> usize {
            match nodes[id] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + walk(nodes, left).max(walk(nodes, right)),
            }
        }
        walk(&self.nodes, 0)
    }

    pub fn predict(&self, query: &[f64]) -> Result<Prediction> {
        if query.len() != self.dims {
            return Err(Error::DimensionMismatch { expected: self.dims, found: query.len() });
        }
        let mut id = 0;
        loop {
            match self.nodes[id] {
                Node::Split { feature, threshold, left, right, .. } => {
                    id = if query[feature] <= threshold { left } else { right };
                }
                Node::Leaf { counts } => return Ok(self.leaf_prediction(counts)),
            }
        }
    }

    fn leaf_prediction(&self, c: Counts) -> Prediction {
        let label = if c.minority > c.majority { self.roles.minority } else { self.roles.majority };
        // Laplace-smoothed minority proportion.
        let score = (c.minority as f64 + 1.0) / (c.total() as f64 + 2.0);
        Prediction { label, score }
    }

    /// One node per line, two spaces of indentation per level:
    ///
    /// ```text
    /// split f0 <= 1.5 [min=2 maj=2]
    ///   leaf [min=0 maj=2]
    ///   leaf [min=2 maj=0]
    /// ```
    pub fn export_text(&self) -> String {
        let mut out = String::new();
        let mut stack = vec![(0usize, 0usize)];
        while let Some((id, depth)) = stack.pop() {
            let indent = "  ".repeat(depth);
            match &self.nodes[id] {
                Node::Split { feature, threshold, left, right, counts } => {
                    let _ = writeln!(
                        out,
                        "{indent}split f{feature} <= {threshold:?} [min={} maj={}]",
                        counts.minority, counts.majority
                    );
                    stack.push((*right, depth + 1));
                    stack.push((*left, depth + 1));
                }
                Node::Leaf { counts } => {
                    let _ = writeln!(out, "{indent}leaf [min={} maj={}]", counts.minority, counts.majority);
                }
            }
        }
        out
    }
}
