//! Metrics, stratified cross-validation and the experiment runner.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;

use rand::seq::SliceRandom;
use rayon::prelude::*;

use crate::classify::{KnnModel, Prediction, TreeModel, TreeParams};
use crate::data::{summarize_labels, ClassRoles, Dataset, Label};
use crate::datagen::{generate_imbalanced, GenSpec, GroundTruth};
use crate::error::{invalid, Error, Result};
use crate::io::format_float;
use crate::resample::{resample, ResampleMethod};
use crate::rng::RngSeed;

/// Confusion counts with the minority class as "positive".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConfusionMatrix {
    pub tp: usize,
    pub fn_: usize,
    pub tn: usize,
    pub fp: usize,
}

impl ConfusionMatrix {
    pub fn total(&self) -> usize {
        self.tp + self.fn_ + self.tn + self.fp
    }
}

pub fn confusion(truth: &[Label], pred: &[Label], minority: Label) -> Result<ConfusionMatrix> {
    if truth.len() != pred.len() {
        return Err(Error::DimensionMismatch { expected: truth.len(), found: pred.len() });
    }
    let mut cm = ConfusionMatrix::default();
    for (&t, &p) in truth.iter().zip(pred) {
        match (t == minority, p == minority) {
            (true, true) => cm.tp += 1,
            (true, false) => cm.fn_ += 1,
            (false, false) => cm.tn += 1,
            (false, true) => cm.fp += 1,
        }
    }
    Ok(cm)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateMetrics {
    pub sensitivity: f64,
    pub specificity: f64,
    pub accuracy: f64,
    pub gmean: f64,
}

pub fn metrics_from(cm: &ConfusionMatrix) -> Result<RateMetrics> {
    if cm.tp + cm.fn_ == 0 || cm.tn + cm.fp == 0 {
        return Err(Error::FoldLacksClass);
    }
    let sensitivity = cm.tp as f64 / (cm.tp + cm.fn_) as f64;
    let specificity = cm.tn as f64 / (cm.tn + cm.fp) as f64;
    Ok(RateMetrics {
        sensitivity,
        specificity,
        accuracy: (cm.tp + cm.tn) as f64 / cm.total() as f64,
        gmean: gmean(sensitivity, specificity),
    })
}

pub fn gmean(sensitivity: f64, specificity: f64) -> f64 {
    (sensitivity * specificity).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    pub sensitivity: f64,
    pub specificity: f64,
    pub accuracy: f64,
    pub gmean: f64,
    pub auc: f64,
}

pub const METRIC_NAMES: [&str; 5] = ["sensitivity", "specificity", "accuracy", "gmean", "auc"];

impl Metrics {
    pub fn new(rates: RateMetrics, auc: f64) -> Self {
        Metrics {
            sensitivity: rates.sensitivity,
            specificity: rates.specificity,
            accuracy: rates.accuracy,
            gmean: rates.gmean,
            auc,
        }
    }

    pub fn values(&self) -> [f64; 5] {
        [self.sensitivity, self.specificity, self.accuracy, self.gmean, self.auc]
    }

    fn from_values(v: [f64; 5]) -> Self {
        Metrics { sensitivity: v[0], specificity: v[1], accuracy: v[2], gmean: v[3], auc: v[4] }
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        METRIC_NAMES.iter().position(|&m| m == name).map(|i| self.values()[i])
    }
}

/// Area under the ROC curve from the Mann–Whitney rank statistic; tied
/// scores take their average rank, i.e. count one half per tied pair.
pub fn auc(scores: &[f64], truth: &[Label], minority: Label) -> Result<f64> {
    if scores.len() != truth.len() {
        return Err(Error::DimensionMismatch { expected: truth.len(), found: scores.len() });
    }
    let n_pos = truth.iter().filter(|&&t| t == minority).count();
    let n_neg = truth.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::DegenerateClasses("AUC needs both classes".into()));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let mut rank_sum = 0.0;
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && scores[order[end]] == scores[order[start]] {
            end += 1;
        }
        // Ranks start..end (1-based: start+1 ..= end) share their mean.
        let mean_rank = (start + 1 + end) as f64 / 2.0;
        let positives = order[start..end].iter().filter(|&&i| truth[i] == minority).count();
        rank_sum += mean_rank * positives as f64;
        start = end;
    }
    let u = rank_sum - (n_pos * (n_pos + 1)) as f64 / 2.0;
    Ok(u / (n_pos as f64 * n_neg as f64))
}

/// Fold index per row. Each class (ascending label) is shuffled and dealt
/// round-robin, continuing from where the previous class stopped, so every
/// class's fold sizes differ by at most one.
pub fn stratified_kfold(labels: &[Label], folds: usize, seed: RngSeed) -> Result<Vec<usize>> {
    if folds < 2 {
        return Err(invalid(format!("need at least 2 folds, got {folds}")));
    }
    let summary = summarize_labels(labels)?;
    if let Some((label, &count)) = summary.counts.iter().find(|(_, &c)| c < folds) {
        return Err(invalid(format!(
            "class {label} has {count} rows, fewer than the {folds} folds"
        )));
    }
    let mut rng = seed.stream();
    let mut assignment = vec![0; labels.len()];
    let mut offset = 0;
    for &label in summary.counts.keys() {
        let mut rows: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == label).collect();
        rows.shuffle(&mut rng);
        for (pos, &i) in rows.iter().enumerate() {
            assignment[i] = (offset + pos) % folds;
        }
        offset = (offset + rows.len()) % folds;
    }
    Ok(assignment)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MethodSpec {
    /// No pre-processing.
    Base,
    Resample(ResampleMethod),
}

impl MethodSpec {
    pub fn name(&self) -> String {
        match self {
            MethodSpec::Base => "base".into(),
            MethodSpec::Resample(m) => m.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassifierSpec {
    Knn { k: usize },
    Tree(TreeParams),
}

impl ClassifierSpec {
    pub fn name(&self) -> String {
        match self {
            ClassifierSpec::Knn { k } => format!("knn-k{k}"),
            ClassifierSpec::Tree(p) => format!("tree-d{}-l{}", p.max_depth, p.min_leaf),
        }
    }
}

enum Fitted {
    Knn(KnnModel),
    Tree(TreeModel),
}

impl Fitted {
    fn fit(spec: &ClassifierSpec, train: &Dataset, roles: ClassRoles) -> Result<Self> {
        Ok(match *spec {
            ClassifierSpec::Knn { k } => Fitted::Knn(KnnModel::fit(train.clone(), k, roles)?),
            ClassifierSpec::Tree(p) => Fitted::Tree(TreeModel::fit(train, roles, p)?),
        })
    }

    fn predict(&self, q: &[f64]) -> Result<Prediction> {
        match self {
            Fitted::Knn(m) => m.predict(q),
            Fitted::Tree(m) => m.predict(q),
        }
    }
}

/// Fit `classifier` on `train` and score it on `test`.
pub fn evaluate(classifier: &ClassifierSpec, train: &Dataset, test: &Dataset, roles: ClassRoles) -> Result<Metrics> {
    let model = Fitted::fit(classifier, train, roles)?;
    let predictions: Vec<Prediction> = test.rows().map(|q| model.predict(q)).collect::<Result<_>>()?;
    let pred: Vec<Label> = predictions.iter().map(|p| p.label).collect();
    let scores: Vec<f64> = predictions.iter().map(|p| p.score).collect();
    let cm = confusion(test.labels(), &pred, roles.minority)?;
    let rates = metrics_from(&cm)?;
    Ok(Metrics::new(rates, auc(&scores, test.labels(), roles.minority)?))
}

/// Training and test sets of one fold, the training side already resampled.
#[derive(Debug, Clone)]
pub struct FoldData {
    pub train_indices: Vec<usize>,
    pub test_indices: Vec<usize>,
    pub train: Dataset,
    pub test: Dataset,
}

/// Renumber minority cluster ids to `0..K` in order of first appearance
/// among minority rows, dropping ids with no rows.
fn compact_clusters(assignment: &[usize], labels: &[Label], minority: Label) -> Vec<usize> {
    let mut map: BTreeMap<usize, usize> = BTreeMap::new();
    let mut seen = Vec::new();
    for (&a, &l) in assignment.iter().zip(labels) {
        if l == minority && !map.contains_key(&a) {
            seen.push(a);
            map.insert(a, 0);
        }
    }
    seen.sort_unstable();
    for (new, old) in seen.iter().enumerate() {
        map.insert(*old, new);
    }
    assignment
        .iter()
        .zip(labels)
        .map(|(a, &l)| if l == minority { map[a] } else { *a })
        .collect()
}

/// Split `ds` by `folds[i] == fold` and resample only the training part.
pub fn prepare_fold(
    ds: &Dataset,
    gt: Option<&GroundTruth>,
    folds: &[usize],
    fold: usize,
    method: &MethodSpec,
    roles: ClassRoles,
    seed: RngSeed,
) -> Result<FoldData> {
    let (test_indices, train_indices): (Vec<usize>, Vec<usize>) = (0..ds.len()).partition(|&i| folds[i] == fold);
    let test = ds.select(&test_indices);
    let base = ds.select(&train_indices);
    let train = match method {
        MethodSpec::Base => base,
        MethodSpec::Resample(m) => {
            let assignment = match (m.needs_assignment(), gt) {
                (true, Some(gt)) => Some(compact_clusters(
                    &gt.restrict(&train_indices).subcluster_assignment,
                    base.labels(),
                    roles.minority,
                )),
                _ => None,
            };
            resample(&base, m, assignment.as_deref(), &mut seed.stream())?
        }
    };
    Ok(FoldData { train_indices, test_indices, train, test })
}

/// Cross-validated metrics of every `(method, classifier)` pair on one
/// dataset. The outer vector follows `methods`, the inner `classifiers`;
/// each entry holds one `Metrics` per fold.
pub fn cross_validate(
    ds: &Dataset,
    gt: Option<&GroundTruth>,
    methods: &[MethodSpec],
    classifiers: &[ClassifierSpec],
    folds: usize,
    seed: RngSeed,
) -> Result<Vec<Vec<Result<Vec<Metrics>>>>> {
    let roles = ClassRoles::infer(ds)?;
    let assignment = stratified_kfold(ds.labels(), folds, seed.child("folds", 0))?;
    let mut out = Vec::with_capacity(methods.len());
    for (mi, method) in methods.iter().enumerate() {
        let mut per_classifier: Vec<Result<Vec<Metrics>>> = classifiers.iter().map(|_| Ok(Vec::new())).collect();
        for fold in 0..folds {
            let stream = seed.child("resample", (mi * folds + fold) as u64);
            match prepare_fold(ds, gt, &assignment, fold, method, roles, stream) {
                Ok(data) => {
                    for (slot, c) in per_classifier.iter_mut().zip(classifiers) {
                        if let Ok(list) = slot {
                            match evaluate(c, &data.train, &data.test, roles) {
                                Ok(m) => list.push(m),
                                Err(e) => *slot = Err(e),
                            }
                        }
                    }
                }
                Err(e) => {
                    let msg = e.to_string();
                    for slot in per_classifier.iter_mut() {
                        if slot.is_ok() {
                            *slot = Err(Error::InvalidData(msg.clone()));
                        }
                    }
                }
            }
        }
        out.push(per_classifier);
    }
    Ok(out)
}

/// Generator axes; every combination is one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub minority_subclusters: Vec<usize>,
    pub sizes: Vec<usize>,
    pub ratios: Vec<(usize, usize)>,
    pub disturbances: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    /// Values for every generator field the grid does not vary.
    pub template: GenSpec,
    pub grid: Grid,
    pub methods: Vec<MethodSpec>,
    pub classifiers: Vec<ClassifierSpec>,
    pub folds: usize,
    pub repeats: usize,
    pub seed: RngSeed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub index: usize,
    pub n_samples: usize,
    pub ratio: (usize, usize),
    pub minority_subclusters: usize,
    pub disturbance: f64,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        let g = &self.grid;
        if g.minority_subclusters.is_empty() || g.sizes.is_empty() || g.ratios.is_empty() || g.disturbances.is_empty() {
            return Err(invalid("every grid axis needs at least one value"));
        }
        if self.methods.is_empty() || self.classifiers.is_empty() {
            return Err(invalid("need at least one method and one classifier"));
        }
        if self.repeats == 0 {
            return Err(invalid("repeats must be at least 1"));
        }
        if self.folds < 2 {
            return Err(invalid("folds must be at least 2"));
        }
        for m in &self.methods {
            if let MethodSpec::Resample(r) = m {
                r.validate()?;
            }
        }
        Ok(())
    }

    /// Cells ordered by ratio, disturbance, sub-clusters, then size.
    pub fn cells(&self) -> Vec<Cell> {
        let g = &self.grid;
        let mut cells = Vec::new();
        for &ratio in &g.ratios {
            for &disturbance in &g.disturbances {
                for &minority_subclusters in &g.minority_subclusters {
                    for &n_samples in &g.sizes {
                        cells.push(Cell { index: cells.len(), n_samples, ratio, minority_subclusters, disturbance });
                    }
                }
            }
        }
        cells
    }

    pub fn gen_spec(&self, cell: &Cell, repeat: usize) -> GenSpec {
        GenSpec {
            n_samples: cell.n_samples,
            class_ratio: cell.ratio,
            minority_subclusters: cell.minority_subclusters,
            disturbance_ratio: cell.disturbance,
            safe_fraction: None,
            seed: self.seed.child("cell", cell.index as u64).child("repeat", repeat as u64),
            ..self.template.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub cell: Cell,
    pub method: String,
    pub classifier: String,
    /// Number of fold evaluations aggregated.
    pub evaluations: usize,
    pub mean: Metrics,
    pub std: Metrics,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub rows: Vec<ReportRow>,
}

fn aggregate(samples: &[Metrics]) -> (Metrics, Metrics) {
    let n = samples.len() as f64;
    let mut mean = [0.0; 5];
    for s in samples {
        for (m, v) in mean.iter_mut().zip(s.values()) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n);
    let mut var = [0.0; 5];
    if samples.len() > 1 {
        for s in samples {
            for ((acc, v), m) in var.iter_mut().zip(s.values()).zip(mean) {
                *acc += (v - m) * (v - m);
            }
        }
        var.iter_mut().for_each(|v| *v = (*v / (n - 1.0)).sqrt());
    }
    (Metrics::from_values(mean), Metrics::from_values(var))
}

type UnitResult = std::result::Result<Vec<Vec<Result<Vec<Metrics>>>>, String>;

/// Run every cell × repeat, cross-validating each `(method, classifier)`.
///
/// Work units run in parallel on the current rayon pool; results are
/// gathered in cell/repeat order so the report does not depend on the
/// schedule. Failures are recorded in the affected rows.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    run_experiment_with_progress(spec, |_, _| {})
}

pub fn run_experiment_with_progress<F>(spec: &ExperimentSpec, progress: F) -> Result<ExperimentReport>
where
    F: Fn(usize, usize) + Sync,
{
    spec.validate()?;
    let cells = spec.cells();
    let units: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|c| (0..spec.repeats).map(move |r| (c, r)))
        .collect();
    let done = std::sync::atomic::AtomicUsize::new(0);
    let results: Vec<UnitResult> = units
        .par_iter()
        .map(|&(c, r)| {
            let gen = spec.gen_spec(&cells[c], r);
            let outcome = generate_imbalanced(&gen)
                .and_then(|(ds, gt)| {
                    cross_validate(&ds, Some(&gt), &spec.methods, &spec.classifiers, spec.folds, gen.seed.child("cv", 0))
                })
                .map_err(|e| e.to_string());
            let finished = done.fetch_add(1, std::sync::atomic::Ordering::Relaxed) + 1;
            progress(finished, units.len());
            outcome
        })
        .collect();

    let mut rows = Vec::new();
    for (ci, cell) in cells.iter().enumerate() {
        let unit_results = &results[ci * spec.repeats..(ci + 1) * spec.repeats];
        for (mi, method) in spec.methods.iter().enumerate() {
            for (ki, classifier) in spec.classifiers.iter().enumerate() {
                let mut samples = Vec::new();
                let mut error = None;
                for unit in unit_results {
                    match unit {
                        Err(msg) => error = error.or_else(|| Some(msg.clone())),
                        Ok(per_method) => match &per_method[mi][ki] {
                            Ok(list) => samples.extend_from_slice(list),
                            Err(e) => error = error.or_else(|| Some(e.to_string())),
                        },
                    }
                }
                let (mean, std) = if error.is_none() && !samples.is_empty() {
                    aggregate(&samples)
                } else {
                    let nan = Metrics::from_values([f64::NAN; 5]);
                    (nan, nan)
                };
                rows.push(ReportRow {
                    cell: *cell,
                    method: method.name(),
                    classifier: classifier.name(),
                    evaluations: samples.len(),
                    mean,
                    std,
                    error,
                });
            }
        }
    }
    Ok(ExperimentReport { rows })
}

impl ExperimentReport {
    pub fn error_count(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some()).count()
    }

    pub fn find(&self, cell: usize, method: &str, classifier: &str) -> Option<&ReportRow> {
        self.rows
            .iter()
            .find(|r| r.cell.index == cell && r.method == method && r.classifier == classifier)
    }

    pub fn csv_header() -> String {
        let mut cols: Vec<String> = [
            "cell",
            "n_samples",
            "majority_parts",
            "minority_parts",
            "minority_subclusters",
            "disturbance",
            "method",
            "classifier",
            "evaluations",
            "status",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        for m in METRIC_NAMES {
            cols.push(format!("{m}_mean"));
            cols.push(format!("{m}_std"));
        }
        cols.join(",")
    }

    /// One row per (cell, method, classifier); metric columns stay empty on
    /// error rows.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{}", Self::csv_header())?;
        for r in &self.rows {
            let status = match &r.error {
                None => "ok".to_string(),
                Some(e) => format!("error: {}", e.replace([',', '\n', '\r'], ";")),
            };
            let mut line = format!(
                "{},{},{},{},{},{},{},{},{},{}",
                r.cell.index,
                r.cell.n_samples,
                r.cell.ratio.0,
                r.cell.ratio.1,
                r.cell.minority_subclusters,
                format_float(r.cell.disturbance),
                r.method,
                r.classifier,
                r.evaluations,
                status
            );
            for (m, s) in r.mean.values().iter().zip(r.std.values()) {
                if r.error.is_some() {
                    line.push_str(",,");
                } else {
                    let _ = write!(line, ",{},{}", format_float(*m), format_float(s));
                }
            }
            writeln!(out, "{line}")?;
        }
        out.flush()?;
        Ok(())
    }

    /// Mean of `metric` laid out with sub-cluster counts as rows and sample
    /// sizes as columns, one block per ratio, disturbance, method and
    /// classifier.
    pub fn pivot(&self, metric: &str) -> Result<String> {
        let idx = METRIC_NAMES
            .iter()
            .position(|&m| m == metric)
            .ok_or_else(|| invalid(format!("unknown metric `{metric}`")))?;
        let mut blocks: Vec<((usize, usize), u64, String, String)> = Vec::new();
        for r in &self.rows {
            let key = (r.cell.ratio, r.cell.disturbance.to_bits(), r.method.clone(), r.classifier.clone());
            if !blocks.contains(&key) {
                blocks.push(key);
            }
        }
        let mut out = String::new();
        for (ratio, dist_bits, method, classifier) in blocks {
            let disturbance = f64::from_bits(dist_bits);
            let rows: Vec<&ReportRow> = self
                .rows
                .iter()
                .filter(|r| {
                    r.cell.ratio == ratio
                        && r.cell.disturbance.to_bits() == dist_bits
                        && r.method == method
                        && r.classifier == classifier
                })
                .collect();
            let mut subclusters: Vec<usize> = rows.iter().map(|r| r.cell.minority_subclusters).collect();
            subclusters.dedup();
            let mut sizes: Vec<usize> = Vec::new();
            for r in &rows {
                if !sizes.contains(&r.cell.n_samples) {
                    sizes.push(r.cell.n_samples);
                }
            }
            let _ = writeln!(
                out,
                "{metric} | ratio {}:{} | disturbance {} | method {method} | classifier {classifier}",
                ratio.1, ratio.0, disturbance
            );
            let _ = write!(out, "{:>12}", "subclusters");
            for s in &sizes {
                let _ = write!(out, " {:>8}", s);
            }
            out.push('\n');
            for k in &subclusters {
                let _ = write!(out, "{:>12}", k);
                for s in &sizes {
                    let cell = rows
                        .iter()
                        .find(|r| r.cell.minority_subclusters == *k && r.cell.n_samples == *s);
                    let text = match cell {
                        Some(r) if r.error.is_none() => format!("{:.3}", r.mean.values()[idx]),
                        Some(_) => "error".to_string(),
                        None => "-".to_string(),
                    };
                    let _ = write!(out, " {:>8}", text);
                }
                out.push('\n');
            }
            out.push('\n');
        }
        Ok(out)
    }
}
