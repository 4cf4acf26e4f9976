//! Command implementations behind the `skewbench` binary.

pub mod config;
pub mod plot;

use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use skewbench::datagen::{generate_imbalanced, GroundTruth};
use skewbench::eval::{cross_validate, run_experiment_with_progress, MethodSpec, METRIC_NAMES};
use skewbench::io::{read_csv, write_csv};
use skewbench::neighbors::euclidean;
use skewbench::resample::{resample, ClusterSource, ResampleMethod};
use skewbench::{characteristics, summarize, Dataset, ExampleKind, Label};

use config::{ConfigError, RunConfig};
use plot::{render_svg, PlotOptions};

pub const THREADS_ENV: &str = "SKEWBENCH_THREADS";

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or configuration; exit code 2.
    Usage(String),
    /// I/O, data or algorithm failure; exit code 1.
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => f.write_str(m),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Usage(e.0)
    }
}

impl From<skewbench::Error> for CliError {
    fn from(e: skewbench::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Load the config file (if any), apply `key=value` overrides and the seed.
pub fn load_config(path: Option<&Path>, overrides: &[String], seed: Option<u64>) -> CliResult<RunConfig> {
    let mut cfg = match path {
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", p.display())))?;
            RunConfig::parse(&text)?
        }
        None => RunConfig::default(),
    };
    for o in overrides {
        cfg.apply_override(o)?;
    }
    if let Some(s) = seed {
        cfg.set_seed(s);
    }
    Ok(cfg)
}

/// Worker count from `SKEWBENCH_THREADS`; `None` means automatic.
pub fn thread_limit() -> CliResult<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) if v.trim().is_empty() => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(0) => Ok(None),
            Ok(n) => Ok(Some(n)),
            Err(_) => Err(CliError::Usage(format!("{THREADS_ENV} must be a non-negative integer, got `{v}`"))),
        },
    }
}

fn require_out(out: Option<&Path>, what: &str) -> CliResult<PathBuf> {
    out.map(Path::to_path_buf)
        .ok_or_else(|| CliError::Usage(format!("--out is required for {what}")))
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", path.display())))
}

pub fn read_dataset(path: &Path) -> CliResult<Dataset> {
    let file = File::open(path).map_err(|e| CliError::Runtime(format!("cannot open {}: {e}", path.display())))?;
    read_csv(BufReader::new(file)).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))
}

/// `<stem>.centers.csv` next to `path`.
pub fn centers_path(path: &Path) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}.centers.csv"))
}

/// Centers sidecar rows as `(label, center)`.
pub fn read_centers(path: &Path) -> CliResult<Vec<(Label, Vec<f64>)>> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Runtime(format!("cannot open {}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        let bad = || CliError::Runtime(format!("{}: line {}: malformed center row", path.display(), n + 1));
        if cols.len() < 3 {
            return Err(bad());
        }
        let d = cols.len() - 2;
        let coords = cols[..d].iter().map(|c| c.parse::<f64>()).collect::<Result<Vec<_>, _>>().map_err(|_| bad())?;
        let label = cols[d].parse::<Label>().map_err(|_| bad())?;
        out.push((label, coords));
    }
    Ok(out)
}

/// Ground truth rebuilt from a centers sidecar: each row joins the nearest
/// center carrying its own label.
pub fn ground_truth_from_centers(ds: &Dataset, centers: &[(Label, Vec<f64>)]) -> CliResult<GroundTruth> {
    let minority = summarize(ds)?.minority_label;
    let mut assignment = Vec::with_capacity(ds.len());
    let mut minority_centers = Vec::new();
    let mut majority_centers = Vec::new();
    for (l, c) in centers {
        if *l == minority {
            minority_centers.push(c.clone());
        } else {
            majority_centers.push(c.clone());
        }
    }
    for i in 0..ds.len() {
        let own: Vec<&Vec<f64>> = centers.iter().filter(|(l, _)| *l == ds.label(i)).map(|(_, c)| c).collect();
        let mut best: Option<(f64, usize)> = None;
        for (j, c) in own.iter().enumerate() {
            let d = euclidean(ds.point(i), c)?;
            if best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, j));
            }
        }
        match best {
            Some((_, j)) => assignment.push(j),
            None => {
                return Err(CliError::Runtime(format!("centers file has no center for label {}", ds.label(i))))
            }
        }
    }
    let kinds = (0..ds.len())
        .map(|i| {
            ds.kind(i).unwrap_or(if ds.label(i) == minority { ExampleKind::Safe } else { ExampleKind::Majority })
        })
        .collect();
    Ok(GroundTruth { minority_centers, majority_centers, subcluster_assignment: assignment, kinds })
}

/// Without ground truth, cluster-reading methods fall back to MeanShift.
fn without_ground_truth(method: MethodSpec, quantile: f64) -> MethodSpec {
    match method {
        MethodSpec::Resample(ResampleMethod::ClusterOversample { clusters: ClusterSource::GroundTruth }) => {
            MethodSpec::Resample(ResampleMethod::ClusterOversample { clusters: ClusterSource::MeanShift { quantile } })
        }
        MethodSpec::Resample(ResampleMethod::Sparsity { alpha, scope, clusters: ClusterSource::GroundTruth }) => {
            MethodSpec::Resample(ResampleMethod::Sparsity { alpha, scope, clusters: ClusterSource::MeanShift { quantile } })
        }
        other => other,
    }
}

fn quantile(cfg: &RunConfig) -> CliResult<f64> {
    cfg.value::<f64>("clusters.quantile").map_err(Into::into)
}

fn load_ground_truth(ds: &Dataset, centers: Option<&Path>) -> CliResult<Option<GroundTruth>> {
    centers.map(|p| ground_truth_from_centers(ds, &read_centers(p)?)).transpose()
}

/// Generate a dataset and its centers sidecar. Returns the text printed to
/// stdout.
pub fn cmd_generate(cfg: &RunConfig, out: Option<&Path>) -> CliResult<String> {
    let spec = cfg.gen_spec()?;
    let out = require_out(out, "generate")?;
    let (ds, gt) = generate_imbalanced(&spec)?;
    let mut w = create(&out)?;
    write_csv(&ds, &mut w)?;
    w.flush()?;
    let mut w = create(&centers_path(&out))?;
    gt.write_centers_csv(&mut w)?;
    w.flush()?;

    let s = summarize(&ds)?;
    let mut text = format!(
        "{} / {}, IR {:.1}\n",
        s.majority_count(),
        s.minority_count(),
        s.imbalance_ratio
    );
    text.push_str(&characteristics(&ds)?);
    Ok(text)
}

pub fn cmd_resample(
    cfg: &RunConfig,
    input: &Path,
    method: &str,
    centers: Option<&Path>,
    out: Option<&Path>,
) -> CliResult<String> {
    let mut spec = cfg.method(method)?;
    let out = require_out(out, "resample")?;
    let ds = read_dataset(input)?;
    let gt = load_ground_truth(&ds, centers)?;
    if gt.is_none() {
        spec = without_ground_truth(spec, quantile(cfg)?);
    }
    let result = match spec {
        MethodSpec::Base => ds.clone(),
        MethodSpec::Resample(m) => {
            let mut rng = cfg.seed()?.child("resample", 0).stream();
            let assignment = gt.as_ref().map(|g| g.subcluster_assignment.as_slice());
            resample(&ds, &m, assignment, &mut rng)?
        }
    };
    let mut w = create(&out)?;
    write_csv(&result, &mut w)?;
    w.flush()?;
    Ok(format!(
        "Before ({}):\n{}\nAfter ({}):\n{}",
        input.display(),
        characteristics(&ds)?,
        spec.name(),
        characteristics(&result)?
    ))
}

pub fn cmd_eval(cfg: &RunConfig, input: &Path, centers: Option<&Path>, out: Option<&Path>) -> CliResult<String> {
    let mut methods = cfg.methods()?;
    let classifiers = cfg.classifiers()?;
    let folds = cfg.folds()?;
    let ds = read_dataset(input)?;
    let gt = load_ground_truth(&ds, centers)?;
    if gt.is_none() {
        let q = quantile(cfg)?;
        methods = methods.into_iter().map(|m| without_ground_truth(m, q)).collect();
    }
    let results = cross_validate(&ds, gt.as_ref(), &methods, &classifiers, folds, cfg.seed()?.child("cv", 0))?;

    let mut text = format!("{:<24} {:<14}", "method", "classifier");
    for m in METRIC_NAMES {
        let _ = write!(text, " {:>11}", m);
    }
    text.push('\n');
    for (method, per_classifier) in methods.iter().zip(&results) {
        for (classifier, res) in classifiers.iter().zip(per_classifier) {
            let _ = write!(text, "{:<24} {:<14}", method.name(), classifier.name());
            match res {
                Ok(folds) => {
                    let n = folds.len() as f64;
                    for j in 0..METRIC_NAMES.len() {
                        let mean = folds.iter().map(|m| m.values()[j]).sum::<f64>() / n;
                        let _ = write!(text, " {:>11.4}", mean);
                    }
                }
                Err(e) => {
                    let _ = write!(text, " error: {e}");
                }
            }
            text.push('\n');
        }
    }
    if let Some(path) = out {
        let mut w = create(path)?;
        w.write_all(text.as_bytes())?;
        w.flush()?;
    }
    Ok(text)
}

/// Run the configured grid, writing `report.csv` and one
/// `pivot_<metric>.txt` per metric into `out`.
pub fn cmd_experiment(cfg: &RunConfig, out: Option<&Path>, quiet: bool) -> CliResult<String> {
    let spec = cfg.experiment()?;
    let dir = require_out(out, "experiment")?;
    fs::create_dir_all(&dir)?;
    let report = run_experiment_with_progress(&spec, |done, total| {
        if !quiet {
            eprintln!("progress: {done}/{total} units");
        }
    })?;
    let mut w = create(&dir.join("report.csv"))?;
    report.write_csv(&mut w)?;
    w.flush()?;
    for metric in METRIC_NAMES {
        let mut w = create(&dir.join(format!("pivot_{metric}.txt")))?;
        w.write_all(report.pivot(metric)?.as_bytes())?;
        w.flush()?;
    }
    let errors = report.error_count();
    if errors > 0 {
        eprintln!("warning: {errors} report rows recorded errors");
    }
    Ok(format!(
        "{} rows written to {} ({} warnings)\n",
        report.rows.len(),
        dir.display(),
        errors
    ))
}

pub fn cmd_plot(input: &Path, out: Option<&Path>, opts: &PlotOptions) -> CliResult<String> {
    let out = require_out(out, "plot")?;
    let ds = read_dataset(input)?;
    let svg = render_svg(&ds, opts)?;
    let mut w = create(&out)?;
    w.write_all(svg.as_bytes())?;
    w.flush()?;
    Ok(format!("wrote {}\n", out.display()))
}
