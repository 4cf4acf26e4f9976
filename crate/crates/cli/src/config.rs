//! Flat `key = value` run configuration.
//!
//! Lines are `key = value`; `#` starts a comment. Keys are namespaced by
//! prefix (`gen.`, `exp.`, `smote.`, ...). Unknown keys are rejected.

use std::collections::BTreeMap;
use std::str::FromStr;

use skewbench::classify::TreeParams;
use skewbench::datagen::{CenterBox, GenSpec};
use skewbench::eval::{ClassifierSpec, ExperimentSpec, Grid, MethodSpec};
use skewbench::resample::{ClusterSource, ResampleMethod, SparsityScope};
use skewbench::RngSeed;

/// Every accepted key with its default and a short description.
pub const KEYS: &[(&str, &str, &str)] = &[
    ("seed", "0", "master seed (overridden by --seed)"),
    ("gen.n_samples", "400", "total number of points"),
    ("gen.ratio", "1:5", "minority:majority class ratio"),
    ("gen.dims", "2", "number of features"),
    ("gen.minority_subclusters", "3", "minority sub-clusters"),
    ("gen.majority_subclusters", "1", "majority blobs"),
    ("gen.sub_sigma", "1", "std-dev of each minority sub-cluster"),
    ("gen.majority_sigma", "5", "std-dev of each majority blob"),
    ("gen.box_lo", "-10", "lower corner of the center box"),
    ("gen.box_hi", "10", "upper corner of the center box"),
    ("gen.min_center_separation", "4", "minimum distance between centers"),
    ("gen.disturbance_ratio", "0", "fraction of minority moved to the borderline band"),
    ("gen.rare_fraction", "0", "fraction of minority relocated as rare examples"),
    ("gen.safe_fraction", "", "optional; safe + disturbance + rare must equal 1"),
    ("exp.subclusters", "2,3,4,5,6", "grid: minority sub-cluster counts"),
    ("exp.sizes", "600,400,200", "grid: sample sizes"),
    ("exp.ratios", "1:5", "grid: minority:majority ratios"),
    ("exp.disturbances", "0", "grid: disturbance ratios"),
    ("exp.methods", "base,ro,co,ncr", "base, ro, co, smote, ncr, sparsity"),
    ("exp.classifiers", "knn,tree", "knn, tree"),
    ("exp.folds", "5", "stratified folds"),
    ("exp.repeats", "10", "repeats per grid cell"),
    ("knn.k", "3", "neighbors for the k-NN classifier"),
    ("tree.max_depth", "12", "decision tree depth limit"),
    ("tree.min_leaf", "2", "minimum rows per leaf"),
    ("smote.k", "5", "SMOTE neighbors"),
    ("smote.amount", "100", "SMOTE amount in percent (multiple of 100)"),
    ("ncr.k", "3", "NCR neighbors"),
    ("sparsity.alpha", "1.5", "spread factor (>= 1)"),
    ("sparsity.scope", "minority", "minority or both"),
    ("clusters.source", "groundtruth", "groundtruth or meanshift (CO and sparsity)"),
    ("clusters.quantile", "0.3", "MeanShift bandwidth quantile"),
];

pub const METHOD_NAMES: &[&str] = &["base", "ro", "co", "smote", "ncr", "sparsity"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

type Result<T> = std::result::Result<T, ConfigError>;

fn err<T>(msg: impl Into<String>) -> Result<T> {
    Err(ConfigError(msg.into()))
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    values: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return err(format!("config line {}: expected `key = value`", n + 1));
            };
            cfg.set(k.trim(), v.trim())
                .map_err(|e| ConfigError(format!("config line {}: {e}", n + 1)))?;
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        if !KEYS.iter().any(|(k, _, _)| *k == key) {
            return err(format!("unknown key `{key}`"));
        }
        self.values.insert(key.to_string(), value.to_string());
        Ok(())
    }

    /// Apply a `key=value` override.
    pub fn apply_override(&mut self, assignment: &str) -> Result<()> {
        match assignment.split_once('=') {
            Some((k, v)) => self.set(k.trim(), v.trim()),
            None => err(format!("override `{assignment}` is not key=value")),
        }
    }

    fn raw(&self, key: &str) -> &str {
        if let Some(v) = self.values.get(key) {
            return v;
        }
        KEYS.iter().find(|(k, _, _)| *k == key).map(|(_, d, _)| *d).expect("known key")
    }

    pub fn value<T: FromStr>(&self, key: &str) -> Result<T> {
        let raw = self.raw(key);
        raw.parse().or_else(|_| err(format!("invalid value `{raw}` for {key}")))
    }

    fn list<T: FromStr>(&self, key: &str) -> Result<Vec<T>> {
        self.raw(key)
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse().or_else(|_| err(format!("invalid list item `{s}` for {key}"))))
            .collect()
    }

    pub fn seed(&self) -> Result<RngSeed> {
        self.value::<u64>("seed").map(RngSeed)
    }

    pub fn set_seed(&mut self, seed: u64) {
        self.values.insert("seed".into(), seed.to_string());
    }

    pub fn gen_spec(&self) -> Result<GenSpec> {
        let safe = self.raw("gen.safe_fraction");
        let spec = GenSpec {
            n_samples: self.value("gen.n_samples")?,
            class_ratio: parse_ratio(self.raw("gen.ratio"))?,
            dims: self.value("gen.dims")?,
            minority_subclusters: self.value("gen.minority_subclusters")?,
            majority_subclusters: self.value("gen.majority_subclusters")?,
            sub_sigma: self.value("gen.sub_sigma")?,
            majority_sigma: self.value("gen.majority_sigma")?,
            center_box: CenterBox { lo: self.value("gen.box_lo")?, hi: self.value("gen.box_hi")? },
            min_center_separation: self.value("gen.min_center_separation")?,
            disturbance_ratio: self.value("gen.disturbance_ratio")?,
            rare_fraction: self.value("gen.rare_fraction")?,
            safe_fraction: if safe.is_empty() { None } else { Some(self.value("gen.safe_fraction")?) },
            seed: self.seed()?,
        };
        spec.validate().map_err(|e| ConfigError(e.to_string()))?;
        Ok(spec)
    }

    fn cluster_source(&self) -> Result<ClusterSource> {
        match self.raw("clusters.source") {
            "groundtruth" => Ok(ClusterSource::GroundTruth),
            "meanshift" => Ok(ClusterSource::MeanShift { quantile: self.value("clusters.quantile")? }),
            other => err(format!("clusters.source must be groundtruth or meanshift, got `{other}`")),
        }
    }

    /// Build the method called `name` from the configured parameters.
    pub fn method(&self, name: &str) -> Result<MethodSpec> {
        let m = match name {
            "base" => return Ok(MethodSpec::Base),
            "ro" => ResampleMethod::RandomOversample,
            "co" => ResampleMethod::ClusterOversample { clusters: self.cluster_source()? },
            "smote" => ResampleMethod::Smote { k: self.value("smote.k")?, amount_pct: self.value("smote.amount")? },
            "ncr" => ResampleMethod::Ncr { k: self.value("ncr.k")? },
            "sparsity" => ResampleMethod::Sparsity {
                alpha: self.value("sparsity.alpha")?,
                scope: match self.raw("sparsity.scope") {
                    "minority" => SparsityScope::MinorityOnly,
                    "both" => SparsityScope::BothClasses,
                    other => return err(format!("sparsity.scope must be minority or both, got `{other}`")),
                },
                clusters: self.cluster_source()?,
            },
            other => {
                return err(format!("unknown method `{other}`; valid methods: {}", METHOD_NAMES.join(", ")))
            }
        };
        m.validate().map_err(|e| ConfigError(e.to_string()))?;
        Ok(MethodSpec::Resample(m))
    }

    pub fn classifier(&self, name: &str) -> Result<ClassifierSpec> {
        match name {
            "knn" => Ok(ClassifierSpec::Knn { k: self.value("knn.k")? }),
            "tree" => Ok(ClassifierSpec::Tree(TreeParams {
                max_depth: self.value("tree.max_depth")?,
                min_leaf: self.value("tree.min_leaf")?,
            })),
            other => err(format!("unknown classifier `{other}`; valid classifiers: knn, tree")),
        }
    }

    pub fn methods(&self) -> Result<Vec<MethodSpec>> {
        self.list::<String>("exp.methods")?.iter().map(|m| self.method(m)).collect()
    }

    pub fn classifiers(&self) -> Result<Vec<ClassifierSpec>> {
        self.list::<String>("exp.classifiers")?.iter().map(|c| self.classifier(c)).collect()
    }

    pub fn folds(&self) -> Result<usize> {
        self.value("exp.folds")
    }

    pub fn experiment(&self) -> Result<ExperimentSpec> {
        // The grid overrides size, ratio, sub-clusters and disturbance, so
        // validate the template with those at their own defaults.
        let template = GenSpec {
            n_samples: self.value("gen.n_samples")?,
            class_ratio: parse_ratio(self.raw("gen.ratio"))?,
            dims: self.value("gen.dims")?,
            minority_subclusters: self.value("gen.minority_subclusters")?,
            majority_subclusters: self.value("gen.majority_subclusters")?,
            sub_sigma: self.value("gen.sub_sigma")?,
            majority_sigma: self.value("gen.majority_sigma")?,
            center_box: CenterBox { lo: self.value("gen.box_lo")?, hi: self.value("gen.box_hi")? },
            min_center_separation: self.value("gen.min_center_separation")?,
            disturbance_ratio: 0.0,
            rare_fraction: self.value("gen.rare_fraction")?,
            safe_fraction: None,
            seed: self.seed()?,
        };
        let ratios = self
            .raw("exp.ratios")
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(parse_ratio)
            .collect::<Result<Vec<_>>>()?;
        let spec = ExperimentSpec {
            template,
            grid: Grid {
                minority_subclusters: self.list("exp.subclusters")?,
                sizes: self.list("exp.sizes")?,
                ratios,
                disturbances: self.list("exp.disturbances")?,
            },
            methods: self.methods()?,
            classifiers: self.classifiers()?,
            folds: self.value("exp.folds")?,
            repeats: self.value("exp.repeats")?,
            seed: self.seed()?,
        };
        spec.validate().map_err(|e| ConfigError(e.to_string()))?;
        for cell in spec.cells() {
            spec.gen_spec(&cell, 0)
                .validate()
                .map_err(|e| ConfigError(format!("grid cell {}: {e}", cell.index)))?;
        }
        Ok(spec)
    }
}

/// `"minority:majority"` to `(majority_parts, minority_parts)`.
pub fn parse_ratio(s: &str) -> Result<(usize, usize)> {
    let parsed = s
        .split_once(':')
        .and_then(|(a, b)| Some((a.trim().parse::<usize>().ok()?, b.trim().parse::<usize>().ok()?)));
    match parsed {
        Some((min, maj)) if min > 0 && maj > 0 => Ok((maj, min)),
        _ => err(format!("ratio `{s}` must look like 1:5 (minority:majority)")),
    }
}

/// Defaults block for `--help`.
pub fn defaults_help() -> String {
    let mut out = String::from("Configuration keys (key = value, '#' comments):\n");
    for (k, d, desc) in KEYS {
        let shown = if d.is_empty() { "(unset)" } else { d };
        out.push_str(&format!("  {k:<28} {shown:<14} {desc}\n"));
    }
    out.push_str("\nEnvironment:\n  SKEWBENCH_THREADS            worker threads (0 or unset = automatic)\n");
    out
}
