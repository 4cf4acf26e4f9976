//! Acceptance gate. Each test checks one criterion and prints a single
//! `PASS`/`FAIL` line before asserting. Verdicts go straight to stderr so
//! they show up even when the test harness captures output.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::Rng;

use skewbench::clustering::discover;
use skewbench::datagen::{generate_imbalanced, CenterBox, GenSpec, MINORITY_LABEL};
use skewbench::eval::{auc, gmean, prepare_fold, run_experiment, stratified_kfold, ExperimentReport, MethodSpec};
use skewbench::neighbors::knn_indices;
use skewbench::resample::{ncr_removals, resample, smote, sparsity, ClusterSource, ResampleMethod, SparsityScope};
use skewbench::{summarize, ClassRoles, Dataset, Label, RngSeed, Stream};
use skewbench_cli::config::RunConfig;

fn verdict(id: u32, name: &str, ok: bool, detail: &str) {
    let line = format!("{} [{id}] {name}: {detail}\n", if ok { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().lock().write_all(line.as_bytes());
}

fn shipped_config(name: &str) -> RunConfig {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples").join(name);
    RunConfig::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn single_threaded<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(f)
}

#[test]
fn criterion_1_resampling_bookkeeping() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for seed in 0..10 {
        let spec = GenSpec { n_samples: 400, class_ratio: (79, 21), seed: RngSeed(seed), ..GenSpec::default() };
        let (ds, gt) = generate_imbalanced(&spec).unwrap();
        let s = summarize(&ds).unwrap();
        assert_eq!((s.majority_count(), s.minority_count()), (316, 84));
        let mut rng = RngSeed(seed).child("acceptance", 1).stream();
        for method in [
            ResampleMethod::RandomOversample,
            ResampleMethod::ClusterOversample { clusters: ClusterSource::GroundTruth },
            ResampleMethod::ClusterOversample { clusters: ClusterSource::MeanShift { quantile: 0.3 } },
        ] {
            let out = resample(&ds, &method, Some(&gt.subcluster_assignment), &mut rng).unwrap();
            let o = summarize(&out).unwrap();
            let counts: Vec<usize> = o.counts.values().copied().collect();
            if out.len() != 632 || counts != vec![316, 316] || o.imbalance_ratio != 1.0 {
                failures.push(format!("seed {seed} {method}: {} rows, {counts:?}", out.len()));
            }
        }
        let out = resample(&ds, &ResampleMethod::Ncr { k: 3 }, None, &mut rng).unwrap();
        let minority = out.indices_of(MINORITY_LABEL).len();
        let majority = out.len() - minority;
        let ir = majority as f64 / minority as f64;
        if minority != 84 || out.len() > 400 || ir > 3.77 {
            failures.push(format!("seed {seed} ncr: {} rows, minority {minority}, IR {ir:.3}", out.len()));
        }
    }
    let elapsed = start.elapsed();
    let ok = failures.is_empty() && elapsed < Duration::from_secs(1);
    verdict(
        1,
        "RO/CO 632 rows 316/316 IR 1.0, NCR keeps 84 with IR <= 3.77",
        ok,
        &format!("10 datasets, {} mismatches, {:.3}s", failures.len(), elapsed.as_secs_f64()),
    );
    assert!(ok, "{failures:?} in {elapsed:?}");
}

#[test]
fn criterion_2_subcluster_trend() {
    let spec = shipped_config("table31.cfg").experiment().unwrap();
    assert_eq!(spec.cells().len(), 15);
    assert_eq!((spec.folds, spec.repeats), (5, 10));
    let start = Instant::now();
    let report = single_threaded(|| run_experiment(&spec).unwrap());
    let elapsed = start.elapsed();
    assert_eq!(report.error_count(), 0);

    let mut ok = elapsed < Duration::from_secs(300);
    let mut lines = Vec::new();
    for classifier in ["knn-k3", "tree-d12-l2"] {
        for metric in ["gmean", "accuracy", "auc"] {
            for size in [200, 400, 600] {
                let at = |k: usize| find(&report, k, size, classifier).mean.get(metric).unwrap();
                let (two, six) = (at(2), at(6));
                ok &= six < two;
                lines.push(format!("{classifier} {metric} n={size}: {two:.3} -> {six:.3}"));
            }
        }
    }
    for l in &lines {
        println!("    {l}");
    }
    verdict(
        2,
        "mean G-mean, accuracy and AUC lower at 6 sub-clusters than at 2 in every size column",
        ok,
        &format!("{} comparisons, {:.1}s single-threaded", lines.len(), elapsed.as_secs_f64()),
    );
    assert!(ok);
}

fn find<'a>(report: &'a ExperimentReport, k: usize, size: usize, classifier: &str) -> &'a skewbench::eval::ReportRow {
    report
        .rows
        .iter()
        .find(|r| r.cell.minority_subclusters == k && r.cell.n_samples == size && r.classifier == classifier && r.method == "base")
        .unwrap()
}

#[test]
fn criterion_3_ncr_on_overlapping_data() {
    let spec = shipped_config("overlap.cfg").experiment().unwrap();
    let cell = spec.cells()[0];
    let gen = spec.gen_spec(&cell, 0);
    let comp = gen.composition();
    assert_eq!((gen.n_samples, gen.class_ratio), (800, (7, 1)));
    assert_eq!((comp.safe, comp.borderline, comp.rare), (30, 50, 20));
    assert_eq!(spec.repeats, 20);

    let start = Instant::now();
    let report = run_experiment(&spec).unwrap();
    let elapsed = start.elapsed();
    assert_eq!(report.error_count(), 0);

    let mut ok = elapsed < Duration::from_secs(600);
    for classifier in ["knn-k3", "tree-d12-l2"] {
        let row = |m: &str| report.find(0, m, classifier).unwrap().mean;
        let (base, ro, co, ncr) = (row("base"), row("ro"), row("co"), row("ncr-k3"));
        let checks = [
            ("sens ncr > base", ncr.sensitivity > base.sensitivity),
            ("gmean ncr > base", ncr.gmean > base.gmean),
            ("sens ncr > ro", ncr.sensitivity > ro.sensitivity),
            ("gmean ncr > ro", ncr.gmean > ro.gmean),
            ("sens ncr > co", ncr.sensitivity > co.sensitivity),
            ("gmean ncr > co", ncr.gmean > co.gmean),
            ("spec ncr < base", ncr.specificity < base.specificity),
        ];
        println!(
            "    {classifier}: sens base {:.3} ro {:.3} co {:.3} ncr {:.3} | gmean base {:.3} ro {:.3} co {:.3} ncr {:.3} | spec base {:.3} ncr {:.3}",
            base.sensitivity, ro.sensitivity, co.sensitivity, ncr.sensitivity,
            base.gmean, ro.gmean, co.gmean, ncr.gmean, base.specificity, ncr.specificity
        );
        for (name, pass) in checks {
            if !pass {
                println!("    {classifier}: {name} violated");
            }
            ok &= pass;
        }
    }
    verdict(
        3,
        "NCR beats Base/RO/CO on sensitivity and G-mean, loses specificity to Base (800, 1:7, 30/50/20, 20 seeds)",
        ok,
        &format!("{:.1}s", elapsed.as_secs_f64()),
    );
    assert!(ok);
}

#[test]
fn criterion_4_metric_units() {
    let g = gmean(0.81, 0.64);
    let a = auc(&[0.9, 0.8, 0.7, 0.6], &[1, 0, 1, 0], 1).unwrap();
    let ties = auc(&[0.4; 6], &[1, 0, 1, 0, 0, 0], 1).unwrap();
    let ok = (g - 0.72).abs() <= 1e-12 && (a - 0.75).abs() <= 1e-12 && (ties - 0.5).abs() <= 1e-12;
    verdict(4, "gmean(0.81, 0.64) = 0.72, AUC 0.75, all-ties AUC 0.5", ok, &format!("{g:?} {a:?} {ties:?}"));
    assert!(ok);
}

fn brute_knn(ds: &Dataset, q: &[f64], k: usize, exclude: Option<usize>) -> Vec<usize> {
    let mut all: Vec<(f64, usize)> = (0..ds.len())
        .filter(|&i| Some(i) != exclude)
        .map(|i| (ds.point(i).iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt(), i))
        .collect();
    all.sort_by(|a, b| a.partial_cmp(b).unwrap());
    all.truncate(k);
    all.into_iter().map(|(_, i)| i).collect()
}

fn grid_dataset(rng: &mut Stream, n: usize, dims: usize) -> Dataset {
    let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..dims).map(|_| rng.random_range(0..4) as f64).collect()).collect();
    let mut labels: Vec<Label> = (0..n).map(|_| u32::from(rng.random_bool(0.35))).collect();
    labels[0] = 0;
    labels[1] = 1;
    Dataset::from_rows(&rows, labels).unwrap()
}

#[test]
fn criterion_5_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = RngSeed(5).stream();
    let mut mismatches = 0;
    let mut ties = 0;
    for _ in 0..100 {
        let n = rng.random_range(2..=60);
        let dims = rng.random_range(1..=4);
        let ds = grid_dataset(&mut rng, n, dims);
        let k = rng.random_range(1..=n.min(9));
        let q: Vec<f64> = (0..dims).map(|_| rng.random_range(0..4) as f64).collect();
        let expected = brute_knn(&ds, &q, k, None);
        let all = brute_knn(&ds, &q, n, None);
        if k < n {
            let d = |i: usize| ds.point(i).iter().zip(&q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
            ties += usize::from(d(all[k - 1]) == d(all[k]));
        }
        mismatches += usize::from(knn_indices(&ds, &q, k, None).unwrap() != expected);

        let roles = ClassRoles { minority: 1, majority: 0 };
        let model = skewbench::classify::KnnModel::fit(ds.clone(), k, roles).unwrap();
        let votes = expected.iter().filter(|&&i| ds.label(i) == 1).count();
        mismatches += usize::from(model.predict(&q).unwrap().label != u32::from(2 * votes > k));
    }
    for _ in 0..100 {
        let n = rng.random_range(4..=40);
        let ds = grid_dataset(&mut rng, n, 2);
        let k = rng.random_range(1..n.min(5));
        let minority = summarize(&ds).unwrap().minority_label;
        let mut removed = vec![false; n];
        for i in 0..n {
            let nb = brute_knn(&ds, ds.point(i), k, Some(i));
            let m = nb.iter().filter(|&&j| ds.label(j) == minority).count();
            match (ds.label(i) == minority, 2 * m > k) {
                (true, false) => nb.iter().filter(|&&j| ds.label(j) != minority).for_each(|&j| removed[j] = true),
                (false, true) => removed[i] = true,
                _ => {}
            }
        }
        let expected: Vec<usize> = (0..n).filter(|&i| removed[i]).collect();
        mismatches += usize::from(ncr_removals(&ds, k).unwrap() != expected);
    }
    let elapsed = start.elapsed();
    let ok = mismatches == 0 && ties > 0 && elapsed < Duration::from_secs(30);
    verdict(
        5,
        "k-NN and NCR match brute-force oracles",
        ok,
        &format!("200 instances, {ties} boundary ties, {mismatches} mismatches, {:.2}s", elapsed.as_secs_f64()),
    );
    assert!(ok);
}

#[test]
fn criterion_6_meanshift_recovery() {
    let start = Instant::now();
    let mut per_k = BTreeMap::new();
    for k in 2..=6usize {
        let mut hits = 0;
        for seed in 0..40u64 {
            let spec = GenSpec {
                n_samples: 200 * k,
                class_ratio: (1, 1),
                minority_subclusters: k,
                sub_sigma: 1.0,
                min_center_separation: 8.0,
                center_box: CenterBox { lo: -20.0, hi: 20.0 },
                seed: RngSeed(seed),
                ..GenSpec::default()
            };
            let (ds, _) = generate_imbalanced(&spec).unwrap();
            let pts: Vec<Vec<f64>> = ds.indices_of(MINORITY_LABEL).iter().map(|&i| ds.point(i).to_vec()).collect();
            hits += usize::from(discover(&pts, 0.3).unwrap().n_clusters() == k);
        }
        per_k.insert(k, hits);
    }
    let elapsed = start.elapsed();
    let ok = per_k.values().all(|&h| h * 100 >= 95 * 40) && elapsed < Duration::from_secs(60);
    let detail: Vec<String> = per_k.iter().map(|(k, h)| format!("k={k}: {h}/40")).collect();
    verdict(
        6,
        "MeanShift (quantile 0.3) recovers the sub-cluster count in >= 95% of 40 seeds, k = 2..6",
        ok,
        &format!("{}, {:.1}s", detail.join(", "), elapsed.as_secs_f64()),
    );
    assert!(ok);
}

struct Workspace {
    dir: tempfile::TempDir,
}

impl Workspace {
    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn run(threads: &str, args: &[&str]) {
    let out = Command::new(env!("CARGO_BIN_EXE_skewbench"))
        .args(args)
        .env("SKEWBENCH_THREADS", threads)
        .output()
        .unwrap();
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
}

/// Every seeded command, with all produced files read back.
fn run_all(threads: &str) -> BTreeMap<String, Vec<u8>> {
    let ws = Workspace { dir: tempfile::tempdir().unwrap() };
    let p = |n: &str| ws.path(n).to_string_lossy().into_owned();
    let smoke = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/smoke.cfg");
    let smoke = smoke.to_string_lossy().into_owned();
    let gen = ["--seed", "17", "--set", "gen.rare_fraction=0.1", "--set", "gen.disturbance_ratio=0.3"];
    run(threads, &[&["generate", "--out", &p("d.csv")], &gen[..]].concat());
    for m in ["ro", "co", "smote", "ncr", "sparsity"] {
        let out = p(&format!("r_{m}.csv"));
        run(threads, &["resample", "--seed", "3", "--input", &p("d.csv"), "--method", m, "--centers", &p("d.centers.csv"), "--out", &out]);
        let out = p(&format!("ms_{m}.csv"));
        run(threads, &["resample", "--seed", "3", "--input", &p("d.csv"), "--method", m, "--out", &out]);
    }
    run(threads, &["eval", "--seed", "4", "--input", &p("d.csv"), "--centers", &p("d.centers.csv"), "--out", &p("eval.txt")]);
    run(threads, &["experiment", "--quiet", "--config", &smoke, "--out", &p("exp")]);
    run(threads, &["plot", "--input", &p("d.csv"), "--show-centers", "--show-kinds", "--out", &p("plot.svg")]);

    let mut files = BTreeMap::new();
    let mut stack = vec![ws.dir.path().to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in std::fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(ws.dir.path()).unwrap().to_string_lossy().into_owned();
                files.insert(rel, std::fs::read(&path).unwrap());
            }
        }
    }
    files
}

#[test]
fn criterion_7_determinism() {
    let first = run_all("1");
    let runs = [("1", run_all("1")), ("4", run_all("4")), ("0", run_all("0"))];
    let mut ok = first.len() >= 20;
    for (threads, files) in &runs {
        let same = files == &first;
        if !same {
            let differing: Vec<&String> = first.keys().filter(|k| files.get(*k) != first.get(*k)).collect();
            println!("    threads={threads}: differing {differing:?}");
        }
        ok &= same;
    }
    verdict(
        7,
        "seeded commands are byte-identical across runs and thread counts",
        ok,
        &format!("{} files x 4 runs (threads 1, 1, 4, auto)", first.len()),
    );
    assert!(ok);
}

/// Andrew's monotone chain; counter-clockwise without collinear points.
fn convex_hull(mut pts: Vec<[f64; 2]>) -> Vec<[f64; 2]> {
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut hull: Vec<[f64; 2]> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &[f64; 2]>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

fn inside_hull(hull: &[[f64; 2]], p: [f64; 2]) -> bool {
    let eps = 1e-9;
    match hull.len() {
        1 => (hull[0][0] - p[0]).abs() < eps && (hull[0][1] - p[1]).abs() < eps,
        2 => {
            let (a, b) = (hull[0], hull[1]);
            let cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
            let dot = (p[0] - a[0]) * (b[0] - a[0]) + (p[1] - a[1]) * (b[1] - a[1]);
            let len2 = (b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2);
            cross.abs() < eps && dot >= -eps && dot <= len2 + eps
        }
        _ => (0..hull.len()).all(|i| {
            let (a, b) = (hull[i], hull[(i + 1) % hull.len()]);
            (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]) >= -eps
        }),
    }
}

fn random_imbalanced(rng: &mut Stream) -> Dataset {
    let n_min = rng.random_range(4..20);
    let n_maj = rng.random_range(n_min + 1..60);
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (count, label, offset) in [(n_maj, 0, 0.0), (n_min, 1, 3.0)] {
        for _ in 0..count {
            rows.push(vec![rng.random_range(-5.0..5.0) + offset, rng.random_range(-5.0..5.0)]);
            labels.push(label);
        }
    }
    Dataset::from_rows(&rows, labels).unwrap()
}

type Moments = (f64, [f64; 2], [f64; 2]);

fn variance_by_group(ds: &Dataset, groups: &[(Label, usize)]) -> BTreeMap<(Label, usize), f64> {
    let mut acc: BTreeMap<(Label, usize), Moments> = BTreeMap::new();
    for (i, g) in groups.iter().enumerate() {
        let e = acc.entry(*g).or_default();
        e.0 += 1.0;
        for j in 0..2 {
            e.1[j] += ds.point(i)[j];
            e.2[j] += ds.point(i)[j] * ds.point(i)[j];
        }
    }
    acc.into_iter()
        .map(|(g, (n, s, sq))| (g, (0..2).map(|j| sq[j] / n - (s[j] / n).powi(2)).sum::<f64>()))
        .collect()
}

#[test]
fn criterion_8_property_suites() {
    let start = Instant::now();
    let mut rng = RngSeed(8).stream();
    let mut cases = 0;
    let mut failures: BTreeMap<&str, usize> = BTreeMap::new();
    let mut fail = |name| *failures.entry(name).or_insert(0) += 1;

    for _ in 0..200 {
        cases += 1;
        let ds = random_imbalanced(&mut rng);
        let minority = summarize(&ds).unwrap().minority_label;
        let n_min = ds.indices_of(minority).len();
        let k = rng.random_range(1..n_min.min(6));
        let out = smote(&ds, k, 100 * rng.random_range(1..4), &mut rng).unwrap();
        let hull = convex_hull(ds.indices_of(minority).iter().map(|&i| [ds.point(i)[0], ds.point(i)[1]]).collect());
        if !(ds.len()..out.len()).all(|i| inside_hull(&hull, [out.point(i)[0], out.point(i)[1]])) {
            fail("smote hull");
        }
    }

    for _ in 0..200 {
        cases += 1;
        let ds = random_imbalanced(&mut rng);
        let scope = if rng.random_bool(0.5) { SparsityScope::MinorityOnly } else { SparsityScope::BothClasses };
        let groups: Vec<usize> = (0..ds.len()).map(|_| rng.random_range(0..2)).collect();
        if sparsity(&ds, 1.0, scope, Some(&groups), 0.3).unwrap() != ds {
            fail("sparsity identity");
        }
    }

    for _ in 0..200 {
        cases += 1;
        let ds = random_imbalanced(&mut rng);
        let alpha = rng.random_range(1.0..4.0);
        let groups: Vec<usize> = (0..ds.len()).map(|_| rng.random_range(0..3)).collect();
        let out = sparsity(&ds, alpha, SparsityScope::BothClasses, Some(&groups), 0.3).unwrap();
        let keys: Vec<(Label, usize)> = (0..ds.len()).map(|i| (ds.label(i), groups[i])).collect();
        let (before, after) = (variance_by_group(&ds, &keys), variance_by_group(&out, &keys));
        if !before.iter().all(|(g, v)| (after[g] - alpha * alpha * v).abs() <= 1e-9 * (1.0 + after[g].abs())) {
            fail("sparsity alpha^2");
        }
    }

    for _ in 0..200 {
        cases += 1;
        let folds = rng.random_range(2..8);
        let n = rng.random_range(2 * folds..150);
        let labels: Vec<Label> = (0..n).map(|i| if i < folds { 1 } else { u32::from(rng.random_bool(0.2)) }).collect();
        let labels: Vec<Label> = if labels.iter().filter(|&&l| l == 0).count() < folds {
            (0..n).map(|i| u32::from(i < folds)).collect()
        } else {
            labels
        };
        let a = stratified_kfold(&labels, folds, RngSeed(rng.random())).unwrap();
        let within = |sizes: Vec<usize>, total: usize| {
            sizes.iter().all(|&s| s == total / folds || s == total.div_ceil(folds))
        };
        let mut ok = within((0..folds).map(|f| a.iter().filter(|&&x| x == f).count()).collect(), n);
        for c in 0..2 {
            let total = labels.iter().filter(|&&l| l == c).count();
            let sizes = (0..folds).map(|f| a.iter().zip(&labels).filter(|(&x, &l)| x == f && l == c).count()).collect();
            ok &= within(sizes, total);
        }
        if !ok {
            fail("fold bounds");
        }
    }

    let methods = [
        ResampleMethod::RandomOversample,
        ResampleMethod::ClusterOversample { clusters: ClusterSource::GroundTruth },
        ResampleMethod::Smote { k: 3, amount_pct: 200 },
        ResampleMethod::Ncr { k: 3 },
        ResampleMethod::Sparsity { alpha: 2.0, scope: SparsityScope::BothClasses, clusters: ClusterSource::GroundTruth },
    ];
    for case in 0..200 {
        cases += 1;
        let spec = GenSpec {
            n_samples: rng.random_range(80..200),
            class_ratio: (rng.random_range(2..6), 1),
            minority_subclusters: rng.random_range(1..3),
            disturbance_ratio: rng.random_range(0.0..0.4),
            seed: RngSeed(rng.random()),
            ..GenSpec::default()
        };
        let (ds, gt) = generate_imbalanced(&spec).unwrap();
        let folds = stratified_kfold(ds.labels(), 4, spec.seed).unwrap();
        let fold = rng.random_range(0..4);
        let method = MethodSpec::Resample(methods[case % methods.len()]);
        let roles = summarize(&ds).unwrap().roles();
        let data = prepare_fold(&ds, Some(&gt), &folds, fold, &method, roles, RngSeed(case as u64)).unwrap();
        let expected: Vec<usize> = (0..ds.len()).filter(|&i| folds[i] == fold).collect();
        if data.test_indices != expected || data.test != ds.select(&expected) {
            fail("training-fold only");
        }
    }

    let elapsed = start.elapsed();
    let ok = failures.is_empty() && cases == 1000 && elapsed < Duration::from_secs(120);
    verdict(
        8,
        "SMOTE hull, Sparsity identity and alpha^2 scaling, fold size bounds, training-fold-only resampling",
        ok,
        &format!("{cases} cases, failures {failures:?}, {:.2}s", elapsed.as_secs_f64()),
    );
    assert!(ok);
}
