//! Synthetic imbalanced two-class datasets.
//!
//! The minority class is decomposed into isotropic Gaussian sub-clusters.
//! A fraction of minority points can be pushed into a borderline band
//! around their sub-cluster, and another fraction relocated deep inside
//! majority territory as rare examples. The majority class is one or more
//! Gaussian blobs with their own spread.
//!
//! Geometry constants, all relative to `sub_sigma`:
//!
//! * sub-region radius `R = 2·sub_sigma`;
//! * borderline band: distance from the sub-cluster center in `[R, 2R]`;
//! * rare examples: within `R` of a majority center and farther than
//!   `3·sub_sigma` from every minority center, placed singly or in pairs
//!   (probability 0.5) with `0.1·sub_sigma` jitter.

use std::io::Write;

use rand::seq::index::sample as sample_indices;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::data::{Dataset, ExampleKind, Label};
use crate::error::{invalid, Error, Result};
use crate::io::format_float;
use crate::neighbors::distance;
use crate::rng::{RngSeed, Stream};

pub const MAJORITY_LABEL: Label = 0;
pub const MINORITY_LABEL: Label = 1;

/// Attempts allowed for each rejection-sampled placement.
pub const MAX_ATTEMPTS: usize = 10_000;

const RARE_EXCLUSION: f64 = 3.0;
const RARE_PAIR_PROBABILITY: f64 = 0.5;
const RARE_JITTER: f64 = 0.1;

/// Axis-aligned hypercube `[lo, hi]^d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CenterBox {
    pub lo: f64,
    pub hi: f64,
}

impl CenterBox {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && hi > lo) {
            return Err(invalid(format!("center box [{lo}, {hi}] is degenerate")));
        }
        Ok(CenterBox { lo, hi })
    }

    pub fn side(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self, dims: usize) -> Vec<f64> {
        vec![0.5 * (self.lo + self.hi); dims]
    }

    pub fn diagonal(&self, dims: usize) -> f64 {
        self.side() * (dims as f64).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub n_samples: usize,
    /// `(majority_parts, minority_parts)`, e.g. `(7, 1)`.
    pub class_ratio: (usize, usize),
    pub dims: usize,
    pub minority_subclusters: usize,
    pub majority_subclusters: usize,
    /// Standard deviation of each minority sub-cluster.
    pub sub_sigma: f64,
    /// Standard deviation of each majority blob.
    pub majority_sigma: f64,
    pub center_box: CenterBox,
    pub min_center_separation: f64,
    pub disturbance_ratio: f64,
    pub rare_fraction: f64,
    /// When given, safe + disturbance + rare must equal 1. When absent the
    /// safe share is whatever remains.
    pub safe_fraction: Option<f64>,
    pub seed: RngSeed,
}

impl Default for GenSpec {
    fn default() -> Self {
        GenSpec {
            n_samples: 400,
            class_ratio: (5, 1),
            dims: 2,
            minority_subclusters: 3,
            majority_subclusters: 1,
            sub_sigma: 1.0,
            majority_sigma: 5.0,
            center_box: CenterBox { lo: -10.0, hi: 10.0 },
            min_center_separation: 4.0,
            disturbance_ratio: 0.0,
            rare_fraction: 0.0,
            safe_fraction: None,
            seed: RngSeed(0),
        }
    }
}

/// Exact per-kind minority counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Composition {
    pub safe: usize,
    pub borderline: usize,
    pub rare: usize,
}

impl GenSpec {
    pub fn validate(&self) -> Result<()> {
        let (maj_parts, min_parts) = self.class_ratio;
        if maj_parts == 0 || min_parts == 0 {
            return Err(invalid("class ratio parts must be positive"));
        }
        if self.dims == 0 {
            return Err(invalid("dims must be at least 1"));
        }
        if self.minority_subclusters == 0 || self.majority_subclusters == 0 {
            return Err(invalid("sub-cluster counts must be at least 1"));
        }
        if !(self.sub_sigma > 0.0 && self.sub_sigma.is_finite()) {
            return Err(invalid("sub_sigma must be positive"));
        }
        if !(self.majority_sigma > 0.0 && self.majority_sigma.is_finite()) {
            return Err(invalid("majority_sigma must be positive"));
        }
        CenterBox::new(self.center_box.lo, self.center_box.hi)?;
        if self.min_center_separation.is_nan() || self.min_center_separation < 0.0 {
            return Err(invalid("min_center_separation must be non-negative"));
        }
        for (name, v) in [("disturbance_ratio", self.disturbance_ratio), ("rare_fraction", self.rare_fraction)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(invalid(format!("{name} must lie in [0, 1], got {v}")));
            }
        }
        let safe = self.safe_share();
        if let Some(s) = self.safe_fraction {
            if !(0.0..=1.0).contains(&s) {
                return Err(invalid(format!("safe_fraction must lie in [0, 1], got {s}")));
            }
            let total = s + self.disturbance_ratio + self.rare_fraction;
            if (total - 1.0).abs() > 1e-9 {
                return Err(invalid(format!(
                    "safe_fraction + disturbance_ratio + rare_fraction must equal 1, got {total}"
                )));
            }
        } else if safe < -1e-9 {
            return Err(invalid(format!(
                "disturbance_ratio + rare_fraction must not exceed 1, got {}",
                self.disturbance_ratio + self.rare_fraction
            )));
        }
        let (n_maj, n_min) = self.class_counts();
        if n_min < self.minority_subclusters {
            return Err(invalid(format!(
                "{n_min} minority points cannot fill {} sub-clusters",
                self.minority_subclusters
            )));
        }
        if n_maj < self.majority_subclusters {
            return Err(invalid(format!(
                "{n_maj} majority points cannot fill {} blobs",
                self.majority_subclusters
            )));
        }
        Ok(())
    }

    fn safe_share(&self) -> f64 {
        self.safe_fraction
            .unwrap_or(1.0 - self.disturbance_ratio - self.rare_fraction)
    }

    /// `(majority, minority)` counts: the minority gets
    /// `round(n · minority_parts / (majority_parts + minority_parts))`.
    pub fn class_counts(&self) -> (usize, usize) {
        let (maj, min) = self.class_ratio;
        let n_min = (self.n_samples as f64 * min as f64 / (maj + min) as f64).round() as usize;
        (self.n_samples - n_min, n_min)
    }

    pub fn composition(&self) -> Composition {
        let (_, n_min) = self.class_counts();
        let shares = [self.safe_share().max(0.0), self.disturbance_ratio, self.rare_fraction];
        let c = largest_remainder(&shares, n_min);
        Composition { safe: c[0], borderline: c[1], rare: c[2] }
    }
}

/// Split `total` into integer parts proportional to `weights`, summing
/// exactly to `total`. Leftover units go to the largest fractional parts,
/// ties to the lower index.
pub fn largest_remainder(weights: &[f64], total: usize) -> Vec<usize> {
    let sum: f64 = weights.iter().sum();
    if weights.is_empty() || sum <= 0.0 {
        return vec![0; weights.len()];
    }
    let quotas: Vec<f64> = weights.iter().map(|w| w / sum * total as f64).collect();
    let mut parts: Vec<usize> = quotas.iter().map(|q| q.floor() as usize).collect();
    let assigned: usize = parts.iter().sum();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = quotas[a] - quotas[a].floor();
        let rb = quotas[b] - quotas[b].floor();
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    for &i in order.iter().take(total.saturating_sub(assigned)) {
        parts[i] += 1;
    }
    parts
}

/// Sizes as equal as possible (differing by at most one), larger first.
pub fn even_split(total: usize, parts: usize) -> Vec<usize> {
    (0..parts)
        .map(|i| total / parts + usize::from(i < total % parts))
        .collect()
}

fn uniform_in_box(b: &CenterBox, dims: usize, rng: &mut Stream) -> Vec<f64> {
    (0..dims).map(|_| rng.random_range(b.lo..=b.hi)).collect()
}

fn unit_direction(dims: usize, rng: &mut Stream) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dims).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Uniform sample from the spherical shell `inner ≤ ‖x − center‖ ≤ outer`
/// (a ball when `inner = 0`).
fn uniform_in_shell(center: &[f64], inner: f64, outer: f64, rng: &mut Stream) -> Vec<f64> {
    let d = center.len() as f64;
    let dir = unit_direction(center.len(), rng);
    let u: f64 = rng.random();
    let r = (inner.powf(d) + u * (outer.powf(d) - inner.powf(d))).powf(1.0 / d);
    let r = r.clamp(inner, outer);
    center.iter().zip(&dir).map(|(c, v)| c + r * v).collect()
}

/// `count` centers uniform in `bounds`, pairwise at least `min_sep` apart.
pub fn sample_centers(count: usize, bounds: &CenterBox, dims: usize, min_sep: f64, rng: &mut Stream) -> Result<Vec<Vec<f64>>> {
    sample_centers_avoiding(count, bounds, dims, min_sep, &[], rng)
}

/// Like [`sample_centers`], additionally keeping `min_sep` from `existing`.
pub fn sample_centers_avoiding(
    count: usize,
    bounds: &CenterBox,
    dims: usize,
    min_sep: f64,
    existing: &[Vec<f64>],
    rng: &mut Stream,
) -> Result<Vec<Vec<f64>>> {
    if count == 0 {
        return Err(invalid("center count must be at least 1"));
    }
    CenterBox::new(bounds.lo, bounds.hi)?;
    let mut placed: Vec<Vec<f64>> = Vec::with_capacity(count);
    for i in 0..count {
        let mut found = None;
        for _ in 0..MAX_ATTEMPTS {
            let c = uniform_in_box(bounds, dims, rng);
            if existing.iter().chain(&placed).all(|o| distance(o, &c) >= min_sep) {
                found = Some(c);
                break;
            }
        }
        match found {
            Some(c) => placed.push(c),
            None => {
                return Err(Error::CenterPacking(format!(
                    "placed {i} of {count} centers {min_sep} apart in [{}, {}]^{dims} after {MAX_ATTEMPTS} attempts",
                    bounds.lo, bounds.hi
                )))
            }
        }
    }
    Ok(placed)
}

/// Gaussian blobs: `counts[j]` points around `centers[j]` with per-axis
/// standard deviation `sigma`. Returns points and their blob index.
pub fn generate_blobs(
    centers: &[Vec<f64>],
    counts: &[usize],
    sigma: f64,
    rng: &mut Stream,
) -> Result<(Vec<Vec<f64>>, Vec<usize>)> {
    if centers.len() != counts.len() {
        return Err(invalid(format!("{} centers but {} counts", centers.len(), counts.len())));
    }
    if sigma.is_nan() || sigma <= 0.0 {
        return Err(invalid("sigma must be positive"));
    }
    let total = counts.iter().sum();
    let mut points = Vec::with_capacity(total);
    let mut assignment = Vec::with_capacity(total);
    for (j, (c, &m)) in centers.iter().zip(counts).enumerate() {
        for _ in 0..m {
            points.push(
                c.iter()
                    .map(|x| x + sigma * rng.sample::<f64, _>(StandardNormal))
                    .collect(),
            );
            assignment.push(j);
        }
    }
    Ok((points, assignment))
}

/// Minority points under construction with their sub-cluster and kind.
#[derive(Debug, Clone, PartialEq)]
pub struct MinorityDraft {
    pub points: Vec<Vec<f64>>,
    pub assignment: Vec<usize>,
    pub kinds: Vec<ExampleKind>,
}

impl MinorityDraft {
    pub fn new(points: Vec<Vec<f64>>, assignment: Vec<usize>) -> Self {
        let kinds = vec![ExampleKind::Safe; points.len()];
        MinorityDraft { points, assignment, kinds }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn count(&self, kind: ExampleKind) -> usize {
        self.kinds.iter().filter(|&&k| k == kind).count()
    }

    fn safe_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.kinds[i] == ExampleKind::Safe).collect()
    }

    /// Move `round(ratio · n)` points into the borderline band.
    pub fn apply_disturbance(&mut self, centers: &[Vec<f64>], sub_sigma: f64, ratio: f64, rng: &mut Stream) -> Result<()> {
        if !(0.0..=1.0).contains(&ratio) {
            return Err(invalid(format!("disturbance ratio must lie in [0, 1], got {ratio}")));
        }
        let count = (ratio * self.len() as f64).round() as usize;
        self.disturb(centers, sub_sigma, count, rng)
    }

    /// Move exactly `count` safe points into the borderline band, choosing
    /// per sub-cluster in proportion to the sub-cluster's safe population.
    pub fn disturb(&mut self, centers: &[Vec<f64>], sub_sigma: f64, count: usize, rng: &mut Stream) -> Result<()> {
        let safe = self.safe_indices();
        if count > safe.len() {
            return Err(invalid(format!("cannot disturb {count} of {} safe points", safe.len())));
        }
        if count == 0 {
            return Ok(());
        }
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); centers.len()];
        for &i in &safe {
            let j = self.assignment[i];
            if j >= centers.len() {
                return Err(invalid(format!("point {i} assigned to missing sub-cluster {j}")));
            }
            members[j].push(i);
        }
        let weights: Vec<f64> = members.iter().map(|m| m.len() as f64).collect();
        let quota = largest_remainder(&weights, count);
        let inner = 2.0 * sub_sigma;
        let outer = 2.0 * inner;
        for (j, (pool, &take)) in members.iter().zip(&quota).enumerate() {
            let chosen = sample_indices(rng, pool.len(), take);
            let mut picked: Vec<usize> = chosen.iter().map(|p| pool[p]).collect();
            picked.sort_unstable();
            for i in picked {
                self.points[i] = uniform_in_shell(&centers[j], inner, outer, rng);
                self.kinds[i] = ExampleKind::Borderline;
            }
        }
        Ok(())
    }

    /// Relocate `round(fraction · n)` safe points into majority territory.
    pub fn inject_rare(
        &mut self,
        minority_centers: &[Vec<f64>],
        majority_centers: &[Vec<f64>],
        sub_sigma: f64,
        fraction: f64,
        rng: &mut Stream,
    ) -> Result<()> {
        if !(0.0..=1.0).contains(&fraction) {
            return Err(invalid(format!("rare fraction must lie in [0, 1], got {fraction}")));
        }
        let count = (fraction * self.len() as f64).round() as usize;
        self.make_rare(minority_centers, majority_centers, sub_sigma, count, rng)
    }

    pub fn make_rare(
        &mut self,
        minority_centers: &[Vec<f64>],
        majority_centers: &[Vec<f64>],
        sub_sigma: f64,
        count: usize,
        rng: &mut Stream,
    ) -> Result<()> {
        if count == 0 {
            return Ok(());
        }
        if majority_centers.is_empty() {
            return Err(invalid("rare injection needs majority centers"));
        }
        let safe = self.safe_indices();
        if count > safe.len() {
            return Err(invalid(format!("cannot relocate {count} of {} safe points", safe.len())));
        }
        let mut picked: Vec<usize> = sample_indices(rng, safe.len(), count)
            .iter()
            .map(|p| safe[p])
            .collect();
        picked.sort_unstable();

        let radius = 2.0 * sub_sigma;
        let exclusion = RARE_EXCLUSION * sub_sigma;
        let jitter = RARE_JITTER * sub_sigma;
        let clear = |p: &[f64]| minority_centers.iter().all(|c| distance(c, p) > exclusion);

        let mut next = 0;
        while next < picked.len() {
            let group = if picked.len() - next >= 2 && rng.random_bool(RARE_PAIR_PROBABILITY) { 2 } else { 1 };
            let mut placed = None;
            for _ in 0..MAX_ATTEMPTS {
                let m = rng.random_range(0..majority_centers.len());
                let locus = uniform_in_shell(&majority_centers[m], 0.0, radius, rng);
                let positions: Vec<Vec<f64>> = if group == 1 {
                    vec![locus]
                } else {
                    (0..2)
                        .map(|_| {
                            locus
                                .iter()
                                .map(|x| x + jitter * rng.sample::<f64, _>(StandardNormal))
                                .collect()
                        })
                        .collect()
                };
                if positions.iter().all(|p| clear(p)) {
                    placed = Some(positions);
                    break;
                }
            }
            let positions = placed.ok_or_else(|| {
                Error::RarePlacement(format!(
                    "no position within {radius} of a majority center lies farther than {exclusion} \
                     from every minority center after {MAX_ATTEMPTS} attempts"
                ))
            })?;
            for p in positions {
                let i = picked[next];
                self.points[i] = p;
                self.kinds[i] = ExampleKind::Rare;
                next += 1;
            }
        }
        Ok(())
    }
}

/// Generating geometry and per-point provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    pub minority_centers: Vec<Vec<f64>>,
    pub majority_centers: Vec<Vec<f64>>,
    /// Per dataset row: index into `minority_centers` for minority rows,
    /// into `majority_centers` for majority rows.
    pub subcluster_assignment: Vec<usize>,
    pub kinds: Vec<ExampleKind>,
}

impl GroundTruth {
    pub fn restrict(&self, indices: &[usize]) -> GroundTruth {
        GroundTruth {
            minority_centers: self.minority_centers.clone(),
            majority_centers: self.majority_centers.clone(),
            subcluster_assignment: indices.iter().map(|&i| self.subcluster_assignment[i]).collect(),
            kinds: indices.iter().map(|&i| self.kinds[i]).collect(),
        }
    }

    /// Sidecar CSV: one row per center,
    /// `center_x0,...,center_x{d-1},label,subcluster`.
    pub fn write_centers_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let dims = self
            .minority_centers
            .first()
            .or(self.majority_centers.first())
            .map_or(0, Vec::len);
        let mut header: Vec<String> = (0..dims).map(|j| format!("center_x{j}")).collect();
        header.push("label".into());
        header.push("subcluster".into());
        writeln!(out, "{}", header.join(","))?;
        for (label, centers) in [(MAJORITY_LABEL, &self.majority_centers), (MINORITY_LABEL, &self.minority_centers)] {
            for (j, c) in centers.iter().enumerate() {
                let coords: Vec<String> = c.iter().map(|v| format_float(*v)).collect();
                writeln!(out, "{},{label},{j}", coords.join(","))?;
            }
        }
        out.flush()?;
        Ok(())
    }
}

/// Full pipeline: centers, blobs, borderline disturbance, rare injection.
///
/// Rows are ordered majority blobs first, then minority sub-clusters.
pub fn generate_imbalanced(spec: &GenSpec) -> Result<(Dataset, GroundTruth)> {
    spec.validate()?;
    let (n_maj, n_min) = spec.class_counts();
    let comp = spec.composition();
    let dims = spec.dims;

    let mut center_rng = spec.seed.child("centers", 0).stream();
    let majority_centers = if spec.majority_subclusters == 1 {
        vec![spec.center_box.midpoint(dims)]
    } else {
        sample_centers(spec.majority_subclusters, &spec.center_box, dims, spec.min_center_separation, &mut center_rng)?
    };
    let minority_centers = sample_centers_avoiding(
        spec.minority_subclusters,
        &spec.center_box,
        dims,
        spec.min_center_separation,
        &majority_centers,
        &mut center_rng,
    )?;

    let (maj_points, maj_assign) = generate_blobs(
        &majority_centers,
        &even_split(n_maj, spec.majority_subclusters),
        spec.majority_sigma,
        &mut spec.seed.child("majority-blobs", 0).stream(),
    )?;
    let (min_points, min_assign) = generate_blobs(
        &minority_centers,
        &even_split(n_min, spec.minority_subclusters),
        spec.sub_sigma,
        &mut spec.seed.child("minority-blobs", 0).stream(),
    )?;

    let mut draft = MinorityDraft::new(min_points, min_assign);
    draft.disturb(
        &minority_centers,
        spec.sub_sigma,
        comp.borderline,
        &mut spec.seed.child("disturbance", 0).stream(),
    )?;
    draft.make_rare(
        &minority_centers,
        &majority_centers,
        spec.sub_sigma,
        comp.rare,
        &mut spec.seed.child("rare", 0).stream(),
    )?;

    let mut builder = Dataset::builder(dims, true);
    for p in &maj_points {
        builder.push(p, MAJORITY_LABEL, Some(ExampleKind::Majority));
    }
    for (p, &k) in draft.points.iter().zip(&draft.kinds) {
        builder.push(p, MINORITY_LABEL, Some(k));
    }
    let ds = builder.build()?;
    let gt = GroundTruth {
        minority_centers,
        majority_centers,
        subcluster_assignment: maj_assign.into_iter().chain(draft.assignment).collect(),
        kinds: ds.kinds().expect("tagged").to_vec(),
    };
    Ok((ds, gt))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rng(seed: u64) -> Stream {
        RngSeed(seed).stream()
    }

    #[test]
    fn single_center_inside_box() {
        let b = CenterBox::new(-1.0, 2.0).unwrap();
        let c = sample_centers(1, &b, 3, 0.0, &mut rng(1)).unwrap();
        assert_eq!(c.len(), 1);
        assert!(c[0].iter().all(|v| (-1.0..=2.0).contains(v)));
    }

    #[test]
    fn infeasible_packing() {
        let b = CenterBox::new(0.0, 1.0).unwrap();
        let err = sample_centers(2, &b, 2, 1.5, &mut rng(1)).unwrap_err();
        assert!(err.to_string().contains("center packing infeasible"));
    }

    #[test]
    fn five_centers_respect_separation() {
        let b = CenterBox::new(0.0, 1.0).unwrap();
        let c = sample_centers(5, &b, 2, 0.2, &mut rng(11)).unwrap();
        assert_eq!(c.len(), 5);
        for i in 0..5 {
            for j in i + 1..5 {
                assert!(distance(&c[i], &c[j]) >= 0.2);
            }
        }
    }

    #[test]
    fn tiny_sigma_collapses_to_centers() {
        let centers = vec![vec![1.0, 2.0], vec![-3.0, 4.0]];
        let (pts, assign) = generate_blobs(&centers, &[3, 2], 1e-12, &mut rng(3)).unwrap();
        assert_eq!(assign, vec![0, 0, 0, 1, 1]);
        for (p, &a) in pts.iter().zip(&assign) {
            assert!(distance(p, &centers[a]) < 1e-10);
        }
    }

    #[test]
    fn blob_counts() {
        let centers = vec![vec![0.0, 0.0], vec![5.0, 5.0]];
        let (pts, assign) = generate_blobs(&centers, &even_split(600, 2), 1.0, &mut rng(3)).unwrap();
        assert_eq!(pts.len(), 600);
        assert_eq!(assign.iter().filter(|&&a| a == 0).count(), 300);
        assert!(generate_blobs(&centers, &[1], 1.0, &mut rng(3)).is_err());
        assert!(generate_blobs(&centers, &[1, 1], 0.0, &mut rng(3)).is_err());
    }

    #[test]
    fn blob_mean_converges() {
        let sigma = 2.0;
        let center = vec![3.0, -1.0];
        let (pts, _) = generate_blobs(std::slice::from_ref(&center), &[10_000], sigma, &mut rng(2024)).unwrap();
        for j in 0..2 {
            let mean = pts.iter().map(|p| p[j]).sum::<f64>() / pts.len() as f64;
            assert!((mean - center[j]).abs() < 0.05 * sigma, "axis {j}: {mean}");
        }
    }

    fn draft(n: usize) -> (MinorityDraft, Vec<Vec<f64>>) {
        let centers = vec![vec![0.0, 0.0], vec![20.0, 0.0]];
        let (pts, assign) = generate_blobs(&centers, &even_split(n, 2), 1.0, &mut rng(5)).unwrap();
        (MinorityDraft::new(pts, assign), centers)
    }

    #[test]
    fn zero_disturbance_is_identity() {
        let (mut d, centers) = draft(100);
        let before = d.clone();
        d.apply_disturbance(&centers, 1.0, 0.0, &mut rng(9)).unwrap();
        assert_eq!(d, before);
    }

    #[test]
    fn half_disturbed_inside_band() {
        let (mut d, centers) = draft(100);
        d.apply_disturbance(&centers, 1.0, 0.5, &mut rng(9)).unwrap();
        assert_eq!(d.count(ExampleKind::Borderline), 50);
        assert_eq!(d.count(ExampleKind::Safe), 50);
        // Proportional per sub-cluster: 25 each.
        let per: Vec<usize> = (0..2)
            .map(|j| (0..100).filter(|&i| d.assignment[i] == j && d.kinds[i] == ExampleKind::Borderline).count())
            .collect();
        assert_eq!(per, vec![25, 25]);
        for i in 0..100 {
            if d.kinds[i] == ExampleKind::Borderline {
                let r = distance(&d.points[i], &centers[d.assignment[i]]);
                assert!((2.0 - 1e-12..=4.0 + 1e-12).contains(&r), "r = {r}");
            }
        }
        assert!(d.apply_disturbance(&centers, 1.0, 1.5, &mut rng(9)).is_err());
    }

    #[test]
    fn rare_points_audit() {
        let (mut d, centers) = draft(100);
        let majority = vec![vec![10.0, 0.0]];
        d.inject_rare(&centers, &majority, 1.0, 0.0, &mut rng(4)).unwrap();
        assert_eq!(d.count(ExampleKind::Rare), 0);
        d.inject_rare(&centers, &majority, 1.0, 0.2, &mut rng(4)).unwrap();
        assert_eq!(d.count(ExampleKind::Rare), 20);
        for i in 0..100 {
            if d.kinds[i] == ExampleKind::Rare {
                assert!(centers.iter().all(|c| distance(c, &d.points[i]) > 3.0));
                // Locus within 2σ of the majority center plus jitter.
                assert!(distance(&majority[0], &d.points[i]) < 2.0 + 1.0);
            }
        }
    }

    #[test]
    fn rare_placement_infeasible() {
        let (mut d, _) = draft(10);
        // A minority center on top of the majority center excludes the whole ball.
        let centers = vec![vec![0.0, 0.0]];
        let err = d.inject_rare(&centers, &[vec![0.0, 0.0]], 1.0, 0.5, &mut rng(4)).unwrap_err();
        assert!(matches!(err, Error::RarePlacement(_)));
    }

    #[test]
    fn largest_remainder_sums_exactly() {
        assert_eq!(largest_remainder(&[0.3, 0.5, 0.2], 100), vec![30, 50, 20]);
        assert_eq!(largest_remainder(&[1.0, 1.0, 1.0], 10), vec![4, 3, 3]);
        assert_eq!(largest_remainder(&[0.29, 0.71, 0.0], 100), vec![29, 71, 0]);
        assert_eq!(largest_remainder(&[0.3, 0.5, 0.2], 7).iter().sum::<usize>(), 7);
    }

    #[test]
    fn counts_316_84() {
        let spec = GenSpec { n_samples: 800, class_ratio: (7, 1), ..GenSpec::default() };
        assert_eq!(spec.class_counts(), (700, 100));
        let spec = GenSpec { n_samples: 400, class_ratio: (79, 21), ..GenSpec::default() };
        assert_eq!(spec.class_counts(), (316, 84));
    }

    #[test]
    fn composition_tags() {
        let spec = GenSpec {
            n_samples: 800,
            class_ratio: (7, 1),
            disturbance_ratio: 0.5,
            rare_fraction: 0.2,
            safe_fraction: Some(0.3),
            seed: RngSeed(77),
            ..GenSpec::default()
        };
        let (ds, gt) = generate_imbalanced(&spec).unwrap();
        assert_eq!(ds.len(), 800);
        let kinds = ds.kinds().unwrap();
        let count = |k| kinds.iter().filter(|&&x| x == k).count();
        assert_eq!(count(ExampleKind::Safe), 30);
        assert_eq!(count(ExampleKind::Borderline), 50);
        assert_eq!(count(ExampleKind::Rare), 20);
        assert_eq!(count(ExampleKind::Majority), 700);
        assert_eq!(gt.kinds, kinds);
        for i in 0..ds.len() {
            assert_eq!(kinds[i].is_minority(), ds.label(i) == MINORITY_LABEL);
        }
    }

    #[test]
    fn invalid_specs() {
        let bad = GenSpec { disturbance_ratio: 0.7, rare_fraction: 0.2, safe_fraction: Some(0.3), ..GenSpec::default() };
        assert!(bad.validate().unwrap_err().to_string().contains("must equal 1"));
        let bad = GenSpec { disturbance_ratio: 0.9, rare_fraction: 0.2, ..GenSpec::default() };
        assert!(bad.validate().is_err());
        let bad = GenSpec { n_samples: 12, class_ratio: (5, 1), minority_subclusters: 3, ..GenSpec::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn sidecar_layout() {
        let (_, gt) = generate_imbalanced(&GenSpec::default()).unwrap();
        let mut buf = Vec::new();
        gt.write_centers_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "center_x0,center_x1,label,subcluster");
        assert_eq!(lines.len(), 1 + 1 + 3);
        assert!(lines[1].ends_with(",0,0"));
        assert!(lines[4].ends_with(",1,2"));
    }
}
