//! Numerical verification of the construction.

pub mod cone;
pub mod continuity;
pub mod injectivity;
pub mod intersection;
pub mod metric;

use std::f64::consts::PI;

use rand::Rng;
use serde::Serialize;

use crate::atlas::{chain_motions, AtlasMap, Chart, FigureConfig, FlatDomain};
use crate::crease::Side;
use crate::error::Result;
use crate::geometry::{Point3, Vec3};

pub use cone::cone_angle;
pub use continuity::crease_and_closure_checks;
pub use injectivity::injectivity_scan;
pub use intersection::{intersection_closed_form, intersection_oracle, IntersectionCurve};
pub use metric::{metric_residual, JacobianMode, Region};

/// One verified property.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub samples: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub notes: String,
}

impl CheckResult {
    /// `pass` is `max_residual < tolerance`; NaN never passes. Infinite
    /// residuals are stored as `f64::MAX` so reports stay valid JSON.
    pub fn new(name: &str, samples: usize, max_residual: f64, tolerance: f64, notes: impl Into<String>) -> Self {
        let pass = max_residual < tolerance;
        let max_residual = if max_residual.is_nan() {
            f64::MAX
        } else {
            max_residual.clamp(-f64::MAX, f64::MAX)
        };
        Self { name: name.to_string(), samples, max_residual, tolerance, pass, notes: notes.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Identities that hold formula by formula.
    pub analytic: f64,
    /// Identities that go through chained motions.
    pub chain: f64,
    /// Finite differences and oracle comparisons.
    pub fd: f64,
    pub cone: f64,
    /// Injectivity and cone radius as a multiple of `r`.
    pub eps_factor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { analytic: 1e-12, chain: 1e-9, fd: 1e-6, cone: 1e-4, eps_factor: 1e-3 }
    }
}

/// A map given chart by chart, so checks can run on perturbed copies.
pub trait ChartedMap {
    fn domain(&self) -> &FlatDomain;
    fn chart_of(&self, u: f64, v: f64) -> Chart;
    fn eval_in(&self, chart: Chart, u: f64, v: f64) -> Point3;
    fn jacobian_in(&self, chart: Chart, u: f64, v: f64) -> [Vec3; 2];
}

impl ChartedMap for AtlasMap {
    fn domain(&self) -> &FlatDomain {
        AtlasMap::domain(self)
    }
    fn chart_of(&self, u: f64, v: f64) -> Chart {
        AtlasMap::chart_of(self, u, v)
    }
    fn eval_in(&self, chart: Chart, u: f64, v: f64) -> Point3 {
        self.eval_chart(chart, u, v)
    }
    fn jacobian_in(&self, chart: Chart, u: f64, v: f64) -> [Vec3; 2] {
        self.jacobian_chart(chart, u, v)
    }
}

/// `factor · map`, the detector self-test.
pub struct Scaled<'a, M: ChartedMap> {
    pub inner: &'a M,
    pub factor: f64,
}

impl<M: ChartedMap> ChartedMap for Scaled<'_, M> {
    fn domain(&self) -> &FlatDomain {
        self.inner.domain()
    }
    fn chart_of(&self, u: f64, v: f64) -> Chart {
        self.inner.chart_of(u, v)
    }
    fn eval_in(&self, chart: Chart, u: f64, v: f64) -> Point3 {
        Point3::from(self.inner.eval_in(chart, u, v).coords * self.factor)
    }
    fn jacobian_in(&self, chart: Chart, u: f64, v: f64) -> [Vec3; 2] {
        let [a, b] = self.inner.jacobian_in(chart, u, v);
        [a * self.factor, b * self.factor]
    }
}

/// `n_samples` points spread evenly over the `2n` (strip, side) cells. In
/// each cell `u` is uniform and `v` uniform between the strip edge and the
/// crease; points landing on a crease are pushed off by `1e−9·r`.
pub fn stratified_samples<R: Rng>(domain: &FlatDomain, n_samples: usize, rng: &mut R) -> Vec<(Chart, f64, f64)> {
    let cells = 2 * domain.n;
    let mut out = Vec::with_capacity(n_samples);
    let ur = PI * domain.r;
    let nudge = 1e-9 * domain.r;
    for cell in 0..cells {
        let (strip, side) = (cell / 2, if cell % 2 == 0 { Side::Below } else { Side::Above });
        let count = n_samples / cells + usize::from(cell < n_samples % cells);
        let crease = domain.crease(strip);
        let lo = domain.strip_center(strip) - 0.5 * domain.s;
        let hi = lo + domain.s;
        for _ in 0..count {
            let u = rng.random_range(-ur..=ur);
            let c = crease.value(u);
            let t: f64 = rng.random();
            let v = match side {
                Side::Below => (lo + t * (c - lo)).min(c - nudge),
                Side::Above => (c + t * (hi - c)).max(c + nudge),
            };
            out.push((Chart { strip, side }, u, v));
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportConfig {
    pub n: usize,
    pub r: f64,
    pub s: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConeAngles {
    #[serde(rename = "1e-2")]
    pub coarse: f64,
    #[serde(rename = "1e-3")]
    pub fine: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExceptionalPoint {
    pub domain_uv: [f64; 2],
    pub image_xyz: [f64; 3],
    pub dihedral: f64,
    pub cone_angle_at: ConeAngles,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub config: ReportConfig,
    pub checks: Vec<CheckResult>,
    pub exceptional_points: Vec<ExceptionalPoint>,
    pub overall_pass: bool,
}

impl VerificationReport {
    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Sample counts used by [`verify_all`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleCounts {
    pub metric: usize,
    pub boundary: usize,
    pub injectivity: usize,
    pub curvature: usize,
    pub oracle_grid: usize,
}

impl Default for SampleCounts {
    fn default() -> Self {
        Self { metric: 10_000, boundary: 1_000, injectivity: 100_000, curvature: 1_000, oracle_grid: 128 }
    }
}

/// `min(κ_image − κ_domain)` over `samples` crease parameters per strip.
pub fn curvature_gap(atlas: &AtlasMap, samples: usize) -> Result<f64> {
    let d = atlas.domain();
    let elbow = atlas.elbow();
    let mut gap = f64::INFINITY;
    for k in 0..d.n {
        for i in 0..samples {
            let u = -PI * d.r + 2.0 * PI * d.r * i as f64 / (samples - 1).max(1) as f64;
            let (lu, _) = atlas.to_local(k, u, 0.0);
            let (ki, kd) = elbow.curvature_condition(lu)?;
            gap = gap.min(ki - kd);
        }
    }
    Ok(gap)
}

/// Handedness flips along `u = u0` from the bottom to the top edge.
pub fn handedness_flips(atlas: &AtlasMap, u0: f64, steps: usize) -> usize {
    let d = atlas.domain();
    let mut flips = 0;
    let mut prev: Option<f64> = None;
    for i in 0..=steps {
        let v = d.v_min() + d.height() * i as f64 / steps as f64;
        let h = atlas.handedness(atlas.chart_of(u0, v), u0, v);
        if prev.is_some_and(|p| p != h) {
            flips += 1;
        }
        prev = Some(h);
    }
    flips
}

fn tube_containment(atlas: &AtlasMap, samples: &[(Chart, f64, f64)]) -> f64 {
    samples.iter().map(|&(c, u, v)| atlas.tube_residual(&atlas.eval_chart(c, u, v))).fold(0.0, f64::max)
}

fn polygon_defect(atlas: &AtlasMap) -> f64 {
    let v = atlas.vertices();
    let n = v.len();
    let s = atlas.config().s;
    let normal = (v[1] - v[0]).cross(&(v[2] - v[1])).normalize();
    let mut worst: f64 = 0.0;
    for k in 0..n {
        let edge = v[(k + 1) % n] - v[k];
        worst = worst.max((edge.norm() - s).abs());
        worst = worst.max((v[k] - v[0]).dot(&normal).abs());
        let next = v[(k + 2) % n] - v[(k + 1) % n];
        let turn = edge.cross(&next).dot(&normal).atan2(edge.dot(&next));
        worst = worst.max((turn - 2.0 * PI / n as f64).abs());
    }
    worst
}

fn exceptional_points(atlas: &AtlasMap) -> Result<Vec<ExceptionalPoint>> {
    let ex = atlas.exceptional_sets()?;
    let r = atlas.config().r;
    ex.inflection_points
        .iter()
        .map(|p| {
            let (lu, _) = atlas.to_local(p.strip, p.domain_uv[0], p.domain_uv[1]);
            Ok(ExceptionalPoint {
                domain_uv: p.domain_uv,
                image_xyz: [p.image.x, p.image.y, p.image.z],
                dihedral: atlas.elbow().fold_dihedral(lu.clamp(-PI * r, PI * r))?,
                cone_angle_at: ConeAngles {
                    coarse: cone_angle(atlas, p.domain_uv, 1e-2 * r),
                    fine: cone_angle(atlas, p.domain_uv, 1e-3 * r),
                },
            })
        })
        .collect()
}

/// Runs every check and collects the report.
pub fn verify_all(config: &FigureConfig, tol: &Tolerances, seed: u64) -> Result<VerificationReport> {
    verify_with(config, tol, seed, &SampleCounts::default())
}

pub fn verify_with(config: &FigureConfig, tol: &Tolerances, seed: u64, counts: &SampleCounts) -> Result<VerificationReport> {
    let atlas = chain_motions(config)?;
    let d = *atlas.domain();
    let eps = tol.eps_factor * d.r;
    let mut checks = Vec::new();

    checks.push(CheckResult::new(
        "motion_closure",
        16,
        atlas.closure_residual(),
        tol.chain,
        format!("closing motion vs identity on the seam circle; {} re-orthonormalizations", atlas.renormalizations()),
    ));
    checks.push(CheckResult::new("polygon_closure", d.n, polygon_defect(&atlas), tol.chain, "regular planar n-gon with edge s"));

    checks.push(metric_residual(&atlas, Region::All, counts.metric, JacobianMode::Analytic, tol.analytic, seed));
    checks.push(metric_residual(&atlas, Region::All, counts.metric, JacobianMode::FiniteDifference, tol.fd, seed));
    let scaled = metric_residual(&Scaled { inner: &atlas, factor: 1.01 }, Region::All, counts.metric, JacobianMode::Analytic, tol.analytic, seed);
    let expected = 1.01f64.powi(2) - 1.0;
    checks.push(CheckResult::new(
        "metric_scaled_self_test",
        scaled.samples,
        if scaled.pass { f64::INFINITY } else { (scaled.max_residual - expected).abs() },
        tol.chain,
        format!("1.01·φ gives {:.6}; must be flagged and equal 1.01² − 1", scaled.max_residual),
    ));

    checks.extend(crease_and_closure_checks(&atlas, counts.boundary, tol));

    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed.wrapping_add(1));
    let samples = stratified_samples(&d, counts.metric, &mut rng);
    checks.push(CheckResult::new("tube_containment", samples.len(), tube_containment(&atlas, &samples), tol.chain, "| dist to nearest axis − r |"));

    let gap = curvature_gap(&atlas, counts.curvature)?;
    checks.push(CheckResult::new(
        "curvature_condition",
        counts.curvature * d.n,
        -gap,
        0.0,
        format!("min(κ_image − κ_domain) = {gap:.6}; residual is its negative"),
    ));

    let flips = handedness_flips(&atlas, 0.37 * PI * d.r, 8192);
    let parity_ok = (flips % 2 == 1) == (atlas.orientability() == crate::atlas::Orientability::NonOrientable);
    checks.push(CheckResult::new(
        "handedness_parity",
        8193,
        (flips as f64 - d.n as f64).abs() + if parity_ok { 0.0 } else { 1.0 },
        0.5,
        format!("{flips} flips along a vertical loop; {:?}", atlas.orientability()),
    ));

    let ex = atlas.exceptional_sets()?;
    let mut dihedral_worst: f64 = 0.0;
    for p in &ex.inflection_points {
        let (lu, _) = atlas.to_local(p.strip, p.domain_uv[0], p.domain_uv[1]);
        dihedral_worst = dihedral_worst.max((atlas.elbow().fold_dihedral(lu)? - PI).abs());
    }
    let count_defect = (ex.inflection_points.len() as f64 - 2.0 * d.n as f64).abs();
    checks.push(CheckResult::new(
        "inflection_dihedral",
        ex.inflection_points.len(),
        dihedral_worst + count_defect,
        tol.chain,
        format!("{} inflection points, fold dihedral π at each", ex.inflection_points.len()),
    ));
    checks.extend(cone::cone_angle_checks(&atlas, tol));

    let axes = atlas.tube_axes();
    let mut on_tubes: f64 = 0.0;
    let mut oracle: f64 = 0.0;
    for curve in &ex.intersection_curves {
        for p in curve.sample_retained(256) {
            for j in [curve.incoming_tube, curve.outgoing_tube] {
                let (o, dir) = axes[j];
                on_tubes = on_tubes.max((crate::atlas::line_distance(&p, &o, &dir) - d.r).abs());
            }
        }
        let pts = intersection_oracle(&atlas, curve.pair, counts.oracle_grid)?;
        let (_, pass) = intersection::split_by_plane(&atlas, curve, &pts);
        oracle = oracle.max(if pass.is_empty() { f64::INFINITY } else { intersection::hausdorff_to_curve(curve, &pass) });
    }
    checks.push(CheckResult::new("intersection_on_both_tubes", 256 * d.n, on_tubes, tol.chain, "pass-through curve vs both axes"));
    checks.push(CheckResult::new(
        "intersection_oracle_agreement",
        d.n,
        oracle,
        tol.fd,
        format!("one-sided Hausdorff, bisection oracle on a {0}×{0} grid", counts.oracle_grid),
    ));

    checks.push(injectivity_scan(&atlas, counts.injectivity, eps, seed)?.check);

    let overall_pass = checks.iter().all(|c| c.pass);
    Ok(VerificationReport {
        config: ReportConfig { n: d.n, r: d.r, s: d.s, seed },
        checks,
        exceptional_points: exceptional_points(&atlas)?,
        overall_pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_respect_cells() {
        let d = crate::atlas::build_domain(&FigureConfig::new(3, 1.0, 2.0).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let s = stratified_samples(&d, 1001, &mut rng);
        assert_eq!(s.len(), 1001);
        for (c, u, v) in s {
            assert_eq!(d.strip_of(v), c.strip);
            let crease = d.crease(c.strip).value(u);
            match c.side {
                Side::Below => assert!(v < crease),
                Side::Above => assert!(v > crease),
            }
        }
    }

    #[test]
    fn check_result_pass_rule() {
        assert!(CheckResult::new("a", 1, 0.5, 1.0, "").pass);
        assert!(!CheckResult::new("a", 1, 1.0, 1.0, "").pass);
        let c = CheckResult::new("a", 1, f64::NAN, 1.0, "");
        assert!(!c.pass && c.max_residual.is_finite());
    }

    #[test]
    fn triangle_report_passes() {
        let counts = SampleCounts { injectivity: 20_000, ..SampleCounts::default() };
        let rep = verify_with(&FigureConfig::new(3, 1.0, 2.0).unwrap(), &Tolerances::default(), 0, &counts).unwrap();
        for c in &rep.checks {
            assert!(c.pass, "{c:?}");
        }
        assert_eq!(rep.exceptional_points.len(), 6);
        let mut names: Vec<&str> = rep.checks.iter().map(|c| c.name.as_str()).collect();
        let total = names.len();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), total);
    }

    #[test]
    fn bad_strip_height_is_a_config_error() {
        assert!(matches!(FigureConfig::new(3, 1.0, 1.0), Err(crate::Error::Config(_))));
    }
}
