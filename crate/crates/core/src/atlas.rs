//! The flat rectangle with its edge identifications, and the map φ that
//! sends it onto `n` cylinders around the edges of a regular `n`-gon.
//!
//! The rectangle is a stack of `n` strips. Strip `k` is centered at
//! `v = k·s` and is a copy of the elbow strip, mirrored in `u` for odd `k`.
//! Each strip is placed by a rigid motion `G_k`, chained so the top circle
//! of strip `k` meets the bottom circle of strip `k+1` point for point.

use std::f64::consts::PI;

use crate::analysis::intersection::{intersection_closed_form, IntersectionCurve};
use crate::crease::{polygon_slope, ElbowMap, ElbowSpec, Side};
use crate::error::{Error, Result};
use crate::geometry::{compose, compose_counting, Point3, RigidMotion, Vec3};

/// Residual above which chained motions are rejected as not closing.
pub const CLOSURE_LIMIT: f64 = 1e-6;

/// Number of polygon sides, cylinder radius and strip height.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigureConfig {
    pub n: usize,
    pub r: f64,
    pub s: f64,
}

impl FigureConfig {
    pub fn new(n: usize, r: f64, s: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::Config(format!("degenerate polygon: n = {n}, need n ≥ 3")));
        }
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::Config(format!("radius {r} must be positive and finite")));
        }
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::Config(format!("strip height {s} must be positive and finite")));
        }
        let min = min_strip_height(n, r);
        if s <= min {
            return Err(Error::Config(format!(
                "crease exceeds strip: strip height {s} must exceed 2·r·cot(π/{n}) = {min}"
            )));
        }
        Ok(Self { n, r, s })
    }

    pub fn tau(&self) -> f64 {
        polygon_slope(self.n)
    }

    pub fn elbow_spec(&self) -> ElbowSpec {
        ElbowSpec::new(self.r, self.tau(), self.s).expect("config invariants imply a valid elbow")
    }
}

/// Smallest strip height (exclusive) that keeps the crease inside its strip.
pub fn min_strip_height(n: usize, r: f64) -> f64 {
    2.0 * r * polygon_slope(n)
}

/// How the bottom and top edges of the rectangle are glued.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Identification {
    /// `(u, bottom) ~ (−u, top)`
    Klein,
    /// `(u, bottom) ~ (u, top)`
    Torus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientability {
    Orientable,
    NonOrientable,
}

/// Odd polygons give a Klein bottle, even ones a torus.
pub fn orientability(config: &FigureConfig) -> Orientability {
    if config.n % 2 == 1 {
        Orientability::NonOrientable
    } else {
        Orientability::Orientable
    }
}

/// A domain curve `v = center + amplitude·sin(u/r)` over `[u_start, u_end]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SineArc {
    pub center: f64,
    pub amplitude: f64,
    pub r: f64,
    pub u_start: f64,
    pub u_end: f64,
}

impl SineArc {
    pub fn value(&self, u: f64) -> f64 {
        self.center + self.amplitude * (u / self.r).sin()
    }

    pub fn covers(&self, u: f64, tol: f64) -> bool {
        u >= self.u_start - tol && u <= self.u_end + tol
    }

    /// Parameters in `[u_start, u_end]` where the arc crosses `v = level`.
    pub fn crossings(&self, level: f64) -> Vec<f64> {
        crossings_of(self.center - level, self.amplitude, self.r, self.u_start, self.u_end)
    }

    pub fn sample(&self, count: usize) -> Vec<[f64; 2]> {
        let count = count.max(2);
        (0..count)
            .map(|i| {
                let u = self.u_start + (self.u_end - self.u_start) * i as f64 / (count - 1) as f64;
                [u, self.value(u)]
            })
            .collect()
    }
}

/// Roots of `offset + amplitude·sin(u/r) = 0` inside `[lo, hi]`, sorted.
pub(crate) fn crossings_of(offset: f64, amplitude: f64, r: f64, lo: f64, hi: f64) -> Vec<f64> {
    if amplitude == 0.0 {
        return Vec::new();
    }
    let x = -offset / amplitude;
    if !(-1.0..=1.0).contains(&x) {
        return Vec::new();
    }
    let base = x.asin();
    let mut out = Vec::new();
    for k in -2..=2 {
        let shift = 2.0 * PI * k as f64;
        for theta in [base + shift, PI - base + shift] {
            let u = r * theta;
            if u >= lo && u <= hi && !out.iter().any(|w: &f64| (w - u).abs() <= 1e-14 * r) {
                out.push(u);
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

/// The stacked rectangle and its identifications.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlatDomain {
    pub n: usize,
    pub r: f64,
    pub s: f64,
    pub tau: f64,
    pub identification: Identification,
}

/// Builds the rectangle `[−πr, πr] × [−s/2, ns − s/2]` for a figure.
pub fn build_domain(config: &FigureConfig) -> Result<FlatDomain> {
    let config = FigureConfig::new(config.n, config.r, config.s)?;
    let identification = match orientability(&config) {
        Orientability::NonOrientable => Identification::Klein,
        Orientability::Orientable => Identification::Torus,
    };
    Ok(FlatDomain { n: config.n, r: config.r, s: config.s, tau: config.tau(), identification })
}

impl FlatDomain {
    pub fn u_half_width(&self) -> f64 {
        PI * self.r
    }

    pub fn v_min(&self) -> f64 {
        -0.5 * self.s
    }

    pub fn v_max(&self) -> f64 {
        self.n as f64 * self.s - 0.5 * self.s
    }

    pub fn width(&self) -> f64 {
        2.0 * PI * self.r
    }

    pub fn height(&self) -> f64 {
        self.n as f64 * self.s
    }

    pub fn strip_center(&self, k: usize) -> f64 {
        k as f64 * self.s
    }

    /// `+1` for even strips, `−1` for odd (mirrored) strips.
    pub fn mirror_sign(&self, k: usize) -> f64 {
        if k.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    pub fn strip_of(&self, v: f64) -> usize {
        let k = ((v - self.v_min()) / self.s).floor();
        (k.max(0.0) as usize).min(self.n - 1)
    }

    fn slack(&self) -> f64 {
        1e-12 * (self.width() + self.height())
    }

    pub fn contains(&self, u: f64, v: f64) -> bool {
        let e = self.slack();
        u.abs() <= self.u_half_width() + e && v >= self.v_min() - e && v <= self.v_max() + e
    }

    /// Crease of strip `k` in global coordinates.
    pub fn crease(&self, k: usize) -> SineArc {
        SineArc {
            center: self.strip_center(k),
            amplitude: self.mirror_sign(k) * self.tau * self.r,
            r: self.r,
            u_start: -self.u_half_width(),
            u_end: self.u_half_width(),
        }
    }

    pub fn creases(&self) -> Vec<SineArc> {
        (0..self.n).map(|k| self.crease(k)).collect()
    }

    /// Line `v = level` spanning the rectangle, for `level` a strip boundary.
    pub fn strip_boundary(&self, index: usize) -> SineArc {
        SineArc {
            center: self.v_min() + index as f64 * self.s,
            amplitude: 0.0,
            r: self.r,
            u_start: -self.u_half_width(),
            u_end: self.u_half_width(),
        }
    }

    /// Inflection parameters as `(strip, u)`; `±πr` are identified, so each
    /// crease contributes `u = 0` and `u = πr`.
    pub fn inflection_points(&self) -> Vec<(usize, f64)> {
        (0..self.n).flat_map(|k| [(k, 0.0), (k, self.u_half_width())]).collect()
    }

    /// Image of a bottom-edge parameter on the top edge.
    pub fn glue_bottom_to_top(&self, u: f64) -> f64 {
        match self.identification {
            Identification::Klein => -u,
            Identification::Torus => u,
        }
    }

    /// Reduces any point of the plane to its representative in the
    /// rectangle, applying the identifications.
    pub fn canonicalize(&self, u: f64, v: f64) -> (f64, f64) {
        let (mut u, mut v) = (u, v);
        let h = self.height();
        let e = self.slack();
        while v < self.v_min() - e {
            v += h;
            u = self.glue_bottom_to_top(u);
        }
        while v > self.v_max() + e {
            v -= h;
            u = self.glue_bottom_to_top(u);
        }
        let w = self.width();
        while u > self.u_half_width() + e {
            u -= w;
        }
        while u < -self.u_half_width() - e {
            u += w;
        }
        (u, v)
    }

    /// Distance in the quotient (flat Klein bottle or torus) metric.
    pub fn quotient_distance(&self, a: [f64; 2], b: [f64; 2]) -> f64 {
        let (w, h) = (self.width(), self.height());
        let mut best = f64::INFINITY;
        for dv in -1i32..=1 {
            let flip = dv != 0 && self.identification == Identification::Klein;
            let bu = if flip { -b[0] } else { b[0] };
            let bv = b[1] + dv as f64 * h;
            for du in -1i32..=1 {
                let d = ((a[0] - bu - du as f64 * w).powi(2) + (a[1] - bv).powi(2)).sqrt();
                best = best.min(d);
            }
        }
        best
    }

    /// Splits an arc given in unwrapped coordinates (possibly running past
    /// the top or bottom edge) into arcs inside the rectangle.
    pub fn wrap_arc(&self, arc: &SineArc) -> Vec<SineArc> {
        let mut cuts = vec![arc.u_start];
        for level in [self.v_min(), self.v_max()] {
            cuts.extend(arc.crossings(level));
        }
        cuts.push(arc.u_end);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * self.r);

        let mut out = Vec::new();
        for pair in cuts.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if b - a <= 1e-12 * self.r {
                continue;
            }
            let mid = arc.value(0.5 * (a + b));
            let shift = if mid < self.v_min() {
                self.height()
            } else if mid > self.v_max() {
                -self.height()
            } else {
                0.0
            };
            let piece = if shift == 0.0 {
                SineArc { u_start: a, u_end: b, ..*arc }
            } else if self.identification == Identification::Klein {
                // v(u) = c + A sin(u/r) with u = −u' gives c − A sin(u'/r).
                SineArc { center: arc.center + shift, amplitude: -arc.amplitude, r: arc.r, u_start: -b, u_end: -a }
            } else {
                SineArc { center: arc.center + shift, u_start: a, u_end: b, ..*arc }
            };
            out.push(piece);
        }
        out
    }
}

/// Strip index and branch: the smooth piece a domain point belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chart {
    pub strip: usize,
    pub side: Side,
}

/// Property of φ that fails on an exceptional set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClaimedProperty {
    /// Continuous everywhere, smooth off finitely many curves.
    Smoothness,
    /// Local isometry off finitely many points.
    LocalIsometry,
    /// Injective off finitely many curves.
    Injectivity,
}

#[derive(Debug, Clone)]
pub struct CreaseCurve {
    pub strip: usize,
    pub domain: SineArc,
    pub fails: ClaimedProperty,
}

#[derive(Debug, Clone)]
pub struct InflectionPoint {
    pub strip: usize,
    pub domain_uv: [f64; 2],
    pub image: Point3,
    pub fails: ClaimedProperty,
}

#[derive(Debug, Clone)]
pub struct ExceptionalSets {
    pub crease_curves: Vec<CreaseCurve>,
    pub inflection_points: Vec<InflectionPoint>,
    pub intersection_curves: Vec<IntersectionCurve>,
}

impl ExceptionalSets {
    pub fn intersection_property(&self) -> ClaimedProperty {
        ClaimedProperty::Injectivity
    }
}

/// The map φ from the rectangle to the figure.
#[derive(Debug, Clone)]
pub struct AtlasMap {
    config: FigureConfig,
    domain: FlatDomain,
    elbow: ElbowMap,
    motions: Vec<RigidMotion>,
    closure_residual: f64,
    renormalizations: usize,
}

/// Chains the strip motions `G_{k+1} = G_k ∘ ρ ∘ T_s ∘ M_x`, starting from
/// `G_0 = id`, and checks that `G_n` returns to the identity.
pub fn chain_motions(config: &FigureConfig) -> Result<AtlasMap> {
    chain_with_step(config, None)
}

fn chain_with_step(config: &FigureConfig, step_override: Option<RigidMotion>) -> Result<AtlasMap> {
    let domain = build_domain(config)?;
    let elbow = ElbowMap::new(config.elbow_spec());
    let step = step_override.unwrap_or_else(|| {
        compose(
            &RigidMotion::reflection(&elbow.plane),
            &compose(&RigidMotion::translation(Vec3::new(0.0, config.s, 0.0)), &RigidMotion::mirror_x()),
        )
    });

    let mut renormalizations = 0;
    let mut motions = Vec::with_capacity(config.n + 1);
    motions.push(RigidMotion::identity());
    for k in 0..config.n {
        let next = compose_counting(&motions[k], &step, &mut renormalizations);
        motions.push(next);
    }

    let probes: Vec<Point3> = (0..16)
        .map(|i| elbow.f1(-PI * config.r + 2.0 * PI * config.r * i as f64 / 16.0, -0.5 * config.s))
        .collect();
    let closure_residual = motions[config.n].distance_from(&RigidMotion::identity(), &probes);
    if !(closure_residual <= CLOSURE_LIMIT) {
        return Err(Error::Construction { residual: closure_residual, limit: CLOSURE_LIMIT });
    }
    Ok(AtlasMap { config: *config, domain, elbow, motions, closure_residual, renormalizations })
}

impl AtlasMap {
    pub fn config(&self) -> &FigureConfig {
        &self.config
    }

    pub fn domain(&self) -> &FlatDomain {
        &self.domain
    }

    pub fn elbow(&self) -> &ElbowMap {
        &self.elbow
    }

    /// `G_k` for `k = 0..=n` (`G_n` is the closing motion).
    pub fn motion(&self, k: usize) -> &RigidMotion {
        &self.motions[k]
    }

    pub fn closure_residual(&self) -> f64 {
        self.closure_residual
    }

    pub fn renormalizations(&self) -> usize {
        self.renormalizations
    }

    pub fn orientability(&self) -> Orientability {
        orientability(&self.config)
    }

    /// Global `(u, v)` to strip-local elbow coordinates.
    pub fn to_local(&self, strip: usize, u: f64, v: f64) -> (f64, f64) {
        (self.domain.mirror_sign(strip) * u, v - self.domain.strip_center(strip))
    }

    pub fn to_global(&self, strip: usize, u: f64, v: f64) -> (f64, f64) {
        (self.domain.mirror_sign(strip) * u, v + self.domain.strip_center(strip))
    }

    pub fn chart_of(&self, u: f64, v: f64) -> Chart {
        let strip = self.domain.strip_of(v);
        let (lu, lv) = self.to_local(strip, u, v);
        Chart { strip, side: self.elbow.side_of(lu, lv) }
    }

    /// Evaluates a chart's smooth formula at any `(u, v)`.
    pub fn eval_chart(&self, chart: Chart, u: f64, v: f64) -> Point3 {
        let (lu, lv) = self.to_local(chart.strip, u, v);
        self.motions[chart.strip].apply(&self.elbow.branch(chart.side, lu, lv))
    }

    /// Analytic `[∂φ/∂u, ∂φ/∂v]` of a chart.
    pub fn jacobian_chart(&self, chart: Chart, u: f64, v: f64) -> [Vec3; 2] {
        let (lu, lv) = self.to_local(chart.strip, u, v);
        let [du, dv] = self.elbow.branch_jacobian(chart.side, lu, lv);
        let g = &self.motions[chart.strip];
        [self.domain.mirror_sign(chart.strip) * g.apply_vector(&du), g.apply_vector(&dv)]
    }

    pub fn phi(&self, u: f64, v: f64) -> Result<Point3> {
        if !self.domain.contains(u, v) {
            return Err(Error::Domain(format!("({u}, {v}) outside the flat rectangle")));
        }
        Ok(self.eval_chart(self.chart_of(u, v), u, v))
    }

    /// φ of the point's representative in the rectangle.
    pub fn phi_wrapped(&self, u: f64, v: f64) -> Point3 {
        let (u, v) = self.domain.canonicalize(u, v);
        self.eval_chart(self.chart_of(u, v), u, v)
    }

    /// Polygon vertex `k` (the corner folded by strip `k`).
    pub fn vertex(&self, k: usize) -> Point3 {
        self.motions[k % self.config.n].apply(&Point3::origin())
    }

    pub fn vertices(&self) -> Vec<Point3> {
        (0..self.config.n).map(|k| self.vertex(k)).collect()
    }

    /// Axis line `(point, unit direction)` of a chart's cylinder.
    pub fn axis_of(&self, chart: Chart) -> (Point3, Vec3) {
        let g = &self.motions[chart.strip];
        (g.apply(&Point3::origin()), g.apply_vector(&self.elbow.axis_direction(chart.side)))
    }

    /// Polygon edge `j` runs from vertex `j` to vertex `j+1`.
    pub fn tube_of(&self, chart: Chart) -> usize {
        match chart.side {
            Side::Above => chart.strip,
            Side::Below => (chart.strip + self.config.n - 1) % self.config.n,
        }
    }

    pub fn tube_axes(&self) -> Vec<(Point3, Vec3)> {
        (0..self.config.n).map(|j| self.axis_of(Chart { strip: j, side: Side::Above })).collect()
    }

    /// `min_j |dist(p, axis_j) − r|`.
    pub fn tube_residual(&self, p: &Point3) -> f64 {
        self.tube_axes()
            .iter()
            .map(|(o, d)| (line_distance(p, o, d) - self.config.r).abs())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn outward_normal(&self, chart: Chart, u: f64, v: f64) -> Vec3 {
        let (lu, _) = self.to_local(chart.strip, u, v);
        self.motions[chart.strip].apply_vector(&self.elbow.outward_normal(chart.side, lu))
    }

    /// Sign of `det[∂φ/∂u, ∂φ/∂v, outward normal]`.
    pub fn handedness(&self, chart: Chart, u: f64, v: f64) -> f64 {
        let [du, dv] = self.jacobian_chart(chart, u, v);
        du.cross(&dv).dot(&self.outward_normal(chart, u, v)).signum()
    }

    /// Image of the crease of strip `k` at global parameter `u`.
    pub fn crease_image(&self, k: usize, u: f64) -> Point3 {
        let v = self.domain.crease(k).value(u);
        self.eval_chart(Chart { strip: k, side: Side::Below }, u, v)
    }

    pub fn exceptional_sets(&self) -> Result<ExceptionalSets> {
        let crease_curves = (0..self.config.n)
            .map(|k| CreaseCurve { strip: k, domain: self.domain.crease(k), fails: ClaimedProperty::Smoothness })
            .collect();
        let inflection_points = self
            .domain
            .inflection_points()
            .into_iter()
            .map(|(k, u)| {
                let v = self.domain.strip_center(k);
                InflectionPoint {
                    strip: k,
                    domain_uv: [u, v],
                    image: self.crease_image(k, u),
                    fails: ClaimedProperty::LocalIsometry,
                }
            })
            .collect();
        let intersection_curves =
            (0..self.config.n).map(|k| intersection_closed_form(self, k)).collect::<Result<Vec<_>>>()?;
        Ok(ExceptionalSets { crease_curves, inflection_points, intersection_curves })
    }
}

pub(crate) fn line_distance(p: &Point3, origin: &Point3, dir: &Vec3) -> f64 {
    let w = p - origin;
    (w - w.dot(dir) * dir).norm()
}

#[cfg(test)]
pub(crate) fn chain_with_custom_step(config: &FigureConfig, step: RigidMotion) -> Result<AtlasMap> {
    chain_with_step(config, Some(step))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn atlas(n: usize, r: f64, s: f64) -> AtlasMap {
        chain_motions(&FigureConfig::new(n, r, s).unwrap()).unwrap()
    }

    #[test]
    fn config_errors() {
        let e = FigureConfig::new(2, 1.0, 2.0).unwrap_err().to_string();
        assert!(e.contains("degenerate polygon"), "{e}");
        let e = FigureConfig::new(3, 1.0, 1.0).unwrap_err().to_string();
        assert!(e.contains("crease exceeds strip"), "{e}");
        assert!((min_strip_height(3, 1.0) - 2.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!(FigureConfig::new(3, 1.0, 1.16).is_ok());
        assert!(FigureConfig::new(4, 1.0, 2.0).is_err());
    }

    #[test]
    fn triangle_domain_layout() {
        let d = build_domain(&FigureConfig { n: 3, r: 1.0, s: 2.0 }).unwrap();
        assert_eq!((d.v_min(), d.v_max()), (-1.0, 5.0));
        let creases = d.creases();
        assert_eq!(creases.len(), 3);
        assert_eq!(creases.iter().map(|c| c.center).collect::<Vec<_>>(), vec![0.0, 2.0, 4.0]);
        let signs: Vec<f64> = creases.iter().map(|c| c.amplitude.signum()).collect();
        assert_eq!(signs, vec![1.0, -1.0, 1.0]);
        assert_eq!(d.identification, Identification::Klein);
        assert_eq!(d.inflection_points().len(), 6);
    }

    #[test]
    fn even_polygons_glue_directly() {
        let d = build_domain(&FigureConfig { n: 4, r: 1.0, s: 3.0 }).unwrap();
        assert_eq!(d.identification, Identification::Torus);
        assert_eq!(d.glue_bottom_to_top(0.7), 0.7);
        assert_eq!(orientability(&FigureConfig { n: 5, r: 1.0, s: 5.0 }), Orientability::NonOrientable);
    }

    #[test]
    fn canonicalize_respects_identifications() {
        let d = build_domain(&FigureConfig { n: 3, r: 1.0, s: 2.0 }).unwrap();
        let (u, v) = d.canonicalize(0.3, -1.5);
        assert!((u + 0.3).abs() < 1e-15 && (v - 4.5).abs() < 1e-15);
        let (u, v) = d.canonicalize(PI + 0.5, 1.0);
        assert!((u - (0.5 - PI)).abs() < 1e-15 && v == 1.0);
        assert!(d.quotient_distance([PI, 1.0], [-PI, 1.0]) < 1e-15);
        assert!(d.quotient_distance([0.3, -1.0], [-0.3, 5.0]) < 1e-15);
    }

    #[test]
    fn wrap_arc_klein() {
        let d = build_domain(&FigureConfig { n: 3, r: 1.0, s: 2.0 }).unwrap();
        // Dips below the bottom edge for sin(u) > 1/√3.
        let arc = SineArc { center: 0.0, amplitude: -3f64.sqrt(), r: 1.0, u_start: 0.0, u_end: PI };
        let pieces = d.wrap_arc(&arc);
        assert_eq!(pieces.len(), 3);
        for p in &pieces {
            for [u, v] in p.sample(50) {
                assert!(d.contains(u, v), "({u}, {v})");
                let (cu, cv) = d.canonicalize(-u, v - 6.0);
                let _ = (cu, cv);
            }
        }
        let wrapped = pieces[1];
        let u = 1.2;
        assert!((wrapped.value(-u) - (arc.value(u) + 6.0)).abs() < 1e-14);
    }

    #[test]
    fn strip_zero_is_the_elbow() {
        let a = atlas(3, 1.0, 2.0);
        assert_eq!(*a.motion(0), RigidMotion::identity());
        for (u, v) in [(0.0, -1.0), (1.0, 0.2), (-2.0, 0.9)] {
            assert_eq!(a.phi(u, v).unwrap(), a.elbow().elbow(u, v).unwrap());
        }
    }

    #[test]
    fn closure_is_tight() {
        for (n, s) in [(3, 2.0), (4, 3.0), (5, 4.0), (6, 5.0), (9, 9.0)] {
            let a = atlas(n, 1.0, s);
            assert!(a.closure_residual() < 1e-12, "n={n}: {}", a.closure_residual());
            assert_eq!(a.renormalizations(), 0);
            assert!(a.motion(n).is_proper());
        }
    }

    #[test]
    fn wrong_miter_is_rejected() {
        let config = FigureConfig::new(3, 1.0, 2.0).unwrap();
        let bad_plane = crate::geometry::PlaneThroughOrigin::from_slope(3f64.sqrt()).unwrap();
        let step = compose(
            &RigidMotion::reflection(&bad_plane),
            &compose(&RigidMotion::translation(Vec3::new(0.0, 2.0, 0.0)), &RigidMotion::mirror_x()),
        );
        match chain_with_custom_step(&config, step) {
            Err(Error::Construction { residual, .. }) => assert!(residual > 1e-6),
            other => panic!("expected construction error, got {other:?}"),
        }
    }

    #[test]
    fn triangle_axes_close_up() {
        let a = atlas(3, 1.0, 2.0);
        let v = a.vertices();
        for k in 0..3 {
            let edge = (v[(k + 1) % 3] - v[k]).norm();
            assert!((edge - 2.0).abs() < 1e-9);
        }
        for p in &v {
            assert!(p.z.abs() < 1e-15);
        }
    }

    #[test]
    fn square_closes() {
        let a = atlas(4, 1.0, 3.0);
        let v = a.vertices();
        for k in 0..4 {
            assert!(((v[(k + 1) % 4] - v[k]).norm() - 3.0).abs() < 1e-9);
            let d0 = v[(k + 1) % 4] - v[k];
            let d1 = v[(k + 2) % 4] - v[(k + 1) % 4];
            assert!(d0.dot(&d1).abs() < 1e-9);
        }
    }

    #[test]
    fn phi_examples() {
        let a = atlas(3, 1.0, 2.0);
        for v in [-1.0, 0.3, 2.2, 4.9] {
            assert!((a.phi(-PI, v).unwrap() - a.phi(PI, v).unwrap()).norm() < 1e-12);
        }
        assert!((a.phi(0.3, -1.0).unwrap() - a.phi(-0.3, 5.0).unwrap()).norm() < 1e-9);
        assert!(a.phi(0.0, 5.5).is_err());
        assert!(a.phi(3.5, 0.0).is_err());

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10_000 {
            let (u, v) = (rng.random_range(-PI..PI), rng.random_range(-1.0..5.0));
            assert!(a.tube_residual(&a.phi(u, v).unwrap()) < 1e-9);
        }
    }

    #[test]
    fn strip_boundaries_are_continuous() {
        for (n, s) in [(3, 2.0), (4, 2.5), (5, 3.0)] {
            let a = atlas(n, 1.0, s);
            for k in 0..n - 1 {
                let v = a.domain().v_min() + (k + 1) as f64 * s;
                for i in 0..=200 {
                    let u = -PI + 2.0 * PI * i as f64 / 200.0;
                    let lower = a.eval_chart(Chart { strip: k, side: Side::Above }, u, v);
                    let upper = a.eval_chart(Chart { strip: k + 1, side: Side::Below }, u, v);
                    assert!((lower - upper).norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn exceptional_set_counts() {
        let a = atlas(3, 1.0, 2.0);
        let ex = a.exceptional_sets().unwrap();
        assert_eq!(ex.crease_curves.len(), 3);
        assert_eq!(ex.inflection_points.len(), 6);
        assert_eq!(ex.intersection_curves.len(), 3);
        for p in &ex.inflection_points {
            let (lu, _) = a.to_local(p.strip, p.domain_uv[0], p.domain_uv[1]);
            assert!((a.elbow().fold_dihedral(lu).unwrap() - PI).abs() < 1e-9);
        }
    }

    #[test]
    fn handedness_flips_once_per_crease() {
        for (n, s) in [(3, 2.0), (4, 2.5), (5, 3.0), (6, 4.0)] {
            let a = atlas(n, 1.0, s);
            let d = *a.domain();
            let u0 = 0.9;
            let steps = 4000;
            let mut flips = 0;
            let mut prev = None;
            for i in 0..=steps {
                let v = d.v_min() + d.height() * i as f64 / steps as f64;
                let h = a.handedness(a.chart_of(u0, v), u0, v);
                if let Some(p) = prev {
                    if p != h {
                        flips += 1;
                    }
                }
                prev = Some(h);
            }
            assert_eq!(flips, n);
        }
    }
}
