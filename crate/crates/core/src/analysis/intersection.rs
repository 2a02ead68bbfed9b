//! The second intersection ellipse of two adjacent cylinders, where the
//! incoming tube passes through the outgoing one, and a brute-force oracle
//! for it.

use std::f64::consts::PI;

use crate::atlas::{line_distance, AtlasMap, SineArc};
use crate::crease::Side;
use crate::error::{Error, Result};
use crate::geometry::{Point3, RigidMotion, Vec3};

/// Pass-through curve at the joint of strip `pair`, where tube `pair − 1`
/// (incoming) meets tube `pair` (outgoing).
///
/// In strip-local coordinates the curve lies in the plane `x + τy = 0` and
/// its pre-image is `v = −(r/τ)·sin(u/r)`. The half with local `u ≥ 0` lies on
/// the incoming tube, the half with `u ≤ 0` on the outgoing tube, and both map
/// onto the same semi-ellipse.
#[derive(Debug, Clone)]
pub struct IntersectionCurve {
    pub pair: usize,
    pub incoming_tube: usize,
    pub outgoing_tube: usize,
    pub plane_normal: Vec3,
    pub center: Point3,
    pub major_axis: Vec3,
    pub minor_axis: Vec3,
    pub semi_major: f64,
    pub semi_minor: f64,
    /// Full pre-image sine in global domain coordinates, not wrapped.
    pub preimage: SineArc,
    /// Material pieces of the incoming half, wrapped into the rectangle.
    pub incoming_arc: Vec<SineArc>,
    /// Material pieces of the outgoing half, wrapped into the rectangle.
    pub outgoing_arc: Vec<SineArc>,
    motion: RigidMotion,
    radius: f64,
}

/// Which half of the pre-image a slit follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Half {
    Incoming,
    Outgoing,
}

impl IntersectionCurve {
    /// Point of the full ellipse; `t ∈ [0, πr]` is the part on the figure.
    pub fn point(&self, t: f64) -> Point3 {
        let a = t / self.radius;
        self.center + a.sin() * self.semi_major * self.major_axis + a.cos() * self.semi_minor * self.minor_axis
    }

    pub fn retained_range(&self) -> (f64, f64) {
        (0.0, PI * self.radius)
    }

    pub fn sample_retained(&self, count: usize) -> Vec<Point3> {
        let count = count.max(2);
        let (a, b) = self.retained_range();
        (0..count).map(|i| self.point(a + (b - a) * i as f64 / (count - 1) as f64)).collect()
    }

    pub fn arcs(&self, half: Half) -> &[SineArc] {
        match half {
            Half::Incoming => &self.incoming_arc,
            Half::Outgoing => &self.outgoing_arc,
        }
    }

    /// Distance from `p` to the semi-ellipse on the figure.
    pub fn distance_to_retained(&self, p: &Point3) -> f64 {
        let (a, b) = self.retained_range();
        self.distance_on(p, a, b)
    }

    /// Distance from `p` to the whole ellipse.
    pub fn distance_to_ellipse(&self, p: &Point3) -> f64 {
        self.distance_on(p, -PI * self.radius, PI * self.radius)
    }

    fn distance_on(&self, p: &Point3, lo: f64, hi: f64) -> f64 {
        let m = 512;
        let f = |t: f64| (self.point(t) - p).norm();
        let step = (hi - lo) / m as f64;
        let best = (0..=m).min_by(|&i, &j| f(lo + step * i as f64).total_cmp(&f(lo + step * j as f64))).unwrap();
        let (mut a, mut b) = ((lo + step * (best as f64 - 1.0)).max(lo), (lo + step * (best as f64 + 1.0)).min(hi));
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let (mut c, mut d) = (b - g * (b - a), a + g * (b - a));
        let (mut fc, mut fd) = (f(c), f(d));
        for _ in 0..80 {
            if fc < fd {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = f(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = f(d);
            }
        }
        fc.min(fd).min(f(lo)).min(f(hi))
    }

    /// Image in strip-local frame before the strip motion: handy for tests.
    pub fn local_point(&self, t: f64) -> Point3 {
        self.motion.inverse().apply(&self.point(t))
    }
}

/// Closed form of the pass-through ellipse at joint `k` (`0 ≤ k < n`).
pub fn intersection_closed_form(atlas: &AtlasMap, k: usize) -> Result<IntersectionCurve> {
    let cfg = atlas.config();
    if k >= cfg.n {
        return Err(Error::Unsupported(format!(
            "pair {k}: only the {} adjacent pairs 0..{} have a closed form",
            cfg.n,
            cfg.n - 1
        )));
    }
    let (r, tau) = (cfg.r, cfg.tau());
    let amplitude = r / tau;
    let g = *atlas.motion(k);
    let domain = atlas.domain();
    let sigma = domain.mirror_sign(k);

    let semi_major = (r * r + amplitude * amplitude).sqrt();
    let major_axis = g.apply_vector(&(Vec3::new(r, -amplitude, 0.0) / semi_major));
    let minor_axis = g.apply_vector(&Vec3::new(0.0, 0.0, 1.0));
    let plane_normal = g.apply_vector(&Vec3::new(1.0, tau, 0.0).normalize());

    let preimage = SineArc {
        center: domain.strip_center(k),
        amplitude: -sigma * amplitude,
        r,
        u_start: -PI * r,
        u_end: PI * r,
    };
    let mut curve = IntersectionCurve {
        pair: k,
        incoming_tube: (k + cfg.n - 1) % cfg.n,
        outgoing_tube: k,
        plane_normal,
        center: g.apply(&Point3::origin()),
        major_axis,
        minor_axis,
        semi_major,
        semi_minor: r,
        preimage,
        incoming_arc: Vec::new(),
        outgoing_arc: Vec::new(),
        motion: g,
        radius: r,
    };

    // Local u ≥ 0 is the incoming half; global u = σ·(local u).
    let half_span = |local_sign: f64| {
        let (a, b) = if sigma * local_sign > 0.0 { (0.0, PI * r) } else { (-PI * r, 0.0) };
        SineArc { u_start: a, u_end: b, ..preimage }
    };
    let incoming = half_span(1.0);
    let outgoing = half_span(-1.0);
    let target_in = |u: f64| curve.point(sigma * u);
    let target_out = |u: f64| curve.point(-sigma * u);
    let inc = clip_to_material(atlas, &incoming, &target_in);
    let out = clip_to_material(atlas, &outgoing, &target_out);
    curve.incoming_arc = inc.iter().flat_map(|a| domain.wrap_arc(a)).collect();
    curve.outgoing_arc = out.iter().flat_map(|a| domain.wrap_arc(a)).collect();
    Ok(curve)
}

/// Sub-arcs whose image under φ is the expected ellipse point.
fn clip_to_material(atlas: &AtlasMap, arc: &SineArc, target: &dyn Fn(f64) -> Point3) -> Vec<SineArc> {
    let cfg = atlas.config();
    let tol = 1e-8 * (cfg.r + cfg.s);
    let ok = |u: f64| (atlas.phi_wrapped(u, arc.value(u)) - target(u)).norm() < tol;
    let m = 1024;
    let at = |i: usize| arc.u_start + (arc.u_end - arc.u_start) * i as f64 / m as f64;
    let refine = |mut good: f64, mut bad: f64| {
        for _ in 0..60 {
            let mid = 0.5 * (good + bad);
            if ok(mid) {
                good = mid;
            } else {
                bad = mid;
            }
        }
        good
    };

    let mut out = Vec::new();
    let mut start: Option<f64> = None;
    for i in 0..=m {
        let u = at(i);
        match (ok(u), start) {
            (true, None) => start = Some(if i == 0 { u } else { refine(u, at(i - 1)) }),
            (false, Some(a)) => {
                out.push(SineArc { u_start: a, u_end: refine(at(i - 1), u), ..*arc });
                start = None;
            }
            _ => {}
        }
    }
    if let Some(a) = start {
        out.push(SineArc { u_start: a, u_end: arc.u_end, ..*arc });
    }
    out.retain(|a| a.u_end - a.u_start > 1e-9 * cfg.r);
    out
}

/// Brute-force intersection of the two cylinders meeting at joint `k`.
pub fn intersection_oracle(atlas: &AtlasMap, k: usize, grid_n: usize) -> Result<Vec<Point3>> {
    let cfg = atlas.config();
    if k >= cfg.n {
        return Err(Error::Unsupported(format!("pair {k} is not an adjacent pair")));
    }
    if grid_n < 64 {
        return Err(Error::Config(format!("oracle grid {grid_n} below minimum 64")));
    }
    let incoming = atlas.axis_of(crate::atlas::Chart { strip: k, side: Side::Below });
    let outgoing = atlas.axis_of(crate::atlas::Chart { strip: k, side: Side::Above });
    let extent = 2.0 * (cfg.r / cfg.tau() + cfg.tau() * cfg.r + cfg.r);
    Ok(cylinder_pair_oracle(incoming, outgoing, cfg.r, extent, grid_n))
}

/// Points where infinite cylinder A (axis through `a.0` along `a.1`) meets
/// cylinder B, found along axial lines of A by sign changes of
/// `dist(·, axis B) − r` refined by bisection.
pub fn cylinder_pair_oracle(a: (Point3, Vec3), b: (Point3, Vec3), r: f64, half_extent: f64, grid_n: usize) -> Vec<Point3> {
    let dir = a.1.normalize();
    let helper = if dir.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
    let e1 = dir.cross(&helper).normalize();
    let e2 = dir.cross(&e1);
    let b_dir = b.1.normalize();

    let mut points = Vec::new();
    for i in 0..grid_n {
        let theta = 2.0 * PI * i as f64 / grid_n as f64;
        let offset = r * (theta.cos() * e1 + theta.sin() * e2);
        let at = |t: f64| a.0 + t * dir + offset;
        let f = |t: f64| line_distance(&at(t), &b.0, &b_dir) - r;
        let ts: Vec<f64> = (0..grid_n).map(|j| -half_extent + 2.0 * half_extent * j as f64 / (grid_n - 1) as f64).collect();
        for w in ts.windows(2) {
            let (mut lo, mut hi) = (w[0], w[1]);
            let (flo, fhi) = (f(lo), f(hi));
            if flo == 0.0 {
                points.push(at(lo));
                continue;
            }
            if flo.signum() == fhi.signum() {
                continue;
            }
            let lo_sign = flo.signum();
            while hi - lo > 1e-13 * half_extent.max(1.0) {
                let mid = 0.5 * (lo + hi);
                let fm = f(mid);
                if fm.abs() < 1e-13 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if fm.signum() == lo_sign {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            points.push(at(0.5 * (lo + hi)));
        }
    }
    points
}

/// Splits oracle points by the closer of the fold plane and the pass-through
/// plane at joint `k`: `(fold, pass_through)`.
pub fn split_by_plane(atlas: &AtlasMap, curve: &IntersectionCurve, points: &[Point3]) -> (Vec<Point3>, Vec<Point3>) {
    let fold_normal = atlas.motion(curve.pair).apply_vector(&atlas.elbow().plane.normal());
    let mut fold = Vec::new();
    let mut pass = Vec::new();
    for p in points {
        let w = p - curve.center;
        if w.dot(&fold_normal).abs() < w.dot(&curve.plane_normal).abs() {
            fold.push(*p);
        } else {
            pass.push(*p);
        }
    }
    (fold, pass)
}

/// One-sided Hausdorff distance from `points` to the full ellipse.
pub fn hausdorff_to_curve(curve: &IntersectionCurve, points: &[Point3]) -> f64 {
    points.iter().map(|p| curve.distance_to_ellipse(p)).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atlas::{chain_motions, FigureConfig};

    fn atlas(n: usize, s: f64) -> AtlasMap {
        chain_motions(&FigureConfig::new(n, 1.0, s).unwrap()).unwrap()
    }

    #[test]
    fn triangle_local_plane_and_amplitude() {
        let a = atlas(3, 2.0);
        let c = intersection_closed_form(&a, 0).unwrap();
        assert!((c.preimage.amplitude.abs() - 3f64.sqrt()).abs() < 1e-12);
        let n = c.plane_normal;
        // y = −√3 x in the local frame of strip 0.
        assert!((n.y / n.x - 3f64.sqrt().recip()).abs() < 1e-12);
        for i in 0..=100 {
            let p = c.local_point(-PI + 2.0 * PI * i as f64 / 100.0);
            assert!((p.y + 3f64.sqrt() * p.x).abs() < 1e-12);
        }
    }

    #[test]
    fn curve_lies_on_both_tubes() {
        for (n, s) in [(3, 2.0), (4, 3.0), (5, 4.0), (6, 5.0)] {
            let a = atlas(n, s);
            let axes = a.tube_axes();
            for k in 0..n {
                let c = intersection_closed_form(&a, k).unwrap();
                for p in c.sample_retained(200) {
                    for j in [c.incoming_tube, c.outgoing_tube] {
                        let (o, d) = axes[j];
                        assert!((line_distance(&p, &o, &d) - 1.0).abs() < 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn ellipses_cross_at_inflection_images() {
        let a = atlas(3, 2.0);
        let c = intersection_closed_form(&a, 1).unwrap();
        let fold_normal = a.motion(1).apply_vector(&a.elbow().plane.normal());
        for t in [0.0, PI] {
            let p = c.point(t);
            assert!((p - c.center).dot(&fold_normal).abs() < 1e-12);
            assert!((p - c.center).dot(&c.plane_normal).abs() < 1e-12);
        }
        let ex = a.exceptional_sets().unwrap();
        for ip in ex.inflection_points.iter().filter(|p| p.strip == 1) {
            assert!(c.distance_to_retained(&ip.image) < 1e-9);
        }
    }

    #[test]
    fn both_halves_map_onto_the_semi_ellipse() {
        for (n, s) in [(3, 2.0), (4, 3.0), (5, 4.0)] {
            let a = atlas(n, s);
            for k in 0..n {
                let c = intersection_closed_form(&a, k).unwrap();
                for half in [Half::Incoming, Half::Outgoing] {
                    let arcs = c.arcs(half);
                    let length: f64 = arcs.iter().map(|x| x.u_end - x.u_start).sum();
                    assert!((length - PI).abs() < 1e-9, "n={n} k={k} {half:?}: {length}");
                    for arc in arcs {
                        for [u, v] in arc.sample(64) {
                            assert!(a.domain().contains(u, v));
                            assert!(c.distance_to_retained(&a.phi(u, v).unwrap()) < 1e-9);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn oracle_matches_closed_form() {
        for (n, s) in [(3, 2.0), (4, 3.0), (5, 4.0), (6, 5.0)] {
            let a = atlas(n, s);
            let c = intersection_closed_form(&a, 1).unwrap();
            let pts = intersection_oracle(&a, 1, 128).unwrap();
            let (fold, pass) = split_by_plane(&a, &c, &pts);
            assert!(!fold.is_empty() && !pass.is_empty());
            assert!(hausdorff_to_curve(&c, &pass) < 1e-6, "n={n}");
        }
    }

    #[test]
    fn oracle_empty_for_separated_cylinders() {
        let a = (Point3::origin(), Vec3::y());
        let b = (Point3::new(0.0, 0.0, 10.0), Vec3::x());
        assert!(cylinder_pair_oracle(a, b, 1.0, 20.0, 128).is_empty());
    }

    #[test]
    fn errors() {
        let a = atlas(3, 2.0);
        assert!(matches!(intersection_closed_form(&a, 3), Err(Error::Unsupported(_))));
        assert!(matches!(intersection_oracle(&a, 0, 32), Err(Error::Config(_))));
    }
}
