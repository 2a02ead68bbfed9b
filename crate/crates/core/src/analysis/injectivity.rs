//! Scan for pairs of far-apart domain points with the same image.
//!
//! Samples whose images land within twice the sample spacing on different
//! tubes are refined onto the intersection of the two cylinders, and the
//! refined point's pre-images are recovered chart by chart. A collision is a
//! point with two pre-images farther apart than `10·eps` in the quotient
//! metric; each one must sit on a predicted pass-through semi-ellipse.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::intersection::{intersection_closed_form, IntersectionCurve};
use super::{stratified_samples, CheckResult};
use crate::atlas::{line_distance, AtlasMap};
use crate::crease::Side;
use crate::error::Result;
use crate::geometry::{Point3, Vec3};

#[derive(Debug, Clone)]
pub struct Collision {
    pub point: Point3,
    pub preimages: Vec<[f64; 2]>,
    /// Joint of the nearest predicted curve and the distance to it.
    pub nearest: (usize, f64),
}

#[derive(Debug, Clone)]
pub struct InjectivityScan {
    pub check: CheckResult,
    pub candidates: usize,
    pub collisions: Vec<Collision>,
}

impl InjectivityScan {
    /// Joints whose curve attracted at least one collision.
    pub fn joints_hit(&self) -> Vec<usize> {
        let mut j: Vec<usize> = self.collisions.iter().map(|c| c.nearest.0).collect();
        j.sort_unstable();
        j.dedup();
        j
    }
}

/// Every domain point (in the rectangle) that φ sends to `x`.
pub fn preimages(atlas: &AtlasMap, x: &Point3, tol: f64) -> Vec<[f64; 2]> {
    let d = atlas.domain();
    let r = d.r;
    let mut out: Vec<[f64; 2]> = Vec::new();
    for strip in 0..d.n {
        for side in [Side::Below, Side::Above] {
            let mut local = atlas.motion(strip).inverse().apply(x);
            if side == Side::Above {
                local = atlas.elbow().plane.reflect(&local);
            }
            let lu = r * local.x.atan2(local.z);
            let (u, v) = atlas.to_global(strip, lu, local.y);
            let (u, v) = d.canonicalize(u, v);
            if !d.contains(u, v) {
                continue;
            }
            if (atlas.phi_wrapped(u, v) - x).norm() > tol {
                continue;
            }
            if out.iter().all(|q| d.quotient_distance(*q, [u, v]) > 1e-6 * r) {
                out.push([u, v]);
            }
        }
    }
    out
}

/// Moves `x` onto both cylinders (Gauss-Newton, minimum-norm steps).
fn refine_on_both(x: Point3, a: (Point3, Vec3), b: (Point3, Vec3), r: f64) -> Option<Point3> {
    let radial = |p: &Point3, axis: &(Point3, Vec3)| {
        let w = p - axis.0;
        let perp = w - w.dot(&axis.1) * axis.1;
        let d = perp.norm();
        (d - r, if d > 0.0 { perp / d } else { Vec3::zeros() })
    };
    let mut p = x;
    for _ in 0..200 {
        let (fa, ga) = radial(&p, &a);
        let (fb, gb) = radial(&p, &b);
        if fa.abs().max(fb.abs()) < 1e-13 * r.max(1.0) {
            return Some(p);
        }
        let (aa, ab, bb) = (ga.dot(&ga), ga.dot(&gb), gb.dot(&gb));
        let det = aa * bb - ab * ab;
        if det > 1e-10 {
            let y0 = (bb * fa - ab * fb) / det;
            let y1 = (aa * fb - ab * fa) / det;
            p -= y0 * ga + y1 * gb;
        } else {
            p -= fa * ga;
            let (fb, gb) = radial(&p, &b);
            p -= fb * gb;
        }
    }
    let (fa, _) = radial(&p, &a);
    let (fb, _) = radial(&p, &b);
    (fa.abs().max(fb.abs()) < 1e-9 * r.max(1.0)).then_some(p)
}

pub fn injectivity_scan(atlas: &AtlasMap, n_samples: usize, eps: f64, seed: u64) -> Result<InjectivityScan> {
    let d = *atlas.domain();
    let curves: Vec<IntersectionCurve> = (0..d.n).map(|k| intersection_closed_form(atlas, k)).collect::<Result<_>>()?;
    let axes = atlas.tube_axes();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = stratified_samples(&d, n_samples, &mut rng);
    let pts: Vec<(Point3, usize, [f64; 2])> = samples
        .iter()
        .map(|&(c, u, v)| (atlas.eval_chart(c, u, v), atlas.tube_of(c), [u, v]))
        .collect();

    let spacing = (d.width() * d.height() / n_samples.max(1) as f64).sqrt();
    let h = 2.0 * spacing;
    let key = |p: &Point3| ((p.x / h).floor() as i64, (p.y / h).floor() as i64, (p.z / h).floor() as i64);
    let mut grid: HashMap<(i64, i64, i64), Vec<usize>> = HashMap::new();
    for (i, (p, _, _)) in pts.iter().enumerate() {
        grid.entry(key(p)).or_default().push(i);
    }

    let threshold = 10.0 * eps;
    let tol = 1e-7 * (d.r + d.s);
    let mut candidates = 0;
    let mut collisions = Vec::new();
    for (i, (p, tube_i, uv_i)) in pts.iter().enumerate() {
        let (cx, cy, cz) = key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    let Some(cell) = grid.get(&(cx + dx, cy + dy, cz + dz)) else { continue };
                    for &j in cell {
                        if j <= i {
                            continue;
                        }
                        let (q, tube_j, uv_j) = &pts[j];
                        if tube_i == tube_j || (p - q).norm() >= h || d.quotient_distance(*uv_i, *uv_j) <= threshold {
                            continue;
                        }
                        candidates += 1;
                        let mid = Point3::from(0.5 * (p.coords + q.coords));
                        let Some(x) = refine_on_both(mid, axes[*tube_i], axes[*tube_j], d.r) else { continue };
                        if (x - mid).norm() > 2.0 * h {
                            continue;
                        }
                        let pre = preimages(atlas, &x, tol);
                        let far = pre.iter().enumerate().any(|(a, pa)| {
                            pre[a + 1..].iter().any(|pb| d.quotient_distance(*pa, *pb) > threshold)
                        });
                        if !far {
                            continue;
                        }
                        let nearest = curves
                            .iter()
                            .map(|c| (c.pair, c.distance_to_retained(&x)))
                            .min_by(|a, b| a.1.total_cmp(&b.1))
                            .unwrap_or((usize::MAX, f64::INFINITY));
                        collisions.push(Collision { point: x, preimages: pre, nearest });
                    }
                }
            }
        }
    }

    let worst = collisions.iter().map(|c| c.nearest.1).fold(0.0, f64::max);
    let notes = format!(
        "{} collisions from {} candidate pairs; all must lie within 10·eps of a pass-through curve",
        collisions.len(),
        candidates
    );
    let check = CheckResult::new("injectivity_scan", n_samples, worst, threshold, notes);
    Ok(InjectivityScan { check, candidates, collisions })
}

/// Distance from a point to the nearest tube surface, for diagnostics.
pub fn tube_gap(atlas: &AtlasMap, p: &Point3) -> f64 {
    atlas.tube_axes().iter().map(|(o, dir)| (line_distance(p, o, dir) - atlas.config().r).abs()).fold(f64::INFINITY, f64::min)
}
