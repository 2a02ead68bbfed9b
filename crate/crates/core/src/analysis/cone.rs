//! Cone angle: image length of a small domain circle divided by its radius.

use std::f64::consts::PI;

use super::{CheckResult, Tolerances};
use crate::atlas::AtlasMap;

const CIRCLE_POINTS: usize = 4096;

/// Polyline length of `φ(circle of radius eps around point)` over `eps`.
/// The circle may leave the rectangle; it is evaluated through the
/// identifications. Segments whose ends fall in different charts are split
/// where the circle crosses the chart boundary, so a fold is not cut short.
pub fn cone_angle(atlas: &AtlasMap, point: [f64; 2], eps: f64) -> f64 {
    let d = atlas.domain();
    let at = |t: f64| {
        let (u, v) = d.canonicalize(point[0] + eps * t.cos(), point[1] + eps * t.sin());
        (atlas.chart_of(u, v), atlas.eval_chart(atlas.chart_of(u, v), u, v))
    };
    let step = 2.0 * PI / CIRCLE_POINTS as f64;
    let mut length = 0.0;
    let (mut prev_chart, mut prev) = at(0.0);
    for i in 1..=CIRCLE_POINTS {
        let t = step * i as f64;
        let (chart, p) = at(t);
        if chart == prev_chart {
            length += (p - prev).norm();
        } else {
            let (mut lo, mut hi) = (t - step, t);
            for _ in 0..50 {
                let mid = 0.5 * (lo + hi);
                if at(mid).0 == prev_chart {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let mid = at(0.5 * (lo + hi)).1;
            length += (mid - prev).norm() + (p - mid).norm();
        }
        prev_chart = chart;
        prev = p;
    }
    length / eps
}

fn worst_defect(atlas: &AtlasMap, points: &[[f64; 2]], eps: f64) -> f64 {
    points.iter().map(|p| (cone_angle(atlas, *p, eps) - 2.0 * PI).abs()).fold(0.0, f64::max)
}

/// Cone angle at regular points and at crease points away from inflections.
pub fn cone_angle_checks(atlas: &AtlasMap, tol: &Tolerances) -> Vec<CheckResult> {
    let d = atlas.domain();
    let eps = tol.eps_factor * d.r;
    let mut regular = Vec::new();
    let mut crease = Vec::new();
    for k in 0..d.n {
        let c = d.crease(k);
        for frac in [-0.75, -0.5, -0.2, 0.3, 0.5, 0.8] {
            let u = frac * PI * d.r;
            crease.push([u, c.value(u)]);
            let off = 0.5 * (0.5 * d.s - d.tau * d.r);
            regular.push([u, d.strip_center(k) + c.amplitude.signum() * (d.tau * d.r + off)]);
        }
    }
    // Corners and edges exercise the identifications.
    regular.push([-PI * d.r, d.v_min()]);
    regular.push([0.4 * d.r, d.v_max()]);
    vec![
        CheckResult::new("cone_angle_regular", regular.len(), worst_defect(atlas, &regular, eps), tol.cone, format!("|cone − 2π| at eps = {eps:e}")),
        CheckResult::new("cone_angle_crease", crease.len(), worst_defect(atlas, &crease, eps), tol.cone, format!("|cone − 2π| at non-inflection crease points, eps = {eps:e}")),
    ]
}
