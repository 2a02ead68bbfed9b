//! Continuity across creases and strip seams, and the edge identifications.

use std::f64::consts::PI;

use super::{CheckResult, Tolerances};
use crate::atlas::{AtlasMap, Chart, Identification};
use crate::crease::Side;

fn params(lo: f64, hi: f64, count: usize) -> impl Iterator<Item = f64> {
    (0..count).map(move |i| lo + (hi - lo) * i as f64 / (count - 1).max(1) as f64)
}

/// Gap between the two branches of each strip along its crease.
pub fn crease_gap(atlas: &AtlasMap, samples: usize) -> f64 {
    let d = atlas.domain();
    let mut worst: f64 = 0.0;
    for k in 0..d.n {
        let crease = d.crease(k);
        for u in params(-PI * d.r, PI * d.r, samples) {
            let v = crease.value(u);
            let below = atlas.eval_chart(Chart { strip: k, side: Side::Below }, u, v);
            let above = atlas.eval_chart(Chart { strip: k, side: Side::Above }, u, v);
            worst = worst.max((below - above).norm());
        }
    }
    worst
}

/// Gap between strip `k`'s top edge and strip `k+1`'s bottom edge.
pub fn seam_gap(atlas: &AtlasMap, samples: usize) -> f64 {
    let d = atlas.domain();
    let mut worst: f64 = 0.0;
    for k in 0..d.n - 1 {
        let v = d.v_min() + (k + 1) as f64 * d.s;
        for u in params(-PI * d.r, PI * d.r, samples) {
            let lower = atlas.eval_chart(Chart { strip: k, side: Side::Above }, u, v);
            let upper = atlas.eval_chart(Chart { strip: k + 1, side: Side::Below }, u, v);
            worst = worst.max((lower - upper).norm());
        }
    }
    worst
}

/// `max |φ(−πr, v) − φ(πr, v)|`.
pub fn vertical_gap(atlas: &AtlasMap, samples: usize) -> f64 {
    let d = atlas.domain();
    params(d.v_min(), d.v_max(), samples)
        .map(|v| (atlas.phi(-PI * d.r, v).unwrap() - atlas.phi(PI * d.r, v).unwrap()).norm())
        .fold(0.0, f64::max)
}

/// `max |φ(u, bottom) − φ(u′, top)|` with `u′` given by `rule`.
pub fn identification_residual(atlas: &AtlasMap, rule: Identification, samples: usize) -> f64 {
    let d = atlas.domain();
    params(-PI * d.r, PI * d.r, samples)
        .map(|u| {
            let top_u = match rule {
                Identification::Klein => -u,
                Identification::Torus => u,
            };
            (atlas.phi(u, d.v_min()).unwrap() - atlas.phi(top_u, d.v_max()).unwrap()).norm()
        })
        .fold(0.0, f64::max)
}

pub fn crease_and_closure_checks(atlas: &AtlasMap, samples: usize, tol: &Tolerances) -> Vec<CheckResult> {
    let d = atlas.domain();
    let rule = d.identification;
    let wrong = match rule {
        Identification::Klein => Identification::Torus,
        Identification::Torus => Identification::Klein,
    };
    let horizontal = identification_residual(atlas, rule, samples);
    let sabotaged = identification_residual(atlas, wrong, samples);
    let rule_name = match rule {
        Identification::Klein => "klein (u ↦ −u)",
        Identification::Torus => "torus (u ↦ u)",
    };
    vec![
        CheckResult::new("crease_continuity", samples * d.n, crease_gap(atlas, samples), tol.analytic, "max gap between branches on each crease"),
        CheckResult::new("strip_boundary_continuity", samples * (d.n - 1), seam_gap(atlas, samples), tol.chain, "max gap across strip seams"),
        CheckResult::new("vertical_identification", samples, vertical_gap(atlas, samples), tol.analytic, "φ(−πr, v) vs φ(πr, v)"),
        CheckResult::new("horizontal_identification", samples, horizontal, tol.chain, format!("rule {rule_name}")),
        // Passes when the wrong gluing rule is detected: residual = tolerance / sabotaged gap.
        CheckResult::new(
            "horizontal_identification_sabotage",
            samples,
            tol.chain / sabotaged.max(f64::MIN_POSITIVE),
            1.0,
            format!("wrong rule leaves gap {sabotaged:.6e}"),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atlas::{chain_motions, FigureConfig};

    #[test]
    fn all_identifications_hold() {
        for (n, s) in [(3, 2.0), (4, 3.0), (5, 4.0), (6, 5.0)] {
            let a = chain_motions(&FigureConfig::new(n, 1.0, s).unwrap()).unwrap();
            for c in crease_and_closure_checks(&a, 1000, &Tolerances::default()) {
                assert!(c.pass, "n={n}: {c:?}");
            }
        }
    }

    #[test]
    fn dropping_the_flip_fails_for_triangle() {
        let a = chain_motions(&FigureConfig::new(3, 1.0, 2.0).unwrap()).unwrap();
        assert!(identification_residual(&a, Identification::Torus, 1000) > 0.1);
        assert!(identification_residual(&a, Identification::Klein, 1000) < 1e-9);
    }
}
