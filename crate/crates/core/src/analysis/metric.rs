//! First-fundamental-form checks: `JᵀJ` against the identity.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{stratified_samples, CheckResult, ChartedMap};
use crate::geometry::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JacobianMode {
    Analytic,
    FiniteDifference,
}

/// Which part of the rectangle to sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    All,
    Strip(usize),
}

/// Largest entry of `JᵀJ − I₂` for a pair of columns.
pub fn metric_defect(j: &[Vec3; 2]) -> f64 {
    let e = j[0].dot(&j[0]) - 1.0;
    let f = j[0].dot(&j[1]);
    let g = j[1].dot(&j[1]) - 1.0;
    e.abs().max(f.abs()).max(g.abs())
}

/// Central differences of one chart's formula, step `1e−5·r`.
pub fn fd_jacobian<M: ChartedMap + ?Sized>(map: &M, chart: crate::atlas::Chart, u: f64, v: f64) -> [Vec3; 2] {
    let h = 1e-5 * map.domain().r;
    let du = (map.eval_in(chart, u + h, v) - map.eval_in(chart, u - h, v)) / (2.0 * h);
    let dv = (map.eval_in(chart, u, v + h) - map.eval_in(chart, u, v - h)) / (2.0 * h);
    [du, dv]
}

/// Max `‖JᵀJ − I‖` over stratified samples off the creases.
pub fn metric_residual<M: ChartedMap + ?Sized>(
    map: &M,
    region: Region,
    n_samples: usize,
    mode: JacobianMode,
    tolerance: f64,
    seed: u64,
) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = stratified_samples(map.domain(), n_samples, &mut rng);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for (chart, u, v) in samples {
        if let Region::Strip(k) = region {
            if chart.strip != k {
                continue;
            }
        }
        let j = match mode {
            JacobianMode::Analytic => map.jacobian_in(chart, u, v),
            JacobianMode::FiniteDifference => fd_jacobian(map, chart, u, v),
        };
        worst = worst.max(metric_defect(&j));
        count += 1;
    }
    let name = match mode {
        JacobianMode::Analytic => "metric_analytic",
        JacobianMode::FiniteDifference => "metric_finite_difference",
    };
    CheckResult::new(name, count, worst, tolerance, "max |JᵀJ − I| entry over stratified samples")
}
