//! The elbow: a cylinder folded onto its own mirror image along a sine crease.
//!
//! The flat strip `[−πr, πr] × [−s/2, s/2]` is rolled onto the cylinder of
//! radius `r` around the y-axis by [`f1`]. The crease `v = τr·sin(u/r)`
//! rolls onto the ellipse where that cylinder meets the plane `y = τx`.
//! Above the crease the strip is instead sent through the reflection across
//! that plane, which fixes the ellipse, so both pieces agree along it.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{PlanarCurve, PlaneThroughOrigin, Point3, Vec3};

/// Radius, miter slope and strip height of one elbow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElbowSpec {
    pub r: f64,
    pub tau: f64,
    pub s: f64,
}

impl ElbowSpec {
    pub fn new(r: f64, tau: f64, s: f64) -> Result<Self> {
        for (name, x) in [("radius", r), ("tau", tau), ("strip height", s)] {
            if !(x > 0.0 && x.is_finite()) {
                return Err(Error::Config(format!("{name} = {x} must be positive and finite")));
            }
        }
        if s <= 2.0 * tau * r {
            return Err(Error::Config(format!(
                "crease exceeds strip: strip height {s} must exceed 2·τ·r = {}",
                2.0 * tau * r
            )));
        }
        Ok(Self { r, tau, s })
    }

    /// The elbow used at every corner of a regular `n`-gon: `τ = cot(π/n)`.
    pub fn for_polygon(n: usize, r: f64, s: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::Config("degenerate polygon: need n ≥ 3".into()));
        }
        Self::new(r, polygon_slope(n), s)
    }

    /// Amplitude of the pass-through curve pre-image, `r/τ`.
    pub fn pass_through_amplitude(&self) -> f64 {
        self.r / self.tau
    }
}

/// Miter slope closing a regular `n`-gon.
pub fn polygon_slope(n: usize) -> f64 {
    1.0 / (PI / n as f64).tan()
}

/// Which branch of the piecewise elbow a domain point uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    /// `v ≤ crease`: the cylinder map itself.
    Below,
    /// `v ≥ crease`: the reflected cylinder map.
    Above,
}

/// `(r·sin(u/r), v, r·cos(u/r))`
pub fn f1(spec: &ElbowSpec, u: f64, v: f64) -> Point3 {
    let t = u / spec.r;
    Point3::new(spec.r * t.sin(), v, spec.r * t.cos())
}

/// The crease `u ↦ (u, τr·sin(u/r))` on `[−πr, πr]`.
pub fn crease_of(spec: &ElbowSpec) -> PlanarCurve {
    PlanarCurve::new(spec.tau * spec.r, spec.r, -PI * spec.r, PI * spec.r)
        .expect("validated elbow parameters give a valid curve")
}

/// The ellipse traced by the crease on the cylinder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImageCrease {
    pub center: Point3,
    pub major_axis: Vec3,
    pub minor_axis: Vec3,
    pub semi_major: f64,
    pub semi_minor: f64,
    radius: f64,
}

impl ImageCrease {
    /// Ellipse point hit by the crease at parameter `u`.
    pub fn point(&self, u: f64) -> Point3 {
        let t = u / self.radius;
        self.center + t.sin() * self.semi_major * self.major_axis + t.cos() * self.semi_minor * self.minor_axis
    }

    /// Closed-form curvature `ab / (a²cos²t + b²sin²t)^{3/2}`.
    pub fn curvature(&self, u: f64) -> f64 {
        let t = u / self.radius;
        let (a, b) = (self.semi_major, self.semi_minor);
        let q = a * a * t.cos().powi(2) + b * b * t.sin().powi(2);
        a * b / q.powf(1.5)
    }
}

/// The piecewise elbow map together with its miter plane and crease.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElbowMap {
    pub spec: ElbowSpec,
    pub plane: PlaneThroughOrigin,
    pub crease: PlanarCurve,
}

impl ElbowMap {
    pub fn new(spec: ElbowSpec) -> Self {
        let plane = PlaneThroughOrigin::from_slope(spec.tau).expect("tau > 0 gives a plane");
        Self { spec, plane, crease: crease_of(&spec) }
    }

    pub fn f1(&self, u: f64, v: f64) -> Point3 {
        f1(&self.spec, u, v)
    }

    pub fn f2(&self, u: f64, v: f64) -> Point3 {
        self.plane.reflect(&self.f1(u, v))
    }

    pub fn crease_v(&self, u: f64) -> f64 {
        self.crease.value(u)
    }

    pub fn side_of(&self, u: f64, v: f64) -> Side {
        if v <= self.crease_v(u) {
            Side::Below
        } else {
            Side::Above
        }
    }

    /// Evaluates one branch; the formula is total, so this also extends a
    /// branch past the crease or the strip edge.
    pub fn branch(&self, side: Side, u: f64, v: f64) -> Point3 {
        match side {
            Side::Below => self.f1(u, v),
            Side::Above => self.f2(u, v),
        }
    }

    pub fn contains(&self, u: f64, v: f64) -> bool {
        let (ur, vh) = (PI * self.spec.r, 0.5 * self.spec.s);
        let slack = 1e-12 * (ur + vh);
        u.abs() <= ur + slack && v.abs() <= vh + slack
    }

    /// The piecewise map on the strip.
    pub fn elbow(&self, u: f64, v: f64) -> Result<Point3> {
        if !self.contains(u, v) {
            return Err(Error::Domain(format!("({u}, {v}) outside the elbow strip")));
        }
        Ok(self.branch(self.side_of(u, v), u, v))
    }

    /// Analytic partial derivatives `[∂/∂u, ∂/∂v]` of a branch.
    pub fn branch_jacobian(&self, side: Side, u: f64, _v: f64) -> [Vec3; 2] {
        let t = u / self.spec.r;
        let du = Vec3::new(t.cos(), 0.0, -t.sin());
        let dv = Vec3::new(0.0, 1.0, 0.0);
        match side {
            Side::Below => [du, dv],
            Side::Above => [self.plane.reflect_vector(&du), self.plane.reflect_vector(&dv)],
        }
    }

    /// Unit normal pointing away from the axis of the branch's cylinder.
    pub fn outward_normal(&self, side: Side, u: f64) -> Vec3 {
        let t = u / self.spec.r;
        let n = Vec3::new(t.sin(), 0.0, t.cos());
        match side {
            Side::Below => n,
            Side::Above => self.plane.reflect_vector(&n),
        }
    }

    /// Sign of `det[∂u, ∂v, outward normal]`: +1 right-handed, −1 left-handed.
    pub fn handedness(&self, side: Side, u: f64, v: f64) -> f64 {
        let [du, dv] = self.branch_jacobian(side, u, v);
        du.cross(&dv).dot(&self.outward_normal(side, u)).signum()
    }

    /// Axis direction of the cylinder carrying each branch.
    pub fn axis_direction(&self, side: Side) -> Vec3 {
        let y = Vec3::new(0.0, 1.0, 0.0);
        match side {
            Side::Below => y,
            Side::Above => self.plane.reflect_vector(&y),
        }
    }

    pub fn image_crease(&self) -> ImageCrease {
        let (r, tau) = (self.spec.r, self.spec.tau);
        let k = (1.0 + tau * tau).sqrt();
        ImageCrease {
            center: Point3::origin(),
            major_axis: Vec3::new(1.0, tau, 0.0) / k,
            minor_axis: Vec3::new(0.0, 0.0, 1.0),
            semi_major: r * k,
            semi_minor: r,
            radius: r,
        }
    }

    fn check_crease_param(&self, u: f64) -> Result<()> {
        if self.crease.contains(u) {
            Ok(())
        } else {
            Err(Error::Domain(format!("crease parameter {u} outside [−πr, πr]")))
        }
    }

    /// `(κ of the image ellipse, κ of the flat crease)` at parameter `u`.
    pub fn curvature_condition(&self, u: f64) -> Result<(f64, f64)> {
        self.check_crease_param(u)?;
        let kappa_domain = crate::geometry::planar_curvature(&self.crease, u)?;
        Ok((self.image_crease().curvature(u), kappa_domain))
    }

    /// `π` minus the angle between the two sheets' normals along the crease;
    /// `π` where the tangent planes coincide.
    pub fn fold_dihedral(&self, u: f64) -> Result<f64> {
        self.check_crease_param(u)?;
        let n1 = self.outward_normal(Side::Below, u);
        let n2 = self.outward_normal(Side::Above, u);
        Ok(PI - n1.cross(&n2).norm().atan2(n1.dot(&n2)))
    }
}
