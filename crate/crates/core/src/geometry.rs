//! Exact-formula 3D primitives shared by the construction: planes through
//! the origin, reflections, rigid motions and sine-graph planar curves.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;
pub type Point3 = nalgebra::Point3<f64>;
pub type Mat3 = Matrix3<f64>;

/// Orthogonality defect above which a composed motion is projected back
/// onto the orthogonal group.
pub const RENORMALIZE_THRESHOLD: f64 = 1e-10;

/// A plane through the origin, stored by its unit normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneThroughOrigin {
    normal: Vec3,
}

impl PlaneThroughOrigin {
    /// Builds a plane from any non-zero normal; the normal is normalized.
    pub fn new(normal: Vec3) -> Result<Self> {
        let norm = normal.norm();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::Domain(format!("plane normal {normal:?} is not usable")));
        }
        Ok(Self { normal: normal / norm })
    }

    /// The plane `y = τ·x`, containing the z-axis.
    pub fn from_slope(tau: f64) -> Result<Self> {
        Self::new(Vec3::new(tau, -1.0, 0.0))
    }

    pub fn normal(&self) -> Vec3 {
        self.normal
    }

    pub fn signed_distance(&self, p: &Point3) -> f64 {
        p.coords.dot(&self.normal)
    }

    pub fn reflect(&self, p: &Point3) -> Point3 {
        p - 2.0 * self.signed_distance(p) * self.normal
    }

    pub fn reflect_vector(&self, v: &Vec3) -> Vec3 {
        v - 2.0 * v.dot(&self.normal) * self.normal
    }

    /// Householder matrix `I − 2 n̂ n̂ᵀ`.
    pub fn householder(&self) -> Mat3 {
        Mat3::identity() - 2.0 * self.normal * self.normal.transpose()
    }
}

/// Reflection across a plane through the origin: `p − 2(p·n̂)n̂`.
pub fn reflect(plane: &PlaneThroughOrigin, p: &Point3) -> Point3 {
    plane.reflect(p)
}

/// An isometry of euclidean space `p ↦ L·p + t` with `L` orthogonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidMotion {
    linear: Mat3,
    translation: Vec3,
    proper: bool,
}

impl RigidMotion {
    pub fn identity() -> Self {
        Self { linear: Mat3::identity(), translation: Vec3::zeros(), proper: true }
    }

    pub fn translation(t: Vec3) -> Self {
        Self { linear: Mat3::identity(), translation: t, proper: true }
    }

    pub fn reflection(plane: &PlaneThroughOrigin) -> Self {
        Self { linear: plane.householder(), translation: Vec3::zeros(), proper: false }
    }

    /// Mirror `x ↦ −x`, the image-side counterpart of the parameter flip `u ↦ −u`.
    pub fn mirror_x() -> Self {
        Self {
            linear: Mat3::from_diagonal(&Vec3::new(-1.0, 1.0, 1.0)),
            translation: Vec3::zeros(),
            proper: false,
        }
    }

    /// Builds a motion from an orthogonal matrix and a translation.
    pub fn from_parts(linear: Mat3, translation: Vec3) -> Result<Self> {
        let defect = orthogonality_defect(&linear);
        if !(defect < 1e-9) {
            return Err(Error::Domain(format!("linear part is not orthogonal (defect {defect:e})")));
        }
        Ok(Self { linear, translation, proper: linear.determinant() > 0.0 })
    }

    pub fn linear(&self) -> &Mat3 {
        &self.linear
    }

    pub fn translation_part(&self) -> &Vec3 {
        &self.translation
    }

    pub fn is_proper(&self) -> bool {
        self.proper
    }

    pub fn apply(&self, p: &Point3) -> Point3 {
        Point3::from(self.linear * p.coords + self.translation)
    }

    pub fn apply_vector(&self, v: &Vec3) -> Vec3 {
        self.linear * v
    }

    pub fn inverse(&self) -> Self {
        let lt = self.linear.transpose();
        Self { linear: lt, translation: -(lt * self.translation), proper: self.proper }
    }

    /// `‖LᵀL − I‖∞` (max-abs entry).
    pub fn orthogonality_defect(&self) -> f64 {
        orthogonality_defect(&self.linear)
    }

    /// Largest displacement of the motion over a set of probe points.
    pub fn distance_from(&self, other: &Self, probes: &[Point3]) -> f64 {
        probes
            .iter()
            .map(|p| (self.apply(p) - other.apply(p)).norm())
            .fold(0.0, f64::max)
    }
}

fn orthogonality_defect(m: &Mat3) -> f64 {
    (m.transpose() * m - Mat3::identity()).abs().max()
}

/// Nearest orthogonal matrix (polar factor) with the same determinant sign.
fn nearest_orthogonal(m: &Mat3) -> Mat3 {
    let svd = m.svd(true, true);
    match (svd.u, svd.v_t) {
        (Some(u), Some(v_t)) => u * v_t,
        _ => *m,
    }
}

/// `(a ∘ b)(p) = a(b(p))`.
pub fn compose(a: &RigidMotion, b: &RigidMotion) -> RigidMotion {
    compose_counting(a, b, &mut 0)
}

/// Composition that re-orthonormalizes when the defect exceeds
/// [`RENORMALIZE_THRESHOLD`] and bumps `events` when it does.
pub fn compose_counting(a: &RigidMotion, b: &RigidMotion, events: &mut usize) -> RigidMotion {
    let mut linear = a.linear * b.linear;
    if orthogonality_defect(&linear) > RENORMALIZE_THRESHOLD {
        linear = nearest_orthogonal(&linear);
        *events += 1;
    }
    RigidMotion {
        linear,
        translation: a.linear * b.translation + a.translation,
        proper: a.proper == b.proper,
    }
}

/// The graph `u ↦ (u, A·sin(u/r))` over a closed parameter interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarCurve {
    amplitude: f64,
    wavenumber: f64,
    u_min: f64,
    u_max: f64,
}

impl PlanarCurve {
    pub fn new(amplitude: f64, radius: f64, u_min: f64, u_max: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Domain(format!("radius {radius} must be positive")));
        }
        if !(u_min <= u_max) || !amplitude.is_finite() {
            return Err(Error::Domain(format!("bad curve parameters A={amplitude} [{u_min}, {u_max}]")));
        }
        Ok(Self { amplitude, wavenumber: 1.0 / radius, u_min, u_max })
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn wavenumber(&self) -> f64 {
        self.wavenumber
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.u_min, self.u_max)
    }

    pub fn contains(&self, u: f64) -> bool {
        u >= self.u_min && u <= self.u_max
    }

    pub fn value(&self, u: f64) -> f64 {
        self.amplitude * (u * self.wavenumber).sin()
    }

    pub fn slope(&self, u: f64) -> f64 {
        self.amplitude * self.wavenumber * (u * self.wavenumber).cos()
    }

    pub fn second_derivative(&self, u: f64) -> f64 {
        -self.amplitude * self.wavenumber * self.wavenumber * (u * self.wavenumber).sin()
    }

    pub fn point(&self, u: f64) -> [f64; 2] {
        [u, self.value(u)]
    }

    /// Parameters in the interval where the second derivative vanishes.
    pub fn inflections(&self) -> Vec<f64> {
        let period = std::f64::consts::PI / self.wavenumber;
        let first = (self.u_min / period).ceil() as i64;
        let last = (self.u_max / period).floor() as i64;
        (first..=last).map(|k| k as f64 * period).collect()
    }
}

/// Curvature `|g″| / (1 + g′²)^{3/2}` of the graph at `u`.
pub fn planar_curvature(curve: &PlanarCurve, u: f64) -> Result<f64> {
    if !curve.contains(u) {
        let (a, b) = curve.interval();
        return Err(Error::Domain(format!("u = {u} outside [{a}, {b}]")));
    }
    let g1 = curve.slope(u);
    let g2 = curve.second_derivative(u);
    Ok(g2.abs() / (1.0 + g1 * g1).powf(1.5))
}

/// Angle between the axis direction `(0, 1, 0)` and its reflection across
/// the plane `y = τx`.
pub fn miter_turn_angle(tau: f64) -> Result<f64> {
    if !(tau > 0.0) {
        return Err(Error::Domain(format!("tau = {tau} must be positive")));
    }
    if tau.is_infinite() {
        return Ok(0.0);
    }
    let t2 = tau * tau;
    Ok(((t2 - 1.0) / (t2 + 1.0)).clamp(-1.0, 1.0).acos())
}
