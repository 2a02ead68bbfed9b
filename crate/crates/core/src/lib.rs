//! Piecewise-isometric folding of a flat rectangle onto `n` cylinders around a
//! regular `n`-gon: a flat Klein bottle for odd `n`, a flat torus for even `n`.
//!
//! The construction starts from a single elbow (two half-cylinders reflected
//! across a miter plane along a sine crease), chains `n` copies with rigid
//! motions, and checks every claimed property numerically.
//!
//! ```
//! use kleinfold::{chain_motions, FigureConfig};
//!
//! let atlas = chain_motions(&FigureConfig::new(3, 1.0, 2.0)?)?;
//! let p = atlas.phi(0.3, -1.0)?;
//! let q = atlas.phi(-0.3, 5.0)?;
//! assert!((p - q).norm() < 1e-9);
//! # Ok::<(), kleinfold::Error>(())
//! ```

pub mod analysis;
pub mod atlas;
pub mod crease;
pub mod error;
pub mod geometry;
pub mod io;
pub mod mesh;

pub use analysis::{verify_all, CheckResult, Tolerances, VerificationReport};
pub use atlas::{
    build_domain, chain_motions, orientability, AtlasMap, Chart, FigureConfig, FlatDomain, Identification,
    Orientability, SineArc,
};
pub use crease::{ElbowMap, ElbowSpec, Side};
pub use error::{Error, Result};
pub use geometry::{compose, reflect, Mat3, PlaneThroughOrigin, PlanarCurve, Point3, RigidMotion, Vec3};
pub use mesh::{tessellate, tessellate_conforming, SlitPolicy, SurfaceMesh};
