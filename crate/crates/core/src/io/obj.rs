use std::fmt::Write as _;
use std::f64::consts::PI;
use std::path::Path;

use super::format_significant;
use crate::error::Result;
use crate::mesh::SurfaceMesh;

const DIGITS: usize = 12;

/// Wavefront OBJ text: positions, texture coordinates scaled to the unit
/// square over the rectangle, and `f a/a b/b c/c` faces with 1-based indices.
pub fn render_mesh(mesh: &SurfaceMesh) -> String {
    let d = &mesh.domain;
    let num = |x: f64| format_significant(x, DIGITS);
    let mut out = String::new();
    let _ = writeln!(out, "# kleinfold surface mesh");
    let _ = writeln!(out, "# n {} r {} s {}", d.n, num(d.r), num(d.s));
    let _ = writeln!(out, "# vertices {} triangles {}", mesh.vertices.len(), mesh.triangles.len());
    if let Some(policy) = mesh.slit_policy {
        let _ = writeln!(out, "# slits {} policy {policy:?}", mesh.slits.len());
    }
    for p in &mesh.vertices {
        let _ = writeln!(out, "v {} {} {}", num(p.x), num(p.y), num(p.z));
    }
    let (w, h) = (2.0 * PI * d.r, d.height());
    for uv in &mesh.uvs {
        let s = ((uv[0] + PI * d.r) / w).clamp(0.0, 1.0);
        let t = ((uv[1] - d.v_min()) / h).clamp(0.0, 1.0);
        let _ = writeln!(out, "vt {} {}", num(s), num(t));
    }
    for t in &mesh.triangles {
        let [a, b, c] = t.map(|i| i + 1);
        let _ = writeln!(out, "f {a}/{a} {b}/{b} {c}/{c}");
    }
    out
}

pub fn write_mesh(mesh: &SurfaceMesh, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, render_mesh(mesh))?;
    Ok(())
}
