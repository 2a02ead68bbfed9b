use super::{tessellate, SurfaceMesh};
use crate::atlas::AtlasMap;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefinementLevel {
    pub res_u: usize,
    pub res_v: usize,
    pub distortion: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeshQuality {
    /// Largest `|len3D − lenUV| / lenUV` over all edges.
    pub max_distortion: f64,
    pub series: Vec<RefinementLevel>,
}

impl MeshQuality {
    /// Distortion ratio between consecutive refinement levels.
    pub fn ratios(&self) -> Vec<f64> {
        self.series.windows(2).map(|w| w[0].distortion / w[1].distortion).collect()
    }
}

pub fn distortion(mesh: &SurfaceMesh) -> Result<MeshQuality> {
    let mut worst: f64 = 0.0;
    for &(a, b) in mesh.edges().keys() {
        let flat = ((mesh.uvs[a][0] - mesh.uvs[b][0]).powi(2) + (mesh.uvs[a][1] - mesh.uvs[b][1]).powi(2)).sqrt();
        if flat == 0.0 {
            return Err(Error::Mesh(format!("edge ({a}, {b}) has zero length in the domain")));
        }
        let space = (mesh.vertices[a] - mesh.vertices[b]).norm();
        worst = worst.max((space - flat).abs() / flat);
    }
    Ok(MeshQuality { max_distortion: worst, series: Vec::new() })
}

/// Distortion at each `(res_u, res_v)` level, finest last.
pub fn refinement_series(atlas: &AtlasMap, levels: &[(usize, usize)]) -> Result<MeshQuality> {
    let mut series = Vec::with_capacity(levels.len());
    for &(res_u, res_v) in levels {
        let q = distortion(&tessellate(atlas, res_u, res_v)?)?;
        series.push(RefinementLevel { res_u, res_v, distortion: q.max_distortion });
    }
    let max_distortion = series.last().map_or(0.0, |l| l.distortion);
    Ok(MeshQuality { max_distortion, series })
}
