//! Crease-aligned triangle meshes of the figure with flat (u, v) coordinates.
//!
//! The rectangle is cut into vertical columns. Every feature curve (strip
//! seams, creases, optional slit arcs) has the form `v = c + A·sin(u/r)`, so
//! crossings and endpoints are found in closed form and get their own column.
//! Inside a column the vertices are the feature values plus the uniform rows
//! of each strip, minus rows closer than half a row spacing to a feature.
//! Neighbouring columns are stitched band by band between consecutive
//! feature edges, so no triangle crosses a feature.

mod quality;
mod slits;
mod topology;

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use crate::analysis::intersection::{Half, IntersectionCurve};
use crate::atlas::{crossings_of, AtlasMap, FlatDomain, SineArc};
use crate::error::{Error, Result};
use crate::geometry::Point3;

pub use quality::{distortion, refinement_series, MeshQuality, RefinementLevel};
pub use slits::{cut_slits, slit_arcs, SlitPolicy};
pub use topology::{quotient_topology, QuotientTopology};

pub const MIN_RES_U: usize = 16;
pub const MIN_RES_V: usize = 8;

/// Curve a vertex or edge lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Feature {
    /// Line `v = v_min + j·s`; `0` and `n` are the rectangle's bottom and top.
    Seam(usize),
    Crease(usize),
    PassThrough { joint: usize, half: Half },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeFlag {
    Crease,
    Cut,
    Boundary,
    Interior,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlitRecord {
    pub joint: usize,
    pub half: Half,
    pub edges: usize,
}

#[derive(Debug, Clone)]
pub struct SurfaceMesh {
    pub domain: FlatDomain,
    pub vertices: Vec<Point3>,
    /// Domain coordinates in length units.
    pub uvs: Vec<[f64; 2]>,
    /// Counter-clockwise in (u, v).
    pub triangles: Vec<[usize; 3]>,
    /// Edges running along a feature curve, keyed `(min, max)`.
    pub feature_edges: BTreeMap<(usize, usize), Feature>,
    pub cut_edges: BTreeSet<(usize, usize)>,
    pub slits: Vec<SlitRecord>,
    pub slit_policy: Option<SlitPolicy>,
}

pub(crate) fn edge_key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

impl SurfaceMesh {
    /// Each undirected edge with the number of triangles using it.
    pub fn edges(&self) -> BTreeMap<(usize, usize), usize> {
        let mut out = BTreeMap::new();
        for t in &self.triangles {
            for i in 0..3 {
                *out.entry(edge_key(t[i], t[(i + 1) % 3])).or_insert(0) += 1;
            }
        }
        out
    }

    pub fn edge_flags(&self) -> BTreeMap<(usize, usize), EdgeFlag> {
        self.edges()
            .into_iter()
            .map(|(e, count)| {
                let flag = if self.cut_edges.contains(&e) {
                    EdgeFlag::Cut
                } else if matches!(self.feature_edges.get(&e), Some(Feature::Crease(_))) {
                    EdgeFlag::Crease
                } else if count == 1 {
                    EdgeFlag::Boundary
                } else {
                    EdgeFlag::Interior
                };
                (e, flag)
            })
            .collect()
    }

    /// Triangles with vertices strictly on both sides of their strip's crease.
    pub fn crease_straddles(&self) -> usize {
        let d = &self.domain;
        self.triangles
            .iter()
            .filter(|t| {
                let vc = t.iter().map(|&i| self.uvs[i][1]).sum::<f64>() / 3.0;
                let crease = d.crease(d.strip_of(vc));
                let side: Vec<f64> = t.iter().map(|&i| self.uvs[i][1] - crease.value(self.uvs[i][0])).collect();
                let tol = 1e-12 * (d.r + d.s);
                side.iter().any(|&x| x > tol) && side.iter().any(|&x| x < -tol)
            })
            .count()
    }
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    feature: Feature,
    arc: SineArc,
}

fn check_resolution(res_u: usize, res_v: usize) -> Result<()> {
    if res_u < MIN_RES_U || res_v < MIN_RES_V {
        return Err(Error::Config(format!(
            "resolution {res_u}×{res_v} below minimum {MIN_RES_U}×{MIN_RES_V}"
        )));
    }
    Ok(())
}

fn base_pieces(d: &FlatDomain) -> Vec<Piece> {
    let mut pieces: Vec<Piece> = (0..=d.n).map(|j| Piece { feature: Feature::Seam(j), arc: d.strip_boundary(j) }).collect();
    pieces.extend((0..d.n).map(|k| Piece { feature: Feature::Crease(k), arc: d.crease(k) }));
    pieces
}

/// Crease-aligned mesh: `res_u` columns around, `res_v` rows per strip.
pub fn tessellate(atlas: &AtlasMap, res_u: usize, res_v: usize) -> Result<SurfaceMesh> {
    check_resolution(res_u, res_v)?;
    ladder(atlas, res_u, res_v, &base_pieces(atlas.domain()))
}

/// As [`tessellate`], with the slit arcs chosen by `policy` laid along mesh
/// edges so [`cut_slits`] can open them.
pub fn tessellate_conforming(
    atlas: &AtlasMap,
    res_u: usize,
    res_v: usize,
    curves: &[IntersectionCurve],
    policy: SlitPolicy,
) -> Result<SurfaceMesh> {
    check_resolution(res_u, res_v)?;
    let mut pieces = base_pieces(atlas.domain());
    for c in curves {
        let half = policy.half_for(c.pair);
        for arc in c.arcs(half) {
            pieces.push(Piece { feature: Feature::PassThrough { joint: c.pair, half }, arc: *arc });
        }
    }
    ladder(atlas, res_u, res_v, &pieces)
}

fn columns(d: &FlatDomain, res_u: usize, pieces: &[Piece]) -> Vec<f64> {
    let ur = PI * d.r;
    let du = 2.0 * ur / res_u as f64;
    let inside = |u: f64| u > -ur + 1e-10 * d.r && u < ur - 1e-10 * d.r;

    let mut extra = Vec::new();
    for (i, p) in pieces.iter().enumerate() {
        extra.extend([p.arc.u_start, p.arc.u_end].into_iter().filter(|&u| inside(u)));
        for q in &pieces[i + 1..] {
            let lo = p.arc.u_start.max(q.arc.u_start);
            let hi = p.arc.u_end.min(q.arc.u_end);
            if lo < hi {
                let offset = p.arc.center - q.arc.center;
                let amp = p.arc.amplitude - q.arc.amplitude;
                extra.extend(crossings_of(offset, amp, d.r, lo, hi).into_iter().filter(|&u| inside(u)));
            }
        }
    }
    let mirrored: Vec<f64> = extra.iter().map(|u| -u).collect();
    extra.extend(mirrored);
    extra.sort_by(f64::total_cmp);
    extra.dedup_by(|a, b| (*a - *b).abs() <= 1e-10 * d.r);

    let mut cols: Vec<f64> = (0..=res_u)
        .map(|i| -ur + du * i as f64)
        .enumerate()
        .filter(|&(i, u)| i == 0 || i == res_u || extra.iter().all(|e| (e - u).abs() >= 0.25 * du))
        .map(|(_, u)| u)
        .collect();
    cols.extend(extra);
    cols.sort_by(f64::total_cmp);
    cols
}

struct ColumnVertex {
    index: usize,
    v: f64,
    pieces: Vec<usize>,
}

fn ladder(atlas: &AtlasMap, res_u: usize, res_v: usize, pieces: &[Piece]) -> Result<SurfaceMesh> {
    let d = *atlas.domain();
    let cols = columns(&d, res_u, pieces);
    let h = d.s / res_v as f64;
    let utol = 1e-12 * d.r.max(1.0) * 10.0;
    let merge = 1e-9 * d.r;

    let mut vertices = Vec::new();
    let mut uvs = Vec::new();
    let mut column_vertices: Vec<Vec<ColumnVertex>> = Vec::with_capacity(cols.len());
    for &u in &cols {
        let mut feats: Vec<(f64, usize)> = pieces
            .iter()
            .enumerate()
            .filter(|(_, p)| p.arc.covers(u, utol))
            .map(|(i, p)| (p.arc.value(u).clamp(d.v_min(), d.v_max()), i))
            .collect();
        feats.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut col: Vec<(f64, Vec<usize>)> = Vec::new();
        for (v, i) in feats {
            match col.last_mut() {
                Some(last) if (v - last.0).abs() <= merge => {
                    if matches!(pieces[i].feature, Feature::Seam(_)) {
                        last.0 = v;
                    }
                    last.1.push(i);
                }
                _ => col.push((v, vec![i])),
            }
        }
        let feature_vs: Vec<f64> = col.iter().map(|c| c.0).collect();
        for k in 0..d.n {
            for j in 0..=res_v {
                let v = d.v_min() + k as f64 * d.s + j as f64 * h;
                if feature_vs.iter().all(|f| (f - v).abs() >= 0.5 * h) {
                    col.push((v, Vec::new()));
                }
            }
        }
        col.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut out = Vec::with_capacity(col.len());
        for (v, ps) in col {
            let index = vertices.len();
            vertices.push(atlas.phi(u, v)?);
            uvs.push([u, v]);
            out.push(ColumnVertex { index, v, pieces: ps });
        }
        column_vertices.push(out);
    }

    let mut triangles = Vec::new();
    let mut feature_edges = BTreeMap::new();
    for c in 0..cols.len() - 1 {
        let (left, right) = (&column_vertices[c], &column_vertices[c + 1]);
        let (ul, ur) = (cols[c], cols[c + 1]);
        let find = |col: &[ColumnVertex], p: usize| col.iter().position(|x| x.pieces.contains(&p));
        let mut constraints: Vec<(usize, usize, Feature)> = Vec::new();
        for (p, piece) in pieces.iter().enumerate() {
            if piece.arc.u_start > ul + utol || piece.arc.u_end < ur - utol {
                continue;
            }
            let (Some(li), Some(ri)) = (find(left, p), find(right, p)) else {
                return Err(Error::Mesh(format!("feature {:?} lost between columns {ul} and {ur}", piece.feature)));
            };
            constraints.push((li, ri, piece.feature));
        }
        constraints.sort_by_key(|c| (c.0, c.1));
        constraints.dedup_by_key(|c| (c.0, c.1));
        if constraints.windows(2).any(|w| w[1].1 < w[0].1) {
            return Err(Error::Mesh(format!("features cross between columns {ul} and {ur}")));
        }
        for &(li, ri, f) in &constraints {
            feature_edges.insert(edge_key(left[li].index, right[ri].index), f);
        }
        for w in constraints.windows(2) {
            let (la, ra, _) = w[0];
            let (lb, rb, _) = w[1];
            let (mut i, mut j) = (la, ra);
            while i < lb || j < rb {
                let advance_left = if i == lb {
                    false
                } else if j == rb {
                    true
                } else {
                    let dl = (vertices[left[i + 1].index] - vertices[right[j].index]).norm();
                    let dr = (vertices[left[i].index] - vertices[right[j + 1].index]).norm();
                    dl <= dr
                };
                if advance_left {
                    triangles.push([left[i].index, right[j].index, left[i + 1].index]);
                    i += 1;
                } else {
                    triangles.push([left[i].index, right[j].index, right[j + 1].index]);
                    j += 1;
                }
            }
        }
    }
    debug_assert!(column_vertices.iter().all(|col| col.windows(2).all(|w| w[0].v < w[1].v)));

    Ok(SurfaceMesh {
        domain: d,
        vertices,
        uvs,
        triangles,
        feature_edges,
        cut_edges: BTreeSet::new(),
        slits: Vec::new(),
        slit_policy: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::intersection_closed_form;
    use crate::atlas::{chain_motions, FigureConfig};

    fn triangle() -> AtlasMap {
        chain_motions(&FigureConfig::new(3, 1.0, 2.0).unwrap()).unwrap()
    }

    #[test]
    fn vertex_count_and_crease_rows() {
        let a = triangle();
        let m = tessellate(&a, 64, 16).unwrap();
        assert_eq!(m.vertices.len(), 65 * 49);
        assert_eq!(m.crease_straddles(), 0);
        let d = a.domain();
        let mut crease_vertices = 0;
        for (&(p, q), f) in &m.feature_edges {
            if let Feature::Crease(k) = f {
                for i in [p, q] {
                    let [u, v] = m.uvs[i];
                    assert_eq!(v - d.crease(*k).value(u), 0.0);
                    crease_vertices += 1;
                }
            }
        }
        assert_eq!(crease_vertices, 2 * 3 * 64);
        for p in &m.vertices {
            assert!(a.tube_residual(p) < 1e-9);
        }
    }

    #[test]
    fn triangles_are_ccw_in_uv() {
        let m = tessellate(&triangle(), 32, 8).unwrap();
        for t in &m.triangles {
            let [a, b, c] = t.map(|i| m.uvs[i]);
            let area = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
            assert!(area > 0.0);
        }
    }

    #[test]
    fn flags() {
        let m = tessellate(&triangle(), 32, 8).unwrap();
        let flags = m.edge_flags();
        let count = |f| flags.values().filter(|&&x| x == f).count();
        assert_eq!(count(EdgeFlag::Crease), 3 * 32);
        assert_eq!(count(EdgeFlag::Cut), 0);
        assert!(count(EdgeFlag::Boundary) > 0);
    }

    #[test]
    fn resolution_minimum() {
        assert!(matches!(tessellate(&triangle(), 15, 8), Err(Error::Config(_))));
        assert!(matches!(tessellate(&triangle(), 16, 7), Err(Error::Config(_))));
    }

    #[test]
    fn conforming_mesh_carries_slit_edges() {
        let a = triangle();
        let curves: Vec<_> = (0..3).map(|k| intersection_closed_form(&a, k).unwrap()).collect();
        let m = tessellate_conforming(&a, 64, 16, &curves, SlitPolicy::Outgoing).unwrap();
        assert_eq!(m.crease_straddles(), 0);
        for k in 0..3 {
            let n = m
                .feature_edges
                .values()
                .filter(|f| matches!(f, Feature::PassThrough { joint, .. } if *joint == k))
                .count();
            assert!(n >= 32, "joint {k}: {n}");
        }
    }

    #[test]
    fn other_polygons() {
        for (n, s) in [(4, 3.0), (5, 4.0), (6, 5.0)] {
            let a = chain_motions(&FigureConfig::new(n, 1.0, s).unwrap()).unwrap();
            let m = tessellate(&a, 32, 8).unwrap();
            assert_eq!(m.crease_straddles(), 0);
            let curves: Vec<_> = (0..n).map(|k| intersection_closed_form(&a, k).unwrap()).collect();
            for policy in [SlitPolicy::Outgoing, SlitPolicy::Incoming, SlitPolicy::Alternate] {
                let m = tessellate_conforming(&a, 32, 8, &curves, policy).unwrap();
                assert_eq!(m.crease_straddles(), 0);
            }
        }
    }
}
