use std::collections::{BTreeMap, BTreeSet};

use super::{edge_key, Feature, SlitRecord, SurfaceMesh};
use crate::analysis::intersection::{Half, IntersectionCurve};
use crate::atlas::SineArc;
use crate::error::{Error, Result};

/// Which tube is cut at each joint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SlitPolicy {
    /// Cut the outgoing tube at every joint.
    #[default]
    Outgoing,
    /// Cut the incoming tube at every joint.
    Incoming,
    /// Outgoing at even joints, incoming at odd joints.
    Alternate,
}

impl SlitPolicy {
    pub fn half_for(self, joint: usize) -> Half {
        match self {
            SlitPolicy::Outgoing => Half::Outgoing,
            SlitPolicy::Incoming => Half::Incoming,
            SlitPolicy::Alternate if joint.is_multiple_of(2) => Half::Outgoing,
            SlitPolicy::Alternate => Half::Incoming,
        }
    }
}

/// Domain arcs cut under `policy`, wrapped into the rectangle.
pub fn slit_arcs(curves: &[IntersectionCurve], policy: SlitPolicy) -> Vec<SineArc> {
    curves.iter().flat_map(|c| c.arcs(policy.half_for(c.pair)).iter().copied()).collect()
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a] = b;
        }
    }
}

/// Opens a slit along the retained pre-image of each curve, on the half
/// chosen by `policy`. Vertices on a slit are duplicated once per side; the
/// slit's end points stay shared. The mesh must come from
/// [`super::tessellate_conforming`] with the same curves and policy.
pub fn cut_slits(mesh: &SurfaceMesh, curves: &[IntersectionCurve], policy: SlitPolicy) -> Result<SurfaceMesh> {
    let mut path: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut records = Vec::new();
    for c in curves {
        let half = policy.half_for(c.pair);
        if c.arcs(half).is_empty() {
            return Err(Error::Policy(format!(
                "joint {}: the {half:?} half has no material to cut",
                c.pair
            )));
        }
        let feature = Feature::PassThrough { joint: c.pair, half };
        let edges: Vec<(usize, usize)> =
            mesh.feature_edges.iter().filter(|(_, f)| **f == feature).map(|(e, _)| *e).collect();
        if edges.is_empty() {
            return Err(Error::Mesh(format!(
                "no mesh edges follow joint {} ({half:?}); tessellate with the slit curves first",
                c.pair
            )));
        }
        records.push(SlitRecord { joint: c.pair, half, edges: edges.len() });
        path.extend(edges);
    }

    let mut out = mesh.clone();
    let mut origin: Vec<usize> = (0..mesh.vertices.len()).collect();
    let mut incident: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (t, tri) in mesh.triangles.iter().enumerate() {
        for &v in tri {
            incident.entry(v).or_default().push(t);
        }
    }
    let on_path: BTreeSet<usize> = path.iter().flat_map(|&(a, b)| [a, b]).collect();

    for &v in &on_path {
        let fan = &incident[&v];
        let mut uf = UnionFind((0..fan.len()).collect());
        for i in 0..fan.len() {
            for j in i + 1..fan.len() {
                let (ti, tj) = (out.triangles[fan[i]], out.triangles[fan[j]]);
                let shared = ti.iter().find(|&&w| w != v && tj.contains(&w));
                if let Some(&w) = shared {
                    if !path.contains(&edge_key(origin[v], origin[w])) {
                        uf.union(i, j);
                    }
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &t) in fan.iter().enumerate() {
            groups.entry(uf.find(i)).or_default().push(t);
        }
        for tris in groups.values().skip(1) {
            let copy = out.vertices.len();
            out.vertices.push(out.vertices[v]);
            out.uvs.push(out.uvs[v]);
            origin.push(origin[v]);
            for &t in tris {
                for slot in out.triangles[t].iter_mut() {
                    if *slot == v {
                        *slot = copy;
                    }
                }
            }
        }
    }

    out.feature_edges.clear();
    out.cut_edges.clear();
    for tri in &out.triangles {
        for i in 0..3 {
            let e = edge_key(tri[i], tri[(i + 1) % 3]);
            let o = edge_key(origin[e.0], origin[e.1]);
            if let Some(f) = mesh.feature_edges.get(&o) {
                out.feature_edges.insert(e, *f);
            }
            if path.contains(&o) {
                out.cut_edges.insert(e);
            }
        }
    }
    out.slits = records;
    out.slit_policy = Some(policy);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::intersection_closed_form;
    use crate::atlas::{chain_motions, AtlasMap, FigureConfig};
    use crate::mesh::{distortion, tessellate, tessellate_conforming, EdgeFlag};

    fn setup() -> (AtlasMap, Vec<IntersectionCurve>) {
        let a = chain_motions(&FigureConfig::new(3, 1.0, 2.0).unwrap()).unwrap();
        let c = (0..3).map(|k| intersection_closed_form(&a, k).unwrap()).collect();
        (a, c)
    }

    #[test]
    fn three_slits_open() {
        let (a, curves) = setup();
        let m = tessellate_conforming(&a, 64, 16, &curves, SlitPolicy::default()).unwrap();
        let cut = cut_slits(&m, &curves, SlitPolicy::default()).unwrap();
        assert_eq!(cut.slits.len(), 3);
        assert_eq!(cut.slit_policy, Some(SlitPolicy::Outgoing));
        let cut_edges = cut.edge_flags().values().filter(|&&f| f == EdgeFlag::Cut).count();
        let path: usize = cut.slits.iter().map(|s| s.edges).sum();
        assert_eq!(cut_edges, 2 * path);
        for (e, count) in cut.edges() {
            if cut.cut_edges.contains(&e) {
                assert_eq!(count, 1);
            }
            assert!(count <= 2);
        }
        assert!(cut.vertices.len() > m.vertices.len());
        assert_eq!(cut.triangles.len(), m.triangles.len());
    }

    #[test]
    fn slit_ends_are_inflection_images() {
        let (a, curves) = setup();
        let m = tessellate_conforming(&a, 64, 16, &curves, SlitPolicy::Outgoing).unwrap();
        let cut = cut_slits(&m, &curves, SlitPolicy::Outgoing).unwrap();
        let on_cut: BTreeSet<usize> = cut.cut_edges.iter().flat_map(|&(p, q)| [p, q]).collect();
        let ex = a.exceptional_sets().unwrap();
        // Interior slit ends are the only slit vertices that were not
        // duplicated; ends on the seam u = ±πr are split by the rectangle edge.
        let ends: Vec<usize> =
            on_cut.iter().copied().filter(|&v| on_cut.iter().filter(|&&w| cut.uvs[w] == cut.uvs[v]).count() == 1).collect();
        assert_eq!(ends.len(), 3);
        for v in ends {
            assert!(ex.inflection_points.iter().any(|ip| (ip.image - cut.vertices[v]).norm() < 1e-9));
        }
        let matched = ex
            .inflection_points
            .iter()
            .filter(|ip| on_cut.iter().any(|&v| (ip.image - cut.vertices[v]).norm() < 1e-9))
            .count();
        assert_eq!(matched, 6);
    }

    #[test]
    fn cutting_keeps_distortion() {
        let (a, curves) = setup();
        let m = tessellate_conforming(&a, 64, 16, &curves, SlitPolicy::Outgoing).unwrap();
        let cut = cut_slits(&m, &curves, SlitPolicy::Outgoing).unwrap();
        let before = distortion(&m).unwrap().max_distortion;
        let after = distortion(&cut).unwrap().max_distortion;
        assert!(after <= before);
    }

    #[test]
    fn plain_mesh_is_rejected() {
        let (a, curves) = setup();
        let m = tessellate(&a, 32, 8).unwrap();
        assert!(matches!(cut_slits(&m, &curves, SlitPolicy::Outgoing), Err(Error::Mesh(_))));
    }

    #[test]
    fn empty_half_is_a_policy_error() {
        let (a, mut curves) = setup();
        let m = tessellate_conforming(&a, 32, 8, &curves, SlitPolicy::Outgoing).unwrap();
        curves[0].outgoing_arc.clear();
        assert!(matches!(cut_slits(&m, &curves, SlitPolicy::Outgoing), Err(Error::Policy(_))));
    }

    #[test]
    fn alternate_policy_cuts_both_halves() {
        assert_eq!(SlitPolicy::Alternate.half_for(0), Half::Outgoing);
        assert_eq!(SlitPolicy::Alternate.half_for(1), Half::Incoming);
        let (a, curves) = setup();
        let m = tessellate_conforming(&a, 64, 16, &curves, SlitPolicy::Alternate).unwrap();
        let cut = cut_slits(&m, &curves, SlitPolicy::Alternate).unwrap();
        assert_eq!(cut.slits.len(), 3);
    }
}
