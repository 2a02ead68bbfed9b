use std::collections::{BTreeMap, VecDeque};
use std::f64::consts::PI;

use super::{edge_key, SurfaceMesh};
use crate::error::{Error, Result};

/// Connectivity of the mesh after gluing the rectangle's edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuotientTopology {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub euler: i64,
    /// Every edge has exactly two faces.
    pub closed: bool,
    pub orientable: bool,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Welds vertices identified by the rectangle's gluing rules, then counts
/// `V − E + F` and tries to orient the faces consistently.
pub fn quotient_topology(mesh: &SurfaceMesh) -> Result<QuotientTopology> {
    let d = &mesh.domain;
    let tol = 1e-9 * d.r.max(d.s);
    let ur = PI * d.r;
    let mut parent: Vec<usize> = (0..mesh.vertices.len()).collect();

    let edge_set = |pred: &dyn Fn(&[f64; 2]) -> bool| -> Vec<usize> {
        (0..mesh.uvs.len()).filter(|&i| pred(&mesh.uvs[i])).collect()
    };
    let left = edge_set(&|p| (p[0] + ur).abs() < tol);
    let right = edge_set(&|p| (p[0] - ur).abs() < tol);
    let bottom = edge_set(&|p| (p[1] - d.v_min()).abs() < tol);
    let top = edge_set(&|p| (p[1] - d.v_max()).abs() < tol);

    let mut glue = |from: &[usize], to: &[usize], image: &dyn Fn([f64; 2]) -> [f64; 2]| -> Result<()> {
        for &i in from {
            let target = image(mesh.uvs[i]);
            let j = to
                .iter()
                .copied()
                .find(|&j| (mesh.uvs[j][0] - target[0]).abs() < tol && (mesh.uvs[j][1] - target[1]).abs() < tol)
                .ok_or_else(|| Error::Mesh(format!("no partner for boundary vertex {i} at {:?}", mesh.uvs[i])))?;
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            parent[a] = b;
        }
        Ok(())
    };
    glue(&left, &right, &|p| [ur, p[1]])?;
    glue(&bottom, &top, &|p| [d.glue_bottom_to_top(p[0]), d.v_max()])?;

    let roots: Vec<usize> = (0..mesh.vertices.len()).map(|i| find(&mut parent, i)).collect();
    let mut distinct = roots.clone();
    distinct.sort_unstable();
    distinct.dedup();

    let faces: Vec<[usize; 3]> = mesh.triangles.iter().map(|t| t.map(|i| roots[i])).collect();
    if faces.iter().any(|f| f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) {
        return Err(Error::Mesh("a triangle collapses after gluing".into()));
    }
    let mut by_edge: BTreeMap<(usize, usize), Vec<(usize, bool)>> = BTreeMap::new();
    for (fi, f) in faces.iter().enumerate() {
        for k in 0..3 {
            let (a, b) = (f[k], f[(k + 1) % 3]);
            by_edge.entry(edge_key(a, b)).or_default().push((fi, a < b));
        }
    }
    let closed = by_edge.values().all(|v| v.len() == 2);

    let mut sign: Vec<Option<bool>> = vec![None; faces.len()];
    let mut orientable = true;
    for start in 0..faces.len() {
        if sign[start].is_some() {
            continue;
        }
        sign[start] = Some(true);
        let mut queue = VecDeque::from([start]);
        while let Some(f) = queue.pop_front() {
            let sf = sign[f].unwrap();
            for k in 0..3 {
                let (a, b) = (faces[f][k], faces[f][(k + 1) % 3]);
                for &(g, forward) in &by_edge[&edge_key(a, b)] {
                    if g == f {
                        continue;
                    }
                    // Neighbours must run the shared edge in opposite directions.
                    let want = if forward == (a < b) { !sf } else { sf };
                    match sign[g] {
                        None => {
                            sign[g] = Some(want);
                            queue.push_back(g);
                        }
                        Some(s) if s != want => orientable = false,
                        _ => {}
                    }
                }
            }
        }
    }

    let (v, e, f) = (distinct.len(), by_edge.len(), faces.len());
    Ok(QuotientTopology { vertices: v, edges: e, faces: f, euler: v as i64 - e as i64 + f as i64, closed, orientable })
}
