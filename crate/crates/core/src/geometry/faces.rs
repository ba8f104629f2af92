//! Face lattice enumeration from vertex/ray-halfspace incidences.

use std::collections::BTreeSet;
use std::sync::Arc;

use super::dd::BitSet;
use super::polytope::{affine_dimension, to_hrep, to_vrep, Polytope};
use crate::error::GeometryError;
use crate::tolerance::GEO;
use crate::vecops::{dot, norm2};

/// A nonempty proper face of `parent`, described by the halfspaces tight on it
/// and the generators it contains.
#[derive(Clone, Debug)]
pub struct FaceDescriptor {
    pub parent: Arc<Polytope>,
    /// Indices into the parent's halfspaces, tight on the whole face.
    pub active: Vec<usize>,
    /// Indices into the parent's vertices.
    pub vertices: Vec<usize>,
    /// Indices into the parent's rays.
    pub rays: Vec<usize>,
}

impl FaceDescriptor {
    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn vertex_points(&self) -> Vec<Vec<f64>> {
        self.vertices.iter().map(|&i| self.parent.vertices()[i].clone()).collect()
    }

    /// Affine dimension of the face.
    pub fn dimension(&self) -> usize {
        let pts = self.vertex_points();
        let mut all = pts.clone();
        if let Some(p0) = pts.first() {
            for &r in &self.rays {
                all.push(crate::vecops::add(p0, &self.parent.rays()[r]));
            }
        }
        affine_dimension(&all)
    }

    /// The face as a standalone polyhedron with both representations.
    pub fn polytope(&self) -> Result<Polytope, GeometryError> {
        let rays = self.rays.iter().map(|&i| self.parent.rays()[i].clone()).collect();
        to_hrep(&Polytope::from_vrep(self.parent.dim(), self.vertex_points(), rays)?)
    }
}

/// All nonempty faces of `p` other than `p` itself.
pub fn faces(p: &Polytope) -> Result<Vec<FaceDescriptor>, GeometryError> {
    let p = if p.has_both() {
        p.clone()
    } else if p.vrep().is_some() {
        to_hrep(p)?
    } else {
        to_vrep(p)?
    };
    let parent = Arc::new(p);
    let verts = parent.vertices();
    let rays = parent.rays();
    let hs = parent.halfspaces();

    let incidence: Vec<(BitSet, BitSet)> = hs
        .iter()
        .map(|h| {
            let s = norm2(&h.normal);
            let mut vb = BitSet::default();
            let mut rb = BitSet::default();
            for (i, v) in verts.iter().enumerate() {
                if (h.offset - dot(&h.normal, v)).abs() / s <= GEO * (1.0 + h.offset.abs()) {
                    vb.insert(i);
                }
            }
            for (i, r) in rays.iter().enumerate() {
                if dot(&h.normal, r).abs() / s <= GEO {
                    rb.insert(i);
                }
            }
            (vb, rb)
        })
        .collect();
    let all_v = BitSet::with_all(verts.len());
    let all_r = BitSet::with_all(rays.len());
    let proper = |f: &(BitSet, BitSet)| !f.0.is_empty() && !(all_v.is_subset(&f.0) && all_r.is_subset(&f.1));

    let facets: Vec<(BitSet, BitSet)> = {
        let set: BTreeSet<(BitSet, BitSet)> = incidence.iter().filter(|f| proper(f)).cloned().collect();
        set.into_iter().collect()
    };
    let mut found: BTreeSet<(BitSet, BitSet)> = facets.iter().cloned().collect();
    let mut frontier: Vec<(BitSet, BitSet)> = facets.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for f in &frontier {
            for g in &facets {
                let h = (f.0.intersection(&g.0), f.1.intersection(&g.1));
                if h.0.is_empty() || found.contains(&h) {
                    continue;
                }
                found.insert(h.clone());
                next.push(h);
            }
        }
        frontier = next;
    }

    let mut out: Vec<FaceDescriptor> = found
        .into_iter()
        .map(|(vb, rb)| {
            let active = incidence
                .iter()
                .enumerate()
                .filter(|(_, (iv, ir))| vb.is_subset(iv) && rb.is_subset(ir))
                .map(|(k, _)| k)
                .collect();
            FaceDescriptor { parent: parent.clone(), active, vertices: vb.iter().collect(), rays: rb.iter().collect() }
        })
        .collect();
    out.sort_by(|a, b| (a.vertices.len() + a.rays.len(), &a.vertices, &a.rays).cmp(&(b.vertices.len() + b.rays.len(), &b.vertices, &b.rays)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count_by_dim(fs: &[FaceDescriptor]) -> Vec<usize> {
        let mut c = vec![0; 4];
        for f in fs {
            c[f.dimension()] += 1;
        }
        c
    }

    #[test]
    fn triangle_faces() {
        let t = Polytope::from_vertices(2, vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let fs = faces(&t).unwrap();
        assert_eq!(count_by_dim(&fs), vec![3, 3, 0, 0]);
    }

    #[test]
    fn square_faces() {
        let fs = faces(&Polytope::boxed(&[0.0, 0.0], &[1.0, 1.0])).unwrap();
        assert_eq!(count_by_dim(&fs), vec![4, 4, 0, 0]);
        for f in &fs {
            assert!(!f.active.is_empty());
            for &v in &f.vertices {
                for &k in &f.active {
                    assert!(f.parent.halfspaces()[k].slack(&f.parent.vertices()[v]).abs() < GEO);
                }
            }
        }
    }

    #[test]
    fn staircase_faces() {
        let p = Polytope::from_vrep(2, vec![vec![0.0, 1.0], vec![1.0, 0.0]], vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let fs = faces(&p).unwrap();
        let bounded_edges: Vec<_> = fs.iter().filter(|f| f.is_bounded() && f.dimension() == 1).collect();
        assert_eq!(bounded_edges.len(), 1);
        let unbounded: Vec<_> = fs.iter().filter(|f| !f.is_bounded()).collect();
        assert_eq!(unbounded.len(), 2);
        assert!(unbounded.iter().all(|f| f.dimension() == 1));
        // brute force: every face's generator set is exactly the set tight on its active halfspaces
        for f in &fs {
            let hs = f.parent.halfspaces();
            let tight_v: Vec<usize> = (0..f.parent.vertices().len())
                .filter(|&i| f.active.iter().all(|&k| hs[k].slack(&f.parent.vertices()[i]).abs() < GEO))
                .collect();
            assert_eq!(tight_v, f.vertices);
        }
    }

    #[test]
    fn cube_face_counts() {
        let fs = faces(&Polytope::boxed(&[0.0; 3], &[1.0; 3])).unwrap();
        assert_eq!(count_by_dim(&fs), vec![8, 12, 6, 0]);
    }

    #[test]
    fn bounded_parent_has_bounded_faces() {
        let fs = faces(&Polytope::boxed(&[0.0; 3], &[1.0; 3])).unwrap();
        assert!(fs.iter().all(|f| f.is_bounded()));
    }
}
