//! Maximal efficient faces of `conv(V) + ℝ^m₊`.
//!
//! A face is efficient when some strictly positive weight `w` is minimized
//! over the polyhedron on a superset of the face, i.e. when the face's normal
//! cone meets `{w ≥ 1}`. Candidates are visited by decreasing dimension and
//! subfaces of accepted faces are skipped.

use crate::error::GeometryError;
use crate::geometry::{faces, to_hrep, FaceDescriptor, Polytope};
use crate::solver::{lp_solve, Status};
use crate::tolerance::GEO;
use crate::vecops::dot;

#[derive(Clone, Debug)]
pub struct EfficientFace {
    pub face: FaceDescriptor,
    /// The face as a bounded polytope with both representations.
    pub polytope: Polytope,
    /// `w ≥ 1` minimized over the parent exactly on a superset of the face.
    pub weight_certificate: Vec<f64>,
}

impl EfficientFace {
    pub fn vertices(&self) -> &[Vec<f64>] {
        self.polytope.vertices()
    }
}

/// A weight `w ≥ 1` in the normal cone of `face`, if one exists.
pub fn is_efficient(face: &FaceDescriptor) -> Option<Vec<f64>> {
    if !face.is_bounded() {
        return None;
    }
    let p = &face.parent;
    let m = p.dim();
    let k = face.active.len();
    if k == 0 {
        return None;
    }
    let normals: Vec<Vec<f64>> = face.active.iter().map(|&h| p.halfspaces()[h].normalized().normal).collect();
    // Variables (w, μ): w = −Σ μₕ nₕ, w ≥ 1, μ ≥ 0; minimize Σw.
    let nv = m + k;
    let mut c = vec![0.0; nv];
    c[..m].iter_mut().for_each(|v| *v = 1.0);
    let mut a = Vec::with_capacity(nv);
    let mut b = Vec::with_capacity(nv);
    for j in 0..nv {
        let mut r = vec![0.0; nv];
        r[j] = -1.0;
        a.push(r);
        b.push(if j < m { -1.0 } else { 0.0 });
    }
    let mut e = Vec::with_capacity(m);
    for l in 0..m {
        let mut r = vec![0.0; nv];
        r[l] = 1.0;
        for (j, n) in normals.iter().enumerate() {
            r[m + j] = n[l];
        }
        e.push(r);
    }
    let d = vec![0.0; m];
    let sol = lp_solve(&c, &a, &b, &e, &d);
    if sol.status != Status::Optimal {
        return None;
    }
    let w: Vec<f64> = sol.x[..m].iter().map(|v| v.max(1.0)).collect();
    // Replay: w must be minimized on every vertex of the face.
    let min = p.vertices().iter().map(|y| dot(&w, y)).fold(f64::INFINITY, f64::min);
    let scale = 1.0 + min.abs();
    face.vertex_points()
        .iter()
        .all(|y| dot(&w, y) - min <= 1e-7 * scale)
        .then_some(w)
}

/// All inclusion-maximal efficient faces of `p = conv(V) + ℝ^m₊`.
pub fn maximal_efficient_faces(p: &Polytope) -> Result<Vec<EfficientFace>, GeometryError> {
    let p = if p.has_both() { p.clone() } else { to_hrep(p)? };
    let mut cands: Vec<(usize, FaceDescriptor)> =
        faces(&p)?.into_iter().filter(|f| f.is_bounded()).map(|f| (f.dimension(), f)).collect();
    cands.sort_by(|x, y| y.0.cmp(&x.0).then(y.1.vertices.len().cmp(&x.1.vertices.len())));
    let mut out: Vec<EfficientFace> = Vec::new();
    for (_, f) in cands {
        if out.iter().any(|e| f.vertices.iter().all(|v| e.face.vertices.contains(v))) {
            continue;
        }
        if let Some(w) = is_efficient(&f) {
            let polytope = f.polytope()?;
            out.push(EfficientFace { face: f, polytope, weight_certificate: w });
        }
    }
    Ok(out)
}

/// `true` when no other point of `p = conv(V) + ℝ^m₊` is componentwise below
/// `y`, by the LP `max Σ(y − Vλ)` over `Vλ ≤ y`, `λ` in the simplex.
pub fn is_minimal(p: &Polytope, y: &[f64], tol: f64) -> bool {
    let vs = p.vertices();
    let k = vs.len();
    let m = y.len();
    let c: Vec<f64> = (0..k).map(|j| vs[j].iter().sum()).collect();
    let mut a = Vec::with_capacity(m + k);
    let mut b = Vec::with_capacity(m + k);
    for l in 0..m {
        a.push(vs.iter().map(|v| v[l]).collect::<Vec<f64>>());
        b.push(y[l] + GEO * 1e-3);
    }
    for j in 0..k {
        let mut r = vec![0.0; k];
        r[j] = -1.0;
        a.push(r);
        b.push(0.0);
    }
    let sol = lp_solve(&c, &a, &b, &[vec![1.0; k]], &[1.0]);
    sol.status == Status::Optimal && y.iter().sum::<f64>() - sol.value <= tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{l1_separation, Polytope};
    use crate::vecops::unit;
    use proptest::prelude::*;

    fn upper(vs: Vec<Vec<f64>>) -> Polytope {
        let m = vs[0].len();
        to_hrep(&Polytope::from_vrep(m, vs, (0..m).map(|k| unit(m, k)).collect()).unwrap()).unwrap()
    }

    fn sorted_vertices(f: &EfficientFace) -> Vec<Vec<f64>> {
        let mut v = f.vertices().to_vec();
        v.sort_by(|a, b| crate::vecops::lex_cmp(a, b));
        v
    }

    #[test]
    fn diagonal_edge_is_efficient() {
        let p = upper(vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        let fs = maximal_efficient_faces(&p).unwrap();
        assert_eq!(fs.len(), 1);
        assert_eq!(sorted_vertices(&fs[0]), vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        let w = &fs[0].weight_certificate;
        assert!((w[0] - w[1]).abs() < 1e-9 && w[0] >= 1.0);
    }

    #[test]
    fn unbounded_facet_has_no_certificate() {
        let p = upper(vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        let fs = faces(&p).unwrap();
        let ray_face = fs.iter().find(|f| !f.is_bounded() && f.vertex_points() == vec![vec![1.0, 0.0]]).unwrap();
        assert!(is_efficient(ray_face).is_none());
    }

    #[test]
    fn unique_minimizer_vertex_is_efficient() {
        let p = upper(vec![vec![0.0, 0.0], vec![1.0, 2.0], vec![2.0, 1.0]]);
        let fs = maximal_efficient_faces(&p).unwrap();
        assert_eq!(fs.len(), 1);
        assert_eq!(sorted_vertices(&fs[0]), vec![vec![0.0, 0.0]]);
    }

    #[test]
    fn dominated_vertex_dropped() {
        let p = upper(vec![vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0]]);
        let fs = maximal_efficient_faces(&p).unwrap();
        assert_eq!(fs.len(), 1);
        assert_eq!(sorted_vertices(&fs[0]), vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
    }

    #[test]
    fn single_point() {
        let p = upper(vec![vec![0.0, 0.0]]);
        let fs = maximal_efficient_faces(&p).unwrap();
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0].vertices(), &[vec![0.0, 0.0]]);
    }

    #[test]
    fn two_edges_meet() {
        let p = upper(vec![vec![0.0, 2.0], vec![1.0, 0.75], vec![2.0, 0.0], vec![0.0, 2.5]]);
        let fs = maximal_efficient_faces(&p).unwrap();
        assert_eq!(fs.len(), 2);
        let mut all: Vec<Vec<Vec<f64>>> = fs.iter().map(sorted_vertices).collect();
        all.sort_by(|a, b| crate::vecops::lex_cmp(&a[0], &b[0]));
        assert_eq!(all[0], vec![vec![0.0, 2.0], vec![1.0, 0.75]]);
        assert_eq!(all[1], vec![vec![1.0, 0.75], vec![2.0, 0.0]]);
    }

    #[test]
    fn collinear_points_give_one_edge() {
        let p = upper(vec![vec![0.0, 2.0], vec![1.0, 1.0], vec![2.0, 0.0]]);
        let fs = maximal_efficient_faces(&p).unwrap();
        assert_eq!(fs.len(), 1);
        assert_eq!(sorted_vertices(&fs[0]), vec![vec![0.0, 2.0], vec![2.0, 0.0]]);
    }

    #[test]
    fn three_dimensional_triangle() {
        let p = upper(vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0], vec![1.0, 1.0, 1.0]]);
        let fs = maximal_efficient_faces(&p).unwrap();
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0].vertices().len(), 3);
        assert!(fs[0].polytope.rays().is_empty());
    }

    /// Boundary point of `p` reached from an interior point `q` along `−c`.
    pub(crate) fn shoot(p: &Polytope, q: &[f64], c: &[f64]) -> Vec<f64> {
        let mut t = f64::INFINITY;
        for h in p.halfspaces() {
            let nc = -dot(&h.normal, c);
            if nc > 1e-12 {
                t = t.min((h.offset - dot(&h.normal, q)) / nc);
            }
        }
        q.iter().zip(c).map(|(a, b)| a - t * b).collect()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn union_of_faces_is_minimal_set(
            m in 2usize..=4,
            raw in proptest::collection::vec(proptest::collection::vec(0.0f64..1.0, 4), 1..=12),
            seed in 0u64..1000,
        ) {
            use rand::{Rng, SeedableRng};
            let vs: Vec<Vec<f64>> = raw.iter().map(|v| v[..m].to_vec()).collect();
            let p = upper(vs.clone());
            let fs = maximal_efficient_faces(&p).unwrap();
            for f in &fs {
                prop_assert!(f.polytope.rays().is_empty());
            }
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..60 {
                let lam: Vec<f64> = vs.iter().map(|_| rng.random::<f64>()).collect();
                let s: f64 = lam.iter().sum();
                let mut q = vec![0.0; m];
                for (l, v) in lam.iter().zip(&vs) {
                    for k in 0..m { q[k] += l / s * v[k]; }
                }
                for qk in q.iter_mut() { *qk += rng.random::<f64>() * 0.5; }
                // mix of generic and axis directions to hit weakly minimal facets
                let c: Vec<f64> = if rng.random::<f64>() < 0.3 {
                    unit(m, rng.random_range(0..m))
                } else {
                    (0..m).map(|_| 0.1 + rng.random::<f64>()).collect()
                };
                let b = shoot(&p, &q, &c);
                let minimal = is_minimal(&p, &b, 1e-7);
                let covered = fs.iter().any(|f| l1_separation(&b, f.vertices(), &[]).0 <= 1e-7);
                prop_assert_eq!(minimal, covered, "boundary point {:?}", b);
            }
        }
    }
}
