//! Intersections, Minkowski sums with L1 balls, and L1 distances.

use super::polytope::{to_hrep, to_vrep, Halfspace, Polytope};
use crate::error::GeometryError;
use crate::solver::{chebyshev_center, lp_solve, Status};
use crate::tolerance::GEO;
use crate::vecops::{dot, norm2};

/// Intersection of two polyhedra, `None` when empty. The result carries both
/// representations with redundant halfspaces removed.
pub fn intersect(a: &Polytope, b: &Polytope) -> Result<Option<Polytope>, GeometryError> {
    if a.dim() != b.dim() {
        return Err(GeometryError::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    let ha = if a.hrep().is_some() { a.clone() } else { to_hrep(a)? };
    let hb = if b.hrep().is_some() { b.clone() } else { to_hrep(b)? };
    let mut hs: Vec<Halfspace> = ha.halfspaces().to_vec();
    hs.extend(hb.halfspaces().iter().cloned());
    intersect_halfspaces(a.dim(), hs)
}

/// `{y : every halfspace holds}` with emptiness check and redundancy removal.
pub fn intersect_halfspaces(dim: usize, hs: Vec<Halfspace>) -> Result<Option<Polytope>, GeometryError> {
    if !is_nonempty(&hs) {
        return Ok(None);
    }
    let kept = remove_redundant(&hs);
    match to_vrep(&Polytope::from_hrep(dim, kept)?) {
        Ok(p) => Ok(Some(p)),
        Err(GeometryError::Empty) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Nonemptiness of an intersection of halfspaces, certified by the sign of
/// the Chebyshev radius.
pub fn is_nonempty(hs: &[Halfspace]) -> bool {
    chebyshev_radius(hs).is_some_and(|r| r >= -GEO)
}

/// Chebyshev radius of an intersection of halfspaces (negative when empty).
pub fn chebyshev_radius(hs: &[Halfspace]) -> Option<f64> {
    if hs.is_empty() {
        return Some(1.0);
    }
    let a: Vec<Vec<f64>> = hs.iter().map(|h| h.normal.clone()).collect();
    let b: Vec<f64> = hs.iter().map(|h| h.offset).collect();
    chebyshev_center(&a, &b, &[], &[], 1.0).map(|(_, r)| r)
}

/// Drop halfspaces implied by the others, one LP per halfspace.
pub fn remove_redundant(hs: &[Halfspace]) -> Vec<Halfspace> {
    let mut norm: Vec<Halfspace> = Vec::with_capacity(hs.len());
    for h in hs {
        let h = h.normalized();
        let dup = norm.iter_mut().find(|o| crate::vecops::dist_inf(&o.normal, &h.normal) <= 1e-12);
        match dup {
            Some(o) => o.offset = o.offset.min(h.offset),
            None => norm.push(h),
        }
    }
    let mut keep = vec![true; norm.len()];
    for k in 0..norm.len() {
        let (a, b): (Vec<Vec<f64>>, Vec<f64>) = norm
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k && keep[*j])
            .map(|(_, h)| (h.normal.clone(), h.offset))
            .unzip();
        let c: Vec<f64> = norm[k].normal.iter().map(|v| -v).collect();
        let sol = lp_solve(&c, &a, &b, &[], &[]);
        if sol.status == Status::Optimal && -sol.value <= norm[k].offset + GEO {
            keep[k] = false;
        }
    }
    norm.into_iter().zip(keep).filter(|(_, k)| *k).map(|(h, _)| h).collect()
}

/// `p + B_r` for the L1 ball `B_r`, computed from the vertex sums `v ± r·e_k`.
pub fn minkowski_l1_ball(p: &Polytope, r: f64) -> Result<Polytope, GeometryError> {
    if r < 0.0 || r.is_nan() {
        return Err(GeometryError::NegativeRadius(r));
    }
    let p = if p.vrep().is_some() { p.clone() } else { to_vrep(p)? };
    if !p.is_bounded() {
        return Err(GeometryError::Unbounded);
    }
    if r == 0.0 {
        return to_hrep(&p);
    }
    let dim = p.dim();
    let mut gens = Vec::with_capacity(p.vertices().len() * 2 * dim);
    for v in p.vertices() {
        for k in 0..dim {
            for s in [-1.0, 1.0] {
                let mut w = v.clone();
                w[k] += s * r;
                gens.push(w);
            }
        }
    }
    to_hrep(&Polytope::from_vertices(dim, gens)?)
}

/// `min_{x ∈ p} ‖q − x‖₁`.
pub fn l1_distance_to_polytope(q: &[f64], p: &Polytope) -> Result<f64, GeometryError> {
    if q.len() != p.dim() {
        return Err(GeometryError::DimensionMismatch { expected: p.dim(), found: q.len() });
    }
    if let Some(v) = p.vrep() {
        if v.vertices.is_empty() {
            return Err(GeometryError::Empty);
        }
        return Ok(l1_separation(q, &v.vertices, &v.rays).0);
    }
    // Variables (x, s): min Σ s  s.t.  ±(q − x) ≤ s, x ∈ p.
    let n = p.dim();
    let mut c = vec![0.0; 2 * n];
    c[n..].iter_mut().for_each(|v| *v = 1.0);
    let mut a = Vec::new();
    let mut b = Vec::new();
    for k in 0..n {
        let mut row = vec![0.0; 2 * n];
        row[k] = -1.0;
        row[n + k] = -1.0;
        a.push(row);
        b.push(-q[k]);
        let mut row = vec![0.0; 2 * n];
        row[k] = 1.0;
        row[n + k] = -1.0;
        a.push(row);
        b.push(q[k]);
    }
    for h in p.halfspaces() {
        let mut row = h.normal.clone();
        row.extend(std::iter::repeat_n(0.0, n));
        a.push(row);
        b.push(h.offset);
    }
    let sol = lp_solve(&c, &a, &b, &[], &[]);
    match sol.status {
        Status::Optimal => Ok(sol.value.max(0.0)),
        _ => Err(GeometryError::Empty),
    }
}

/// L1 distance from `q` to `conv(points) + cone(rays)` together with a
/// separating direction `d` (`‖d‖∞ ≤ 1`) attaining
/// `d·q − max_j d·p_j = distance`.
pub fn l1_separation(q: &[f64], points: &[Vec<f64>], rays: &[Vec<f64>]) -> (f64, Vec<f64>) {
    let n = q.len();
    // Variables (d, τ): max d·q − τ  s.t. d·p_j ≤ τ, d·r ≤ 0, −1 ≤ d ≤ 1.
    let mut c: Vec<f64> = q.iter().map(|v| -v).collect();
    c.push(1.0);
    let mut a = Vec::with_capacity(points.len() + rays.len() + 2 * n);
    let mut b = Vec::with_capacity(a.capacity());
    for p in points {
        let mut row = p.clone();
        row.push(-1.0);
        a.push(row);
        b.push(0.0);
    }
    for r in rays {
        let mut row = r.clone();
        row.push(0.0);
        a.push(row);
        b.push(0.0);
    }
    for k in 0..n {
        let mut row = vec![0.0; n + 1];
        row[k] = 1.0;
        a.push(row.clone());
        b.push(1.0);
        row[k] = -1.0;
        a.push(row);
        b.push(1.0);
    }
    let sol = lp_solve(&c, &a, &b, &[], &[]);
    if sol.status != Status::Optimal {
        return (f64::INFINITY, vec![0.0; n]);
    }
    (-sol.value.min(0.0), sol.x[..n].to_vec())
}

/// Membership of `y` in `conv(vertices) + cone(rays)` within `tol` (L1).
pub fn vrep_contains(vertices: &[Vec<f64>], rays: &[Vec<f64>], y: &[f64], tol: f64) -> bool {
    l1_separation(y, vertices, rays).0 <= tol
}

/// Maximum of `d·x` over the vertices.
pub fn support(points: &[Vec<f64>], d: &[f64]) -> f64 {
    points.iter().map(|p| dot(p, d)).fold(f64::NEG_INFINITY, f64::max)
}

/// Unit-normalize a direction in the Euclidean norm.
pub fn unit_direction(d: &[f64]) -> Vec<f64> {
    let s = norm2(d);
    d.iter().map(|v| v / s).collect()
}

/// A random point of a bounded polytope: uniform rejection sampling in the
/// bounding box, falling back to a random convex combination of vertices for
/// thin sets.
pub fn sample_in_polytope<R: rand::Rng>(p: &Polytope, rng: &mut R) -> Vec<f64> {
    let vs = p.vertices();
    if let (Some((lo, hi)), Some(hs)) = (p.bounding_box(), p.hrep()) {
        for _ in 0..200 {
            let x: Vec<f64> = lo.iter().zip(&hi).map(|(&l, &h)| if h > l { rng.random_range(l..=h) } else { l }).collect();
            if hs.iter().all(|h| h.contains(&x, 0.0)) {
                return x;
            }
        }
    }
    let w: Vec<f64> = vs.iter().map(|_| -rng.random::<f64>().max(1e-300).ln()).collect();
    let s: f64 = w.iter().sum();
    let mut x = vec![0.0; p.dim()];
    for (v, wi) in vs.iter().zip(&w) {
        x = crate::vecops::axpy(&x, wi / s, v);
    }
    x
}
