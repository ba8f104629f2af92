//! Halfspaces, polyhedra in double representation, and conversions.

use serde::{Deserialize, Serialize};

use super::dd::{BitSet, Cone};
use crate::error::GeometryError;
use crate::tolerance::{FLAT, GEO};
use crate::vecops::{dot, lex_cmp, norm2};

/// `{y : normal·y ≤ offset}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Halfspace {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl Halfspace {
    pub fn new(normal: Vec<f64>, offset: f64) -> Result<Self, GeometryError> {
        if normal.iter().all(|&v| v == 0.0) {
            return Err(GeometryError::ZeroNormal);
        }
        Ok(Self { normal, offset })
    }

    /// `offset − normal·y`, scaled to a unit normal.
    pub fn slack(&self, y: &[f64]) -> f64 {
        (self.offset - dot(&self.normal, y)) / norm2(&self.normal)
    }

    pub fn contains(&self, y: &[f64], tol: f64) -> bool {
        self.slack(y) >= -tol
    }

    pub fn normalized(&self) -> Self {
        let s = norm2(&self.normal);
        Self { normal: self.normal.iter().map(|v| v / s).collect(), offset: self.offset / s }
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }
}

/// Vertices and extreme rays.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VRep {
    pub vertices: Vec<Vec<f64>>,
    pub rays: Vec<Vec<f64>>,
}

/// A pointed polyhedron carrying an H-representation, a V-representation, or both.
#[derive(Clone, Debug, PartialEq)]
pub struct Polytope {
    dim: usize,
    hrep: Option<Vec<Halfspace>>,
    vrep: Option<VRep>,
}

impl Polytope {
    pub fn from_hrep(dim: usize, halfspaces: Vec<Halfspace>) -> Result<Self, GeometryError> {
        for h in &halfspaces {
            check_dim(dim, h.dim())?;
            if h.normal.iter().all(|&v| v == 0.0) {
                return Err(GeometryError::ZeroNormal);
            }
        }
        Ok(Self { dim, hrep: Some(halfspaces), vrep: None })
    }

    pub fn from_vertices(dim: usize, vertices: Vec<Vec<f64>>) -> Result<Self, GeometryError> {
        Self::from_vrep(dim, vertices, Vec::new())
    }

    pub fn from_vrep(dim: usize, vertices: Vec<Vec<f64>>, rays: Vec<Vec<f64>>) -> Result<Self, GeometryError> {
        if dim == 0 {
            return Err(GeometryError::DimensionMismatch { expected: 1, found: 0 });
        }
        for v in vertices.iter().chain(&rays) {
            check_dim(dim, v.len())?;
        }
        if vertices.is_empty() {
            return Err(GeometryError::Empty);
        }
        Ok(Self { dim, hrep: None, vrep: Some(VRep { vertices, rays }) })
    }

    /// Both representations supplied by the caller, trusted as consistent.
    pub fn from_parts(dim: usize, halfspaces: Vec<Halfspace>, vrep: VRep) -> Self {
        Self { dim, hrep: Some(halfspaces), vrep: Some(vrep) }
    }

    /// Axis-aligned box with both representations.
    pub fn boxed(lo: &[f64], hi: &[f64]) -> Self {
        let dim = lo.len();
        let mut hs = Vec::with_capacity(2 * dim);
        for k in 0..dim {
            hs.push(Halfspace { normal: crate::vecops::unit(dim, k), offset: hi[k] });
            hs.push(Halfspace { normal: crate::vecops::scale(&crate::vecops::unit(dim, k), -1.0), offset: -lo[k] });
        }
        let mut verts = Vec::with_capacity(1 << dim);
        for mask in 0..(1usize << dim) {
            verts.push((0..dim).map(|k| if mask & (1 << k) != 0 { hi[k] } else { lo[k] }).collect());
        }
        let mut p = Self { dim, hrep: Some(hs), vrep: Some(VRep { vertices: verts, rays: vec![] }) };
        p.canonicalize_vertices();
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hrep(&self) -> Option<&[Halfspace]> {
        self.hrep.as_deref()
    }

    pub fn vrep(&self) -> Option<&VRep> {
        self.vrep.as_ref()
    }

    /// Vertices, empty if only the H-representation is known.
    pub fn vertices(&self) -> &[Vec<f64>] {
        self.vrep.as_ref().map(|v| v.vertices.as_slice()).unwrap_or(&[])
    }

    pub fn rays(&self) -> &[Vec<f64>] {
        self.vrep.as_ref().map(|v| v.rays.as_slice()).unwrap_or(&[])
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        self.hrep.as_deref().unwrap_or(&[])
    }

    pub fn has_both(&self) -> bool {
        self.hrep.is_some() && self.vrep.is_some()
    }

    pub fn is_bounded(&self) -> bool {
        self.rays().is_empty()
    }

    /// `(A, b)` with rows of the H-representation.
    pub fn constraint_rows(&self) -> (Vec<Vec<f64>>, Vec<f64>) {
        let hs = self.halfspaces();
        (hs.iter().map(|h| h.normal.clone()).collect(), hs.iter().map(|h| h.offset).collect())
    }

    /// Membership within `tol`, using the H-representation when present.
    pub fn contains(&self, y: &[f64], tol: f64) -> bool {
        if let Some(hs) = &self.hrep {
            return hs.iter().all(|h| h.contains(y, tol));
        }
        let vrep = self.vrep.as_ref().expect("some representation");
        super::ops::vrep_contains(&vrep.vertices, &vrep.rays, y, tol)
    }

    /// Largest violation of any halfspace at `y` (H-representation required).
    pub fn violation(&self, y: &[f64]) -> f64 {
        self.halfspaces().iter().map(|h| -h.slack(y)).fold(0.0, f64::max)
    }

    /// Sort vertices and rays lexicographically.
    pub fn canonicalize_vertices(&mut self) {
        if let Some(v) = &mut self.vrep {
            v.vertices.sort_by(|a, b| lex_cmp(a, b));
            v.rays.sort_by(|a, b| lex_cmp(a, b));
        }
    }

    /// Bounding box of the vertices.
    pub fn bounding_box(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        let vs = self.vertices();
        let first = vs.first()?;
        let mut lo = first.clone();
        let mut hi = first.clone();
        for v in vs {
            for k in 0..self.dim {
                lo[k] = lo[k].min(v[k]);
                hi[k] = hi[k].max(v[k]);
            }
        }
        Some((lo, hi))
    }
}

fn check_dim(expected: usize, found: usize) -> Result<(), GeometryError> {
    if expected != found {
        return Err(GeometryError::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Return a polytope carrying both representations, computing the
/// H-representation from the vertices and rays by double description.
pub fn to_hrep(p: &Polytope) -> Result<Polytope, GeometryError> {
    if p.has_both() {
        return Ok(p.clone());
    }
    let vrep = p.vrep.as_ref().ok_or(GeometryError::MissingRepresentation("vertex"))?;
    let (hs, verts) = hrep_from_vrep(p.dim, &vrep.vertices, &vrep.rays)?;
    let rays = dedupe_dirs(&vrep.rays);
    let mut out = Polytope { dim: p.dim, hrep: Some(hs), vrep: Some(VRep { vertices: verts, rays }) };
    out.canonicalize_vertices();
    Ok(out)
}

/// Return a polytope carrying both representations, enumerating vertices and
/// extreme rays from the halfspaces. Empty sets are reported as an error.
pub fn to_vrep(p: &Polytope) -> Result<Polytope, GeometryError> {
    if p.has_both() {
        return Ok(p.clone());
    }
    let hs = p.hrep.as_ref().ok_or(GeometryError::MissingRepresentation("halfspace"))?;
    let vrep = vrep_from_hrep(p.dim, hs)?;
    let mut out = Polytope { dim: p.dim, hrep: Some(hs.clone()), vrep: Some(vrep) };
    out.canonicalize_vertices();
    Ok(out)
}

/// Incremental H-to-V conversion used by the outer approximation loop.
#[derive(Clone, Debug)]
pub struct HomogenizedHrep {
    dim: usize,
    cone: Cone,
    halfspaces: Vec<Halfspace>,
    equalities: Vec<Halfspace>,
}

impl HomogenizedHrep {
    pub fn new(dim: usize) -> Self {
        let mut cone = Cone::full(dim + 1);
        cone.add_inequality(&crate::vecops::unit(dim + 1, dim));
        Self { dim, cone, halfspaces: Vec::new(), equalities: Vec::new() }
    }

    pub fn add(&mut self, h: Halfspace) {
        let mut row: Vec<f64> = h.normal.iter().map(|v| -v).collect();
        row.push(h.offset);
        self.cone.add_inequality(&row);
        self.halfspaces.push(h);
    }

    /// Add `normal·y = offset`.
    pub fn add_equality(&mut self, h: Halfspace) {
        let mut row: Vec<f64> = h.normal.iter().map(|v| -v).collect();
        row.push(h.offset);
        self.cone.add_equality(&row);
        self.equalities.push(h);
    }

    /// All constraints as halfspaces; equalities appear as pairs.
    pub fn halfspaces(&self) -> Vec<Halfspace> {
        let mut out = self.halfspaces.clone();
        for e in &self.equalities {
            out.push(e.clone());
            out.push(Halfspace { normal: e.normal.iter().map(|v| -v).collect(), offset: -e.offset });
        }
        out
    }

    pub fn vrep(&self) -> Result<VRep, GeometryError> {
        if !self.cone.lineality().is_empty() {
            return Err(GeometryError::NotPointed);
        }
        let mut vertices = Vec::new();
        let mut rays = Vec::new();
        for r in self.cone.rays() {
            let t = r.v[self.dim];
            if t > 1e-10 {
                vertices.push(r.v[..self.dim].iter().map(|x| x / t).collect::<Vec<f64>>());
            } else {
                let mut d = r.v[..self.dim].to_vec();
                let s = norm2(&d);
                if s > 1e-12 {
                    d.iter_mut().for_each(|x| *x /= s);
                    rays.push(d);
                }
            }
        }
        if vertices.is_empty() {
            return Err(GeometryError::Empty);
        }
        let mut v = VRep { vertices: dedupe_points(vertices), rays: dedupe_dirs(&rays) };
        v.vertices.sort_by(|a, b| lex_cmp(a, b));
        v.rays.sort_by(|a, b| lex_cmp(a, b));
        Ok(v)
    }

    pub fn to_polytope(&self) -> Result<Polytope, GeometryError> {
        Ok(Polytope { dim: self.dim, hrep: Some(self.halfspaces()), vrep: Some(self.vrep()?) })
    }
}

fn vrep_from_hrep(dim: usize, hs: &[Halfspace]) -> Result<VRep, GeometryError> {
    let mut h = HomogenizedHrep::new(dim);
    let normalized: Vec<Halfspace> = hs.iter().map(|x| x.normalized()).collect();
    let mut used = vec![false; hs.len()];
    // Opposite pairs are implicit equalities.
    for i in 0..normalized.len() {
        if used[i] {
            continue;
        }
        for j in i + 1..normalized.len() {
            if used[j] {
                continue;
            }
            let a = &normalized[i];
            let b = &normalized[j];
            let opposite = a.normal.iter().zip(&b.normal).all(|(x, y)| (x + y).abs() <= GEO)
                && (a.offset + b.offset).abs() <= GEO;
            if opposite {
                used[i] = true;
                used[j] = true;
                h.add_equality(a.clone());
                break;
            }
        }
    }
    for (i, x) in normalized.into_iter().enumerate() {
        if !used[i] {
            h.add(x);
        }
    }
    h.vrep()
}

/// Facets (and equality pairs) of `conv(V) + cone(R)` plus its extreme points.
fn hrep_from_vrep(
    dim: usize,
    vertices: &[Vec<f64>],
    rays: &[Vec<f64>],
) -> Result<(Vec<Halfspace>, Vec<Vec<f64>>), GeometryError> {
    let scale = 1.0 + vertices.iter().flatten().fold(0.0f64, |a, x| a.max(x.abs()));
    let vertices = merge_close(flatten(vertices, rays), FLAT * scale);
    // Dual cone over (α, β): α·v + β ≥ 0 for vertices, α·r ≥ 0 for rays.
    let mut cone = Cone::full(dim + 1);
    for v in &vertices {
        let mut row = v.clone();
        row.push(1.0);
        cone.add_inequality(&row);
    }
    for r in rays {
        let mut row = r.clone();
        row.push(0.0);
        cone.add_inequality(&row);
    }
    let nv = vertices.len();
    let mut out = Vec::new();
    let lin = orthonormal(cone.lineality());
    for l in &lin {
        let alpha = &l[..dim];
        if norm2(alpha) <= 1e-12 {
            continue;
        }
        out.push(Halfspace { normal: alpha.iter().map(|v| -v).collect(), offset: l[dim] }.normalized());
        out.push(Halfspace { normal: alpha.to_vec(), offset: -l[dim] }.normalized());
    }
    let mut incidence: Vec<BitSet> = Vec::new();
    for r in cone.rays() {
        // A facet touches at least one vertex; the trivial ray (0, 1) does not.
        if !(0..nv).any(|i| r.zero.contains(i)) {
            continue;
        }
        let mut v = r.v.clone();
        for l in &lin {
            let c = dot(&v, l);
            for (x, y) in v.iter_mut().zip(l) {
                *x -= c * y;
            }
        }
        let alpha = &v[..dim];
        if norm2(alpha) <= 1e-12 {
            continue;
        }
        let h = Halfspace { normal: alpha.iter().map(|x| -x).collect(), offset: v[dim] }.normalized();
        out.push(h);
        incidence.push(r.zero.clone());
    }
    // Extreme points: tight facets plus equality normals span the space.
    let eq_rows: Vec<Vec<f64>> = lin.iter().map(|l| l[..dim].to_vec()).filter(|a| norm2(a) > 1e-12).collect();
    let n_eq_pairs = out.len() - incidence.len();
    let facets = &out[n_eq_pairs..];
    let mut extreme = Vec::new();
    for (i, v) in vertices.iter().enumerate() {
        let mut rows = eq_rows.clone();
        for (f, inc) in facets.iter().zip(&incidence) {
            if inc.contains(i) {
                rows.push(f.normal.clone());
            }
        }
        if rank(&rows, dim) == dim {
            extreme.push(v.clone());
        }
    }
    if extreme.is_empty() {
        extreme = vertices;
    }
    Ok((out, extreme))
}

/// Project `points` onto their numerical affine hull (together with the span
/// of `rays`). Directions along which the cloud is thinner than `FLAT` times
/// its magnitude are removed, since double description cannot classify such
/// slivers consistently.
fn flatten(points: &[Vec<f64>], rays: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let k = points.len();
    if k < 2 {
        return points.to_vec();
    }
    let dim = points[0].len();
    let ray_basis = orthonormal(rays);
    let mut center = vec![0.0; dim];
    for p in points {
        for (c, x) in center.iter_mut().zip(p) {
            *c += x / k as f64;
        }
    }
    let resid: Vec<Vec<f64>> = points
        .iter()
        .map(|p| {
            let mut d = crate::vecops::sub(p, &center);
            for u in &ray_basis {
                let c = dot(&d, u);
                d.iter_mut().zip(u).for_each(|(x, y)| *x -= c * y);
            }
            d
        })
        .collect();
    let scale = 1.0 + points.iter().flatten().fold(0.0f64, |a, x| a.max(x.abs()));
    let tol = FLAT * scale;
    let m = nalgebra::DMatrix::from_fn(k, dim, |r, c| resid[r][c]);
    let Some(vt) = m.svd(false, true).v_t else {
        return points.to_vec();
    };
    let mut out = points.to_vec();
    for row in vt.row_iter() {
        let u: Vec<f64> = row.iter().copied().collect();
        let proj: Vec<f64> = resid.iter().map(|d| dot(d, &u)).collect();
        let width = proj.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        if width > 1e-12 * scale && width <= tol {
            for (p, c) in out.iter_mut().zip(&proj) {
                p.iter_mut().zip(&u).for_each(|(x, y)| *x -= c * y);
            }
        }
    }
    out
}

fn orthonormal(vs: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for v in vs {
        let mut w = v.clone();
        for _ in 0..2 {
            for u in &out {
                let c = dot(&w, u);
                for (x, y) in w.iter_mut().zip(u) {
                    *x -= c * y;
                }
            }
        }
        let s = norm2(&w);
        if s > 1e-10 {
            w.iter_mut().for_each(|x| *x /= s);
            out.push(w);
        }
    }
    out
}

pub(crate) fn rank(rows: &[Vec<f64>], dim: usize) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let m = nalgebra::DMatrix::from_fn(rows.len(), dim, |r, c| rows[r][c] / norm2(&rows[r]).max(1e-300));
    m.rank(1e-8)
}

/// Affine dimension of a point set.
pub fn affine_dimension(points: &[Vec<f64>]) -> usize {
    let Some(p0) = points.first() else {
        return 0;
    };
    let diffs: Vec<Vec<f64>> = points[1..].iter().map(|p| crate::vecops::sub(p, p0)).filter(|d| norm2(d) > 1e-12).collect();
    if diffs.is_empty() {
        return 0;
    }
    let dim = p0.len();
    let m = nalgebra::DMatrix::from_fn(diffs.len(), dim, |r, c| diffs[r][c]);
    m.rank(1e-9)
}

/// Greedy merge of points closer than `tol` in the max norm.
fn merge_close(points: Vec<Vec<f64>>, tol: f64) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(points.len());
    for p in points {
        if !out.iter().any(|o| crate::vecops::dist_inf(o, &p) <= tol) {
            out.push(p);
        }
    }
    out
}

pub(crate) fn dedupe_points(points: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(points.len());
    for p in points {
        if !out.iter().any(|o| crate::vecops::dist_inf(o, &p) <= GEO) {
            out.push(p);
        }
    }
    out
}

fn dedupe_dirs(dirs: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for d in dirs {
        let s = norm2(d);
        if s <= 1e-12 {
            continue;
        }
        let u: Vec<f64> = d.iter().map(|x| x / s).collect();
        if !out.iter().any(|o| crate::vecops::dist_inf(o, &u) <= GEO) {
            out.push(u);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square_hrep() -> Polytope {
        Polytope::from_hrep(
            2,
            vec![
                Halfspace::new(vec![1.0, 0.0], 1.0).unwrap(),
                Halfspace::new(vec![-1.0, 0.0], 0.0).unwrap(),
                Halfspace::new(vec![0.0, 1.0], 1.0).unwrap(),
                Halfspace::new(vec![0.0, -1.0], 0.0).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn square_vertices_to_four_halfspaces() {
        let p = Polytope::from_vertices(2, vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let q = to_hrep(&p).unwrap();
        assert_eq!(q.halfspaces().len(), 4);
        assert!(q.contains(&[0.5, 0.5], GEO));
        assert!(!q.contains(&[1.5, 0.5], GEO));
    }

    #[test]
    fn staircase_with_rays() {
        let p = Polytope::from_vrep(
            2,
            vec![vec![0.0, 1.0], vec![1.0, 0.0]],
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        )
        .unwrap();
        let q = to_hrep(&p).unwrap();
        assert_eq!(q.halfspaces().len(), 3);
        // grid membership agrees with the direct description
        for i in -20..=40 {
            for j in -20..=40 {
                let y = [i as f64 * 0.1, j as f64 * 0.1];
                let truth = y[0] + y[1] >= 1.0 - 1e-12 && y[0] >= -1e-12 && y[1] >= -1e-12;
                assert_eq!(q.contains(&y, GEO), truth, "{y:?}");
            }
        }
    }

    #[test]
    fn single_point_is_equality_pair() {
        let p = Polytope::from_vertices(1, vec![vec![3.0]]).unwrap();
        let q = to_hrep(&p).unwrap();
        assert_eq!(q.halfspaces().len(), 2);
        assert!(q.contains(&[3.0], GEO));
        assert!(!q.contains(&[3.1], GEO));
        assert!(!q.contains(&[2.9], GEO));
    }

    #[test]
    fn to_hrep_idempotent_and_prunes_interior_points() {
        let p = Polytope::from_vertices(2, vec![vec![0.0, 0.0], vec![2.0, 0.0], vec![0.0, 2.0], vec![0.5, 0.5], vec![1.0, 1.0]]).unwrap();
        let q = to_hrep(&p).unwrap();
        assert_eq!(q.vertices().len(), 3);
        let r = to_hrep(&q).unwrap();
        assert_eq!(q, r);
    }

    #[test]
    fn square_hrep_to_vertices() {
        let q = to_vrep(&square_hrep()).unwrap();
        assert_eq!(q.vertices().len(), 4);
        assert!(q.rays().is_empty());
    }

    #[test]
    fn orthant_vertex_and_rays() {
        let p = Polytope::from_hrep(
            2,
            vec![Halfspace::new(vec![-1.0, 0.0], 0.0).unwrap(), Halfspace::new(vec![0.0, -1.0], 0.0).unwrap()],
        )
        .unwrap();
        let q = to_vrep(&p).unwrap();
        assert_eq!(q.vertices(), &[vec![0.0, 0.0]]);
        assert_eq!(q.rays().len(), 2);
    }

    #[test]
    fn symmetric_box_vertices() {
        let b = Polytope::boxed(&[-1.0, -1.0], &[1.0, 1.0]);
        let p = Polytope::from_hrep(2, b.halfspaces().to_vec()).unwrap();
        let q = to_vrep(&p).unwrap();
        let mut vs = q.vertices().to_vec();
        vs.sort_by(|a, b| lex_cmp(a, b));
        assert_eq!(vs, vec![vec![-1.0, -1.0], vec![-1.0, 1.0], vec![1.0, -1.0], vec![1.0, 1.0]]);
    }

    #[test]
    fn empty_hrep_reported() {
        let p = Polytope::from_hrep(
            1,
            vec![Halfspace::new(vec![1.0], 0.0).unwrap(), Halfspace::new(vec![-1.0], -1.0).unwrap()],
        )
        .unwrap();
        assert_eq!(to_vrep(&p).unwrap_err(), GeometryError::Empty);
    }

    #[test]
    fn mismatched_vertex_dimensions_rejected() {
        assert!(Polytope::from_vertices(2, vec![vec![0.0, 0.0], vec![1.0]]).is_err());
    }

    #[test]
    fn segment_in_space_round_trips() {
        let p = Polytope::from_vertices(3, vec![vec![0.0, 0.0, 0.0], vec![1.0, 2.0, 3.0]]).unwrap();
        let q = to_hrep(&p).unwrap();
        let back = to_vrep(&Polytope::from_hrep(3, q.halfspaces().to_vec()).unwrap()).unwrap();
        assert_eq!(back.vertices().len(), 2);
        assert!(q.contains(&[0.5, 1.0, 1.5], GEO));
        assert!(!q.contains(&[0.5, 1.0, 1.6], 1e-6));
    }

    #[test]
    fn near_duplicate_points_keep_full_hull() {
        // support points of a thin lens; two pairs differ by a few 1e-9
        let pts = vec![
            vec![0.528652493929671, 0.4713475060705909],
            vec![0.5643262575548605, 0.4356737502285198],
            vec![0.5643262536636888, 0.43567375022792704],
            vec![0.5286525026662923, 0.4713475060705909],
            vec![0.5515756971627588, 0.4569015116904417],
            vec![0.5413426159044263, 0.46501052613881655],
            vec![0.5592598966120494, 0.44709324651950455],
            vec![0.5352980630369718, 0.4684044614960234],
            vec![0.562123704998385, 0.4415788259371445],
        ];
        let h = to_hrep(&Polytope::from_vertices(2, pts.clone()).unwrap()).unwrap();
        for p in &pts {
            assert!(h.violation(p) <= 1e-7, "{p:?}");
        }
        assert!(h.contains(&[0.55, 0.451], 1e-9) && h.contains(&[0.55, 0.45], 1e-8));
        assert_eq!(h.vertices().len(), 7);
    }

    #[test]
    fn sliver_is_flattened_to_segment() {
        let pts = vec![vec![0.0, 0.0], vec![1.0, 1e-9], vec![0.5, -1e-9], vec![0.25, 0.0]];
        let h = to_hrep(&Polytope::from_vertices(2, pts).unwrap()).unwrap();
        assert_eq!(h.vertices().len(), 2);
        assert!(h.contains(&[0.5, 0.0], 1e-8));
    }
}
