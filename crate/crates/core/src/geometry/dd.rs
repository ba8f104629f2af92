//! Double description method on polyhedral cones `{z : Az ≥ 0, Ez = 0}`.
//!
//! The cone is kept as `lin(L) + cone(R)`. Constraints are inserted one at a
//! time; each extreme ray records the set of inequality constraints it makes
//! tight, and new rays are formed only from combinatorially adjacent pairs.

use crate::tolerance::GEO;
use crate::vecops::{dot, norm2, norm_inf};

/// Growable bitset over constraint indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitSet(Vec<u64>);

impl BitSet {
    pub fn with_all(n: usize) -> Self {
        let mut b = BitSet(vec![0; n.div_ceil(64)]);
        for i in 0..n {
            b.insert(i);
        }
        b
    }

    pub fn insert(&mut self, i: usize) {
        let w = i / 64;
        if self.0.len() <= w {
            self.0.resize(w + 1, 0);
        }
        self.0[w] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.get(i / 64).is_some_and(|w| w & (1 << (i % 64)) != 0)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let n = self.0.len().min(other.0.len());
        let mut v: Vec<u64> = (0..n).map(|i| self.0[i] & other.0[i]).collect();
        while v.last() == Some(&0) {
            v.pop();
        }
        BitSet(v)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.0.iter().enumerate().all(|(i, &w)| w & !other.0.get(i).copied().unwrap_or(0) == 0)
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(w, &bits)| (0..64).filter(move |b| bits & (1 << b) != 0).map(move |b| w * 64 + b))
    }

    fn trimmed(mut self) -> Self {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
        self
    }
}

#[derive(Clone, Debug)]
pub struct Ray {
    pub v: Vec<f64>,
    pub zero: BitSet,
}

#[derive(Clone, Debug)]
pub struct Cone {
    dim: usize,
    lineality: Vec<Vec<f64>>,
    rays: Vec<Ray>,
    n_ineq: usize,
}

impl Cone {
    /// The whole space `ℝ^dim`.
    pub fn full(dim: usize) -> Self {
        let lineality = (0..dim).map(|k| crate::vecops::unit(dim, k)).collect();
        Self { dim, lineality, rays: Vec::new(), n_ineq: 0 }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lineality(&self) -> &[Vec<f64>] {
        &self.lineality
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn n_inequalities(&self) -> usize {
        self.n_ineq
    }

    /// Insert `a·z ≥ 0`. Returns the index assigned to the constraint.
    pub fn add_inequality(&mut self, a: &[f64]) -> usize {
        let idx = self.n_ineq;
        self.n_ineq += 1;
        let s = norm2(a);
        if s == 0.0 {
            for r in &mut self.rays {
                r.zero.insert(idx);
            }
            return idx;
        }
        let a: Vec<f64> = a.iter().map(|v| v / s).collect();

        if let Some(pos) = self.pivot_lineality(&a) {
            let mut l0 = self.lineality.swap_remove(pos);
            if dot(&a, &l0) < 0.0 {
                l0.iter_mut().for_each(|v| *v = -*v);
            }
            let al0 = dot(&a, &l0);
            for l in &mut self.lineality {
                let c = dot(&a, l) / al0;
                for (x, y) in l.iter_mut().zip(&l0) {
                    *x -= c * y;
                }
            }
            for r in &mut self.rays {
                let c = dot(&a, &r.v) / al0;
                for (x, y) in r.v.iter_mut().zip(&l0) {
                    *x -= c * y;
                }
                normalize(&mut r.v);
                r.zero.insert(idx);
            }
            normalize(&mut l0);
            let zero = if idx == 0 { BitSet::default() } else { BitSet::with_all(idx) };
            self.rays.push(Ray { v: l0, zero });
            self.dedupe();
            return idx;
        }

        let vals: Vec<f64> = self.rays.iter().map(|r| dot(&a, &r.v)).collect();
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for (i, &v) in vals.iter().enumerate() {
            if v > GEO {
                pos.push(i);
            } else if v < -GEO {
                neg.push(i);
            }
        }
        let new_rays = self.combine(&pos, &neg, &vals, Some(idx));
        let mut kept: Vec<Ray> = Vec::with_capacity(self.rays.len() + new_rays.len());
        for (i, mut r) in std::mem::take(&mut self.rays).into_iter().enumerate() {
            if vals[i] < -GEO {
                continue;
            }
            if vals[i] <= GEO {
                r.zero.insert(idx);
            }
            kept.push(r);
        }
        kept.extend(new_rays);
        self.rays = kept;
        self.dedupe();
        idx
    }

    /// Insert `a·z = 0`.
    pub fn add_equality(&mut self, a: &[f64]) {
        let s = norm2(a);
        if s == 0.0 {
            return;
        }
        let a: Vec<f64> = a.iter().map(|v| v / s).collect();
        if let Some(pos) = self.pivot_lineality(&a) {
            let l0 = self.lineality.swap_remove(pos);
            let al0 = dot(&a, &l0);
            for l in &mut self.lineality {
                let c = dot(&a, l) / al0;
                for (x, y) in l.iter_mut().zip(&l0) {
                    *x -= c * y;
                }
            }
            for r in &mut self.rays {
                let c = dot(&a, &r.v) / al0;
                for (x, y) in r.v.iter_mut().zip(&l0) {
                    *x -= c * y;
                }
                normalize(&mut r.v);
            }
            self.dedupe();
            return;
        }
        let vals: Vec<f64> = self.rays.iter().map(|r| dot(&a, &r.v)).collect();
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for (i, &v) in vals.iter().enumerate() {
            if v > GEO {
                pos.push(i);
            } else if v < -GEO {
                neg.push(i);
            }
        }
        let new_rays = self.combine(&pos, &neg, &vals, None);
        let mut kept: Vec<Ray> = std::mem::take(&mut self.rays)
            .into_iter()
            .enumerate()
            .filter(|(i, _)| vals[*i].abs() <= GEO)
            .map(|(_, r)| r)
            .collect();
        kept.extend(new_rays);
        self.rays = kept;
        self.dedupe();
    }

    fn pivot_lineality(&self, a: &[f64]) -> Option<usize> {
        let mut best = None;
        let mut best_val = GEO;
        for (i, l) in self.lineality.iter().enumerate() {
            let v = dot(a, l).abs();
            if v > best_val {
                best_val = v;
                best = Some(i);
            }
        }
        best
    }

    fn combine(&self, pos: &[usize], neg: &[usize], vals: &[f64], idx: Option<usize>) -> Vec<Ray> {
        let mut out = Vec::new();
        for &p in pos {
            for &q in neg {
                let common = self.rays[p].zero.intersection(&self.rays[q].zero);
                if !self.adjacent(p, q, &common) {
                    continue;
                }
                let vp = vals[p];
                let vq = -vals[q];
                let mut v: Vec<f64> =
                    self.rays[q].v.iter().zip(&self.rays[p].v).map(|(rq, rp)| vp * rq + vq * rp).collect();
                if !normalize(&mut v) {
                    continue;
                }
                let mut zero = common;
                if let Some(i) = idx {
                    zero.insert(i);
                }
                out.push(Ray { v, zero: zero.trimmed() });
            }
        }
        out
    }

    /// Combinatorial adjacency: no third ray is tight on every constraint
    /// shared by `p` and `q`.
    fn adjacent(&self, p: usize, q: usize, common: &BitSet) -> bool {
        !self.rays.iter().enumerate().any(|(r, ray)| r != p && r != q && common.is_subset(&ray.zero))
    }

    fn dedupe(&mut self) {
        let mut out: Vec<Ray> = Vec::with_capacity(self.rays.len());
        for r in std::mem::take(&mut self.rays) {
            if let Some(existing) = out.iter_mut().find(|o| crate::vecops::dist_inf(&o.v, &r.v) <= 1e-9) {
                existing.zero = existing.zero.intersection(&r.zero);
                continue;
            }
            out.push(r);
        }
        self.rays = out;
    }
}

/// Scale to unit max-norm. Returns false for (numerically) zero vectors.
fn normalize(v: &mut [f64]) -> bool {
    let s = norm_inf(v);
    if s <= 1e-14 {
        return false;
    }
    v.iter_mut().for_each(|x| *x /= s);
    true
}
