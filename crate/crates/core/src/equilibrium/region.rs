//! Finite unions of polytopes.

use rand::Rng;

use crate::error::GeometryError;
use crate::geometry::{intersect, is_nonempty, sample_in_polytope, Polytope};
use crate::vecops::lex_cmp;

/// A finite union of bounded polytopes in strategy space; pieces may overlap.
#[derive(Clone, Debug, PartialEq)]
pub struct RegionUnion {
    pub dim: usize,
    pub pieces: Vec<Polytope>,
    /// ε for which every point is certified, from the achieved tolerances.
    pub eps_certified: f64,
}

impl RegionUnion {
    /// Pieces are canonicalized: vertices sorted, then pieces sorted by their
    /// vertex lists.
    pub fn new(dim: usize, mut pieces: Vec<Polytope>, eps_certified: f64) -> Self {
        for p in &mut pieces {
            p.canonicalize_vertices();
        }
        pieces.sort_by(|a, b| {
            for (u, v) in a.vertices().iter().zip(b.vertices()) {
                match lex_cmp(u, v) {
                    std::cmp::Ordering::Equal => continue,
                    o => return o,
                }
            }
            a.vertices().len().cmp(&b.vertices().len())
        });
        Self { dim, pieces, eps_certified }
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.pieces.iter().any(|p| p.contains(x, tol))
    }

    /// `count` points: a uniformly chosen piece, then a random point of it.
    pub fn sample<R: Rng>(&self, rng: &mut R, count: usize) -> Vec<Vec<f64>> {
        if self.pieces.is_empty() {
            return Vec::new();
        }
        (0..count)
            .map(|_| {
                let p = &self.pieces[rng.random_range(0..self.pieces.len())];
                sample_in_polytope(p, rng)
            })
            .collect()
    }

    /// Groups of pieces connected through pairwise intersections (touching
    /// pieces count as connected), each sorted, in order of first piece.
    pub fn connected_groups(&self) -> Vec<Vec<usize>> {
        let n = self.pieces.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], i: usize) -> usize {
            let mut r = i;
            while parent[r] != r {
                r = parent[r];
            }
            parent[i] = r;
            r
        }
        for i in 0..n {
            for j in i + 1..n {
                if find(&mut parent, i) == find(&mut parent, j) || !boxes_overlap(&self.pieces[i], &self.pieces[j]) {
                    continue;
                }
                let mut hs = self.pieces[i].halfspaces().to_vec();
                hs.extend_from_slice(self.pieces[j].halfspaces());
                if is_nonempty(&hs) {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; n];
        for i in 0..n {
            let r = find(&mut parent, i);
            if slot[r] == usize::MAX {
                slot[r] = groups.len();
                groups.push(Vec::new());
            }
            groups[slot[r]].push(i);
        }
        groups
    }
}

fn boxes_overlap(a: &Polytope, b: &Polytope) -> bool {
    match (a.bounding_box(), b.bounding_box()) {
        (Some((la, ha)), Some((lb, hb))) => (0..la.len()).all(|k| la[k] <= hb[k] + 1e-9 && lb[k] <= ha[k] + 1e-9),
        _ => true,
    }
}

/// `⋂ᵢ Xᵢ`, distributed over the unions; empty intersections are dropped.
pub fn intersect_regions(regions: &[RegionUnion]) -> Result<RegionUnion, GeometryError> {
    let Some(first) = regions.first() else {
        return Err(GeometryError::Empty);
    };
    let mut acc = first.pieces.clone();
    let mut eps = first.eps_certified;
    for r in &regions[1..] {
        if r.dim != first.dim {
            return Err(GeometryError::DimensionMismatch { expected: first.dim, found: r.dim });
        }
        eps = eps.max(r.eps_certified);
        let pairs: Vec<(usize, usize)> = (0..acc.len())
            .flat_map(|a| (0..r.pieces.len()).map(move |b| (a, b)))
            .filter(|&(a, b)| boxes_overlap(&acc[a], &r.pieces[b]))
            .collect();
        use rayon::prelude::*;
        let next: Vec<Option<Polytope>> = pairs
            .into_par_iter()
            .map(|(a, b)| intersect(&acc[a], &r.pieces[b]))
            .collect::<Result<_, _>>()?;
        acc = next.into_iter().flatten().collect();
    }
    Ok(RegionUnion::new(first.dim, acc, eps))
}
