//! N-player convex games with polynomial costs.

mod examples;
mod polynomial;

pub use examples::{builtin, builtin_names, Fixture};
pub use polynomial::{Polynomial, Term};

use rand::Rng;

use crate::error::{GameError, GeometryError};
use crate::geometry::{to_hrep, to_vrep, Polytope};
use crate::solver::{nlp_solve, ConvexConstraint, NlpProblem, Status};
use crate::tolerance::GEO;

/// One player's strategy set `{xᵢ ∈ bounds : g(xᵢ) ≤ 0}`.
#[derive(Clone, Debug)]
pub struct PlayerSet {
    pub g: Polynomial,
    pub bounds: Polytope,
}

#[derive(Clone, Debug)]
pub enum ConstraintSet {
    /// A shared polytope over the joint strategy vector.
    SharedPolytope(Polytope),
    /// A product of per-player convex sets.
    IndependentConvex(Vec<PlayerSet>),
}

/// Dimensions of player `i`'s vector problem: `a = Σ_{j≠i} nⱼ`, `m = 2a + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SliceIndex {
    pub player: usize,
    pub a: usize,
    pub m: usize,
}

#[derive(Clone, Debug)]
pub struct Game {
    dims: Vec<usize>,
    offsets: Vec<usize>,
    costs: Vec<Polynomial>,
    constraint: ConstraintSet,
    lipschitz: f64,
}

impl Game {
    pub fn new(
        dims: Vec<usize>,
        costs: Vec<Polynomial>,
        constraint: ConstraintSet,
        lipschitz: f64,
    ) -> Result<Self, GameError> {
        if dims.len() < 2 {
            return Err(GameError::TooFewPlayers(dims.len()));
        }
        if dims.contains(&0) {
            return Err(GameError::Invalid("every player needs at least one strategy variable".into()));
        }
        let total: usize = dims.iter().sum();
        if costs.len() != dims.len() {
            return Err(GameError::Invalid(format!("{} players but {} cost functions", dims.len(), costs.len())));
        }
        for c in &costs {
            if c.dim() != total {
                return Err(GameError::DimensionMismatch { expected: total, found: c.dim() });
            }
        }
        if !(lipschitz.is_finite() && lipschitz > 0.0) {
            return Err(GameError::Invalid(format!("Lipschitz constant must be positive, got {lipschitz}")));
        }
        let offsets = dims
            .iter()
            .scan(0, |acc, &n| {
                let o = *acc;
                *acc += n;
                Some(o)
            })
            .collect();
        let constraint = match constraint {
            ConstraintSet::SharedPolytope(p) => ConstraintSet::SharedPolytope(complete_bounded(p, total)?),
            ConstraintSet::IndependentConvex(sets) => {
                if sets.len() != dims.len() {
                    return Err(GameError::Invalid(format!("{} players but {} strategy sets", dims.len(), sets.len())));
                }
                let mut out = Vec::with_capacity(sets.len());
                for (i, s) in sets.into_iter().enumerate() {
                    if s.g.dim() != dims[i] {
                        return Err(GameError::DimensionMismatch { expected: dims[i], found: s.g.dim() });
                    }
                    let bounds = complete_bounded(s.bounds, dims[i])?;
                    let ps = PlayerSet { g: s.g, bounds };
                    if !has_interior(&ps) {
                        return Err(GameError::EmptyInterior { player: i });
                    }
                    out.push(ps);
                }
                ConstraintSet::IndependentConvex(out)
            }
        };
        Ok(Self { dims, offsets, costs, constraint, lipschitz })
    }

    pub fn n_players(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn costs(&self) -> &[Polynomial] {
        &self.costs
    }

    pub fn cost(&self, i: usize) -> &Polynomial {
        &self.costs[i]
    }

    pub fn constraint(&self) -> &ConstraintSet {
        &self.constraint
    }

    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    pub fn is_shared(&self) -> bool {
        matches!(self.constraint, ConstraintSet::SharedPolytope(_))
    }

    /// Coordinates of player `i` in the joint vector.
    pub fn player_range(&self, i: usize) -> std::ops::Range<usize> {
        self.offsets[i]..self.offsets[i] + self.dims[i]
    }

    /// Coordinates of `x₋ᵢ`: players `j ≠ i` in ascending order, each in natural order.
    pub fn others(&self, i: usize) -> Vec<usize> {
        (0..self.total_dim()).filter(|k| !self.player_range(i).contains(k)).collect()
    }

    pub fn slice_index(&self, i: usize) -> Result<SliceIndex, GameError> {
        if i >= self.n_players() {
            return Err(GameError::NoSuchPlayer(i));
        }
        let a = self.total_dim() - self.dims[i];
        Ok(SliceIndex { player: i, a, m: 2 * a + 1 })
    }

    /// Largest constraint violation of `x` (zero if feasible).
    pub fn violation(&self, x: &[f64]) -> f64 {
        match &self.constraint {
            ConstraintSet::SharedPolytope(p) => p.violation(x),
            ConstraintSet::IndependentConvex(sets) => {
                let mut v = 0.0f64;
                for (i, s) in sets.iter().enumerate() {
                    let xi = &x[self.player_range(i)];
                    v = v.max(s.bounds.violation(xi)).max(s.g.eval(xi));
                }
                v
            }
        }
    }

    pub fn is_feasible(&self, x: &[f64], tol: f64) -> bool {
        x.len() == self.total_dim() && self.violation(x) <= tol
    }

    /// `(x₋ᵢ, −x₋ᵢ, fᵢ(x))` for feasible `x`.
    pub fn objective_image(&self, i: usize, x: &[f64]) -> Result<Vec<f64>, GameError> {
        if i >= self.n_players() {
            return Err(GameError::NoSuchPlayer(i));
        }
        if x.len() != self.total_dim() {
            return Err(GameError::DimensionMismatch { expected: self.total_dim(), found: x.len() });
        }
        let scale = 1.0 + crate::vecops::norm_inf(x);
        let v = self.violation(x);
        if v > GEO * scale {
            return Err(GameError::InfeasiblePoint { violation: v });
        }
        Ok(self.image_unchecked(i, x))
    }

    /// Objective image without the feasibility check.
    pub fn image_unchecked(&self, i: usize, x: &[f64]) -> Vec<f64> {
        let others = self.others(i);
        let mut y: Vec<f64> = others.iter().map(|&k| x[k]).collect();
        y.extend(others.iter().map(|&k| -x[k]));
        y.push(self.costs[i].eval(x));
        y
    }

    /// Linear rows `Ax ≤ b` of the feasible set (for independent sets: the boxes).
    pub fn linear_constraints(&self) -> (Vec<Vec<f64>>, Vec<f64>) {
        match &self.constraint {
            ConstraintSet::SharedPolytope(p) => p.constraint_rows(),
            ConstraintSet::IndependentConvex(sets) => {
                let n = self.total_dim();
                let mut a = Vec::new();
                let mut b = Vec::new();
                for (i, s) in sets.iter().enumerate() {
                    let r = self.player_range(i);
                    for h in s.bounds.halfspaces() {
                        let mut row = vec![0.0; n];
                        row[r.clone()].copy_from_slice(&h.normal);
                        a.push(row);
                        b.push(h.offset);
                    }
                }
                (a, b)
            }
        }
    }

    /// Player `i`'s rows of its own strategy set, embedded in the joint vector.
    pub fn player_linear_constraints(&self, i: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
        match &self.constraint {
            ConstraintSet::SharedPolytope(_) => self.linear_constraints(),
            ConstraintSet::IndependentConvex(sets) => {
                let n = self.total_dim();
                let r = self.player_range(i);
                let mut a = Vec::new();
                let mut b = Vec::new();
                for h in sets[i].bounds.halfspaces() {
                    let mut row = vec![0.0; n];
                    row[r.clone()].copy_from_slice(&h.normal);
                    a.push(row);
                    b.push(h.offset);
                }
                (a, b)
            }
        }
    }

    /// Nonlinear constraints `gⱼ(xⱼ) ≤ 0` over the joint vector.
    pub fn convex_constraints(&self) -> Vec<ConvexConstraint> {
        match &self.constraint {
            ConstraintSet::SharedPolytope(_) => Vec::new(),
            ConstraintSet::IndependentConvex(sets) => sets
                .iter()
                .enumerate()
                .filter(|(_, s)| s.g.degree() > 0)
                .map(|(i, s)| ConvexConstraint::new(s.g.embed(self.total_dim(), self.offsets[i]), 0.0))
                .collect(),
        }
    }

    /// Player `i`'s nonlinear constraint over the joint vector, if any.
    pub fn player_convex_constraint(&self, i: usize) -> Option<ConvexConstraint> {
        match &self.constraint {
            ConstraintSet::SharedPolytope(_) => None,
            ConstraintSet::IndependentConvex(sets) => {
                let s = &sets[i];
                (s.g.degree() > 0).then(|| ConvexConstraint::new(s.g.embed(self.total_dim(), self.offsets[i]), 0.0))
            }
        }
    }

    /// A polytope containing the feasible set: the set itself when shared,
    /// the product of the boxes otherwise.
    pub fn polyhedral_hull(&self) -> Polytope {
        match &self.constraint {
            ConstraintSet::SharedPolytope(p) => p.clone(),
            ConstraintSet::IndependentConvex(_) => {
                let (a, b) = self.linear_constraints();
                let hs = a
                    .into_iter()
                    .zip(b)
                    .map(|(n, o)| crate::geometry::Halfspace { normal: n, offset: o })
                    .collect();
                to_vrep(&Polytope::from_hrep(self.total_dim(), hs).expect("box rows are valid"))
                    .expect("product of bounded boxes")
            }
        }
    }

    /// Minimum of `fᵢ(·, x₋ᵢ)` over player `i`'s feasible deviations.
    pub fn slice_min_problem(&self, i: usize, x: &[f64]) -> NlpProblem {
        let (a, b) = self.linear_constraints();
        let mut p = NlpProblem::new(self.costs[i].clone());
        p.ineq_a = a;
        p.ineq_b = b;
        for k in self.others(i) {
            p = p.with_eq(crate::vecops::unit(self.total_dim(), k), x[k]);
        }
        if let Some(c) = self.player_convex_constraint(i) {
            p = p.with_convex(c);
        }
        p
    }

    /// Sample `count` feasible points, uniform over the polyhedral hull and
    /// rejected against the nonlinear constraints.
    pub fn sample_feasible<R: Rng>(&self, rng: &mut R, count: usize) -> Vec<Vec<f64>> {
        let hull = self.polyhedral_hull();
        let mut out = Vec::with_capacity(count);
        let mut attempts = 0usize;
        while out.len() < count && attempts < count * 1000 {
            attempts += 1;
            let x = crate::geometry::sample_in_polytope(&hull, rng);
            if self.violation(&x) <= 0.0 {
                out.push(x);
            }
        }
        out
    }

    /// Lower estimate of the Lipschitz constant: the largest `‖∇fᵢ‖∞` over
    /// feasible points of every grid with 2..=`grid_density` points per axis.
    pub fn estimate_lipschitz(&self, grid_density: usize) -> f64 {
        let hull = self.polyhedral_hull();
        let Some((lo, hi)) = hull.bounding_box() else {
            return 0.0;
        };
        let n = self.total_dim();
        let mut best = 0.0f64;
        for g in 2..=grid_density.max(2) {
            let total = g.pow(n as u32);
            for idx in 0..total {
                let mut rem = idx;
                let x: Vec<f64> = (0..n)
                    .map(|k| {
                        let j = rem % g;
                        rem /= g;
                        lo[k] + (hi[k] - lo[k]) * j as f64 / (g - 1) as f64
                    })
                    .collect();
                if self.violation(&x) > GEO {
                    continue;
                }
                for c in &self.costs {
                    best = best.max(crate::vecops::norm_inf(&c.gradient(&x)));
                }
            }
        }
        best
    }

    /// Warnings for sampled points where a cost Hessian has a negative
    /// eigenvalue. Convexity is the caller's responsibility; this is advisory.
    pub fn convexity_warnings<R: Rng>(&self, rng: &mut R, samples: usize) -> Vec<String> {
        let mut out = Vec::new();
        let pts = self.sample_feasible(rng, samples);
        let n = self.total_dim();
        for (i, c) in self.costs.iter().enumerate() {
            if c.degree() <= 1 {
                continue;
            }
            let mut worst: Option<(f64, Vec<f64>)> = None;
            for x in &pts {
                let h = nalgebra::DMatrix::from_row_slice(n, n, &c.hessian(x));
                let ev = h.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
                if ev < -1e-9 && worst.as_ref().is_none_or(|(w, _)| ev < *w) {
                    worst = Some((ev, x.clone()));
                }
            }
            if let Some((ev, x)) = worst {
                out.push(format!(
                    "cost of player {} is not convex: Hessian eigenvalue {:.3e} at {:?}",
                    i + 1,
                    ev,
                    x
                ));
            }
        }
        out
    }
}

fn complete_bounded(p: Polytope, dim: usize) -> Result<Polytope, GameError> {
    if p.dim() != dim {
        return Err(GameError::DimensionMismatch { expected: dim, found: p.dim() });
    }
    let p = if p.has_both() {
        p
    } else if p.vrep().is_some() {
        to_hrep(&p)?
    } else {
        match to_vrep(&p) {
            Ok(q) => q,
            Err(GeometryError::Empty) => return Err(GameError::EmptyFeasibleSet),
            Err(GeometryError::NotPointed) => return Err(GameError::Unbounded),
            Err(e) => return Err(e.into()),
        }
    };
    if !p.is_bounded() {
        return Err(GameError::Unbounded);
    }
    Ok(p)
}

fn has_interior(s: &PlayerSet) -> bool {
    let (a, b) = s.bounds.constraint_rows();
    match crate::solver::chebyshev_center(&a, &b, &[], &[], 1.0) {
        Some((_, r)) if r > GEO => {}
        _ => return false,
    }
    if s.g.degree() == 0 {
        return s.g.eval(&vec![0.0; s.g.dim()]) < 0.0 || s.g.terms().is_empty();
    }
    let mut p = NlpProblem::new(s.g.clone());
    p.ineq_a = a;
    p.ineq_b = b;
    let sol = nlp_solve(&p);
    sol.status == Status::Optimal && sol.value < -GEO
}
