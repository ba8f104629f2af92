//! Scalar optimization backend: linear programs and convex polynomial programs.

mod lp;
mod nlp;
mod scalarize;

pub use lp::{chebyshev_center, feasibility_point, feasible, lp_solve};
pub use nlp::nlp_solve;
pub use scalarize::{pascoletti_serafini, pascoletti_serafini_on, slice_minimum, ScalarizationResult, SliceMinimum};

use crate::game::Polynomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
    MaxIterations,
}

/// `poly(x) + linear·x ≤ rhs`.
#[derive(Clone, Debug)]
pub struct ConvexConstraint {
    pub poly: Polynomial,
    pub linear: Vec<f64>,
    pub rhs: f64,
}

impl ConvexConstraint {
    pub fn new(poly: Polynomial, rhs: f64) -> Self {
        let n = poly.dim();
        Self { poly, linear: vec![0.0; n], rhs }
    }

    /// `poly(x) + linear·x − rhs`; nonpositive when satisfied.
    pub fn value(&self, x: &[f64]) -> f64 {
        self.poly.eval(x) + crate::vecops::dot(&self.linear, x) - self.rhs
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        crate::vecops::add(&self.poly.gradient(x), &self.linear)
    }
}

/// `min objective(x) + linear·x  s.t.  Ex = d, Ax ≤ b, convex constraints`.
#[derive(Clone, Debug)]
pub struct NlpProblem {
    pub objective: Polynomial,
    pub linear: Vec<f64>,
    pub eq_a: Vec<Vec<f64>>,
    pub eq_b: Vec<f64>,
    pub ineq_a: Vec<Vec<f64>>,
    pub ineq_b: Vec<f64>,
    pub convex: Vec<ConvexConstraint>,
}

impl NlpProblem {
    pub fn new(objective: Polynomial) -> Self {
        let n = objective.dim();
        Self {
            objective,
            linear: vec![0.0; n],
            eq_a: Vec::new(),
            eq_b: Vec::new(),
            ineq_a: Vec::new(),
            ineq_b: Vec::new(),
            convex: Vec::new(),
        }
    }

    /// Pure linear objective `c·x`.
    pub fn linear(c: Vec<f64>) -> Self {
        let mut p = Self::new(Polynomial::zero(c.len()));
        p.linear = c;
        p
    }

    pub fn dim(&self) -> usize {
        self.objective.dim()
    }

    pub fn with_eq(mut self, row: Vec<f64>, rhs: f64) -> Self {
        self.eq_a.push(row);
        self.eq_b.push(rhs);
        self
    }

    pub fn with_ineq(mut self, row: Vec<f64>, rhs: f64) -> Self {
        self.ineq_a.push(row);
        self.ineq_b.push(rhs);
        self
    }

    pub fn with_convex(mut self, c: ConvexConstraint) -> Self {
        self.convex.push(c);
        self
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.eval(x) + crate::vecops::dot(&self.linear, x)
    }

    pub fn objective_gradient(&self, x: &[f64]) -> Vec<f64> {
        crate::vecops::add(&self.objective.gradient(x), &self.linear)
    }

    /// Largest constraint violation at `x` (zero when feasible).
    pub fn violation(&self, x: &[f64]) -> f64 {
        let mut v = 0.0f64;
        for (r, &b) in self.eq_a.iter().zip(&self.eq_b) {
            v = v.max((crate::vecops::dot(r, x) - b).abs());
        }
        for (r, &b) in self.ineq_a.iter().zip(&self.ineq_b) {
            v = v.max(crate::vecops::dot(r, x) - b);
        }
        for c in &self.convex {
            v = v.max(c.value(x));
        }
        v
    }
}

/// Primal-dual result. Inequality multipliers list the linear rows first, then
/// the convex constraints.
#[derive(Clone, Debug)]
pub struct NlpSolution {
    pub status: Status,
    pub x: Vec<f64>,
    pub value: f64,
    pub eq_multipliers: Vec<f64>,
    pub ineq_multipliers: Vec<f64>,
    /// `‖∇f + Eᵀλ + Σ μ ∇g‖∞` at the returned pair.
    pub kkt_residual: f64,
    /// Duality gap bound at the returned pair.
    pub gap: f64,
    pub iterations: usize,
}

impl NlpSolution {
    pub(crate) fn status_only(status: Status, n: usize, n_ineq: usize, n_eq: usize) -> Self {
        Self {
            status,
            x: vec![f64::NAN; n],
            value: f64::NAN,
            eq_multipliers: vec![0.0; n_eq],
            ineq_multipliers: vec![0.0; n_ineq],
            kkt_residual: f64::INFINITY,
            gap: f64::INFINITY,
            iterations: 0,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal
    }
}
