//! Independent equilibrium checks: slice-minimization ε-NE test, grid brute
//! force, and exact grid-level equilibrium and Pareto tests.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{GameError, SolverError};
use crate::game::{ConstraintSet, Game, Polynomial};
use crate::solver::{nlp_solve, Status};
use crate::tolerance::{GEO, KKT};
use crate::vecops::norm_inf;

/// `fᵢ(x) − min_{x′ᵢ} fᵢ(x′ᵢ, x₋ᵢ)` for every player.
pub fn deviation_gains(g: &Game, x: &[f64]) -> Result<Vec<f64>, SolverError> {
    let v = g.violation(x);
    if v > GEO * (1.0 + norm_inf(x)) {
        return Err(GameError::InfeasiblePoint { violation: v }.into());
    }
    (0..g.n_players())
        .map(|i| {
            let s = nlp_solve(&g.slice_min_problem(i, x));
            match s.status {
                Status::Optimal => Ok(g.cost(i).eval(x) - s.value),
                Status::MaxIterations => Err(SolverError::MaxIterations { kkt_residual: s.kkt_residual, gap: s.gap }),
                _ => Err(SolverError::Infeasible),
            }
        })
        .collect()
}

/// Whether no player can lower its cost by more than `eps` by deviating
/// alone from the feasible point `x`.
pub fn epsilon_ne_oracle(g: &Game, x: &[f64], eps: f64) -> Result<bool, SolverError> {
    Ok(deviation_gains(g, x)?.iter().all(|&d| d <= eps + KKT))
}

/// Points of the uniform grid with `grid` points per axis over the bounding
/// box of the feasible set.
pub fn feasible_grid(g: &Game, grid: usize) -> Vec<Vec<f64>> {
    let (lo, hi) = g.polyhedral_hull().bounding_box().expect("bounded feasible set");
    let n = lo.len();
    let steps = grid.max(2) - 1;
    let total = (steps + 1).pow(n as u32);
    (0..total)
        .map(|mut idx| {
            (0..n)
                .map(|k| {
                    let j = idx % (steps + 1);
                    idx /= steps + 1;
                    if j == steps {
                        hi[k]
                    } else {
                        lo[k] + (hi[k] - lo[k]) * j as f64 / steps as f64
                    }
                })
                .collect::<Vec<f64>>()
        })
        .filter(|x| g.violation(x) <= 1e-12)
        .collect()
}

/// Grid points passing [`epsilon_ne_oracle`] at `eps`.
pub fn brute_force_ne(g: &Game, grid: usize, eps: f64) -> Vec<Vec<f64>> {
    feasible_grid(g, grid)
        .into_par_iter()
        .filter(|x| epsilon_ne_oracle(g, x, eps).unwrap_or(false))
        .collect()
}

/// A game restricted to a rational grid, evaluated exactly.
#[derive(Clone, Debug)]
pub struct ExactGrid {
    pub points: Vec<Vec<BigRational>>,
    /// `costs[i][p]` = `fᵢ` at point `p`.
    pub costs: Vec<Vec<BigRational>>,
    others: Vec<Vec<usize>>,
}

fn rat(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite coefficient")
}

fn eval_exact(p: &Polynomial, x: &[BigRational]) -> BigRational {
    let mut s = BigRational::zero();
    for t in p.terms() {
        let mut v = rat(t.coef);
        for (xk, &e) in x.iter().zip(&t.exp) {
            for _ in 0..e {
                v *= xk;
            }
        }
        s += v;
    }
    s
}

impl ExactGrid {
    /// The grid with `grid` points per axis over the bounding box; feasibility
    /// is decided in exact arithmetic against the linear rows and nonlinear
    /// constraints.
    pub fn new(g: &Game, grid: usize) -> Self {
        let (lo, hi) = g.polyhedral_hull().bounding_box().expect("bounded feasible set");
        let n = lo.len();
        let steps = grid.max(2) - 1;
        let (rows, rhs) = g.linear_constraints();
        let rows: Vec<Vec<BigRational>> = rows.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect();
        let rhs: Vec<BigRational> = rhs.iter().map(|&v| rat(v)).collect();
        let convex: Vec<Polynomial> = match g.constraint() {
            ConstraintSet::SharedPolytope(_) => Vec::new(),
            ConstraintSet::IndependentConvex(_) => g.convex_constraints().into_iter().map(|c| c.poly).collect(),
        };
        let total = (steps + 1).pow(n as u32);
        let denom = BigInt::from(steps);
        let mut points = Vec::new();
        for mut idx in 0..total {
            let x: Vec<BigRational> = (0..n)
                .map(|k| {
                    let j = idx % (steps + 1);
                    idx /= steps + 1;
                    let (l, h) = (rat(lo[k]), rat(hi[k]));
                    &l + (h - &l) * BigRational::new(BigInt::from(j), denom.clone())
                })
                .collect();
            let lin_ok = rows.iter().zip(&rhs).all(|(r, b)| {
                let s: BigRational = r.iter().zip(&x).map(|(a, v)| a * v).sum();
                s <= *b
            });
            if lin_ok && convex.iter().all(|c| !eval_exact(c, &x).is_positive()) {
                points.push(x);
            }
        }
        let costs = g.costs().iter().map(|f| points.iter().map(|x| eval_exact(f, x)).collect()).collect();
        let others = (0..g.n_players()).map(|i| g.others(i)).collect();
        Self { points, costs, others }
    }

    pub fn point_f64(&self, p: usize) -> Vec<f64> {
        use num_traits::ToPrimitive;
        self.points[p].iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect()
    }

    fn image(&self, i: usize, p: usize) -> Vec<BigRational> {
        let x = &self.points[p];
        let mut y: Vec<BigRational> = self.others[i].iter().map(|&k| x[k].clone()).collect();
        let neg: Vec<BigRational> = y.iter().map(|v| -v).collect();
        y.extend(neg);
        y.push(self.costs[i][p].clone());
        y
    }

    /// Indices of grid equilibria of the grid-restricted game:
    /// `fᵢ(x′ᵢ, x₋ᵢ) + eps ≥ fᵢ(x)` for every grid deviation of every player.
    pub fn nash_equilibria(&self, eps: &BigRational) -> Vec<usize> {
        let np = self.costs.len();
        let mut ok = vec![true; self.points.len()];
        for i in 0..np {
            let mut best: HashMap<Vec<BigRational>, BigRational> = HashMap::new();
            for (p, x) in self.points.iter().enumerate() {
                let key: Vec<BigRational> = self.others[i].iter().map(|&k| x[k].clone()).collect();
                let f = &self.costs[i][p];
                best.entry(key).and_modify(|b| {
                    if f < b {
                        *b = f.clone();
                    }
                }).or_insert_with(|| f.clone());
            }
            for (p, x) in self.points.iter().enumerate() {
                let key: Vec<BigRational> = self.others[i].iter().map(|&k| x[k].clone()).collect();
                if best[&key].clone() + eps < self.costs[i][p] {
                    ok[p] = false;
                }
            }
        }
        (0..self.points.len()).filter(|&p| ok[p]).collect()
    }

    /// Indices of grid points that are `eps`-Pareto optimal for player `i`'s
    /// vector problem over the grid images: no image lies in
    /// `y(x) − eps·e_m − (ℝ^m₊ ∖ {0})`.
    pub fn pareto_points(&self, i: usize, eps: &BigRational) -> Vec<usize> {
        let images: Vec<Vec<BigRational>> = (0..self.points.len()).map(|p| self.image(i, p)).collect();
        (0..images.len())
            .into_par_iter()
            .filter(|&p| {
                let mut t = images[p].clone();
                let m = t.len();
                t[m - 1] -= eps;
                !images.iter().any(|y| y != &t && y.iter().zip(&t).all(|(a, b)| a <= b))
            })
            .collect()
    }

    /// Indices passing the Pareto test of every player.
    pub fn pareto_intersection(&self, eps: &BigRational) -> Vec<usize> {
        let np = self.costs.len();
        let mut count = vec![0usize; self.points.len()];
        for i in 0..np {
            for p in self.pareto_points(i, eps) {
                count[p] += 1;
            }
        }
        (0..self.points.len()).filter(|&p| count[p] == np).collect()
    }
}

/// `p/q` as an exact rational.
pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Exact zero and one, for callers that do not depend on the rational crate.
pub fn rational_zero() -> BigRational {
    BigRational::zero()
}

pub fn rational_one() -> BigRational {
    BigRational::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::builtin;

    #[test]
    fn ex51_oracle_examples() {
        let g = builtin("ex51").unwrap().game;
        assert!(epsilon_ne_oracle(&g, &[0.25, -0.25], 1e-9).unwrap());
        // at (1,1) player 1 is already at its clipped best response x₁ = 1,
        // player 2 gains ½·(1+1)² = 2 by moving to x₂ = −1
        assert!(!epsilon_ne_oracle(&g, &[1.0, 1.0], 0.016).unwrap());
        let d = deviation_gains(&g, &[1.0, 1.0]).unwrap();
        assert!(d[0].abs() < 1e-8 && (d[1] - 2.0).abs() < 1e-8, "{d:?}");
    }

    #[test]
    fn ex53_segment_point() {
        let g = builtin("ex53").unwrap().game;
        assert!(epsilon_ne_oracle(&g, &[0.75, 0.25], 1e-9).unwrap());
    }

    #[test]
    fn infeasible_point_rejected() {
        let g = builtin("ex51").unwrap().game;
        assert!(matches!(
            epsilon_ne_oracle(&g, &[2.0, 0.0], 0.1),
            Err(SolverError::Game(GameError::InfeasiblePoint { .. }))
        ));
    }

    #[test]
    fn ex52_brute_force() {
        let g = builtin("ex52_y15").unwrap().game;
        let ne = brute_force_ne(&g, 101, 1e-6);
        let mut ne: Vec<Vec<f64>> = ne;
        ne.sort_by(|a, b| crate::vecops::lex_cmp(a, b));
        assert_eq!(ne, vec![vec![0.0, 0.0], vec![1.0, 1.0]]);
        let g = builtin("ex52_y05").unwrap().game;
        assert_eq!(brute_force_ne(&g, 101, 1e-6), vec![vec![0.0, 0.0]]);
    }

    #[test]
    fn search_brute_force_finds_both_equilibria() {
        let g = builtin("search").unwrap().game;
        // grid spacing 0.02: (0.16, 0.16) is within 2e-5 of a best response
        let ne = brute_force_ne(&g, 51, 2e-5);
        assert_eq!(ne.len(), 2, "{ne:?}");
        assert!(ne.contains(&vec![0.0, 0.0]));
        assert!(ne.iter().any(|x| (x[0] - 0.16).abs() < 1e-12 && (x[1] - 0.16).abs() < 1e-12));
    }

    #[test]
    fn grid_equilibria_match_pareto_intersection() {
        let g = builtin("ex51").unwrap().game;
        let grid = ExactGrid::new(&g, 21);
        for eps in [rational_zero(), ratio(1, 100)] {
            assert_eq!(grid.nash_equilibria(&eps), grid.pareto_intersection(&eps));
        }
        // (¼, −¼) is off the grid, so the exact grid game has no equilibrium;
        // at ε = 0.01 the grid points (0.2, −0.2) and (0.3, −0.3) qualify
        assert!(grid.nash_equilibria(&rational_zero()).is_empty());
        let pts: Vec<Vec<f64>> = grid.nash_equilibria(&ratio(1, 100)).iter().map(|&p| grid.point_f64(p)).collect();
        for want in [[0.2, -0.2], [0.3, -0.3]] {
            assert!(pts.iter().any(|p| (p[0] - want[0]).abs() < 1e-12 && (p[1] - want[1]).abs() < 1e-12));
        }
    }
}
