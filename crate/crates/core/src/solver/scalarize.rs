//! Pascoletti–Serafini scalarization of a player's vector problem along
//! `c̄ = e_m`, solved in reduced form as a slice minimization.

use super::{nlp_solve, NlpProblem, NlpSolution, Status};
use crate::error::SolverError;
use crate::game::Game;
use crate::vecops::{dot, unit};

/// Minimum of a base problem with the coordinates `fixed` pinned to `values`.
#[derive(Clone, Debug)]
pub struct SliceMinimum {
    pub x: Vec<f64>,
    pub value: f64,
    /// Multipliers of the pinning equalities, `∇f + Aᵀu + Σλₖeₖ = 0`.
    pub lambda: Vec<f64>,
    pub solution: NlpSolution,
}

/// Minimize `base` subject to `x[fixed[k]] = values[k]`.
pub fn slice_minimum(base: &NlpProblem, fixed: &[usize], values: &[f64]) -> Result<SliceMinimum, SolverError> {
    let n = base.dim();
    let n_eq = base.eq_a.len();
    let mut p = base.clone();
    for (&k, &v) in fixed.iter().zip(values) {
        p = p.with_eq(unit(n, k), v);
    }
    let sol = nlp_solve(&p);
    match sol.status {
        Status::Optimal => {}
        Status::Infeasible => return Err(SolverError::InfeasibleSlice(values.to_vec())),
        Status::Unbounded => return Err(SolverError::Infeasible),
        Status::MaxIterations => {
            return Err(SolverError::MaxIterations { kkt_residual: sol.kkt_residual, gap: sol.gap });
        }
    }
    Ok(SliceMinimum {
        x: sol.x.clone(),
        value: sol.value,
        lambda: sol.eq_multipliers[n_eq..].to_vec(),
        solution: sol,
    })
}

/// Solution of `P₂(v)` with the dual normal `w`.
#[derive(Clone, Debug)]
pub struct ScalarizationResult {
    pub x: Vec<f64>,
    /// Shift along `c̄ = e_m` moving `v` onto the upper image.
    pub z: f64,
    /// `w ≥ 0`, `w_m = 1`; `{y : w·y ≥ w·(v + z e_m)}` contains the image set.
    pub w: Vec<f64>,
    pub kkt_residual: f64,
}

impl ScalarizationResult {
    /// The supporting cut `w·y ≥ offset`.
    pub fn cut_offset(&self, v: &[f64]) -> f64 {
        let m = v.len();
        dot(&self.w, v) + self.z * self.w[m - 1]
    }
}

/// `P₂(v)` for player `i` over the game's feasible set.
pub fn pascoletti_serafini(g: &Game, i: usize, v: &[f64]) -> Result<ScalarizationResult, SolverError> {
    let (a, b) = g.linear_constraints();
    let mut base = NlpProblem::new(g.cost(i).clone());
    base.ineq_a = a;
    base.ineq_b = b;
    if let Some(c) = g.player_convex_constraint(i) {
        base = base.with_convex(c);
    }
    pascoletti_serafini_on(&base, &g.others(i), v)
}

/// `P₂(v)` where `base` carries player `i`'s cost and feasible set and
/// `others` lists the coordinates of `x₋ᵢ`.
pub fn pascoletti_serafini_on(
    base: &NlpProblem,
    others: &[usize],
    v: &[f64],
) -> Result<ScalarizationResult, SolverError> {
    let a = others.len();
    let m = 2 * a + 1;
    assert_eq!(v.len(), m, "reference point has the wrong dimension");
    let s = slice_minimum(base, others, &v[..a])?;
    let mut w = vec![0.0; m];
    for (k, &l) in s.lambda.iter().enumerate() {
        w[k] = l.max(0.0);
        w[a + k] = (-l).max(0.0);
    }
    w[m - 1] = 1.0;
    Ok(ScalarizationResult { z: s.value - v[m - 1], x: s.x, w, kkt_residual: s.solution.kkt_residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::builtin;
    use rand::SeedableRng;

    #[test]
    fn ex51_reference_point() {
        let g = builtin("ex51").unwrap().game;
        let r = pascoletti_serafini(&g, 0, &[-0.25, 0.25, 0.0]).unwrap();
        assert!((r.z - 1.0 / 32.0).abs() < 1e-8, "{}", r.z);
        assert!((r.x[0] - 0.25).abs() < 1e-6 && (r.x[1] + 0.25).abs() < 1e-12);
        assert_eq!(r.w[2], 1.0);
    }

    #[test]
    fn boundary_point_has_zero_shift() {
        let g = builtin("ex51").unwrap().game;
        let r = pascoletti_serafini(&g, 0, &[-0.25, 0.25, 1.0 / 32.0]).unwrap();
        assert!(r.z.abs() < 1e-8);
    }

    #[test]
    fn ex53_slice_at_one() {
        let g = builtin("ex53").unwrap().game;
        let r = pascoletti_serafini(&g, 1, &[1.0, -1.0, -1.0]).unwrap();
        assert!((r.z - 2.0).abs() < 1e-8, "{}", r.z);
        assert!(r.x[1].abs() < 1e-6);
    }

    #[test]
    fn infeasible_slice_reported() {
        let g = builtin("ex51").unwrap().game;
        assert!(matches!(pascoletti_serafini(&g, 0, &[3.0, -3.0, 0.0]), Err(SolverError::InfeasibleSlice(_))));
    }

    #[test]
    fn cuts_contain_every_sampled_image() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for name in ["ex51", "ex53", "search", "ex54"] {
            let g = builtin(name).unwrap().game;
            let pts = g.sample_feasible(&mut rng, 200);
            for i in 0..2 {
                for v0 in [-0.5, 0.0, 0.3, 0.9] {
                    let a = g.others(i).len();
                    let mut v = vec![0.0; 2 * a + 1];
                    // a reference point on the subspace with a feasible slice
                    let Some(x) = pts.iter().find(|x| (x[g.others(i)[0]] - v0).abs() < 0.2) else { continue };
                    v[0] = x[g.others(i)[0]];
                    v[1] = -v[0];
                    v[2] = -10.0;
                    let r = pascoletti_serafini(&g, i, &v).unwrap();
                    assert!(r.z >= 0.0);
                    assert!(r.w.iter().all(|&c| c >= 0.0));
                    let off = r.cut_offset(&v);
                    for p in &pts {
                        let y = g.objective_image(i, p).unwrap();
                        assert!(dot(&r.w, &y) >= off - 1e-8, "{name} player {i}: {} < {off}", dot(&r.w, &y));
                    }
                }
            }
        }
    }

    #[test]
    fn redundant_rows_leave_shift_unchanged() {
        let g = builtin("ex54").unwrap().game;
        let v = [0.5, -0.5, -2.0];
        let r1 = pascoletti_serafini(&g, 0, &v).unwrap();
        let (a, b) = g.linear_constraints();
        let mut base = NlpProblem::new(g.cost(0).clone());
        base.ineq_a = a;
        base.ineq_b = b;
        base = base.with_ineq(vec![1.0, 1.0], 5.0).with_ineq(vec![2.0, 0.8], 2.0);
        let r2 = pascoletti_serafini_on(&base, &g.others(0), &v).unwrap();
        assert!((r1.z - r2.z).abs() < 1e-8);
    }
}
