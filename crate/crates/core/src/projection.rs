//! Approximation of the preimage region below an efficient face.
//!
//! For a face `F = conv{y¹,…,yᵏ}` of player `i`'s inner approximation, the
//! region is `{x ∈ 𝕏 : ∃y ∈ F, (x₋ᵢ, −x₋ᵢ, fᵢ(x)) ≤ y}`. With `y = Σθⱼyʲ`
//! this is the x-shadow of a convex set in `(x, θ)`. The region is sandwiched
//! between the hull of collected support points and an intersection of
//! supporting halfspaces, refined until every outer vertex lies within `ε₂`
//! (L1) of the inner hull.

use crate::efficient::EfficientFace;
use crate::error::{GeometryError, ProjectionError, SolverError};
use crate::game::Game;
use crate::geometry::{l1_separation, to_hrep, Halfspace, HomogenizedHrep, Polytope};
use crate::solver::{nlp_solve, ConvexConstraint, NlpProblem, Status};
use crate::tolerance::{COST_RELAX, GEO};
use crate::vecops::{dist_inf, dot, norm_inf, unit};

#[derive(Clone, Debug)]
pub struct ProjectionInstance {
    pub game: Game,
    pub player: usize,
    pub face: EfficientFace,
    pub eps2: f64,
    pub max_iterations: usize,
}

impl ProjectionInstance {
    pub fn new(game: Game, player: usize, face: EfficientFace, eps2: f64) -> Self {
        Self { game, player, face, eps2, max_iterations: 500 }
    }

    /// The program over `(x, θ)` with a zero objective.
    fn base_problem(&self) -> NlpProblem {
        let g = &self.game;
        let n = g.total_dim();
        let ys = self.face.vertices();
        let k = ys.len();
        let nv = n + k;
        let others = g.others(self.player);
        let a = others.len();
        let mut p = NlpProblem::linear(vec![0.0; nv]);
        let (rows, rhs) = g.linear_constraints();
        for (r, b) in rows.into_iter().zip(rhs) {
            let mut row = r;
            row.resize(nv, 0.0);
            p = p.with_ineq(row, b);
        }
        for j in 0..k {
            let mut row = vec![0.0; nv];
            row[n + j] = -1.0;
            p = p.with_ineq(row, 0.0);
        }
        // x₋ᵢ = Σθⱼ yʲ_{1:a}; the mirrored block follows since faces lie in
        // the subspace y_{1:a} = −y_{a+1:2a}.
        for (l, &o) in others.iter().enumerate().take(a) {
            let mut row = vec![0.0; nv];
            row[o] = 1.0;
            for (j, y) in ys.iter().enumerate() {
                row[n + j] = -y[l];
            }
            p = p.with_eq(row, 0.0);
        }
        let mut row = vec![0.0; nv];
        row[n..].iter_mut().for_each(|v| *v = 1.0);
        p = p.with_eq(row, 1.0);
        // fᵢ(x) − Σθⱼ yʲ_m ≤ δ
        let m = 2 * a + 1;
        let mut cost = ConvexConstraint::new(g.cost(self.player).embed(nv, 0), COST_RELAX);
        for (j, y) in ys.iter().enumerate() {
            cost.linear[n + j] = -y[m - 1];
        }
        p = p.with_convex(cost);
        for c in g.convex_constraints() {
            let mut lin = c.linear.clone();
            lin.resize(nv, 0.0);
            p = p.with_convex(ConvexConstraint { poly: c.poly.embed(nv, 0), linear: lin, rhs: c.rhs });
        }
        p
    }

    /// Largest violation of the lifted constraints at `(x, y)`:
    /// `x ∈ 𝕏`, `y ∈ F`, and the image of `x` below `y`.
    pub fn lifted_violation(&self, x: &[f64], y: &[f64]) -> f64 {
        let g = &self.game;
        let img = g.image_unchecked(self.player, x);
        let below = img.iter().zip(y).map(|(a, b)| a - b).fold(0.0f64, f64::max);
        let in_face = l1_separation(y, self.face.vertices(), &[]).0;
        g.violation(x).max(below).max(in_face)
    }
}

#[derive(Clone, Debug)]
pub struct ProjectionResult {
    /// `X̂`: x components of the support points.
    pub inner_points: Vec<Vec<f64>>,
    /// The matching `y ∈ F` for each inner point.
    pub lifts: Vec<Vec<f64>>,
    /// `conv(X̂)` with both representations.
    pub inner_hull: Polytope,
    /// Largest L1 distance from an outer vertex to the inner hull.
    pub certified_eps: f64,
    pub outer_vertices: Vec<Vec<f64>>,
    pub iterations: usize,
}

/// Minimize `d·x` over the lifted set. Returns the minimizer's x and y parts
/// and the valid halfspace `{x : d·x ≥ d·x*}`.
pub fn support_step(pi: &ProjectionInstance, d: &[f64]) -> Result<(Vec<f64>, Vec<f64>, Halfspace), ProjectionError> {
    let base = pi.base_problem();
    support_on(pi, &base, d)
}

fn support_on(
    pi: &ProjectionInstance,
    base: &NlpProblem,
    d: &[f64],
) -> Result<(Vec<f64>, Vec<f64>, Halfspace), ProjectionError> {
    let n = pi.game.total_dim();
    let mut p = base.clone();
    p.linear[..n].copy_from_slice(d);
    let s = nlp_solve(&p);
    match s.status {
        Status::Optimal => {}
        Status::Infeasible => return Err(ProjectionError::InfeasibleFace),
        Status::Unbounded => return Err(ProjectionError::Solver(SolverError::Infeasible)),
        Status::MaxIterations => {
            return Err(ProjectionError::Solver(SolverError::MaxIterations {
                kkt_residual: s.kkt_residual,
                gap: s.gap,
            }))
        }
    }
    let x = s.x[..n].to_vec();
    let ys = pi.face.vertices();
    let m = ys[0].len();
    let mut y = vec![0.0; m];
    for (j, yj) in ys.iter().enumerate() {
        let t = s.x[n + j].max(0.0);
        for l in 0..m {
            y[l] += t * yj[l];
        }
    }
    let h = Halfspace::new(d.iter().map(|v| -v).collect(), -dot(d, &x) + GEO)?;
    Ok((x, y, h))
}

/// Refine outer halfspaces and inner support points until every outer vertex
/// is within `eps2` of the inner hull.
pub fn approximate_projection(pi: &ProjectionInstance) -> Result<ProjectionResult, ProjectionError> {
    let g = &pi.game;
    let n = g.total_dim();
    let base = pi.base_problem();
    let mut outer = HomogenizedHrep::new(n);
    for h in g.polyhedral_hull().halfspaces() {
        outer.add(h.clone());
    }
    let mut inner: Vec<Vec<f64>> = Vec::new();
    let mut lifts: Vec<Vec<f64>> = Vec::new();
    let push = |x: Vec<f64>, y: Vec<f64>, inner: &mut Vec<Vec<f64>>, lifts: &mut Vec<Vec<f64>>| {
        if !inner.iter().any(|p| dist_inf(p, &x) <= 1e-12) {
            inner.push(x);
            lifts.push(y);
        }
    };
    for k in 0..n {
        for s in [1.0, -1.0] {
            let mut d = unit(n, k);
            d[k] = s;
            let (x, y, h) = support_on(pi, &base, &d)?;
            outer.add(h);
            push(x, y, &mut inner, &mut lifts);
        }
    }
    let mut iterations = 0;
    loop {
        let vrep = outer.vrep()?;
        if !vrep.rays.is_empty() {
            return Err(ProjectionError::Geometry(GeometryError::Unbounded));
        }
        let mut worst = 0.0f64;
        let mut cuts: Vec<Vec<f64>> = Vec::new();
        for u in &vrep.vertices {
            let (dist, sep) = l1_separation(u, &inner, &[]);
            worst = worst.max(dist);
            if dist > pi.eps2 && norm_inf(&sep) > 0.0 {
                let d: Vec<f64> = sep.iter().map(|v| -v).collect();
                if !cuts.iter().any(|c| dist_inf(c, &d) <= 1e-9) {
                    cuts.push(d);
                }
            }
        }
        if worst <= pi.eps2 || cuts.is_empty() {
            let inner_hull = to_hrep(&Polytope::from_vertices(n, inner.clone())?)?;
            return Ok(ProjectionResult {
                inner_points: inner,
                lifts,
                inner_hull,
                certified_eps: worst,
                outer_vertices: vrep.vertices,
                iterations,
            });
        }
        if iterations >= pi.max_iterations {
            return Err(ProjectionError::IterationBudget { budget: pi.max_iterations, achieved: worst });
        }
        for d in cuts {
            let (x, y, h) = support_on(pi, &base, &d)?;
            outer.add(h);
            push(x, y, &mut inner, &mut lifts);
        }
        iterations += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::efficient::maximal_efficient_faces;
    use crate::game::{builtin, ConstraintSet, Polynomial};

    fn point_face(y: Vec<f64>) -> EfficientFace {
        let m = y.len();
        let p = to_hrep(&Polytope::from_vrep(m, vec![y], (0..m).map(|k| unit(m, k)).collect()).unwrap()).unwrap();
        maximal_efficient_faces(&p).unwrap().remove(0)
    }

    fn segment_face(a: Vec<f64>, b: Vec<f64>) -> EfficientFace {
        let m = a.len();
        let p = to_hrep(&Polytope::from_vrep(m, vec![a, b], (0..m).map(|k| unit(m, k)).collect()).unwrap()).unwrap();
        let fs = maximal_efficient_faces(&p).unwrap();
        assert_eq!(fs.len(), 1);
        fs.into_iter().next().unwrap()
    }

    #[test]
    fn ex51_point_face_is_single_point() {
        let g = builtin("ex51").unwrap().game;
        let pi = ProjectionInstance::new(g, 0, point_face(vec![-0.25, 0.25, 1.0 / 32.0]), 0.001);
        let r = approximate_projection(&pi).unwrap();
        assert!(r.certified_eps <= 0.001);
        for x in &r.inner_points {
            assert!((x[0] - 0.25).abs() < 1e-3 && (x[1] + 0.25).abs() < 1e-9, "{x:?}");
        }
    }

    #[test]
    fn point_face_support_recovers_slice_segment() {
        // f₁ = x₁² on [−1,1]², face point y* = (0.5, −0.5, 0.25):
        // region {(x₁, 0.5) : x₁² ≤ 0.25} = [−½, ½] × {½}
        let f1 = Polynomial::from_terms(2, &[(1.0, &[2, 0])]);
        let f2 = Polynomial::from_terms(2, &[(1.0, &[0, 2])]);
        let g = Game::new(
            vec![1, 1],
            vec![f1, f2],
            ConstraintSet::SharedPolytope(Polytope::boxed(&[-1.0, -1.0], &[1.0, 1.0])),
            2.0,
        )
        .unwrap();
        let pi = ProjectionInstance::new(g, 0, point_face(vec![0.5, -0.5, 0.25]), 0.01);
        let (hi, _, _) = support_step(&pi, &[-1.0, 0.0]).unwrap();
        let (lo, _, _) = support_step(&pi, &[1.0, 0.0]).unwrap();
        assert!((hi[0] - 0.5).abs() < 1e-6 && (lo[0] + 0.5).abs() < 1e-6);
        assert!((hi[1] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn linear_cost_segment_face_is_exact() {
        // f₁ = x₁ on [0,1]²: the face {(t, −t, 0)} has region {0} × [0,1].
        let f1 = Polynomial::from_terms(2, &[(1.0, &[1, 0])]);
        let f2 = Polynomial::from_terms(2, &[(1.0, &[0, 1])]);
        let g = Game::new(
            vec![1, 1],
            vec![f1, f2],
            ConstraintSet::SharedPolytope(Polytope::boxed(&[0.0, 0.0], &[1.0, 1.0])),
            1.0,
        )
        .unwrap();
        let face = segment_face(vec![0.0, 0.0, 0.0], vec![1.0, -1.0, 0.0]);
        let pi = ProjectionInstance::new(g, 0, face, 0.01);
        let r = approximate_projection(&pi).unwrap();
        assert!(r.certified_eps <= 1e-6, "{}", r.certified_eps);
        let (w_in, w_out) = (
            r.inner_points.iter().map(|x| x[1]).fold(f64::NEG_INFINITY, f64::max),
            r.outer_vertices.iter().map(|x| x[1]).fold(f64::NEG_INFINITY, f64::max),
        );
        assert!((w_in - w_out).abs() < 1e-6);
    }

    #[test]
    fn loose_tolerance_stops_after_seeding() {
        let g = builtin("ex51").unwrap().game;
        let face = segment_face(vec![-1.0, 1.0, 0.0], vec![1.0, -1.0, 0.0]);
        let mut pi = ProjectionInstance::new(g, 0, face, 10.0);
        pi.max_iterations = 0;
        let r = approximate_projection(&pi).unwrap();
        assert_eq!(r.iterations, 0);
    }

    #[test]
    fn inconsistent_face_reported() {
        let g = builtin("ex51").unwrap().game;
        // cost far below the slice minimum
        let pi = ProjectionInstance::new(g, 0, point_face(vec![0.0, 0.0, -5.0]), 0.01);
        assert!(matches!(approximate_projection(&pi), Err(ProjectionError::InfeasibleFace)));
    }

    #[test]
    fn ex54_contract_on_every_face() {
        let fx = builtin("ex54").unwrap();
        for i in 0..2 {
            let ua = crate::benson::initialize(&fx.game, i).unwrap();
            let ua = crate::benson::refine(ua, &fx.game, &crate::benson::BensonOptions::new(fx.eps1)).unwrap();
            let faces = maximal_efficient_faces(&ua.inner_with_hrep().unwrap()).unwrap();
            assert!(!faces.is_empty());
            for f in faces {
                let pi = ProjectionInstance::new(fx.game.clone(), i, f, fx.eps2);
                let r = approximate_projection(&pi).unwrap();
                assert!(r.certified_eps <= fx.eps2);
                for (x, y) in r.inner_points.iter().zip(&r.lifts) {
                    assert!(pi.lifted_violation(x, y) <= 1e-8, "{}", pi.lifted_violation(x, y));
                }
                for u in &r.outer_vertices {
                    assert!(l1_separation(u, &r.inner_points, &[]).0 <= fx.eps2 + 1e-9);
                }
            }
        }
    }
}
