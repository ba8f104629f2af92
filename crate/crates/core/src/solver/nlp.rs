//! Logarithmic-barrier interior point method for convex polynomial programs.
//!
//! The linear part is presolved with LPs: implicit equalities are detected and
//! the problem is reparametrized on the affine hull `x = x₀ + Nξ` of the linear
//! feasible set, which then has an interior. A phase-I barrier problem finds a
//! strictly feasible point for the convex constraints when needed.

use nalgebra::{DMatrix, DVector};

use super::lp::{chebyshev_center, lp_solve};
use super::{NlpProblem, NlpSolution, Status};
use crate::vecops::{dot, norm2, norm_inf};

const INTERIOR_TOL: f64 = 1e-9;
/// Slack below which a constraint counts as active when recovering multipliers.
const ACTIVE_TOL: f64 = 1e-7;
const GAP_TARGET: f64 = 1e-11;
/// Barrier parameter grows by `1 / 0.2` per stage.
const GROWTH: f64 = 5.0;
const MAX_NEWTON: usize = 200;
const MAX_STAGES: usize = 60;

/// Solve a convex polynomial program.
///
/// Requires a bounded feasible region and, for nonlinear constraints, a
/// strictly feasible point relative to the affine hull of the linear part.
pub fn nlp_solve(p: &NlpProblem) -> NlpSolution {
    let n = p.dim();
    let m_lin = p.ineq_a.len();
    let m_conv = p.convex.len();
    assert_eq!(p.linear.len(), n, "linear objective term has wrong dimension");
    assert!(p.ineq_a.iter().chain(&p.eq_a).all(|r| r.len() == n), "constraint row has wrong dimension");
    assert!(p.convex.iter().all(|c| c.poly.dim() == n && c.linear.len() == n));
    let fail = |status| NlpSolution::status_only(status, n, m_lin + m_conv, p.eq_a.len());

    let Some((xc, radius)) = chebyshev_center(&p.ineq_a, &p.ineq_b, &p.eq_a, &p.eq_b, 1.0) else {
        return fail(Status::Infeasible);
    };
    if radius < -INTERIOR_TOL {
        return fail(Status::Infeasible);
    }

    let norms: Vec<f64> = p.ineq_a.iter().map(|r| norm2(r)).collect();
    let slack_at = |x: &[f64], k: usize| (p.ineq_b[k] - dot(&p.ineq_a[k], x)) / norms[k].max(1e-300);
    let mut implicit = vec![false; m_lin];
    if radius <= INTERIOR_TOL {
        let mut has_slack: Vec<bool> = (0..m_lin).map(|k| slack_at(&xc, k) > INTERIOR_TOL).collect();
        for k in 0..m_lin {
            if has_slack[k] || norms[k] <= 1e-300 {
                continue;
            }
            let sol = lp_solve(&p.ineq_a[k], &p.ineq_a, &p.ineq_b, &p.eq_a, &p.eq_b);
            match sol.status {
                Status::Optimal => {
                    if slack_at(&sol.x, k) <= INTERIOR_TOL {
                        implicit[k] = true;
                    } else {
                        for (j, flag) in has_slack.iter_mut().enumerate() {
                            if !*flag && slack_at(&sol.x, j) > INTERIOR_TOL {
                                *flag = true;
                            }
                        }
                    }
                }
                Status::Infeasible => return fail(Status::Infeasible),
                _ => {}
            }
        }
    }

    // Affine hull of the linear feasible set.
    let mut hull_a: Vec<Vec<f64>> = p.eq_a.clone();
    let mut hull_b: Vec<f64> = p.eq_b.clone();
    for k in (0..m_lin).filter(|&k| implicit[k]) {
        hull_a.push(p.ineq_a[k].clone());
        hull_b.push(p.ineq_b[k]);
    }
    let (x0, basis) = affine_parametrization(&hull_a, &hull_b, &xc, n);
    let q = basis.ncols();

    // Reduced linear rows; rows constant on the hull are dropped.
    let mut red_rows: Vec<Vec<f64>> = Vec::new();
    let mut red_rhs: Vec<f64> = Vec::new();
    let mut constant_tight: Vec<usize> = Vec::new();
    for k in 0..m_lin {
        if implicit[k] || norms[k] <= 1e-300 {
            if implicit[k] {
                constant_tight.push(k);
            }
            continue;
        }
        let row: Vec<f64> = (0..q).map(|j| (0..n).map(|l| p.ineq_a[k][l] * basis[(l, j)]).sum()).collect();
        let rhs = p.ineq_b[k] - dot(&p.ineq_a[k], &x0);
        if norm2(&row) <= 1e-12 * norms[k] {
            if rhs / norms[k] <= INTERIOR_TOL {
                constant_tight.push(k);
            }
            continue;
        }
        red_rows.push(row);
        red_rhs.push(rhs);
    }

    let to_x = |xi: &[f64]| -> Vec<f64> {
        let mut x = x0.clone();
        for j in 0..q {
            for l in 0..n {
                x[l] += basis[(l, j)] * xi[j];
            }
        }
        x
    };

    let mut iterations = 0;
    let mut barrier_gap = 0.0;
    let mut status = Status::Optimal;
    let x: Vec<f64>;
    let mut active_conv: Vec<usize> = Vec::new();

    if q == 0 {
        x = x0.clone();
        for (j, c) in p.convex.iter().enumerate() {
            let v = c.value(&x);
            if v > INTERIOR_TOL * (1.0 + c.rhs.abs()) {
                return fail(Status::Infeasible);
            }
            if v >= -INTERIOR_TOL * (1.0 + c.rhs.abs()) {
                active_conv.push(j);
            }
        }
    } else {
        let xi0 = if red_rows.is_empty() {
            vec![0.0; q]
        } else {
            match chebyshev_center(&red_rows, &red_rhs, &[], &[], 1.0) {
                Some((c, r)) if r > 0.0 => c,
                _ => vec![0.0; q],
            }
        };
        let funcs: Vec<Mapped> = p
            .convex
            .iter()
            .map(|c| Mapped { poly: &c.poly, linear: &c.linear, shift: c.rhs, x0: &x0, basis: &basis, slack_var: None })
            .collect();
        let mut xi = xi0;

        let worst = funcs.iter().map(|f| f.value(&xi)).fold(f64::NEG_INFINITY, f64::max);
        if !funcs.is_empty() && worst >= 0.0 {
            // Phase I: minimize s with c_j(ξ) ≤ s.
            let phase_funcs: Vec<Mapped> = funcs.iter().map(|f| Mapped { slack_var: Some(q), ..*f }).collect();
            let mut rows: Vec<Vec<f64>> = red_rows
                .iter()
                .map(|r| {
                    let mut r = r.clone();
                    r.push(0.0);
                    r
                })
                .collect();
            let mut rhs = red_rhs.clone();
            let mut floor = vec![0.0; q + 1];
            floor[q] = -1.0;
            rows.push(floor);
            rhs.push(1.0);
            let mut z = xi.clone();
            z.push(worst + 1.0);
            let obj = LinearObjective { c: crate::vecops::unit(q + 1, q) };
            let convs: Vec<&dyn Smooth> = phase_funcs.iter().map(|f| f as &dyn Smooth).collect();
            let stop = |z: &[f64]| funcs.iter().all(|f| f.value(&z[..q]) < 0.0);
            let res = barrier(&obj, &rows, &rhs, &convs, z, Some(&stop));
            iterations += res.iterations;
            z = res.z;
            if !stop(&z) {
                return fail(Status::Infeasible);
            }
            xi = z[..q].to_vec();
        }

        let obj = Mapped { poly: &p.objective, linear: &p.linear, shift: 0.0, x0: &x0, basis: &basis, slack_var: None };
        let convs: Vec<&dyn Smooth> = funcs.iter().map(|f| f as &dyn Smooth).collect();
        let res = barrier(&obj, &red_rows, &red_rhs, &convs, xi, None);
        iterations += res.iterations;
        if res.diverged {
            status = Status::Unbounded;
        } else if !res.converged {
            status = Status::MaxIterations;
        }
        barrier_gap = (red_rows.len() + funcs.len()) as f64 / res.t;
        x = to_x(&res.z);
    }

    // Multipliers from the stationarity LP over the equalities and the
    // constraints active at `x`; inactive constraints get zero.
    if q > 0 {
        for (j, c) in p.convex.iter().enumerate() {
            if -c.value(&x) <= ACTIVE_TOL * (1.0 + c.rhs.abs()) {
                active_conv.push(j);
            }
        }
    }
    let mut active_lin: Vec<usize> = constant_tight.clone();
    for k in 0..m_lin {
        if !active_lin.contains(&k) && norms[k] > 1e-300 && slack_at(&x, k) <= ACTIVE_TOL * (1.0 + p.ineq_b[k].abs()) {
            active_lin.push(k);
        }
    }
    let mut tight_cols: Vec<Vec<f64>> = active_lin.iter().map(|&k| p.ineq_a[k].clone()).collect();
    for &j in &active_conv {
        tight_cols.push(p.convex[j].gradient(&x));
    }
    let grad = p.objective_gradient(&x);
    let (eq_mult, tight_mult, residual) = stationarity_multipliers(&grad, &p.eq_a, &tight_cols);
    let mut lin_mult = vec![0.0; m_lin];
    let mut conv_mult = vec![0.0; m_conv];
    let mut gap = barrier_gap;
    for (slot, &k) in active_lin.iter().enumerate() {
        lin_mult[k] = tight_mult[slot];
        gap += tight_mult[slot] * slack_at(&x, k).abs() * norms[k];
    }
    for (slot, &j) in active_conv.iter().enumerate() {
        conv_mult[j] = tight_mult[active_lin.len() + slot];
        gap += conv_mult[j] * p.convex[j].value(&x).abs();
    }

    // A stalled last barrier stage still yields an optimum when the recovered
    // multipliers certify it.
    let value = p.objective_value(&x);
    if status == Status::MaxIterations
        && residual <= 1e-7 * (1.0 + norm_inf(&grad))
        && gap <= 1e-7 * (1.0 + value.abs())
    {
        status = Status::Optimal;
    }

    let mut ineq_multipliers = lin_mult;
    ineq_multipliers.extend(conv_mult);
    NlpSolution {
        status,
        value,
        x,
        eq_multipliers: eq_mult,
        ineq_multipliers,
        kkt_residual: residual,
        gap,
        iterations,
    }
}

/// `x₀` on `{Hx = h}` near `seed`, and an orthonormal basis of the null space of `H`.
fn affine_parametrization(h_rows: &[Vec<f64>], h_rhs: &[f64], seed: &[f64], n: usize) -> (Vec<f64>, DMatrix<f64>) {
    if h_rows.is_empty() {
        return (seed.to_vec(), DMatrix::identity(n, n));
    }
    let rows = h_rows.len().max(n);
    let mut m = DMatrix::<f64>::zeros(rows, n);
    for (r, row) in h_rows.iter().enumerate() {
        let s = norm2(row).max(1e-300);
        for c in 0..n {
            m[(r, c)] = row[c] / s;
        }
    }
    let svd = m.clone().svd(true, true);
    let smax = svd.singular_values.iter().fold(0.0f64, |a, &b| a.max(b));
    let tol = 1e-10 * smax.max(1.0);
    let v_t = svd.v_t.as_ref().expect("requested V");
    let null: Vec<usize> = (0..n).filter(|&j| svd.singular_values[j] <= tol).collect();
    let mut basis = DMatrix::<f64>::zeros(n, null.len());
    for (c, &j) in null.iter().enumerate() {
        for l in 0..n {
            basis[(l, c)] = v_t[(j, l)];
        }
    }
    // Project the seed onto the affine set.
    let xs = DVector::from_column_slice(seed);
    let mut resid = DVector::<f64>::zeros(rows);
    for (r, row) in h_rows.iter().enumerate() {
        let s = norm2(row).max(1e-300);
        resid[r] = h_rhs[r] / s - dot(row, seed) / s;
    }
    let corr = svd.solve(&resid, tol).unwrap_or_else(|_| DVector::zeros(n));
    let x0 = xs + corr;
    (x0.iter().copied().collect(), basis)
}

/// Least-L1-residual multipliers: `λ` free for equalities, `u ≥ 0` for the
/// always-tight constraints with gradients `tight`.
fn stationarity_multipliers(grad: &[f64], eq: &[Vec<f64>], tight: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>, f64) {
    let n = grad.len();
    let pe = eq.len();
    let pt = tight.len();
    if pe + pt == 0 {
        return (vec![], vec![], norm_inf(grad));
    }
    // Variables: λ (pe), u (pt), r⁺ (n), r⁻ (n).
    let nv = pe + pt + 2 * n;
    let mut c = vec![0.0; nv];
    for v in &mut c[pe + pt..] {
        *v = 1.0;
    }
    let mut a = Vec::new();
    let mut b = Vec::new();
    for j in pe..nv {
        let mut row = vec![0.0; nv];
        row[j] = -1.0;
        a.push(row);
        b.push(0.0);
    }
    let mut e = Vec::with_capacity(n);
    let mut d = Vec::with_capacity(n);
    for l in 0..n {
        let mut row = vec![0.0; nv];
        for (k, r) in eq.iter().enumerate() {
            row[k] = r[l];
        }
        for (k, r) in tight.iter().enumerate() {
            row[pe + k] = r[l];
        }
        row[pe + pt + l] = -1.0;
        row[pe + pt + n + l] = 1.0;
        e.push(row);
        d.push(-grad[l]);
    }
    let sol = lp_solve(&c, &a, &b, &e, &d);
    if sol.status != Status::Optimal {
        return (vec![0.0; pe], vec![0.0; pt], norm_inf(grad));
    }
    let lam = sol.x[..pe].to_vec();
    let u: Vec<f64> = sol.x[pe..pe + pt].iter().map(|v| v.max(0.0)).collect();
    let mut r = grad.to_vec();
    for (k, row) in eq.iter().enumerate() {
        for l in 0..n {
            r[l] += lam[k] * row[l];
        }
    }
    for (k, row) in tight.iter().enumerate() {
        for l in 0..n {
            r[l] += u[k] * row[l];
        }
    }
    (lam, u, norm_inf(&r))
}

trait Smooth {
    fn value(&self, z: &[f64]) -> f64;
    fn derivatives(&self, z: &[f64]) -> (Vec<f64>, DMatrix<f64>);
}

struct LinearObjective {
    c: Vec<f64>,
}

impl Smooth for LinearObjective {
    fn value(&self, z: &[f64]) -> f64 {
        dot(&self.c, z)
    }
    fn derivatives(&self, _z: &[f64]) -> (Vec<f64>, DMatrix<f64>) {
        (self.c.clone(), DMatrix::zeros(self.c.len(), self.c.len()))
    }
}

/// `poly(x₀ + Nξ) + linear·(x₀ + Nξ) − shift [− s]` where `s = z[slack_var]`.
#[derive(Clone, Copy)]
struct Mapped<'a> {
    poly: &'a crate::game::Polynomial,
    linear: &'a [f64],
    shift: f64,
    x0: &'a [f64],
    basis: &'a DMatrix<f64>,
    slack_var: Option<usize>,
}

impl Mapped<'_> {
    fn x_of(&self, z: &[f64]) -> Vec<f64> {
        let mut x = self.x0.to_vec();
        for j in 0..self.basis.ncols() {
            let zj = z[j];
            if zj != 0.0 {
                for (l, xl) in x.iter_mut().enumerate() {
                    *xl += self.basis[(l, j)] * zj;
                }
            }
        }
        x
    }
}

impl Smooth for Mapped<'_> {
    fn value(&self, z: &[f64]) -> f64 {
        let x = self.x_of(z);
        let mut v = self.poly.eval(&x) + dot(self.linear, &x) - self.shift;
        if let Some(s) = self.slack_var {
            v -= z[s];
        }
        v
    }

    fn derivatives(&self, z: &[f64]) -> (Vec<f64>, DMatrix<f64>) {
        let x = self.x_of(z);
        let n = x.len();
        let q = self.basis.ncols();
        let gx = crate::vecops::add(&self.poly.gradient(&x), self.linear);
        let hx = DMatrix::from_row_slice(n, n, &self.poly.hessian(&x));
        let gq = self.basis.transpose() * DVector::from_column_slice(&gx);
        let hq = self.basis.transpose() * hx * self.basis;
        let dimz = z.len();
        let mut g = vec![0.0; dimz];
        let mut h = DMatrix::zeros(dimz, dimz);
        for j in 0..q {
            g[j] = gq[j];
            for k in 0..q {
                h[(j, k)] = hq[(j, k)];
            }
        }
        if let Some(s) = self.slack_var {
            g[s] = -1.0;
        }
        (g, h)
    }
}

struct BarrierResult {
    z: Vec<f64>,
    t: f64,
    iterations: usize,
    converged: bool,
    diverged: bool,
}

/// Minimize `f` over `{rows·z < rhs, c_j(z) < 0}` by the barrier method.
fn barrier(
    f: &dyn Smooth,
    rows: &[Vec<f64>],
    rhs: &[f64],
    convs: &[&dyn Smooth],
    mut z: Vec<f64>,
    stop: Option<&dyn Fn(&[f64]) -> bool>,
) -> BarrierResult {
    let dim = z.len();
    let m = (rows.len() + convs.len()).max(1) as f64;
    let mut t = 1.0;
    let mut iterations = 0;
    let mut converged = false;

    let phi = |z: &[f64], t: f64| -> Option<f64> {
        let mut v = t * f.value(z);
        for (r, &h) in rows.iter().zip(rhs) {
            let s = h - dot(r, z);
            if s <= 0.0 {
                return None;
            }
            v -= s.ln();
        }
        for c in convs {
            let s = -c.value(z);
            if s <= 0.0 || !s.is_finite() {
                return None;
            }
            v -= s.ln();
        }
        Some(v)
    };

    for _stage in 0..MAX_STAGES {
        let mut stage_ok = false;
        for _ in 0..MAX_NEWTON {
            iterations += 1;
            let (gf, hf) = f.derivatives(&z);
            let mut g = DVector::from_iterator(dim, gf.iter().map(|v| t * v));
            let mut h = hf * t;
            let mut slacks = Vec::with_capacity(rows.len());
            for (r, &rh) in rows.iter().zip(rhs) {
                let s = rh - dot(r, &z);
                slacks.push(s);
                for j in 0..dim {
                    if r[j] == 0.0 {
                        continue;
                    }
                    g[j] += r[j] / s;
                    for k in 0..dim {
                        h[(j, k)] += r[j] * r[k] / (s * s);
                    }
                }
            }
            for c in convs {
                let s = -c.value(&z);
                let (gc, hc) = c.derivatives(&z);
                for j in 0..dim {
                    g[j] += gc[j] / s;
                    for k in 0..dim {
                        h[(j, k)] += gc[j] * gc[k] / (s * s) + hc[(j, k)] / s;
                    }
                }
            }
            let step = newton_direction(&h, &g);
            let dec2 = -g.dot(&step);
            if !dec2.is_finite() {
                break;
            }
            let step_small = norm_inf(step.as_slice()) <= 1e-14 * (1.0 + norm_inf(&z));
            if dec2 / 2.0 <= 1e-10 || step_small {
                stage_ok = true;
                break;
            }
            let dz: Vec<f64> = step.iter().copied().collect();
            let mut alpha: f64 = 1.0;
            for (r, &s) in rows.iter().zip(&slacks) {
                let rd = dot(r, &dz);
                if rd > 0.0 {
                    alpha = alpha.min(0.99 * s / rd);
                }
            }
            let phi0 = phi(&z, t).unwrap_or(f64::INFINITY);
            let slope = g.dot(&step);
            let mut accepted = false;
            while alpha > 1e-16 {
                let cand: Vec<f64> = z.iter().zip(&dz).map(|(a, b)| a + alpha * b).collect();
                if let Some(v) = phi(&cand, t) {
                    if v <= phi0 + 1e-4 * alpha * slope || (dec2 < 1e-4 && alpha >= 0.5) {
                        if cand == z {
                            break;
                        }
                        z = cand;
                        accepted = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if !accepted {
                // No representable decrease: centered to machine precision.
                stage_ok = true;
                break;
            }
            if let Some(stop) = stop {
                if stop(&z) {
                    return BarrierResult { z, t, iterations, converged: true, diverged: false };
                }
            }
            if norm_inf(&z) > 1e12 {
                return BarrierResult { z, t, iterations, converged: false, diverged: true };
            }
        }
        if m / t <= GAP_TARGET {
            converged = stage_ok;
            break;
        }
        t *= GROWTH;
    }
    BarrierResult { z, t, iterations, converged, diverged: false }
}

/// Solve `H d = −g`, shifting `H` toward positive definiteness when needed.
fn newton_direction(h: &DMatrix<f64>, g: &DVector<f64>) -> DVector<f64> {
    let n = h.nrows();
    let scale = (0..n).map(|i| h[(i, i)].abs()).fold(1e-300, f64::max);
    let mut shift = 0.0;
    for _ in 0..40 {
        let mut hm = h.clone();
        if shift > 0.0 {
            for i in 0..n {
                hm[(i, i)] += shift;
            }
        }
        if let Some(ch) = hm.cholesky() {
            return -ch.solve(g);
        }
        shift = if shift == 0.0 { 1e-12 * scale } else { shift * 10.0 };
    }
    -g.clone() / scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Polynomial;
    use crate::solver::{lp_solve, ConvexConstraint};
    use proptest::prelude::*;

    #[test]
    fn slice_quadratic() {
        // ½x² − ¼x over [−1, 1]
        let p = NlpProblem::new(Polynomial::from_terms(1, &[(0.5, &[2]), (-0.25, &[1])]))
            .with_ineq(vec![1.0], 1.0)
            .with_ineq(vec![-1.0], 1.0);
        let s = nlp_solve(&p);
        assert_eq!(s.status, Status::Optimal);
        assert!((s.x[0] - 0.25).abs() < 1e-8, "{:?}", s.x);
        assert!((s.value + 1.0 / 32.0).abs() < 1e-10);
        assert!(s.kkt_residual < 1e-8);
        assert!(s.gap < 1e-8);
    }

    #[test]
    fn bound_multiplier() {
        // min x² s.t. x ≥ 1 → x = 1, μ = 2
        let p = NlpProblem::new(Polynomial::from_terms(1, &[(1.0, &[2])])).with_ineq(vec![-1.0], -1.0);
        let s = nlp_solve(&p);
        assert_eq!(s.status, Status::Optimal);
        assert!((s.x[0] - 1.0).abs() < 1e-8);
        assert!((s.ineq_multipliers[0] - 2.0).abs() < 1e-6, "{:?}", s.ineq_multipliers);
    }

    #[test]
    fn cubic_epigraph_slice() {
        // variables (x, z): min z s.t. x³ − z ≤ 0, 0 ≤ x ≤ 1, x = 1/6
        let mut cubic = ConvexConstraint::new(Polynomial::from_terms(2, &[(1.0, &[3, 0])]), 0.0);
        cubic.linear = vec![0.0, -1.0];
        let p = NlpProblem::linear(vec![0.0, 1.0])
            .with_ineq(vec![1.0, 0.0], 1.0)
            .with_ineq(vec![-1.0, 0.0], 0.0)
            .with_eq(vec![1.0, 0.0], 1.0 / 6.0)
            .with_convex(cubic);
        let s = nlp_solve(&p);
        assert_eq!(s.status, Status::Optimal);
        assert!((s.x[1] - 1.0 / 216.0).abs() < 1e-8, "{:?}", s.x);
        assert!((s.ineq_multipliers[2] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn infeasible_linear_part() {
        let p = NlpProblem::new(Polynomial::from_terms(1, &[(1.0, &[2])]))
            .with_ineq(vec![-1.0], -1.0)
            .with_ineq(vec![1.0], 0.0);
        assert_eq!(nlp_solve(&p).status, Status::Infeasible);
    }

    #[test]
    fn infeasible_convex_constraint() {
        // x² ≤ −1 has no solution
        let p = NlpProblem::linear(vec![1.0])
            .with_ineq(vec![1.0], 2.0)
            .with_ineq(vec![-1.0], 2.0)
            .with_convex(ConvexConstraint::new(Polynomial::from_terms(1, &[(1.0, &[2])]), -1.0));
        assert_eq!(nlp_solve(&p).status, Status::Infeasible);
    }

    #[test]
    fn implicit_equality_detected() {
        // x + y ≥ 1, x ≤ 0.5, y ≤ 0.5 forces (0.5, 0.5)
        let p = NlpProblem::new(Polynomial::from_terms(2, &[(1.0, &[2, 0]), (1.0, &[0, 2])]))
            .with_ineq(vec![-1.0, -1.0], -1.0)
            .with_ineq(vec![1.0, 0.0], 0.5)
            .with_ineq(vec![0.0, 1.0], 0.5);
        let s = nlp_solve(&p);
        assert_eq!(s.status, Status::Optimal);
        assert!((s.x[0] - 0.5).abs() < 1e-9 && (s.x[1] - 0.5).abs() < 1e-9);
        assert!(s.kkt_residual < 1e-8);
        assert!(s.ineq_multipliers.iter().all(|&u| u >= 0.0));
    }

    #[test]
    fn boundary_slice_fixed_coordinate() {
        // min (x − 2)² + y s.t. y = 1 on [0, 1]²; y ≤ 1 is tight everywhere.
        let p = NlpProblem::new(Polynomial::from_terms(2, &[(1.0, &[2, 0]), (-4.0, &[1, 0]), (1.0, &[0, 1])]))
            .with_eq(vec![0.0, 1.0], 1.0)
            .with_ineq(vec![1.0, 0.0], 1.0)
            .with_ineq(vec![-1.0, 0.0], 0.0)
            .with_ineq(vec![0.0, 1.0], 1.0)
            .with_ineq(vec![0.0, -1.0], 0.0);
        let s = nlp_solve(&p);
        assert_eq!(s.status, Status::Optimal);
        assert!((s.x[0] - 1.0).abs() < 1e-8);
        assert!(s.kkt_residual < 1e-8, "{}", s.kkt_residual);
    }

    #[test]
    fn nonconvex_objective_does_not_crash() {
        let p = NlpProblem::new(Polynomial::from_terms(1, &[(-1.0, &[2])]))
            .with_ineq(vec![1.0], 1.0)
            .with_ineq(vec![-1.0], 0.5);
        let s = nlp_solve(&p);
        assert!(s.x[0].is_finite());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn linear_instances_agree_with_lp(
            c in prop::collection::vec(-2.0f64..2.0, 2),
            extra in prop::collection::vec((prop::collection::vec(-1.0f64..1.0, 2), 0.2f64..1.5), 0..5),
        ) {
            let mut a = vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0], vec![0.0, -1.0]];
            let mut b = vec![1.0, 1.0, 1.0, 1.0];
            for (row, rhs) in extra {
                a.push(row);
                b.push(rhs);
            }
            let lp = lp_solve(&c, &a, &b, &[], &[]);
            let mut p = NlpProblem::linear(c.clone());
            for (row, rhs) in a.iter().zip(&b) {
                p = p.with_ineq(row.clone(), *rhs);
            }
            let s = nlp_solve(&p);
            prop_assert_eq!(lp.status, Status::Optimal);
            prop_assert_eq!(s.status, Status::Optimal);
            prop_assert!((lp.value - s.value).abs() <= 1e-8, "lp {} nlp {}", lp.value, s.value);
            prop_assert!(s.gap <= 1e-8);
        }

        #[test]
        fn strong_duality_on_quadratics(
            center in prop::collection::vec(-2.0f64..2.0, 2),
            w in prop::collection::vec(0.1f64..3.0, 2),
        ) {
            // min Σ w_k (x_k − c_k)² over [−1, 1]²; the dual value is computed in closed form.
            let terms: Vec<(f64, Vec<u32>)> = vec![
                (w[0], vec![2, 0]), (-2.0 * w[0] * center[0], vec![1, 0]),
                (w[1], vec![0, 2]), (-2.0 * w[1] * center[1], vec![0, 1]),
                (w[0] * center[0] * center[0] + w[1] * center[1] * center[1], vec![0, 0]),
            ];
            let poly = Polynomial::new(2, terms.into_iter().map(|(c, e)| crate::game::Term { coef: c, exp: e }).collect()).unwrap();
            let p = NlpProblem::new(poly)
                .with_ineq(vec![1.0, 0.0], 1.0).with_ineq(vec![-1.0, 0.0], 1.0)
                .with_ineq(vec![0.0, 1.0], 1.0).with_ineq(vec![0.0, -1.0], 1.0);
            let s = nlp_solve(&p);
            prop_assert_eq!(s.status, Status::Optimal);
            // Dual function: separable; g(u) = Σ_k min_x w(x−c)² + (u⁺−u⁻)x − u⁺ − u⁻.
            let u = &s.ineq_multipliers;
            let mut dual = 0.0;
            for k in 0..2 {
                let lin = u[2 * k] - u[2 * k + 1];
                let xk = center[k] - lin / (2.0 * w[k]);
                dual += w[k] * (xk - center[k]).powi(2) + lin * xk - u[2 * k] - u[2 * k + 1];
            }
            prop_assert!(s.value - dual <= 1e-8, "gap {}", s.value - dual);
        }
    }
}
