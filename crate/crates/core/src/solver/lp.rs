//! Dense two-phase simplex.
//!
//! The public problem is `min c·x  s.t.  Ax ≤ b, Ex = d` with `x` free. It is
//! solved through its dual in standard form
//!
//! ```text
//! min b·u + d·λ⁺ − d·λ⁻   s.t.  Aᵀu + Eᵀλ⁺ − Eᵀλ⁻ = −c,  u, λ± ≥ 0
//! ```
//!
//! which has one row per primal variable. The primal point is read back from
//! the simplex multipliers of that system. Desk-scale problems here have few
//! variables and many rows, so the tableau stays small.

use nalgebra::{DMatrix, DVector};

use super::{NlpSolution, Status};

const PIVOT_TOL: f64 = 1e-10;
const COST_TOL: f64 = 1e-10;
const DEGENERATE_SWITCH: usize = 50;

/// Solve `min c·x` subject to `a·x ≤ b` and `e·x = d`.
///
/// Inequality and equality duals follow the convention
/// `c + Aᵀu + Eᵀλ = 0`, `u ≥ 0`.
pub fn lp_solve(c: &[f64], a: &[Vec<f64>], b: &[f64], e: &[Vec<f64>], d: &[f64]) -> NlpSolution {
    solve_inner(c, a, b, e, d, true)
}

fn solve_inner(
    c: &[f64],
    a: &[Vec<f64>],
    b: &[f64],
    e: &[Vec<f64>],
    d: &[f64],
    resolve_status: bool,
) -> NlpSolution {
    let n = c.len();
    assert_eq!(a.len(), b.len(), "inequality rows and rhs differ in length");
    assert_eq!(e.len(), d.len(), "equality rows and rhs differ in length");
    for row in a.iter().chain(e) {
        assert_eq!(row.len(), n, "constraint row has wrong dimension");
    }

    // Row scaling: unit-norm rows keep the dual columns comparable.
    let mut rows: Vec<(Vec<f64>, f64, f64, bool)> = Vec::with_capacity(a.len() + e.len());
    let mut infeasible_zero_row = false;
    for (row, &rhs) in a.iter().zip(b) {
        let s = crate::vecops::norm2(row);
        if s <= 1e-300 {
            if rhs < -1e-9 {
                infeasible_zero_row = true;
            }
            rows.push((vec![0.0; n], 0.0, 0.0, false));
        } else {
            rows.push((row.iter().map(|v| v / s).collect(), rhs / s, s, false));
        }
    }
    for (row, &rhs) in e.iter().zip(d) {
        let s = crate::vecops::norm2(row);
        if s <= 1e-300 {
            if rhs.abs() > 1e-9 {
                infeasible_zero_row = true;
            }
            rows.push((vec![0.0; n], 0.0, 0.0, true));
        } else {
            rows.push((row.iter().map(|v| v / s).collect(), rhs / s, s, true));
        }
    }
    if infeasible_zero_row {
        return NlpSolution::status_only(Status::Infeasible, n, a.len(), e.len());
    }

    // Standard-form columns: one per inequality, two per equality.
    let mut cols: Vec<Vec<f64>> = Vec::new();
    let mut cost: Vec<f64> = Vec::new();
    let mut owner: Vec<(usize, f64)> = Vec::new();
    for (k, (row, rhs, scale, is_eq)) in rows.iter().enumerate() {
        if *scale == 0.0 {
            continue;
        }
        cols.push(row.clone());
        cost.push(*rhs);
        owner.push((k, 1.0));
        if *is_eq {
            cols.push(row.iter().map(|v| -v).collect());
            cost.push(-rhs);
            owner.push((k, -1.0));
        }
    }
    let h: Vec<f64> = c.iter().map(|v| -v).collect();

    let std = standard_simplex(&cols, &cost, &h);
    match std.status {
        Status::Optimal => {
            let x = std.pi;
            let mut ineq = vec![0.0; a.len()];
            let mut eq = vec![0.0; e.len()];
            for (j, &(k, sign)) in owner.iter().enumerate() {
                let scale = rows[k].2;
                let val = std.z[j] / scale;
                if k < a.len() {
                    ineq[k] += val;
                } else {
                    eq[k - a.len()] += sign * val;
                }
            }
            let value = crate::vecops::dot(c, &x);
            let mut resid = c.to_vec();
            for (row, u) in a.iter().zip(&ineq) {
                for (r, v) in resid.iter_mut().zip(row) {
                    *r += u * v;
                }
            }
            for (row, l) in e.iter().zip(&eq) {
                for (r, v) in resid.iter_mut().zip(row) {
                    *r += l * v;
                }
            }
            let dual_value = -crate::vecops::dot(b, &ineq) - crate::vecops::dot(d, &eq);
            NlpSolution {
                status: Status::Optimal,
                x,
                value,
                eq_multipliers: eq,
                ineq_multipliers: ineq,
                kkt_residual: crate::vecops::norm_inf(&resid),
                gap: (value - dual_value).abs(),
                iterations: std.iterations,
            }
        }
        // Dual unbounded: the primal has no feasible point.
        Status::Unbounded => NlpSolution::status_only(Status::Infeasible, n, a.len(), e.len()),
        Status::Infeasible if resolve_status => {
            // Dual infeasible: the primal is infeasible or unbounded.
            if feasible(a, b, e, d) {
                NlpSolution::status_only(Status::Unbounded, n, a.len(), e.len())
            } else {
                NlpSolution::status_only(Status::Infeasible, n, a.len(), e.len())
            }
        }
        other => NlpSolution::status_only(other, n, a.len(), e.len()),
    }
}

/// Whether `{x : Ax ≤ b, Ex = d}` is nonempty.
pub fn feasible(a: &[Vec<f64>], b: &[f64], e: &[Vec<f64>], d: &[f64]) -> bool {
    feasibility_point(a, b, e, d).is_some()
}

/// A point of `{x : Ax ≤ b, Ex = d}` if one exists, found by minimising the
/// uniform violation `s` of the inequalities.
pub fn feasibility_point(a: &[Vec<f64>], b: &[f64], e: &[Vec<f64>], d: &[f64]) -> Option<Vec<f64>> {
    let n = a.first().or(e.first()).map(|r| r.len()).unwrap_or(0);
    let mut aa: Vec<Vec<f64>> = Vec::with_capacity(a.len() + 1);
    let mut bb = Vec::with_capacity(a.len() + 1);
    for (row, &rhs) in a.iter().zip(b) {
        let s = crate::vecops::norm2(row).max(1e-300);
        let mut r: Vec<f64> = row.iter().map(|v| v / s).collect();
        r.push(-1.0);
        aa.push(r);
        bb.push(rhs / s);
    }
    let mut lower = vec![0.0; n + 1];
    lower[n] = -1.0;
    aa.push(lower);
    bb.push(1.0);
    let ee: Vec<Vec<f64>> = e
        .iter()
        .map(|r| {
            let mut r = r.clone();
            r.push(0.0);
            r
        })
        .collect();
    let mut c = vec![0.0; n + 1];
    c[n] = 1.0;
    let sol = solve_inner(&c, &aa, &bb, &ee, d, false);
    if sol.status != Status::Optimal || sol.x[n] > 1e-9 {
        return None;
    }
    let eq_ok = e
        .iter()
        .zip(d)
        .all(|(r, &rhs)| (crate::vecops::dot(r, &sol.x[..n]) - rhs).abs() <= 1e-8 * (1.0 + rhs.abs()));
    if !eq_ok {
        return None;
    }
    Some(sol.x[..n].to_vec())
}

/// Center and radius of the largest Euclidean ball inside `{Ax ≤ b}` within
/// the affine set `{Ex = d}`, radius capped at `cap`. A negative radius means
/// the inequalities cannot all hold. `None` if `Ex = d` is inconsistent.
pub fn chebyshev_center(
    a: &[Vec<f64>],
    b: &[f64],
    e: &[Vec<f64>],
    d: &[f64],
    cap: f64,
) -> Option<(Vec<f64>, f64)> {
    let n = a.first().or(e.first()).map(|r| r.len()).unwrap_or(0);
    let mut aa = Vec::with_capacity(a.len() + 1);
    let mut bb = Vec::with_capacity(a.len() + 1);
    let mut zero_row_slack = f64::INFINITY;
    for (row, &rhs) in a.iter().zip(b) {
        let s = crate::vecops::norm2(row);
        if s <= 1e-300 {
            zero_row_slack = zero_row_slack.min(rhs);
            continue;
        }
        let mut r: Vec<f64> = row.iter().map(|v| v / s).collect();
        r.push(1.0);
        aa.push(r);
        bb.push(rhs / s);
    }
    let mut top = vec![0.0; n + 1];
    top[n] = 1.0;
    aa.push(top);
    bb.push(cap);
    let ee: Vec<Vec<f64>> = e
        .iter()
        .map(|r| {
            let mut r = r.clone();
            r.push(0.0);
            r
        })
        .collect();
    let mut c = vec![0.0; n + 1];
    c[n] = -1.0;
    let sol = solve_inner(&c, &aa, &bb, &ee, d, false);
    match sol.status {
        Status::Optimal => {
            let radius = sol.x[n].min(zero_row_slack);
            Some((sol.x[..n].to_vec(), radius))
        }
        // Dual infeasible here means the equalities are inconsistent.
        _ => None,
    }
}

struct StdResult {
    status: Status,
    z: Vec<f64>,
    pi: Vec<f64>,
    iterations: usize,
}

/// `min g·z  s.t.  Mz = h, z ≥ 0` where `cols[j]` is column `j` of `M`.
/// Returns the primal `z` and the multipliers `π` with `Mᵀπ ≤ g`.
fn standard_simplex(cols: &[Vec<f64>], g: &[f64], h: &[f64]) -> StdResult {
    let nrows = h.len();
    let k = cols.len();
    if nrows == 0 {
        // No rows: optimum at z = 0 unless some cost is negative.
        let status = if g.iter().any(|&v| v < 0.0) { Status::Unbounded } else { Status::Optimal };
        return StdResult { status, z: vec![0.0; k], pi: vec![], iterations: 0 };
    }
    let width = k + nrows + 1;
    let rhs = width - 1;
    let mut sign = vec![1.0; nrows];
    let mut t = vec![0.0; nrows * width];
    for r in 0..nrows {
        if h[r] < 0.0 {
            sign[r] = -1.0;
        }
        for j in 0..k {
            t[r * width + j] = sign[r] * cols[j][r];
        }
        t[r * width + k + r] = 1.0;
        t[r * width + rhs] = sign[r] * h[r];
    }
    let mut basis: Vec<usize> = (k..k + nrows).collect();
    let hnorm = h.iter().fold(0.0f64, |m, v| m.max(v.abs()));

    // Phase 1.
    let mut obj = vec![0.0; width];
    for r in 0..nrows {
        for j in 0..k {
            obj[j] -= t[r * width + j];
        }
        obj[rhs] -= t[r * width + rhs];
    }
    let mut iterations = 0;
    let limit = 100 * (k + nrows) + 1000;
    let st = run_pivots(&mut t, &mut obj, &mut basis, nrows, width, k + nrows, &mut iterations, limit);
    if st == Status::MaxIterations {
        return StdResult { status: st, z: vec![0.0; k], pi: vec![0.0; nrows], iterations };
    }
    if -obj[rhs] > 1e-9 * (1.0 + hnorm) {
        return StdResult { status: Status::Infeasible, z: vec![0.0; k], pi: vec![0.0; nrows], iterations };
    }

    // Drive artificials out of the basis where possible.
    for r in 0..nrows {
        if basis[r] >= k {
            let mut best = None;
            let mut best_val = 1e-9;
            for j in 0..k {
                let v = t[r * width + j].abs();
                if v > best_val {
                    best_val = v;
                    best = Some(j);
                }
            }
            if let Some(j) = best {
                pivot(&mut t, &mut obj, &mut basis, nrows, width, r, j);
            }
        }
    }

    // Phase 2.
    for v in obj.iter_mut() {
        *v = 0.0;
    }
    obj[..k].copy_from_slice(g);
    for r in 0..nrows {
        let b = basis[r];
        let cb = if b < k { g[b] } else { 0.0 };
        if cb != 0.0 {
            for j in 0..width {
                obj[j] -= cb * t[r * width + j];
            }
        }
    }
    let st = run_pivots(&mut t, &mut obj, &mut basis, nrows, width, k, &mut iterations, limit);
    if st != Status::Optimal {
        return StdResult { status: st, z: vec![0.0; k], pi: vec![0.0; nrows], iterations };
    }

    // Recompute the basic solution and multipliers from the original data.
    let mut bmat = DMatrix::<f64>::zeros(nrows, nrows);
    for (c, &bj) in basis.iter().enumerate() {
        for r in 0..nrows {
            bmat[(r, c)] = if bj < k { sign[r] * cols[bj][r] } else if bj - k == r { 1.0 } else { 0.0 };
        }
    }
    let hs = DVector::from_iterator(nrows, (0..nrows).map(|r| sign[r] * h[r]));
    let gb = DVector::from_iterator(nrows, basis.iter().map(|&bj| if bj < k { g[bj] } else { 0.0 }));
    let lu = bmat.clone().lu();
    let mut z = vec![0.0; k];
    let mut pi_flipped: Vec<f64> = (0..nrows).map(|r| -obj[k + r]).collect();
    let zb_solved = lu.solve(&hs);
    let pi_solved = bmat.transpose().lu().solve(&gb);
    match (zb_solved, pi_solved) {
        (Some(zb), Some(p)) if zb.iter().all(|v| v.is_finite()) && p.iter().all(|v| v.is_finite()) => {
            for (c, &bj) in basis.iter().enumerate() {
                if bj < k {
                    z[bj] = zb[c].max(0.0);
                }
            }
            pi_flipped = p.iter().copied().collect();
        }
        _ => {
            for r in 0..nrows {
                if basis[r] < k {
                    z[basis[r]] = t[r * width + rhs].max(0.0);
                }
            }
        }
    }
    let pi = (0..nrows).map(|r| sign[r] * pi_flipped[r]).collect();
    StdResult { status: Status::Optimal, z, pi, iterations }
}

#[allow(clippy::too_many_arguments)]
fn run_pivots(
    t: &mut [f64],
    obj: &mut [f64],
    basis: &mut [usize],
    nrows: usize,
    width: usize,
    enter_limit: usize,
    iterations: &mut usize,
    limit: usize,
) -> Status {
    let rhs = width - 1;
    let mut degenerate_run = 0usize;
    let mut bland = false;
    loop {
        if *iterations >= limit {
            return Status::MaxIterations;
        }
        let mut enter = None;
        let mut best = -COST_TOL;
        for j in 0..enter_limit {
            if obj[j] < best {
                enter = Some(j);
                if bland {
                    break;
                }
                best = obj[j];
            }
        }
        let Some(j) = enter else {
            return Status::Optimal;
        };
        let mut leave: Option<usize> = None;
        let mut best_ratio = f64::INFINITY;
        let mut best_piv = 0.0;
        for r in 0..nrows {
            let a = t[r * width + j];
            if a > PIVOT_TOL {
                let ratio = t[r * width + rhs].max(0.0) / a;
                let better = match leave {
                    None => true,
                    Some(l) => {
                        if ratio < best_ratio - 1e-12 {
                            true
                        } else if ratio <= best_ratio + 1e-12 {
                            if bland {
                                basis[r] < basis[l]
                            } else {
                                a > best_piv
                            }
                        } else {
                            false
                        }
                    }
                };
                if better {
                    leave = Some(r);
                    best_ratio = ratio.min(best_ratio);
                    best_piv = a;
                }
            }
        }
        let Some(r) = leave else {
            return Status::Unbounded;
        };
        if best_ratio <= 1e-12 {
            degenerate_run += 1;
            if degenerate_run > DEGENERATE_SWITCH {
                bland = true;
            }
        } else {
            degenerate_run = 0;
        }
        pivot(t, obj, basis, nrows, width, r, j);
        *iterations += 1;
    }
}

fn pivot(t: &mut [f64], obj: &mut [f64], basis: &mut [usize], nrows: usize, width: usize, r: usize, j: usize) {
    let p = t[r * width + j];
    for v in &mut t[r * width..(r + 1) * width] {
        *v /= p;
    }
    let prow: Vec<f64> = t[r * width..(r + 1) * width].to_vec();
    for rr in 0..nrows {
        if rr == r {
            continue;
        }
        let f = t[rr * width + j];
        if f != 0.0 {
            let row = &mut t[rr * width..(rr + 1) * width];
            for (v, pv) in row.iter_mut().zip(&prow) {
                *v -= f * pv;
            }
            row[j] = 0.0;
        }
    }
    let f = obj[j];
    if f != 0.0 {
        for (v, pv) in obj.iter_mut().zip(&prow) {
            *v -= f * pv;
        }
        obj[j] = 0.0;
    }
    basis[r] = j;
}
