//! Outer/inner polyhedral approximation of a player's upper image.
//!
//! Player `i`'s vector problem is `min (x₋ᵢ, −x₋ᵢ, fᵢ(x))` over the feasible
//! set, with boundary direction `c̄ = e_m`. The outer approximation lives in
//! the subspace `y_{1:a} = −y_{a+1:2a}` and starts as a prism over the hull of
//! the projected vertices of the feasible set; each refinement cuts off the
//! outer vertex farthest from the upper image.

use crate::error::{BensonError, GameError};
use crate::game::{ConstraintSet, Game, SliceIndex};
use crate::geometry::{to_hrep, to_vrep, Halfspace, HomogenizedHrep, Polytope};
use crate::solver::{
    lp_solve, nlp_solve, pascoletti_serafini_on, NlpProblem, ScalarizationResult, Status,
};
use crate::tolerance::GEO;
use crate::vecops::{dist_inf, dot, unit};

#[derive(Clone, Debug)]
pub struct BensonOptions {
    pub eps1: f64,
    pub max_iterations: usize,
    /// Support directions for the outer approximation of `𝕏₋ᵢ` in
    /// independent mode; `None` uses `4a`.
    pub outer_dirs: Option<usize>,
}

impl BensonOptions {
    pub fn new(eps1: f64) -> Self {
        Self { eps1, max_iterations: 5000, outer_dirs: None }
    }
}

/// Sandwich `𝒫ᴵⁿ ⊆ 𝒫 ⊆ 𝒫ᴵⁿ − ε₁e_m` of player `i`'s upper image, with the
/// preimage set `X̄`.
#[derive(Clone, Debug)]
pub struct UpperImageApprox {
    pub player: usize,
    pub index: SliceIndex,
    pub eps1: f64,
    /// `X̄`; in independent mode some seeds may lie outside the feasible set.
    pub preimages: Vec<Vec<f64>>,
    /// `(x₋ᵢ, −x₋ᵢ, fᵢ(x))` of each preimage, in the same order.
    pub images: Vec<Vec<f64>>,
    /// Cuts added by refinement.
    pub iterations: usize,
    /// Largest `z*` over the current outer vertices (`∞` before the first
    /// refinement pass).
    pub achieved: f64,
    outer: HomogenizedHrep,
    base: NlpProblem,
    others: Vec<usize>,
    cache: Vec<(Vec<f64>, ScalarizationResult)>,
}

impl UpperImageApprox {
    /// The outer approximation with both representations.
    pub fn outer(&self) -> Result<Polytope, BensonError> {
        Ok(self.outer.to_polytope()?)
    }

    /// `conv(images) + ℝ^m₊` as a V-representation.
    pub fn inner(&self) -> Polytope {
        let m = self.index.m;
        let rays = (0..m).map(|k| unit(m, k)).collect();
        Polytope::from_vrep(m, self.images.clone(), rays).expect("at least one preimage")
    }

    /// The inner approximation with both representations; its vertices are
    /// the extreme images.
    pub fn inner_with_hrep(&self) -> Result<Polytope, BensonError> {
        Ok(to_hrep(&self.inner())?)
    }

    /// The scalarization problem over player `i`'s feasible set (without the
    /// pinning of `x₋ᵢ`).
    pub fn scalarization_base(&self) -> &NlpProblem {
        &self.base
    }

    fn add_preimage(&mut self, g: &Game, x: Vec<f64>) {
        if self.preimages.iter().any(|p| dist_inf(p, &x) <= 1e-12) {
            return;
        }
        self.images.push(g.image_unchecked(self.player, &x));
        self.preimages.push(x);
    }

    fn cut(&mut self, w: &[f64], offset: f64) -> Result<(), BensonError> {
        let h = Halfspace::new(w.iter().map(|v| -v).collect(), -offset)?;
        self.outer.add(h);
        Ok(())
    }
}

/// Minimal `s` with `v + s·e_m ∈ conv(points) + ℝ^m₊`, by LP.
pub fn distance_along_last(points: &[Vec<f64>], v: &[f64]) -> f64 {
    let k = points.len();
    let m = v.len();
    // variables: λ (k), d (m), s
    let nv = k + m + 1;
    let mut c = vec![0.0; nv];
    c[nv - 1] = 1.0;
    let mut a = Vec::new();
    let mut b = Vec::new();
    for j in 0..k + m {
        let mut r = vec![0.0; nv];
        r[j] = -1.0;
        a.push(r);
        b.push(0.0);
    }
    let mut e = Vec::new();
    let mut d = Vec::new();
    for l in 0..m {
        let mut r = vec![0.0; nv];
        for (j, p) in points.iter().enumerate() {
            r[j] = p[l];
        }
        r[k + l] = 1.0;
        if l == m - 1 {
            r[nv - 1] = -1.0;
        }
        e.push(r);
        d.push(v[l]);
    }
    let mut r = vec![0.0; nv];
    r[..k].iter_mut().for_each(|x| *x = 1.0);
    e.push(r);
    d.push(1.0);
    let sol = lp_solve(&c, &a, &b, &e, &d);
    if sol.status == Status::Optimal {
        sol.value
    } else {
        f64::INFINITY
    }
}

/// Build the initial outer approximation for a shared polytope: weighted-sum
/// supports for `e₁, …, e_m` and the all-ones vector, the subspace cut, and
/// the hull of the projected vertices. `X̄` is seeded with the vertices of
/// the feasible set and the weighted-sum minimizers.
pub fn initialize(g: &Game, i: usize) -> Result<UpperImageApprox, BensonError> {
    let ConstraintSet::SharedPolytope(xset) = g.constraint() else {
        return Err(BensonError::WrongConstraintKind);
    };
    let index = g.slice_index(i)?;
    let others = g.others(i);
    let (a_rows, b_rows) = g.linear_constraints();
    let mut base = NlpProblem::new(g.cost(i).clone());
    base.ineq_a = a_rows;
    base.ineq_b = b_rows;
    let projected: Vec<Vec<f64>> =
        xset.vertices().iter().map(|x| others.iter().map(|&k| x[k]).collect()).collect();
    let seeds = xset.vertices().to_vec();
    build(g, i, index, others, base, &projected, seeds)
}

/// Initialization for per-player convex strategy sets: `𝕏₋ᵢ` is replaced by a
/// polyhedral outer approximation built from `outer_dirs` support directions
/// (intersected with the boxes), and `X̄` is seeded with `(xᵢ, pʲ)` for a
/// fixed interior `xᵢ ∈ 𝕏ᵢ` and every vertex `pʲ` of that approximation.
pub fn initialize_independent(g: &Game, i: usize, outer_dirs: usize) -> Result<UpperImageApprox, BensonError> {
    let ConstraintSet::IndependentConvex(sets) = g.constraint() else {
        return Err(BensonError::WrongConstraintKind);
    };
    let index = g.slice_index(i)?;
    let others = g.others(i);
    let a = index.a;
    let n = g.total_dim();

    // Outer approximation of 𝕏₋ᵢ in ℝ^a.
    let mut hs: Vec<Halfspace> = Vec::new();
    let mut offset = 0;
    let mut blocks = Vec::new();
    for j in (0..g.n_players()).filter(|&j| j != i) {
        let nj = g.dims()[j];
        for h in sets[j].bounds.halfspaces() {
            let mut normal = vec![0.0; a];
            normal[offset..offset + nj].copy_from_slice(&h.normal);
            hs.push(Halfspace::new(normal, h.offset)?);
        }
        blocks.push((j, offset, nj));
        offset += nj;
    }
    for d in support_directions(a, outer_dirs) {
        // h(d) = Σⱼ max{dⱼ·xⱼ : xⱼ ∈ 𝕏ⱼ}
        let mut h = 0.0;
        for &(j, off, nj) in &blocks {
            let dj = &d[off..off + nj];
            if dj.iter().all(|&v| v == 0.0) {
                continue;
            }
            let (ra, rb) = sets[j].bounds.constraint_rows();
            let mut p = NlpProblem::linear(dj.iter().map(|v| -v).collect());
            p.ineq_a = ra;
            p.ineq_b = rb;
            if sets[j].g.degree() > 0 {
                p = p.with_convex(crate::solver::ConvexConstraint::new(sets[j].g.clone(), 0.0));
            }
            let s = nlp_solve(&p);
            if s.status != Status::Optimal {
                return Err(BensonError::Game(GameError::EmptyInterior { player: j }));
            }
            h += -s.value;
        }
        hs.push(Halfspace::new(d, h + GEO)?);
    }
    let pout = to_vrep(&Polytope::from_hrep(a, hs)?)?;

    // Interior point of 𝕏ᵢ: minimizer of gᵢ over its box.
    let (ra, rb) = sets[i].bounds.constraint_rows();
    let xi: Vec<f64> = if sets[i].g.degree() > 0 {
        let mut p = NlpProblem::new(sets[i].g.clone());
        p.ineq_a = ra;
        p.ineq_b = rb;
        let s = nlp_solve(&p);
        if s.status != Status::Optimal || s.value >= 0.0 {
            return Err(BensonError::Game(GameError::EmptyInterior { player: i }));
        }
        s.x
    } else {
        crate::solver::chebyshev_center(&ra, &rb, &[], &[], 1.0)
            .map(|(c, _)| c)
            .ok_or(BensonError::Game(GameError::EmptyInterior { player: i }))?
    };

    // Scalarization feasible set: xᵢ ∈ 𝕏ᵢ, x₋ᵢ ∈ P^Out.
    let (pa, pb) = g.player_linear_constraints(i);
    let mut base = NlpProblem::new(g.cost(i).clone());
    base.ineq_a = pa;
    base.ineq_b = pb;
    for h in pout.halfspaces() {
        let mut row = vec![0.0; n];
        for (k, &o) in others.iter().enumerate() {
            row[o] = h.normal[k];
        }
        base = base.with_ineq(row, h.offset);
    }
    if let Some(c) = g.player_convex_constraint(i) {
        base = base.with_convex(c);
    }
    let r = g.player_range(i);
    let seeds: Vec<Vec<f64>> = pout
        .vertices()
        .iter()
        .map(|p| {
            let mut x = vec![0.0; n];
            x[r.clone()].copy_from_slice(&xi);
            for (k, &o) in others.iter().enumerate() {
                x[o] = p[k];
            }
            x
        })
        .collect();
    build(g, i, index, others, base, pout.vertices(), seeds)
}

/// Unit directions in ℝ^a: ±eₖ, then evenly spread directions up to `count`.
fn support_directions(a: usize, count: usize) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    if a == 2 {
        let count = count.max(4);
        for k in 0..count {
            let th = 2.0 * std::f64::consts::PI * k as f64 / count as f64;
            out.push(vec![th.cos(), th.sin()]);
        }
        return out;
    }
    for k in 0..a {
        out.push(unit(a, k));
        let mut e = unit(a, k);
        e[k] = -1.0;
        out.push(e);
    }
    if a >= 3 {
        // Deterministic quasi-uniform directions on the sphere.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(a as u64);
        while out.len() < count {
            let v: Vec<f64> = (0..a).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
            let s = crate::vecops::norm2(&v);
            if s > 0.1 && s <= 1.0 {
                out.push(v.iter().map(|x| x / s).collect());
            }
        }
    }
    out
}

fn build(
    g: &Game,
    i: usize,
    index: SliceIndex,
    others: Vec<usize>,
    base: NlpProblem,
    projected: &[Vec<f64>],
    seeds: Vec<Vec<f64>>,
) -> Result<UpperImageApprox, BensonError> {
    let (a, m) = (index.a, index.m);
    let mut ua = UpperImageApprox {
        player: i,
        index,
        eps1: f64::NAN,
        preimages: Vec::new(),
        images: Vec::new(),
        iterations: 0,
        achieved: f64::INFINITY,
        outer: HomogenizedHrep::new(m),
        base,
        others,
        cache: Vec::new(),
    };

    // Subspace cut y_{1:a} + y_{a+1:2a} = 0.
    for k in 0..a {
        let mut nrm = vec![0.0; m];
        nrm[k] = 1.0;
        nrm[a + k] = 1.0;
        ua.outer.add_equality(Halfspace::new(nrm, 0.0)?);
    }
    // y_{1:a} ∈ conv(projected vertices).
    let hull = to_hrep(&Polytope::from_vertices(a, projected.to_vec())?)?;
    for h in hull.halfspaces() {
        let mut nrm = vec![0.0; m];
        nrm[..a].copy_from_slice(&h.normal);
        ua.outer.add(Halfspace::new(nrm, h.offset)?);
    }
    // Weighted sums.
    let mut dirs: Vec<Vec<f64>> = (0..m).map(|k| unit(m, k)).collect();
    dirs.push(vec![1.0; m]);
    for c in dirs {
        // c·image(x) = Σₖ (cₖ − c_{a+k}) x_{oₖ} + c_m fᵢ(x)
        let mut p = ua.base.clone();
        let mut lin = vec![0.0; g.total_dim()];
        for (k, &o) in ua.others.iter().enumerate() {
            lin[o] = c[k] - c[a + k];
        }
        p.objective = p.objective.scaled(c[m - 1]);
        p.linear = lin;
        let s = nlp_solve(&p);
        if s.status != Status::Optimal {
            return Err(BensonError::Solver(crate::error::SolverError::MaxIterations {
                kkt_residual: s.kkt_residual,
                gap: s.gap,
            }));
        }
        ua.cut(&c, s.value - GEO)?;
        ua.add_preimage(g, s.x);
    }
    for x in seeds {
        ua.add_preimage(g, x);
    }
    Ok(ua)
}

/// Refine until every outer vertex is within `opts.eps1` of the upper image
/// along `e_m`. Each pass solves `P₂(v)` at the new outer vertices, adds
/// their solutions to `X̄`, and cuts at the vertex with the largest `z*`.
pub fn refine(mut ua: UpperImageApprox, g: &Game, opts: &BensonOptions) -> Result<UpperImageApprox, BensonError> {
    ua.eps1 = opts.eps1;
    loop {
        let vrep = ua.outer.vrep()?;
        let mut worst: Option<(f64, usize)> = None;
        let mut slots = Vec::with_capacity(vrep.vertices.len());
        for v in &vrep.vertices {
            let slot = match ua.cache.iter().position(|(u, _)| dist_inf(u, v) <= 1e-10) {
                Some(s) => s,
                None => {
                    let r = pascoletti_serafini_on(&ua.base, &ua.others, v)?;
                    ua.add_preimage(g, r.x.clone());
                    ua.cache.push((v.clone(), r));
                    ua.cache.len() - 1
                }
            };
            let z = ua.cache[slot].1.z;
            if worst.is_none_or(|(wz, _)| z > wz) {
                worst = Some((z, slot));
            }
            slots.push(slot);
        }
        // Drop cache entries for vertices that were cut off.
        let (z, slot) = worst.expect("outer approximation has a vertex");
        ua.achieved = z.max(0.0);
        if z <= opts.eps1 {
            let keep: Vec<_> = slots.iter().map(|&s| ua.cache[s].clone()).collect();
            ua.cache = keep;
            return Ok(ua);
        }
        if ua.iterations >= opts.max_iterations {
            return Err(BensonError::IterationBudget { budget: opts.max_iterations, achieved: z });
        }
        let (v, r) = ua.cache[slot].clone();
        let offset = r.cut_offset(&v);
        ua.cut(&r.w, offset)?;
        ua.iterations += 1;
        let keep: Vec<_> = slots.iter().filter(|&&s| s != slot).map(|&s| ua.cache[s].clone()).collect();
        ua.cache = keep;
    }
}

/// `(v, z*)` for every current outer vertex (from the last refinement pass).
impl UpperImageApprox {
    pub fn vertex_shifts(&self) -> Vec<(Vec<f64>, f64)> {
        self.cache.iter().map(|(v, r)| (v.clone(), r.z)).collect()
    }

    /// Halfspaces of the outer approximation, equalities as pairs.
    pub fn outer_halfspaces(&self) -> Vec<Halfspace> {
        self.outer.halfspaces()
    }

    pub fn outer_vertices(&self) -> Result<Vec<Vec<f64>>, BensonError> {
        Ok(self.outer.vrep()?.vertices)
    }

    /// `w·y` minimal over the inner images.
    pub fn inner_support(&self, w: &[f64]) -> f64 {
        self.images.iter().map(|y| dot(w, y)).fold(f64::INFINITY, f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{builtin, PlayerSet, Polynomial};
    use rand::SeedableRng;

    fn run(name: &str, i: usize) -> (Game, UpperImageApprox) {
        let fx = builtin(name).unwrap();
        let ua = initialize(&fx.game, i).unwrap();
        let ua = refine(ua, &fx.game, &BensonOptions::new(fx.eps1)).unwrap();
        (fx.game, ua)
    }

    #[test]
    fn ex51_initialization() {
        let g = builtin("ex51").unwrap().game;
        let ua = initialize(&g, 0).unwrap();
        for v in [[1.0, 1.0], [1.0, -1.0], [-1.0, 1.0], [-1.0, -1.0]] {
            assert!(ua.preimages.iter().any(|p| dist_inf(p, &v) < 1e-12));
        }
        let outer = ua.outer().unwrap();
        for v in outer.vertices() {
            assert!((v[0] + v[1]).abs() < 1e-9);
            assert!(v[0] >= -1.0 - 1e-9 && v[0] <= 1.0 + 1e-9);
        }
        // prism: one ray, e_m
        assert_eq!(outer.rays().len(), 1);
        assert!((outer.rays()[0][2] - 1.0).abs() < 1e-9);
        for x in &ua.preimages {
            let y = g.objective_image(0, x).unwrap();
            assert!(outer.contains(&y, 1e-9));
        }
    }

    #[test]
    fn wrong_constraint_kind() {
        let g = independent_disc_game();
        assert!(matches!(initialize(&g, 0), Err(BensonError::WrongConstraintKind)));
    }

    #[test]
    fn ex51_refinement_contract() {
        let (g, ua) = run("ex51", 0);
        assert!(ua.achieved <= 0.01);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let outer = ua.outer().unwrap();
        for x in g.sample_feasible(&mut rng, 2000) {
            let y = g.objective_image(0, &x).unwrap();
            assert!(outer.contains(&y, 1e-8));
            // y + ε₁e_m lies in the inner approximation
            assert!(distance_along_last(&ua.images, &y) <= 0.01 + 1e-9);
        }
        for v in outer.vertices() {
            assert!(distance_along_last(&ua.images, v) <= 0.01 + 1e-9);
        }
    }

    #[test]
    fn linear_cost_stops_after_initialization() {
        let f = Polynomial::from_terms(2, &[(1.0, &[1, 0]), (-2.0, &[0, 1])]);
        let g = Game::new(
            vec![1, 1],
            vec![f.clone(), f],
            ConstraintSet::SharedPolytope(Polytope::boxed(&[0.0, 0.0], &[1.0, 1.0])),
            2.0,
        )
        .unwrap();
        let ua = refine(initialize(&g, 0).unwrap(), &g, &BensonOptions::new(1e-6)).unwrap();
        assert!(ua.iterations <= 2, "{}", ua.iterations);
    }

    #[test]
    fn loose_tolerance_stops_immediately() {
        let g = builtin("ex51").unwrap().game;
        let ua = refine(initialize(&g, 0).unwrap(), &g, &BensonOptions::new(10.0)).unwrap();
        assert_eq!(ua.iterations, 0);
    }

    #[test]
    fn budget_reported() {
        let g = builtin("ex51").unwrap().game;
        let opts = BensonOptions { eps1: 1e-6, max_iterations: 2, outer_dirs: None };
        match refine(initialize(&g, 0).unwrap(), &g, &opts) {
            Err(BensonError::IterationBudget { budget: 2, achieved }) => assert!(achieved > 1e-6),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn inner_vertices_are_images() {
        for name in ["ex53", "search", "ex54"] {
            for i in 0..2 {
                let (g, ua) = run(name, i);
                let inner = ua.inner_with_hrep().unwrap();
                for v in inner.vertices() {
                    let best = ua
                        .preimages
                        .iter()
                        .map(|x| dist_inf(&g.image_unchecked(i, x), v))
                        .fold(f64::INFINITY, f64::min);
                    assert!(best <= 1e-9);
                }
            }
        }
    }

    #[test]
    fn projected_preimages_cover_feasible_set() {
        let (g, ua) = run("ex54", 1);
        let pts: Vec<Vec<f64>> = ua.preimages.iter().map(|x| vec![x[0]]).collect();
        let lo = pts.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
        let hi = pts.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for x in g.sample_feasible(&mut rng, 500) {
            assert!(x[0] >= lo - 1e-12 && x[0] <= hi + 1e-12);
        }
    }

    fn independent_disc_game() -> Game {
        // player 2 lives in the unit disc of ℝ², player 1 in [−1, 1]
        let disc = Polynomial::from_terms(2, &[(1.0, &[2, 0]), (1.0, &[0, 2]), (-1.0, &[0, 0])]);
        let sets = vec![
            PlayerSet { g: Polynomial::zero(1), bounds: Polytope::boxed(&[-1.0], &[1.0]) },
            PlayerSet { g: disc, bounds: Polytope::boxed(&[-2.0, -2.0], &[2.0, 2.0]) },
        ];
        let f1 = Polynomial::from_terms(3, &[(1.0, &[2, 0, 0]), (-1.0, &[1, 1, 0])]);
        let f2 = Polynomial::from_terms(3, &[(1.0, &[0, 2, 0]), (1.0, &[0, 0, 2]), (-1.0, &[1, 1, 0])]);
        Game::new(vec![1, 2], vec![f1, f2], ConstraintSet::IndependentConvex(sets), 5.0).unwrap()
    }

    #[test]
    fn disc_outer_approximation_is_octagon() {
        let g = independent_disc_game();
        let ua = initialize_independent(&g, 0, 8).unwrap();
        // X̄ seeds: one per octagon vertex, each at circumradius 1/cos(π/8)
        let r = 1.0 / (std::f64::consts::PI / 8.0).cos();
        let seeds: Vec<&Vec<f64>> =
            ua.preimages.iter().filter(|x| ((x[1] * x[1] + x[2] * x[2]).sqrt() - r).abs() < 1e-6).collect();
        assert_eq!(seeds.len(), 8);
        // seeds lie outside the disc: infeasible for the game but kept
        assert!(seeds.iter().all(|x| !g.is_feasible(x, 1e-9)));
    }

    #[test]
    fn boxes_as_convex_sets_match_shared_initialization() {
        let f1 = Polynomial::from_terms(2, &[(1.0, &[2, 0]), (-1.0, &[1, 1])]);
        let f2 = Polynomial::from_terms(2, &[(1.0, &[0, 2]), (-0.5, &[1, 1])]);
        let shared = Game::new(
            vec![1, 1],
            vec![f1.clone(), f2.clone()],
            ConstraintSet::SharedPolytope(Polytope::boxed(&[0.0, 0.0], &[1.0, 1.0])),
            2.0,
        )
        .unwrap();
        let sets = vec![
            PlayerSet { g: Polynomial::zero(1), bounds: Polytope::boxed(&[0.0], &[1.0]) },
            PlayerSet { g: Polynomial::zero(1), bounds: Polytope::boxed(&[0.0], &[1.0]) },
        ];
        let indep = Game::new(vec![1, 1], vec![f1, f2], ConstraintSet::IndependentConvex(sets), 2.0).unwrap();
        let opts = BensonOptions::new(0.01);
        let a = refine(initialize(&shared, 0).unwrap(), &shared, &opts).unwrap();
        let b = refine(initialize_independent(&indep, 0, 4).unwrap(), &indep, &opts).unwrap();
        let va = a.outer().unwrap();
        let vb = b.outer().unwrap();
        // same outer set: mutual vertex containment
        for v in va.vertices() {
            assert!(vb.contains(v, 1e-6));
        }
        for v in vb.vertices() {
            assert!(va.contains(v, 1e-6));
        }
    }
}
