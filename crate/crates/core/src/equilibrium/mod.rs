//! The full pipeline: per-player regions from the Benson sandwich, maximal
//! efficient faces and their projections, intersected across players.

mod oracle;
mod region;

pub use oracle::{
    brute_force_ne, deviation_gains, epsilon_ne_oracle, feasible_grid, ratio, rational_one, rational_zero, ExactGrid,
};
pub use region::{intersect_regions, RegionUnion};

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::benson::{initialize, initialize_independent, refine, BensonOptions};
use crate::efficient::maximal_efficient_faces;
use crate::error::{PipelineError, Stage};
use crate::game::{ConstraintSet, Game};
use crate::geometry::{intersect, minkowski_l1_ball};
use crate::projection::{approximate_projection, ProjectionInstance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    Shared,
    Independent,
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub eps1: f64,
    pub eps2: f64,
    /// `None` picks the mode matching the constraint set.
    pub mode: Option<Mode>,
    pub benson_max_iterations: usize,
    pub projection_max_iterations: usize,
    /// Support directions for the independent-mode outer approximation.
    pub outer_dirs: Option<usize>,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl SolveOptions {
    pub fn new(eps1: f64, eps2: f64) -> Self {
        Self {
            eps1,
            eps2,
            mode: None,
            benson_max_iterations: 5000,
            projection_max_iterations: 500,
            outer_dirs: None,
            threads: None,
        }
    }
}

/// Per-player counters and timings.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PlayerStats {
    pub faces: usize,
    pub preimages: usize,
    pub benson_iterations: usize,
    pub projection_iterations: usize,
    /// Largest remaining Benson gap along `e_m` (at most ε₁).
    pub achieved_eps1: f64,
    /// Largest certified projection error (at most ε₂).
    pub certified_eps2: f64,
    pub benson_seconds: f64,
    pub faces_seconds: f64,
    pub projection_seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub players: Vec<PlayerStats>,
    pub eps1: f64,
    pub eps2: f64,
    pub lipschitz: f64,
    /// `ε₁ + 2Lε₂`.
    pub eps: f64,
    pub pieces: usize,
    pub intersection_seconds: f64,
    pub total_seconds: f64,
}

impl RunReport {
    pub fn face_counts(&self) -> Vec<usize> {
        self.players.iter().map(|p| p.faces).collect()
    }
}

fn check_options(g: &Game, opts: &SolveOptions) -> Result<Mode, PipelineError> {
    for (name, v) in [("eps1", opts.eps1), ("eps2", opts.eps2)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(PipelineError::InvalidInput(format!("{name} must be positive, got {v}")));
        }
    }
    let natural = match g.constraint() {
        ConstraintSet::SharedPolytope(_) => Mode::Shared,
        ConstraintSet::IndependentConvex(_) => Mode::Independent,
    };
    match opts.mode {
        Some(m) if m != natural => Err(PipelineError::InvalidInput(format!(
            "mode {m:?} does not match the constraint set ({natural:?})"
        ))),
        _ => Ok(natural),
    }
}

/// `Xᵢ`: the union over maximal efficient faces `j` of
/// `(conv X̂ʲᵢ + B_{ε₂}) ∩ 𝕏`.
pub fn player_region(g: &Game, i: usize, eps1: f64, eps2: f64) -> Result<RegionUnion, PipelineError> {
    Ok(player_region_with(g, i, &SolveOptions::new(eps1, eps2))?.0)
}

pub fn player_region_with(g: &Game, i: usize, opts: &SolveOptions) -> Result<(RegionUnion, PlayerStats), PipelineError> {
    let mode = check_options(g, opts)?;
    let mut stats = PlayerStats::default();

    let t = Instant::now();
    let bopts = BensonOptions { eps1: opts.eps1, max_iterations: opts.benson_max_iterations, outer_dirs: opts.outer_dirs };
    let ua = match mode {
        Mode::Shared => initialize(g, i),
        Mode::Independent => initialize_independent(g, i, opts.outer_dirs.unwrap_or(4 * g.slice_index(i).map_or(1, |s| s.a))),
    }
    .and_then(|ua| refine(ua, g, &bopts))
    .map_err(|e| PipelineError::stage(Stage::Benson, i, e))?;
    stats.benson_seconds = t.elapsed().as_secs_f64();
    stats.preimages = ua.preimages.len();
    stats.benson_iterations = ua.iterations;
    stats.achieved_eps1 = ua.achieved;

    let t = Instant::now();
    let inner = ua.inner_with_hrep().map_err(|e| PipelineError::stage(Stage::Faces, i, e))?;
    let faces = maximal_efficient_faces(&inner).map_err(|e| PipelineError::stage(Stage::Faces, i, e))?;
    stats.faces = faces.len();
    stats.faces_seconds = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let hull = g.polyhedral_hull();
    let results: Vec<_> = faces
        .into_par_iter()
        .map(|f| {
            let mut pi = ProjectionInstance::new(g.clone(), i, f, opts.eps2);
            pi.max_iterations = opts.projection_max_iterations;
            let r = approximate_projection(&pi).map_err(|e| PipelineError::stage(Stage::Projection, i, e))?;
            let grown = minkowski_l1_ball(&r.inner_hull, opts.eps2).map_err(|e| PipelineError::stage(Stage::Region, i, e))?;
            let piece = intersect(&grown, &hull).map_err(|e| PipelineError::stage(Stage::Region, i, e))?;
            Ok((piece, r.iterations, r.certified_eps))
        })
        .collect::<Result<_, PipelineError>>()?;
    stats.projection_seconds = t.elapsed().as_secs_f64();
    let mut pieces = Vec::with_capacity(results.len());
    for (piece, it, ce) in results {
        stats.projection_iterations += it;
        stats.certified_eps2 = stats.certified_eps2.max(ce);
        pieces.extend(piece);
    }
    let eps = stats.achieved_eps1 + 2.0 * g.lipschitz() * stats.certified_eps2;
    Ok((RegionUnion::new(g.total_dim(), pieces, eps), stats))
}

/// Run the pipeline with `ε₁`, `ε₂` and default options.
pub fn solve(g: &Game, eps1: f64, eps2: f64) -> Result<(RegionUnion, RunReport), PipelineError> {
    solve_with(g, &SolveOptions::new(eps1, eps2))
}

pub fn solve_with(g: &Game, opts: &SolveOptions) -> Result<(RegionUnion, RunReport), PipelineError> {
    check_options(g, opts)?;
    let run = || -> Result<(RegionUnion, RunReport), PipelineError> {
        let start = Instant::now();
        let per_player: Vec<(RegionUnion, PlayerStats)> = (0..g.n_players())
            .into_par_iter()
            .map(|i| player_region_with(g, i, opts))
            .collect::<Result<_, _>>()?;
        let t = Instant::now();
        let (regions, players): (Vec<_>, Vec<_>) = per_player.into_iter().unzip();
        let x = intersect_regions(&regions).map_err(|e| PipelineError::stage(Stage::Intersection, 0, e))?;
        let report = RunReport {
            players,
            eps1: opts.eps1,
            eps2: opts.eps2,
            lipschitz: g.lipschitz(),
            eps: opts.eps1 + 2.0 * g.lipschitz() * opts.eps2,
            pieces: x.pieces.len(),
            intersection_seconds: t.elapsed().as_secs_f64(),
            total_seconds: start.elapsed().as_secs_f64(),
        };
        Ok((x, report))
    };
    match opts.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| PipelineError::InvalidInput(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::builtin;
    use rand::SeedableRng;

    #[test]
    fn ex51_player_band() {
        let fx = builtin("ex51").unwrap();
        let r = player_region(&fx.game, 0, fx.eps1, fx.eps2).unwrap();
        assert!(!r.pieces.is_empty());
        assert!(r.contains(&[0.25, -0.25], 1e-9));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for x in r.sample(&mut rng, 200) {
            // player 1's best response is x₁ = x₂ + ½ (clipped)
            let s = crate::game::Game::slice_min_problem(&fx.game, 0, &x);
            let best = crate::solver::nlp_solve(&s).value;
            assert!(fx.game.cost(0).eval(&x) - best <= fx.eps() + 1e-6);
        }
    }

    #[test]
    fn zero_game_covers_feasible_set() {
        let fx = builtin("zero").unwrap();
        let (x, report) = solve(&fx.game, fx.eps1, fx.eps2).unwrap();
        for p in [[0.0, 0.0], [1.0, 1.0], [0.3, 0.7], [1.0, 0.0]] {
            assert!(x.contains(&p, 1e-9), "{p:?}");
        }
        assert_eq!(report.eps, 0.01 + 2.0 * 1.0 * 0.01);
    }

    #[test]
    fn rejects_bad_tolerances() {
        let g = builtin("ex51").unwrap().game;
        assert!(matches!(solve(&g, 0.0, 0.01), Err(PipelineError::InvalidInput(_))));
        assert!(matches!(solve(&g, 0.01, -1.0), Err(PipelineError::InvalidInput(_))));
        let mut o = SolveOptions::new(0.01, 0.01);
        o.mode = Some(Mode::Independent);
        assert!(matches!(solve_with(&g, &o), Err(PipelineError::InvalidInput(_))));
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let g = builtin("ex51").unwrap().game;
        let mut o = SolveOptions::new(1e-6, 0.01);
        o.benson_max_iterations = 1;
        match solve_with(&g, &o) {
            Err(PipelineError::Stage { stage: Stage::Benson, budget_exhausted: true, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn deterministic_output() {
        let g = builtin("ex51").unwrap().game;
        let mut o = SolveOptions::new(0.01, 0.001);
        o.threads = Some(2);
        let (a, _) = solve_with(&g, &o).unwrap();
        o.threads = Some(1);
        let (b, _) = solve_with(&g, &o).unwrap();
        assert_eq!(a.pieces, b.pieces);
    }
}
