//! Built-in example games with their tolerances and known equilibria.

use super::{ConstraintSet, Game, Polynomial};
use crate::geometry::{Halfspace, Polytope};

/// A game bundled with the tolerances it is solved at and its known
/// equilibria.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub game: Game,
    pub eps1: f64,
    pub eps2: f64,
    /// Sample points of the exact equilibrium set.
    pub known_ne: Vec<Vec<f64>>,
    /// Published ε, when it differs from `ε₁ + 2Lε₂`.
    pub reported_eps: Option<f64>,
}

impl Fixture {
    /// `ε₁ + 2Lε₂`.
    pub fn eps(&self) -> f64 {
        self.eps1 + 2.0 * self.game.lipschitz() * self.eps2
    }
}

pub fn builtin_names() -> &'static [&'static str] {
    &["ex51", "ex52_y05", "ex52_y10", "ex52_y15", "ex53", "search", "ex54", "ex55"]
}

pub fn builtin(name: &str) -> Option<Fixture> {
    Some(match name {
        "ex51" => ex51(),
        "ex52_y05" => ex52(0.5),
        "ex52_y10" => ex52(1.0),
        "ex52_y15" => ex52(1.5),
        "ex53" => ex53(),
        "search" => search(),
        "ex54" => ex54(),
        "ex55" => ex55(),
        "zero" => zero(),
        _ => return None,
    })
}

fn poly(dim: usize, terms: &[(f64, &[u32])]) -> Polynomial {
    Polynomial::from_terms(dim, terms)
}

fn shared(p: Polytope) -> ConstraintSet {
    ConstraintSet::SharedPolytope(p)
}

fn hrep(dim: usize, rows: &[(&[f64], f64)]) -> Polytope {
    let hs = rows.iter().map(|(n, o)| Halfspace::new(n.to_vec(), *o).expect("nonzero normal")).collect();
    Polytope::from_hrep(dim, hs).expect("consistent dimensions")
}

/// Unique equilibrium (¼, −¼) on [−1, 1]².
pub fn ex51() -> Fixture {
    let f1 = poly(2, &[(0.5, &[2, 0]), (-1.0, &[1, 1]), (-0.5, &[1, 0]), (1.0, &[0, 2])]);
    let f2 = poly(2, &[(0.5, &[0, 2]), (1.0, &[1, 1]), (1.0, &[2, 0])]);
    let game = Game::new(vec![1, 1], vec![f1, f2], shared(Polytope::boxed(&[-1.0, -1.0], &[1.0, 1.0])), 3.0)
        .expect("valid fixture");
    Fixture { name: "ex51", game, eps1: 0.01, eps2: 0.001, known_ne: vec![vec![0.25, -0.25]], reported_eps: None }
}

/// Parametric game on [0, 1]²: one, a line of, or two equilibria for
/// `y < 1`, `y = 1`, `y > 1`.
pub fn ex52(y: f64) -> Fixture {
    let f1 = poly(2, &[(1.0, &[2, 0]), (-2.0 * y, &[1, 1]), (1.0, &[0, 2])]);
    let f2 = poly(2, &[(1.0, &[2, 0]), (-2.0, &[1, 1]), (1.0, &[0, 2])]);
    let l = f64::max(4.0, 2.0 + 2.0 * (y * y + 1e-4));
    let game = Game::new(vec![1, 1], vec![f1, f2], shared(Polytope::boxed(&[0.0, 0.0], &[1.0, 1.0])), l)
        .expect("valid fixture");
    let (name, known_ne, reported) = if y < 1.0 {
        ("ex52_y05", vec![vec![0.0, 0.0]], 0.018)
    } else if y == 1.0 {
        ("ex52_y10", (0..20).map(|k| vec![k as f64 / 19.0; 2]).collect(), 0.018)
    } else {
        ("ex52_y15", vec![vec![0.0, 0.0], vec![1.0, 1.0]], 0.027)
    };
    Fixture { name, game, eps1: 0.001, eps2: 0.001, known_ne, reported_eps: Some(reported) }
}

/// Segment of equilibria `{(t, 1−t) : t ∈ [½, 1]}`, on the compactified set
/// `{x₁ + x₂ ≥ 1} ∩ [0, 2]²`.
pub fn ex53() -> Fixture {
    let f1 = poly(2, &[(0.5, &[2, 0]), (-1.0, &[1, 1]), (1.0, &[0, 2])]);
    let f2 = poly(2, &[(1.0, &[0, 2]), (1.0, &[1, 1]), (1.0, &[2, 0])]);
    let x = hrep(
        2,
        &[(&[-1.0, -1.0], -1.0), (&[-1.0, 0.0], 0.0), (&[0.0, -1.0], 0.0), (&[1.0, 0.0], 2.0), (&[0.0, 1.0], 2.0)],
    );
    let game = Game::new(vec![1, 1], vec![f1, f2], shared(x), 8.0).expect("valid fixture");
    let known_ne = (0..=10).map(|k| 0.5 + 0.05 * k as f64).map(|t| vec![t, 1.0 - t]).collect();
    Fixture { name: "ex53", game, eps1: 0.01, eps2: 0.001, known_ne, reported_eps: Some(0.027) }
}

/// Two-player search model with cubic effort cost, payout `0.5·x_j` and the
/// convexifying term `2x_j²`; equilibria (0, 0) and (1/6, 1/6).
pub fn search() -> Fixture {
    let f1 = poly(2, &[(1.0, &[3, 0]), (-0.5, &[1, 1]), (2.0, &[0, 2])]);
    let f2 = poly(2, &[(1.0, &[0, 3]), (-0.5, &[1, 1]), (2.0, &[2, 0])]);
    let game = Game::new(vec![1, 1], vec![f1, f2], shared(Polytope::boxed(&[0.0, 0.0], &[1.0, 1.0])), 7.0)
        .expect("valid fixture");
    Fixture {
        name: "search",
        game,
        eps1: 0.01,
        eps2: 0.01,
        known_ne: vec![vec![0.0, 0.0], vec![1.0 / 6.0, 1.0 / 6.0]],
        reported_eps: None,
    }
}

fn pollution(betas: &[f64]) -> Vec<Polynomial> {
    let n = betas.len();
    // ½(Σxₖ)²
    let mut terms: Vec<(f64, Vec<u32>)> = Vec::new();
    for a in 0..n {
        for b in a..n {
            let mut e = vec![0u32; n];
            e[a] += 1;
            e[b] += 1;
            terms.push((if a == b { 0.5 } else { 1.0 }, e));
        }
    }
    betas
        .iter()
        .enumerate()
        .map(|(i, &beta)| {
            let mut t = terms.clone();
            let mut e = vec![0u32; n];
            e[i] = 1;
            t.push((-beta, e));
            let refs: Vec<(f64, &[u32])> = t.iter().map(|(c, e)| (*c, e.as_slice())).collect();
            poly(n, &refs)
        })
        .collect()
}

/// Two-player pollution game; equilibria `{(1/10, 1)} ∪ {(t, 5/2(1−t)) : t ∈ [14/15, 1]}`.
pub fn ex54() -> Fixture {
    let x = hrep(
        2,
        &[(&[-1.0, 0.0], 0.0), (&[0.0, -1.0], 0.0), (&[1.0, 0.0], 1.0), (&[0.0, 1.0], 1.0), (&[1.0, 0.4], 1.0)],
    );
    let game = Game::new(vec![1, 1], pollution(&[1.1, 2.0]), shared(x), 2.1).expect("valid fixture");
    let mut known_ne = vec![vec![0.1, 1.0]];
    for t in [14.0 / 15.0, 0.95, 0.9667, 0.9833, 1.0] {
        known_ne.push(vec![t, 2.5 * (1.0 - t)]);
    }
    Fixture { name: "ex54", game, eps1: 0.01, eps2: 0.01, known_ne, reported_eps: None }
}

/// Three-player pollution game.
pub fn ex55() -> Fixture {
    let x = hrep(
        3,
        &[
            (&[-1.0, 0.0, 0.0], 0.0),
            (&[0.0, -1.0, 0.0], 0.0),
            (&[0.0, 0.0, -1.0], 0.0),
            (&[1.0, 0.0, 0.0], 1.0),
            (&[0.0, 1.0, 0.0], 1.0),
            (&[0.0, 0.0, 1.0], 1.0),
            (&[1.0, 0.6, 0.4], 1.0),
        ],
    );
    let game = Game::new(vec![1, 1, 1], pollution(&[1.1, 1.3, 3.2]), shared(x), 9.8).expect("valid fixture");
    Fixture { name: "ex55", game, eps1: 0.01, eps2: 0.01, known_ne: ex55_equilibria(), reported_eps: Some(0.1325) }
}

/// Equilibria of the three-player pollution game. With `S = x₁+x₂+x₃`, each
/// best response is `clip(βᵢ − S₋ᵢ, 0, uᵢ)` where `uᵢ` is the largest value
/// the shared row allows. This gives the point (0, 0.3, 1) and the triangle
/// on the shared facet where `S ≤ 1.1`, with vertices (14/15, 0, 1/6),
/// (1, 0, 0) and (0.85, 0.25, 0).
fn ex55_equilibria() -> Vec<Vec<f64>> {
    let tri = [vec![14.0 / 15.0, 0.0, 1.0 / 6.0], vec![1.0, 0.0, 0.0], vec![0.85, 0.25, 0.0]];
    let centroid = (0..3).map(|k| tri.iter().map(|v| v[k]).sum::<f64>() / 3.0).collect();
    let mut out = vec![vec![0.0, 0.3, 1.0]];
    out.extend(tri);
    out.push(centroid);
    out
}

/// Zero costs on [0, 1]²: every feasible point is an equilibrium.
pub fn zero() -> Fixture {
    let z = Polynomial::zero(2);
    let game = Game::new(vec![1, 1], vec![z.clone(), z], shared(Polytope::boxed(&[0.0, 0.0], &[1.0, 1.0])), 1.0)
        .expect("valid fixture");
    Fixture {
        name: "zero",
        game,
        eps1: 0.01,
        eps2: 0.01,
        known_ne: vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![0.3, 0.7]],
        reported_eps: None,
    }
}
