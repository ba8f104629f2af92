//! Game files (TOML) and region files (JSON), both tagged with a schema
//! version. Region coordinates are stored as 17-significant-digit decimal
//! strings so files round-trip bit for bit.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::equilibrium::{RegionUnion, RunReport};
use crate::error::{GameError, IoError};
use crate::game::{ConstraintSet, Fixture, Game, PlayerSet, Polynomial, Term};
use crate::geometry::{Halfspace, Polytope, VRep};

pub const GAME_SCHEMA: &str = "nashset-game/1";
pub const REGION_SCHEMA: &str = "nashset-region/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rows {
    /// Rows of `A` in `Ax ≤ b`.
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlayerSetSpec {
    pub bounds: Rows,
    /// Terms of `g` in `g(xᵢ) ≤ 0`; empty for a pure polytope.
    #[serde(default)]
    pub g: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConstraintSpec {
    Shared(Rows),
    Independent { players: Vec<PlayerSetSpec> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostSpec {
    pub terms: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameFile {
    pub schema: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dims: Vec<usize>,
    pub lipschitz: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps2: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub known_ne: Vec<Vec<f64>>,
    pub costs: Vec<CostSpec>,
    pub constraint: ConstraintSpec,
}

fn rows_of(p: &Polytope) -> Rows {
    let (a, b) = p.constraint_rows();
    Rows { a, b }
}

fn polytope_of(dim: usize, r: &Rows) -> Result<Polytope, IoError> {
    if r.a.len() != r.b.len() {
        return Err(IoError::Parse(format!("{} constraint rows but {} right-hand sides", r.a.len(), r.b.len())));
    }
    let hs = r
        .a
        .iter()
        .zip(&r.b)
        .map(|(n, &o)| {
            if n.len() != dim {
                return Err(IoError::Game(GameError::DimensionMismatch { expected: dim, found: n.len() }));
            }
            Halfspace::new(n.clone(), o).map_err(|e| IoError::Game(e.into()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Polytope::from_hrep(dim, hs).map_err(|e| IoError::Game(e.into()))
}

impl GameFile {
    pub fn from_game(g: &Game) -> Self {
        let constraint = match g.constraint() {
            ConstraintSet::SharedPolytope(p) => ConstraintSpec::Shared(rows_of(p)),
            ConstraintSet::IndependentConvex(sets) => ConstraintSpec::Independent {
                players: sets
                    .iter()
                    .map(|s| PlayerSetSpec { bounds: rows_of(&s.bounds), g: s.g.terms().to_vec() })
                    .collect(),
            },
        };
        Self {
            schema: GAME_SCHEMA.into(),
            name: None,
            dims: g.dims().to_vec(),
            lipschitz: g.lipschitz(),
            eps1: None,
            eps2: None,
            known_ne: Vec::new(),
            costs: g.costs().iter().map(|c| CostSpec { terms: c.terms().to_vec() }).collect(),
            constraint,
        }
    }

    pub fn from_fixture(f: &Fixture) -> Self {
        Self {
            name: Some(f.name.to_string()),
            eps1: Some(f.eps1),
            eps2: Some(f.eps2),
            known_ne: f.known_ne.clone(),
            ..Self::from_game(&f.game)
        }
    }

    pub fn to_game(&self) -> Result<Game, IoError> {
        let total: usize = self.dims.iter().sum();
        let costs = self
            .costs
            .iter()
            .map(|c| Polynomial::new(total, c.terms.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        let constraint = match &self.constraint {
            ConstraintSpec::Shared(r) => ConstraintSet::SharedPolytope(polytope_of(total, r)?),
            ConstraintSpec::Independent { players } => {
                if players.len() != self.dims.len() {
                    return Err(IoError::Parse(format!(
                        "{} strategy sets for {} players",
                        players.len(),
                        self.dims.len()
                    )));
                }
                let sets = players
                    .iter()
                    .zip(&self.dims)
                    .map(|(p, &n)| {
                        Ok(PlayerSet { g: Polynomial::new(n, p.g.clone())?, bounds: polytope_of(n, &p.bounds)? })
                    })
                    .collect::<Result<Vec<_>, IoError>>()?;
                ConstraintSet::IndependentConvex(sets)
            }
        };
        Ok(Game::new(self.dims.clone(), costs, constraint, self.lipschitz)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("game files serialize")
    }

    /// sha256 of the canonical TOML form.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_toml().as_bytes()))
    }
}

pub fn parse_game(text: &str) -> Result<GameFile, IoError> {
    let f: GameFile = toml::from_str(text).map_err(|e| IoError::Parse(e.to_string()))?;
    if f.schema != GAME_SCHEMA {
        return Err(IoError::Schema { expected: GAME_SCHEMA.into(), found: f.schema });
    }
    Ok(f)
}

pub fn read_game(path: &Path) -> Result<GameFile, IoError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| IoError::Read { path: path.display().to_string(), source })?;
    parse_game(&text)
}

pub fn write_text(path: &Path, text: &str) -> Result<(), IoError> {
    std::fs::write(path, text).map_err(|source| IoError::Write { path: path.display().to_string(), source })
}

/// Decimal string with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn parse_f64(s: &str) -> Result<f64, IoError> {
    s.parse::<f64>().map_err(|_| IoError::Parse(format!("invalid number {s:?}")))
}

fn fmt_vec(v: &[f64]) -> Vec<String> {
    v.iter().map(|&x| fmt_f64(x)).collect()
}

fn parse_vec(v: &[String]) -> Result<Vec<f64>, IoError> {
    v.iter().map(|s| parse_f64(s)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfspaceRecord {
    pub normal: Vec<String>,
    pub offset: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PieceRecord {
    pub vertices: Vec<Vec<String>>,
    pub hrep: Vec<HalfspaceRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionMetadata {
    pub game_hash: String,
    pub dim: usize,
    pub eps1: String,
    pub eps2: String,
    pub lipschitz: String,
    pub eps: String,
    pub eps_certified: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<RunReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionFile {
    pub schema: String,
    pub metadata: RegionMetadata,
    pub pieces: Vec<PieceRecord>,
}

impl RegionFile {
    pub fn new(region: &RegionUnion, game_hash: &str, report: &RunReport) -> Self {
        let pieces = region
            .pieces
            .iter()
            .map(|p| PieceRecord {
                vertices: p.vertices().iter().map(|v| fmt_vec(v)).collect(),
                hrep: p
                    .halfspaces()
                    .iter()
                    .map(|h| HalfspaceRecord { normal: fmt_vec(&h.normal), offset: fmt_f64(h.offset) })
                    .collect(),
            })
            .collect();
        Self {
            schema: REGION_SCHEMA.into(),
            metadata: RegionMetadata {
                game_hash: game_hash.into(),
                dim: region.dim,
                eps1: fmt_f64(report.eps1),
                eps2: fmt_f64(report.eps2),
                lipschitz: fmt_f64(report.lipschitz),
                eps: fmt_f64(report.eps),
                eps_certified: fmt_f64(region.eps_certified),
                report: Some(report.clone()),
            },
            pieces,
        }
    }

    pub fn to_region(&self) -> Result<RegionUnion, IoError> {
        let dim = self.metadata.dim;
        let mut pieces = Vec::with_capacity(self.pieces.len());
        for p in &self.pieces {
            let vertices = p.vertices.iter().map(|v| parse_vec(v)).collect::<Result<Vec<_>, _>>()?;
            let hs = p
                .hrep
                .iter()
                .map(|h| Ok(Halfspace { normal: parse_vec(&h.normal)?, offset: parse_f64(&h.offset)? }))
                .collect::<Result<Vec<_>, IoError>>()?;
            if vertices.iter().chain(hs.iter().map(|h| &h.normal)).any(|v| v.len() != dim) {
                return Err(IoError::Parse("piece dimension does not match metadata".into()));
            }
            pieces.push(Polytope::from_parts(dim, hs, VRep { vertices, rays: Vec::new() }));
        }
        Ok(RegionUnion { dim, pieces, eps_certified: parse_f64(&self.metadata.eps_certified)? })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("region files serialize")
    }

    /// Largest violation of a piece's own halfspaces at its vertices.
    pub fn self_consistency(&self) -> Result<f64, IoError> {
        let r = self.to_region()?;
        Ok(r.pieces
            .iter()
            .flat_map(|p| p.vertices().iter().map(move |v| p.violation(v)))
            .fold(0.0, f64::max))
    }
}

pub fn parse_region(text: &str) -> Result<RegionFile, IoError> {
    let f: RegionFile = serde_json::from_str(text).map_err(|e| IoError::Parse(e.to_string()))?;
    if f.schema != REGION_SCHEMA {
        return Err(IoError::Schema { expected: REGION_SCHEMA.into(), found: f.schema });
    }
    Ok(f)
}

pub fn read_region(path: &Path) -> Result<RegionFile, IoError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| IoError::Read { path: path.display().to_string(), source })?;
    parse_region(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{builtin, builtin_names};

    #[test]
    fn fixtures_round_trip_through_toml() {
        for name in builtin_names() {
            let fx = builtin(name).unwrap();
            let f = GameFile::from_fixture(&fx);
            let back = parse_game(&f.to_toml()).unwrap();
            assert_eq!(back, f, "{name}");
            let g = back.to_game().unwrap();
            assert_eq!(g.costs(), fx.game.costs());
            assert_eq!(g.lipschitz(), fx.game.lipschitz());
        }
    }

    #[test]
    fn independent_game_round_trip() {
        let disc = Polynomial::from_terms(2, &[(1.0, &[2, 0]), (1.0, &[0, 2]), (-1.0, &[0, 0])]);
        let sets = vec![
            PlayerSet { g: Polynomial::zero(1), bounds: Polytope::boxed(&[-1.0], &[1.0]) },
            PlayerSet { g: disc, bounds: Polytope::boxed(&[-2.0, -2.0], &[2.0, 2.0]) },
        ];
        let f1 = Polynomial::from_terms(3, &[(1.0, &[2, 0, 0])]);
        let f2 = Polynomial::from_terms(3, &[(1.0, &[0, 2, 0]), (1.0, &[0, 0, 2])]);
        let g = Game::new(vec![1, 2], vec![f1, f2], ConstraintSet::IndependentConvex(sets), 5.0).unwrap();
        let f = GameFile::from_game(&g);
        let back = parse_game(&f.to_toml()).unwrap();
        assert_eq!(back, f);
        assert!(!back.to_game().unwrap().is_shared());
    }

    #[test]
    fn schema_and_parse_errors() {
        let f = GameFile::from_fixture(&builtin("ex51").unwrap());
        let text = f.to_toml().replace(GAME_SCHEMA, "nashset-game/0");
        assert!(matches!(parse_game(&text), Err(IoError::Schema { .. })));
        assert!(matches!(parse_game("dims = ["), Err(IoError::Parse(_))));
    }

    #[test]
    fn unbounded_game_rejected() {
        let mut f = GameFile::from_fixture(&builtin("ex51").unwrap());
        if let ConstraintSpec::Shared(r) = &mut f.constraint {
            r.a.truncate(1);
            r.b.truncate(1);
        }
        assert!(matches!(f.to_game(), Err(IoError::Game(GameError::Unbounded))));
    }

    #[test]
    fn hash_is_stable() {
        let a = GameFile::from_fixture(&builtin("ex51").unwrap());
        let b = GameFile::from_fixture(&builtin("ex51").unwrap());
        assert_eq!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
        assert_ne!(a.hash(), GameFile::from_fixture(&builtin("ex53").unwrap()).hash());
    }

    #[test]
    fn decimal_strings_are_exact() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 1e300, 0.0, std::f64::consts::PI] {
            assert_eq!(parse_f64(&fmt_f64(v)).unwrap().to_bits(), v.to_bits());
        }
    }

    #[test]
    fn region_round_trip() {
        let g = builtin("ex51").unwrap();
        let (x, report) = crate::equilibrium::solve(&g.game, g.eps1, g.eps2).unwrap();
        let gf = GameFile::from_fixture(&g);
        let file = RegionFile::new(&x, &gf.hash(), &report);
        let text = file.to_json();
        let back = parse_region(&text).unwrap();
        assert_eq!(back, file);
        let r = back.to_region().unwrap();
        assert_eq!(r.pieces.len(), x.pieces.len());
        for (a, b) in r.pieces.iter().zip(&x.pieces) {
            assert_eq!(a.vertices(), b.vertices());
            assert_eq!(a.halfspaces(), b.halfspaces());
        }
        assert_eq!(r.eps_certified, x.eps_certified);
        assert!(back.self_consistency().unwrap() <= 1e-9);
        assert_eq!(back.to_json(), text);
    }
}
