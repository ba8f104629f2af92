//! Error types for each stage.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("polyhedron is empty")]
    Empty,
    #[error("polyhedron is not pointed (contains a line)")]
    NotPointed,
    #[error("polyhedron is unbounded")]
    Unbounded,
    #[error("negative radius {0}")]
    NegativeRadius(f64),
    #[error("missing {0} representation")]
    MissingRepresentation(&'static str),
    #[error("zero normal vector in halfspace")]
    ZeroNormal,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GameError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("a game needs at least two players, got {0}")]
    TooFewPlayers(usize),
    #[error("feasible set is unbounded")]
    Unbounded,
    #[error("feasible set is empty")]
    EmptyFeasibleSet,
    #[error("player {player}: strategy set has empty interior")]
    EmptyInterior { player: usize },
    #[error("point is not feasible (violation {violation:.3e})")]
    InfeasiblePoint { violation: f64 },
    #[error("player index {0} out of range")]
    NoSuchPlayer(usize),
    #[error("invalid game: {0}")]
    Invalid(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("slice problem infeasible for reference point {0:?}")]
    InfeasibleSlice(Vec<f64>),
    #[error("problem infeasible")]
    Infeasible,
    #[error("iteration limit reached (kkt residual {kkt_residual:.3e}, gap {gap:.3e})")]
    MaxIterations { kkt_residual: f64, gap: f64 },
    #[error(transparent)]
    Game(#[from] GameError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BensonError {
    #[error("iteration budget of {budget} exhausted; achieved epsilon {achieved:.3e}")]
    IterationBudget { budget: usize, achieved: f64 },
    #[error("constraint set has the wrong variant for this initializer")]
    WrongConstraintKind,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Game(#[from] GameError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProjectionError {
    #[error("projection feasible set is empty (inconsistent face)")]
    InfeasibleFace,
    #[error("iteration budget of {budget} exhausted; certified epsilon {achieved:.3e}")]
    IterationBudget { budget: usize, achieved: f64 },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// Pipeline stage used to annotate failures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Validate,
    Benson,
    Faces,
    Projection,
    Region,
    Intersection,
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Stage::Validate => "validate",
            Stage::Benson => "benson",
            Stage::Faces => "faces",
            Stage::Projection => "projection",
            Stage::Region => "region",
            Stage::Intersection => "intersection",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PipelineError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Assumption(GameError),
    #[error("stage {stage}, player {player}: {message}")]
    Stage { stage: Stage, player: usize, message: String, budget_exhausted: bool },
}

impl PipelineError {
    pub fn stage(stage: Stage, player: usize, err: impl std::fmt::Display) -> Self {
        let message = err.to_string();
        let budget_exhausted = message.contains("budget");
        PipelineError::Stage { stage, player, message, budget_exhausted }
    }
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported schema {found:?} (expected {expected:?})")]
    Schema { expected: String, found: String },
    #[error(transparent)]
    Game(#[from] GameError),
}
