//! Polyhedral approximation of Nash equilibrium sets of convex games.
//!
//! Given an N-player game with polynomial convex costs over a shared
//! polytope (or independent convex strategy sets), [`solve`] computes a
//! finite union of polytopes `X` with `NE ⊆ X ⊆ εNE` for
//! `ε = ε₁ + 2Lε₂`. Each player's cost is turned into the vector problem
//! `min (x₋ᵢ, −x₋ᵢ, fᵢ(x))`, whose upper image is approximated by a Benson
//! outer/inner sandwich; preimages of its maximal efficient faces are
//! approximated to `ε₂` in the L1 norm and intersected across players.

pub mod benson;
pub mod efficient;
pub mod equilibrium;
pub mod error;
pub mod game;
pub mod geometry;
pub mod io;
pub mod projection;
pub mod solver;
pub mod tolerance;
pub mod vecops;

pub use benson::{initialize, initialize_independent, refine, BensonOptions, UpperImageApprox};
pub use efficient::{is_efficient, maximal_efficient_faces, EfficientFace};
pub use equilibrium::{
    brute_force_ne, epsilon_ne_oracle, intersect_regions, player_region, solve, solve_with, RegionUnion, RunReport,
    SolveOptions,
};
pub use error::{BensonError, GameError, GeometryError, IoError, PipelineError, ProjectionError, SolverError, Stage};
pub use game::{ConstraintSet, Game, PlayerSet, Polynomial, SliceIndex, Term};
pub use geometry::{FaceDescriptor, Halfspace, Polytope, VRep};
pub use projection::{approximate_projection, support_step, ProjectionInstance, ProjectionResult};
pub use solver::{lp_solve, nlp_solve, pascoletti_serafini, NlpProblem, NlpSolution, Status};
