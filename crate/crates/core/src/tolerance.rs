//! Numerical tolerances shared by every stage of the pipeline.
//!
//! | name          | value | used for                                              |
//! |---------------|-------|-------------------------------------------------------|
//! | `GEO`         | 1e-9  | tightness and membership tests on polyhedra           |
//! | `KKT`         | 1e-8  | stationarity, complementarity and duality-gap targets |
//! | `REPORT`      | 1e-6  | slack added to epsilon when replaying the NE oracle   |
//! | `FLAT`        | 1e-7  | relative width below which a point cloud is flattened |

/// Tightness / membership tolerance for polyhedral predicates.
pub const GEO: f64 = 1e-9;

/// Target for KKT residuals and the barrier duality gap.
pub const KKT: f64 = 1e-8;

/// Slack absorbed by the epsilon-NE oracle when checking computed regions.
pub const REPORT: f64 = 1e-6;

/// Relaxation applied to the convex cost constraint inside projection
/// subproblems. Feasible sets that are single points (or have no Slater point)
/// get a strictly feasible neighbourhood of this size in function value.
pub const COST_RELAX: f64 = 1e-9;

/// Point clouds thinner than this (relative to their magnitude) along some
/// direction are projected onto their affine hull before hull computation.
pub const FLAT: f64 = 1e-7;
