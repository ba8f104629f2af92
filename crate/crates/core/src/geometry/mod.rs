//! Polyhedral calculus: representation conversion, face enumeration,
//! intersections, Minkowski sums with L1 balls, and L1 distances.

pub mod dd;
mod faces;
mod ops;
mod polytope;

pub use faces::{faces, FaceDescriptor};
pub use ops::{
    chebyshev_radius, intersect, intersect_halfspaces, is_nonempty, l1_distance_to_polytope, l1_separation,
    minkowski_l1_ball, remove_redundant, sample_in_polytope, support, unit_direction, vrep_contains,
};
pub use polytope::{affine_dimension, to_hrep, to_vrep, Halfspace, HomogenizedHrep, Polytope, VRep};
