//! Proper complete vertex colourings of `K_{r²+r+1} □ K_q` built from finite
//! projective planes.
//!
//! - [`gf`]: arithmetic in GF(p^e), used to build planes of prime-power order.
//! - [`plane`]: PG(2, r) and a verifier for the projective-plane axioms.
//! - [`colouring`]: colour matrices and the proper/complete membership test.
//! - [`constructions`]: the plane-based colouring and the one-colour extension.
//! - [`bounds`]: closed-form lower/upper bounds and known values.
//! - [`solver`]: exact branch-and-bound oracle for small grids.

pub mod bounds;
pub mod colouring;
pub mod constructions;
pub mod gf;
pub mod plane;
pub mod solver;

pub use bounds::{known_value, theorem4_bounds, upper_bound_chain, BoundsReport};
pub use colouring::{verify_matrix, Colour, ColourMatrix, CompletenessMode, VerificationReport};
pub use constructions::{build_colouring, build_ms, extend_plus_one};
pub use gf::{Field, FieldElement};
pub use plane::{PlaneReport, ProjectivePlane};
pub use solver::{achromatic_exact, Solution};
