//! Exact toric geometry and a finite-difference index solver for the
//! model Dirac operators on the cylinder and the disc.

pub mod error;
pub mod exact;
pub mod lattice;
pub mod polytope;
pub mod character;
pub mod quantize;
pub mod dirac1d;

/// Schema identifier carried by every JSON report.
pub const REPORT_SCHEMA: &str = "toricq.report/1";

pub use error::{Error, Result};
pub use lattice::{complete_to_basis, hermite_normal_form, IntMatrix, UnimodularMatrix, Weight};
pub use character::FormalCharacter;
pub use polytope::{parse_polytope, LatticeBox, Polyhedron};
