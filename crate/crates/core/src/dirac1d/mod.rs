//! Index of the deformed Dirac operator on the cylinder and the disc,
//! one circle mode at a time.
//!
//! On the mode `tau` the operator reduces to `[[0, Aᵀ], [A, 0]]` with
//! `A = d/dr + W(r)` acting on real functions of the radial coordinate.

mod assemble;
mod index;
mod model;
mod spectrum;

pub use assemble::{
    build_cylinder_operator, build_disc_operator, build_operator, fitted_coefficients, BandedBlock, Layout,
    OperatorMatrix, INTERIOR_MARGIN,
};
pub use index::{
    analytic_zero_mode_count, analyze_grid, compute_index, deformation_sweep, disc_zero_mode_count, model_index,
    probe_acyclicity, product_index, AcyclicityProbe, Chirality, GridAnalysis, IndexResult, Region, SweepEntry,
    SweepResult, SEPARATION, SPECTRUM_WINDOW,
};
pub use model::{
    disc_mu, orbit_length, parse_model_spec, parse_real, smoothstep, Deformation, Grid, ModelKind, ModelSpec1D,
    ProfileMu, DEFAULT_GRID_POINTS, DEFAULT_RADIUS, DEFAULT_T, MAX_WEIGHT, MIN_GRID_POINTS, MIN_RADIUS,
};
