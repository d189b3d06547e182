//! Parcel-based urban density metrics.
//!
//! The crate computes overall density (OD), population-weighted density (PWD)
//! and density-weighted population (DWP) for a region split into parcels,
//! checks how PWD responds to refinement of the parcel map, and evaluates a set
//! of closed-form synthetic-city scenarios in which PWD behaves
//! counter-intuitively. Every closed form in [`scenarios`] has a brute-force
//! counterpart that rebuilds the parcel table and runs it through
//! [`density::pwd`].
//!
//! Units are fixed throughout: areas in hectares, densities in persons per
//! hectare. Kilometre inputs only appear in [`scenarios::corridor`].

pub mod density;
pub mod error;
pub mod ingest;
pub mod means;
pub mod numfmt;
pub mod report;
pub mod scenarios;
pub mod subdivision;

pub use density::{
    density_report, dwp, overall_density, pwd, pwd_gap_bound, DensityReport, GapBound, Parcel,
    ParcelTable,
};
pub use error::{Error, Result};
pub use means::{harmonic_mean, weighted_arithmetic_mean, weighted_harmonic_mean};
pub use subdivision::{
    check_monotonicity, coarsen, pwd_of_equal_population_subdivision, validate_refinement,
    Monotonicity, RefinementMap, Violation, ViolationKind,
};

/// Relative tolerance used for exact-in-principle comparisons on reports.
pub const REL_TOL: f64 = 1e-12;

/// Relative tolerance for parent/child conservation sums.
pub const CONSERVATION_TOL: f64 = 1e-9;

/// `|a - b| <= tol * max(|a|, |b|)`.
pub fn approx_eq_rel(a: f64, b: f64, tol: f64) -> bool {
    let scale = a.abs().max(b.abs());
    (a - b).abs() <= tol * scale
}
