//! Diagonally distorted grids T_δ(ℤ^d), the lattices A_d and A*_d, and the
//! Freudenthal triangulation.
//!
//! The crate evaluates Delaunay protection, power protection, thickness and
//! aspect ratio of the distorted grid in two independent ways: closed forms
//! in [`closed_forms`], and coordinate geometry plus exhaustive lattice
//! enumeration in [`geometry`] and [`verification`]. The two are compared by
//! the tests and by the `distgrid verify` command.
//!
//! ```
//! use distgrid::{closed_forms, Delta};
//!
//! // At δ = 1/√(d+1) the distorted grid is the permutahedral lattice.
//! let crit = Delta::critical(2);
//! let np = closed_forms::normalized_protection(2, crit).unwrap();
//! assert!((np - 1.0).abs() < 1e-12);
//! ```

pub mod closed_forms;
pub mod error;
pub mod freudenthal;
pub mod geometry;
pub mod lattice;
pub mod params;
pub mod report;
pub mod sweep;
pub mod verification;

pub use error::{Error, Result};
pub use geometry::{Point, Simplex, SimplexMeasures};
pub use params::{Delta, DistortionParams, Regime};
pub use report::OracleReport;
