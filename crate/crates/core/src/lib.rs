//! Exact computation of motivic Donaldson-Thomas invariants of quivers,
//! optionally with potential via cuts and dimension reduction.
//!
//! The coefficient ring is the localization `Z[v, v^-1, (v^2n - 1)^-1]` of
//! integer polynomials in `v = L^(1/2)`, the formal square root of the
//! Lefschetz class `L = [A^1]`. All arithmetic is exact; equality of motives
//! is equality of canonical reduced fractions.
//!
//! The pipeline builds the stacky generating series of a quiver (with the
//! relation classes coming from a cut of the potential), factorizes it into
//! slope sectors with respect to a rational central charge, and extracts the
//! DT function of each sector through the plethystic logarithm. Closed-form
//! and finite-field oracles cross-check the results.

mod poly;

pub mod combinat;
pub mod doc;
pub mod dtpipe;
pub mod fqoracle;
pub mod motive;
pub mod qtorus;
pub mod quiver;
pub mod stability;

pub use motive::Motive;
pub use qtorus::GradedSeries;
pub use quiver::{Cut, DimVector, Potential, Quiver};
pub use stability::{CentralCharge, SlopeKey};
