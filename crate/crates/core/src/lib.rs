//! Exact cohomology of the Hopf algebroid corepresenting the curves
//! `y^4 = x^5 + a1 x^4 + ... + a5` under translations `x -> x + r`, at the
//! prime 5.
//!
//! The crate is organised bottom-up: [`coefficients`] (exact rationals and
//! integer/local linear algebra), [`gradedpoly`] (graded polynomials),
//! [`algebroid`] (structure maps), [`cobar`] (cochains, differentials,
//! cohomology, products and Massey products), [`bockstein`] (filtered
//! spectral sequence pages), [`invariants`] (the ring `H^0`), [`report`]
//! (charts) and [`verify`] (the identity suite).

pub mod algebroid;
pub mod bockstein;
pub mod cobar;
pub mod coefficients;
pub mod error;
pub mod gradedpoly;
pub mod invariants;
pub mod report;
pub mod verify;

pub use error::{Error, Result};

/// The prime everything is localised at.
pub const PRIME: u64 = 5;
