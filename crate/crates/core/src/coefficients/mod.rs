//! Exact coefficient arithmetic and integer linear algebra.

pub mod intmatrix;
pub mod rational;
pub mod smith;
pub mod sparse;

pub use intmatrix::{determinant, IntMatrix};
pub use rational::LocalRational;
pub use smith::{hermite_rows, kernel_saturated, smith_normal_form, SmithDecomposition};
pub use sparse::{local_smith, rank_mod_p, Echelon, LocalRing, LocalSmith, SparseVec};

use crate::error::Result;
use num_bigint::BigInt;

pub fn reduce(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<LocalRational> {
    LocalRational::new(num, den)
}
