//! Graded polynomial rings over `Z_(5)`, `F_5`, `Z/5^K` or `Q`.

mod parse;
mod polynomial;
mod ring;

pub use parse::{parse_polynomial, parse_with, ExprContext};
pub use polynomial::{normalize_coefficient, Polynomial};
pub use ring::{graded_piece_basis, CoefficientMode, Monomial, RingSpec};
