//! Cobar complex: cochains, differential, products, cohomology and Massey products.

mod cohomology;
mod complex;
mod contract;
mod element;
mod word;

pub use cohomology::{CobarEngine, CohomologyGroup, MasseyProduct, DEFAULT_PRECISION};
pub use complex::{cochain_basis, modulus_for, CobarComplex, Slice};
pub use contract::{big_from_element, big_to_element, BigVec, Cell, Contraction, ModelSlice};
pub use element::CobarElement;
pub use word::{parse_word, words, CobarWord};
