//! The algebroid `(A, Gamma)` of translations `x -> x + r`, its reduced form and quotients.

mod axioms;
mod gamma;
mod spec;
mod tensor;

pub use axioms::{check_axioms, AxiomReport};
pub use gamma::{eta_r, eta_r_generator, EtaCache, GammaElement};
pub use spec::{AlgebroidSpec, Variant};
pub use tensor::{psi, TensorElement};

use std::sync::Arc;

use crate::error::Result;

/// `spec` modulo `I_k`.
pub fn quotient(spec: &Arc<AlgebroidSpec>, k: usize) -> Result<Arc<AlgebroidSpec>> {
    spec.quotient(k)
}

/// Bring `g` into normal form (a no-op for elements built through the public constructors).
pub fn reduce_gamma(g: &GammaElement) -> GammaElement {
    GammaElement::from_terms(g.spec(), g.terms().map(|(e, q)| (e, q.clone())))
}
