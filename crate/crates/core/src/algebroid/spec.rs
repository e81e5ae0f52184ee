use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::binomial;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gradedpoly::{CoefficientMode, RingSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    /// `A = Z_(p)[a_1..a_p]`, `Gamma = A[r]`.
    Full,
    /// `A = Z_(p)[a_1..a_{p-1}]`, `Gamma = A[r]/(r^p + a_1 r^{p-1} + ... + a_{p-1} r)`.
    Reduced,
}

/// A presentation of the algebroid, possibly reduced modulo `I_k = (p, a_1, .., a_k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebroidSpec {
    prime: u64,
    variant: Variant,
    ideal: Option<usize>,
    base: Arc<RingSpec>,
    gamma_ring: Arc<RingSpec>,
    /// `eta[i][j]` is the coefficient of `a_j r^(i-j)` in `eta_R(a_i)` (`a_0 = 1`).
    eta: Vec<Vec<BigInt>>,
}

impl AlgebroidSpec {
    pub fn new(prime: u64, variant: Variant) -> Arc<Self> {
        AlgebroidSpec::with(prime, variant, None, CoefficientMode::LocalZ5)
    }

    pub fn full() -> Arc<Self> {
        AlgebroidSpec::new(crate::PRIME, Variant::Full)
    }

    pub fn reduced() -> Arc<Self> {
        AlgebroidSpec::new(crate::PRIME, Variant::Reduced)
    }

    fn with(prime: u64, variant: Variant, ideal: Option<usize>, mode: CoefficientMode) -> Arc<Self> {
        let n = match variant {
            Variant::Full => prime as usize,
            Variant::Reduced => prime as usize - 1,
        };
        let kill: Vec<usize> = (0..ideal.unwrap_or(0).min(n)).collect();
        let base = RingSpec::curve_coefficients(prime, n, mode).quotient(mode, &kill);
        let gamma_ring = base.extend(&["r"], &[2 * (prime as u32 - 1)]);
        let eta = (0..=n)
            .map(|i| (0..=i).map(|j| binomial(BigInt::from(prime - j as u64), BigInt::from(i - j))).collect())
            .collect();
        Arc::new(AlgebroidSpec { prime, variant, ideal, base, gamma_ring, eta })
    }

    /// Reduction modulo `I_k`; coefficients become `F_p` and `a_1..a_k` are killed.
    pub fn quotient(&self, k: usize) -> Result<Arc<Self>> {
        if k > self.prime as usize - 1 {
            return Err(Error::IndexOutOfRange(k));
        }
        let k = self.ideal.map_or(k, |j| j.max(k));
        let mut s = AlgebroidSpec::with(self.prime, self.variant, Some(k), CoefficientMode::F5);
        Arc::make_mut(&mut s).eta = self.eta.clone();
        Ok(s)
    }

    /// Same presentation with coefficients in another domain (only for unreduced specs).
    pub fn with_mode(&self, mode: CoefficientMode) -> Arc<Self> {
        let mut s = AlgebroidSpec::with(self.prime, self.variant, self.ideal, mode);
        Arc::make_mut(&mut s).eta = self.eta.clone();
        s
    }

    /// Copy with one structure constant of `eta_R` overwritten (used as a negative control).
    pub fn with_eta_constant(&self, i: usize, j: usize, value: i64) -> Arc<Self> {
        let mut s = self.clone();
        s.eta[i][j] = BigInt::from(value);
        Arc::new(s)
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// `Some(k)` for the quotient by `I_k`, `None` for the integral presentation.
    pub fn ideal(&self) -> Option<usize> {
        self.ideal
    }

    pub fn mode(&self) -> CoefficientMode {
        self.base.mode()
    }

    /// The coefficient ring `A` (with killed generators in a quotient).
    pub fn base(&self) -> &Arc<RingSpec> {
        &self.base
    }

    /// `A[r]`, used for parsing and printing elements of `Gamma`.
    pub fn gamma_ring(&self) -> &Arc<RingSpec> {
        &self.gamma_ring
    }

    pub fn ngens(&self) -> usize {
        self.base.ngens()
    }

    pub fn r_degree(&self) -> u32 {
        2 * (self.prime as u32 - 1)
    }

    /// Largest `r`-exponent in normal form, if bounded.
    pub fn max_r_exponent(&self) -> Option<u32> {
        match self.variant {
            Variant::Full => None,
            Variant::Reduced => Some(self.prime as u32 - 1),
        }
    }

    pub fn eta_constant(&self, i: usize, j: usize) -> &BigInt {
        &self.eta[i][j]
    }

    pub fn label(&self) -> String {
        let v = match self.variant {
            Variant::Full => "full",
            Variant::Reduced => "reduced",
        };
        match self.ideal {
            Some(k) => format!("{v}/I{k}"),
            None => format!("{v}/{}", self.mode()),
        }
    }
}

impl fmt::Display for AlgebroidSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quotient_levels() {
        let q = AlgebroidSpec::reduced().quotient(1).unwrap();
        assert_eq!(q.mode(), CoefficientMode::F5);
        assert!(q.base().is_killed(0));
        assert!(!q.base().is_killed(1));
        assert_eq!(q.label(), "reduced/I1");
        assert_eq!(AlgebroidSpec::full().quotient(5), Err(Error::IndexOutOfRange(5)));
        let q0 = AlgebroidSpec::full().quotient(0).unwrap();
        assert!((0..5).all(|i| !q0.base().is_killed(i)));
    }

    #[test]
    fn eta_constants_are_binomials() {
        let s = AlgebroidSpec::full();
        assert_eq!(s.eta_constant(4, 0), &BigInt::from(5));
        assert_eq!(s.eta_constant(4, 1), &BigInt::from(4));
        assert_eq!(s.eta_constant(3, 1), &BigInt::from(6));
        assert_eq!(s.eta_constant(5, 5), &BigInt::from(1));
    }
}
