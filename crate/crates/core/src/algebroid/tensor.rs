use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_integer::binomial;

use super::gamma::{EtaCache, GammaElement};
use super::spec::AlgebroidSpec;
use crate::coefficients::LocalRational;
use crate::error::{Error, Result};
use crate::gradedpoly::Polynomial;

/// Element of `Gamma (x)_A ... (x)_A Gamma` in normal form: left coefficients
/// times words of `r`-exponents. Exponent 0 stands for the unit factor.
#[derive(Clone, PartialEq, Eq)]
pub struct TensorElement {
    spec: Arc<AlgebroidSpec>,
    arity: usize,
    terms: BTreeMap<Vec<u32>, Polynomial>,
}

impl TensorElement {
    pub fn zero(spec: &Arc<AlgebroidSpec>, arity: usize) -> Self {
        TensorElement { spec: spec.clone(), arity, terms: BTreeMap::new() }
    }

    pub fn spec(&self) -> &Arc<AlgebroidSpec> {
        &self.spec
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Polynomial)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, word: &[u32]) -> Polynomial {
        self.terms.get(word).cloned().unwrap_or_else(|| Polynomial::zero(self.spec.base()))
    }

    pub fn add_term(&mut self, word: Vec<u32>, q: &Polynomial) {
        assert_eq!(word.len(), self.arity);
        if let Some(max) = self.spec.max_r_exponent() {
            assert!(word.iter().all(|&e| e <= max), "word {word:?} not in normal form");
        }
        if q.is_zero() {
            return;
        }
        let new = match self.terms.remove(&word) {
            Some(old) => old.add(q).expect("same base ring"),
            None => q.clone(),
        };
        if !new.is_zero() {
            self.terms.insert(word, new);
        }
    }

    pub fn add(&self, other: &TensorElement) -> Result<TensorElement> {
        if self.spec != other.spec || self.arity != other.arity {
            return Err(Error::SpecMismatch);
        }
        let mut out = self.clone();
        for (w, q) in &other.terms {
            out.add_term(w.clone(), q);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &TensorElement) -> Result<TensorElement> {
        let mut neg = other.clone();
        for q in neg.terms.values_mut() {
            *q = q.neg();
        }
        self.add(&neg)
    }

    /// Normal form of `g_1 (x) g_2 (x) ... (x) g_n`.
    ///
    /// Coefficients to the left of factor `i+1` are moved into factor `i` through
    /// `eta_R` and re-reduced, repeatedly, until every coefficient sits at the far left.
    pub fn from_factors(factors: &[GammaElement], eta: &mut EtaCache) -> Result<TensorElement> {
        let spec = factors.first().ok_or_else(|| Error::DegreeMismatch("empty tensor".into()))?.spec().clone();
        let mut out = TensorElement::zero(&spec, factors.len());
        push_left(factors, Vec::new(), &Polynomial::one(spec.base()), eta, &mut out)?;
        Ok(out)
    }

    /// Counit applied at factor position `i`.
    pub fn epsilon_at(&self, i: usize) -> TensorElement {
        let mut out = TensorElement::zero(&self.spec, self.arity - 1);
        for (w, q) in &self.terms {
            if w[i] == 0 {
                let mut v = w.clone();
                v.remove(i);
                out.add_term(v, q);
            }
        }
        out
    }

    /// Apply `Psi` to factor `i` (only valid on factors that are pure `r`-powers, as in normal form).
    pub fn psi_at(&self, i: usize) -> TensorElement {
        let mut out = TensorElement::zero(&self.spec, self.arity + 1);
        for (w, q) in &self.terms {
            let e = w[i];
            for j in 0..=e {
                let c = LocalRational::from_integer(binomial(e as u64, j as u64));
                let mut v = w.clone();
                v[i] = j;
                v.insert(i + 1, e - j);
                out.add_term(v, &q.scale(&c).expect("integer"));
            }
        }
        out
    }
}

fn push_left(
    factors: &[GammaElement],
    suffix: Vec<u32>,
    coeff: &Polynomial,
    eta: &mut EtaCache,
    out: &mut TensorElement,
) -> Result<()> {
    let (last, rest) = factors.split_last().expect("nonempty");
    for (e, q) in last.terms() {
        let c = q.mul(coeff)?;
        if c.is_zero() {
            continue;
        }
        let mut word = vec![e];
        word.extend_from_slice(&suffix);
        match rest.split_last() {
            None => out.add_term(word, &c),
            Some((prev, earlier)) => {
                // `prev (x) c r^e = prev * eta_R(c) (x) r^e`
                let moved = prev.mul(&eta.eta_poly(&c)?)?;
                let mut fs = earlier.to_vec();
                fs.push(moved);
                push_left(&fs, word, &Polynomial::one(c.ring()), eta, out)?;
            }
        }
    }
    Ok(())
}

/// Coproduct. `r` is primitive, so `Psi(q r^e) = q sum_j binom(e, j) r^j (x) r^{e-j}`.
pub fn psi(g: &GammaElement) -> TensorElement {
    let mut out = TensorElement::zero(g.spec(), 2);
    for (e, q) in g.terms() {
        for j in 0..=e {
            let c = LocalRational::from_integer(binomial(e as u64, j as u64));
            out.add_term(vec![j, e - j], &q.scale(&c).expect("integer"));
        }
    }
    out
}

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, q)| {
                let word: Vec<String> = w
                    .iter()
                    .map(|&e| match e {
                        0 => "1".to_string(),
                        1 => "r".to_string(),
                        _ => format!("r^{e}"),
                    })
                    .collect();
                format!("({q})*[{}]", word.join("|"))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tensor[{}]({self})", self.spec.label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(spec: &Arc<AlgebroidSpec>) -> Polynomial {
        Polynomial::one(spec.base())
    }

    #[test]
    fn r_is_primitive() {
        let s = AlgebroidSpec::full();
        let p = psi(&GammaElement::r_power(&s, 1));
        assert_eq!(p.coefficient(&[1, 0]), one(&s));
        assert_eq!(p.coefficient(&[0, 1]), one(&s));
        assert_eq!(p.terms().count(), 2);
    }

    #[test]
    fn coproduct_of_r5() {
        let s = AlgebroidSpec::full();
        let p = psi(&GammaElement::r_power(&s, 5));
        let coeffs: Vec<String> = (0..=5).map(|j| p.coefficient(&[5 - j, j]).to_string()).collect();
        assert_eq!(coeffs, ["1", "5", "10", "10", "5", "1"]);
    }

    #[test]
    fn moving_a_coefficient_left() {
        // r (x) a1 r = r eta_R(a1) (x) r = a1 r (x) r + 5 r^2 (x) r
        let s = AlgebroidSpec::full();
        let mut eta = EtaCache::new(&s);
        let a1r = GammaElement::parse(&s, "a1*r").unwrap();
        let t = TensorElement::from_factors(&[GammaElement::r_power(&s, 1), a1r], &mut eta).unwrap();
        assert_eq!(t.coefficient(&[1, 1]).to_string(), "a1");
        assert_eq!(t.coefficient(&[2, 1]).to_string(), "5");
        assert_eq!(t.terms().count(), 2);
    }

    #[test]
    fn relation_is_a_hopf_ideal() {
        // Psi of the monic relation vanishes in the reduced tensor square
        let s = AlgebroidSpec::reduced();
        let mut eta = EtaCache::new(&s);
        let full = AlgebroidSpec::full();
        let rel = GammaElement::parse(&full, "r^5 + a1*r^4 + a2*r^3 + a3*r^2 + a4*r").unwrap();
        let mut total = TensorElement::zero(&s, 2);
        for (w, q) in psi(&rel).terms() {
            let q = q.reinterpret(full.base()).unwrap();
            let q = Polynomial::from_terms(
                s.base(),
                q.terms().map(|(m, c)| (s.base().monomial(&m.exps()[..4]), c.clone())),
            )
            .unwrap();
            let f = [
                GammaElement::from_terms(&s, [(w[0], q)]),
                GammaElement::r_power(&s, w[1]),
            ];
            total = total.add(&TensorElement::from_factors(&f, &mut eta).unwrap()).unwrap();
        }
        assert!(total.is_zero(), "{total}");
    }
}
