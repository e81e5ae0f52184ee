use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::spec::AlgebroidSpec;
use crate::coefficients::LocalRational;
use crate::error::{Error, Result};
use crate::gradedpoly::{parse_polynomial, Monomial, Polynomial};

/// Element of `Gamma` in normal form: `sum_e q_e r^e` with left coefficients `q_e` in `A`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GammaElement {
    spec: Arc<AlgebroidSpec>,
    terms: BTreeMap<u32, Polynomial>,
}

impl GammaElement {
    pub fn zero(spec: &Arc<AlgebroidSpec>) -> Self {
        GammaElement { spec: spec.clone(), terms: BTreeMap::new() }
    }

    /// `eta_L(q)`.
    pub fn from_poly(spec: &Arc<AlgebroidSpec>, q: Polynomial) -> Self {
        GammaElement::from_terms(spec, [(0, q)])
    }

    pub fn one(spec: &Arc<AlgebroidSpec>) -> Self {
        GammaElement::from_poly(spec, Polynomial::one(spec.base()))
    }

    /// `r^e`, reduced if necessary.
    pub fn r_power(spec: &Arc<AlgebroidSpec>, e: u32) -> Self {
        GammaElement::from_terms(spec, [(e, Polynomial::one(spec.base()))])
    }

    /// Sum of `q_e r^e`, brought into normal form.
    pub fn from_terms(spec: &Arc<AlgebroidSpec>, terms: impl IntoIterator<Item = (u32, Polynomial)>) -> Self {
        let mut g = GammaElement::zero(spec);
        for (e, q) in terms {
            g.add_term(e, &q);
        }
        g.reduce();
        g
    }

    fn add_term(&mut self, e: u32, q: &Polynomial) {
        if q.is_zero() {
            return;
        }
        let new = match self.terms.remove(&e) {
            Some(old) => old.add(q).expect("coefficients share the base ring"),
            None => q.clone(),
        };
        if !new.is_zero() {
            self.terms.insert(e, new);
        }
    }

    /// Apply `r^p = -(a_1 r^{p-1} + ... + a_{p-1} r)` until all exponents are below `p`.
    fn reduce(&mut self) {
        let Some(max) = self.spec.max_r_exponent() else { return };
        let p = self.spec.prime() as u32;
        let base = self.spec.base().clone();
        while let Some((&e, _)) = self.terms.iter().next_back() {
            if e <= max {
                break;
            }
            let q = self.terms.remove(&e).expect("present");
            for i in 1..p as usize {
                let ai = Polynomial::generator(&base, i - 1);
                let t = q.mul(&ai).expect("same ring").neg();
                self.add_term(e - i as u32, &t);
            }
        }
    }

    pub fn spec(&self) -> &Arc<AlgebroidSpec> {
        &self.spec
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (u32, &Polynomial)> {
        self.terms.iter().map(|(&e, q)| (e, q))
    }

    pub fn coefficient(&self, e: u32) -> Polynomial {
        self.terms.get(&e).cloned().unwrap_or_else(|| Polynomial::zero(self.spec.base()))
    }

    /// Common internal degree, `None` if zero or inhomogeneous.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let rd = self.spec.r_degree();
        let mut degs = self.terms.iter().map(|(&e, q)| q.homogeneous_degree().map(|d| d + rd * e));
        let d = degs.next()??;
        for x in degs {
            if x != Some(d) {
                return None;
            }
        }
        Some(d)
    }

    fn check(&self, other: &GammaElement) -> Result<()> {
        if self.spec == other.spec {
            Ok(())
        } else {
            Err(Error::SpecMismatch)
        }
    }

    pub fn add(&self, other: &GammaElement) -> Result<GammaElement> {
        self.check(other)?;
        let mut out = self.clone();
        for (&e, q) in &other.terms {
            out.add_term(e, q);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &GammaElement) -> Result<GammaElement> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> GammaElement {
        GammaElement { spec: self.spec.clone(), terms: self.terms.iter().map(|(&e, q)| (e, q.neg())).collect() }
    }

    pub fn mul(&self, other: &GammaElement) -> Result<GammaElement> {
        self.check(other)?;
        let mut out = GammaElement::zero(&self.spec);
        for (&e1, q1) in &self.terms {
            for (&e2, q2) in &other.terms {
                out.add_term(e1 + e2, &q1.mul(q2)?);
            }
        }
        out.reduce();
        Ok(out)
    }

    /// Multiply by a left coefficient.
    pub fn scale(&self, q: &Polynomial) -> Result<GammaElement> {
        let mut out = GammaElement::zero(&self.spec);
        for (&e, c) in &self.terms {
            out.add_term(e, &c.mul(q)?);
        }
        Ok(out)
    }

    pub fn scale_rational(&self, c: &LocalRational) -> Result<GammaElement> {
        let mut out = GammaElement::zero(&self.spec);
        for (&e, q) in &self.terms {
            out.add_term(e, &q.scale(c)?);
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<GammaElement> {
        let mut acc = GammaElement::one(&self.spec);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Counit: set `r = 0`.
    pub fn epsilon(&self) -> Polynomial {
        self.coefficient(0)
    }

    /// As a polynomial in `A[r]`.
    pub fn to_polynomial(&self) -> Polynomial {
        let ring = self.spec.gamma_ring();
        let n = self.spec.ngens();
        let mut terms = Vec::new();
        for (&e, q) in &self.terms {
            for (m, c) in q.terms() {
                let mut exps = m.exps().to_vec();
                exps.push(e as u16);
                terms.push((ring.monomial(&exps), c.clone()));
            }
        }
        debug_assert_eq!(ring.ngens(), n + 1);
        Polynomial::from_terms(ring, terms).expect("coefficients already normalised")
    }

    /// From a polynomial in `A[r]`.
    pub fn from_polynomial(spec: &Arc<AlgebroidSpec>, p: &Polynomial) -> Result<GammaElement> {
        if p.ring().names() != spec.gamma_ring().names() {
            return Err(Error::RingMismatch);
        }
        let n = spec.ngens();
        let mut g = GammaElement::zero(spec);
        for (m, c) in p.terms() {
            let q = Polynomial::monomial(spec.base(), spec.base().monomial(&m.exps()[..n]), c.clone())?;
            g.add_term(m.exp(n) as u32, &q);
        }
        g.reduce();
        Ok(g)
    }

    /// Parse a literal such as `"a4*r + a3*r^2 + a2*r^3"`.
    pub fn parse(spec: &Arc<AlgebroidSpec>, text: &str) -> Result<GammaElement> {
        let p = parse_polynomial(spec.gamma_ring(), text)?;
        GammaElement::from_polynomial(spec, &p)
    }
}

impl fmt::Display for GammaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = self.spec.base().names();
        let mut first = true;
        for (&e, q) in &self.terms {
            for (m, c) in q.terms().rev() {
                let neg = c.signum() < 0;
                let abs = if neg { -c } else { c.clone() };
                if first {
                    if neg {
                        write!(f, "-")?;
                    }
                } else {
                    write!(f, "{}", if neg { " - " } else { " + " })?;
                }
                first = false;
                let mut factors = Vec::new();
                if !abs.is_one() || (m.is_one() && e == 0) {
                    factors.push(abs.to_string());
                }
                if !m.is_one() {
                    factors.push(m.display(names));
                }
                match e {
                    0 => {}
                    1 => factors.push("r".into()),
                    _ => factors.push(format!("r^{e}")),
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for GammaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gamma[{}]({self})", self.spec.label())
    }
}

/// `eta_R(a_i)` for generator index `i` (0-based, so `a_{i+1}`).
pub fn eta_r_generator(spec: &Arc<AlgebroidSpec>, i: usize) -> GammaElement {
    let base = spec.base();
    let n = i + 1;
    let mut terms = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let c = LocalRational::from_integer(spec.eta_constant(n, j).clone());
        let aj = if j == 0 { Polynomial::one(base) } else { Polynomial::generator(base, j - 1) };
        terms.push(((n - j) as u32, aj.scale(&c).expect("integer constant")));
    }
    GammaElement::from_terms(spec, terms)
}

/// Right unit `eta_R : A -> Gamma`, the ring map induced by `x -> x + r`.
pub fn eta_r(spec: &Arc<AlgebroidSpec>, x: &Polynomial) -> Result<GammaElement> {
    if x.ring() != spec.base() {
        return Err(Error::RingMismatch);
    }
    let mut cache = EtaCache::new(spec);
    cache.eta_poly(x)
}

/// Memoised right unit on monomials.
pub struct EtaCache {
    spec: Arc<AlgebroidSpec>,
    generators: Vec<GammaElement>,
    memo: std::collections::HashMap<Monomial, GammaElement>,
}

impl EtaCache {
    pub fn new(spec: &Arc<AlgebroidSpec>) -> Self {
        let generators = (0..spec.ngens()).map(|i| eta_r_generator(spec, i)).collect();
        EtaCache { spec: spec.clone(), generators, memo: Default::default() }
    }

    pub fn eta_monomial(&mut self, m: &Monomial) -> GammaElement {
        if let Some(g) = self.memo.get(m) {
            return g.clone();
        }
        let degs = self.spec.base().degrees().to_vec();
        let g = match (0..m.exps().len()).find(|&i| m.exp(i) > 0) {
            None => GammaElement::one(&self.spec),
            Some(i) => {
                let rest = m.lower(i, degs[i]).expect("positive exponent");
                let h = self.eta_monomial(&rest);
                h.mul(&self.generators[i]).expect("same spec")
            }
        };
        self.memo.insert(m.clone(), g.clone());
        g
    }

    pub fn eta_poly(&mut self, x: &Polynomial) -> Result<GammaElement> {
        let mut out = GammaElement::zero(&self.spec);
        for (m, c) in x.terms() {
            out = out.add(&self.eta_monomial(m).scale_rational(c)?)?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebroid::AlgebroidSpec;

    #[test]
    fn right_unit_on_generators() {
        let s = AlgebroidSpec::full();
        let show = |i| eta_r_generator(&s, i).to_string();
        assert_eq!(show(0), "a1 + 5*r");
        assert_eq!(show(2), "a3 + 3*a2*r + 6*a1*r^2 + 10*r^3");
        assert_eq!(show(3), "a4 + 2*a3*r + 3*a2*r^2 + 4*a1*r^3 + 5*r^4");
        assert_eq!(show(4), "a5 + a4*r + a3*r^2 + a2*r^3 + a1*r^4 + r^5");
    }

    #[test]
    fn quotient_right_unit() {
        let q = AlgebroidSpec::reduced().quotient(1).unwrap();
        let a3 = Polynomial::var(q.base(), "a3").unwrap();
        assert_eq!(eta_r(&q, &a3).unwrap().to_string(), "a3 + 3*a2*r");
    }

    #[test]
    fn relation_reduces_r5() {
        let s = AlgebroidSpec::reduced();
        assert_eq!(GammaElement::r_power(&s, 5).to_string(), "-a4*r - a3*r^2 - a2*r^3 - a1*r^4");
        assert_eq!(GammaElement::r_power(&s, 4).to_string(), "r^4");
        // r^6 equals r times the reduced r^5, reduced again
        let r = GammaElement::r_power(&s, 1);
        let r5 = GammaElement::r_power(&s, 5);
        assert_eq!(GammaElement::r_power(&s, 6), r.mul(&r5).unwrap());
        let r6 = GammaElement::r_power(&s, 6);
        assert!(r6.terms().all(|(e, _)| (1..=4).contains(&e)));
        // r^6 - r * (r^5 + a1 r^4 + ... + a4 r) recovers the relation multiple
        let lhs = GammaElement::parse(&s, "r^6 + a1*r^5 + a2*r^4 + a3*r^3 + a4*r^2").unwrap();
        assert!(lhs.is_zero());
    }

    #[test]
    fn eta_of_c2_is_invariant() {
        let s = AlgebroidSpec::full();
        let c2 = parse_polynomial(s.base(), "-2*a1^2 + 5*a2").unwrap();
        assert_eq!(eta_r(&s, &c2).unwrap(), GammaElement::from_poly(&s, c2));
    }

    #[test]
    fn parse_and_print() {
        let s = AlgebroidSpec::reduced();
        let g = GammaElement::parse(&s, "a4*r + a3*r^2 + a2*r^3").unwrap();
        assert_eq!(g.to_string(), "a4*r + a3*r^2 + a2*r^3");
        assert_eq!(g.homogeneous_degree(), Some(40));
        assert_eq!(GammaElement::parse(&s, &g.to_string()).unwrap(), g);
    }
}
