use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use super::ring::{CoefficientMode, Monomial, RingSpec};
use crate::coefficients::LocalRational;
use crate::error::{Error, Result};

/// Bring a coefficient into the canonical form for `mode`.
pub fn normalize_coefficient(mode: CoefficientMode, c: &LocalRational) -> Result<LocalRational> {
    match mode.modulus() {
        None => Ok(c.clone()),
        Some(m) => Ok(LocalRational::from_integer(c.residue_u64(m)?)),
    }
}

/// Polynomial over a [`RingSpec`]; zero coefficients and killed monomials are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    ring: Arc<RingSpec>,
    terms: BTreeMap<Monomial, LocalRational>,
}

impl Polynomial {
    pub fn zero(ring: &Arc<RingSpec>) -> Self {
        Polynomial { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ring: &Arc<RingSpec>, c: LocalRational) -> Result<Self> {
        let m = ring.one();
        Polynomial::from_terms(ring, vec![(m, c)])
    }

    pub fn one(ring: &Arc<RingSpec>) -> Self {
        Polynomial::constant(ring, LocalRational::one()).expect("1 is integral")
    }

    pub fn generator(ring: &Arc<RingSpec>, i: usize) -> Self {
        Polynomial::from_terms(ring, vec![(ring.generator(i), LocalRational::one())]).expect("1 is integral")
    }

    /// Generator by name, e.g. `"a3"`.
    pub fn var(ring: &Arc<RingSpec>, name: &str) -> Result<Self> {
        let i = ring.index_of(name).ok_or_else(|| Error::Parse(format!("unknown generator {name}")))?;
        Ok(Polynomial::generator(ring, i))
    }

    pub fn monomial(ring: &Arc<RingSpec>, m: Monomial, c: LocalRational) -> Result<Self> {
        Polynomial::from_terms(ring, vec![(m, c)])
    }

    pub fn from_terms(ring: &Arc<RingSpec>, terms: impl IntoIterator<Item = (Monomial, LocalRational)>) -> Result<Self> {
        let mut p = Polynomial::zero(ring);
        for (m, c) in terms {
            p.add_term(m, &c)?;
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: &LocalRational) -> Result<()> {
        if !self.ring.survives(&m) || c.is_zero() {
            return Ok(());
        }
        let mode = self.ring.mode();
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                let c = normalize_coefficient(mode, c)?;
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = normalize_coefficient(mode, &(o.get() + c))?;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &LocalRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> LocalRational {
        self.terms.get(m).cloned().unwrap_or_else(LocalRational::zero)
    }

    /// Largest monomial in graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &LocalRational)> {
        self.terms.iter().next_back()
    }

    /// Common degree of all terms; `None` for zero or inhomogeneous input.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Monomial::degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    fn check_ring(&self, other: &Polynomial) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        let mut out = Polynomial::zero(&self.ring);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &-c).expect("negation preserves integrality");
        }
        out
    }

    pub fn scale(&self, c: &LocalRational) -> Result<Polynomial> {
        let mut out = Polynomial::zero(&self.ring);
        for (m, d) in &self.terms {
            out.add_term(m.clone(), &(d * c))?;
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        let mut acc: BTreeMap<Monomial, LocalRational> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                if !self.ring.survives(&m) {
                    continue;
                }
                *acc.entry(m).or_insert_with(LocalRational::zero) += &(c1 * c2);
            }
        }
        Polynomial::from_terms(&self.ring, acc)
    }

    pub fn pow(&self, e: u32) -> Result<Polynomial> {
        let mut result = Polynomial::one(&self.ring);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Minimum 5-adic valuation of the coefficients.
    pub fn content_valuation(&self) -> Result<i64> {
        self.terms
            .values()
            .map(|c| c.valuation().expect("stored coefficients are nonzero"))
            .min()
            .ok_or(Error::ZeroPolynomial)
    }

    /// Whether every coefficient is 5-integral.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(LocalRational::is_5_integral)
    }

    /// Replace generator `i` by `assignments[i]`; all assignments share a target ring.
    pub fn substitute(&self, assignments: &[Polynomial]) -> Result<Polynomial> {
        if assignments.len() < self.ring.ngens() {
            let missing = &self.ring.names()[assignments.len()];
            return Err(Error::MissingAssignment(missing.clone()));
        }
        let target = assignments[0].ring().clone();
        for a in assignments {
            if a.ring() != &target {
                return Err(Error::RingMismatch);
            }
        }
        let mut powers: Vec<Vec<Polynomial>> = vec![vec![Polynomial::one(&target)]; self.ring.ngens()];
        let mut out = Polynomial::zero(&target);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(&target, c.clone())?;
            for (i, &e) in m.exps().iter().enumerate() {
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().expect("nonempty").mul(&assignments[i])?;
                    powers[i].push(next);
                }
                if e > 0 {
                    term = term.mul(&powers[i][e as usize])?;
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Same polynomial read in a ring with identical generators but a different mode or quotient.
    pub fn reinterpret(&self, ring: &Arc<RingSpec>) -> Result<Polynomial> {
        if ring.names() != self.ring.names() || ring.degrees() != self.ring.degrees() {
            return Err(Error::RingMismatch);
        }
        Polynomial::from_terms(ring, self.terms.iter().map(|(m, c)| (m.clone(), c.clone())))
    }

    /// Embed into a ring whose generators extend these (same leading names).
    pub fn embed(&self, ring: &Arc<RingSpec>) -> Result<Polynomial> {
        let n = self.ring.ngens();
        if ring.ngens() < n || ring.names()[..n] != self.ring.names()[..] {
            return Err(Error::RingMismatch);
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut e = m.exps().to_vec();
            e.resize(ring.ngens(), 0);
            terms.push((ring.monomial(&e), c.clone()));
        }
        Polynomial::from_terms(ring, terms)
    }

    /// Integer coefficients; errors if any coefficient is not an integer.
    pub fn integer_coefficients(&self) -> Result<Vec<(Monomial, BigInt)>> {
        self.terms
            .iter()
            .map(|(m, c)| {
                if c.is_integer() {
                    Ok((m.clone(), c.numer().clone()))
                } else {
                    Err(Error::NotIntegral(c.to_string()))
                }
            })
            .collect()
    }

    /// Coefficients as a residue vector over a basis of monomials.
    pub fn coordinates(&self, basis: &[Monomial], modulus: u64) -> Result<Vec<u64>> {
        let mut v = vec![0; basis.len()];
        for (m, c) in &self.terms {
            let i = basis
                .binary_search(m)
                .map_err(|_| Error::DegreeMismatch(format!("monomial {} outside basis", m.display(self.ring.names()))))?;
            v[i] = c.residue_u64(modulus)?;
        }
        Ok(v)
    }
}

impl fmt::Display for Polynomial {
    /// Canonical text: leading term first, `*` between factors, `^` for powers.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = self.ring.names();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.signum() < 0;
            let abs = if negative { -c } else { c.clone() };
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if negative { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", m.display(names))?;
            } else {
                write!(f, "{abs}*{}", m.display(names))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self} over {})", self.ring.mode())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gradedpoly::parse_polynomial;
    use proptest::prelude::*;

    fn ring() -> Arc<RingSpec> {
        RingSpec::curve_coefficients(5, 5, CoefficientMode::LocalZ5)
    }

    fn p(s: &str) -> Polynomial {
        parse_polynomial(&ring(), s).unwrap()
    }

    #[test]
    fn canonical_text() {
        let a1 = Polynomial::var(&ring(), "a1").unwrap();
        let a2 = Polynomial::var(&ring(), "a2").unwrap();
        let c = a1.pow(2).unwrap().scale(&(-2).into()).unwrap().add(&a2.scale(&5.into()).unwrap()).unwrap();
        assert_eq!(c.to_string(), "-2*a1^2 + 5*a2");
        assert_eq!(c.homogeneous_degree(), Some(16));
        assert_eq!(Polynomial::zero(&ring()).to_string(), "0");
    }

    #[test]
    fn ring_mismatch() {
        let other = ring().quotient(CoefficientMode::F5, &[]);
        let x = Polynomial::var(&ring(), "a1").unwrap();
        let y = Polynomial::var(&other, "a1").unwrap();
        assert_eq!(x.mul(&y), Err(Error::RingMismatch));
    }

    #[test]
    fn content() {
        assert_eq!(p("25*a1 + 50*a2").content_valuation(), Ok(2));
        assert_eq!(p("a1/5").content_valuation(), Ok(-1));
        assert_eq!(Polynomial::zero(&ring()).content_valuation(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn substitution() {
        let r = ring();
        let assign: Vec<Polynomial> = (0..5).map(|i| Polynomial::generator(&r, i)).collect();
        let mut shifted = assign.clone();
        shifted[0] = p("a1 + 1");
        assert_eq!(p("a1^2").substitute(&shifted).unwrap(), p("a1^2 + 2*a1 + 1"));
        assert_eq!(p("a2*a3").substitute(&assign).unwrap(), p("a2*a3"));
        assert!(matches!(p("a5").substitute(&assign[..4]), Err(Error::MissingAssignment(_))));
    }

    #[test]
    fn quotient_reduction() {
        let q = ring().quotient(CoefficientMode::F5, &[0]);
        let x = p("6*a1*a2 + 7*a2^2 + 10*a4").reinterpret(&q).unwrap();
        assert_eq!(x.to_string(), "2*a2^2");
    }

    #[test]
    fn reduction_mod_5_rejects_denominators() {
        let q = ring().quotient(CoefficientMode::F5, &[]);
        assert!(p("a1/5").reinterpret(&q).is_err());
        assert_eq!(p("a1/2").reinterpret(&q).unwrap().to_string(), "3*a1");
    }

    fn arb_poly() -> impl Strategy<Value = Polynomial> {
        prop::collection::vec(((0u16..3, 0u16..3, 0u16..2), -20i64..20), 0..5).prop_map(|terms| {
            let r = ring();
            Polynomial::from_terms(
                &r,
                terms.into_iter().map(|((a, b, c), k)| (r.monomial(&[a, b, c, 0, 0]), LocalRational::from(k))),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn multiplication_is_commutative_and_distributive(x in arb_poly(), y in arb_poly(), z in arb_poly()) {
            prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
            let lhs = x.mul(&y.add(&z).unwrap()).unwrap();
            let rhs = x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn display_parses_back(x in arb_poly()) {
            prop_assert_eq!(parse_polynomial(&ring(), &x.to_string()).unwrap(), x);
        }

        #[test]
        fn degrees_add_under_product(x in arb_poly(), y in arb_poly()) {
            let prod = x.mul(&y).unwrap();
            if let (Some(a), Some(b), false) = (x.homogeneous_degree(), y.homogeneous_degree(), prod.is_zero()) {
                prop_assert_eq!(prod.homogeneous_degree(), Some(a + b));
            }
        }
    }
}
