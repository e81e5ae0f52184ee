use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_integer::binomial;

use super::word::{parse_word, CobarWord};
use crate::algebroid::{AlgebroidSpec, EtaCache, GammaElement, TensorElement};
use crate::coefficients::LocalRational;
use crate::error::{Error, Result};
use crate::gradedpoly::{normalize_coefficient, parse_with, ExprContext, Monomial, Polynomial};

/// Cochain `sum c * m [w]` of cohomological degree `s`, coefficients on the left.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CobarElement {
    spec: Arc<AlgebroidSpec>,
    s: usize,
    terms: BTreeMap<(CobarWord, Monomial), LocalRational>,
}

impl CobarElement {
    pub fn zero(spec: &Arc<AlgebroidSpec>, s: usize) -> Self {
        CobarElement { spec: spec.clone(), s, terms: BTreeMap::new() }
    }

    /// A basis cochain `m [w]`.
    pub fn basis(spec: &Arc<AlgebroidSpec>, m: Monomial, w: CobarWord) -> Self {
        let mut x = CobarElement::zero(spec, w.len());
        x.add_term(w, m, &LocalRational::one()).expect("unit coefficient");
        x
    }

    pub fn word(spec: &Arc<AlgebroidSpec>, w: CobarWord) -> Self {
        CobarElement::basis(spec, spec.base().one(), w)
    }

    /// A 0-cochain.
    pub fn from_poly(spec: &Arc<AlgebroidSpec>, q: &Polynomial) -> Result<Self> {
        if q.ring() != spec.base() {
            return Err(Error::RingMismatch);
        }
        let mut x = CobarElement::zero(spec, 0);
        for (m, c) in q.terms() {
            x.add_term(CobarWord::empty(), m.clone(), c)?;
        }
        Ok(x)
    }

    /// A 1-cochain `[g]`; the `r^0` part is projected away (normalised complex).
    pub fn from_gamma(g: &GammaElement) -> Result<Self> {
        let spec = g.spec();
        let mut x = CobarElement::zero(spec, 1);
        for (e, q) in g.terms() {
            if e == 0 {
                continue;
            }
            let w = CobarWord::new(&[e as u8]);
            for (m, c) in q.terms() {
                x.add_term(w.clone(), m.clone(), c)?;
            }
        }
        Ok(x)
    }

    pub fn add_term(&mut self, w: CobarWord, m: Monomial, c: &LocalRational) -> Result<()> {
        assert_eq!(w.len(), self.s, "word length must equal s");
        if c.is_zero() || !self.spec.base().survives(&m) {
            return Ok(());
        }
        if let Some(max) = self.spec.max_r_exponent() {
            assert!(w.exps().iter().all(|&e| e as u32 <= max), "word {w} not in normal form");
        }
        let key = (w, m);
        let mode = self.spec.mode();
        let sum = match self.terms.remove(&key) {
            Some(old) => &old + c,
            None => c.clone(),
        };
        let sum = normalize_coefficient(mode, &sum)?;
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
        Ok(())
    }

    pub fn spec(&self) -> &Arc<AlgebroidSpec> {
        &self.spec
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CobarWord, &Monomial, &LocalRational)> {
        self.terms.iter().map(|((w, m), c)| (w, m, c))
    }

    pub fn coefficient(&self, w: &CobarWord, m: &Monomial) -> LocalRational {
        self.terms.get(&(w.clone(), m.clone())).cloned().unwrap_or_else(LocalRational::zero)
    }

    /// Internal degree, `None` if zero or inhomogeneous.
    pub fn degree(&self) -> Option<u32> {
        let rd = self.spec.r_degree();
        let mut it = self.terms.keys().map(|(w, m)| m.degree() + rd * w.weight());
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    fn check(&self, other: &CobarElement) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::SpecMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &CobarElement) -> Result<CobarElement> {
        self.check(other)?;
        if self.s != other.s {
            return Err(Error::DegreeMismatch(format!("adding s={} and s={}", self.s, other.s)));
        }
        let mut out = self.clone();
        for ((w, m), c) in &other.terms {
            out.add_term(w.clone(), m.clone(), c)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &CobarElement) -> Result<CobarElement> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> CobarElement {
        self.scale(&LocalRational::from(-1)).expect("units stay integral")
    }

    pub fn scale(&self, c: &LocalRational) -> Result<CobarElement> {
        let mut out = CobarElement::zero(&self.spec, self.s);
        for ((w, m), d) in &self.terms {
            out.add_term(w.clone(), m.clone(), &(d * c))?;
        }
        Ok(out)
    }

    /// Multiply by a left coefficient in `A`.
    pub fn scale_poly(&self, q: &Polynomial) -> Result<CobarElement> {
        let mut out = CobarElement::zero(&self.spec, self.s);
        for ((w, m), d) in &self.terms {
            for (mq, cq) in q.terms() {
                out.add_term(w.clone(), m.mul(mq), &(d * cq))?;
            }
        }
        Ok(out)
    }

    /// Same cochain read in another spec with the same words (e.g. a quotient).
    pub fn reinterpret(&self, spec: &Arc<AlgebroidSpec>) -> Result<CobarElement> {
        if spec.ngens() != self.spec.ngens() || spec.variant() != self.spec.variant() {
            return Err(Error::SpecMismatch);
        }
        let mut out = CobarElement::zero(spec, self.s);
        for ((w, m), c) in &self.terms {
            out.add_term(w.clone(), m.clone(), c)?;
        }
        Ok(out)
    }

    /// Minimum 5-adic valuation of the coefficients.
    pub fn content_valuation(&self) -> Result<i64> {
        self.terms.values().map(|c| c.valuation().expect("nonzero")).min().ok_or(Error::ZeroPolynomial)
    }

    /// The cobar differential
    /// `d(c[w]) = [(eta_R(c) - c) | w] + c * sum_i (-1)^i [w_1|..|Dbar(r^{w_i})|..|w_s]`
    /// with `Dbar(r^e) = sum_{0<j<e} binom(e, j) r^j | r^{e-j}`.
    pub fn differential(&self, eta: &mut EtaCache) -> Result<CobarElement> {
        let mut out = CobarElement::zero(&self.spec, self.s + 1);
        for ((w, m), c) in &self.terms {
            let g = eta.eta_monomial(m);
            for (j, q) in g.terms() {
                if j == 0 {
                    continue;
                }
                let w2 = w.prepend(j as u8);
                for (m2, c2) in q.terms() {
                    out.add_term(w2.clone(), m2.clone(), &(c * c2))?;
                }
            }
            for (i, &e) in w.exps().iter().enumerate() {
                let sign: i64 = if i % 2 == 0 { -1 } else { 1 };
                for k in 1..e {
                    let b = binomial(e as i64, k as i64) * sign;
                    out.add_term(w.split_at_factor(i, k, e - k), m.clone(), &(c * &LocalRational::from(b)))?;
                }
            }
        }
        Ok(out)
    }

    /// Differential with a fresh right-unit cache.
    pub fn d(&self) -> Result<CobarElement> {
        self.differential(&mut EtaCache::new(&self.spec))
    }

    pub fn is_cocycle(&self) -> Result<bool> {
        Ok(self.d()?.is_zero())
    }

    /// Concatenation product; coefficients of `other` are moved left through `self`'s word.
    pub fn product(&self, other: &CobarElement, eta: &mut EtaCache) -> Result<CobarElement> {
        self.check(other)?;
        let spec = &self.spec;
        let mut out = CobarElement::zero(spec, self.s + other.s);
        for ((w1, m1), c1) in &self.terms {
            for ((w2, m2), c2) in &other.terms {
                let c = c1 * c2;
                let q1 = Polynomial::monomial(spec.base(), m1.clone(), LocalRational::one())?;
                let q2 = Polynomial::monomial(spec.base(), m2.clone(), LocalRational::one())?;
                if w1.is_empty() {
                    // a * (m2 [w2]) needs no moving
                    let q = q1.mul(&q2)?;
                    for (m, cm) in q.terms() {
                        out.add_term(w2.clone(), m.clone(), &(&c * cm))?;
                    }
                    continue;
                }
                let mut factors: Vec<GammaElement> =
                    w1.exps().iter().map(|&e| GammaElement::r_power(spec, e as u32)).collect();
                factors[0] = factors[0].scale(&q1)?;
                if w2.is_empty() {
                    let last = factors.pop().expect("nonempty");
                    factors.push(last.mul(&eta.eta_poly(&q2)?)?);
                } else {
                    for (k, &e) in w2.exps().iter().enumerate() {
                        let mut g = GammaElement::r_power(spec, e as u32);
                        if k == 0 {
                            g = g.scale(&q2)?;
                        }
                        factors.push(g);
                    }
                }
                let t = TensorElement::from_factors(&factors, eta)?;
                for (word, q) in t.terms() {
                    let w: Vec<u8> = word.iter().map(|&e| e as u8).collect();
                    if w.contains(&0) {
                        return Err(Error::AxiomViolation("unit factor in a reduced word".into()));
                    }
                    let w = CobarWord::new(&w);
                    for (m, cm) in q.terms() {
                        out.add_term(w.clone(), m.clone(), &(&c * cm))?;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &CobarElement) -> Result<CobarElement> {
        self.product(other, &mut EtaCache::new(&self.spec))
    }

    /// Parse a literal. Accepted forms: polynomials in the `a_i` (0-cochains),
    /// elements of `Gamma` such as `"a4*r + a3*r^2"` (1-cochains), and products of
    /// coefficients with bracketed words such as `"a2*[r^4|r] + 3*[r|r^4]"`.
    /// Products of bracketed words are cobar products.
    pub fn parse(spec: &Arc<AlgebroidSpec>, text: &str) -> Result<CobarElement> {
        if text.contains('[') {
            parse_with(&CobarContext { spec, eta: std::cell::RefCell::new(EtaCache::new(spec)) }, text)
        } else {
            let g = GammaElement::parse(spec, text)?;
            let constant = g.coefficient(0);
            let has_r = g.terms().any(|(e, _)| e > 0);
            match (has_r, constant.is_zero()) {
                (false, _) => CobarElement::from_poly(spec, &constant),
                (true, true) => CobarElement::from_gamma(&g),
                (true, false) => Err(Error::InhomogeneousInput(format!("mixed cochain degrees in {text:?}"))),
            }
        }
    }
}

struct CobarContext<'a> {
    spec: &'a Arc<AlgebroidSpec>,
    eta: std::cell::RefCell<EtaCache>,
}

impl ExprContext for CobarContext<'_> {
    type Value = CobarElement;

    fn constant(&self, c: LocalRational) -> Result<CobarElement> {
        CobarElement::from_poly(self.spec, &Polynomial::constant(self.spec.base(), c)?)
    }

    fn symbol(&self, name: &str) -> Result<CobarElement> {
        if name.starts_with('[') {
            let w = parse_word(name)?;
            if let Some(max) = self.spec.max_r_exponent() {
                if w.exps().iter().any(|&e| e as u32 > max) {
                    return Err(Error::Parse(format!("word {w} exceeds the reduced range")));
                }
            }
            Ok(CobarElement::word(self.spec, w))
        } else {
            CobarElement::from_poly(self.spec, &Polynomial::var(self.spec.base(), name)?)
        }
    }

    fn add(&self, a: &CobarElement, b: &CobarElement) -> Result<CobarElement> {
        a.add(b)
    }

    fn mul(&self, a: &CobarElement, b: &CobarElement) -> Result<CobarElement> {
        a.product(b, &mut self.eta.borrow_mut())
    }

    fn neg(&self, a: &CobarElement) -> Result<CobarElement> {
        Ok(a.neg())
    }

    fn scale(&self, a: &CobarElement, c: &LocalRational) -> Result<CobarElement> {
        a.scale(c)
    }
}

impl fmt::Display for CobarElement {
    /// Canonical text: `coefficient*monomial*[word]` terms, words in increasing order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = self.spec.base().names();
        for (k, ((w, m), c)) in self.terms.iter().enumerate() {
            let neg = c.signum() < 0;
            let abs = if neg { -c } else { c.clone() };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mut parts = Vec::new();
            if !abs.is_one() || (m.is_one() && w.is_empty()) {
                parts.push(abs.to_string());
            }
            if !m.is_one() {
                parts.push(m.display(names));
            }
            if !w.is_empty() {
                parts.push(w.to_string());
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for CobarElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C^{}[{}]({self})", self.s, self.spec.label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mod_i(k: usize) -> Arc<AlgebroidSpec> {
        AlgebroidSpec::reduced().quotient(k).unwrap()
    }

    fn el(spec: &Arc<AlgebroidSpec>, s: &str) -> CobarElement {
        CobarElement::parse(spec, s).unwrap()
    }

    fn b_rep(spec: &Arc<AlgebroidSpec>) -> CobarElement {
        el(spec, "[r^4|r] + 2*[r^3|r^2] + 2*[r^2|r^3] + [r|r^4]")
    }

    #[test]
    fn differential_of_a3_mod_i1() {
        let s = mod_i(1);
        assert_eq!(el(&s, "a3").d().unwrap(), el(&s, "3*a2*[r]"));
    }

    #[test]
    fn first_d2_witness() {
        let s = mod_i(1);
        let lhs = el(&s, "a3^3 + 3*a2*a3*a4").d().unwrap();
        let x1 = el(&s, "a4*r + a3*r^2 + a2*r^3");
        assert_eq!(lhs, x1.scale_poly(&crate::gradedpoly::parse_polynomial(s.base(), "-a2^2").unwrap()).unwrap());
    }

    #[test]
    fn b_is_a_cocycle_everywhere() {
        for k in 0..5 {
            assert!(b_rep(&mod_i(k)).is_cocycle().unwrap());
        }
        assert!(b_rep(&AlgebroidSpec::full()).is_cocycle().unwrap());
    }

    #[test]
    fn d_squared_vanishes_on_basis() {
        let s = AlgebroidSpec::reduced();
        let mut eta = EtaCache::new(&s);
        for text in ["a1*a3", "a4*[r^2]", "a2*[r|r^3]", "[r^2|r^2|r]", "a1^2*[r^4]"] {
            let x = el(&s, text);
            let dd = x.differential(&mut eta).unwrap().differential(&mut eta).unwrap();
            assert!(dd.is_zero(), "{text}: {dd}");
        }
    }

    #[test]
    fn leibniz_rule() {
        let s = AlgebroidSpec::reduced();
        let mut eta = EtaCache::new(&s);
        let pairs = [("a2*[r]", "a3*[r^2]"), ("a1", "a4*[r^3]"), ("[r^2]", "a1*a2"), ("a3*[r|r]", "a1*[r^4]")];
        for (x, y) in pairs {
            let (x, y) = (el(&s, x), el(&s, y));
            let lhs = x.product(&y, &mut eta).unwrap().differential(&mut eta).unwrap();
            let dx_y = x.differential(&mut eta).unwrap().product(&y, &mut eta).unwrap();
            let x_dy = x.product(&y.differential(&mut eta).unwrap(), &mut eta).unwrap();
            let sign = if x.s() % 2 == 0 { x_dy } else { x_dy.neg() };
            assert_eq!(lhs, dx_y.add(&sign).unwrap());
        }
    }

    #[test]
    fn parse_and_print() {
        let s = mod_i(1);
        let x = el(&s, "a2*[r^4|r] + 3*a2*[r|r^4]");
        assert_eq!(x.to_string(), "3*a2*[r|r^4] + a2*[r^4|r]");
        assert_eq!(el(&s, &x.to_string()), x);
        assert_eq!(x.degree(), Some(56));
        assert_eq!(el(&s, "[r] + [r^2]").degree(), None);
        assert!(CobarElement::parse(&s, "a2 + a3*r").is_err());
    }

    #[test]
    fn right_coefficients_move_left() {
        // [r] * a1 = [r eta_R(a1)] = a1 [r] + 5 [r^2] integrally
        let s = AlgebroidSpec::full();
        let x = el(&s, "[r]").mul(&el(&s, "a1")).unwrap();
        assert_eq!(x, el(&s, "a1*[r] + 5*[r^2]"));
    }
}
