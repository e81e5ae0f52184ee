//! Hilbert functions of finitely presented graded-commutative algebras over `F_5`.
//!
//! Generators carry a bidegree `(s, t)`; those with odd `s` anticommute and square
//! to zero. Dimensions are computed degree by degree as monomials minus the rank of
//! the relation ideal, spanned by monomial multiples of the relations.

use std::collections::BTreeMap;

use crate::coefficients::{rank_mod_p, SparseVec};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Generator {
    pub name: String,
    pub s: usize,
    pub t: u32,
}

impl Generator {
    fn odd(&self) -> bool {
        self.s % 2 == 1
    }
}

type Mono = Vec<u32>;

#[derive(Clone, Debug)]
pub struct PresentedAlgebra {
    gens: Vec<Generator>,
    relations: Vec<Vec<(i64, Mono)>>,
}

impl PresentedAlgebra {
    pub fn new(gens: &[(&str, usize, u32)]) -> Self {
        let gens = gens.iter().map(|&(n, s, t)| Generator { name: n.to_string(), s, t }).collect();
        PresentedAlgebra { gens, relations: Vec::new() }
    }

    /// Add a homogeneous relation written as `c*x^e*y + ...` in the generator names.
    /// Each monomial is read in generator order.
    pub fn relation(mut self, text: &str) -> Result<Self> {
        let mut terms: Vec<(i64, Mono)> = Vec::new();
        let cleaned = text.replace(' ', "").replace('-', "+-");
        for term in cleaned.split('+').filter(|x| !x.is_empty()) {
            let (mut c, body) = match term.strip_prefix('-') {
                Some(rest) => (-1i64, rest),
                None => (1, term),
            };
            let mut mono = vec![0u32; self.gens.len()];
            for factor in body.split('*') {
                if let Ok(n) = factor.parse::<i64>() {
                    c *= n;
                    continue;
                }
                let (name, e) = match factor.split_once('^') {
                    Some((n, e)) => (n, e.parse::<u32>().map_err(|_| Error::Parse(format!("exponent in {factor}")))?),
                    None => (factor, 1),
                };
                let i = self
                    .gens
                    .iter()
                    .position(|g| g.name == name)
                    .ok_or_else(|| Error::Parse(format!("unknown generator {name}")))?;
                mono[i] += e;
            }
            terms.push((c, mono));
        }
        let degs: Vec<(usize, u32)> = terms.iter().map(|(_, m)| self.degree(m)).collect();
        if degs.windows(2).any(|w| w[0] != w[1]) {
            return Err(Error::DegreeMismatch(format!("relation {text} is not homogeneous")));
        }
        self.relations.push(terms);
        Ok(self)
    }

    fn degree(&self, m: &Mono) -> (usize, u32) {
        m.iter().zip(&self.gens).fold((0, 0), |(s, t), (&e, g)| (s + e as usize * g.s, t + e * g.t))
    }

    /// Monomials of bidegree `(s, t)` (odd generators with exponent at most 1).
    fn monomials(&self, s: usize, t: u32) -> Vec<Mono> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.gens.len()];
        self.fill(0, s, t, &mut cur, &mut out);
        out
    }

    fn fill(&self, i: usize, s: usize, t: u32, cur: &mut Mono, out: &mut Vec<Mono>) {
        if i == self.gens.len() {
            if s == 0 && t == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let g = &self.gens[i];
        let max = if g.odd() { 1 } else { u32::MAX };
        let mut e = 0;
        loop {
            let (ds, dt) = (e as usize * g.s, e * g.t);
            if ds > s || dt > t || e > max {
                break;
            }
            cur[i] = e;
            self.fill(i + 1, s - ds, t - dt, cur, out);
            if g.s == 0 && g.t == 0 {
                break;
            }
            e += 1;
        }
        cur[i] = 0;
    }

    /// Sign and product of two monomials, or `None` if an odd generator repeats.
    fn multiply(&self, x: &Mono, y: &Mono) -> Option<(i64, Mono)> {
        let mut sign = 1;
        for (j, g) in self.gens.iter().enumerate() {
            if g.odd() && y[j] == 1 {
                if x[j] == 1 {
                    return None;
                }
                // move y's odd generator j left past x's odd generators after it
                let passes = self.gens.iter().enumerate().skip(j + 1).filter(|(k, h)| h.odd() && x[*k] == 1).count();
                if passes % 2 == 1 {
                    sign = -sign;
                }
            }
        }
        Some((sign, x.iter().zip(y).map(|(a, b)| a + b).collect()))
    }

    /// Dimension over `F_5` of the bidegree `(s, t)` piece.
    pub fn dimension(&self, s: usize, t: u32) -> usize {
        let basis = self.monomials(s, t);
        if basis.is_empty() {
            return 0;
        }
        let index: BTreeMap<&Mono, u32> = basis.iter().enumerate().map(|(i, m)| (m, i as u32)).collect();
        let mut vectors = Vec::new();
        for rel in &self.relations {
            let (rs, rt) = self.degree(&rel[0].1);
            if rs > s || rt > t {
                continue;
            }
            for m in self.monomials(s - rs, t - rt) {
                let mut v = Vec::new();
                for (c, term) in rel {
                    if let Some((sign, p)) = self.multiply(&m, term) {
                        v.push((index[&p], (sign * c).rem_euclid(5) as u64));
                    }
                }
                vectors.push(SparseVec::from_unsorted(v, 5));
            }
        }
        basis.len() - rank_mod_p(5, basis.len(), &vectors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exterior_times_polynomial() {
        let alg = PresentedAlgebra::new(&[("a", 1, 8), ("b", 2, 40)]);
        for s in 0..6 {
            for t in (0..=200).step_by(8) {
                let expect = usize::from((s % 2 == 0 && t == 20 * s as u32) || (s % 2 == 1 && t == 20 * (s as u32 - 1) + 8));
                assert_eq!(alg.dimension(s, t), expect, "({s},{t})");
            }
        }
    }

    #[test]
    fn anticommutation_signs() {
        let alg = PresentedAlgebra::new(&[("x", 1, 8), ("y", 1, 16), ("z", 0, 8)]);
        let (x, y, z) = (vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]);
        assert_eq!(alg.multiply(&x, &y), Some((1, vec![1, 1, 0])));
        assert_eq!(alg.multiply(&y, &x), Some((-1, vec![1, 1, 0])));
        assert_eq!(alg.multiply(&z, &y), Some((1, vec![0, 1, 1])));
        assert_eq!(alg.multiply(&x, &x), None);
        assert_eq!(alg.dimension(2, 24), 1);
    }

    #[test]
    fn polynomial_relation() {
        let alg = PresentedAlgebra::new(&[("u", 0, 8), ("v", 0, 16)]).relation("u^2 - 3*v").unwrap();
        for n in 0..10u32 {
            assert_eq!(alg.dimension(0, 8 * n), 1);
        }
        assert!(PresentedAlgebra::new(&[("u", 0, 8)]).relation("u + u^2").is_err());
    }
}
