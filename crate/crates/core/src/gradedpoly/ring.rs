use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

/// Coefficient domain of a graded ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoefficientMode {
    /// Integers localised at 5 (exact rationals whose denominators are prime to 5).
    LocalZ5,
    /// The prime field; coefficients are stored as residues `0..5`.
    F5,
    /// `Z/5^K`; coefficients are stored as residues `0..5^K`.
    Zmod5Pow(u32),
    /// Rationals.
    Q,
}

impl CoefficientMode {
    /// Modulus of the residue representation, if any.
    pub fn modulus(self) -> Option<u64> {
        match self {
            CoefficientMode::F5 => Some(5),
            CoefficientMode::Zmod5Pow(k) => Some(5u64.pow(k)),
            _ => None,
        }
    }
}

impl fmt::Display for CoefficientMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientMode::LocalZ5 => write!(f, "Z_(5)"),
            CoefficientMode::F5 => write!(f, "F_5"),
            CoefficientMode::Zmod5Pow(k) => write!(f, "Z/5^{k}"),
            CoefficientMode::Q => write!(f, "Q"),
        }
    }
}

/// Generators, their (even, positive) degrees, coefficient mode, and the
/// generators that are set to zero in a quotient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingSpec {
    names: Vec<String>,
    degrees: Vec<u32>,
    mode: CoefficientMode,
    killed: Vec<bool>,
}

impl RingSpec {
    pub fn new(names: Vec<String>, degrees: Vec<u32>, mode: CoefficientMode) -> Arc<Self> {
        assert_eq!(names.len(), degrees.len(), "one degree per generator");
        assert!(degrees.iter().all(|&d| d > 0), "generator degrees must be positive");
        for (i, n) in names.iter().enumerate() {
            assert!(!names[..i].contains(n), "duplicate generator name {n}");
        }
        let killed = vec![false; names.len()];
        Arc::new(RingSpec { names, degrees, mode, killed })
    }

    /// `Z_(p)[a_1..a_n]` with `|a_i| = 2 i (p-1)`.
    pub fn curve_coefficients(p: u64, n: usize, mode: CoefficientMode) -> Arc<Self> {
        let names = (1..=n).map(|i| format!("a{i}")).collect();
        let degrees = (1..=n).map(|i| 2 * i as u32 * (p as u32 - 1)).collect();
        RingSpec::new(names, degrees, mode)
    }

    /// Same generators with `mode` replaced and the listed generators killed.
    pub fn quotient(&self, mode: CoefficientMode, kill: &[usize]) -> Arc<Self> {
        let mut killed = self.killed.clone();
        for &i in kill {
            killed[i] = true;
        }
        Arc::new(RingSpec { names: self.names.clone(), degrees: self.degrees.clone(), mode, killed })
    }

    /// Append extra generators (used for rings like `A[r]`).
    pub fn extend(&self, names: &[&str], degrees: &[u32]) -> Arc<Self> {
        let mut n = self.names.clone();
        let mut d = self.degrees.clone();
        let mut k = self.killed.clone();
        for (name, deg) in names.iter().zip(degrees) {
            assert!(!n.iter().any(|x| x == name), "duplicate generator name {name}");
            n.push(name.to_string());
            d.push(*deg);
            k.push(false);
        }
        Arc::new(RingSpec { names: n, degrees: d, mode: self.mode, killed: k })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn mode(&self) -> CoefficientMode {
        self.mode
    }

    pub fn ngens(&self) -> usize {
        self.names.len()
    }

    pub fn is_killed(&self, i: usize) -> bool {
        self.killed[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn monomial(&self, exps: &[u16]) -> Monomial {
        Monomial::new(exps, &self.degrees)
    }

    pub fn one(&self) -> Monomial {
        Monomial::new(&vec![0; self.ngens()], &self.degrees)
    }

    pub fn generator(&self, i: usize) -> Monomial {
        let mut e = vec![0u16; self.ngens()];
        e[i] = 1;
        Monomial::new(&e, &self.degrees)
    }

    /// Whether the monomial survives in this (quotient) ring.
    pub fn survives(&self, m: &Monomial) -> bool {
        m.exps.iter().zip(&self.killed).all(|(&e, &k)| e == 0 || !k)
    }
}

/// Exponent vector with its cached internal degree.
///
/// Ordered graded-lexicographically with `a_1 > a_2 > ...`: first by degree,
/// then lexicographically on exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    degree: u32,
    exps: SmallVec<[u16; 6]>,
}

impl Monomial {
    pub fn new(exps: &[u16], degrees: &[u32]) -> Self {
        assert_eq!(exps.len(), degrees.len());
        let degree = exps.iter().zip(degrees).map(|(&e, &d)| e as u32 * d).sum();
        Monomial { degree, exps: SmallVec::from_slice(exps) }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn exp(&self, i: usize) -> u16 {
        self.exps[i]
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let exps = self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect();
        Monomial { degree: self.degree + other.degree, exps }
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if self.exps.iter().zip(&other.exps).any(|(a, b)| a < b) {
            return None;
        }
        let exps = self.exps.iter().zip(&other.exps).map(|(a, b)| a - b).collect();
        Some(Monomial { degree: self.degree - other.degree, exps })
    }

    /// Remove one factor of generator `i` (whose degree is `deg`).
    pub fn lower(&self, i: usize, deg: u32) -> Option<Monomial> {
        if self.exps[i] == 0 {
            return None;
        }
        let mut m = self.clone();
        m.exps[i] -= 1;
        m.degree -= deg;
        Some(m)
    }

    pub fn display(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .exps
            .iter()
            .zip(names)
            .filter(|(&e, _)| e > 0)
            .map(|(&e, n)| if e == 1 { n.clone() } else { format!("{n}^{e}") })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

/// All monomials of exact degree `t`, in increasing graded-lex order.
pub fn graded_piece_basis(ring: &RingSpec, t: u32) -> Vec<Monomial> {
    let n = ring.ngens();
    let degs = ring.degrees();
    let mut out = Vec::new();
    let mut exps = vec![0u16; n];
    fn rec(
        i: usize,
        remaining: u32,
        ring: &RingSpec,
        degs: &[u32],
        exps: &mut Vec<u16>,
        out: &mut Vec<Monomial>,
    ) {
        if i == degs.len() {
            if remaining == 0 {
                out.push(Monomial::new(exps, degs));
            }
            return;
        }
        if ring.is_killed(i) {
            exps[i] = 0;
            rec(i + 1, remaining, ring, degs, exps, out);
            return;
        }
        let max = remaining / degs[i];
        for e in 0..=max {
            exps[i] = e as u16;
            rec(i + 1, remaining - e * degs[i], ring, degs, exps, out);
        }
        exps[i] = 0;
    }
    rec(0, t, ring, degs, &mut exps, &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Arc<RingSpec> {
        RingSpec::curve_coefficients(5, 5, CoefficientMode::LocalZ5)
    }

    fn partitions(n: u32, parts: &[u32]) -> u64 {
        // direct recursion, independent of the enumeration code
        fn go(n: u32, parts: &[u32]) -> u64 {
            if n == 0 {
                return 1;
            }
            match parts.split_first() {
                None => 0,
                Some((&p, rest)) => {
                    let mut total = go(n, rest);
                    let mut k = p;
                    while k <= n {
                        total += go(n - k, rest);
                        k += p;
                    }
                    total
                }
            }
        }
        go(n, parts)
    }

    #[test]
    fn small_pieces() {
        let r = a();
        let show = |t| graded_piece_basis(&r, t).iter().map(|m| m.display(r.names())).collect::<Vec<_>>();
        assert_eq!(show(8), vec!["a1"]);
        assert_eq!(show(16), vec!["a2", "a1^2"]);
        let t40 = show(40);
        assert_eq!(t40.len(), 7);
        for m in ["a1^5", "a1^3*a2", "a1*a2^2", "a1^2*a3", "a2*a3", "a1*a4", "a5"] {
            assert!(t40.contains(&m.to_string()), "{m}");
        }
        assert!(graded_piece_basis(&r, 12).is_empty());
    }

    #[test]
    fn piece_sizes_match_partition_counts() {
        let r = a();
        for n in 0..=50 {
            assert_eq!(graded_piece_basis(&r, 8 * n).len() as u64, partitions(n, &[1, 2, 3, 4, 5]), "n = {n}");
        }
    }

    #[test]
    fn killed_generators_are_skipped() {
        let r = a().quotient(CoefficientMode::F5, &[0]);
        let b = graded_piece_basis(&r, 16);
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].display(r.names()), "a2");
    }

    #[test]
    fn order_is_graded_lex() {
        let r = a();
        let m1 = r.monomial(&[2, 0, 0, 0, 0]);
        let m2 = r.monomial(&[0, 1, 0, 0, 0]);
        let m3 = r.monomial(&[0, 0, 1, 0, 0]);
        assert!(m1 > m2);
        assert!(m3 > m1);
    }
}
