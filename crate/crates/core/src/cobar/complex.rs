//! Modular cochain slices and differential matrices.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::binomial;
use rayon::prelude::*;
use rustc_hash::FxHashMap;

use super::element::CobarElement;
use super::word::{words, CobarWord};
use crate::algebroid::AlgebroidSpec;
use crate::coefficients::{LocalRational, SparseVec};
use crate::error::{Error, Result};
use crate::gradedpoly::{graded_piece_basis, Monomial};

/// Basis of the cochains of bidegree `(s, t)`: blocks of coefficient monomials, one per word.
///
/// Blocks are ordered by decreasing word weight, then by word; inside a block the monomials
/// follow the graded-lex order of the coefficient ring.
#[derive(Clone, Debug)]
pub struct Slice {
    pub s: usize,
    pub t: u32,
    pub words: Vec<CobarWord>,
    offsets: Vec<u32>,
    word_index: FxHashMap<CobarWord, u32>,
    dim: usize,
}

impl Slice {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn block(&self, w: &CobarWord) -> Option<(u32, usize)> {
        self.word_index.get(w).map(|&k| (self.offsets[k as usize], k as usize))
    }

    /// Index of the word block containing basis index `i`.
    pub fn block_of(&self, i: usize) -> usize {
        match self.offsets.binary_search(&(i as u32)) {
            Ok(mut k) => {
                // skip empty blocks sharing the offset
                while k + 1 < self.offsets.len() && self.offsets[k + 1] == i as u32 {
                    k += 1;
                }
                k
            }
            Err(k) => k - 1,
        }
    }

    pub fn block_start(&self, k: usize) -> usize {
        self.offsets[k] as usize
    }
}

/// Cobar complex of a spec with coefficients reduced modulo `modulus` (5 for quotients,
/// `5^K` for integral presentations), for internal degrees up to `t_max`.
pub struct CobarComplex {
    spec: Arc<AlgebroidSpec>,
    modulus: u64,
    t_max: u32,
    monos: Vec<Vec<Monomial>>,
    mono_ids: Vec<FxHashMap<Monomial, u32>>,
    /// `eta[n][id]`: the `r^j`, `j >= 1`, part of `eta_R` of monomial `id` of degree `n |r|`,
    /// as `(j, monomial id in degree (n - j)|r|, coefficient)`.
    eta: Vec<Vec<Vec<(u8, u32, u32)>>>,
}

impl CobarComplex {
    pub fn new(spec: &Arc<AlgebroidSpec>, modulus: u64, t_max: u32) -> Self {
        assert!((2..(1 << 32)).contains(&modulus));
        if spec.ideal().is_some() {
            assert_eq!(modulus, spec.prime(), "quotient specs live over F_p");
        }
        let rd = spec.r_degree();
        let nmax = (t_max / rd) as usize;
        let monos: Vec<Vec<Monomial>> = (0..=nmax).map(|n| graded_piece_basis(spec.base(), n as u32 * rd)).collect();
        let mono_ids = monos
            .iter()
            .map(|ms| ms.iter().enumerate().map(|(i, m)| (m.clone(), i as u32)).collect())
            .collect();
        let mut cx = CobarComplex { spec: spec.clone(), modulus, t_max, monos, mono_ids, eta: Vec::new() };
        cx.build_eta();
        cx
    }

    pub fn spec(&self) -> &Arc<AlgebroidSpec> {
        &self.spec
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn t_max(&self) -> u32 {
        self.t_max
    }

    pub fn monomials(&self, n: usize) -> &[Monomial] {
        &self.monos[n]
    }

    /// `(j, monomial id, coefficient)` for the `r^j`, `j >= 1`, part of `eta_R` of monomial
    /// `id` in degree `n |r|`.
    pub fn eta_terms(&self, n: usize, id: u32) -> &[(u8, u32, u32)] {
        &self.eta[n][id as usize]
    }

    pub fn monomial_id(&self, m: &Monomial) -> Option<u32> {
        let n = (m.degree() / self.spec.r_degree()) as usize;
        self.mono_ids.get(n)?.get(m).copied()
    }

    fn reduce_i64(&self, x: i64) -> u32 {
        x.rem_euclid(self.modulus as i64) as u32
    }

    fn reduce_big(&self, x: &BigInt) -> u32 {
        let m = BigInt::from(self.modulus);
        let r = ((x % &m) + &m) % &m;
        u32::try_from(r).expect("fits")
    }

    /// Right unit of every monomial, built degree by degree as `eta(m) = eta(m / a_i) eta(a_i)`.
    fn build_eta(&mut self) {
        let spec = self.spec.clone();
        let ngens = spec.ngens();
        let m = self.modulus;
        let rd = spec.r_degree();
        let gen_deg: Vec<usize> = spec.base().degrees().iter().map(|&d| (d / rd) as usize).collect();
        // eta(a_i) as (j, i' (generator index or None for 1), coefficient)
        let mut gen_eta: Vec<Vec<(u8, Option<usize>, u64)>> = Vec::new();
        for i in 0..ngens {
            let n = i + 1;
            let mut v = Vec::new();
            for j in 0..=n {
                let c = self.reduce_big(spec.eta_constant(n, j)) as u64;
                if c == 0 {
                    continue;
                }
                let g = if j == 0 { None } else { Some(j - 1) };
                if let Some(g) = g {
                    if spec.base().is_killed(g) {
                        continue;
                    }
                }
                v.push(((n - j) as u8, g, c));
            }
            gen_eta.push(v);
        }
        let max_r = spec.max_r_exponent();
        let p = spec.prime() as usize;
        let nmax = self.monos.len() - 1;
        let mut full: Vec<Vec<Vec<(u8, u32, u32)>>> = Vec::with_capacity(nmax + 1);
        for n in 0..=nmax {
            let mut level = Vec::with_capacity(self.monos[n].len());
            for mono in &self.monos[n] {
                let Some(i) = (0..ngens).find(|&i| mono.exp(i) > 0) else {
                    level.push(vec![(0u8, 0u32, 1u32)]);
                    continue;
                };
                let rest = mono.lower(i, spec.base().degrees()[i]).expect("positive exponent");
                let rn = n - gen_deg[i];
                let rid = self.mono_ids[rn][&rest] as usize;
                let mut acc: FxHashMap<(u8, u32), u64> = FxHashMap::default();
                for &(j, id, c) in &full[rn][rid] {
                    let base_mono = &self.monos[rn - j as usize][id as usize];
                    for &(k, g, c2) in &gen_eta[i] {
                        let prod = match g {
                            None => base_mono.clone(),
                            Some(g) => base_mono.mul(&spec.base().generator(g)),
                        };
                        let e = j as usize + k as usize;
                        let cc = (c as u64 * c2) % m;
                        self.push_reduced(&mut acc, e, prod, cc, max_r, p);
                    }
                }
                let mut v: Vec<(u8, u32, u32)> =
                    acc.into_iter().filter(|e| e.1 != 0).map(|((j, id), c)| (j, id, c as u32)).collect();
                v.sort_unstable();
                level.push(v);
            }
            full.push(level);
        }
        self.eta = full
            .into_iter()
            .map(|level| level.into_iter().map(|v| v.into_iter().filter(|e| e.0 > 0).collect()).collect())
            .collect();
    }

    /// Add `c * mono * r^e` into `acc`, rewriting `r^e` for `e >= p` in the reduced variant.
    fn push_reduced(
        &self,
        acc: &mut FxHashMap<(u8, u32), u64>,
        e: usize,
        mono: Monomial,
        c: u64,
        max_r: Option<u32>,
        p: usize,
    ) {
        if c == 0 {
            return;
        }
        let m = self.modulus;
        if max_r.is_none_or(|mx| e as u32 <= mx) {
            let n = (mono.degree() / self.spec.r_degree()) as usize;
            let id = self.mono_ids[n][&mono];
            let slot = acc.entry((e as u8, id)).or_insert(0);
            *slot = (*slot + c) % m;
            return;
        }
        // r^e = -sum_{i=1}^{p-1} a_i r^{e-i}
        for i in 1..p {
            if self.spec.base().is_killed(i - 1) {
                continue;
            }
            let prod = mono.mul(&self.spec.base().generator(i - 1));
            self.push_reduced(acc, e - i, prod, (m - c) % m, max_r, p);
        }
    }

    /// Basis of bidegree `(s, t)`.
    pub fn slice(&self, s: usize, t: u32) -> Slice {
        let rd = self.spec.r_degree();
        let mut ws = Vec::new();
        if t.is_multiple_of(rd) {
            let n = t / rd;
            let max = self.spec.max_r_exponent();
            for weight in (0..=n).rev() {
                if (n - weight) as usize >= self.monos.len() {
                    continue;
                }
                ws.extend(words(s, weight, max));
            }
        }
        let mut offsets = Vec::with_capacity(ws.len() + 1);
        let mut word_index = FxHashMap::default();
        let mut total = 0u32;
        for (k, w) in ws.iter().enumerate() {
            offsets.push(total);
            word_index.insert(w.clone(), k as u32);
            let n = (t / rd - w.weight()) as usize;
            total += self.monos[n].len() as u32;
        }
        offsets.push(total);
        Slice { s, t, words: ws, offsets, word_index, dim: total as usize }
    }

    /// `(monomial, word)` of basis index `i`.
    pub fn basis_element(&self, slice: &Slice, i: usize) -> (Monomial, CobarWord) {
        let k = slice.block_of(i);
        let w = &slice.words[k];
        let n = (slice.t / self.spec.r_degree() - w.weight()) as usize;
        (self.monos[n][i - slice.block_start(k)].clone(), w.clone())
    }

    /// Column `i` of `d : C^{s,t} -> C^{s+1,t}`.
    pub fn differential_column(&self, src: &Slice, dst: &Slice, i: usize) -> SparseVec {
        let rd = self.spec.r_degree();
        let k = src.block_of(i);
        let w = &src.words[k];
        let n = (src.t / rd - w.weight()) as usize;
        let id = (i - src.block_start(k)) as u32;
        let m = self.modulus;
        let mut raw: Vec<(u32, u64)> = Vec::new();
        for &(j, id2, c) in &self.eta[n][id as usize] {
            let w2 = w.prepend(j);
            let (off, _) = dst.block(&w2).expect("target word present");
            raw.push((off + id2, c as u64));
        }
        for (pos, &e) in w.exps().iter().enumerate() {
            let negative = pos % 2 == 0;
            for a in 1..e {
                let b = binomial(e as u64, a as u64) % m;
                let c = if negative { (m - b) % m } else { b };
                let (off, _) = dst.block(&w.split_at_factor(pos, a, e - a)).expect("target word present");
                raw.push((off + id, c));
            }
        }
        SparseVec::from_unsorted(raw, m)
    }

    /// All columns of `d` from `(s, t)`, computed in parallel.
    pub fn differential_matrix(&self, s: usize, t: u32) -> (Slice, Slice, Vec<SparseVec>) {
        let src = self.slice(s, t);
        let dst = self.slice(s + 1, t);
        let cols = (0..src.dim()).into_par_iter().map(|i| self.differential_column(&src, &dst, i)).collect();
        (src, dst, cols)
    }

    /// Coordinates of a cochain in a slice (coefficients reduced modulo the complex modulus).
    pub fn to_vector(&self, slice: &Slice, x: &CobarElement) -> Result<SparseVec> {
        if x.s() != slice.s {
            return Err(Error::DegreeMismatch(format!("cochain of degree {} in slice s={}", x.s(), slice.s)));
        }
        let mut raw = Vec::with_capacity(x.num_terms());
        for (w, mono, c) in x.terms() {
            let (off, _) = slice
                .block(w)
                .ok_or_else(|| Error::DegreeMismatch(format!("word {w} outside bidegree ({}, {})", slice.s, slice.t)))?;
            let id = self.monomial_id(mono).ok_or_else(|| Error::DegreeMismatch("monomial out of range".into()))?;
            raw.push((off + id, c.residue_u64(self.modulus)?));
        }
        Ok(SparseVec::from_unsorted(raw, self.modulus))
    }

    /// Cochain with the given coordinates; residues are lifted to `(-m/2, m/2]`.
    pub fn from_vector(&self, slice: &Slice, v: &SparseVec) -> CobarElement {
        let mut x = CobarElement::zero(&self.spec, slice.s);
        let m = self.modulus as i64;
        for &(i, c) in &v.entries {
            let (mono, w) = self.basis_element(slice, i as usize);
            let mut c = c as i64;
            if c > m / 2 {
                c -= m;
            }
            x.add_term(w, mono, &LocalRational::from(c)).expect("integer coefficient");
        }
        x
    }

    pub fn reduce_coefficient(&self, c: i64) -> u32 {
        self.reduce_i64(c)
    }
}

/// Basis of the `(s, t)` cochains as `(coefficient monomial, word)` pairs.
pub fn cochain_basis(spec: &Arc<AlgebroidSpec>, s: usize, t: u32) -> Vec<(Monomial, CobarWord)> {
    let cx = CobarComplex::new(spec, modulus_for(spec, 1), t);
    let slice = cx.slice(s, t);
    (0..slice.dim()).map(|i| cx.basis_element(&slice, i)).collect()
}

/// `p` for quotient specs, `p^k` otherwise.
pub fn modulus_for(spec: &AlgebroidSpec, k: u32) -> u64 {
    match spec.ideal() {
        Some(_) => spec.prime(),
        None => spec.prime().pow(k),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebroid::EtaCache;

    #[test]
    fn basis_examples() {
        let i4 = AlgebroidSpec::reduced().quotient(4).unwrap();
        let b = cochain_basis(&i4, 2, 40);
        let ws: Vec<String> = b.iter().map(|(_, w)| w.to_string()).collect();
        assert_eq!(ws.len(), 4);
        for w in ["[r|r^4]", "[r^2|r^3]", "[r^3|r^2]", "[r^4|r]"] {
            assert!(ws.contains(&w.to_string()));
        }
        let full = AlgebroidSpec::full();
        let b0: Vec<String> = cochain_basis(&full, 0, 16).iter().map(|(m, _)| m.display(full.base().names())).collect();
        assert_eq!(b0, ["a2", "a1^2"]);
        for spec in [full, AlgebroidSpec::reduced(), i4] {
            let b1 = cochain_basis(&spec, 1, 8);
            assert_eq!(b1.len(), 1);
            assert_eq!(b1[0].1, CobarWord::new(&[1]));
        }
    }

    #[test]
    fn matrix_agrees_with_exact_differential() {
        for spec in [
            AlgebroidSpec::full(),
            AlgebroidSpec::reduced(),
            AlgebroidSpec::reduced().quotient(1).unwrap(),
            AlgebroidSpec::full().quotient(0).unwrap(),
        ] {
            let modulus = modulus_for(&spec, 3);
            let cx = CobarComplex::new(&spec, modulus, 64);
            let mut eta = EtaCache::new(&spec);
            for s in 0..3 {
                for t in [40u32, 56, 64] {
                    let (src, dst, cols) = cx.differential_matrix(s, t);
                    for (i, col) in cols.iter().enumerate() {
                        let (m, w) = cx.basis_element(&src, i);
                        let x = CobarElement::basis(&spec, m, w);
                        let dx = x.differential(&mut eta).unwrap();
                        assert_eq!(&cx.to_vector(&dst, &dx).unwrap(), col, "{} d({x})", spec.label());
                    }
                }
            }
        }
    }

    #[test]
    fn d_squared_is_zero_mod_p() {
        let spec = AlgebroidSpec::reduced().quotient(0).unwrap();
        let cx = CobarComplex::new(&spec, 5, 120);
        for s in 0..3 {
            let (_, mid, c1) = cx.differential_matrix(s, 120);
            let (_, dst, c2) = cx.differential_matrix(s + 1, 120);
            for col in &c1 {
                let mut acc = vec![0u64; dst.dim()];
                for &(r, v) in &col.entries {
                    for &(r2, v2) in &c2[r as usize].entries {
                        acc[r2 as usize] = (acc[r2 as usize] + v as u64 * v2 as u64) % 5;
                    }
                }
                assert!(acc.iter().all(|&x| x == 0));
            }
            assert_eq!(mid.dim(), c2.len());
        }
    }
}
