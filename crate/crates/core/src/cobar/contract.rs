//! Contraction of the cobar complex onto a small model with the same cohomology.
//!
//! The differential splits as `d = d0 + delta`. `d0` only splits word letters, so it
//! keeps the coefficient monomial and the word weight; `delta` prepends an `r^j`,
//! `j >= 1`, coming from the right unit and strictly raises the weight. For a fixed
//! weight `d0` is the cobar complex of the coalgebra of powers of `r`, whose cohomology
//! is tiny. A deformation retraction of each weight block onto its cohomology is built
//! by elimination; perturbing it by `delta` gives the model differential
//! `D = p sum (delta h)^n delta i` and comparison maps `i'`, `p'`, `h'` with
//! `i' p' - 1 = d h' + h' d`. All of these preserve filtrations by coefficient
//! monomials, so Bockstein pages of the model agree with those of the full complex.
//!
//! Over `Z/5^K` the retraction needs unit pivots in every weight block. That holds for
//! the reduced presentation (its `r`-coalgebra has free cohomology) but fails for the
//! full one, where `d0[r^5] = -5 b`.

use std::sync::{Arc, Mutex, OnceLock};

use num_integer::binomial;
use rayon::prelude::*;
use rustc_hash::FxHashMap;

use super::complex::CobarComplex;
use super::element::CobarElement;
use super::word::{words, CobarWord};
use crate::algebroid::AlgebroidSpec;
use crate::coefficients::{local_smith, LocalRational, LocalRing, SparseVec};
use crate::error::{Error, Result};
use crate::gradedpoly::Monomial;

/// Sparse cochain of the full complex in a fixed bidegree, keyed by `(word, monomial id)`.
/// The monomial id indexes the coefficient monomials of degree `t - |word|`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BigVec {
    terms: FxHashMap<(CobarWord, u32), u64>,
}

impl BigVec {
    pub fn new() -> Self {
        BigVec::default()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(CobarWord, u32), &u64)> {
        self.terms.iter()
    }

    pub fn get(&self, w: &CobarWord, m: u32) -> u64 {
        self.terms.get(&(w.clone(), m)).copied().unwrap_or(0)
    }

    pub fn add(&mut self, w: CobarWord, m: u32, c: u64, ring: LocalRing) {
        let c = c % ring.modulus;
        if c == 0 {
            return;
        }
        match self.terms.entry((w, m)) {
            std::collections::hash_map::Entry::Occupied(mut e) => {
                let v = (*e.get() + c) % ring.modulus;
                if v == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &BigVec, c: u64, ring: LocalRing) {
        for ((w, m), v) in &other.terms {
            self.add(w.clone(), *m, ring.mul(*v, c), ring);
        }
    }

    pub fn scale(&self, c: u64, ring: LocalRing) -> BigVec {
        let mut out = BigVec::new();
        out.add_scaled(self, c, ring);
        out
    }
}

#[derive(Clone, Copy, Debug)]
enum Kind {
    Critical(u32),
    Source,
    Boundary(u32),
}

struct WordTable {
    words: Vec<CobarWord>,
    index: FxHashMap<CobarWord, u32>,
}

/// Elimination of `d0` out of one weight block (columns already known to vanish skipped).
struct Elim {
    /// `(source word, pivot row in the next block, transform over this block)`
    pivots: Vec<(u32, u32, SparseVec)>,
    /// `(source word, cocycle over this block)`
    vanishing: Vec<(u32, SparseVec)>,
}

struct Boundary {
    column: SparseVec,
    lead_inv: u64,
    transform: SparseVec,
}

/// Retraction data of one weight block `(s, w)`.
struct Block {
    table: Arc<WordTable>,
    kind: Vec<Kind>,
    critical: Vec<u32>,
    cocycles: Vec<SparseVec>,
    boundaries: Vec<Boundary>,
    memo: Vec<OnceLock<(SparseVec, SparseVec)>>,
}

impl Block {
    /// Coordinates of `x` along the cohomology classes (`p`) and `h(x)` in the block below.
    fn decompose(&self, ring: LocalRing, x: &SparseVec) -> (SparseVec, SparseVec) {
        let mut pc: Vec<(u32, u64)> = Vec::new();
        let mut hb: FxHashMap<u32, u64> = FxHashMap::default();
        let mut pending: std::collections::BTreeMap<u32, u64> =
            x.entries.iter().map(|&(i, v)| (i, v as u64)).collect();
        // entries above a boundary pivot are non-units, so every pass gains a factor p
        for _ in 0..=ring.k + 1 {
            if pending.is_empty() {
                break;
            }
            let mut carry: std::collections::BTreeMap<u32, u64> = Default::default();
            while let Some((idx, val)) = pending.pop_last() {
                if val == 0 {
                    continue;
                }
                match self.kind[idx as usize] {
                    Kind::Critical(c) => {
                        pc.push((c, val));
                        for &(j, v) in &self.cocycles[c as usize].entries {
                            if j != idx {
                                let slot = pending.entry(j).or_insert(0);
                                *slot = ring.sub(*slot, ring.mul(val, v as u64));
                            }
                        }
                    }
                    Kind::Source => {}
                    Kind::Boundary(b) => {
                        let bd = &self.boundaries[b as usize];
                        let beta = ring.mul(val, bd.lead_inv);
                        let slot = hb.entry(b).or_insert(0);
                        *slot = (*slot + beta) % ring.modulus;
                        for &(j, v) in &bd.column.entries {
                            if j == idx {
                                continue;
                            }
                            let target = if j < idx { &mut pending } else { &mut carry };
                            let slot = target.entry(j).or_insert(0);
                            *slot = ring.sub(*slot, ring.mul(beta, v as u64));
                        }
                    }
                }
            }
            pending = carry;
        }
        debug_assert!(pending.values().all(|&v| v == 0), "decomposition did not converge");
        let p = SparseVec::from_unsorted(pc, ring.modulus);
        let mut h = Vec::new();
        for (b, c) in hb {
            for &(j, v) in &self.boundaries[b as usize].transform.entries {
                h.push((j, ring.mul(c, v as u64)));
            }
        }
        (p, SparseVec::from_unsorted(h, ring.modulus))
    }

    fn word_maps(&self, ring: LocalRing, e: u32) -> &(SparseVec, SparseVec) {
        self.memo[e as usize].get_or_init(|| self.decompose(ring, &SparseVec { entries: vec![(e, 1)] }))
    }
}

/// A basis element of the model: cohomology class `class` of the weight-`weight`
/// block, times coefficient monomial `mono` of degree `t - 8 weight`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub weight: u32,
    pub class: u32,
    pub mono: u32,
}

/// Basis of the model in bidegree `(s, t)`: by decreasing weight, then class, then monomial.
#[derive(Clone, Debug)]
pub struct ModelSlice {
    pub s: usize,
    pub t: u32,
    pub cells: Vec<Cell>,
    index: FxHashMap<Cell, u32>,
}

impl ModelSlice {
    pub fn dim(&self) -> usize {
        self.cells.len()
    }

    pub fn index_of(&self, c: &Cell) -> Option<u32> {
        self.index.get(c).copied()
    }
}

type Cache<T> = Mutex<FxHashMap<(usize, u32), Arc<T>>>;

pub struct Contraction {
    cx: Arc<CobarComplex>,
    ring: LocalRing,
    tables: Cache<WordTable>,
    elims: Mutex<FxHashMap<(usize, u32), Result<Arc<Elim>>>>,
    blocks: Mutex<FxHashMap<(usize, u32), Result<Arc<Block>>>>,
}

fn cached<T>(map: &Mutex<FxHashMap<(usize, u32), Arc<T>>>, key: (usize, u32), make: impl FnOnce() -> T) -> Arc<T> {
    if let Some(v) = map.lock().expect("cache lock").get(&key) {
        return v.clone();
    }
    let v = Arc::new(make());
    map.lock().expect("cache lock").entry(key).or_insert(v).clone()
}

impl Contraction {
    pub fn new(cx: Arc<CobarComplex>) -> Self {
        let m = cx.modulus();
        let p = cx.spec().prime();
        let mut k = 0;
        let mut x = 1;
        while x < m {
            x *= p;
            k += 1;
        }
        assert_eq!(x, m, "modulus must be a prime power");
        Contraction {
            ring: LocalRing::new(p, k),
            cx,
            tables: Mutex::default(),
            elims: Mutex::default(),
            blocks: Mutex::default(),
        }
    }

    pub fn complex(&self) -> &Arc<CobarComplex> {
        &self.cx
    }

    pub fn spec(&self) -> &Arc<AlgebroidSpec> {
        self.cx.spec()
    }

    pub fn ring(&self) -> LocalRing {
        self.ring
    }

    fn table(&self, s: usize, w: u32) -> Arc<WordTable> {
        let max = self.cx.spec().max_r_exponent();
        cached(&self.tables, (s, w), || {
            let ws = words(s, w, max);
            let index = ws.iter().enumerate().map(|(i, x)| (x.clone(), i as u32)).collect();
            WordTable { words: ws, index }
        })
    }

    /// `d0` of word `e` of block `(s, w)`, in the coordinates of block `(s + 1, w)`.
    fn d0_column(&self, word: &CobarWord, next: &WordTable) -> SparseVec {
        let m = self.ring.modulus;
        let mut raw = Vec::new();
        for (pos, &e) in word.exps().iter().enumerate() {
            for a in 1..e {
                let b = binomial(e as u64, a as u64) % m;
                let c = if pos % 2 == 0 { (m - b) % m } else { b };
                raw.push((next.index[&word.split_at_factor(pos, a, e - a)], c));
            }
        }
        SparseVec::from_unsorted(raw, m)
    }

    fn elim(&self, s: usize, w: u32) -> Result<Arc<Elim>> {
        if let Some(v) = self.elims.lock().expect("cache lock").get(&(s, w)) {
            return v.clone();
        }
        let here = self.table(s, w);
        let mut skip = vec![false; here.words.len()];
        if s > 0 {
            for &(_, row, _) in &self.elim(s - 1, w)?.pivots {
                skip[row as usize] = true;
            }
        }
        let made = self.compute_elim(s, w, &skip).map(Arc::new);
        self.elims.lock().expect("cache lock").entry((s, w)).or_insert(made).clone()
    }

    fn compute_elim(&self, s: usize, w: u32, skip: &[bool]) -> Result<Elim> {
        let here = self.table(s, w);
        let next = self.table(s + 1, w);
        let ring = self.ring;
        let cols_idx: Vec<u32> = (0..here.words.len() as u32).filter(|&i| !skip[i as usize]).collect();
        let cols: Vec<SparseVec> = cols_idx.iter().map(|&i| self.d0_column(&here.words[i as usize], &next)).collect();
        let ls = local_smith(ring, next.words.len(), &cols, true);
        let remap = |t: &SparseVec| SparseVec {
            entries: t.entries.iter().map(|&(j, v)| (cols_idx[j as usize], v)).collect(),
        };
        let mut pivots = Vec::with_capacity(ls.pivots.len());
        for p in &ls.pivots {
            if p.valuation > 0 {
                return Err(Error::Unsupported(format!(
                    "r-coalgebra block (s={s}, weight={w}) has non-unit Smith invariants over Z/{}",
                    ring.modulus
                )));
            }
            pivots.push((cols_idx[p.source], p.row, remap(p.transform.as_ref().expect("tracked"))));
        }
        let mut vanishing = Vec::with_capacity(ls.vanishing.len());
        for (src, t) in &ls.vanishing {
            let z = remap(t.as_ref().expect("tracked"));
            // a residual that only vanished at a deeper level hides a non-unit invariant
            if !self.apply_d0(&here, &next, &z).is_zero() {
                return Err(Error::Unsupported(format!(
                    "r-coalgebra block (s={s}, weight={w}) has non-unit Smith invariants over Z/{}",
                    ring.modulus
                )));
            }
            vanishing.push((cols_idx[*src], z));
        }
        Ok(Elim { pivots, vanishing })
    }

    fn apply_d0(&self, here: &WordTable, next: &WordTable, x: &SparseVec) -> SparseVec {
        let ring = self.ring;
        let mut raw = Vec::new();
        for &(i, c) in &x.entries {
            for &(j, v) in &self.d0_column(&here.words[i as usize], next).entries {
                raw.push((j, ring.mul(c as u64, v as u64)));
            }
        }
        SparseVec::from_unsorted(raw, ring.modulus)
    }

    fn block(&self, s: usize, w: u32) -> Result<Arc<Block>> {
        if let Some(v) = self.blocks.lock().expect("cache lock").get(&(s, w)) {
            return v.clone();
        }
        let made = self.compute_block(s, w).map(Arc::new);
        self.blocks.lock().expect("cache lock").entry((s, w)).or_insert(made).clone()
    }

    fn compute_block(&self, s: usize, w: u32) -> Result<Block> {
        let table = self.table(s, w);
        let n = table.words.len();
        let ring = self.ring;
        let mut kind = vec![Kind::Source; n];
        let mut boundaries = Vec::new();
        if s > 0 {
            let below = self.elim(s - 1, w)?;
            let lower = self.table(s - 1, w);
            for (_, row, t) in &below.pivots {
                let column = self.apply_d0(&lower, &table, t);
                let lead = column.get(*row) as u64;
                debug_assert!(ring.is_unit(lead));
                kind[*row as usize] = Kind::Boundary(boundaries.len() as u32);
                boundaries.push(Boundary { column, lead_inv: ring.inv(lead), transform: t.clone() });
            }
        }
        let here = self.elim(s, w)?;
        let mut critical = Vec::new();
        let mut cocycles = Vec::new();
        for (src, z) in &here.vanishing {
            debug_assert!(matches!(kind[*src as usize], Kind::Source));
            kind[*src as usize] = Kind::Critical(critical.len() as u32);
            critical.push(*src);
            cocycles.push(z.clone());
        }
        let memo = (0..n).map(|_| OnceLock::new()).collect();
        Ok(Block { table, kind, critical, cocycles, boundaries, memo })
    }

    /// Number of cohomology classes of the `r`-coalgebra in length `s`, weight `w`.
    pub fn classes(&self, s: usize, w: u32) -> Result<usize> {
        Ok(self.block(s, w)?.critical.len())
    }

    /// Leading word of class `class` in block `(s, w)`.
    pub fn class_word(&self, s: usize, w: u32, class: u32) -> Result<CobarWord> {
        let b = self.block(s, w)?;
        Ok(b.table.words[b.critical[class as usize] as usize].clone())
    }

    pub fn slice(&self, s: usize, t: u32) -> Result<ModelSlice> {
        let rd = self.cx.spec().r_degree();
        let mut cells = Vec::new();
        if t.is_multiple_of(rd) && t <= self.cx.t_max() {
            let n = t / rd;
            for w in (0..=n).rev() {
                let k = self.classes(s, w)?;
                let nm = self.cx.monomials((n - w) as usize).len() as u32;
                for class in 0..k as u32 {
                    for mono in 0..nm {
                        cells.push(Cell { weight: w, class, mono });
                    }
                }
            }
        }
        let index = cells.iter().enumerate().map(|(i, c)| (*c, i as u32)).collect();
        Ok(ModelSlice { s, t, cells, index })
    }

    pub fn cell_monomial(&self, slice: &ModelSlice, i: usize) -> &Monomial {
        let c = slice.cells[i];
        let n = slice.t / self.cx.spec().r_degree() - c.weight;
        &self.cx.monomials(n as usize)[c.mono as usize]
    }

    /// `i`: model vector to cochain.
    fn include(&self, slice: &ModelSlice, v: &SparseVec) -> Result<BigVec> {
        let ring = self.ring;
        let mut out = BigVec::new();
        for &(i, c) in &v.entries {
            let cell = slice.cells[i as usize];
            let b = self.block(slice.s, cell.weight)?;
            for &(j, z) in &b.cocycles[cell.class as usize].entries {
                out.add(b.table.words[j as usize].clone(), cell.mono, ring.mul(c as u64, z as u64), ring);
            }
        }
        Ok(out)
    }

    /// `delta`: the right-unit part of `d`, `C^{s,t} -> C^{s+1,t}`.
    fn delta(&self, t: u32, x: &BigVec) -> BigVec {
        let ring = self.ring;
        let n = t / self.cx.spec().r_degree();
        let mut out = BigVec::new();
        for ((w, m), &c) in x.iter() {
            let nw = (n - w.weight()) as usize;
            for &(j, id2, cc) in self.cx.eta_terms(nw, *m) {
                out.add(w.prepend(j), id2, ring.mul(c, cc as u64), ring);
            }
        }
        out
    }

    /// `-h`: `C^{s,t} -> C^{s-1,t}`.
    fn homotopy_step(&self, s: usize, x: &BigVec) -> Result<BigVec> {
        let ring = self.ring;
        let mut out = BigVec::new();
        if s == 0 {
            return Ok(out);
        }
        let mut blocks: FxHashMap<u32, Arc<Block>> = FxHashMap::default();
        for ((w, m), &c) in x.iter() {
            let wt = w.weight();
            if let std::collections::hash_map::Entry::Vacant(e) = blocks.entry(wt) {
                e.insert(self.block(s, wt)?);
            }
            let b = &blocks[&wt];
            let lower = self.table(s - 1, wt);
            let (_, h) = b.word_maps(ring, b.table.index[w]);
            for &(j, v) in &h.entries {
                out.add(lower.words[j as usize].clone(), *m, ring.neg(ring.mul(c, v as u64)), ring);
            }
        }
        Ok(out)
    }

    /// `p`: `C^{s,t} -> ` model, accumulated into `acc`.
    fn project_step(&self, slice: &ModelSlice, x: &BigVec, acc: &mut FxHashMap<u32, u64>) -> Result<()> {
        let ring = self.ring;
        let mut blocks: FxHashMap<u32, Arc<Block>> = FxHashMap::default();
        for ((w, m), &c) in x.iter() {
            let wt = w.weight();
            if let std::collections::hash_map::Entry::Vacant(e) = blocks.entry(wt) {
                e.insert(self.block(slice.s, wt)?);
            }
            let b = &blocks[&wt];
            let (p, _) = b.word_maps(ring, b.table.index[w]);
            for &(class, v) in &p.entries {
                let idx = slice.index[&Cell { weight: wt, class, mono: *m }];
                let slot = acc.entry(idx).or_insert(0);
                *slot = (*slot + ring.mul(c, v as u64)) % ring.modulus;
            }
        }
        Ok(())
    }

    fn finish(&self, acc: FxHashMap<u32, u64>) -> SparseVec {
        SparseVec::from_unsorted(acc.into_iter().collect(), self.ring.modulus)
    }

    /// Column of the model differential for cell `i` of `src`.
    pub fn differential_column(&self, src: &ModelSlice, dst: &ModelSlice, i: usize) -> Result<SparseVec> {
        let mut x = self.include(src, &SparseVec { entries: vec![(i as u32, 1)] })?;
        let mut acc = FxHashMap::default();
        loop {
            let y = self.delta(src.t, &x);
            if y.is_empty() {
                break;
            }
            self.project_step(dst, &y, &mut acc)?;
            x = self.homotopy_step(dst.s, &y)?;
            if x.is_empty() {
                break;
            }
        }
        Ok(self.finish(acc))
    }

    /// The model differential out of bidegree `(s, t)`.
    pub fn differential(&self, s: usize, t: u32) -> Result<(ModelSlice, ModelSlice, Vec<SparseVec>)> {
        let src = self.slice(s, t)?;
        let dst = self.slice(s + 1, t)?;
        let cols: Result<Vec<SparseVec>> =
            (0..src.dim()).into_par_iter().map(|i| self.differential_column(&src, &dst, i)).collect();
        Ok((src, dst, cols?))
    }

    /// `i'`: a model cocycle to a cocycle of the full complex.
    pub fn lift(&self, slice: &ModelSlice, v: &SparseVec) -> Result<BigVec> {
        let ring = self.ring;
        let mut x = self.include(slice, v)?;
        let mut total = x.clone();
        loop {
            let y = self.delta(slice.t, &x);
            x = self.homotopy_step(slice.s + 1, &y)?;
            if x.is_empty() {
                break;
            }
            total.add_scaled(&x, 1, ring);
        }
        Ok(total)
    }

    /// `p'`: a cochain of the full complex to the model.
    pub fn project(&self, slice: &ModelSlice, z: &BigVec) -> Result<SparseVec> {
        let mut acc = FxHashMap::default();
        self.project_step(slice, z, &mut acc)?;
        let mut x = z.clone();
        loop {
            let h = self.homotopy_step(slice.s, &x)?;
            if h.is_empty() {
                break;
            }
            x = self.delta(slice.t, &h);
            if x.is_empty() {
                break;
            }
            self.project_step(slice, &x, &mut acc)?;
        }
        Ok(self.finish(acc))
    }

    /// `h'`: `C^{s,t} -> C^{s-1,t}` with `i' p' - 1 = d h' + h' d`.
    pub fn homotopy(&self, s: usize, t: u32, z: &BigVec) -> Result<BigVec> {
        let ring = self.ring;
        let mut u = self.homotopy_step(s, z)?;
        let mut total = u.clone();
        while !u.is_empty() {
            let y = self.delta(t, &u);
            u = self.homotopy_step(s, &y)?;
            total.add_scaled(&u, 1, ring);
        }
        Ok(total)
    }
}

/// Cochain of the full complex from an element (coefficients reduced into the ring).
pub fn big_from_element(cx: &CobarComplex, x: &CobarElement) -> Result<BigVec> {
    let p = cx.spec().prime();
    let m = cx.modulus();
    let mut k = 0;
    let mut q = 1;
    while q < m {
        q *= p;
        k += 1;
    }
    let ring = LocalRing::new(p, k);
    let mut out = BigVec::new();
    for (w, mono, c) in x.terms() {
        let id = cx
            .monomial_id(mono)
            .ok_or_else(|| Error::DegreeMismatch(format!("monomial of degree {} beyond the window", mono.degree())))?;
        out.add(w.clone(), id, c.residue_u64(m)?, ring);
    }
    Ok(out)
}

/// Element with the symmetric lift of each residue.
pub fn big_to_element(cx: &CobarComplex, s: usize, t: u32, x: &BigVec) -> CobarElement {
    let spec = cx.spec();
    let n = t / spec.r_degree();
    let m = cx.modulus() as i64;
    let mut keys: Vec<_> = x.iter().collect();
    keys.sort();
    let mut out = CobarElement::zero(spec, s);
    for ((w, id), &c) in keys {
        let mono = cx.monomials((n - w.weight()) as usize)[*id as usize].clone();
        let mut c = c as i64;
        if c > m / 2 {
            c -= m;
        }
        out.add_term(w.clone(), mono, &LocalRational::from(c)).expect("integer coefficient");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cobar::complex::modulus_for;
    use crate::coefficients::rank_mod_p;

    fn direct_dims(cx: &CobarComplex, s: usize, t: u32) -> usize {
        let (src, _, cols) = cx.differential_matrix(s, t);
        let r_out = rank_mod_p(5, cx.slice(s + 1, t).dim(), &cols);
        let r_in = if s == 0 {
            0
        } else {
            let (_, dst, c) = cx.differential_matrix(s - 1, t);
            rank_mod_p(5, dst.dim(), &c)
        };
        src.dim() - r_out - r_in
    }

    fn model_dims(c: &Contraction, s: usize, t: u32) -> usize {
        let (src, dst, cols) = c.differential(s, t).unwrap();
        let r_out = rank_mod_p(5, dst.dim(), &cols);
        let r_in = if s == 0 {
            0
        } else {
            let (_, d2, c2) = c.differential(s - 1, t).unwrap();
            rank_mod_p(5, d2.dim(), &c2)
        };
        src.dim() - r_out - r_in
    }

    #[test]
    fn model_has_the_same_cohomology() {
        for spec in [
            AlgebroidSpec::reduced().quotient(0).unwrap(),
            AlgebroidSpec::reduced().quotient(1).unwrap(),
            AlgebroidSpec::full().quotient(0).unwrap(),
            AlgebroidSpec::full().quotient(2).unwrap(),
        ] {
            let cx = Arc::new(CobarComplex::new(&spec, 5, 96));
            let c = Contraction::new(cx.clone());
            for t in (0..=96).step_by(8) {
                for s in 0..3 {
                    assert_eq!(model_dims(&c, s, t), direct_dims(&cx, s, t), "{} ({s},{t})", spec.label());
                }
            }
        }
    }

    #[test]
    fn model_differential_squares_to_zero_and_lifts_are_cocycles() {
        let spec = AlgebroidSpec::reduced();
        let m = modulus_for(&spec, 3);
        let cx = Arc::new(CobarComplex::new(&spec, m, 120));
        let c = Contraction::new(cx.clone());
        let ring = c.ring();
        for t in [40u32, 80, 120] {
            let (src, mid, d1) = c.differential(1, t).unwrap();
            let (_, dst, d2) = c.differential(2, t).unwrap();
            for col in &d1 {
                let mut acc = vec![0u64; dst.dim()];
                for &(r, v) in &col.entries {
                    for &(r2, v2) in &d2[r as usize].entries {
                        acc[r2 as usize] = (acc[r2 as usize] + ring.mul(v as u64, v2 as u64)) % ring.modulus;
                    }
                }
                assert!(acc.iter().all(|&x| x == 0));
            }
            // d i'(v) = i'(D v): check on every cell through the big complex
            let big_dst = cx.slice(2, t);
            let (_, _, big_cols) = cx.differential_matrix(1, t);
            let big_src = cx.slice(1, t);
            for (i, col) in d1.iter().enumerate() {
                let lifted = c.lift(&src, &SparseVec { entries: vec![(i as u32, 1)] }).unwrap();
                let x = cx.to_vector(&big_src, &big_to_element(&cx, 1, t, &lifted)).unwrap();
                let mut acc = vec![0u64; big_dst.dim()];
                for &(r, v) in &x.entries {
                    for &(r2, v2) in &big_cols[r as usize].entries {
                        acc[r2 as usize] = (acc[r2 as usize] + ring.mul(v as u64, v2 as u64)) % ring.modulus;
                    }
                }
                let lhs = SparseVec::from_unsorted(acc.into_iter().enumerate().map(|(i, v)| (i as u32, v)).collect(), ring.modulus);
                let rhs = c.lift(&mid, col).unwrap();
                let rhs = cx.to_vector(&big_dst, &big_to_element(&cx, 2, t, &rhs)).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn full_presentation_is_not_contractible_integrally() {
        let spec = AlgebroidSpec::full();
        let cx = Arc::new(CobarComplex::new(&spec, 625, 40));
        let c = Contraction::new(cx);
        assert!(matches!(c.differential(1, 40), Err(Error::Unsupported(_))));
    }
}
