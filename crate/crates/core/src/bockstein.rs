//! Bockstein spectral sequences of the `a_k`-adic and 5-adic filtrations.
//!
//! Everything happens one internal degree at a time on the contracted model. For the
//! `a_k`-adic filtration of `A/I_{k-1}` all comparison maps commute with `a_k`, so the
//! filtration of the model by the `a_k`-exponent of a cell computes the same pages.
//! Ranks of all filtered pieces of a differential come from a single elimination with
//! rows and columns sorted by decreasing filtration: the number of pivots whose
//! column sits in `F^a` and whose pivot row sits outside `F^b` is the rank of
//! `F^a -> C / F^b`.

use std::sync::{Arc, Mutex, OnceLock};

use rustc_hash::FxHashMap;
use serde::Serialize;
use serde_json::json;

use crate::algebroid::AlgebroidSpec;
use crate::cobar::{CobarElement, CobarEngine};
use crate::coefficients::{local_smith, Echelon, LocalRational, LocalRing, SparseVec};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Filter {
    /// Powers of `a_k` (1-based) on `A/I_{k-1}`.
    Generator(usize),
    /// Powers of 5 on an integral presentation.
    Prime,
}

#[derive(Clone, Debug)]
pub struct FiltrationSpec {
    pub base: Arc<AlgebroidSpec>,
    pub filter: Filter,
}

impl FiltrationSpec {
    /// The `a_k`-adic filtration of `base`, which must be the quotient by `I_{k-1}`.
    pub fn generator(base: &Arc<AlgebroidSpec>, k: usize) -> Result<Self> {
        if !(1..base.ngens()).contains(&k) && !(k == base.ngens() && k >= 1) {
            return Err(Error::IndexOutOfRange(k));
        }
        if base.ideal() != Some(k - 1) {
            return Err(Error::SpecMismatch);
        }
        Ok(FiltrationSpec { base: base.clone(), filter: Filter::Generator(k) })
    }

    /// The `a_k`-adic filtration of the reduced presentation mod `I_{k-1}`.
    pub fn adding(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::IndexOutOfRange(k));
        }
        FiltrationSpec::generator(&AlgebroidSpec::reduced().quotient(k - 1)?, k)
    }

    pub fn five_adic(base: &Arc<AlgebroidSpec>) -> Result<Self> {
        if base.ideal().is_some() {
            return Err(Error::SpecMismatch);
        }
        Ok(FiltrationSpec { base: base.clone(), filter: Filter::Prime })
    }

    pub fn label(&self) -> String {
        match self.filter {
            Filter::Generator(k) => format!("a{k}-adic on {}", self.base.label()),
            Filter::Prime => format!("5-adic on {}", self.base.label()),
        }
    }

    /// Filtration of a monomial; `None` for the 5-adic filtration.
    fn monomial_filtration(&self, exps: &[u16]) -> Option<u32> {
        match self.filter {
            Filter::Generator(k) => Some(exps[k - 1] as u32),
            Filter::Prime => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PageEntry {
    pub s: usize,
    pub t: u32,
    pub u: u32,
    pub dim: usize,
}

/// A page differential: the class `vector` in the working complex at `(s, t, u)`.
#[derive(Clone, Debug)]
pub struct PageClass {
    pub s: usize,
    pub t: u32,
    pub u: u32,
    pub vector: SparseVec,
}

/// Filtration data of the differential out of one bidegree.
struct Filtered {
    col_u: Vec<u32>,
    row_u: Vec<u32>,
    /// `(filtration of pivot column, filtration of pivot row)`
    pairs: Vec<(u32, u32)>,
}

impl Filtered {
    /// Rank of `F^a -> C / F^b`.
    fn rank(&self, a: i64, b: i64) -> usize {
        self.pairs.iter().filter(|&&(c, r)| c as i64 >= a && (r as i64) < b).count()
    }

    fn dim_f(&self, p: i64) -> usize {
        self.col_u.iter().filter(|&&u| u as i64 >= p).count()
    }
}

pub struct Bockstein {
    f: FiltrationSpec,
    engine: CobarEngine,
    mod_p: OnceLock<CobarEngine>,
    filtered: Mutex<FxHashMap<(usize, u32), Arc<Filtered>>>,
    smith: Mutex<FxHashMap<(usize, u32), (usize, Vec<u32>)>>,
}

impl Bockstein {
    pub fn new(f: FiltrationSpec, t_max: u32) -> Self {
        Bockstein::with_precision(f, t_max, crate::cobar::DEFAULT_PRECISION)
    }

    pub fn with_precision(f: FiltrationSpec, t_max: u32, k: u32) -> Self {
        let engine = CobarEngine::with_precision(&f.base, t_max, k);
        Bockstein { f, engine, mod_p: OnceLock::new(), filtered: Mutex::default(), smith: Mutex::default() }
    }

    pub fn filtration(&self) -> &FiltrationSpec {
        &self.f
    }

    pub fn engine(&self) -> &CobarEngine {
        &self.engine
    }

    fn cell_filtrations(&self, s: usize, t: u32) -> Result<Vec<u32>> {
        (0..self.engine.dim(s, t)?)
            .map(|i| {
                let m = self.engine.cell_monomial(s, t, i)?;
                Ok(self.f.monomial_filtration(m.exps()).expect("generator filtration"))
            })
            .collect()
    }

    fn filtered(&self, s: usize, t: u32) -> Result<Arc<Filtered>> {
        if let Some(f) = self.filtered.lock().expect("cache lock").get(&(s, t)) {
            return Ok(f.clone());
        }
        let col_u = self.cell_filtrations(s, t)?;
        let row_u = self.cell_filtrations(s + 1, t)?;
        let cols = self.engine.matrix(s, t)?;
        // rows by decreasing filtration so that the elimination's maximal pivot row
        // has the least filtration available
        let mut rows: Vec<u32> = (0..row_u.len() as u32).collect();
        rows.sort_by_key(|&i| (std::cmp::Reverse(row_u[i as usize]), i));
        let mut new_row = vec![0u32; rows.len()];
        for (pos, &i) in rows.iter().enumerate() {
            new_row[i as usize] = pos as u32;
        }
        let mut order: Vec<usize> = (0..col_u.len()).collect();
        order.sort_by_key(|&j| (std::cmp::Reverse(col_u[j]), j));
        let p = self.f.base.prime();
        let permuted: Vec<SparseVec> = order
            .iter()
            .map(|&j| SparseVec::from_unsorted(cols[j].entries.iter().map(|&(r, v)| (new_row[r as usize], v as u64 % p)).collect(), p))
            .collect();
        let ls = local_smith(LocalRing::new(p, 1), rows.len(), &permuted, false);
        let pairs = ls.pivots.iter().map(|pv| (col_u[order[pv.source]], row_u[rows[pv.row as usize] as usize])).collect();
        let made = Arc::new(Filtered { col_u, row_u, pairs });
        self.filtered.lock().expect("cache lock").insert((s, t), made.clone());
        Ok(made)
    }

    fn smith_data(&self, s: usize, t: u32) -> Result<(usize, Vec<u32>)> {
        if let Some(x) = self.smith.lock().expect("cache lock").get(&(s, t)) {
            return Ok(x.clone());
        }
        let x = self.engine.smith_data(s, t)?;
        self.smith.lock().expect("cache lock").insert((s, t), x.clone());
        Ok(x)
    }

    fn gen_degree(&self) -> u32 {
        match self.f.filter {
            Filter::Generator(k) => self.f.base.r_degree() * k as u32,
            Filter::Prime => 0,
        }
    }

    /// `dim E_r^{s,t,u}`; `r = None` means `E_infinity`.
    pub fn page_dimension(&self, r: Option<u32>, s: usize, t: u32, u: u32) -> Result<usize> {
        match self.f.filter {
            Filter::Generator(_) => {
                let u_max = t / self.gen_degree().max(1) + 1;
                let r = r.unwrap_or(u_max + 1) as i64;
                let p = u as i64;
                let out = self.filtered(s, t)?;
                let mut dim = out.dim_f(p) as i64 - out.dim_f(p + 1) as i64 - out.rank(p, p + r) as i64
                    + out.rank(p + 1, p + r) as i64;
                if s > 0 {
                    let inn = self.filtered(s - 1, t)?;
                    dim += inn.rank(p - r + 1, p) as i64 - inn.rank(p - r + 1, p + 1) as i64;
                }
                Ok(dim as usize)
            }
            Filter::Prime => {
                let r = r.unwrap_or(u32::MAX);
                let (free, tors) = self.smith_data(s, t)?;
                let above = self.smith_data(s + 1, t)?.1;
                Ok(free + above.iter().filter(|&&e| e >= r).count() + tors.iter().filter(|&&e| e >= r || u < e).count())
            }
        }
    }

    /// Nonzero entries of `E_r` (`None` for `E_infinity`) with `s <= s_max`, `t <= t_max`.
    ///
    /// For the 5-adic filtration `u` runs up to the working precision, past which
    /// every page is constant in `u`.
    pub fn page_dimensions(&self, r: Option<u32>, s_max: usize, t_max: u32) -> Result<Vec<PageEntry>> {
        let step = self.f.base.r_degree();
        let mut out = Vec::new();
        for t in (0..=t_max.min(self.engine.t_max())).step_by(step as usize) {
            let u_max = match self.f.filter {
                Filter::Generator(_) => t / self.gen_degree(),
                Filter::Prime => self.engine.ring().k,
            };
            for s in 0..=s_max {
                for u in 0..=u_max {
                    let dim = self.page_dimension(r, s, t, u)?;
                    if dim > 0 {
                        out.push(PageEntry { s, t, u, dim });
                    }
                }
            }
        }
        Ok(out)
    }

    /// Smallest page from which every entry in the window equals `E_infinity`, searched up to `r_limit`.
    pub fn collapse_page(&self, s_max: usize, t_max: u32, r_limit: u32) -> Result<Option<u32>> {
        let inf = self.page_dimensions(None, s_max, t_max)?;
        for r in 1..=r_limit {
            if self.page_dimensions(Some(r), s_max, t_max)? == inf {
                return Ok(Some(r));
            }
        }
        Ok(None)
    }

    /// Filtration of a cochain: least `a_k`-exponent among its terms, or its 5-adic content.
    pub fn filtration_of(&self, x: &CobarElement) -> Result<u32> {
        match self.f.filter {
            Filter::Generator(k) => x
                .terms()
                .map(|(_, m, _)| m.exps()[k - 1] as u32)
                .min()
                .ok_or_else(|| Error::NotAPageCycle("zero cochain has no filtration".into())),
            Filter::Prime => Ok(x.content_valuation()?.max(0) as u32),
        }
    }

    /// `d_r` of the class of `source` in `E_r`, found by solving for a correction in `F^{u+1}`.
    pub fn page_differential(&self, source: &CobarElement, r: u32) -> Result<PageClass> {
        if r == 0 {
            return Err(Error::IndexOutOfRange(0));
        }
        if self.f.filter == Filter::Prime {
            return Err(Error::Unsupported("5-adic page differentials are computed by verify_differential with r = 1".into()));
        }
        let s = source.s();
        let t = source.degree().ok_or_else(|| Error::InhomogeneousInput(source.to_string()))?;
        let u = self.filtration_of(source)?;
        let p = self.f.base.prime();
        let out = self.filtered(s, t)?;
        let d = self.engine.matrix(s, t)?;
        let x = modp(&self.engine.project(source)?, p);
        let bound = (u + r) as i64;
        let below = |v: &SparseVec| {
            SparseVec { entries: v.entries.iter().copied().filter(|&(i, _)| (out.row_u[i as usize] as i64) < bound).collect() }
        };
        let dx = apply(&d, &x, out.row_u.len(), p);
        let cand: Vec<usize> = (0..out.col_u.len()).filter(|&j| out.col_u[j] > u).collect();
        let mut ech = Echelon::new(p, out.row_u.len());
        for &j in &cand {
            ech.insert(&below(&modp(&d[j], p)));
        }
        let (rem, combo) = ech.reduce(&below(&dx));
        if !rem.is_zero() {
            return Err(Error::NotAPageCycle(format!("no lift of {source} survives to E_{r}")));
        }
        let f = LocalRing::new(p, 1);
        let mut lifted: Vec<(u32, u64)> = x.entries.iter().map(|&(i, c)| (i, c as u64)).collect();
        for (i, c) in combo {
            lifted.push((cand[i as usize] as u32, f.neg(c)));
        }
        let lifted = SparseVec::from_unsorted(lifted, p);
        Ok(PageClass { s: s + 1, t, u: u + r, vector: apply(&d, &lifted, out.row_u.len(), p) })
    }

    /// Whether `d_r(source)` is a unit multiple of the nonzero `E_r` class of `target`.
    pub fn verify_differential(&self, source: &CobarElement, target: &CobarElement, r: u32) -> Result<bool> {
        if self.f.filter == Filter::Prime {
            return self.verify_prime(source, target, r);
        }
        let y = self.page_differential(source, r)?;
        let p = self.f.base.prime();
        let (s, t, pu) = (y.s, y.t, y.u as i64);
        if target.s() != s || target.degree() != Some(t) {
            return Err(Error::DegreeMismatch(format!("target is not in bidegree ({s},{t})")));
        }
        let tv = modp(&self.engine.project(target)?, p);
        let here = self.filtered(s, t)?;
        if tv.entries.iter().any(|&(i, _)| (here.col_u[i as usize] as i64) < pu) {
            return Err(Error::NotAPageCycle(format!("{target} is not in filtration {pu}")));
        }
        let dt = apply(&self.engine.matrix(s, t)?, &tv, here.row_u.len(), p);
        if dt.entries.iter().any(|&(i, _)| (here.row_u[i as usize] as i64) < pu + r as i64) {
            return Err(Error::NotAPageCycle(format!("{target} does not survive to E_{r}")));
        }
        // Z_{r-1}^{p+1} + d Z_{r-1}^{p-r+1}
        let mut ech = Echelon::new(p, here.col_u.len());
        for z in self.cycles(s, t, pu + 1, pu + r as i64)? {
            ech.insert(&z);
        }
        if s > 0 {
            let d = self.engine.matrix(s - 1, t)?;
            for z in self.cycles(s - 1, t, pu - r as i64 + 1, pu)? {
                ech.insert(&apply(&d, &z, here.col_u.len(), p));
            }
        }
        let ry = ech.reduce(&y.vector).0;
        let rt = ech.reduce(&tv).0;
        if rt.is_zero() {
            return Ok(false);
        }
        let f = LocalRing::new(p, 1);
        Ok((1..p).any(|c| SparseVec::from_unsorted(rt.entries.iter().map(|&(i, v)| (i, f.mul(v as u64, c))).collect(), p) == ry))
    }

    /// Basis of `{x in F^a : d x in F^b}` in bidegree `(s, t)`.
    fn cycles(&self, s: usize, t: u32, a: i64, b: i64) -> Result<Vec<SparseVec>> {
        let p = self.f.base.prime();
        let out = self.filtered(s, t)?;
        let d = self.engine.matrix(s, t)?;
        let cand: Vec<usize> = (0..out.col_u.len()).filter(|&j| out.col_u[j] as i64 >= a).collect();
        let cols: Vec<SparseVec> = cand
            .iter()
            .map(|&j| {
                let v = modp(&d[j], p);
                SparseVec { entries: v.entries.into_iter().filter(|&(i, _)| (out.row_u[i as usize] as i64) < b).collect() }
            })
            .collect();
        let ls = local_smith(LocalRing::new(p, 1), out.row_u.len(), &cols, true);
        Ok(ls
            .vanishing
            .iter()
            .map(|(_, z)| {
                let z = z.as_ref().expect("tracked");
                SparseVec::from_unsorted(z.entries.iter().map(|&(i, c)| (cand[i as usize] as u32, c as u64)).collect(), p)
            })
            .collect())
    }

    /// `d_1` of the 5-adic filtration: `d(source) / 5` against `target`, both read mod 5.
    fn verify_prime(&self, source: &CobarElement, target: &CobarElement, r: u32) -> Result<bool> {
        if r != 1 {
            return Err(Error::Unsupported("5-adic differentials are verified on the first page only".into()));
        }
        let five = LocalRational::new(1, 5)?;
        let y = source.d()?.scale(&five)?;
        if y.content_valuation().is_ok_and(|v| v < 0) {
            return Err(Error::NotAPageCycle(format!("{source} is not a cocycle mod 5")));
        }
        let q = self.f.base.quotient(0)?;
        let engine = self.mod_p.get_or_init(|| CobarEngine::new(&q, self.engine.t_max()));
        let y = y.reinterpret(&q)?;
        let target = target.reinterpret(&q)?;
        if !target.is_cocycle()? {
            return Err(Error::NotAPageCycle(format!("{target} is not a cocycle mod 5")));
        }
        if engine.is_zero_class(&target)? {
            return Ok(false);
        }
        engine.cohomologous_up_to_unit(&y, &target)
    }
}

fn modp(v: &SparseVec, p: u64) -> SparseVec {
    SparseVec::from_unsorted(v.entries.iter().map(|&(i, c)| (i, c as u64 % p)).collect(), p)
}

fn apply(cols: &[SparseVec], x: &SparseVec, _rows: usize, p: u64) -> SparseVec {
    let f = LocalRing::new(p, 1);
    let mut raw = Vec::new();
    for &(j, c) in &x.entries {
        for &(i, v) in &cols[j as usize].entries {
            raw.push((i, f.mul(c as u64, v as u64 % p)));
        }
    }
    SparseVec::from_unsorted(raw, p)
}

/// JSON page dump.
pub fn pages_json(f: &FiltrationSpec, r: Option<u32>, entries: &[PageEntry]) -> serde_json::Value {
    json!({
        "filtration": f.label(),
        "page": r.map_or_else(|| "infinity".to_string(), |r| r.to_string()),
        "entries": entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(spec: &Arc<AlgebroidSpec>, text: &str) -> CobarElement {
        CobarElement::parse(spec, text).unwrap()
    }

    #[test]
    fn first_page_is_tensor_with_polynomials() {
        let bs = Bockstein::new(FiltrationSpec::adding(4).unwrap(), 160);
        let lower = CobarEngine::new(&AlgebroidSpec::reduced().quotient(4).unwrap(), 160);
        for t in (0..=160).step_by(8) {
            for s in 0..4 {
                for u in 0..=t / 32 {
                    let e1 = bs.page_dimension(Some(1), s, t, u).unwrap();
                    assert_eq!(e1, lower.dim_mod_p(s, t - 32 * u).unwrap(), "({s},{t},{u})");
                }
            }
        }
    }

    #[test]
    fn pages_shrink_and_converge() {
        let bs = Bockstein::new(FiltrationSpec::adding(3).unwrap(), 160);
        let direct = CobarEngine::new(&AlgebroidSpec::reduced().quotient(2).unwrap(), 160);
        for t in (0..=160).step_by(8) {
            for s in 0..4 {
                let mut total = 0;
                for u in 0..=t / 24 {
                    let mut prev = usize::MAX;
                    for r in 1..8 {
                        let d = bs.page_dimension(Some(r), s, t, u).unwrap();
                        assert!(d <= prev);
                        prev = d;
                    }
                    total += bs.page_dimension(None, s, t, u).unwrap();
                }
                assert_eq!(total, direct.dim_mod_p(s, t).unwrap(), "({s},{t})");
            }
        }
    }

    #[test]
    fn a3_sits_in_filtration_one() {
        let bs = Bockstein::new(FiltrationSpec::adding(3).unwrap(), 48);
        assert_eq!(bs.page_dimension(Some(1), 0, 24, 1).unwrap(), 1);
        assert_eq!(bs.page_dimension(Some(1), 0, 24, 0).unwrap(), 0);
        assert_eq!(bs.page_dimension(Some(1), 0, 32, 1).unwrap(), 0);
    }

    #[test]
    fn first_differential_on_a3() {
        let f = FiltrationSpec::adding(2).unwrap();
        let spec = f.base.clone();
        let bs = Bockstein::new(f, 40);
        assert!(bs.verify_differential(&el(&spec, "a3"), &el(&spec, "a2*[r]"), 1).unwrap());
        assert!(matches!(bs.page_differential(&el(&spec, "a3"), 2), Err(Error::NotAPageCycle(_))));
    }

    #[test]
    fn five_adic_first_differential() {
        let full = AlgebroidSpec::full();
        let bs = Bockstein::new(FiltrationSpec::five_adic(&full).unwrap(), 48);
        assert!(bs.verify_differential(&el(&full, "a1"), &el(&full, "[r]"), 1).unwrap());
        assert!(matches!(bs.verify_differential(&el(&full, "a1"), &el(&full, "[r]"), 2), Err(Error::Unsupported(_))));
    }
}
