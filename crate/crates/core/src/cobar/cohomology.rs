//! Cohomology groups, coboundary solving, class comparison and triple Massey products.

use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rustc_hash::FxHashMap;
use serde_json::json;

use super::complex::{modulus_for, CobarComplex};
use super::contract::{big_from_element, big_to_element, Contraction};
use super::element::CobarElement;
use crate::algebroid::{AlgebroidSpec, EtaCache, Variant};
use crate::coefficients::{kernel_saturated, local_smith, smith_normal_form, Echelon, IntMatrix, LocalRational, LocalRing, SparseVec};
use crate::error::{Error, Result};
use crate::gradedpoly::Monomial;

/// Default 5-adic precision for integral presentations.
pub const DEFAULT_PRECISION: u32 = 4;

/// Largest direct slice (columns times rows) solved with exact integer Smith forms.
const EXACT_SOLVE_LIMIT: usize = 400_000;

/// `H^{s,t}` with representatives. Over `F_5` every class counts as free.
#[derive(Clone, Debug)]
pub struct CohomologyGroup {
    pub spec: String,
    pub s: usize,
    pub t: u32,
    pub free_rank: usize,
    /// 5-exponents of the cyclic torsion summands, increasing.
    pub torsion: Vec<u32>,
    /// Free generators first, then one per torsion summand.
    pub representatives: Vec<CobarElement>,
}

impl CohomologyGroup {
    pub fn rank(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "spec": self.spec,
            "s": self.s,
            "t": self.t,
            "free_rank": self.free_rank,
            "torsion": self.torsion,
            "representatives": self.representatives.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// `<u, v, w>` as one representative plus the rank of `u H + H w` in its bidegree.
#[derive(Clone, Debug)]
pub struct MasseyProduct {
    pub representative: CobarElement,
    pub indeterminacy_rank: usize,
    indeterminacy: Vec<SparseVec>,
}

/// Cohomology engine for one presentation up to internal degree `t_max`.
///
/// Quotient presentations and the integral reduced presentation are computed on the
/// contracted model; the integral full presentation uses the cobar complex directly.
pub struct CobarEngine {
    spec: Arc<AlgebroidSpec>,
    cx: Arc<CobarComplex>,
    model: Option<Contraction>,
    ring: LocalRing,
    matrices: Mutex<FxHashMap<(usize, u32), Arc<Vec<SparseVec>>>>,
}

impl CobarEngine {
    pub fn new(spec: &Arc<AlgebroidSpec>, t_max: u32) -> Self {
        CobarEngine::with_precision(spec, t_max, DEFAULT_PRECISION)
    }

    /// `k` is the 5-adic precision used for integral presentations.
    pub fn with_precision(spec: &Arc<AlgebroidSpec>, t_max: u32, k: u32) -> Self {
        let direct = spec.ideal().is_none() && spec.variant() == Variant::Full;
        CobarEngine::build(spec, t_max, k, direct)
    }

    /// Engine on the uncontracted complex (small windows only).
    pub fn direct(spec: &Arc<AlgebroidSpec>, t_max: u32, k: u32) -> Self {
        CobarEngine::build(spec, t_max, k, true)
    }

    fn build(spec: &Arc<AlgebroidSpec>, t_max: u32, k: u32, direct: bool) -> Self {
        let modulus = modulus_for(spec, k);
        let cx = Arc::new(CobarComplex::new(spec, modulus, t_max));
        let ring = LocalRing::new(spec.prime(), if spec.ideal().is_some() { 1 } else { k });
        let model = (!direct).then(|| Contraction::new(cx.clone()));
        CobarEngine { spec: spec.clone(), cx, model, ring, matrices: Mutex::default() }
    }

    pub fn spec(&self) -> &Arc<AlgebroidSpec> {
        &self.spec
    }

    pub fn complex(&self) -> &Arc<CobarComplex> {
        &self.cx
    }

    pub fn ring(&self) -> LocalRing {
        self.ring
    }

    pub fn t_max(&self) -> u32 {
        self.cx.t_max()
    }

    pub fn is_integral(&self) -> bool {
        self.spec.ideal().is_none()
    }

    pub fn is_contracted(&self) -> bool {
        self.model.is_some()
    }

    /// Dimension of the working complex (model or direct) in bidegree `(s, t)`.
    pub fn dim(&self, s: usize, t: u32) -> Result<usize> {
        match &self.model {
            Some(m) => Ok(m.slice(s, t)?.dim()),
            None => Ok(self.cx.slice(s, t).dim()),
        }
    }

    /// Columns of the working differential out of `(s, t)`.
    pub fn matrix(&self, s: usize, t: u32) -> Result<Arc<Vec<SparseVec>>> {
        if let Some(m) = self.matrices.lock().expect("cache lock").get(&(s, t)) {
            return Ok(m.clone());
        }
        let cols = match &self.model {
            Some(m) => m.differential(s, t)?.2,
            None => self.cx.differential_matrix(s, t).2,
        };
        let cols = Arc::new(cols);
        self.matrices.lock().expect("cache lock").insert((s, t), cols.clone());
        Ok(cols)
    }

    /// Coefficient monomial of basis cell `i` in bidegree `(s, t)`.
    pub fn cell_monomial(&self, s: usize, t: u32, i: usize) -> Result<Monomial> {
        match &self.model {
            Some(m) => {
                let slice = m.slice(s, t)?;
                Ok(m.cell_monomial(&slice, i).clone())
            }
            None => Ok(self.cx.basis_element(&self.cx.slice(s, t), i).0),
        }
    }

    /// Cochain for a working vector: a cocycle whenever the vector is one.
    pub fn lift(&self, s: usize, t: u32, v: &SparseVec) -> Result<CobarElement> {
        match &self.model {
            Some(m) => {
                let slice = m.slice(s, t)?;
                Ok(big_to_element(&self.cx, s, t, &m.lift(&slice, v)?))
            }
            None => Ok(self.cx.from_vector(&self.cx.slice(s, t), v)),
        }
    }

    /// Working vector of a cochain; cohomologous cocycles map to vectors differing by a boundary.
    pub fn project(&self, z: &CobarElement) -> Result<SparseVec> {
        let t = self.degree_of(z)?;
        match &self.model {
            Some(m) => {
                let slice = m.slice(z.s(), t)?;
                m.project(&slice, &big_from_element(&self.cx, z)?)
            }
            None => self.cx.to_vector(&self.cx.slice(z.s(), t), z),
        }
    }

    fn degree_of(&self, z: &CobarElement) -> Result<u32> {
        if z.spec() != &self.spec {
            return Err(Error::SpecMismatch);
        }
        let t = match z.degree() {
            Some(t) => t,
            None if z.is_zero() => 0,
            None => return Err(Error::InhomogeneousInput(z.to_string())),
        };
        if t > self.t_max() {
            return Err(Error::DegreeMismatch(format!("degree {t} beyond the window {}", self.t_max())));
        }
        Ok(t)
    }

    fn image_echelon(&self, s: usize, t: u32) -> Result<Echelon> {
        let mut ech = Echelon::new(self.spec.prime(), self.dim(s, t)?);
        if s > 0 {
            for c in self.matrix(s - 1, t)?.iter() {
                ech.insert(&reduce_mod_p(c, self.spec.prime()));
            }
        }
        Ok(ech)
    }

    /// Dimension over `F_5` of the cohomology of the complex reduced mod 5.
    pub fn dim_mod_p(&self, s: usize, t: u32) -> Result<usize> {
        let p = self.spec.prime();
        let f = LocalRing::new(p, 1);
        let n = self.dim(s, t)?;
        let out: Vec<SparseVec> = self.matrix(s, t)?.iter().map(|c| reduce_mod_p(c, p)).collect();
        let r_out = local_smith(f, self.dim(s + 1, t)?, &out, false).rank();
        let r_in = if s == 0 {
            0
        } else {
            let cols: Vec<SparseVec> = self.matrix(s - 1, t)?.iter().map(|c| reduce_mod_p(c, p)).collect();
            local_smith(f, n, &cols, false).rank()
        };
        Ok(n - r_out - r_in)
    }

    /// Free rank and torsion exponents of `H^{s,t}` without representatives.
    pub fn smith_data(&self, s: usize, t: u32) -> Result<(usize, Vec<u32>)> {
        if !self.is_integral() {
            return Ok((self.dim_mod_p(s, t)?, Vec::new()));
        }
        let n = self.dim(s, t)?;
        let out = local_smith(self.ring, self.dim(s + 1, t)?, &self.matrix(s, t)?, false);
        if s == 0 {
            return Ok((n - out.rank(), Vec::new()));
        }
        let inn = local_smith(self.ring, n, &self.matrix(s - 1, t)?, false);
        Ok((n - out.rank() - inn.rank(), inn.torsion_valuations()))
    }

    pub fn cohomology(&self, s: usize, t: u32) -> Result<CohomologyGroup> {
        let mut g = CohomologyGroup {
            spec: self.spec.label(),
            s,
            t,
            free_rank: 0,
            torsion: Vec::new(),
            representatives: Vec::new(),
        };
        if !self.is_integral() {
            for v in self.class_basis(s, t)? {
                g.representatives.push(self.lift(s, t, &v)?);
            }
            g.free_rank = g.representatives.len();
            return Ok(g);
        }
        let ring = self.ring;
        let n = self.dim(s, t)?;
        let out = local_smith(ring, self.dim(s + 1, t)?, &self.matrix(s, t)?, true);
        let inn = if s == 0 { None } else { Some(local_smith(ring, n, &self.matrix(s - 1, t)?, true)) };
        let r_in = inn.as_ref().map_or(0, |x| x.rank());
        g.free_rank = n - out.rank() - r_in;
        if g.free_rank > 0 {
            g.representatives = if s == 0 { self.exact_invariants(t)? } else { self.free_representatives(s, t, &out, g.free_rank)? };
        }
        if let Some(inn) = inn {
            let mut tors: Vec<_> = inn.pivots.iter().filter(|p| p.valuation > 0).collect();
            tors.sort_by_key(|p| p.valuation);
            let mut eta = EtaCache::new(&self.spec);
            for p in tors {
                let y = self.lift(s - 1, t, p.transform.as_ref().expect("tracked"))?;
                let scale = LocalRational::new(1, BigInt::from(self.spec.prime()).pow(p.valuation))?;
                let rep = y.differential(&mut eta)?.scale(&scale)?;
                if rep.content_valuation().is_ok_and(|v| v < 0) {
                    return Err(Error::Unsupported(format!("torsion class at ({s},{t}) needs more precision")));
                }
                g.torsion.push(p.valuation);
                g.representatives.push(rep);
            }
        }
        Ok(g)
    }

    /// `F_5` basis of `ker / im` in working coordinates, lowest cells first.
    pub fn class_basis(&self, s: usize, t: u32) -> Result<Vec<SparseVec>> {
        let p = self.spec.prime();
        let f = LocalRing::new(p, 1);
        let out: Vec<SparseVec> = self.matrix(s, t)?.iter().map(|c| reduce_mod_p(c, p)).collect();
        let ker = local_smith(f, self.dim(s + 1, t)?, &out, true);
        let mut ech = self.image_echelon(s, t)?;
        let mut basis = Vec::new();
        for (_, z) in &ker.vanishing {
            let z = z.as_ref().expect("tracked");
            if ech.insert(z) {
                basis.push(z.clone());
            }
        }
        Ok(basis)
    }

    fn free_representatives(
        &self,
        s: usize,
        t: u32,
        out: &crate::coefficients::LocalSmith,
        count: usize,
    ) -> Result<Vec<CobarElement>> {
        let mut ech = self.image_echelon(s, t)?;
        let mut reps = Vec::new();
        for (_, z) in &out.vanishing {
            let z = z.as_ref().expect("tracked");
            if ech.insert(&reduce_mod_p(z, self.spec.prime())) {
                let x = self.lift(s, t, z)?;
                if !x.is_cocycle()? {
                    return Err(Error::Unsupported(format!("free class at ({s},{t}) has no exact lift at this precision")));
                }
                reps.push(x);
                if reps.len() == count {
                    break;
                }
            }
        }
        Ok(reps)
    }

    /// Saturated basis of the invariant 0-cochains of degree `t`.
    pub fn exact_invariants(&self, t: u32) -> Result<Vec<CobarElement>> {
        // Setting a5 = 0 is an equivalence, so both presentations share the invariant lattice.
        if self.is_integral() && self.spec.ideal().is_none() {
            if let Ok(b) = crate::invariants::invariant_basis(t) {
                return b
                    .basis
                    .iter()
                    .map(|x| {
                        let x = match self.spec.variant() {
                            Variant::Full => x.clone(),
                            Variant::Reduced => crate::invariants::restrict_to_reduced(x)?,
                        };
                        CobarElement::from_poly(&self.spec, &x.reinterpret(self.spec.base())?)
                    })
                    .collect();
            }
        }
        let m = self.exact_matrix(0, t)?;
        let src = self.cx.slice(0, t);
        let mut out = Vec::new();
        for v in kernel_saturated(&m) {
            let mut x = CobarElement::zero(&self.spec, 0);
            for (i, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    let (mono, w) = self.cx.basis_element(&src, i);
                    x.add_term(w, mono, &LocalRational::from(c.clone()))?;
                }
            }
            out.push(x);
        }
        Ok(out)
    }

    /// Exact integer matrix of `d: C^{s,t} -> C^{s+1,t}` of the uncontracted complex.
    fn exact_matrix(&self, s: usize, t: u32) -> Result<IntMatrix> {
        let src = self.cx.slice(s, t);
        let dst = self.cx.slice(s + 1, t);
        let mut m = IntMatrix::zeros(dst.dim(), src.dim());
        let mut eta = EtaCache::new(&self.spec);
        for j in 0..src.dim() {
            let (mono, w) = self.cx.basis_element(&src, j);
            let d = CobarElement::basis(&self.spec, mono, w).differential(&mut eta)?;
            for (w2, m2, c) in d.terms() {
                let (off, _) = dst.block(w2).expect("word in target slice");
                let id = self.cx.monomial_id(m2).expect("monomial in range");
                if !c.is_integer() {
                    return Err(Error::NotIntegral(c.to_string()));
                }
                m.set((off + id) as usize, j, c.numer().clone());
            }
        }
        Ok(m)
    }

    /// Some `w` with `d(w) = z` exactly, or `None` when `z` is not a coboundary.
    pub fn is_coboundary(&self, z: &CobarElement) -> Result<Option<CobarElement>> {
        let t = self.degree_of(z)?;
        let s = z.s();
        if !z.is_cocycle()? {
            return Err(Error::NotACocycle);
        }
        if z.is_zero() {
            return Ok(Some(CobarElement::zero(&self.spec, s.saturating_sub(1))));
        }
        if s == 0 {
            return Ok(None);
        }
        let w = if self.is_integral() {
            let (src, dst) = (self.cx.slice(s - 1, t).dim(), self.cx.slice(s, t).dim());
            if src * dst <= EXACT_SOLVE_LIMIT {
                return self.exact_solve(z, t);
            }
            match self.solve_mod(z, t)? {
                Some(w) => w,
                None => return Ok(None),
            }
        } else {
            match self.solve_mod(z, t)? {
                Some(w) => w,
                None => return Ok(None),
            }
        };
        if w.d()? != *z {
            return Err(Error::Unsupported(format!("coboundary witness in ({s},{t}) is not exact at this precision")));
        }
        Ok(Some(w))
    }

    /// Whether `z` is a coboundary, decided in the working complex without building a witness.
    /// Integrally this holds modulo `5^K`, like every group this engine reports.
    pub fn bounds(&self, z: &CobarElement) -> Result<bool> {
        let t = self.degree_of(z)?;
        let s = z.s();
        if !z.is_cocycle()? {
            return Err(Error::NotACocycle);
        }
        if z.is_zero() || s == 0 {
            return Ok(z.is_zero());
        }
        let v = self.project(z)?;
        let cols = self.matrix(s - 1, t)?;
        if self.is_integral() {
            return Ok(solve_local(self.ring, self.dim(s, t)?, &cols, &v).is_some());
        }
        let mut ech = Echelon::new(self.spec.prime(), self.dim(s, t)?);
        for c in cols.iter() {
            ech.insert(c);
        }
        Ok(ech.reduce(&v).0.is_zero())
    }

    /// Witness `i'(y) - h'(z)` from a solution `D y = p'(z)` of the working differential.
    fn solve_mod(&self, z: &CobarElement, t: u32) -> Result<Option<CobarElement>> {
        let s = z.s();
        let v = self.project(z)?;
        let cols = self.matrix(s - 1, t)?;
        let y = if self.is_integral() {
            match solve_local(self.ring, self.dim(s, t)?, &cols, &v) {
                Some(y) => y,
                None => return Ok(None),
            }
        } else {
            let mut ech = Echelon::new(self.spec.prime(), self.dim(s, t)?);
            for c in cols.iter() {
                ech.insert(c);
            }
            let (rem, combo) = ech.reduce(&v);
            if !rem.is_zero() {
                return Ok(None);
            }
            SparseVec::from_unsorted(combo, self.spec.prime())
        };
        let lifted = self.lift(s - 1, t, &y)?;
        match &self.model {
            Some(m) => {
                let h = m.homotopy(s, t, &big_from_element(&self.cx, z)?)?;
                lifted.sub(&big_to_element(&self.cx, s - 1, t, &h)).map(Some)
            }
            None => Ok(Some(lifted)),
        }
    }

    fn exact_solve(&self, z: &CobarElement, t: u32) -> Result<Option<CobarElement>> {
        let s = z.s();
        let m = self.exact_matrix(s - 1, t)?;
        let dst = self.cx.slice(s, t);
        let src = self.cx.slice(s - 1, t);
        let mut rhs = vec![BigRational::zero(); dst.dim()];
        for (w, mono, c) in z.terms() {
            let (off, _) = dst.block(w).ok_or_else(|| Error::DegreeMismatch(w.to_string()))?;
            rhs[(off + self.cx.monomial_id(mono).expect("monomial in range")) as usize] = c.as_ratio().clone();
        }
        let snf = smith_normal_form(&m);
        let rank = snf.rank();
        let lz: Vec<BigRational> = (0..dst.dim())
            .map(|i| {
                let mut acc = BigRational::zero();
                for (j, r) in rhs.iter().enumerate() {
                    if !r.is_zero() {
                        acc += BigRational::from_integer(snf.left_transform.get(i, j)) * r;
                    }
                }
                acc
            })
            .collect();
        if lz[rank..].iter().any(|x| !x.is_zero()) {
            return Ok(None);
        }
        let mut u = Vec::with_capacity(rank);
        for i in 0..rank {
            let q = LocalRational::from_ratio(&lz[i] / BigRational::from_integer(snf.diagonal[i].clone()));
            if !q.is_5_integral() {
                return Ok(None);
            }
            u.push(q);
        }
        let mut w = CobarElement::zero(&self.spec, s - 1);
        for j in 0..src.dim() {
            let mut c = LocalRational::zero();
            for (i, ui) in u.iter().enumerate() {
                let r = snf.right_transform.get(j, i);
                if !r.is_zero() {
                    c += &(ui * &LocalRational::from(r));
                }
            }
            if !c.is_zero() {
                let (mono, word) = self.cx.basis_element(&src, j);
                w.add_term(word, mono, &c)?;
            }
        }
        debug_assert!(w.d()? == *z);
        Ok(Some(w))
    }

    /// Normal form over `F_5` of the class of a cocycle modulo boundaries.
    pub fn class_vector(&self, z: &CobarElement) -> Result<SparseVec> {
        let t = self.degree_of(z)?;
        let v = reduce_mod_p(&self.project(z)?, self.spec.prime());
        Ok(self.image_echelon(z.s(), t)?.reduce(&v).0)
    }

    /// Whether the class of `z` vanishes mod 5.
    pub fn is_zero_class(&self, z: &CobarElement) -> Result<bool> {
        Ok(self.class_vector(z)?.is_zero())
    }

    /// `[x] = u [y]` for some unit `u` of `F_5`.
    pub fn cohomologous_up_to_unit(&self, x: &CobarElement, y: &CobarElement) -> Result<bool> {
        let a = self.class_vector(x)?;
        let b = self.class_vector(y)?;
        if a.is_zero() || b.is_zero() {
            return Ok(a.is_zero() && b.is_zero());
        }
        let f = LocalRing::new(self.spec.prime(), 1);
        Ok((1..self.spec.prime()).any(|u| {
            let scaled = SparseVec::from_unsorted(b.entries.iter().map(|&(i, c)| (i, f.mul(c as u64, u))).collect(), f.modulus);
            scaled == a
        }))
    }

    /// Triple Massey product over `F_5`.
    pub fn triple_massey(&self, u: &CobarElement, v: &CobarElement, w: &CobarElement) -> Result<MasseyProduct> {
        if self.is_integral() {
            return Err(Error::Unsupported("Massey products are computed over F_5 only".into()));
        }
        let mut eta = EtaCache::new(&self.spec);
        let uv = u.product(v, &mut eta)?;
        let vw = v.product(w, &mut eta)?;
        let xb = self.is_coboundary(&uv)?.ok_or_else(|| Error::BracketUndefined("u v is not a coboundary".into()))?;
        let yb = self.is_coboundary(&vw)?.ok_or_else(|| Error::BracketUndefined("v w is not a coboundary".into()))?;
        let sign = if u.s().is_multiple_of(2) { LocalRational::one() } else { -LocalRational::one() };
        let rep = xb.product(w, &mut eta)?.sub(&u.product(&yb, &mut eta)?.scale(&sign)?)?;
        let (tu, tv, tw) = (self.degree_of(u)?, self.degree_of(v)?, self.degree_of(w)?);
        let s = rep.s();
        let t = tu + tv + tw;
        let mut ech = self.image_echelon(s, t)?;
        let base = ech.rank();
        let mut indeterminacy = Vec::new();
        let mut push = |x: CobarElement, ech: &mut Echelon| -> Result<()> {
            let pv = reduce_mod_p(&self.project(&x)?, self.spec.prime());
            if ech.insert(&pv) {
                indeterminacy.push(pv);
            }
            Ok(())
        };
        if v.s() + w.s() >= 1 {
            for h in self.cohomology(v.s() + w.s() - 1, tv + tw)?.representatives {
                push(u.product(&h, &mut eta)?, &mut ech)?;
            }
        }
        if u.s() + v.s() >= 1 {
            for h in self.cohomology(u.s() + v.s() - 1, tu + tv)?.representatives {
                push(h.product(w, &mut eta)?, &mut ech)?;
            }
        }
        Ok(MasseyProduct { representative: rep, indeterminacy_rank: ech.rank() - base, indeterminacy })
    }

    /// Whether `unit * target` lies in the bracket (some unit of `F_5` when `up_to_unit`).
    pub fn massey_contains(&self, m: &MasseyProduct, target: &CobarElement, up_to_unit: bool) -> Result<bool> {
        let s = m.representative.s();
        let t = self.degree_of(&m.representative)?;
        let mut ech = self.image_echelon(s, t)?;
        for v in &m.indeterminacy {
            ech.insert(v);
        }
        let units: Vec<i64> = if up_to_unit { (1..self.spec.prime() as i64).collect() } else { vec![1] };
        for c in units {
            let diff = m.representative.sub(&target.scale(&LocalRational::from(c))?)?;
            let pv = reduce_mod_p(&self.project(&diff)?, self.spec.prime());
            if ech.contains(&pv) {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

fn reduce_mod_p(v: &SparseVec, p: u64) -> SparseVec {
    SparseVec::from_unsorted(v.entries.iter().map(|&(i, c)| (i, c as u64 % p)).collect(), p)
}

/// A solution of `sum y_j cols_j = v` over `Z/p^k`, if one exists.
fn solve_local(ring: LocalRing, rows: usize, cols: &[SparseVec], v: &SparseVec) -> Option<SparseVec> {
    let mut all = cols.to_vec();
    all.push(v.clone());
    let ls = local_smith(ring, rows, &all, true);
    let last = cols.len() as u32;
    // a kernel vector with unit coefficient on `v` gives `v` as a combination of the columns
    for (_, z) in &ls.vanishing {
        let z = z.as_ref().expect("tracked");
        let c = z.get(last) as u64;
        if ring.is_unit(c) {
            let f = ring.neg(ring.inv(c));
            let y = z.entries.iter().filter(|e| e.0 != last).map(|&(j, x)| (j, ring.mul(x as u64, f))).collect();
            return Some(SparseVec::from_unsorted(y, ring.modulus));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(spec: &Arc<AlgebroidSpec>, text: &str) -> CobarElement {
        CobarElement::parse(spec, text).unwrap()
    }

    fn b_rep(spec: &Arc<AlgebroidSpec>) -> CobarElement {
        el(spec, "[r^4|r] + 2*[r^3|r^2] + 2*[r^2|r^3] + [r|r^4]")
    }

    #[test]
    fn exterior_times_polynomial_mod_i4() {
        let spec = AlgebroidSpec::reduced().quotient(4).unwrap();
        let e = CobarEngine::new(&spec, 400);
        for t in (0..=400).step_by(8) {
            for s in 0..=8 {
                let expect = usize::from((s % 2 == 0 && t == 20 * s as u32) || (s % 2 == 1 && t == 20 * (s as u32 - 1) + 8));
                assert_eq!(e.cohomology(s, t).unwrap().rank(), expect, "({s},{t})");
            }
        }
        let g = e.cohomology(2, 40).unwrap();
        assert!(g.representatives[0].is_cocycle().unwrap());
        assert!(e.cohomologous_up_to_unit(&g.representatives[0], &b_rep(&spec)).unwrap());
        assert_eq!(e.is_coboundary(&b_rep(&spec)).unwrap(), None);
        let a = el(&spec, "[r]");
        let aa = a.mul(&a).unwrap();
        let w = e.is_coboundary(&aa).unwrap().unwrap();
        assert_eq!(w.d().unwrap(), aa);
    }

    #[test]
    fn integral_torsion_in_low_degree() {
        let full = AlgebroidSpec::full();
        let e = CobarEngine::new(&full, 48);
        assert!(!e.is_contracted());
        let g = e.cohomology(1, 8).unwrap();
        assert_eq!((g.free_rank, g.torsion.clone()), (0, vec![1]));
        assert_eq!(g.representatives[0], el(&full, "[r]"));
        // 5 b bounds the class of r^5
        let five_b = b_rep(&full).scale(&LocalRational::from(5)).unwrap();
        let w = e.is_coboundary(&five_b).unwrap().unwrap();
        assert_eq!(w.d().unwrap(), five_b);
        assert_eq!(e.is_coboundary(&b_rep(&full)).unwrap(), None);
        assert!(e.bounds(&five_b).unwrap());
        assert!(!e.bounds(&b_rep(&full)).unwrap());

        let red = AlgebroidSpec::reduced();
        let r = CobarEngine::new(&red, 48);
        assert!(r.is_contracted());
        for (s, t) in [(1, 8), (2, 40), (3, 48), (0, 16)] {
            let a = r.cohomology(s, t).unwrap();
            let b = e.cohomology(s, t).unwrap();
            assert_eq!((a.free_rank, &a.torsion), (b.free_rank, &b.torsion), "({s},{t})");
            for x in &a.representatives {
                assert!(x.is_cocycle().unwrap());
            }
        }
        let five_b = b_rep(&red).scale(&LocalRational::from(5)).unwrap();
        assert!(r.bounds(&five_b).unwrap());
        assert!(!r.bounds(&b_rep(&red)).unwrap());
    }

    #[test]
    fn massey_bracket_of_a_with_itself_vanishes_mod_i4() {
        let spec = AlgebroidSpec::reduced().quotient(4).unwrap();
        let e = CobarEngine::new(&spec, 80);
        let a = el(&spec, "[r]");
        let m = e.triple_massey(&a, &a, &a).unwrap();
        assert!(m.representative.is_cocycle().unwrap());
        let zero = CobarElement::zero(&spec, 2);
        assert!(e.massey_contains(&m, &zero, false).unwrap());
    }

    #[test]
    fn contracted_and_direct_engines_agree_on_a_quotient() {
        let spec = AlgebroidSpec::full().quotient(1).unwrap();
        let c = CobarEngine::new(&spec, 96);
        let d = CobarEngine::direct(&spec, 96, 1);
        for t in (0..=96).step_by(8) {
            for s in 0..4 {
                let g = c.cohomology(s, t).unwrap();
                assert_eq!(g.rank(), d.cohomology(s, t).unwrap().rank());
                for x in &g.representatives {
                    assert!(x.is_cocycle().unwrap());
                    assert!(!d.is_zero_class(x).unwrap());
                }
            }
        }
    }
}
