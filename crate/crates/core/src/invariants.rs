//! Translation-invariant polynomials: `H^0` of the full presentation over `Z_(5)`.
//!
//! `H^0` in degree `t` is the kernel of `x -> eta_R(x) - x`, taken coefficient-wise in
//! `r`. It is computed as a saturated integer kernel, which is exact because the right
//! unit has integer structure constants.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use serde_json::json;

use crate::algebroid::{AlgebroidSpec, EtaCache, GammaElement};
use crate::coefficients::{rank_mod_p, Echelon, LocalRational, SparseVec};
use crate::error::{Error, Result};
use crate::gradedpoly::{graded_piece_basis, parse_with, CoefficientMode, ExprContext, Polynomial, RingSpec};

/// The integral full presentation whose `H^0` is computed here.
pub fn full_spec() -> Arc<AlgebroidSpec> {
    AlgebroidSpec::full()
}

#[derive(Clone, Debug)]
pub struct InvariantBasis {
    pub t: u32,
    /// Saturated `Z_(5)`-basis, one polynomial per product of `c_i` it was grown from.
    pub basis: Vec<Polynomial>,
}

impl InvariantBasis {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

/// Whether `eta_R(x) = x` exactly.
pub fn is_invariant(spec: &Arc<AlgebroidSpec>, x: &Polynomial) -> Result<bool> {
    let e = EtaCache::new(spec).eta_poly(x)?;
    Ok(e == GammaElement::from_poly(spec, x.clone()))
}

/// Auxiliary prime for rational rank bounds; it exceeds every coefficient prime in play.
const RANK_PRIME: u64 = 2_147_483_647;

/// Saturated basis of the degree-`t` invariants of the full presentation.
///
/// The monomials in `c_2, .., c_5` of degree `t` are invariant; the rank of
/// `eta_R - id` modulo a large auxiliary prime bounds the rational kernel from above,
/// so matching counts prove they span it over `Q`. The `Z_(5)`-saturation of their
/// span is then reached by dividing mod-5 dependencies by 5 until none remain.
pub fn invariant_basis(t: u32) -> Result<InvariantBasis> {
    let spec = full_spec();
    let base = spec.base();
    let monos = graded_piece_basis(base, t);
    let candidates = c_monomials(t)?;
    if monos.is_empty() || candidates.is_empty() {
        return Ok(InvariantBasis { t, basis: Vec::new() });
    }
    let rank = eta_rank_bound(&spec, &monos)?;
    if monos.len() - rank != candidates.len() {
        return Err(Error::Unsupported(format!(
            "degree {t}: kernel bound {} differs from {} products of c_i",
            monos.len() - rank,
            candidates.len()
        )));
    }
    let rows = candidates
        .iter()
        .map(|x| {
            let mut v = vec![BigInt::zero(); monos.len()];
            for (m, c) in x.integer_coefficients()? {
                let i = monos.binary_search(&m).map_err(|_| Error::DegreeMismatch(format!("degree {t}")))?;
                v[i] = c;
            }
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?;
    let basis = saturate(rows)?
        .into_iter()
        .map(|v| {
            Polynomial::from_terms(
                base,
                v.into_iter().zip(&monos).filter(|(c, _)| !c.is_zero()).map(|(c, m)| (m.clone(), LocalRational::from(c))),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(InvariantBasis { t, basis })
}

/// Products `c_2^e2 c_3^e3 c_4^e4 c_5^e5` of degree `t`.
pub fn c_monomials(t: u32) -> Result<Vec<Polynomial>> {
    let n = t / 8;
    let c: Vec<Polynomial> = (2..=5).map(c_polynomial).collect::<Result<_>>()?;
    let base = full_spec().base().clone();
    let mut out = Vec::new();
    for e5 in 0..=n / 5 {
        for e4 in 0..=(n - 5 * e5) / 4 {
            for e3 in 0..=(n - 5 * e5 - 4 * e4) / 3 {
                let rest = n - 5 * e5 - 4 * e4 - 3 * e3;
                if !rest.is_multiple_of(2) || !t.is_multiple_of(8) {
                    continue;
                }
                let mut x = Polynomial::one(&base);
                for (g, e) in c.iter().zip([rest / 2, e3, e4, e5]) {
                    if e > 0 {
                        x = x.mul(&g.pow(e)?)?;
                    }
                }
                out.push(x);
            }
        }
    }
    Ok(out)
}

/// Rank of `x -> eta_R(x) - x` on the degree piece, modulo the auxiliary prime.
fn eta_rank_bound(spec: &Arc<AlgebroidSpec>, monos: &[crate::gradedpoly::Monomial]) -> Result<usize> {
    let mut eta = EtaCache::new(spec);
    let mut rows: BTreeMap<(u32, crate::gradedpoly::Monomial), u32> = BTreeMap::new();
    let mut cols = Vec::with_capacity(monos.len());
    for m in monos {
        let g = eta.eta_monomial(m);
        let mut col = Vec::new();
        for (e, q) in g.terms() {
            if e == 0 {
                continue;
            }
            for (m2, c) in q.terms() {
                let n = rows.len() as u32;
                let i = *rows.entry((e, m2.clone())).or_insert(n);
                col.push((i, c.residue_u64(RANK_PRIME)?));
            }
        }
        cols.push(SparseVec::from_unsorted(col, RANK_PRIME));
    }
    Ok(rank_mod_p(RANK_PRIME, rows.len(), &cols))
}

/// Basis of `(Q-span of rows) ∩ Z_(5)^n` for rationally independent integer rows.
fn saturate(mut rows: Vec<Vec<BigInt>>) -> Result<Vec<Vec<BigInt>>> {
    let n = rows.first().map_or(0, Vec::len);
    let five = BigInt::from(5);
    let to_f5 = |v: &[BigInt]| {
        SparseVec::from_unsorted(
            v.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i as u32, num_integer::Integer::mod_floor(c, &five).try_into().unwrap_or(0u64)))
                .collect(),
            5,
        )
    };
    let mut ech = Echelon::new(5, n);
    // insertion tag -> row index
    let mut tags: Vec<usize> = Vec::new();
    for j in 0..rows.len() {
        loop {
            if rows[j].iter().all(Zero::is_zero) {
                return Err(Error::Unsupported("candidate invariants are rationally dependent".into()));
            }
            let v = to_f5(&rows[j]);
            let (_, combo) = ech.reduce(&v);
            tags.push(j);
            if ech.insert(&v) {
                break;
            }
            // rows[j] - sum c_i rows[tag_i] vanishes mod 5
            let mut w = rows[j].clone();
            for (tag, c) in combo {
                let src = &rows[tags[tag as usize]];
                let c = BigInt::from(c);
                for (a, b) in w.iter_mut().zip(src) {
                    *a -= &c * b;
                }
            }
            for a in w.iter_mut() {
                debug_assert!((&*a % &five).is_zero());
                *a /= &five;
            }
            rows[j] = w;
        }
    }
    Ok(rows)
}

/// Ranks of `H^0` in degrees `0, 8, .., t_max`.
pub fn hilbert_h0(t_max: u32) -> Result<Vec<(u32, usize)>> {
    (0..=t_max).step_by(8).map(|t| Ok((t, invariant_basis(t)?.rank()))).collect()
}

/// Number of partitions of `n` into parts from `parts`.
pub fn partitions_into(n: usize, parts: &[usize]) -> usize {
    let mut ways = vec![0usize; n + 1];
    ways[0] = 1;
    for &p in parts {
        for k in p..=n {
            ways[k] += ways[k - p];
        }
    }
    ways[n]
}

/// A named invariant with its defining expression and expansion in the `a_i`.
#[derive(Clone, Debug, Serialize)]
pub struct GeneratorRecord {
    pub name: String,
    pub degree: u32,
    pub expression: String,
    #[serde(serialize_with = "as_text")]
    pub expansion: Polynomial,
    pub depth: Option<u32>,
}

fn as_text<S: serde::Serializer>(p: &Polynomial, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

/// Depth `i + 2j + 3k` of a leading term `a_1^e a_2^i a_3^j a_4^k`.
pub fn depth(exponents: (u32, u32, u32, u32)) -> Result<u32> {
    let (e, i, j, k) = exponents;
    if e > 1 {
        return Err(Error::IndexOutOfRange(e as usize));
    }
    Ok(i + 2 * j + 3 * k)
}

/// Largest depth among the leading-term shapes in the mod-5 reduction of `x`.
pub fn leading_depth(x: &Polynomial) -> Option<u32> {
    x.terms()
        .filter(|(_, c)| c.is_5_integral() && !c.valuation().is_some_and(|v| v > 0))
        .filter_map(|(m, _)| {
            let e = m.exps();
            (e[0] <= 1 && e.get(4).is_none_or(|&x| x == 0))
                .then(|| depth((e[0] as u32, e[1] as u32, e[2] as u32, e[3] as u32)).ok())
                .flatten()
        })
        .max()
}

/// `c_i` as a polynomial in the `a_j`, in the normalisation with content 1.
pub fn c_polynomial(i: usize) -> Result<Polynomial> {
    let text = match i {
        2 => "-2*a1^2 + 5*a2",
        3 => "4*a1^3 - 15*a1*a2 + 25*a3",
        4 => "-3*a1^4 + 15*a1^2*a2 - 50*a1*a3 + 125*a4",
        5 => "4*a1^5 - 25*a1^3*a2 + 125*a1^2*a3 - 625*a1*a4 + 3125*a5",
        _ => return Err(Error::IndexOutOfRange(i)),
    };
    crate::gradedpoly::parse_polynomial(full_spec().base(), text)
}

/// `sum_j binom(5-j, i-j) (-1)^j a_j a_1^{i-j} 5^j`, the right unit at `r = -a_1/5` scaled by `5^i`.
pub fn c_closed_form(i: usize) -> Result<Polynomial> {
    let spec = full_spec();
    let base = spec.base();
    let mut out = Polynomial::zero(base);
    for j in 0..=i {
        let c = num_integer::binomial(5 - j as i64, (i - j) as i64) * (-1i64).pow(j as u32) * 5i64.pow(j as u32);
        let aj = if j == 0 { Polynomial::one(base) } else { Polynomial::generator(base, j - 1) };
        let term = aj.mul(&Polynomial::generator(base, 0).pow((i - j) as u32)?)?.scale(&LocalRational::from(c))?;
        out = out.add(&term)?;
    }
    Ok(out)
}

/// The record for `c_i` together with the ratio `closed form / c_i`.
pub fn c_class(i: usize) -> Result<(GeneratorRecord, LocalRational)> {
    let spec = full_spec();
    let x = c_polynomial(i)?;
    if !is_invariant(&spec, &x)? {
        return Err(Error::InvarianceFailure { name: format!("c{i}") });
    }
    let closed = c_closed_form(i)?;
    let ratio = proportionality(&closed, &x)
        .ok_or_else(|| Error::TableEntry { name: format!("c{i}"), detail: "closed form is not proportional".into() })?;
    let rec = GeneratorRecord {
        name: format!("c{i}"),
        degree: 8 * i as u32,
        expression: x.to_string(),
        depth: leading_depth(&x),
        expansion: x,
    };
    Ok((rec, ratio))
}

/// `lambda` with `x = lambda y`, if any.
pub fn proportionality(x: &Polynomial, y: &Polynomial) -> Option<LocalRational> {
    let (m, c) = y.leading()?;
    let lambda = x.coefficient(m) * c.inv().ok()?;
    (y.scale(&lambda).ok()? == *x).then_some(lambda)
}

/// One row of the generator table: name, degree, defining expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub name: String,
    pub degree: u32,
    pub expression: String,
}

/// The 21 table rows, in dependency order. Identifiers: `c2..c5`, `D4..D22`, `D15'`, `D18'`, `D`.
pub const GENERATOR_TABLE: &str = "\
D4    32  (1/25)*(4*c4 + 3*c2^2)
D5    40  (1/25)*(2*c5 + c2*c3)
D6    48  (1/125)*(2*c3^2 - 4*c2*c4 + c2^3)
D7    56  (1/5)*(c3*D4 - 2*c2*D5)
D8    64  (1/5)^5*(-3*c2*c3^2 + 9*c2^2*c4 - 4*c4^2 + 3*c3*c5)
D9    72  (1/5)^5*(-9*c3^3 + 32*c2*c3*c4 - 9*c2^2*c5 + 4*c4*c5)
D10   80  (1/200)*(2*D5^2 + c2*D4^2 - 15*D4*D6)
D11   88  (1/10)*(3*D5*D6 - D4*D7)
D12   96  (1/5)^8*(54*c3^4 - 279*c2*c3^2*c4 + 216*c2^2*c4^2 - 224*c4^3 + 81*c2^2*c3*c5 + 144*c3*c4*c5 - 27*c2*c5^2)
D13   104 (1/15)*(D4*D9 - 4*D5*D8)
D14   112 (1/50)*(4*c4*D10 - 6*c3*D11 + 30*D6*D8 - 15*D4*D10 + 15*c2*D12)
D15'  120 (1/5)*(D5*D10 - 2*D4*D11)
D15   120 (1/25)*(2*D6*D9 - D7*D8 + 5*D15' - 15*c2*D13)
D16   128 (1/25)*(-4*D5*D11 - c2*D4*D10 + 15*D6*D10 - 15*c2*D14)
D17   136 (1/25)*(-3*c3*D14 - 2*c2*D15' + 20*D8*D9)
D18   144 (1/5)*(2*D5*D13 - D4^2*D10 + 2*D4*D6*D8)
D18'  144 (1/25)*(2*D9^2 + 16*c2*D8^2 - 95*D8*D10)
D19   152 (1/5)*(8*D8*D11 - D9*D10)
D21   168 (1/25)*(2*c3*D18' + 12*c2*D19 - 30*D10*D11 + 15*D9*D12)
D22   176 (1/25)*(c3*D19 + c4*D18' + 10*D9*D13 - 5*D11^2)
D     160 (1/5)^15*(-100*c2^3*c3^2*c4^2 - 135*c3^4*c4^2 + 400*c2^4*c4^3 + 720*c2*c3^2*c4^3 - 640*c2^2*c4^4 + 256*c4^5 + 80*c2^3*c3^3*c5 + 108*c3^5*c5 - 360*c2^4*c3*c4*c5 - 630*c2*c3^3*c4*c5 + 560*c2^2*c3*c4^2*c5 - 320*c3*c4^3*c5 + 108*c2^5*c5^2 + 165*c2^2*c3^2*c5^2 - 180*c2^3*c4*c5^2 + 90*c3^2*c4*c5^2 + 80*c2*c4^2*c5^2 - 30*c2*c3*c5^3 + c5^4)
";

/// Parse rows `name degree expression`; blank lines and `#` comments are skipped.
pub fn parse_table(text: &str) -> Result<Vec<TableRow>> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.splitn(3, char::is_whitespace);
        let name = parts.next().unwrap_or_default().to_string();
        let rest = parts.next().zip(parts.next());
        let (deg, expr) = rest.ok_or_else(|| Error::Parse(format!("table row {line:?}")))?;
        let (deg, expr) = if deg.is_empty() {
            let mut p = expr.trim_start().splitn(2, char::is_whitespace);
            (p.next().unwrap_or_default(), p.next().unwrap_or_default())
        } else {
            (deg, expr)
        };
        let degree = deg.trim().parse().map_err(|_| Error::Parse(format!("degree in {line:?}")))?;
        out.push(TableRow { name, degree, expression: expr.trim().to_string() });
    }
    Ok(out)
}

pub fn generator_table() -> Vec<TableRow> {
    parse_table(GENERATOR_TABLE).expect("built-in table parses")
}

/// Display name: `D15'` becomes `Δ15'`, `D` becomes `Δ`.
pub fn display_name(name: &str) -> String {
    match name.strip_prefix('D') {
        Some(rest) => format!("Δ{rest}"),
        None => name.to_string(),
    }
}

struct TableContext<'a> {
    ring: &'a Arc<RingSpec>,
    known: &'a BTreeMap<String, Polynomial>,
}

impl ExprContext for TableContext<'_> {
    type Value = Polynomial;

    fn constant(&self, c: LocalRational) -> Result<Polynomial> {
        Polynomial::constant(self.ring, c)
    }

    fn symbol(&self, name: &str) -> Result<Polynomial> {
        self.known.get(name).cloned().ok_or_else(|| Error::Parse(format!("unknown symbol {name}")))
    }

    fn add(&self, a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
        a.add(b)
    }

    fn mul(&self, a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
        a.mul(b)
    }

    fn neg(&self, a: &Polynomial) -> Result<Polynomial> {
        Ok(a.neg())
    }

    fn scale(&self, a: &Polynomial, c: &LocalRational) -> Result<Polynomial> {
        a.scale(c)
    }
}

/// Result of expanding one table row.
#[derive(Clone, Debug)]
pub struct RowCheck {
    pub name: String,
    pub outcome: Result<GeneratorRecord>,
}

/// Expand every row over `Q`, then check 5-integrality, exact invariance and degree.
/// A failing row is reported and not made available to later rows.
pub fn expand_table(rows: &[TableRow]) -> Result<Vec<RowCheck>> {
    let spec = full_spec();
    let qring = spec.base().quotient(CoefficientMode::Q, &[]);
    let mut known: BTreeMap<String, Polynomial> = BTreeMap::new();
    for i in 2..=5 {
        known.insert(format!("c{i}"), c_polynomial(i)?.reinterpret(&qring)?);
    }
    let mut out = Vec::new();
    for row in rows {
        let outcome = expand_row(&spec, &qring, &known, row);
        if let Ok(rec) = &outcome {
            known.insert(row.name.clone(), rec.expansion.reinterpret(&qring)?);
        }
        out.push(RowCheck { name: row.name.clone(), outcome });
    }
    Ok(out)
}

fn expand_row(
    spec: &Arc<AlgebroidSpec>,
    qring: &Arc<RingSpec>,
    known: &BTreeMap<String, Polynomial>,
    row: &TableRow,
) -> Result<GeneratorRecord> {
    let name = display_name(&row.name);
    let fail = |detail: String| Error::TableEntry { name: name.clone(), detail };
    let x = parse_with(&TableContext { ring: qring, known }, &row.expression).map_err(|e| fail(e.to_string()))?;
    if !x.is_integral() {
        return Err(Error::IntegralityFailure { name });
    }
    let x = x.reinterpret(spec.base())?;
    if x.is_zero() || x.homogeneous_degree() != Some(row.degree) {
        return Err(fail(format!("expansion is not homogeneous of degree {}", row.degree)));
    }
    if !is_invariant(spec, &x)? {
        return Err(Error::InvarianceFailure { name });
    }
    Ok(GeneratorRecord {
        name,
        degree: row.degree,
        expression: row.expression.clone(),
        depth: leading_depth(&x),
        expansion: x,
    })
}

/// `c_2`, `c_3` and the table rows: the 23 generator records.
pub fn generator_records() -> Result<Vec<GeneratorRecord>> {
    let mut out = vec![c_class(2)?.0, c_class(3)?.0];
    for row in expand_table(&generator_table())? {
        out.push(row.outcome?);
    }
    Ok(out)
}

/// Determinant of a square matrix of polynomials, by expansion over row subsets.
pub fn polynomial_determinant(m: &[Vec<Polynomial>]) -> Result<Polynomial> {
    let n = m.len();
    assert!(n < 20 && m.iter().all(|r| r.len() == n));
    let ring = m[0][0].ring().clone();
    let mut level: BTreeMap<u32, Polynomial> = BTreeMap::new();
    level.insert(0, Polynomial::one(&ring));
    for col in 0..n {
        let mut next: BTreeMap<u32, Polynomial> = BTreeMap::new();
        for (&used, val) in &level {
            for (row, r) in m.iter().enumerate() {
                if used & (1 << row) != 0 || r[col].is_zero() {
                    continue;
                }
                let above = (used >> (row + 1)).count_ones();
                let mut term = val.mul(&r[col])?;
                if above % 2 == 1 {
                    term = term.neg();
                }
                let slot = next.entry(used | (1 << row)).or_insert_with(|| Polynomial::zero(&ring));
                *slot = slot.add(&term)?;
            }
        }
        level = next;
    }
    Ok(level.remove(&((1u32 << n) - 1)).unwrap_or_else(|| Polynomial::zero(&ring)))
}

/// Resultant of two polynomials in `x`, given by coefficient lists from the top degree.
pub fn resultant(f: &[Polynomial], g: &[Polynomial]) -> Result<Polynomial> {
    let (m, n) = (f.len() - 1, g.len() - 1);
    let ring = f[0].ring().clone();
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![Polynomial::zero(&ring); size];
        for (j, c) in f.iter().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![Polynomial::zero(&ring); size];
        for (j, c) in g.iter().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    polynomial_determinant(&rows)
}

/// Discriminant of `x^5 + a_1 x^4 + .. + a_5`, scaled by the 5-unit that makes it
/// congruent to `a_4^5` modulo `(5, a_1, a_2, a_3)`.
pub fn discriminant() -> Result<Polynomial> {
    let spec = full_spec();
    let base = spec.base();
    let f: Vec<Polynomial> =
        std::iter::once(Polynomial::one(base)).chain((0..5).map(|i| Polynomial::generator(base, i))).collect();
    let df: Vec<Polynomial> = f[..5]
        .iter()
        .enumerate()
        .map(|(k, c)| c.scale(&LocalRational::from(5 - k as i64)))
        .collect::<Result<_>>()?;
    // leading coefficient 1 and (-1)^{n(n-1)/2} = 1 for n = 5
    let res = resultant(&f, &df)?;
    let a4_5 = base.monomial(&[0, 0, 0, 5, 0]);
    let lead = res.coefficient(&a4_5);
    if lead.is_zero() || !lead.is_5_unit() {
        return Err(Error::NormalizationFailure(format!("coefficient of a4^5 is {lead}")));
    }
    let disc = res.scale(&lead.inv()?)?;
    let reduced = reduce_mod_ideal(&disc, 3)?;
    let expect = Polynomial::monomial(reduced.ring(), a4_5, LocalRational::one())?;
    if reduced != expect {
        return Err(Error::NormalizationFailure(format!("reduction mod I3 is {reduced}")));
    }
    Ok(disc)
}

/// Image in `F_5[a_{k+1}, ..]`, i.e. modulo `I_k = (5, a_1, .., a_k)`.
pub fn reduce_mod_ideal(x: &Polynomial, k: usize) -> Result<Polynomial> {
    let ring = x.ring().quotient(CoefficientMode::F5, &(0..k).collect::<Vec<_>>());
    x.reinterpret(&ring)
}

/// Set `a_5 = 0`, landing in the coefficient ring of the reduced presentation.
pub fn restrict_to_reduced(x: &Polynomial) -> Result<Polynomial> {
    let target = AlgebroidSpec::reduced().base().clone();
    let mut assign: Vec<Polynomial> = (0..4).map(|i| Polynomial::generator(&target, i)).collect();
    assign.push(Polynomial::zero(&target));
    x.substitute(&assign)
}

/// Whether `x = u y` for a unit `u` of `Z_(5)` (or of `F_5` for residue rings).
pub fn equal_up_to_unit(x: &Polynomial, y: &Polynomial) -> bool {
    match proportionality(x, y) {
        Some(l) => l.is_5_unit() || (x.ring().mode() == CoefficientMode::F5 && !l.is_zero()),
        None => false,
    }
}

/// Outcome of the generator search in one degree.
#[derive(Clone, Debug, Serialize)]
pub struct DegreeCensus {
    pub t: u32,
    pub rank: usize,
    pub decomposable_rank: usize,
    pub new_generators: usize,
    #[serde(skip)]
    pub representatives: Vec<Polynomial>,
}

/// Generator search up to `t_max`: in each degree, the number of generators needed
/// beyond products of earlier ones is `rank - dim_F5(products mod 5)`. Saturation of
/// the invariant lattice makes the reduction mod 5 injective on it.
pub fn new_generators(t_max: u32) -> Result<Vec<DegreeCensus>> {
    let spec = full_spec();
    let base = spec.base();
    let mut lattices: BTreeMap<u32, Vec<Polynomial>> = BTreeMap::new();
    let mut gens: Vec<Polynomial> = Vec::new();
    let mut out = Vec::new();
    for t in (0..=t_max).step_by(8) {
        let basis = invariant_basis(t)?.basis;
        lattices.insert(t, basis.clone());
        if t == 0 {
            continue;
        }
        let monos = graded_piece_basis(base, t);
        let vec_of = |x: &Polynomial| -> Result<SparseVec> {
            let v = x.coordinates(&monos, 5)?;
            Ok(SparseVec::from_unsorted(v.into_iter().enumerate().map(|(i, c)| (i as u32, c)).collect(), 5))
        };
        let mut products = Vec::new();
        for g in &gens {
            let d = g.homogeneous_degree().expect("homogeneous");
            if d < t {
                for y in &lattices[&(t - d)] {
                    products.push(vec_of(&g.mul(y)?)?);
                }
            }
        }
        let decomposable = rank_mod_p(5, monos.len(), &products);
        let mut ech = crate::coefficients::Echelon::new(5, monos.len());
        for v in &products {
            ech.insert(v);
        }
        let mut reps = Vec::new();
        for x in &basis {
            if ech.insert(&vec_of(x)?) {
                reps.push(primitive(x)?);
            }
        }
        gens.extend(reps.iter().cloned());
        out.push(DegreeCensus {
            t,
            rank: basis.len(),
            decomposable_rank: decomposable,
            new_generators: basis.len() - decomposable,
            representatives: reps,
        });
    }
    Ok(out)
}

/// Rank mod 5 of all products of `records` in degree `t`, against the rank of `H^0_t`.
/// Equal ranks mean the records generate `H^0` in that degree.
pub fn records_span(records: &[GeneratorRecord], t: u32) -> Result<(usize, usize)> {
    let base = full_spec().base().clone();
    let monos = graded_piece_basis(&base, t);
    let mut products = Vec::new();
    let mut stack = vec![(0usize, Polynomial::one(&base), 0u32)];
    while let Some((start, acc, d)) = stack.pop() {
        if d == t {
            let v = acc.coordinates(&monos, 5)?;
            products.push(SparseVec::from_unsorted(v.into_iter().enumerate().map(|(i, c)| (i as u32, c)).collect(), 5));
            continue;
        }
        for (i, r) in records.iter().enumerate().skip(start) {
            if d + r.degree <= t {
                stack.push((i, acc.mul(&r.expansion)?, d + r.degree));
            }
        }
    }
    Ok((rank_mod_p(5, monos.len(), &products), invariant_basis(t)?.rank()))
}

fn primitive(x: &Polynomial) -> Result<Polynomial> {
    let mut g = BigInt::zero();
    for (_, c) in x.integer_coefficients()? {
        g = num_integer::Integer::gcd(&g, &c);
    }
    if g.is_zero() || g.is_one() {
        return Ok(x.clone());
    }
    let sign = if x.leading().is_some_and(|(_, c)| c.signum() < 0) { -BigInt::one() } else { BigInt::one() };
    x.scale(&LocalRational::new(sign, g.abs())?)
}

pub fn records_json(records: &[GeneratorRecord]) -> serde_json::Value {
    json!(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_degree_invariants() {
        assert_eq!(invariant_basis(8).unwrap().rank(), 0);
        let b16 = invariant_basis(16).unwrap();
        assert_eq!(b16.rank(), 1);
        assert!(equal_up_to_unit(&b16.basis[0], &c_polynomial(2).unwrap()));
        assert_eq!(invariant_basis(32).unwrap().rank(), 2);
        assert_eq!(invariant_basis(24).unwrap().rank(), 1);
    }

    #[test]
    fn saturation_and_rational_ranks() {
        for t in (0..=96).step_by(8) {
            let b = invariant_basis(t).unwrap();
            assert_eq!(b.rank(), partitions_into(t as usize / 8, &[2, 3, 4, 5]), "t={t}");
            let monos = graded_piece_basis(full_spec().base(), t);
            let vecs: Vec<SparseVec> = b
                .basis
                .iter()
                .map(|x| {
                    let v = x.coordinates(&monos, 5).unwrap();
                    SparseVec::from_unsorted(v.into_iter().enumerate().map(|(i, c)| (i as u32, c)).collect(), 5)
                })
                .collect();
            assert_eq!(rank_mod_p(5, monos.len(), &vecs), b.rank());
        }
    }

    #[test]
    fn agrees_with_exact_saturated_kernel() {
        use crate::coefficients::{kernel_saturated, IntMatrix};
        let spec = full_spec();
        for t in (16..=80).step_by(8) {
            let monos = graded_piece_basis(spec.base(), t);
            let mut eta = EtaCache::new(&spec);
            let mut rows: BTreeMap<(u32, crate::gradedpoly::Monomial), usize> = BTreeMap::new();
            let mut entries = Vec::new();
            for (j, m) in monos.iter().enumerate() {
                for (e, q) in eta.eta_monomial(m).terms() {
                    for (m2, c) in q.terms().filter(|_| e > 0) {
                        let n = rows.len();
                        entries.push((*rows.entry((e, m2.clone())).or_insert(n), j, c.numer().clone()));
                    }
                }
            }
            let mut mat = IntMatrix::zeros(rows.len(), monos.len());
            for (i, j, c) in entries {
                mat.add_to(i, j, &c);
            }
            let exact = kernel_saturated(&mat);
            let ours = invariant_basis(t).unwrap().basis;
            assert_eq!(exact.len(), ours.len(), "t={t}");
            // same saturated lattice: each of ours is an integral combination of the exact basis
            let exact_polys: Vec<Polynomial> = exact
                .iter()
                .map(|v| {
                    Polynomial::from_terms(
                        spec.base(),
                        v.iter().zip(&monos).map(|(c, m)| (m.clone(), LocalRational::from(c.clone()))),
                    )
                    .unwrap()
                })
                .collect();
            let mut joint: Vec<SparseVec> = exact_polys.iter().map(|x| f5(x, &monos)).collect();
            assert_eq!(rank_mod_p(5, monos.len(), &joint), exact.len());
            joint.extend(ours.iter().map(|x| f5(x, &monos)));
            assert_eq!(rank_mod_p(5, monos.len(), &joint), exact.len(), "t={t}");
            for x in &ours {
                assert!(is_invariant(&spec, x).unwrap());
            }
        }
    }

    fn f5(x: &Polynomial, monos: &[crate::gradedpoly::Monomial]) -> SparseVec {
        let v = x.coordinates(monos, 5).unwrap();
        SparseVec::from_unsorted(v.into_iter().enumerate().map(|(i, c)| (i as u32, c)).collect(), 5)
    }

    #[test]
    fn c_classes_and_closed_form() {
        // closed form over the content-one normalisation
        for (i, expected) in [(2, 5), (3, -5), (4, 5), (5, -1)] {
            let (rec, ratio) = c_class(i).unwrap();
            assert_eq!(rec.degree, 8 * i as u32);
            assert_eq!(ratio, LocalRational::from(expected), "c{i}");
        }
    }

    #[test]
    fn depth_examples() {
        assert_eq!(depth((0, 1, 0, 0)).unwrap(), 1);
        assert_eq!(depth((0, 0, 0, 5)).unwrap(), 15);
        assert_eq!(depth((1, 0, 0, 0)).unwrap(), 0);
        assert!(depth((2, 0, 0, 0)).is_err());
    }

    #[test]
    fn determinant_matches_integer_determinant() {
        let ring = full_spec().base().clone();
        let rows = [vec![2i64, -1, 3], vec![0, 4, 1], vec![5, 2, -2]];
        let m: Vec<Vec<Polynomial>> = rows
            .iter()
            .map(|r| r.iter().map(|&c| Polynomial::constant(&ring, LocalRational::from(c)).unwrap()).collect())
            .collect();
        let d = polynomial_determinant(&m).unwrap();
        let exact = crate::coefficients::determinant(&crate::coefficients::IntMatrix::from_rows(&rows));
        assert_eq!(d, Polynomial::constant(&ring, LocalRational::from(exact)).unwrap());
    }

    #[test]
    fn corrupted_row_is_rejected() {
        let mut rows = generator_table();
        let i = rows.iter().position(|r| r.name == "D10").unwrap();
        rows[i].expression = rows[i].expression.replacen("2*D5^2", "3*D5^2", 1);
        let checks = expand_table(&rows[..=i]).unwrap();
        assert!(checks[..i].iter().all(|c| c.outcome.is_ok()));
        assert!(checks[i].outcome.is_err());
    }

    #[test]
    fn discriminant_reductions() {
        let d = discriminant().unwrap();
        assert_eq!(d.homogeneous_degree(), Some(160));
        assert!(is_invariant(&full_spec(), &d).unwrap());
        let mod_i1 = reduce_mod_ideal(&restrict_to_reduced(&d).unwrap(), 1).unwrap();
        let expect = crate::gradedpoly::parse_polynomial(
            mod_i1.ring(),
            "a4^5 - 2*a3^4*a4^2 - a2*a3^2*a4^3 + 2*a2^2*a4^4 + a2^3*a3^2*a4^2 + a2^4*a4^3",
        )
        .unwrap();
        assert!(equal_up_to_unit(&mod_i1, &expect));
    }

    #[test]
    fn table_records_agree_with_discriminant_and_depths() {
        let recs = generator_records().unwrap();
        assert_eq!(recs.len(), 23);
        let d = recs.iter().find(|r| r.name == "Δ").unwrap();
        assert!(equal_up_to_unit(&discriminant().unwrap(), &d.expansion));
        // depth equals the power of 5 in the defining denominator
        for (name, v) in [("Δ4", 2), ("Δ5", 2), ("Δ6", 3), ("Δ8", 5), ("Δ9", 5), ("Δ12", 8), ("Δ", 15)] {
            assert_eq!(recs.iter().find(|r| r.name == name).unwrap().depth, Some(v), "{name}");
        }
    }

    #[test]
    fn census_low_degrees() {
        let census = new_generators(120).unwrap();
        let new: Vec<(u32, usize)> = census.iter().filter(|c| c.new_generators > 0).map(|c| (c.t, c.new_generators)).collect();
        let mut expect: Vec<(u32, usize)> = vec![(16, 1), (24, 1)];
        expect.extend((4..=15).map(|i| (8 * i, 1)));
        expect.last_mut().unwrap().1 = 2;
        assert_eq!(new, expect);
        for c in &census {
            assert_eq!(c.rank, partitions_into(c.t as usize / 8, &[2, 3, 4, 5]));
        }
    }

    #[test]
    fn records_generate_in_low_degrees() {
        let recs = generator_records().unwrap();
        for t in [48, 96, 128] {
            let (span, rank) = records_span(&recs, t).unwrap();
            assert_eq!(span, rank, "t={t}");
        }
    }
}
