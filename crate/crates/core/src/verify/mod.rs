//! The identity suite: every published claim that can be recomputed from the Hopf
//! algebroid, as a named check grouped by acceptance criterion.
//!
//! Each check has a role tag such as `cochain/d(a3)` and a window; a
//! [`VerifyConfig`] can shrink windows for quick runs.

mod presented;

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::algebroid::{check_axioms, eta_r, AlgebroidSpec, GammaElement};
use crate::bockstein::{Bockstein, FiltrationSpec};
use crate::cobar::{CobarElement, CobarEngine, DEFAULT_PRECISION};
use crate::error::{Error, Result};
use crate::gradedpoly::parse_polynomial;
use crate::invariants;
use crate::report::{self, ChartSpec, DotStyle};

pub use presented::{Generator, PresentedAlgebra};

/// The `b` cocycle.
pub const B_REP: &str = "[r^4|r] + 2*[r^3|r^2] + 2*[r^2|r^3] + [r|r^4]";
/// `x_1` modulo `I_1`.
pub const X1_MOD_I1: &str = "a4*r + a3*r^2 + a2*r^3";
/// `x_1` over `Z_(5)`.
pub const X1_INTEGRAL: &str = "a1*r^4 + a2*r^3 + a3*r^2 + a4*r";
pub const X1_MOD_I2: &str = "a4*r + a3*r^2";
pub const X2_MOD_I2: &str = "a4^2*r + 2*a3*a4*r^2 + 3*a3^2*r^3";
pub const X3_MOD_I2: &str = "a4^3*r + 3*a3*a4^2*r^2 - a3^2*a4*r^3 - 3*a3^3*r^4";
/// `[a_3^2]` modulo `I_1`.
pub const A3_SQUARED: &str = "a3^2 + 2*a2*a4";

/// Overlay of the first two length-9 differentials on the integral chart.
pub const DEFAULT_OVERLAY: &str = "\
# d9 from the discriminant, and its product with b
d 9 (0,160) -> (9,168) Δ -> ab^4
d 9 (2,200) -> (11,208) bΔ -> ab^5
";

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    /// Caps on every check's own window.
    pub s_cap: Option<usize>,
    pub t_cap: Option<u32>,
    /// Working precision `5^K` for integral computations.
    pub precision: u32,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { s_cap: None, t_cap: None, precision: DEFAULT_PRECISION }
    }
}

impl VerifyConfig {
    fn s(&self, s: usize) -> usize {
        self.s_cap.map_or(s, |c| c.min(s))
    }

    fn t(&self, t: u32) -> u32 {
        self.t_cap.map_or(t, |c| c.min(t))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub tag: String,
    pub criterion: u8,
    pub passed: bool,
    pub detail: String,
}

/// Shared engines so that matrices are built once per run.
pub struct Context {
    pub config: VerifyConfig,
    engines: Mutex<BTreeMap<(String, u32), Arc<CobarEngine>>>,
}

impl Context {
    pub fn new(config: VerifyConfig) -> Self {
        Context { config, engines: Mutex::new(BTreeMap::new()) }
    }

    /// An engine for `spec` covering degrees up to `t_max`.
    pub fn engine(&self, spec: &Arc<AlgebroidSpec>, t_max: u32) -> Arc<CobarEngine> {
        let mut map = self.engines.lock().expect("engine cache");
        let key = (spec.label(), self.config.precision);
        let key = (format!("{}@{}", key.0, key.1), t_max);
        if let Some((_, e)) = map.range((key.0.clone(), t_max)..).find(|(k, _)| k.0 == key.0) {
            return e.clone();
        }
        let e = Arc::new(CobarEngine::with_precision(spec, t_max, self.config.precision));
        map.insert(key, e.clone());
        e
    }
}

type CheckFn = fn(&Context) -> Result<(bool, String)>;

/// A named check.
pub struct Check {
    pub tag: &'static str,
    pub criterion: u8,
    run: CheckFn,
}

impl Check {
    pub fn run(&self, cx: &Context) -> CheckResult {
        let (passed, detail) = match (self.run)(cx) {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        CheckResult { tag: self.tag.to_string(), criterion: self.criterion, passed, detail }
    }
}

macro_rules! check {
    ($c:expr, $tag:expr, $f:expr) => {
        Check { tag: $tag, criterion: $c, run: $f }
    };
}

/// Every check, in criterion order.
pub fn suite() -> Vec<Check> {
    vec![
        check!(1, "right-unit/a1", |_| right_unit(0, "a1 + 5*r")),
        check!(1, "right-unit/a4", |_| right_unit(3, "a4 + 2*a3*r + 3*a2*r^2 + 4*a1*r^3 + 5*r^4")),
        check!(1, "axioms/full", |cx| axioms(&AlgebroidSpec::full(), cx.config.t(200))),
        check!(1, "axioms/reduced", |cx| axioms(&AlgebroidSpec::reduced(), cx.config.t(200))),
        check!(2, "mod-I4/exterior-times-polynomial", mod_i4_dimensions),
        check!(3, "cochain/d(a3)", |_| cochain_equal(1, "a3", "3*a2*[r]")),
        check!(3, "cochain/d(a3^3+3a2a3a4)", |_| {
            cochain_equal(1, "a3^3 + 3*a2*a3*a4", &format!("-a2^2*({X1_MOD_I1})"))
        }),
        check!(3, "cochain/d(x2-correction)", |_| {
            cochain_equal(1, &format!("{X2_MOD_I2} + 2*a2*a4*r^3 + 3*a2*a3*r^4"), &format!("-a2^2*({B_REP})"))
        }),
        check!(3, "cochain/d(a2x1-correction)", |_| {
            cochain_equal(0, &format!("a2*({X1_MOD_I1}) - a1*a2*r^4 + a1*a3*r^3 + 2*a1*a4*r^2"), &format!("a1^2*({B_REP})"))
        }),
        check!(3, "cochain/hidden-extension-witness", |_| hidden_extension_witness()),
        check!(3, "cochain/x1-bounds-5b", |_| x1_bounds_5b()),
        check!(4, "cocycle/x1-mod-I2", |_| cocycle(2, X1_MOD_I2)),
        check!(4, "cocycle/x2-mod-I2", |_| cocycle(2, X2_MOD_I2)),
        check!(4, "cocycle/x3-mod-I2", |_| cocycle(2, X3_MOD_I2)),
        check!(4, "cocycle/x1-mod-I1", |_| cocycle(1, X1_MOD_I1)),
        check!(4, "cocycle/b-every-quotient", |_| b_everywhere()),
        check!(5, "bockstein/d4(x4)-mod-I2", |cx| differential(cx, Some(3), "a4^4*r", &format!("a3^4*({B_REP})"), 4)),
        check!(5, "bockstein/d1(x3)-mod-I1", |cx| differential(cx, Some(2), X3_MOD_I2, &format!("a2*a3^2*({B_REP})"), 1)),
        check!(5, "bockstein/d2(a3^3)-mod-I1", |cx| {
            differential(cx, Some(2), "a3^3", &format!("-a2^2*({X1_MOD_I1})"), 2)
        }),
        check!(5, "bockstein/d2(x2)-mod-I1", |cx| differential(cx, Some(2), X2_MOD_I2, &format!("-a2^2*({B_REP})"), 2)),
        check!(5, "bockstein/d1(a2)-mod-5", |cx| differential(cx, Some(1), "a2", "-a1*[r]", 1)),
        check!(5, "bockstein/d1([a3^2])-mod-5", |cx| {
            differential(cx, Some(1), A3_SQUARED, &format!("3*a1*({X1_MOD_I1})"), 1)
        }),
        check!(5, "bockstein/d2(a2x1)-mod-5", |cx| {
            differential(cx, Some(1), &format!("a2*({X1_MOD_I1})"), &format!("a1^2*({B_REP})"), 2)
        }),
        check!(5, "bockstein/d1(a1)-5-adic", |cx| differential(cx, None, "a1", "[r]", 1)),
        check!(5, "bockstein/d1(x1)-5-adic", |cx| differential(cx, None, X1_INTEGRAL, B_REP, 1)),
        check!(5, "bockstein/collapse-adding-a4", |cx| collapse(cx, Some(4), 1)),
        check!(5, "bockstein/collapse-adding-a3", |cx| collapse(cx, Some(3), 5)),
        check!(5, "bockstein/collapse-adding-a2", |cx| collapse(cx, Some(2), 3)),
        check!(5, "bockstein/collapse-adding-a1", |cx| collapse(cx, Some(1), 3)),
        check!(5, "bockstein/collapse-5-adic", |cx| collapse(cx, None, 2)),
        check!(6, "mod-I1/presented-algebra-census", mod_i1_census),
        check!(6, "mod-I1/completed-presentation-census", mod_i1_census_completed),
        check!(6, "mod-I1/forced-relations-vanish", missing_relations_vanish),
        check!(6, "mod-I1/hidden-extension-class", hidden_extension_class),
        check!(7, "massey/<x1,a,a>-mod-I1", massey_x1_a_a),
        check!(7, "massey/<x1,a,a3>-mod-I2", massey_x1_a_a3),
        check!(7, "product/x1x2-mod-I2", product_x1_x2),
        check!(8, "equivalence/mod-I0", |cx| equivalence(cx, Some(0))),
        check!(8, "equivalence/mod-I1", |cx| equivalence(cx, Some(1))),
        check!(8, "equivalence/mod-I2", |cx| equivalence(cx, Some(2))),
        check!(8, "equivalence/mod-I3", |cx| equivalence(cx, Some(3))),
        check!(8, "equivalence/mod-I4", |cx| equivalence(cx, Some(4))),
        check!(8, "equivalence/integral", |cx| equivalence(cx, None)),
        check!(9, "generator-table/integral-invariant-degree", |_| table_expansions()),
        check!(9, "invariants/rational-ranks", |cx| rational_ranks(cx.config.t(176))),
        check!(9, "invariants/generator-census", |cx| generator_census(cx.config.t(176))),
        check!(9, "invariants/generator-table-spans", |cx| table_spans(cx.config.t(176))),
        check!(9, "discriminant/generator-table", |_| discriminant_matches_table()),
        check!(9, "discriminant/mod-I3", |_| discriminant_mod_i3()),
        check!(9, "discriminant/mod-I1", |_| discriminant_mod_i1()),
        check!(10, "integral/groups", integral_groups),
        check!(10, "integral/precision-stable", integral_precision_stable),
        check!(10, "integral/a-squared", |cx| integral_a_squared(cx)),
        check!(10, "integral/maximal-ideal-annihilates", integral_annihilation),
        check!(10, "integral/discriminant-injective", integral_discriminant_injective),
        check!(11, "overlay/arrows-on-nonzero-cells", overlay_arrows),
    ]
}

/// Run every check whose criterion is in `criteria` (all when empty).
pub fn run(cx: &Context, criteria: &[u8]) -> Vec<CheckResult> {
    suite().iter().filter(|c| criteria.is_empty() || criteria.contains(&c.criterion)).map(|c| c.run(cx)).collect()
}

fn el(spec: &Arc<AlgebroidSpec>, text: &str) -> Result<CobarElement> {
    CobarElement::parse(spec, text)
}

fn mod_i(k: usize) -> Result<Arc<AlgebroidSpec>> {
    AlgebroidSpec::reduced().quotient(k)
}

fn verdict(ok: bool, pass: impl Into<String>, fail: impl Into<String>) -> (bool, String) {
    (ok, if ok { pass.into() } else { fail.into() })
}

fn right_unit(i: usize, expected: &str) -> Result<(bool, String)> {
    let spec = AlgebroidSpec::full();
    let x = parse_polynomial(spec.base(), &format!("a{}", i + 1))?;
    let got = eta_r(&spec, &x)?;
    let want = GammaElement::parse(&spec, expected)?;
    Ok(verdict(got == want, format!("eta_R(a{}) = {expected}", i + 1), format!("eta_R(a{}) = {got:?}", i + 1)))
}

fn axioms(spec: &Arc<AlgebroidSpec>, t_max: u32) -> Result<(bool, String)> {
    let r = check_axioms(spec, t_max)?;
    Ok((true, format!("{} monomials, {} powers of r, t <= {t_max}", r.monomials_checked, r.r_powers_checked)))
}

fn mod_i4_dimensions(cx: &Context) -> Result<(bool, String)> {
    let (s_max, t_max) = (cx.config.s(8), cx.config.t(400));
    let e = cx.engine(&mod_i(4)?, t_max);
    for s in 0..=s_max {
        for t in (0..=t_max).step_by(8) {
            let k = (s / 2) as u32;
            let expect = usize::from(if s % 2 == 0 { t == 40 * k } else { t == 40 * k + 8 });
            let got = e.dim_mod_p(s, t)?;
            if got != expect {
                return Ok((false, format!("dim H^({s},{t}) = {got}, expected {expect}")));
            }
        }
    }
    Ok((true, format!("s <= {s_max}, t <= {t_max}")))
}

fn cochain_equal(k: usize, source: &str, target: &str) -> Result<(bool, String)> {
    let spec = mod_i(k)?;
    let d = el(&spec, source)?.d()?;
    let want = el(&spec, target)?;
    Ok(verdict(d == want, format!("d({source}) = {target} mod I{k}"), format!("d({source}) = {d}")))
}

fn hidden_extension_witness() -> Result<(bool, String)> {
    let spec = mod_i(1)?;
    let lhs = el(&spec, "2*[r]")?.mul(&el(&spec, A3_SQUARED)?)?.sub(&el(&spec, &format!("a2*({X1_MOD_I1})"))?)?;
    let d = el(&spec, "a3*a4")?.d()?;
    if d == lhs {
        return Ok((true, "2a[a3^2] - a2 x1 = d(a3 a4) mod I1".into()));
    }
    Ok(verdict(d == lhs.neg(), "2a[a3^2] - a2 x1 = -d(a3 a4) mod I1", format!("difference {lhs}, d(a3 a4) = {d}")))
}

fn x1_bounds_5b() -> Result<(bool, String)> {
    for spec in [AlgebroidSpec::full(), AlgebroidSpec::reduced()] {
        let d = el(&spec, X1_INTEGRAL)?.d()?;
        let b = el(&spec, B_REP)?;
        let unit = [5i64, -5, 10, -10].into_iter().find(|&u| b.scale(&u.into()).is_ok_and(|x| x == d));
        if unit.is_none() {
            return Ok((false, format!("{}: d(x1) = {d}", spec.label())));
        }
    }
    Ok((true, "d(x1) = 5b in both presentations".into()))
}

fn cocycle(k: usize, text: &str) -> Result<(bool, String)> {
    let x = el(&mod_i(k)?, text)?;
    Ok(verdict(x.is_cocycle()?, format!("cocycle mod I{k}"), format!("d = {}", x.d()?)))
}

fn b_everywhere() -> Result<(bool, String)> {
    let mut specs = vec![AlgebroidSpec::full(), AlgebroidSpec::reduced()];
    for k in 0..5 {
        specs.push(AlgebroidSpec::full().quotient(k)?);
        specs.push(mod_i(k)?);
    }
    for spec in &specs {
        if !el(spec, B_REP)?.is_cocycle()? {
            return Ok((false, format!("b is not a cocycle in {}", spec.label())));
        }
    }
    Ok((true, format!("{} presentations", specs.len())))
}

fn filtration(adding: Option<usize>) -> Result<FiltrationSpec> {
    match adding {
        Some(k) => FiltrationSpec::adding(k),
        None => FiltrationSpec::five_adic(&AlgebroidSpec::reduced()),
    }
}

fn differential(cx: &Context, adding: Option<usize>, source: &str, target: &str, r: u32) -> Result<(bool, String)> {
    let f = filtration(adding)?;
    let spec = f.base.clone();
    let (x, y) = (el(&spec, source)?, el(&spec, target)?);
    let t = x.degree().ok_or_else(|| Error::DegreeMismatch(source.into()))?;
    let bs = Bockstein::with_precision(f, t.max(8), cx.config.precision);
    let ok = bs.verify_differential(&x, &y, r)?;
    Ok(verdict(ok, format!("d{r}({source}) = unit * ({target})"), format!("d{r}({source}) is not a unit multiple of {target}")))
}

fn collapse(cx: &Context, adding: Option<usize>, expected: u32) -> Result<(bool, String)> {
    let (s_max, t_max) = (cx.config.s(4), cx.config.t(240));
    let f = filtration(adding)?;
    let label = f.label();
    let bs = Bockstein::with_precision(f, t_max, cx.config.precision);
    let page = bs.collapse_page(s_max, t_max, expected + 2)?;
    let limit = if expected > 1 { bs.collapse_page(s_max, t_max, expected - 1)? } else { None };
    let ok = page == Some(expected) && (expected == 1 || limit.is_none());
    Ok(verdict(ok, format!("{label}: E{expected} = E_inf for s <= {s_max}, t <= {t_max}"), format!("{label}: collapses at {page:?}")))
}

/// The algebra `H*(A/I_1)` as stated: generators, then relations.
pub fn mod_i1_presentation() -> Result<PresentedAlgebra> {
    PresentedAlgebra::new(&[
        ("a", 1, 8),
        ("x1", 1, 40),
        ("b", 2, 40),
        ("a2", 0, 16),
        ("A", 0, 48),
        ("B", 0, 120),
        ("D", 0, 160),
    ])
    .relation("a*x1")?
    .relation("a*a2")?
    .relation("a*B")?
    .relation("b*a2^2")?
    .relation("x1*a2^2")?
    .relation("b*B")?
    .relation("b*A^2")?
    .relation("A^5 - B^2 - a2^3*A^4 - a2^6*A^3 - 2*a2^5*D")?
    .relation("2*a*A - x1*a2")
}

/// Relations forced by `a3 x_1 = 0` mod `I_2` and `d_1(x_3) = a_2 a_3^2 b`, absent from the stated list.
pub const MISSING_RELATIONS: [&str; 3] = ["x1*A", "b*a2*A", "x1*B"];

/// The stated presentation with [`MISSING_RELATIONS`] added.
pub fn mod_i1_completed() -> Result<PresentedAlgebra> {
    MISSING_RELATIONS.iter().try_fold(mod_i1_presentation()?, |alg, r| alg.relation(r))
}

fn census_against(cx: &Context, alg: &PresentedAlgebra) -> Result<(bool, String)> {
    let (s_max, t_max) = (cx.config.s(6), cx.config.t(400));
    let e = cx.engine(&mod_i(1)?, t_max);
    let (mut classes, mut bad) = (0, Vec::new());
    for s in 0..=s_max {
        for t in (0..=t_max).step_by(8) {
            let (got, want) = (e.dim_mod_p(s, t)?, alg.dimension(s, t));
            if got != want {
                bad.push(format!("({s},{t}) {got} vs {want}"));
            }
            classes += got;
        }
    }
    if bad.is_empty() {
        return Ok((true, format!("{classes} classes agree for s <= {s_max}, t <= {t_max}")));
    }
    let shown: Vec<_> = bad.iter().take(4).cloned().collect();
    Ok((false, format!("{} cells differ (computed vs presented), first {}", bad.len(), shown.join(", "))))
}

fn mod_i1_census(cx: &Context) -> Result<(bool, String)> {
    census_against(cx, &mod_i1_presentation()?)
}

fn mod_i1_census_completed(cx: &Context) -> Result<(bool, String)> {
    census_against(cx, &mod_i1_completed()?)
}

fn missing_relations_vanish(cx: &Context) -> Result<(bool, String)> {
    let spec = mod_i(1)?;
    let e = cx.engine(&spec, 112);
    let x1a = el(&spec, &format!("({X1_MOD_I1})*({A3_SQUARED})"))?;
    let a2ba = el(&spec, &format!("a2*({B_REP})*({A3_SQUARED})"))?;
    let ok = e.is_coboundary(&x1a)?.is_some() && e.is_coboundary(&a2ba)?.is_some();
    Ok(verdict(ok, "x1[a3^2] and a2 b[a3^2] are coboundaries", "a forced relation fails at cochain level"))
}

fn hidden_extension_class(cx: &Context) -> Result<(bool, String)> {
    let spec = mod_i(1)?;
    let e = cx.engine(&spec, 56);
    let lhs = el(&spec, "2*[r]")?.mul(&el(&spec, A3_SQUARED)?)?;
    let rhs = el(&spec, &format!("a2*({X1_MOD_I1})"))?;
    let nonzero = !e.is_zero_class(&rhs)?;
    let diff = e.is_coboundary(&lhs.sub(&rhs)?)?;
    Ok(verdict(nonzero && diff.is_some(), "2a[a3^2] = a2 x1 != 0", "classes differ or vanish"))
}

fn massey_x1_a_a(cx: &Context) -> Result<(bool, String)> {
    let spec = mod_i(1)?;
    let e = cx.engine(&spec, 96);
    let m = e.triple_massey(&el(&spec, X1_MOD_I1)?, &el(&spec, "[r]")?, &el(&spec, "[r]")?)?;
    let ok = e.massey_contains(&m, &el(&spec, &format!("a2*({B_REP})"))?, true)?;
    Ok(verdict(ok, format!("contains a2 b up to unit (indeterminacy rank {})", m.indeterminacy_rank), "does not contain a2 b"))
}

fn massey_x1_a_a3(cx: &Context) -> Result<(bool, String)> {
    let spec = mod_i(2)?;
    let e = cx.engine(&spec, 96);
    let m = e.triple_massey(&el(&spec, X1_MOD_I2)?, &el(&spec, "[r]")?, &el(&spec, "a3")?)?;
    let ok = e.massey_contains(&m, &el(&spec, X2_MOD_I2)?, true)?;
    Ok(verdict(ok, format!("contains x2 up to unit (indeterminacy rank {})", m.indeterminacy_rank), "does not contain x2"))
}

fn product_x1_x2(cx: &Context) -> Result<(bool, String)> {
    let spec = mod_i(2)?;
    let e = cx.engine(&spec, 112);
    let p = el(&spec, X1_MOD_I2)?.mul(&el(&spec, X2_MOD_I2)?)?;
    let ok = e.cohomologous_up_to_unit(&p, &el(&spec, &format!("a3^3*({B_REP})"))?)? && !e.is_zero_class(&p)?;
    Ok(verdict(ok, "x1 x2 = unit * a3^3 b", "x1 x2 is not a unit multiple of a3^3 b"))
}

fn equivalence(cx: &Context, k: Option<usize>) -> Result<(bool, String)> {
    let s_max = cx.config.s(4);
    let t_max = cx.config.t(240);
    let (full, red) = match k {
        Some(k) => (AlgebroidSpec::full().quotient(k)?, mod_i(k)?),
        None => (AlgebroidSpec::full(), AlgebroidSpec::reduced()),
    };
    let (ef, er) = (cx.engine(&full, t_max), cx.engine(&red, t_max));
    let mut classes = 0;
    for s in 0..=s_max {
        for t in (0..=t_max).step_by(8) {
            let (a, b) = if k.is_some() {
                let (a, b) = (ef.dim_mod_p(s, t)?, er.dim_mod_p(s, t)?);
                classes += a;
                ((a, Vec::new()), (b, Vec::new()))
            } else {
                let (a, b) = (ef.smith_data(s, t)?, er.smith_data(s, t)?);
                classes += a.0 + a.1.len();
                (a, b)
            };
            if a != b {
                return Ok((false, format!("({s},{t}): full {a:?}, reduced {b:?}")));
            }
        }
    }
    Ok((true, format!("{classes} classes agree for s <= {s_max}, t <= {t_max}")))
}

fn table_expansions() -> Result<(bool, String)> {
    let rows = invariants::expand_table(&invariants::generator_table())?;
    if let Some(bad) = rows.iter().find(|r| r.outcome.is_err()) {
        let e = bad.outcome.as_ref().err().map(|e| e.to_string()).unwrap_or_default();
        return Ok((false, e));
    }
    let mut count = rows.len();
    for i in 2..=3 {
        invariants::c_class(i)?;
        count += 1;
    }
    Ok(verdict(count == 23, format!("{count} records"), format!("{count} records, expected 23")))
}

fn rational_ranks(t_max: u32) -> Result<(bool, String)> {
    for (t, rank) in invariants::hilbert_h0(t_max)? {
        let want = invariants::partitions_into(t as usize / 8, &[2, 3, 4, 5]);
        if rank != want {
            return Ok((false, format!("rank H^0 in degree {t} is {rank}, expected {want}")));
        }
    }
    Ok((true, format!("t <= {t_max}")))
}

/// Generator degrees (with multiplicity) as stated for `H^0`.
pub fn stated_generator_degrees() -> BTreeMap<u32, usize> {
    let mut m = BTreeMap::from([(16, 1), (24, 1)]);
    for i in (4..=22).filter(|&i| i != 20) {
        m.insert(8 * i, 1);
    }
    // the primed classes and the discriminant
    *m.entry(120).or_default() += 1;
    *m.entry(144).or_default() += 1;
    *m.entry(160).or_default() += 1;
    m
}

fn generator_census(t_max: u32) -> Result<(bool, String)> {
    let stated = stated_generator_degrees();
    let mut diffs = Vec::new();
    for c in invariants::new_generators(t_max)? {
        let want = stated.get(&c.t).copied().unwrap_or(0);
        if c.new_generators != want {
            diffs.push(format!("t={}: {} minimal vs {} stated", c.t, c.new_generators, want));
        }
    }
    Ok(verdict(diffs.is_empty(), format!("matches for t <= {t_max}"), diffs.join("; ")))
}

fn table_spans(t_max: u32) -> Result<(bool, String)> {
    let recs = invariants::generator_records()?;
    for t in (8..=t_max).step_by(8) {
        let (span, rank) = invariants::records_span(&recs, t)?;
        if span != rank {
            return Ok((false, format!("degree {t}: products span {span} of {rank}")));
        }
    }
    Ok((true, format!("products of the 23 records span H^0 for t <= {t_max}")))
}

fn discriminant_matches_table() -> Result<(bool, String)> {
    let d = invariants::discriminant()?;
    let recs = invariants::generator_records()?;
    let table = recs.iter().find(|r| r.name == "Δ").ok_or_else(|| Error::TableEntry {
        name: "Δ".into(),
        detail: "missing".into(),
    })?;
    let ratio = invariants::proportionality(&table.expansion, &d);
    let ok = ratio.as_ref().is_some_and(|l| l.is_5_unit());
    Ok(verdict(ok, format!("table Δ = {} * disc", ratio.map(|r| r.to_string()).unwrap_or_default()), "not unit multiples"))
}

fn discriminant_mod_i3() -> Result<(bool, String)> {
    // the normalisation itself fails unless disc = a4^5 mod I3
    let d = invariants::discriminant()?;
    let r = invariants::reduce_mod_ideal(&d, 3)?;
    Ok((true, format!("disc = {r} mod I3")))
}

fn discriminant_mod_i1() -> Result<(bool, String)> {
    let d = invariants::discriminant()?;
    let r = invariants::reduce_mod_ideal(&invariants::restrict_to_reduced(&d)?, 1)?;
    let want = parse_polynomial(
        r.ring(),
        "a4^5 - 2*a3^4*a4^2 - a2*a3^2*a4^3 + 2*a2^2*a4^4 + a2^3*a3^2*a4^2 + a2^4*a4^3",
    )?;
    Ok(verdict(invariants::equal_up_to_unit(&r, &want), format!("disc = {r} mod I1"), format!("disc mod I1 = {r}")))
}

/// Expected integral group orders: `H^0` free, then `Z/5` on `Δ^j b^k` and `Δ^j a b^k`.
fn integral_expected(s: usize, t: u32) -> (usize, Vec<u32>) {
    if s == 0 {
        return (invariants::partitions_into(t as usize / 8, &[2, 3, 4, 5]), Vec::new());
    }
    let k = (s / 2) as u32;
    let base = if s.is_multiple_of(2) { 40 * k } else { 40 * k + 8 };
    let on_line = t >= base && (t - base).is_multiple_of(160);
    (0, if on_line { vec![1] } else { Vec::new() })
}

fn integral_groups(cx: &Context) -> Result<(bool, String)> {
    let (s_max, t_max) = (cx.config.s(4), cx.config.t(240));
    let e = cx.engine(&AlgebroidSpec::reduced(), t_max);
    for s in 0..=s_max {
        for t in (0..=t_max).step_by(8) {
            let got = e.smith_data(s, t)?;
            let want = integral_expected(s, t);
            if got != want {
                return Ok((false, format!("H^({s},{t}) = {got:?}, expected {want:?}")));
            }
        }
    }
    Ok((true, format!("H^0[a,b]/(a^2, m(a,b)) with H^0/m = F5[Δ] for s <= {s_max}, t <= {t_max}; torsion of exponent 1")))
}

fn integral_precision_stable(cx: &Context) -> Result<(bool, String)> {
    let (s_max, t_max) = (cx.config.s(4), cx.config.t(240));
    let k = cx.config.precision;
    let e = cx.engine(&AlgebroidSpec::reduced(), t_max);
    let finer = CobarEngine::with_precision(&AlgebroidSpec::reduced(), t_max, k + 1);
    for s in 1..=s_max {
        for t in (0..=t_max).step_by(8) {
            let (a, b) = (e.smith_data(s, t)?, finer.smith_data(s, t)?);
            if a != b || a.1.iter().any(|&v| v >= k) {
                return Ok((false, format!("({s},{t}): K={k} gives {a:?}, K={} gives {b:?}", k + 1)));
            }
        }
    }
    Ok((true, format!("torsion identical at K={k} and K={}", k + 1)))
}

fn integral_a_squared(cx: &Context) -> Result<(bool, String)> {
    let spec = AlgebroidSpec::reduced();
    let e = cx.engine(&spec, 16);
    let a = el(&spec, "[r]")?;
    let w = e.is_coboundary(&a.mul(&a)?)?;
    Ok(verdict(w.is_some(), "a^2 is a coboundary", "a^2 is not a coboundary"))
}

fn integral_annihilation(cx: &Context) -> Result<(bool, String)> {
    let spec = AlgebroidSpec::reduced();
    let t_max = cx.config.t(240);
    let e = cx.engine(&spec, t_max);
    let classes = [("a", "[r]".to_string()), ("b", B_REP.to_string()), ("ab", format!("[r]*({B_REP})"))];
    let mut checked = 0;
    for (name, text) in &classes {
        let x = el(&spec, text)?;
        if e.is_zero_class(&x)? {
            return Ok((false, format!("{name} vanishes")));
        }
        for m in ["5", "-2*a1^2 + 5*a2", "4*a1^3 - 15*a1*a2 + 25*a3"] {
            let y = el(&spec, m)?.mul(&x)?;
            if y.degree().is_some_and(|t| t > t_max) {
                continue;
            }
            if !e.bounds(&y)? {
                return Ok((false, format!("({m}) * {name} is not a coboundary")));
            }
            checked += 1;
        }
    }
    Ok((true, format!("5, c2, c3 kill a, b, ab ({checked} products)")))
}

fn integral_discriminant_injective(cx: &Context) -> Result<(bool, String)> {
    let (s_max, t_max) = (cx.config.s(4), cx.config.t(240));
    let spec = AlgebroidSpec::reduced();
    let e = cx.engine(&spec, t_max);
    let disc = CobarElement::from_poly(&spec, &invariants::restrict_to_reduced(&invariants::discriminant()?)?)?;
    let mut checked = 0;
    for s in 0..=s_max {
        for t in (0..=t_max.saturating_sub(160)).step_by(8) {
            for x in e.cohomology(s, t)?.representatives {
                let y = disc.mul(&x)?;
                let zero = if s == 0 { y.is_zero() } else { e.is_zero_class(&y)? };
                if zero {
                    return Ok((false, format!("Δ kills a class at ({s},{t})")));
                }
                checked += 1;
            }
        }
    }
    Ok((true, format!("{checked} basis classes survive multiplication by Δ")))
}

/// Integral chart on the columns touched by `arrows`, with the arrows attached.
pub fn overlay_chart(cx: &Context, arrows: &[report::Arrow]) -> Result<ChartSpec> {
    let s_max = arrows.iter().map(|a| a.to.0.max(a.from.0)).max().unwrap_or(0);
    let t_max = arrows.iter().map(|a| a.to.1.max(a.from.1)).max().unwrap_or(0);
    let e = cx.engine(&AlgebroidSpec::reduced(), t_max);
    let mut chart = ChartSpec::new(s_max, t_max);
    let mut cells: Vec<(usize, u32)> = arrows.iter().flat_map(|a| [a.from, a.to]).collect();
    cells.sort();
    cells.dedup();
    for (s, t) in cells {
        let (free, torsion) = e.smith_data(s, t)?;
        chart.add_dots(s, t, free, DotStyle::Box)?;
        chart.add_dots(s, t, torsion.len(), DotStyle::SolidDot)?;
    }
    chart.add_overlay(arrows)?;
    Ok(chart)
}

fn overlay_arrows(cx: &Context) -> Result<(bool, String)> {
    let arrows = report::parse_overlay(DEFAULT_OVERLAY)?;
    let chart = overlay_chart(cx, &arrows)?;
    let dangling = chart.dangling_arrows();
    Ok(verdict(
        dangling.is_empty(),
        format!("{} arrows land on nonzero cells", arrows.len()),
        format!("{} arrows touch empty cells", dangling.len()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_is_large_and_tags_are_unique() {
        let s = suite();
        assert!(s.len() >= 25);
        let mut tags: Vec<_> = s.iter().map(|c| c.tag).collect();
        tags.sort();
        tags.dedup();
        assert_eq!(tags.len(), s.len());
        for c in 1..=11 {
            assert!(s.iter().any(|x| x.criterion == c), "criterion {c}");
        }
    }

    #[test]
    fn presentation_matches_low_degrees() {
        let alg = mod_i1_presentation().unwrap();
        // a, a2, b and x1, a[a3^2] = 3 a2 x1
        assert_eq!(alg.dimension(1, 8), 1);
        assert_eq!(alg.dimension(0, 16), 1);
        assert_eq!(alg.dimension(1, 24), 0);
        assert_eq!(alg.dimension(2, 40), 1);
        assert_eq!(alg.dimension(1, 56), 1);
        // x1 [a3^2] survives the stated relations but not the completed ones
        assert_eq!(alg.dimension(1, 88), 1);
        assert_eq!(mod_i1_completed().unwrap().dimension(1, 88), 0);
    }

    #[test]
    fn quick_checks_pass() {
        let cx = Context::new(VerifyConfig { s_cap: Some(3), t_cap: Some(80), precision: DEFAULT_PRECISION });
        for c in suite().iter().filter(|c| [1, 3, 4].contains(&c.criterion)) {
            let r = c.run(&cx);
            assert!(r.passed, "{}: {}", r.tag, r.detail);
        }
    }
}
