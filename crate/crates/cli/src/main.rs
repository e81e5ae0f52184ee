use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context as _, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cobar_core::algebroid::{check_axioms, AlgebroidSpec};
use cobar_core::bockstein::{pages_json, Bockstein, FiltrationSpec, PageEntry};
use cobar_core::cobar::{CobarElement, CobarEngine, CohomologyGroup};
use cobar_core::invariants;
use cobar_core::report::{self, ChartSpec, LineStyle, MultiplicationProbe};
use cobar_core::verify::{self, VerifyConfig};

/// Version of every JSON document this tool writes.
const SCHEMA: &str = "cobar/1";

#[derive(Parser)]
#[command(name = "cobar", version, about = "Cobar-complex cohomology of the p = 5 curve Hopf algebroid")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Write `<command>.json` (and charts) here instead of printing JSON.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Largest cohomological degree.
    #[arg(long = "smax", global = true, default_value_t = 6)]
    s_max: usize,
    /// Largest internal degree.
    #[arg(long = "tmax", global = true, default_value_t = 400)]
    t_max: u32,
    /// Integral work is done modulo 5^K.
    #[arg(short = 'K', long = "precision", global = true, default_value_t = 4)]
    precision: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Check the Hopf algebroid identities for both presentations.
    Axioms,
    /// Run the identity suite. Caps are applied only when --smax/--tmax are given.
    Verify {
        /// Restrict to these criteria.
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<u8>,
        /// Apply --smax and --tmax as caps on every check.
        #[arg(long)]
        capped: bool,
    },
    /// Cohomology tables of the reduced presentation, mod I_k or integrally.
    Ext {
        /// Work mod I_k (k in 0..=4); integral when omitted.
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=4))]
        ideal: Option<u8>,
    },
    /// Ranks of H^0 and the degrees of new algebra generators.
    Invariants,
    /// Expand the generator table and check every row.
    GenTable {
        /// Use this table text instead of the built-in one.
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// The normalised discriminant and its reductions.
    Disc,
    /// Page dimensions of an a_k-adic (k >= 1) or 5-adic (k = 0) Bockstein spectral sequence.
    Bockstein {
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=4))]
        k: u8,
        /// Page number; omit for the E-infinity page.
        #[arg(long)]
        page: Option<u32>,
    },
    /// Draw a chart from the JSON of `ext` or `bockstein`.
    Chart {
        #[arg(long)]
        source: PathBuf,
        /// Differentials to annotate, one per line: `d <r> (<s>,<t>) -> (<s'>,<t'>) <label>`.
        #[arg(long)]
        overlay: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_values_t = [Format::Svg, Format::Text])]
        format: Vec<Format>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Debug)]
enum Format {
    Json,
    Svg,
    Text,
}

impl std::fmt::Display for Format {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Svg => "svg",
            Format::Text => "text",
        })
    }
}

/// A run either passes, or fails with a report.
struct Outcome {
    name: &'static str,
    doc: Value,
    passed: bool,
}

/// Errors in user-supplied input, reported with exit code 2.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(o) => match emit_json(&cli.common, o.name, &o.doc) {
            Ok(()) if o.passed => ExitCode::SUCCESS,
            Ok(()) => ExitCode::from(1),
            Err(e) => fail(e),
        },
        Err(e) => fail(e),
    }
}

fn fail(e: anyhow::Error) -> ExitCode {
    let code = if e.is::<UsageError>() { 2 } else { 1 };
    let report = json!({ "schema": SCHEMA, "error": format!("{e:#}") });
    println!("{}", serde_json::to_string_pretty(&report).expect("json"));
    ExitCode::from(code)
}

fn emit_json(c: &Common, name: &str, doc: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(doc)? + "\n";
    match &c.out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join(format!("{name}.json")), text)?;
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<Outcome> {
    let c = &cli.common;
    if c.s_max == 0 && !matches!(cli.command, Command::Invariants | Command::GenTable { .. } | Command::Disc) {
        return Err(usage("--smax must be positive"));
    }
    if c.t_max == 0 {
        return Err(usage("--tmax must be positive"));
    }
    match &cli.command {
        Command::Axioms => axioms(c),
        Command::Verify { criteria, capped } => verify(c, criteria, *capped),
        Command::Ext { ideal } => ext(c, *ideal),
        Command::Invariants => invariants_report(c),
        Command::GenTable { table } => gen_table(table.as_deref()),
        Command::Disc => disc(),
        Command::Bockstein { k, page } => bockstein(c, *k, *page),
        Command::Chart { source, overlay, format } => chart(c, source, overlay.as_deref(), format),
    }
}

fn axioms(c: &Common) -> Result<Outcome> {
    let mut reports = Vec::new();
    let mut passed = true;
    for spec in [AlgebroidSpec::full(), AlgebroidSpec::reduced()] {
        match check_axioms(&spec, c.t_max) {
            Ok(r) => reports.push(json!({ "spec": spec.label(), "passed": true, "report": r })),
            Err(e) => {
                passed = false;
                reports.push(json!({ "spec": spec.label(), "passed": false, "error": e.to_string() }));
            }
        }
    }
    Ok(Outcome { name: "axioms", doc: json!({ "schema": SCHEMA, "t_max": c.t_max, "results": reports }), passed })
}

fn verify(c: &Common, criteria: &[u8], capped: bool) -> Result<Outcome> {
    let config = VerifyConfig {
        s_cap: capped.then_some(c.s_max),
        t_cap: capped.then_some(c.t_max),
        precision: c.precision,
    };
    let cx = verify::Context::new(config);
    let results = verify::run(&cx, criteria);
    let first_failure = results.iter().find(|r| !r.passed).map(|r| r.tag.clone());
    let passed = first_failure.is_none();
    let doc = json!({
        "schema": SCHEMA,
        "checks": results.len(),
        "passed": results.iter().filter(|r| r.passed).count(),
        "first_failure": first_failure,
        "results": results,
    });
    Ok(Outcome { name: "verify", doc, passed })
}

fn ext_spec(ideal: Option<u8>) -> Result<Arc<AlgebroidSpec>> {
    let r = AlgebroidSpec::reduced();
    Ok(match ideal {
        Some(k) => r.quotient(k as usize)?,
        None => r,
    })
}

fn groups(c: &Common, e: &CobarEngine) -> Result<Vec<CohomologyGroup>> {
    let mut out = Vec::new();
    for s in 0..=c.s_max {
        for t in (0..=c.t_max).step_by(8) {
            out.push(e.cohomology(s, t)?);
        }
    }
    Ok(out)
}

fn ext(c: &Common, ideal: Option<u8>) -> Result<Outcome> {
    let spec = ext_spec(ideal)?;
    let e = CobarEngine::with_precision(&spec, c.t_max, c.precision);
    let cells: Vec<Value> = groups(c, &e)?
        .iter()
        .filter(|g| g.rank() > 0)
        .map(|g| g.to_json())
        .collect();
    let doc = json!({
        "schema": SCHEMA,
        "kind": "ext",
        "spec": spec.label(),
        "ideal": ideal,
        "precision": if e.is_integral() { Some(c.precision) } else { None },
        "s_max": c.s_max,
        "t_max": c.t_max,
        "groups": cells,
    });
    Ok(Outcome { name: "ext", doc, passed: true })
}

fn invariants_report(c: &Common) -> Result<Outcome> {
    let ranks = invariants::hilbert_h0(c.t_max)?;
    let census = invariants::new_generators(c.t_max)?;
    let mut consistent = true;
    let ranks: Vec<Value> = ranks
        .iter()
        .map(|&(t, rank)| {
            let rational = invariants::partitions_into(t as usize / 8, &[2, 3, 4, 5]);
            consistent &= rank == rational;
            json!({ "t": t, "rank": rank, "rational_rank": rational })
        })
        .collect();
    let stated = verify::stated_generator_degrees();
    let census: Vec<Value> = census
        .iter()
        .filter(|d| d.new_generators > 0 || stated.contains_key(&d.t))
        .map(|d| {
            json!({
                "t": d.t,
                "rank": d.rank,
                "decomposable_rank": d.decomposable_rank,
                "new_generators": d.new_generators,
                "listed_generators": stated.get(&d.t).copied().unwrap_or(0),
            })
        })
        .collect();
    let doc = json!({ "schema": SCHEMA, "t_max": c.t_max, "ranks": ranks, "generators": census });
    Ok(Outcome { name: "invariants", doc, passed: consistent })
}

fn gen_table(path: Option<&Path>) -> Result<Outcome> {
    let rows = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            invariants::parse_table(&text).map_err(|e| usage(e.to_string()))?
        }
        None => invariants::generator_table(),
    };
    let mut records = vec![invariants::c_class(2)?.0, invariants::c_class(3)?.0];
    let mut rows_json = Vec::new();
    let mut first_failure = None;
    for row in invariants::expand_table(&rows)? {
        let name = invariants::display_name(&row.name);
        match row.outcome {
            Ok(rec) => {
                rows_json.push(json!({ "name": name, "passed": true }));
                records.push(rec);
            }
            Err(e) => {
                first_failure.get_or_insert_with(|| format!("generator table / {name}"));
                rows_json.push(json!({ "name": name, "passed": false, "error": e.to_string() }));
            }
        }
    }
    let passed = first_failure.is_none();
    let doc = json!({
        "schema": SCHEMA,
        "rows": rows_json,
        "first_failure": first_failure,
        "records": invariants::records_json(&records),
    });
    Ok(Outcome { name: "gen-table", doc, passed })
}

fn disc() -> Result<Outcome> {
    let d = invariants::discriminant()?;
    let cx = verify::Context::new(VerifyConfig::default());
    let checks: Vec<_> = verify::suite()
        .iter()
        .filter(|c| c.tag.starts_with("discriminant/"))
        .map(|c| c.run(&cx))
        .collect();
    let passed = checks.iter().all(|r| r.passed);
    let doc = json!({
        "schema": SCHEMA,
        "degree": d.homogeneous_degree(),
        "terms": d.terms().count(),
        "discriminant": d.to_string(),
        "mod_I3": invariants::reduce_mod_ideal(&d, 3)?.to_string(),
        "checks": checks,
    });
    Ok(Outcome { name: "disc", doc, passed })
}

fn filtration(k: u8) -> Result<FiltrationSpec> {
    Ok(match k {
        0 => FiltrationSpec::five_adic(&AlgebroidSpec::reduced())?,
        k => FiltrationSpec::adding(k as usize)?,
    })
}

fn bockstein(c: &Common, k: u8, page: Option<u32>) -> Result<Outcome> {
    if page == Some(0) {
        return Err(usage("pages start at 1"));
    }
    let f = filtration(k)?;
    let bs = Bockstein::with_precision(f.clone(), c.t_max, c.precision);
    let entries: Vec<PageEntry> = bs.page_dimensions(page, c.s_max, c.t_max)?.into_iter().filter(|e| e.dim > 0).collect();
    let mut doc = pages_json(&f, page, &entries);
    let obj = doc.as_object_mut().expect("object");
    obj.insert("schema".into(), json!(SCHEMA));
    obj.insert("kind".into(), json!("bockstein"));
    obj.insert("k".into(), json!(k));
    obj.insert("s_max".into(), json!(c.s_max));
    obj.insert("t_max".into(), json!(c.t_max));
    Ok(Outcome { name: "bockstein", doc, passed: true })
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| usage(format!("source has no \"{key}\" field")))
}

fn as_u64(v: &Value, key: &str) -> Result<u64> {
    field(v, key)?.as_u64().ok_or_else(|| usage(format!("\"{key}\" is not a count")))
}

/// `ext` sources are recomputed so that a-multiplications can be drawn; the
/// recomputed dimensions must agree with the file.
fn chart_from_ext(c: &Common, src: &Value, s_max: usize, t_max: u32) -> Result<ChartSpec> {
    let ideal = match field(src, "ideal")? {
        Value::Null => None,
        v => Some(v.as_u64().filter(|&k| k <= 4).ok_or_else(|| usage("bad \"ideal\""))? as u8),
    };
    let precision = src.get("precision").and_then(Value::as_u64).map_or(c.precision, |k| k as u32);
    let spec = ext_spec(ideal)?;
    let e = CobarEngine::with_precision(&spec, t_max, precision);
    let sub = Common { s_max, t_max, ..c.clone() };
    let gs = groups(&sub, &e)?;
    let listed = field(src, "groups")?.as_array().ok_or_else(|| usage("\"groups\" is not a list"))?;
    for g in listed {
        let (s, t) = (as_u64(g, "s")? as usize, as_u64(g, "t")? as u32);
        let free = as_u64(g, "free_rank")? as usize;
        let torsion = field(g, "torsion")?.as_array().map_or(0, Vec::len);
        let ours = gs.iter().find(|x| x.s == s && x.t == t).ok_or_else(|| usage(format!("({s},{t}) outside the window")))?;
        if ours.free_rank != free || ours.torsion.len() != torsion {
            bail!("source disagrees with recomputation at ({s},{t})");
        }
    }
    let a = CobarElement::parse(&spec, "[r]")?;
    let probe = MultiplicationProbe { engine: &e, factors: vec![(a, LineStyle::AMult)] };
    Ok(report::build_chart(s_max, t_max, &gs, Some(&probe))?)
}

fn chart_from_pages(src: &Value, s_max: usize, t_max: u32) -> Result<ChartSpec> {
    let entries: Vec<PageEntry> = field(src, "entries")?
        .as_array()
        .ok_or_else(|| usage("\"entries\" is not a list"))?
        .iter()
        .map(|e| {
            Ok(PageEntry {
                s: as_u64(e, "s")? as usize,
                t: as_u64(e, "t")? as u32,
                u: as_u64(e, "u")? as u32,
                dim: as_u64(e, "dim")? as usize,
            })
        })
        .collect::<Result<_>>()?;
    Ok(report::chart_from_entries(s_max, t_max, &entries)?)
}

fn chart(c: &Common, source: &Path, overlay: Option<&Path>, formats: &[Format]) -> Result<Outcome> {
    let src = read_json(source)?;
    let s_max = as_u64(&src, "s_max")? as usize;
    let t_max = as_u64(&src, "t_max")? as u32;
    let mut chart = match field(&src, "kind")?.as_str() {
        Some("ext") => chart_from_ext(c, &src, s_max, t_max)?,
        Some("bockstein") => chart_from_pages(&src, s_max, t_max)?,
        _ => return Err(usage("source must come from `ext` or `bockstein`")),
    };
    if let Some(p) = overlay {
        let text = std::fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
        let arrows = report::parse_overlay(&text).map_err(|e| usage(e.to_string()))?;
        chart.add_overlay(&arrows).map_err(|e| usage(e.to_string()))?;
    }
    let dangling: Vec<String> = chart.dangling_arrows().iter().map(|a| a.label.clone()).collect();
    let dir = c.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let stem = source.file_stem().and_then(|s| s.to_str()).unwrap_or("chart").to_string();
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut written = Vec::new();
    for f in formats {
        let (ext, body) = match f {
            Format::Svg => ("svg", report::render_svg(&chart)),
            Format::Text => ("txt", report::render_text(&chart)),
            Format::Json => ("chart.json", serde_json::to_string_pretty(&chart)? + "\n"),
        };
        let path = dir.join(format!("{stem}.{ext}"));
        std::fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
        written.push(path.file_name().and_then(|n| n.to_str()).ok_or_else(|| anyhow!("file name"))?.to_string());
    }
    let doc = json!({
        "schema": SCHEMA,
        "dots": chart.dots.len(),
        "lines": chart.lines.len(),
        "arrows": chart.arrows.len(),
        "dangling_arrows": dangling,
        "files": written,
    });
    Ok(Outcome { name: "chart", doc, passed: dangling.is_empty() })
}
