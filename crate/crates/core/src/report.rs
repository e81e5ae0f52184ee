//! Charts of cohomology and spectral sequence pages: horizontal axis `t/8`,
//! vertical axis `s`. Rendered as SVG 1.1 and as an aligned text grid.
//!
//! Degrees stay in full units everywhere; division by 8 happens only when
//! drawing.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bockstein::PageEntry;
use crate::cobar::{CobarElement, CobarEngine, CohomologyGroup};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DotStyle {
    SolidDot,
    /// A polynomial generator.
    OpenCircle,
    CircledStar,
    /// A `Z_(5)` summand, or the discriminant.
    Box,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LineStyle {
    AMult,
    AkMult,
    Dashed,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Dot {
    pub s: usize,
    pub t: u32,
    pub multiplicity: usize,
    pub style: DotStyle,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Line {
    pub from: (usize, u32),
    pub to: (usize, u32),
    pub style: LineStyle,
}

/// A user-supplied differential, drawn as an annotation only.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Arrow {
    pub page: u32,
    pub from: (usize, u32),
    pub to: (usize, u32),
    pub label: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartSpec {
    pub s_max: usize,
    pub t_max: u32,
    pub dots: Vec<Dot>,
    pub lines: Vec<Line>,
    pub arrows: Vec<Arrow>,
}

impl ChartSpec {
    pub fn new(s_max: usize, t_max: u32) -> Self {
        ChartSpec { s_max, t_max, ..Default::default() }
    }

    pub fn contains(&self, s: usize, t: u32) -> bool {
        s <= self.s_max && t <= self.t_max && t.is_multiple_of(8)
    }

    /// Total multiplicity at `(s, t)`.
    pub fn multiplicity(&self, s: usize, t: u32) -> usize {
        self.dots.iter().filter(|d| d.s == s && d.t == t).map(|d| d.multiplicity).sum()
    }

    /// Add `m` classes at `(s, t)`, merging with an existing dot of the same style.
    pub fn add_dots(&mut self, s: usize, t: u32, m: usize, style: DotStyle) -> Result<()> {
        if !self.contains(s, t) {
            return Err(Error::DegreeMismatch(format!("({s},{t}) outside the chart window")));
        }
        if m == 0 {
            return Ok(());
        }
        match self.dots.iter_mut().find(|d| d.s == s && d.t == t && d.style == style) {
            Some(d) => d.multiplicity += m,
            None => self.dots.push(Dot { s, t, multiplicity: m, style }),
        }
        self.dots.sort();
        Ok(())
    }

    /// Restyle every dot at `(s, t)`.
    pub fn set_style(&mut self, s: usize, t: u32, style: DotStyle) {
        for d in self.dots.iter_mut().filter(|d| d.s == s && d.t == t) {
            d.style = style;
        }
        self.dots.sort();
    }

    pub fn add_line(&mut self, from: (usize, u32), to: (usize, u32), style: LineStyle) -> Result<()> {
        if !self.contains(from.0, from.1) || !self.contains(to.0, to.1) {
            return Err(Error::DegreeMismatch(format!("line {from:?} -> {to:?} outside the chart window")));
        }
        let line = Line { from, to, style };
        if !self.lines.contains(&line) {
            self.lines.push(line);
            self.lines.sort();
        }
        Ok(())
    }

    /// Attach overlay arrows; they must lie inside the window.
    pub fn add_overlay(&mut self, arrows: &[Arrow]) -> Result<()> {
        for a in arrows {
            if !self.contains(a.from.0, a.from.1) || !self.contains(a.to.0, a.to.1) {
                return Err(Error::DegreeMismatch(format!("overlay arrow {} outside the chart window", a.label)));
            }
            self.arrows.push(a.clone());
        }
        self.arrows.sort();
        Ok(())
    }

    /// Overlay arrows with an empty source or target cell.
    pub fn dangling_arrows(&self) -> Vec<&Arrow> {
        self.arrows
            .iter()
            .filter(|a| self.multiplicity(a.from.0, a.from.1) == 0 || self.multiplicity(a.to.0, a.to.1) == 0)
            .collect()
    }
}

/// Cocycles whose products with chart classes decide which lines are drawn.
pub struct MultiplicationProbe<'a> {
    pub engine: &'a CobarEngine,
    pub factors: Vec<(CobarElement, LineStyle)>,
}

/// One dot per basis class of each group; with a probe, a line from `(s,t)` to the
/// target bidegree whenever some representative times the factor is a nonzero class.
pub fn build_chart(
    s_max: usize,
    t_max: u32,
    groups: &[CohomologyGroup],
    probe: Option<&MultiplicationProbe>,
) -> Result<ChartSpec> {
    let mut chart = ChartSpec::new(s_max, t_max);
    for g in groups {
        if !chart.contains(g.s, g.t) {
            continue;
        }
        chart.add_dots(g.s, g.t, g.torsion.len(), DotStyle::SolidDot)?;
        let free_style = if probe.is_some_and(|p| p.engine.is_integral()) { DotStyle::Box } else { DotStyle::SolidDot };
        chart.add_dots(g.s, g.t, g.free_rank, free_style)?;
    }
    let Some(probe) = probe else { return Ok(chart) };
    for g in groups {
        for (factor, style) in &probe.factors {
            let ft = factor.degree().ok_or_else(|| Error::DegreeMismatch("inhomogeneous probe factor".into()))?;
            let fs = factor.s();
            let to = (g.s + fs, g.t + ft);
            if !chart.contains(to.0, to.1) || to.1 > probe.engine.t_max() {
                continue;
            }
            for x in &g.representatives {
                let y = x.mul(factor)?;
                if !probe.engine.is_zero_class(&y)? {
                    chart.add_line((g.s, g.t), to, *style)?;
                    break;
                }
            }
        }
    }
    Ok(chart)
}

/// Chart of a spectral sequence page: multiplicities summed over the filtration.
pub fn chart_from_entries(s_max: usize, t_max: u32, entries: &[PageEntry]) -> Result<ChartSpec> {
    let mut chart = ChartSpec::new(s_max, t_max);
    for e in entries {
        if chart.contains(e.s, e.t) {
            chart.add_dots(e.s, e.t, e.dim, DotStyle::SolidDot)?;
        }
    }
    Ok(chart)
}

/// Parse overlay lines `d <page> (<s>,<t>) -> (<s'>,<t'>) <label>`.
/// Blank lines and lines starting with `#` are ignored.
pub fn parse_overlay(text: &str) -> Result<Vec<Arrow>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |what: &str| Error::Parse(format!("overlay line {}: {what}", n + 1));
        let rest = line.strip_prefix('d').ok_or_else(|| bad("expected `d <page>`"))?.trim_start();
        let (page, rest) = rest.split_once(char::is_whitespace).ok_or_else(|| bad("missing page"))?;
        let page: u32 = page.parse().map_err(|_| bad("page is not a number"))?;
        let (from, rest) = parse_point(rest).ok_or_else(|| bad("bad source"))?;
        let rest = rest.trim_start().strip_prefix("->").ok_or_else(|| bad("expected `->`"))?;
        let (to, rest) = parse_point(rest).ok_or_else(|| bad("bad target"))?;
        if to.0 != from.0 + page as usize {
            return Err(bad("target filtration must be source plus page"));
        }
        if from.1 % 8 != 0 || to.1 % 8 != 0 {
            return Err(bad("degrees must be multiples of 8"));
        }
        out.push(Arrow { page, from, to, label: rest.trim().to_string() });
    }
    Ok(out)
}

fn parse_point(text: &str) -> Option<((usize, u32), &str)> {
    let text = text.trim_start().strip_prefix('(')?;
    let (inner, rest) = text.split_once(')')?;
    let (s, t) = inner.split_once(',')?;
    Some(((s.trim().parse().ok()?, t.trim().parse().ok()?), rest))
}

const CELL: u32 = 24;
const MARGIN: u32 = 32;

fn cell_centre(c: &ChartSpec, s: usize, t: u32) -> (u32, u32) {
    let x = MARGIN + (t / 8) * CELL + CELL / 2;
    let y = MARGIN + (c.s_max - s) as u32 * CELL + CELL / 2;
    (x, y)
}

/// SVG 1.1 document; element order follows the sorted chart data.
pub fn render_svg(c: &ChartSpec) -> String {
    let cols = c.t_max / 8 + 1;
    let rows = c.s_max as u32 + 1;
    let (w, h) = (2 * MARGIN + cols * CELL, 2 * MARGIN + rows * CELL);
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    out.push_str(
        r#"<defs><marker id="head" markerWidth="6" markerHeight="6" refX="5" refY="3" orient="auto"><path d="M0,0 L6,3 L0,6 z" fill="red"/></marker></defs>
"#,
    );
    let _ = writeln!(out, r##"<g id="grid" stroke="#ddd" stroke-width="0.5">"##);
    for i in 0..=cols {
        let x = MARGIN + i * CELL;
        let _ = writeln!(out, r#"<line x1="{x}" y1="{MARGIN}" x2="{x}" y2="{}"/>"#, MARGIN + rows * CELL);
    }
    for j in 0..=rows {
        let y = MARGIN + j * CELL;
        let _ = writeln!(out, r#"<line x1="{MARGIN}" y1="{y}" x2="{}" y2="{y}"/>"#, MARGIN + cols * CELL);
    }
    out.push_str("</g>\n");
    let _ = writeln!(out, r##"<g id="axes" font-family="monospace" font-size="8" fill="#444">"##);
    for i in (0..cols).step_by(5) {
        let (x, _) = cell_centre(c, 0, i * 8);
        let _ = writeln!(out, r#"<text x="{x}" y="{}" text-anchor="middle">{i}</text>"#, MARGIN + rows * CELL + 12);
    }
    for s in 0..rows {
        let (_, y) = cell_centre(c, s as usize, 0);
        let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="end">{s}</text>"#, MARGIN - 4, y + 3);
    }
    out.push_str("</g>\n");
    let _ = writeln!(out, r#"<g id="lines" stroke="black" stroke-width="1">"#);
    for l in &c.lines {
        let (x1, y1) = cell_centre(c, l.from.0, l.from.1);
        let (x2, y2) = cell_centre(c, l.to.0, l.to.1);
        let extra = match l.style {
            LineStyle::AMult => "",
            LineStyle::AkMult => r#" stroke="blue""#,
            LineStyle::Dashed => r#" stroke-dasharray="3,2""#,
        };
        let _ = writeln!(out, r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"{extra}/>"#);
    }
    out.push_str("</g>\n");
    let _ = writeln!(out, r#"<g id="dots">"#);
    for d in &c.dots {
        let (cx, cy) = cell_centre(c, d.s, d.t);
        let m = d.multiplicity.min(4) as i64;
        for k in 0..m {
            let x = cx as i64 + (2 * k - (m - 1)) * 4;
            out.push_str(&glyph(d.style, x, cy as i64));
        }
        if d.multiplicity > 4 {
            let _ = writeln!(out, r#"<text x="{}" y="{}" font-size="7">{}</text>"#, cx + 6, cy - 6, d.multiplicity);
        }
    }
    out.push_str("</g>\n");
    let _ = writeln!(out, r#"<g id="overlay" stroke="red" stroke-width="1" fill="red" font-family="monospace" font-size="8">"#);
    for a in &c.arrows {
        let (x1, y1) = cell_centre(c, a.from.0, a.from.1);
        let (x2, y2) = cell_centre(c, a.to.0, a.to.1);
        let _ = writeln!(out, r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" marker-end="url(#head)"/>"#);
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" stroke="none">d{} {}</text>"#,
            (x1 + x2) / 2 + 3,
            (y1 + y2) / 2,
            a.page,
            xml_escape(&a.label)
        );
    }
    out.push_str("</g>\n</svg>\n");
    out
}

fn glyph(style: DotStyle, x: i64, y: i64) -> String {
    match style {
        DotStyle::SolidDot => format!(r#"<circle cx="{x}" cy="{y}" r="2.5" fill="black"/>"#) + "\n",
        DotStyle::OpenCircle => format!(r#"<circle cx="{x}" cy="{y}" r="3" fill="white" stroke="black"/>"#) + "\n",
        DotStyle::CircledStar => format!(
            r#"<circle cx="{x}" cy="{y}" r="3.5" fill="white" stroke="black"/><text x="{x}" y="{}" font-size="6" text-anchor="middle">*</text>"#,
            y + 3
        ) + "\n",
        DotStyle::Box => format!(r#"<rect x="{}" y="{}" width="6" height="6" fill="white" stroke="black"/>"#, x - 3, y - 3) + "\n",
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Aligned text grid, top row `s = s_max`; each cell shows the multiplicity.
pub fn render_text(c: &ChartSpec) -> String {
    let mut cells: BTreeMap<(usize, u32), (usize, DotStyle)> = BTreeMap::new();
    for d in &c.dots {
        let e = cells.entry((d.s, d.t)).or_insert((0, d.style));
        e.0 += d.multiplicity;
    }
    let cols = (c.t_max / 8 + 1) as usize;
    let width = cells.values().map(|(m, _)| m.to_string().len() + 1).max().unwrap_or(1).max(3);
    let mut out = String::new();
    for s in (0..=c.s_max).rev() {
        let _ = write!(out, "{s:>3} |");
        for i in 0..cols {
            let cell = match cells.get(&(s, 8 * i as u32)) {
                Some(&(m, style)) => format!("{m}{}", marker(style)),
                None => ".".to_string(),
            };
            let _ = write!(out, "{cell:>width$}");
        }
        out.push('\n');
    }
    let _ = write!(out, "    +{}\n     ", "-".repeat(cols * width));
    for i in 0..cols {
        let label = if i % 5 == 0 { i.to_string() } else { String::new() };
        let _ = write!(out, "{label:>width$}");
    }
    out.push_str("\n     (horizontal: t/8, vertical: s)\n");
    for l in &c.lines {
        let _ = writeln!(out, "line {:?} ({},{}) -> ({},{})", l.style, l.from.0, l.from.1, l.to.0, l.to.1);
    }
    for a in &c.arrows {
        let _ = writeln!(out, "d{} ({},{}) -> ({},{}) {}", a.page, a.from.0, a.from.1, a.to.0, a.to.1, a.label);
    }
    out
}

fn marker(style: DotStyle) -> &'static str {
    match style {
        DotStyle::SolidDot => "",
        DotStyle::OpenCircle => "o",
        DotStyle::CircledStar => "*",
        DotStyle::Box => "#",
    }
}

/// Write `<stem>.svg` and the text fallback `<stem>.txt`.
pub fn emit(c: &ChartSpec, dir: &Path, stem: &str) -> Result<()> {
    let io = |e: std::io::Error| Error::IoFailure(e.to_string());
    std::fs::create_dir_all(dir).map_err(io)?;
    std::fs::write(dir.join(format!("{stem}.svg")), render_svg(c)).map_err(io)?;
    std::fs::write(dir.join(format!("{stem}.txt")), render_text(c)).map_err(io)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebroid::AlgebroidSpec;

    fn mod_i4_chart(t_max: u32) -> ChartSpec {
        let spec = AlgebroidSpec::full().quotient(4).unwrap();
        let engine = CobarEngine::new(&spec, t_max);
        let mut groups = Vec::new();
        for s in 0..=4 {
            for t in (0..=t_max).step_by(8) {
                groups.push(engine.cohomology(s, t).unwrap());
            }
        }
        let a = CobarElement::parse(&spec, "[r]").unwrap();
        let probe = MultiplicationProbe { engine: &engine, factors: vec![(a, LineStyle::AMult)] };
        build_chart(4, t_max, &groups, Some(&probe)).unwrap()
    }

    #[test]
    fn exterior_times_polynomial_chart() {
        let c = mod_i4_chart(80);
        let cells: Vec<(usize, u32, usize)> = c.dots.iter().map(|d| (d.s, d.t, d.multiplicity)).collect();
        assert_eq!(cells, vec![(0, 0, 1), (1, 8, 1), (2, 40, 1), (3, 48, 1), (4, 80, 1)]);
        let lines: Vec<_> = c.lines.iter().map(|l| (l.from, l.to)).collect();
        assert_eq!(lines, vec![((0, 0), (1, 8)), ((2, 40), (3, 48))]);
    }

    #[test]
    fn empty_and_single_dot() {
        let c = build_chart(3, 40, &[], None).unwrap();
        assert!(c.dots.is_empty() && c.lines.is_empty());
        let mut c = ChartSpec::new(2, 16);
        c.add_dots(0, 0, 1, DotStyle::SolidDot).unwrap();
        let svg = render_svg(&c);
        assert_eq!(svg.matches("<circle").count(), 1);
        let (x, y) = cell_centre(&c, 0, 0);
        assert!(svg.contains(&format!(r#"cx="{x}" cy="{y}""#)));
        assert!(c.add_dots(3, 0, 1, DotStyle::SolidDot).is_err());
        assert!(c.add_dots(0, 4, 1, DotStyle::SolidDot).is_err());
    }

    #[test]
    fn rendering_is_deterministic() {
        let a = mod_i4_chart(80);
        let b = mod_i4_chart(80);
        assert_eq!(render_svg(&a), render_svg(&b));
        assert_eq!(render_text(&a), render_text(&b));
    }

    #[test]
    fn overlay_parsing_and_rendering() {
        let arrows = parse_overlay("# comment\nd 9 (0,160) -> (9,168) Δ ↦ ab^4\n\n").unwrap();
        assert_eq!(arrows.len(), 1);
        assert_eq!(arrows[0].page, 9);
        assert_eq!(arrows[0].from, (0, 160));
        assert_eq!(arrows[0].to, (9, 168));
        assert!(parse_overlay("d 9 (0,160) -> (8,168) x").is_err());
        assert!(parse_overlay("d x (0,160) -> (9,168) x").is_err());
        let mut c = ChartSpec::new(10, 176);
        c.add_dots(0, 160, 1, DotStyle::Box).unwrap();
        c.add_dots(9, 168, 1, DotStyle::SolidDot).unwrap();
        c.add_overlay(&arrows).unwrap();
        assert!(c.dangling_arrows().is_empty());
        let svg = render_svg(&c);
        assert!(svg.contains("marker-end") && svg.contains("d9 Δ ↦ ab^4"));
    }

    #[test]
    fn page_entries_sum_over_filtration() {
        let entries = [
            PageEntry { s: 1, t: 8, u: 0, dim: 1 },
            PageEntry { s: 1, t: 8, u: 2, dim: 2 },
            PageEntry { s: 0, t: 0, u: 0, dim: 1 },
        ];
        let c = chart_from_entries(2, 16, &entries).unwrap();
        assert_eq!(c.multiplicity(1, 8), 3);
        assert_eq!(c.multiplicity(0, 0), 1);
    }
}
