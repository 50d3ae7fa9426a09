//! ASCII and SVG pictures of morphisms.
//!
//! Time flows downwards. Each layer is one row holding one box; the
//! boundaries in between are rows of wires. With the runtime shown, the
//! leftmost track is the runtime, drawn with `:` in ASCII and with the class
//! `runtime` in SVG, and it runs into every effectful box.

use std::fmt::Write;

use crate::diagram::{Diagram, DiagramError};
use crate::polygraph::{GenKind, ObjId, Polygraph, PolygraphCouple};
use crate::runtime::{EffMorphism, RuntimeError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Ascii,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderSpec {
    pub format: Format,
    pub show_runtime: bool,
    /// Print object names above and below the picture.
    pub labels: bool,
}

impl RenderSpec {
    pub fn ascii() -> Self {
        RenderSpec { format: Format::Ascii, show_runtime: true, labels: true }
    }

    pub fn svg() -> Self {
        RenderSpec { format: Format::Svg, show_runtime: true, labels: true }
    }
}

#[derive(Debug, Clone)]
struct Track {
    label: String,
    runtime: bool,
}

#[derive(Debug, Clone)]
struct Step {
    name: String,
    offset: usize,
    n_in: usize,
    n_out: usize,
    /// Threads the runtime lane.
    effectful: bool,
    braid: bool,
}

impl Step {
    fn width(&self) -> usize {
        self.n_in.max(self.n_out).max(1)
    }
}

struct Layout {
    rows: Vec<Vec<Track>>,
    steps: Vec<Step>,
}

fn tracks(objs: &[ObjId], lane: bool) -> Vec<Track> {
    let mut out = Vec::with_capacity(objs.len() + 1);
    if lane {
        out.push(Track { label: ObjId::runtime().to_string(), runtime: true });
    }
    out.extend(objs.iter().map(|o| Track { label: o.to_string(), runtime: o.is_runtime() }));
    out
}

fn eff_layout(c: &PolygraphCouple, e: &EffMorphism, lane: bool) -> Result<Layout, RuntimeError> {
    let bounds = e.boundaries(c)?;
    let shift = usize::from(lane);
    let steps = e
        .layers
        .iter()
        .map(|l| {
            let g = c.gen(l.gen()).expect("checked by boundaries");
            Step {
                name: g.name.clone(),
                offset: l.position() + shift,
                n_in: g.inputs.len(),
                n_out: g.outputs.len(),
                effectful: lane && l.is_effectful(),
                braid: false,
            }
        })
        .collect();
    Ok(Layout { rows: bounds.iter().map(|b| tracks(b, lane)).collect(), steps })
}

fn diagram_layout(sig: &Polygraph, d: &Diagram) -> Result<Layout, DiagramError> {
    let bounds = d.boundaries(sig)?;
    let steps = d
        .slices
        .iter()
        .map(|s| {
            let g = sig.gen(&s.gen).expect("checked by boundaries");
            Step {
                name: g.name.clone(),
                offset: s.offset,
                n_in: g.inputs.len(),
                n_out: g.outputs.len(),
                effectful: false,
                braid: g.kind == GenKind::Braid,
            }
        })
        .collect();
    Ok(Layout { rows: bounds.iter().map(|b| tracks(b, false)).collect(), steps })
}

pub fn render_eff(c: &PolygraphCouple, e: &EffMorphism, spec: RenderSpec) -> Result<String, RuntimeError> {
    Ok(draw(&eff_layout(c, e, spec.show_runtime)?, spec))
}

pub fn render_diagram(sig: &Polygraph, d: &Diagram, spec: RenderSpec) -> Result<String, DiagramError> {
    Ok(draw(&diagram_layout(sig, d)?, spec))
}

fn draw(l: &Layout, spec: RenderSpec) -> String {
    match spec.format {
        Format::Ascii => ascii(l, spec.labels),
        Format::Svg => svg(l, spec.labels),
    }
}

fn ascii(l: &Layout, labels: bool) -> String {
    let col = l.rows.iter().flatten().map(|t| t.label.chars().count() + 1).max().unwrap_or(0).max(4);
    let glyph = |t: &Track| if t.runtime { ':' } else { '|' };
    let cell = |ch: char, fill: char| {
        let mut s = String::from(ch);
        s.extend(std::iter::repeat_n(fill, col - 1));
        s
    };
    let wires = |row: &[Track]| row.iter().map(|t| cell(glyph(t), ' ')).collect::<String>();
    let names = |row: &[Track]| row.iter().map(|t| format!("{:<col$}", t.label)).collect::<String>();
    let mut lines: Vec<String> = Vec::new();
    if labels {
        lines.push(names(&l.rows[0]));
    }
    lines.push(wires(&l.rows[0]));
    for (k, s) in l.steps.iter().enumerate() {
        let row = &l.rows[k];
        let mut line = String::new();
        for (i, t) in row[..s.offset].iter().enumerate() {
            let fill = if s.effectful { '=' } else { ' ' };
            line.push_str(&cell(if s.effectful && i > 0 { '|' } else { glyph(t) }, fill));
        }
        let width = s.width() * col - 1;
        let body = if s.braid {
            format!("{:^width$}", "X")
        } else {
            let inner = width.saturating_sub(2).max(s.name.chars().count());
            format!("[{:^inner$}]", s.name)
        };
        line.push_str(&body);
        line.push(' ');
        for t in &row[(s.offset + s.n_in).min(row.len())..] {
            line.push_str(&cell(glyph(t), ' '));
        }
        lines.push(line);
        lines.push(wires(&l.rows[k + 1]));
    }
    if labels {
        lines.push(names(l.rows.last().expect("at least one row")));
    }
    let mut out: String = lines.iter().map(|x| x.trim_end()).collect::<Vec<_>>().join("\n");
    out.push('\n');
    out
}

const COL: usize = 60;
const ROW: usize = 80;
const PAD: usize = 40;

fn x_of(i: usize) -> usize {
    PAD + i * COL
}

fn y_of(k: usize) -> usize {
    PAD + k * ROW
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn path(out: &mut String, class: &str, points: &[(usize, usize)]) {
    let mut d = String::new();
    for (i, (x, y)) in points.iter().enumerate() {
        let _ = write!(d, "{}{x} {y}", if i == 0 { "M" } else { " L" });
    }
    let _ = writeln!(out, r#"  <path class="{class}" d="{d}"/>"#);
}

fn wire_class(t: &Track) -> &'static str {
    if t.runtime {
        "wire runtime"
    } else {
        "wire"
    }
}

fn svg(l: &Layout, labels: bool) -> String {
    let n = l.steps.len();
    let widest = l
        .rows
        .iter()
        .map(Vec::len)
        .chain(l.steps.iter().map(|s| s.offset + s.width()))
        .max()
        .unwrap_or(0)
        .max(1);
    let width = 2 * PAD + (widest - 1) * COL;
    let height = 2 * PAD + n.max(1) * ROW - if n == 0 { ROW / 2 } else { 0 };
    let mut body = String::new();
    let last_y = if n == 0 { PAD + ROW / 2 } else { y_of(n) };
    for (k, s) in l.steps.iter().enumerate() {
        let (row, next) = (&l.rows[k], &l.rows[k + 1]);
        let (y0, y1) = (y_of(k), y_of(k + 1));
        let (top, bottom) = (y0 + 25, y1 - 25);
        let left = x_of(s.offset) - 20;
        let right = x_of(s.offset + s.width() - 1) + 20;
        for (i, t) in row.iter().enumerate() {
            if s.effectful && i == 0 {
                path(&mut body, wire_class(t), &[(x_of(0), y0), (left, (top + bottom) / 2), (x_of(0), y1)]);
            } else if i < s.offset {
                path(&mut body, wire_class(t), &[(x_of(i), y0), (x_of(i), y1)]);
            } else if i < s.offset + s.n_in {
                if s.braid {
                    let j = 2 * s.offset + 1 - i;
                    path(&mut body, wire_class(t), &[(x_of(i), y0), (x_of(i), top), (x_of(j), bottom), (x_of(j), y1)]);
                } else {
                    path(&mut body, wire_class(t), &[(x_of(i), y0), (x_of(i), top)]);
                }
            } else {
                let j = i - s.n_in + s.n_out;
                path(&mut body, wire_class(t), &[(x_of(i), y0), (x_of(i), top), (x_of(j), bottom), (x_of(j), y1)]);
            }
        }
        if s.braid {
            continue;
        }
        for (j, t) in next.iter().enumerate().skip(s.offset).take(s.n_out) {
            path(&mut body, wire_class(t), &[(x_of(j), bottom), (x_of(j), y1)]);
        }
        let class = if s.effectful { "box effect" } else { "box" };
        let _ = writeln!(
            body,
            r#"  <rect class="{class}" x="{left}" y="{top}" width="{}" height="{}"/>"#,
            right - left,
            bottom - top
        );
        let _ = writeln!(
            body,
            r#"  <text class="name" x="{}" y="{}">{}</text>"#,
            (left + right) / 2,
            (top + bottom) / 2 + 5,
            escape(&s.name)
        );
    }
    if n == 0 {
        for (i, t) in l.rows[0].iter().enumerate() {
            path(&mut body, wire_class(t), &[(x_of(i), PAD), (x_of(i), last_y)]);
        }
    }
    if labels {
        for (i, t) in l.rows[0].iter().enumerate() {
            let _ = writeln!(body, r#"  <text class="label" x="{}" y="{}">{}</text>"#, x_of(i), PAD - 12, escape(&t.label));
        }
        for (i, t) in l.rows[l.rows.len() - 1].iter().enumerate() {
            let _ = writeln!(body, r#"  <text class="label" x="{}" y="{}">{}</text>"#, x_of(i), last_y + 22, escape(&t.label));
        }
    }
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    out.push_str(concat!(
        "  <style>\n",
        "    .wire { fill: none; stroke: #000; stroke-width: 2; }\n",
        "    .runtime { stroke: #c0392b; stroke-dasharray: 6 4; }\n",
        "    .box { fill: #fff; stroke: #000; stroke-width: 2; }\n",
        "    .effect { fill: #fdecea; }\n",
        "    text { font-family: monospace; font-size: 14px; text-anchor: middle; }\n",
        "  </style>\n",
    ));
    out.push_str(&body);
    out.push_str("</svg>\n");
    out
}
