//! Minimal deterministic SVG 1.1 charts: lines, bars and bubbles on a
//! linear or logarithmic primary axis with an optional secondary axis.

use std::fmt::Write as _;

use super::ReportError;
use crate::cluster::Dendrogram;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 720.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 440.0;
/// Fraction of the data range added on each side of the plot area.
pub const PADDING: f64 = 0.05;

const PALETTE: &[&str] = &[
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Axis {
    #[default]
    Primary,
    Secondary,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Mark {
    #[default]
    Line,
    Bars,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
    pub axis: Axis,
    pub mark: Mark,
}

/// A circle whose area is proportional to `size`.
#[derive(Debug, Clone, PartialEq)]
pub struct Bubble {
    pub x: f64,
    pub y: f64,
    pub size: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PlotSpec {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub y2_label: Option<String>,
    pub y_scale: Scale,
    pub series: Vec<Series>,
    pub bubbles: Vec<Bubble>,
    /// Dashed horizontal line at y = 0 on the primary axis.
    pub zero_line: bool,
}

/// Maps a padded data interval onto a pixel interval.
#[derive(Debug, Clone, Copy)]
struct Map {
    lo: f64,
    hi: f64,
    from: f64,
    to: f64,
}

impl Map {
    fn new((lo, hi): (f64, f64), from: f64, to: f64) -> Self {
        let span = if hi > lo {
            hi - lo
        } else if lo == 0.0 {
            1.0
        } else {
            lo.abs()
        };
        let (lo, hi) = if hi > lo { (lo, hi) } else { (lo - span / 2.0, hi + span / 2.0) };
        let span = hi - lo;
        Map {
            lo: lo - PADDING * span,
            hi: hi + PADDING * span,
            from,
            to,
        }
    }

    fn apply(&self, v: f64) -> f64 {
        self.from + (v - self.lo) / (self.hi - self.lo) * (self.to - self.from)
    }
}

fn bounds(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    values.fold(None, |acc, v| match acc {
        None => Some((v, v)),
        Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
    })
}

pub fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}

fn nice_step(span: f64) -> f64 {
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let factor = if norm < 1.5 {
        1.0
    } else if norm < 3.5 {
        2.0
    } else if norm < 7.5 {
        5.0
    } else {
        10.0
    };
    factor * mag
}

fn tick_label(v: f64, step: f64) -> String {
    let decimals = (-step.log10().floor()).max(0.0) as usize;
    let s = format!("{v:.decimals$}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        "0".to_string()
    } else {
        s
    }
}

fn linear_ticks(map: &Map) -> Vec<(f64, String)> {
    let step = nice_step(map.hi - map.lo);
    let first = (map.lo / step).ceil() as i64;
    let last = (map.hi / step).floor() as i64;
    (first..=last)
        .map(|i| {
            let v = i as f64 * step;
            (v, tick_label(v, step))
        })
        .collect()
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="28" text-anchor="middle" font-size="16">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
}

fn axes(out: &mut String, x_label: &str, y_label: &str) {
    let _ = writeln!(
        out,
        r#"<path class="axes" d="M{LEFT} {TOP} V{BOTTOM} H{RIGHT}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        (LEFT + RIGHT) / 2.0,
        HEIGHT - 20.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="20" y="{}" text-anchor="middle" transform="rotate(-90 20 {})">{}</text>"#,
        (TOP + BOTTOM) / 2.0,
        (TOP + BOTTOM) / 2.0,
        escape(y_label)
    );
}

fn x_ticks(out: &mut String, map: &Map) {
    for (v, label) in linear_ticks(map) {
        let x = map.apply(v);
        let _ = writeln!(
            out,
            r#"<line class="tick" x1="{x:.2}" y1="{BOTTOM}" x2="{x:.2}" y2="{}" stroke="black"/><text x="{x:.2}" y="{}" text-anchor="middle">{}</text>"#,
            BOTTOM + 5.0,
            BOTTOM + 18.0,
            escape(&label)
        );
    }
}

fn y_tick(out: &mut String, y: f64, label: &str, secondary: bool) {
    let (x, x2, tx, anchor) = if secondary {
        (RIGHT, RIGHT + 5.0, RIGHT + 8.0, "start")
    } else {
        (LEFT - 5.0, LEFT, LEFT - 8.0, "end")
    };
    let _ = writeln!(
        out,
        r#"<line class="tick" x1="{x}" y1="{y:.2}" x2="{x2}" y2="{y:.2}" stroke="black"/><text x="{tx}" y="{:.2}" text-anchor="{anchor}">{}</text>"#,
        y + 4.0,
        escape(label)
    );
}

fn polyline(points: &[(f64, f64)]) -> String {
    points
        .iter()
        .map(|(x, y)| format!("{x:.2},{y:.2}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Renders a chart. Fails on an empty plot, an empty series, non-finite
/// data, or a log axis without any positive value.
pub fn render_svg(spec: &PlotSpec) -> Result<String, ReportError> {
    if spec.series.is_empty() && spec.bubbles.is_empty() {
        return Err(ReportError::Plot("nothing to plot".into()));
    }
    if let Some(s) = spec.series.iter().find(|s| s.points.is_empty()) {
        return Err(ReportError::Plot(format!("series `{}` is empty", s.name)));
    }
    let all_points = spec
        .series
        .iter()
        .flat_map(|s| s.points.iter().copied())
        .chain(spec.bubbles.iter().map(|b| (b.x, b.y)));
    if all_points.clone().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(ReportError::Plot("non-finite value".into()));
    }

    let primary: Vec<&Series> = spec.series.iter().filter(|s| s.axis == Axis::Primary).collect();
    let secondary: Vec<&Series> = spec.series.iter().filter(|s| s.axis == Axis::Secondary).collect();
    let primary_y = primary
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.1))
        .chain(spec.bubbles.iter().map(|b| b.y));

    // Log axes draw non-positive values on a floor at half the smallest
    // positive value, labelled 0 and marked with an axis break.
    let floor = match spec.y_scale {
        Scale::Linear => None,
        Scale::Log => {
            let min_pos = primary_y
                .clone()
                .filter(|&v| v > 0.0)
                .fold(f64::INFINITY, f64::min);
            if !min_pos.is_finite() {
                return Err(ReportError::Plot("log scale needs a positive value".into()));
            }
            Some(min_pos / 2.0)
        }
    };
    let has_floor = floor.is_some() && primary_y.clone().any(|v| v <= 0.0);
    let ty = |v: f64| match floor {
        None => v,
        Some(f) => v.max(f).log10(),
    };

    let x_map = Map::new(bounds(all_points.map(|p| p.0)).unwrap(), LEFT, RIGHT);
    let needs_zero = spec.zero_line
        || primary.iter().any(|s| s.mark == Mark::Bars) && spec.y_scale == Scale::Linear;
    let mut y_bounds = bounds(primary_y.clone().map(ty)).unwrap_or((0.0, 1.0));
    if needs_zero {
        y_bounds = (y_bounds.0.min(0.0), y_bounds.1.max(0.0));
    }
    if has_floor {
        y_bounds.0 = y_bounds.0.min(floor.unwrap().log10());
    }
    let y_map = Map::new(y_bounds, BOTTOM, TOP);
    let y2_map = bounds(secondary.iter().flat_map(|s| s.points.iter().map(|p| p.1)))
        .map(|(lo, hi)| Map::new((lo.min(0.0), hi.max(0.0)), BOTTOM, TOP));

    let mut out = String::new();
    header(&mut out, &spec.title);
    axes(&mut out, &spec.x_label, &spec.y_label);
    x_ticks(&mut out, &x_map);
    match spec.y_scale {
        Scale::Linear => {
            for (v, label) in linear_ticks(&y_map) {
                y_tick(&mut out, y_map.apply(v), &label, false);
            }
        }
        Scale::Log => {
            let _ = writeln!(out, r#"<g class="y-scale-log">"#);
            let first = y_map.lo.ceil() as i64;
            let last = y_map.hi.floor() as i64;
            let minor: &[f64] = if last - first < 2 { &[2.0, 5.0] } else { &[] };
            let floor_y = floor.filter(|_| has_floor).map(|f| y_map.apply(f.log10()));
            let clear = |y: f64| floor_y.is_none_or(|fy| (y - fy).abs() >= 12.0);
            for k in (first - 1)..=last {
                if k >= first && clear(y_map.apply(k as f64)) {
                    y_tick(&mut out, y_map.apply(k as f64), &format!("1e{k}"), false);
                }
                for &m in minor {
                    let v = k as f64 + m.log10();
                    if v >= y_map.lo && v <= y_map.hi && clear(y_map.apply(v)) {
                        y_tick(&mut out, y_map.apply(v), &format!("{m}e{k}"), false);
                    }
                }
            }
            if has_floor {
                let y = y_map.apply(floor.unwrap().log10());
                y_tick(&mut out, y, "0", false);
                let b = y - 8.0;
                let _ = writeln!(
                    out,
                    r#"<path class="axis-break" d="M{} {:.2} l10 -4 l-10 -4" fill="none" stroke="black"/>"#,
                    LEFT - 5.0,
                    b
                );
            }
            let _ = writeln!(out, "</g>");
        }
    }
    if let Some(m) = &y2_map {
        let _ = writeln!(
            out,
            r#"<path class="axes axis-y2" d="M{RIGHT} {TOP} V{BOTTOM}" fill="none" stroke="black"/>"#
        );
        for (v, label) in linear_ticks(m) {
            y_tick(&mut out, m.apply(v), &label, true);
        }
        if let Some(label) = &spec.y2_label {
            let x = WIDTH - 15.0;
            let y = (TOP + BOTTOM) / 2.0;
            let _ = writeln!(
                out,
                r#"<text x="{x}" y="{y}" text-anchor="middle" transform="rotate(90 {x} {y})">{}</text>"#,
                escape(label)
            );
        }
    }
    if spec.zero_line && spec.y_scale == Scale::Linear {
        let y = y_map.apply(0.0);
        let _ = writeln!(
            out,
            r#"<line class="zero" x1="{LEFT}" y1="{y:.2}" x2="{RIGHT}" y2="{y:.2}" stroke="black" stroke-dasharray="6 4"/>"#
        );
    }

    for (i, s) in spec.series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let (map, tyf): (&Map, &dyn Fn(f64) -> f64) = match s.axis {
            Axis::Primary => (&y_map, &ty),
            Axis::Secondary => (y2_map.as_ref().unwrap(), &|v| v),
        };
        match s.mark {
            Mark::Line => {
                let pts: Vec<(f64, f64)> = s
                    .points
                    .iter()
                    .map(|&(x, y)| (x_map.apply(x), map.apply(tyf(y))))
                    .collect();
                let _ = writeln!(
                    out,
                    r#"<polyline class="series" data-name="{}" points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                    escape(&s.name),
                    polyline(&pts)
                );
            }
            Mark::Bars => {
                let mut xs: Vec<f64> = s.points.iter().map(|p| x_map.apply(p.0)).collect();
                xs.sort_by(f64::total_cmp);
                let gap = xs.windows(2).map(|w| w[1] - w[0]).filter(|g| *g > 0.0).fold(f64::INFINITY, f64::min);
                let width = if gap.is_finite() { (gap * 0.8).max(1.0) } else { 6.0 };
                let base = match (s.axis, floor) {
                    (Axis::Primary, Some(f)) => map.apply(f.log10()),
                    _ => map.apply(0.0),
                };
                let side = match s.axis {
                    Axis::Primary => "primary",
                    Axis::Secondary => "secondary",
                };
                let _ = writeln!(
                    out,
                    r#"<g class="bars {side}" data-name="{}" fill="{color}" fill-opacity="0.5">"#,
                    escape(&s.name)
                );
                for &(x, y) in &s.points {
                    let px = x_map.apply(x) - width / 2.0;
                    let py = map.apply(tyf(y));
                    let (top, h) = if py <= base { (py, base - py) } else { (base, py - base) };
                    let _ = writeln!(
                        out,
                        r#"<rect x="{px:.2}" y="{top:.2}" width="{width:.2}" height="{h:.2}"/>"#
                    );
                }
                let _ = writeln!(out, "</g>");
            }
        }
    }

    if !spec.bubbles.is_empty() {
        let max_size = spec.bubbles.iter().map(|b| b.size).fold(0.0, f64::max);
        let _ = writeln!(out, r##"<g class="bubbles" fill="#1f77b4" fill-opacity="0.4" stroke="#1f77b4">"##);
        for b in &spec.bubbles {
            let r = if max_size > 0.0 {
                20.0 * (b.size.max(0.0) / max_size).sqrt()
            } else {
                2.0
            };
            let _ = writeln!(
                out,
                r#"<circle cx="{:.2}" cy="{:.2}" r="{:.2}"/>"#,
                x_map.apply(b.x),
                y_map.apply(ty(b.y)),
                r.max(1.0)
            );
        }
        let _ = writeln!(out, "</g>");
    }

    let named: Vec<(usize, &Series)> = spec
        .series
        .iter()
        .enumerate()
        .filter(|(_, s)| !s.name.is_empty())
        .collect();
    if !named.is_empty() && named.len() <= 12 {
        for (row, (i, s)) in named.iter().enumerate() {
            let y = TOP + 10.0 + row as f64 * 16.0;
            let color = PALETTE[i % PALETTE.len()];
            let _ = writeln!(
                out,
                r#"<rect class="legend" x="{}" y="{}" width="10" height="10" fill="{color}"/><text x="{}" y="{}">{}</text>"#,
                LEFT + 10.0,
                y - 9.0,
                LEFT + 25.0,
                y,
                escape(&s.name)
            );
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Dendrogram with leaves in `leaf_order` along x and merge height on y.
pub fn render_dendrogram(d: &Dendrogram, labels: &[String], title: &str) -> Result<String, ReportError> {
    if d.merges.is_empty() || labels.len() != d.n_leaves {
        return Err(ReportError::Plot("dendrogram needs matching leaves and at least one merge".into()));
    }
    let n = d.n_leaves;
    let max_h = d.merges.iter().map(|m| m.height).fold(0.0, f64::max);
    let y_map = Map::new((0.0, max_h), BOTTOM, TOP);
    let step = (RIGHT - LEFT) / n as f64;
    let mut x = vec![0.0; 2 * n - 1];
    let mut y = vec![y_map.apply(0.0); 2 * n - 1];
    for (pos, &leaf) in d.leaf_order.iter().enumerate() {
        x[leaf] = LEFT + step * (pos as f64 + 0.5);
    }
    let mut out = String::new();
    header(&mut out, title);
    axes(&mut out, "series", "merge height");
    for (v, label) in linear_ticks(&y_map) {
        y_tick(&mut out, y_map.apply(v), &label, false);
    }
    let _ = writeln!(out, r#"<g class="links" fill="none" stroke="black">"#);
    for (t, m) in d.merges.iter().enumerate() {
        let node = n + t;
        let h = y_map.apply(m.height);
        let _ = writeln!(
            out,
            r#"<path d="M{:.2} {:.2} V{h:.2} H{:.2} V{:.2}"/>"#,
            x[m.a], y[m.a], x[m.b], y[m.b]
        );
        x[node] = (x[m.a] + x[m.b]) / 2.0;
        y[node] = h;
    }
    let _ = writeln!(out, "</g>");
    let font = (step * 0.8).clamp(4.0, 10.0);
    for &leaf in &d.leaf_order {
        let lx = x[leaf];
        let ly = BOTTOM + 8.0;
        let _ = writeln!(
            out,
            r#"<text x="{lx:.2}" y="{ly}" font-size="{font:.1}" text-anchor="end" transform="rotate(-90 {lx:.2} {ly})">{}</text>"#,
            escape(&labels[leaf])
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}
