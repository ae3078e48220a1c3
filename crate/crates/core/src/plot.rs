//! Minimal SVG scatter/line plots of sweep records.
//!
//! x is the weight-range midpoint, y the distance. Every record becomes one
//! `<circle>` marker; a polyline joins the per-range means of each method.
//! Output is a pure function of the input records.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::experiment::{SweepRecord, Which};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

fn span(lo: f64, hi: f64) -> (f64, f64) {
    if hi > lo {
        (lo, hi)
    } else {
        let pad = if lo == 0.0 { 1.0 } else { lo.abs() * 0.1 };
        (lo - pad, hi + pad)
    }
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn render_svg(records: &[SweepRecord], metric: Which) -> Result<String> {
    if records.is_empty() {
        return Err(Error::InvalidParams("cannot plot zero records".into()));
    }
    let x_of = |r: &SweepRecord| 0.5 * (r.w_low + r.w_high);
    let xs: Vec<f64> = records.iter().map(x_of).collect();
    let ys: Vec<f64> = records.iter().map(|r| metric.of(r)).collect();
    if ys.iter().chain(&xs).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("plot coordinate"));
    }
    let (x0, x1) = span(
        xs.iter().copied().fold(f64::INFINITY, f64::min),
        xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    );
    let (y0, y1) = span(0.0_f64.min(ys.iter().copied().fold(f64::INFINITY, f64::min)), ys.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let px = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let py = |y: f64| TOP + ph - (y - y0) / (y1 - y0) * ph;

    let mut methods: Vec<&str> = records.iter().map(|r| r.method.as_str()).collect();
    methods.sort_unstable();
    methods.dedup();

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    // Axes
    let _ = writeln!(
        s,
        r#"<line x1="{LEFT}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black"/>"#,
        TOP + ph,
        LEFT + pw,
        TOP + ph
    );
    let _ = writeln!(s, r#"<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{:.2}" stroke="black"/>"#, TOP + ph);
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let xv = x0 + f * (x1 - x0);
        let yv = y0 + f * (y1 - y0);
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            px(xv),
            TOP + ph + 18.0,
            tick(xv)
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            py(yv) + 4.0,
            tick(yv)
        );
    }
    let _ = writeln!(
        s,
        r#"<text class="xlabel" x="{:.2}" y="{:.2}" text-anchor="middle">weight (range midpoint)</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        s,
        r#"<text class="ylabel" x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">{} distance</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        metric.name().to_uppercase()
    );

    for (mi, method) in methods.iter().enumerate() {
        let color = PALETTE[mi % PALETTE.len()];
        let mine: Vec<&SweepRecord> = records.iter().filter(|r| r.method == *method).collect();
        // Per-x means, joined left to right.
        let mut xs_m: Vec<f64> = mine.iter().map(|r| x_of(r)).collect();
        xs_m.sort_by(f64::total_cmp);
        xs_m.dedup();
        if xs_m.len() > 1 {
            let pts: Vec<String> = xs_m
                .iter()
                .map(|&x| {
                    let vals: Vec<f64> =
                        mine.iter().filter(|r| x_of(r) == x).map(|r| metric.of(r)).collect();
                    let mean = vals.iter().sum::<f64>() / vals.len() as f64;
                    format!("{:.2},{:.2}", px(x), py(mean))
                })
                .collect();
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{color}" points="{}"/>"#,
                pts.join(" ")
            );
        }
        let _ = writeln!(s, r#"<g class="series" data-method="{}" fill="{color}">"#, esc(method));
        for r in &mine {
            let _ = writeln!(
                s,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3"/>"#,
                px(x_of(r)),
                py(metric.of(r))
            );
        }
        let _ = writeln!(s, "</g>");
        let ly = TOP + 10.0 + 18.0 * mi as f64;
        let _ = writeln!(
            s,
            r#"<rect x="{:.2}" y="{:.2}" width="10" height="10" fill="{color}"/><text x="{:.2}" y="{:.2}">{}</text>"#,
            LEFT + pw + 15.0,
            ly - 9.0,
            LEFT + pw + 30.0,
            ly,
            esc(method)
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn tick(v: f64) -> String {
    crate::experiment::format_sig6((v * 1000.0).round() / 1000.0)
}

pub fn emit_plot(records: &[SweepRecord], metric: Which, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let svg = render_svg(records, metric)?;
    std::fs::write(path, svg).map_err(|e| Error::io(path, e))
}
