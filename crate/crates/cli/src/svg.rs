//! Static line chart of ΔI against D, one polyline per concurrence.

use std::fmt::Write as _;

use sixstate_core::keyregion::{SweepRow, BRUSS_THRESHOLD};

use crate::error::CliError;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 520.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const TICKS: usize = 5;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Axes {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
}

impl Default for Axes {
    fn default() -> Self {
        Self {
            title: "Secret key region".into(),
            x_label: "D".into(),
            y_label: "ΔI (bits)".into(),
        }
    }
}

/// `[lo, hi]` widened to a nonzero span.
fn span(lo: f64, hi: f64) -> (f64, f64) {
    if hi - lo > 1e-12 {
        (lo, hi)
    } else {
        let pad = if lo.abs() > 1e-12 {
            lo.abs() * 0.1
        } else {
            0.5
        };
        (lo - pad, hi + pad)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Groups consecutive rows with equal `c`.
fn series(rows: &[SweepRow]) -> Vec<&[SweepRow]> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=rows.len() {
        if i == rows.len() || rows[i].c != rows[start].c {
            out.push(&rows[start..i]);
            start = i;
        }
    }
    out
}

pub fn emit_svg(rows: &[SweepRow], axes: &Axes) -> Result<String, CliError> {
    if rows.is_empty() {
        return Err(CliError::Usage("cannot plot an empty dataset".into()));
    }
    let fold = |f: fn(&SweepRow) -> f64| {
        rows.iter()
            .map(f)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(v), hi.max(v))
            })
    };
    let (x0, x1) = fold(|r| r.d);
    let (y0, y1) = fold(|r| r.delta);
    let (x0, x1) = span(x0, x1);
    let (y0, y1) = span(y0.min(0.0), y1.max(0.0));

    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let px = |x: f64| LEFT + (x - x0) / (x1 - x0) * plot_w;
    let py = |y: f64| TOP + (y1 - y) / (y1 - y0) * plot_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="15">{}</text>"#,
        LEFT + plot_w / 2.0,
        TOP / 2.0 + 5.0,
        escape(&axes.title)
    );

    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    for i in 0..=TICKS {
        let t = i as f64 / TICKS as f64;
        let x = x0 + t * (x1 - x0);
        let y = y0 + t * (y1 - y0);
        let _ = writeln!(
            s,
            r#"<line x1="{0:.2}" y1="{1:.2}" x2="{0:.2}" y2="{2:.2}" stroke="black"/><text x="{0:.2}" y="{3:.2}" text-anchor="middle">{4:.3}</text>"#,
            px(x),
            TOP + plot_h,
            TOP + plot_h + 5.0,
            TOP + plot_h + 20.0,
            x
        );
        let _ = writeln!(
            s,
            r#"<line x1="{0:.2}" y1="{1:.2}" x2="{2:.2}" y2="{1:.2}" stroke="black"/><text x="{3:.2}" y="{4:.2}" text-anchor="end">{5:.3}</text>"#,
            LEFT - 5.0,
            py(y),
            LEFT,
            LEFT - 8.0,
            py(y) + 4.0,
            y
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 15.0,
        escape(&axes.x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="20" y="{0:.2}" text-anchor="middle" transform="rotate(-90 20 {0:.2})">{1}</text>"#,
        TOP + plot_h / 2.0,
        escape(&axes.y_label)
    );

    let _ = writeln!(
        s,
        r#"<line class="zero" x1="{LEFT}" y1="{0:.2}" x2="{1:.2}" y2="{0:.2}" stroke="black" stroke-dasharray="4 3"/>"#,
        py(0.0),
        LEFT + plot_w
    );
    if (x0..=x1).contains(&BRUSS_THRESHOLD) {
        let _ = writeln!(
            s,
            r#"<line class="threshold" x1="{0:.2}" y1="{TOP}" x2="{0:.2}" y2="{1:.2}" stroke="gray" stroke-dasharray="2 2"/><text x="{2:.2}" y="{3:.2}" fill="gray">D = {BRUSS_THRESHOLD}</text>"#,
            px(BRUSS_THRESHOLD),
            TOP + plot_h,
            px(BRUSS_THRESHOLD) + 4.0,
            TOP + 14.0
        );
    }

    for (k, group) in series(rows).into_iter().enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        let points: Vec<String> = group
            .iter()
            .map(|r| format!("{:.2},{:.2}", px(r.d), py(r.delta)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{}"/>"#,
            points.join(" ")
        );
        if group.len() == 1 {
            let _ = writeln!(
                s,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{colour}"/>"#,
                px(group[0].d),
                py(group[0].delta)
            );
        }
        let ly = TOP + 10.0 + 18.0 * k as f64;
        let lx = LEFT + plot_w + 15.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{colour}" stroke-width="2"/><text x="{:.2}" y="{:.2}">C = {}</text>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            group[0].c
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}
