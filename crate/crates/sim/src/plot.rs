//! Minimal static SVG line charts.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::error::{invalid, Result};
use crate::harness::ResultRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XAxis {
    LaunchPower,
    Distance,
    Channels,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum YAxis {
    Gmi,
    NetRate,
}

impl XAxis {
    fn label(self) -> &'static str {
        match self {
            XAxis::LaunchPower => "Launch power per channel [dBm]",
            XAxis::Distance => "Distance [km]",
            XAxis::Channels => "Number of channels",
        }
    }

    fn value(self, r: &ResultRecord) -> f64 {
        match self {
            XAxis::LaunchPower => r.launch_dbm,
            XAxis::Distance => r.distance_km,
            XAxis::Channels => r.n_channels as f64,
        }
    }
}

impl YAxis {
    fn label(self) -> &'static str {
        match self {
            YAxis::Gmi => "GMI [bit/4D-sym]",
            YAxis::NetRate => "Net data rate [Gb/s]",
        }
    }

    fn value(self, r: &ResultRecord) -> f64 {
        match self {
            YAxis::Gmi => r.gmi_bit4d,
            YAxis::NetRate => r.ndr_gbps,
        }
    }
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: (f64, f64, f64, f64) = (70.0, 20.0, 30.0, 55.0); // left, right, top, bottom
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// Series keyed by (format, demapper), points sorted by x.
pub fn series(records: &[ResultRecord], x: XAxis, y: YAxis) -> BTreeMap<(String, String), Vec<(f64, f64)>> {
    let mut out: BTreeMap<(String, String), Vec<(f64, f64)>> = BTreeMap::new();
    for r in records {
        out.entry((r.format.clone(), r.demapper.as_str().to_string()))
            .or_default()
            .push((x.value(r), y.value(r)));
    }
    for pts in out.values_mut() {
        pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    }
    out
}

fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| (l.min(v), h.max(v)));
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, hi + 0.5)
    }
}

/// One polyline per (format, demapper) pair with labelled axes.
pub fn render_svg(records: &[ResultRecord], x: XAxis, y: YAxis) -> Result<String> {
    if records.is_empty() {
        return Err(invalid("records", "nothing to plot"));
    }
    let all = series(records, x, y);
    let (x0, x1) = span(all.values().flatten().map(|p| p.0));
    let (y0, y1) = span(all.values().flatten().map(|p| p.1));
    let (ml, mr, mt, mb) = MARGIN;
    let pw = WIDTH - ml - mr;
    let ph = HEIGHT - mt - mb;
    let sx = |v: f64| ml + (v - x0) / (x1 - x0) * pw;
    let sy = |v: f64| mt + (1.0 - (v - y0) / (y1 - y0)) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#);
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let (xv, yv) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            sx(xv),
            mt + ph + 16.0,
            tick(xv)
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            ml - 6.0,
            sy(yv) + 4.0,
            tick(yv)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        ml + pw / 2.0,
        HEIGHT - 12.0,
        x.label()
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
        mt + ph / 2.0,
        mt + ph / 2.0,
        y.label()
    );
    for (i, ((format, demapper), pts)) in all.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let path: Vec<String> = pts.iter().map(|&(a, b)| format!("{:.2},{:.2}", sx(a), sy(b))).collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            path.join(" ")
        );
        let ly = mt + 14.0 + 16.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{ly:.2}" fill="{color}">{format} / {demapper}</text>"#,
            ml + 8.0
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn tick(v: f64) -> String {
    crate::report::format_sig(crate::report::round_sig(v, 4), 4)
}
