//! Standalone SVG panels of ensemble curves.
//!
//! Panels are laid out with one column per summary and one row per metric,
//! lettered row by row. Given two summaries and both metrics this yields
//! entropy on top and class counts below, with (a, c) for the first model
//! and (b, d) for the second. Each series is a mean polyline over a
//! translucent 5th–95th percentile polygon; shuffled baselines are dashed.

use std::fmt::Write as _;
use std::path::Path;

use morphodyn::experiment::MetricBand;
use morphodyn::EnsembleSummary;

use crate::csv_io::format_sig6;
use crate::error::{CliError, Result};

const PANEL_W: f64 = 440.0;
const PANEL_H: f64 = 300.0;
const LEGEND_H: f64 = 32.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 34.0;
const MARGIN_BOTTOM: f64 = 50.0;

const LIVE_COLOR: &str = "#1f5fa8";
const SHUFFLED_COLOR: &str = "#d2691e";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PanelMetric {
    Entropy,
    Classes,
}

impl PanelMetric {
    fn title(self) -> &'static str {
        match self {
            PanelMetric::Entropy => "mean conditional entropy",
            PanelMetric::Classes => "inflection classes",
        }
    }

    fn unit(self) -> &'static str {
        match self {
            PanelMetric::Entropy => "bits",
            PanelMetric::Classes => "classes",
        }
    }

    fn bands(self, s: &EnsembleSummary) -> (&MetricBand, &MetricBand) {
        match self {
            PanelMetric::Entropy => (&s.mean_cond_entropy, &s.shuffled_mean_cond_entropy),
            PanelMetric::Classes => (&s.class_count, &s.shuffled_class_count),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PlotOptions {
    pub metrics: Vec<PanelMetric>,
    pub show_shuffled: bool,
}

impl Default for PlotOptions {
    fn default() -> Self {
        Self { metrics: vec![PanelMetric::Entropy, PanelMetric::Classes], show_shuffled: true }
    }
}

/// A summary and the name printed on its panels.
#[derive(Debug, Clone)]
pub struct LabeledSummary {
    pub label: String,
    pub summary: EnsembleSummary,
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Step of 1, 2 or 5 times a power of ten giving about `target` intervals.
fn nice_step(range: f64, target: f64) -> f64 {
    let raw = range / target;
    let magnitude = 10f64.powf(raw.log10().floor());
    let residual = raw / magnitude;
    let factor = if residual <= 1.0 {
        1.0
    } else if residual <= 2.0 {
        2.0
    } else if residual <= 5.0 {
        5.0
    } else {
        10.0
    };
    factor * magnitude
}

struct Frame {
    left: f64,
    top: f64,
    width: f64,
    height: f64,
    x_max: f64,
    y_max: f64,
}

impl Frame {
    fn x(&self, v: f64) -> f64 {
        self.left + self.width * v / self.x_max
    }

    fn y(&self, v: f64) -> f64 {
        self.top + self.height * (1.0 - v / self.y_max)
    }
}

fn points(frame: &Frame, xs: &[f64], ys: impl Iterator<Item = f64>) -> String {
    xs.iter()
        .zip(ys)
        .map(|(&x, y)| format!("{:.2},{:.2}", frame.x(x), frame.y(y)))
        .collect::<Vec<_>>()
        .join(" ")
}

fn draw_series(out: &mut String, frame: &Frame, xs: &[f64], band: &MetricBand, class: &str, color: &str, dashed: bool) {
    let upper = points(frame, xs, band.p95.iter().copied());
    let lower_rev: Vec<f64> = xs.iter().rev().copied().collect();
    let lower = points(frame, &lower_rev, band.p05.iter().rev().copied());
    let _ = writeln!(
        out,
        r#"    <polygon class="band {class}" points="{upper} {lower}" fill="{color}" fill-opacity="0.2" stroke="none"/>"#
    );
    let dash = if dashed { r#" stroke-dasharray="6 4""# } else { "" };
    let _ = writeln!(
        out,
        r#"    <polyline class="mean {class}" points="{}" fill="none" stroke="{color}" stroke-width="1.8"{dash}/>"#,
        points(frame, xs, band.mean.iter().copied())
    );
}

fn draw_panel(out: &mut String, origin: (f64, f64), letter: char, entry: &LabeledSummary, metric: PanelMetric, options: &PlotOptions) {
    let summary = &entry.summary;
    let xs: Vec<f64> = summary.checkpoints.iter().map(|&c| c as f64).collect();
    let (live, shuffled) = metric.bands(summary);
    let mut y_max = live.p95.iter().chain(&live.mean).copied().fold(0.0, f64::max);
    if options.show_shuffled {
        y_max = shuffled.p95.iter().chain(&shuffled.mean).copied().fold(y_max, f64::max);
    }
    let y_step = nice_step(if y_max > 0.0 { y_max } else { 1.0 }, 4.0);
    let y_max = (y_max / y_step).ceil().max(1.0) * y_step;
    let x_last = xs.last().copied().unwrap_or(0.0);
    let x_max = if x_last > 0.0 { x_last } else { 1.0 };
    let frame = Frame {
        left: origin.0 + MARGIN_LEFT,
        top: origin.1 + MARGIN_TOP,
        width: PANEL_W - MARGIN_LEFT - MARGIN_RIGHT,
        height: PANEL_H - MARGIN_TOP - MARGIN_BOTTOM,
        x_max,
        y_max,
    };

    let _ = writeln!(out, r#"  <g class="panel" id="panel-{letter}">"#);
    let _ = writeln!(
        out,
        r#"    <text x="{:.2}" y="{:.2}" font-size="14">({letter}) {}: {}</text>"#,
        frame.left,
        origin.1 + 20.0,
        escape(&entry.label),
        metric.title()
    );
    let _ = writeln!(
        out,
        r##"    <rect class="frame" x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#444"/>"##,
        frame.left, frame.top, frame.width, frame.height
    );

    let mut tick = 0.0;
    while tick <= y_max + y_step * 1e-9 {
        let y = frame.y(tick);
        let _ = writeln!(
            out,
            r##"    <line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd"/><text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{}</text>"##,
            frame.left,
            frame.left + frame.width,
            frame.left - 6.0,
            y + 4.0,
            format_sig6(tick)
        );
        tick += y_step;
    }
    let x_step = nice_step(x_max, 4.0);
    let mut tick = 0.0;
    while tick <= x_max + x_step * 1e-9 {
        let x = frame.x(tick);
        let bottom = frame.top + frame.height;
        let _ = writeln!(
            out,
            r##"    <line x1="{x:.2}" y1="{bottom:.2}" x2="{x:.2}" y2="{:.2}" stroke="#444"/><text x="{x:.2}" y="{:.2}" font-size="11" text-anchor="middle">{}</text>"##,
            bottom + 5.0,
            bottom + 18.0,
            format_sig6(tick)
        );
        tick += x_step;
    }
    let _ = writeln!(
        out,
        r#"    <text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">cycles</text>"#,
        frame.left + frame.width / 2.0,
        frame.top + frame.height + 38.0
    );
    let (lx, ly) = (origin.0 + 18.0, frame.top + frame.height / 2.0);
    let _ = writeln!(
        out,
        r#"    <text x="{lx:.2}" y="{ly:.2}" font-size="12" text-anchor="middle" transform="rotate(-90 {lx:.2} {ly:.2})">{}</text>"#,
        metric.unit()
    );

    if options.show_shuffled {
        draw_series(out, &frame, &xs, shuffled, "shuffled", SHUFFLED_COLOR, true);
    }
    draw_series(out, &frame, &xs, live, "live", LIVE_COLOR, false);
    out.push_str("  </g>\n");
}

pub fn render_svg(summaries: &[LabeledSummary], options: &PlotOptions) -> String {
    let cols = summaries.len().max(1);
    let rows = options.metrics.len().max(1);
    let width = cols as f64 * PANEL_W;
    let height = LEGEND_H + rows as f64 * PANEL_H;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif">"#
    );
    let _ = writeln!(out, r#"  <rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(out, r#"  <g class="legend" font-size="12">"#);
    let _ = writeln!(
        out,
        r#"    <line x1="20" y1="18" x2="50" y2="18" stroke="{LIVE_COLOR}" stroke-width="1.8"/><text x="56" y="22">lexicon (mean, 5–95% band)</text>"#
    );
    if options.show_shuffled {
        let _ = writeln!(
            out,
            r#"    <line x1="260" y1="18" x2="290" y2="18" stroke="{SHUFFLED_COLOR}" stroke-width="1.8" stroke-dasharray="6 4"/><text x="296" y="22">columns shuffled</text>"#
        );
    }
    out.push_str("  </g>\n");
    for (r, &metric) in options.metrics.iter().enumerate() {
        for (c, entry) in summaries.iter().enumerate() {
            let letter = (b'a' + (r * cols + c) as u8) as char;
            let origin = (c as f64 * PANEL_W, LEGEND_H + r as f64 * PANEL_H);
            draw_panel(&mut out, origin, letter, entry, metric, options);
        }
    }
    out.push_str("</svg>\n");
    out
}

pub fn render_plot(summaries: &[LabeledSummary], options: &PlotOptions, path: &Path) -> Result<()> {
    if summaries.is_empty() {
        return Err(CliError::Runtime("nothing to plot".into()));
    }
    std::fs::write(path, render_svg(summaries, options)).map_err(CliError::io(path))
}
