//! Minimal self-contained SVG line plots: axes, grid lines, tick labels,
//! and up to two series. CSV remains the authoritative output — these are
//! quick-look figures, deterministic for a given input.

use std::fmt::Write as _;

pub struct Series<'a> {
    pub label: &'a str,
    pub points: Vec<(f64, f64)>,
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_LEFT: f64 = 72.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 44.0;
const MARGIN_BOTTOM: f64 = 58.0;
const COLORS: [&str; 2] = ["#1f77b4", "#d62728"];

/// Render one plot. Non-finite points are dropped; a flat or empty value
/// range is widened so the axes stay usable.
pub fn line_plot(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    assert!(series.len() <= 2, "plots carry at most two series");

    let finite: Vec<(f64, f64)> = series
        .iter()
        .flat_map(|s| s.points.iter())
        .filter(|p| p.0.is_finite() && p.1.is_finite())
        .copied()
        .collect();
    let (x_min, x_max) = widened_range(finite.iter().map(|p| p.0));
    let (y_min, y_max) = widened_range(finite.iter().map(|p| p.1));

    let to_px = |x: f64, y: f64| -> (f64, f64) {
        let px = MARGIN_LEFT + (x - x_min) / (x_max - x_min) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT);
        let py =
            HEIGHT - MARGIN_BOTTOM - (y - y_min) / (y_max - y_min) * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM);
        (px, py)
    };

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="13">"#
    )
    .expect("string write");
    writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#)
        .expect("string write");

    // Grid and tick labels.
    for tick in ticks(x_min, x_max) {
        let (px, _) = to_px(tick.value, y_min);
        writeln!(
            out,
            r##"<line x1="{px:.2}" y1="{MARGIN_TOP}" x2="{px:.2}" y2="{:.2}" stroke="#dddddd"/>"##,
            HEIGHT - MARGIN_BOTTOM
        )
        .expect("string write");
        writeln!(
            out,
            r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            HEIGHT - MARGIN_BOTTOM + 18.0,
            tick.label
        )
        .expect("string write");
    }
    for tick in ticks(y_min, y_max) {
        let (_, py) = to_px(x_min, tick.value);
        writeln!(
            out,
            r##"<line x1="{MARGIN_LEFT}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="#dddddd"/>"##,
            WIDTH - MARGIN_RIGHT
        )
        .expect("string write");
        writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            MARGIN_LEFT - 8.0,
            py + 4.0,
            tick.label
        )
        .expect("string write");
    }

    // Frame, title, axis labels.
    writeln!(
        out,
        r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
        WIDTH - MARGIN_LEFT - MARGIN_RIGHT,
        HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
    )
    .expect("string write");
    writeln!(
        out,
        r#"<text x="{:.2}" y="26" text-anchor="middle" font-size="16">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    )
    .expect("string write");
    writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        (MARGIN_LEFT + WIDTH - MARGIN_RIGHT) / 2.0,
        HEIGHT - 14.0,
        escape(x_label)
    )
    .expect("string write");
    writeln!(
        out,
        r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">{}</text>"#,
        (MARGIN_TOP + HEIGHT - MARGIN_BOTTOM) / 2.0,
        (MARGIN_TOP + HEIGHT - MARGIN_BOTTOM) / 2.0,
        escape(y_label)
    )
    .expect("string write");

    // Series and legend.
    for (i, s) in series.iter().enumerate() {
        let mut path = String::new();
        for &(x, y) in s.points.iter().filter(|p| p.0.is_finite() && p.1.is_finite()) {
            let (px, py) = to_px(x, y);
            write!(path, "{px:.2},{py:.2} ").expect("string write");
        }
        writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
            path.trim_end(),
            COLORS[i]
        )
        .expect("string write");

        let ly = MARGIN_TOP + 16.0 + 18.0 * i as f64;
        let lx = WIDTH - MARGIN_RIGHT - 150.0;
        writeln!(
            out,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{}" stroke-width="1.5"/>"#,
            lx + 26.0,
            COLORS[i]
        )
        .expect("string write");
        writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 32.0,
            ly + 4.0,
            escape(s.label)
        )
        .expect("string write");
    }

    out.push_str("</svg>\n");
    out
}

struct Tick {
    value: f64,
    label: String,
}

/// Round tick positions at a 1/2/5 × 10^k step, aiming for about six
/// intervals across the range.
fn ticks(min: f64, max: f64) -> Vec<Tick> {
    let step = nice_step(max - min);
    let decimals = if step >= 1.0 { 0 } else { (-step.log10().floor()) as usize };
    let first = (min / step).ceil() as i64;
    let last = (max / step).floor() as i64;
    (first..=last)
        .map(|k| {
            let value = k as f64 * step;
            let mut label = format!("{value:.decimals$}");
            if label.starts_with('-') && label[1..].bytes().all(|b| b == b'0' || b == b'.') {
                label.remove(0);
            }
            Tick { value, label }
        })
        .collect()
}

fn nice_step(span: f64) -> f64 {
    let raw = span / 6.0;
    let magnitude = 10f64.powf(raw.log10().floor());
    for mult in [1.0, 2.0, 5.0] {
        if magnitude * mult >= raw {
            return magnitude * mult;
        }
    }
    magnitude * 10.0
}

/// Widen degenerate ranges (single point, empty input) so the mapping to
/// pixels stays finite, and pad real ones slightly so curves don't touch
/// the frame.
fn widened_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in values {
        min = min.min(v);
        max = max.max(v);
    }
    if !min.is_finite() || !max.is_finite() {
        return (0.0, 1.0);
    }
    if min == max {
        return (min - 1.0, max + 1.0);
    }
    let pad = (max - min) * 0.05;
    (min - pad, max + pad)
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
