//! Minimal SVG renderings of the CSV data: polylines for spectra,
//! rects for histograms. No plotting dependency; just enough to eyeball
//! a run. Pure functions of the data that goes into the CSV files.

use std::fmt::Write;

const WIDTH: f64 = 900.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 60.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

fn px(v: f64) -> String {
    format!("{v:.2}")
}

struct Frame {
    x_lo: f64,
    x_hi: f64,
    y_lo: f64,
    y_hi: f64,
}

impl Frame {
    fn x(&self, v: f64) -> f64 {
        MARGIN + (v - self.x_lo) / (self.x_hi - self.x_lo) * (WIDTH - 2.0 * MARGIN)
    }

    fn y(&self, v: f64) -> f64 {
        HEIGHT - MARGIN - (v - self.y_lo) / (self.y_hi - self.y_lo) * (HEIGHT - 2.0 * MARGIN)
    }
}

fn open_svg(out: &mut String) {
    let _ = write!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = write!(
        out,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
}

fn draw_frame(out: &mut String, f: &Frame, x_label: &str, y_label: &str) {
    let _ = write!(
        out,
        r#"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        px(MARGIN),
        px(MARGIN),
        px(WIDTH - 2.0 * MARGIN),
        px(HEIGHT - 2.0 * MARGIN)
    );
    let text = |out: &mut String, x: f64, y: f64, anchor: &str, s: String| {
        let _ = write!(
            out,
            r#"<text x="{}" y="{}" font-family="monospace" font-size="12" text-anchor="{anchor}">{s}</text>"#,
            px(x),
            px(y)
        );
    };
    text(out, MARGIN, HEIGHT - MARGIN + 16.0, "middle", format!("{:.4}", f.x_lo));
    text(out, WIDTH - MARGIN, HEIGHT - MARGIN + 16.0, "middle", format!("{:.4}", f.x_hi));
    text(out, MARGIN - 6.0, HEIGHT - MARGIN, "end", format!("{:.4}", f.y_lo));
    text(out, MARGIN - 6.0, MARGIN + 4.0, "end", format!("{:.4}", f.y_hi));
    text(out, WIDTH / 2.0, HEIGHT - 12.0, "middle", x_label.to_string());
    text(out, MARGIN, MARGIN - 10.0, "start", y_label.to_string());
}

/// Polyline chart: one line per `(line_id, points)` entry.
pub fn line_chart(lines: &[(usize, Vec<(f64, f64)>)], x_label: &str, y_label: &str) -> String {
    let mut out = String::new();
    open_svg(&mut out);

    let all = lines.iter().flat_map(|(_, pts)| pts.iter());
    let (mut x_lo, mut x_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y_lo, mut y_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in all {
        x_lo = x_lo.min(x);
        x_hi = x_hi.max(x);
        y_lo = y_lo.min(y);
        y_hi = y_hi.max(y);
    }
    if !x_lo.is_finite() || x_lo == x_hi {
        x_hi = x_lo + 1.0;
    }
    if !y_lo.is_finite() || y_lo == y_hi {
        y_hi = y_lo + 1.0;
    }
    let frame = Frame { x_lo, x_hi, y_lo, y_hi };
    draw_frame(&mut out, &frame, x_label, y_label);

    for (line_id, pts) in lines {
        let color = PALETTE[line_id % PALETTE.len()];
        let mut path = String::new();
        for (i, &(x, y)) in pts.iter().enumerate() {
            let _ = write!(
                path,
                "{}{},{}",
                if i == 0 { "" } else { " " },
                px(frame.x(x)),
                px(frame.y(y))
            );
        }
        let _ = write!(
            out,
            r#"<polyline points="{path}" fill="none" stroke="{color}" stroke-width="1.5"/>"#
        );
    }
    out.push_str("</svg>");
    out
}

/// Bar chart of histogram rows `(bin_lo, bin_hi, probability)`.
pub fn histogram_chart(bins: &[(f64, f64, f64)], x_label: &str, y_label: &str) -> String {
    let mut out = String::new();
    open_svg(&mut out);

    let x_lo = bins.first().map(|b| b.0).unwrap_or(0.0);
    let x_hi = bins.last().map(|b| b.1).unwrap_or(1.0);
    let p_max = bins.iter().map(|b| b.2).fold(0.0f64, f64::max).max(1e-12);
    let frame = Frame {
        x_lo,
        x_hi,
        y_lo: 0.0,
        y_hi: p_max,
    };
    draw_frame(&mut out, &frame, x_label, y_label);

    for &(lo, hi, p) in bins {
        let x = frame.x(lo);
        let w = frame.x(hi) - x;
        let y = frame.y(p);
        let h = frame.y(0.0) - y;
        let _ = write!(
            out,
            r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{}" stroke="black" stroke-width="0.5"/>"#,
            px(x),
            px(y),
            px(w.max(0.0)),
            px(h.max(0.0)),
            PALETTE[0]
        );
    }
    out.push_str("</svg>");
    out
}
