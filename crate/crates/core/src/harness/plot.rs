//! Minimal SVG line plots.

use std::fmt::Write;

pub struct Series<'a> {
    pub label: &'a str,
    pub points: &'a [(f64, f64)],
    pub dashed: bool,
}

const W: f64 = 640.0;
const H: f64 = 420.0;
const MARGIN: f64 = 50.0;

/// SVG document with axes, one polyline per series and a legend.
pub fn line_plot(title: &str, series: &[Series]) -> String {
    let pts = series.iter().flat_map(|s| s.points.iter()).filter(|p| p.0.is_finite() && p.1.is_finite());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, 0.0_f64, f64::NEG_INFINITY);
    for &(x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !(x1 > x0) {
        x1 = x0 + 1.0;
    }
    if !(y1 > y0) {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (W - 2.0 * MARGIN);
    let sy = |y: f64| H - MARGIN - (y - y0) / (y1 - y0) * (H - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#, W / 2.0, escape(title));
    let _ = writeln!(
        s,
        r#"<path d="M{a} {b} L{c} {b} M{a} {b} L{a} {d}" stroke="black" fill="none"/>"#,
        a = MARGIN,
        b = H - MARGIN,
        c = W - MARGIN,
        d = MARGIN
    );
    for k in 0..=4 {
        let fx = x0 + (x1 - x0) * k as f64 / 4.0;
        let fy = y0 + (y1 - y0) * k as f64 / 4.0;
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#, sx(fx), H - MARGIN + 16.0, tick(fx));
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="end">{}</text>"#, MARGIN - 4.0, sy(fy) + 4.0, tick(fy));
    }
    let colors = ["#1f4e9c", "#c0392b", "#27ae60", "#7d3c98"];
    for (i, ser) in series.iter().enumerate() {
        let color = colors[i % colors.len()];
        let mut d = String::new();
        for &(x, y) in ser.points.iter().filter(|p| p.0.is_finite() && p.1.is_finite()) {
            let _ = write!(d, "{:.2},{:.2} ", sx(x), sy(y));
        }
        let dash = if ser.dashed { r#" stroke-dasharray="6 4""# } else { "" };
        let _ = writeln!(s, r#"<polyline points="{}" stroke="{color}" stroke-width="1.5" fill="none"{dash}/>"#, d.trim_end());
        let ly = MARGIN + 16.0 * i as f64;
        let _ = writeln!(s, r#"<line x1="{a}" y1="{ly}" x2="{b}" y2="{ly}" stroke="{color}" stroke-width="1.5"{dash}/>"#, a = W - 170.0, b = W - 140.0);
        let _ = writeln!(s, r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12">{}</text>"#, W - 134.0, ly + 4.0, escape(ser.label));
    }
    s.push_str("</svg>\n");
    s
}

fn tick(v: f64) -> String {
    let r = format!("{v:.3}");
    r.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
