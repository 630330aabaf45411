//! Minimal log-log convergence plot.

use std::fmt::Write as _;

const W: f64 = 640.0;
const H: f64 = 480.0;
const MARGIN: f64 = 70.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// One polyline per series `(k, [(h, err)])`, with a reference triangle of
/// slope k + 1 under each curve.
pub fn loglog(series: &[(usize, Vec<(f64, f64)>)]) -> String {
    let pts = series.iter().flat_map(|(_, s)| s.iter()).filter(|(h, e)| *h > 0.0 && *e > 0.0);
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(h, e) in pts {
        x0 = x0.min(h.log10());
        x1 = x1.max(h.log10());
        y0 = y0.min(e.log10());
        y1 = y1.max(e.log10());
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (-1.0, 0.0, -1.0, 0.0);
    }
    let (x0, x1) = (x0.floor(), x1.ceil().max(x0.floor() + 1.0));
    let (y0, y1) = (y0.floor(), y1.ceil().max(y0.floor() + 1.0));
    let px = |lx: f64| MARGIN + (lx - x0) / (x1 - x0) * (W - 2.0 * MARGIN);
    let py = |ly: f64| H - MARGIN - (ly - y0) / (y1 - y0) * (H - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - 2.0 * MARGIN,
        H - 2.0 * MARGIN
    );
    for d in (x0 as i32)..=(x1 as i32) {
        let x = px(d as f64);
        let _ = writeln!(s, r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{MARGIN}" stroke="lightgray"/>"#, H - MARGIN);
        let _ = writeln!(s, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">1e{d}</text>"#, H - MARGIN + 18.0);
    }
    for d in (y0 as i32)..=(y1 as i32) {
        let y = py(d as f64);
        let _ = writeln!(s, r#"<line x1="{MARGIN}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="lightgray"/>"#, W - MARGIN);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">1e{d}</text>"#, MARGIN - 6.0, y + 4.0);
    }
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">h</text>"#, W / 2.0, H - 20.0);
    let _ = writeln!(s, r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">relative error</text>"#, H / 2.0, H / 2.0);

    for (i, (k, data)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let coords: Vec<String> = data
            .iter()
            .filter(|(h, e)| *h > 0.0 && *e > 0.0)
            .map(|(h, e)| format!("{:.2},{:.2}", px(h.log10()), py(e.log10())))
            .collect();
        let _ = writeln!(s, r#"<polyline class="series" data-degree="{k}" fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#, coords.join(" "));
        for c in &coords {
            let (cx, cy) = c.split_once(',').unwrap_or_default();
            let _ = writeln!(s, r#"<circle cx="{cx}" cy="{cy}" r="3" fill="{color}"/>"#);
        }
        // reference triangle of slope k+1 below the last two points
        if let [.., (ha, ea), (hb, eb)] = data.as_slice() {
            let (la, lb) = (ha.log10(), hb.log10());
            let lo = (ea.log10()).min(eb.log10()) - 0.3;
            let slope = (*k + 1) as f64;
            let (xa, xb) = (px(lb), px(la));
            let (ya, yb) = (py(lo), py(lo + slope * (la - lb)));
            let _ = writeln!(s, r#"<polygon class="reference" points="{xa:.2},{ya:.2} {xb:.2},{ya:.2} {xb:.2},{yb:.2}" fill="none" stroke="{color}" stroke-dasharray="4 3"/>"#);
            let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" fill="{color}">{}</text>"#, xb + 4.0, (ya + yb) / 2.0, k + 1);
        }
        let ly = MARGIN + 16.0 + 16.0 * i as f64;
        let _ = writeln!(s, r#"<line x1="{:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/>"#, MARGIN + 10.0, MARGIN + 30.0);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">k = {k}</text>"#, MARGIN + 36.0, ly + 4.0);
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_polyline_per_degree() {
        let s = loglog(&[(0, vec![(0.1, 1e-2), (0.05, 5e-3)]), (1, vec![(0.1, 1e-3), (0.05, 2.5e-4)])]);
        assert_eq!(s.matches("<polyline").count(), 2);
        assert_eq!(s.matches("class=\"reference\"").count(), 2);
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
    }
}
