// SPDX-License-Identifier: Apache-2.0

//! Static SVG chart of frontier curves: squeezing in dB against log α².

use std::fmt::Write;

use sqzlab_core::{AlphaBins, FrontierCurve};

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = WIDTH - 180.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = HEIGHT - 60.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

pub fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn threshold_label(t: f64) -> String {
    if t.is_infinite() {
        "ΔXΔP unbounded".into()
    } else {
        format!("ΔXΔP ≤ {t}")
    }
}

fn nice_step(span: f64) -> f64 {
    let raw = span / 8.0;
    let mag = 10f64.powf(raw.log10().floor());
    [1.0, 2.0, 5.0, 10.0]
        .into_iter()
        .map(|m| m * mag)
        .find(|&s| s >= raw)
        .unwrap_or(10.0 * mag)
}

/// One polyline per curve over the log bins; points in the zero bin have no
/// place on a log axis and are left out.
pub fn render(title: &str, curves: &[FrontierCurve], bins: &AlphaBins, desc: &str) -> String {
    let (lx0, lx1) = (bins.min.log10(), bins.max.log10());
    let plotted: Vec<Vec<(f64, f64)>> = curves
        .iter()
        .map(|c| {
            c.points
                .iter()
                .filter(|p| p.alpha_sq_bin > 0.0)
                .map(|p| (p.alpha_sq_bin.log10(), p.squeeze_db))
                .collect()
        })
        .collect();
    let dbs = plotted.iter().flatten().map(|&(_, d)| d);
    let (lo, hi) = dbs.fold((0.0f64, 1.0f64), |(a, b), d| (a.min(d), b.max(d)));
    let step = nice_step(hi - lo);
    let (y0, y1) = ((lo / step).floor() * step, (hi / step).ceil() * step);

    let sx = |lx: f64| LEFT + (lx - lx0) / (lx1 - lx0) * (RIGHT - LEFT);
    let sy = |d: f64| BOTTOM - (d - y0) / (y1 - y0) * (BOTTOM - TOP);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, "<title>{}</title>", escape(title));
    let _ = writeln!(s, "<desc>{}</desc>", escape(desc));
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="28" text-anchor="middle" font-size="15">{}</text>"#,
        (LEFT + RIGHT) / 2.0,
        escape(title)
    );

    // Grid and ticks.
    let _ = writeln!(s, r##"<g stroke="#ddd" stroke-width="1">"##);
    let mut decade = lx0.ceil() as i32;
    let mut xticks = Vec::new();
    while f64::from(decade) <= lx1 + 1e-12 {
        let x = sx(f64::from(decade));
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{TOP}" x2="{x:.2}" y2="{BOTTOM}"/>"#
        );
        xticks.push((x, decade));
        decade += 1;
    }
    let mut yticks = Vec::new();
    let mut k = 0;
    loop {
        let d = y0 + f64::from(k) * step;
        if d > y1 + step * 1e-9 {
            break;
        }
        let y = sy(d);
        let _ = writeln!(
            s,
            r#"<line x1="{LEFT}" y1="{y:.2}" x2="{RIGHT}" y2="{y:.2}"/>"#
        );
        yticks.push((y, d));
        k += 1;
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        RIGHT - LEFT,
        BOTTOM - TOP
    );
    for (x, dec) in xticks {
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{:.1}" text-anchor="middle">10<tspan dy="-6" font-size="9">{dec}</tspan></text>"#,
            BOTTOM + 18.0
        );
    }
    for (y, d) in yticks {
        let label = if step >= 1.0 {
            format!("{d:.0}")
        } else {
            format!("{d:.1}")
        };
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.2}" text-anchor="end">{label}</text>"#,
            LEFT - 6.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">α² (output displacement² / pump displacement²)</text>"#,
        (LEFT + RIGHT) / 2.0,
        HEIGHT - 18.0
    );
    let _ = writeln!(
        s,
        r#"<text transform="translate(22,{:.1}) rotate(-90)" text-anchor="middle">best squeezing (dB)</text>"#,
        (TOP + BOTTOM) / 2.0
    );

    // Curves and legend.
    for (i, (curve, pts)) in curves.iter().zip(&plotted).enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let coords: Vec<String> = pts
            .iter()
            .map(|&(lx, d)| format!("{:.2},{:.2}", sx(lx), sy(d)))
            .collect();
        match coords.len() {
            0 => {}
            1 => {
                let (lx, d) = pts[0];
                let _ = writeln!(
                    s,
                    r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
                    sx(lx),
                    sy(d)
                );
            }
            _ => {
                let _ = writeln!(
                    s,
                    r#"<polyline fill="none" stroke="{color}" stroke-width="1.8" points="{}"/>"#,
                    coords.join(" ")
                );
            }
        }
        let ly = TOP + 14.0 + 20.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="2.5"/>"#,
            RIGHT + 14.0,
            RIGHT + 38.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}">{}</text>"#,
            RIGHT + 44.0,
            ly + 4.0,
            escape(&threshold_label(curve.threshold))
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use sqzlab_core::{BsParams, FrontierPoint, MethodParams};

    fn curve(threshold: f64, pts: &[(f64, f64)]) -> FrontierCurve {
        FrontierCurve {
            threshold,
            points: pts
                .iter()
                .map(|&(a, d)| FrontierPoint {
                    alpha_sq_bin: a,
                    bin_lo: a,
                    bin_hi: a,
                    squeeze_db: d,
                    uncertainty: 1.0,
                    alpha_sq: a,
                    params: MethodParams::BeamSplitter(BsParams { b: 0.0, theta: 0.0 }),
                })
                .collect(),
        }
    }

    #[test]
    fn one_polyline_per_curve() {
        let curves = [
            curve(1.1, &[(1e-4, 3.0), (1e-2, 5.0), (0.5, 1.0)]),
            curve(f64::INFINITY, &[(1e-4, 9.0), (0.0, 20.0), (1e-1, 8.0)]),
        ];
        let svg = render("bs <test>", &curves, &AlphaBins::default(), "{\"a\":1}");
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("bs &lt;test&gt;"));
        assert!(svg.contains("&quot;a&quot;"));
        assert!(svg.contains("ΔXΔP ≤ 1.1") && svg.contains("unbounded"));
        assert!(svg.contains("best squeezing (dB)"));
        assert!(!svg.contains("NaN") && !svg.contains("inf\""));
        // Decades 1e-6..1e0 labeled.
        assert_eq!(svg.matches("<tspan").count(), 7);
    }

    #[test]
    fn empty_curves_still_render() {
        let svg = render("empty", &[curve(1.0, &[])], &AlphaBins::default(), "");
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert_eq!(svg.matches("<polyline").count(), 0);
    }
}
