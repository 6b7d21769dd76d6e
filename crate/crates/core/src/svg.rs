//! Plain SVG figures: the radar chart with gyration circles, and stacked
//! reference-vs-measured time series. Output is byte-stable for equal input.

use std::fmt::Write;

use crate::geometry::{axis_angle, GyrationCircle, RadarPolygon};

const PALETTE: [&str; 6] = [
    "#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// One condition on the radar chart.
pub struct RadarSeries<'a> {
    pub polygon: &'a RadarPolygon,
    pub circle: &'a GyrationCircle,
}

pub fn radar_chart(axis_names: &[String], series: &[RadarSeries<'_>]) -> String {
    let size = 640.0;
    let center = size / 2.0;
    let plot_r = size * 0.36;

    let mut extent: f64 = 0.0;
    for s in series {
        for v in s.polygon.vertices() {
            extent = extent.max(v.x.hypot(v.y));
        }
        let c = &s.circle.circle;
        extent = extent.max(c.center.x.hypot(c.center.y) + c.radius);
    }
    if extent <= 0.0 {
        extent = 1.0;
    }
    let k = plot_r / extent;
    let px = |x: f64| center + k * x;
    let py = |y: f64| center - k * y;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let n = axis_names.len();
    for (i, name) in axis_names.iter().enumerate() {
        let th = axis_angle(i, n);
        let (ex, ey) = (extent * th.cos(), extent * th.sin());
        let _ = writeln!(
            out,
            r##"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="#bbbbbb"/>"##,
            px(0.0),
            py(0.0),
            px(ex),
            py(ey)
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.3}" y="{:.3}" text-anchor="middle">{}</text>"#,
            px(ex * 1.15),
            py(ey * 1.15),
            escape(name)
        );
    }
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<String> = s
            .polygon
            .vertices()
            .iter()
            .map(|v| format!("{:.3},{:.3}", px(v.x), py(v.y)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polygon points="{}" fill="{color}" fill-opacity="0.15" stroke="{color}" stroke-width="2"/>"#,
            pts.join(" ")
        );
        let c = &s.circle.circle;
        let _ = writeln!(
            out,
            r#"<circle cx="{:.3}" cy="{:.3}" r="{:.3}" fill="none" stroke="{color}" stroke-width="1.5" stroke-dasharray="6 4"/>"#,
            px(c.center.x),
            py(c.center.y),
            k * c.radius
        );
        let _ = writeln!(
            out,
            r#"<circle cx="{:.3}" cy="{:.3}" r="3" fill="{color}"/>"#,
            px(c.center.x),
            py(c.center.y)
        );
        let ly = 20.0 + 18.0 * i as f64;
        let _ = writeln!(
            out,
            r#"<rect x="12" y="{:.1}" width="12" height="12" fill="{color}"/><text x="30" y="{:.1}">{}</text>"#,
            ly - 10.0,
            ly,
            escape(&s.circle.label)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// A panel of the tracking figure: two equally long series on a shared time
/// axis.
pub struct OverlayPanel<'a> {
    pub title: String,
    pub reference_label: String,
    pub measured_label: String,
    pub reference: &'a [f64],
    pub measured: &'a [f64],
}

pub fn overlay_plot(times: &[f64], panels: &[OverlayPanel<'_>]) -> String {
    let (w, ph, margin) = (900.0, 220.0, 50.0);
    let h = ph * panels.len().max(1) as f64;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let (t0, t1) = match (times.first(), times.last()) {
        (Some(&a), Some(&b)) if b > a => (a, b),
        _ => (0.0, 1.0),
    };
    for (p, panel) in panels.iter().enumerate() {
        let top = p as f64 * ph;
        let (lo, hi) = panel
            .reference
            .iter()
            .chain(panel.measured)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        let (lo, hi) = if hi > lo {
            (lo, hi)
        } else {
            (lo - 1.0, lo + 1.0)
        };
        let x = |t: f64| margin + (w - 2.0 * margin) * (t - t0) / (t1 - t0);
        let y = |v: f64| top + ph - margin * 0.6 - (ph - 1.4 * margin) * (v - lo) / (hi - lo);
        let _ = writeln!(
            out,
            r##"<rect x="{margin}" y="{:.1}" width="{:.1}" height="{:.1}" fill="none" stroke="#999999"/>"##,
            top + 0.8 * margin,
            w - 2.0 * margin,
            ph - 1.4 * margin
        );
        let _ = writeln!(
            out,
            r#"<text x="{margin}" y="{:.1}">{} (ref: {}, measured: {})</text>"#,
            top + 0.6 * margin,
            escape(&panel.title),
            escape(&panel.reference_label),
            escape(&panel.measured_label)
        );
        for (series, color) in [(panel.reference, "#333333"), (panel.measured, "#d62728")] {
            let pts: Vec<String> = times
                .iter()
                .zip(series)
                .map(|(&t, &v)| format!("{:.2},{:.2}", x(t), y(v)))
                .collect();
            let _ = writeln!(
                out,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.2"/>"#,
                pts.join(" ")
            );
        }
    }
    out.push_str("</svg>\n");
    out
}
