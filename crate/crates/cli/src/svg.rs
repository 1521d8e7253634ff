//! Minimal hand-rolled SVG rendering for phase portraits: a quiver of
//! velocity arrows with equilibria overlaid. Output is byte-stable for
//! identical input.

use std::fmt::Write;

use modgame::analysis::Classification;
use modgame::integrate::FieldPoint;

const SIZE: f64 = 640.0;
const MARGIN: f64 = 50.0;

/// An equilibrium marker for the overlay.
pub struct Marker {
    pub x: f64,
    pub z: f64,
    pub classification: Option<Classification>,
}

fn px(x: f64) -> f64 {
    MARGIN + x * (SIZE - 2.0 * MARGIN)
}

fn py(z: f64) -> f64 {
    SIZE - MARGIN - z * (SIZE - 2.0 * MARGIN)
}

fn marker_color(c: Option<Classification>) -> &'static str {
    match c {
        Some(Classification::StableNode) => "#1a7f37",
        Some(Classification::Saddle) => "#d4a72c",
        Some(Classification::UnstableNode) => "#cf222e",
        Some(Classification::Marginal) | None => "#6e7781",
    }
}

/// Renders the sampled field as scaled arrows plus equilibrium markers.
pub fn render_portrait(
    field: &[FieldPoint],
    grid: usize,
    markers: &[Marker],
    title: &str,
) -> String {
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">"
    );
    let _ = writeln!(
        svg,
        "<rect x=\"0\" y=\"0\" width=\"{SIZE}\" height=\"{SIZE}\" fill=\"white\"/>"
    );
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"14\">{title}</text>",
        MARGIN,
        MARGIN - 20.0
    );
    // axes box and labels
    let _ = writeln!(
        svg,
        "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"none\" stroke=\"#333333\"/>",
        px(0.0),
        py(1.0),
        SIZE - 2.0 * MARGIN,
        SIZE - 2.0 * MARGIN
    );
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"12\">x (cooperating users)</text>",
        px(0.30),
        py(0.0) + 30.0
    );
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"12\" transform=\"rotate(-90 {:.2} {:.2})\">z (positive moderators)</text>",
        px(0.0) - 24.0,
        py(0.30),
        px(0.0) - 24.0,
        py(0.30)
    );

    let max_mag = field
        .iter()
        .map(|f| (f.dx * f.dx + f.dz * f.dz).sqrt())
        .fold(0.0f64, f64::max);
    // longest arrow spans 90% of one grid cell
    let cell = (SIZE - 2.0 * MARGIN) / (grid.max(2) - 1) as f64;
    let scale = if max_mag > 0.0 {
        0.9 * cell / max_mag
    } else {
        0.0
    };

    for f in field {
        let mag = (f.dx * f.dx + f.dz * f.dz).sqrt();
        if mag * scale < 0.75 {
            // too short to draw a readable arrow; mark with a dot
            let _ = writeln!(
                svg,
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"0.80\" fill=\"#9fb6c9\"/>",
                px(f.x),
                py(f.z)
            );
            continue;
        }
        let x0 = px(f.x);
        let y0 = py(f.z);
        // screen-space direction (y grows downward)
        let ux = f.dx / mag;
        let uy = -f.dz / mag;
        let len = mag * scale;
        let x1 = x0 + ux * len;
        let y1 = y0 + uy * len;
        let head = (0.3 * len).min(5.0);
        let (hx1, hy1) = rotate(ux, uy, 2.6);
        let (hx2, hy2) = rotate(ux, uy, -2.6);
        let _ = writeln!(
            svg,
            "<path d=\"M {x0:.2} {y0:.2} L {x1:.2} {y1:.2} M {x1:.2} {y1:.2} L {:.2} {:.2} M {x1:.2} {y1:.2} L {:.2} {:.2}\" stroke=\"#2c5d8a\" stroke-width=\"1\" fill=\"none\"/>",
            x1 + hx1 * head,
            y1 + hy1 * head,
            x1 + hx2 * head,
            y1 + hy2 * head
        );
    }

    for m in markers {
        let _ = writeln!(
            svg,
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"5.00\" fill=\"{}\" stroke=\"#222222\"/>",
            px(m.x),
            py(m.z),
            marker_color(m.classification)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn rotate(ux: f64, uy: f64, angle: f64) -> (f64, f64) {
    let (s, c) = angle.sin_cos();
    (ux * c - uy * s, ux * s + uy * c)
}
