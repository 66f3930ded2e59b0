//! SVG rendering of the AS-to-AS matrix.
//!
//! Row heights and column widths are proportional to each network's share of
//! the examined users (fractions divided by the covered fraction), so the grid
//! always fills the same square. Output is fully determined by the matrix:
//! fixed element order and fixed numeric precision.

use std::fmt::Write as _;

use crate::model::{DirectnessVerdict, EyeballMatrix, LocalityVerdict};

pub const GREEN: &str = "#2ca02c";
pub const ORANGE: &str = "#ff7f0e";
pub const LIGHT_GREY: &str = "#d3d3d3";
pub const BLACK: &str = "#000000";
pub const RED: &str = "#d62728";
pub const BLUE: &str = "#1f77b4";

const GRID: f64 = 600.0;
const LEFT: f64 = 90.0;
const TOP: f64 = 90.0;
const BOTTOM: f64 = 60.0;
const RIGHT: f64 = 20.0;

pub fn fill_color(v: LocalityVerdict) -> &'static str {
    match v {
        LocalityVerdict::InCountry => GREEN,
        LocalityVerdict::OutOfCountry => ORANGE,
        LocalityVerdict::NoCoverage => LIGHT_GREY,
        LocalityVerdict::Inconsistent | LocalityVerdict::Undetermined => BLACK,
    }
}

pub fn stroke_color(v: DirectnessVerdict) -> Option<&'static str> {
    match v {
        DirectnessVerdict::Indirect => Some(RED),
        DirectnessVerdict::Mixed => Some(BLUE),
        DirectnessVerdict::Direct | DirectnessVerdict::NotApplicable => None,
    }
}

pub fn render_svg(matrix: &EyeballMatrix) -> String {
    let set = matrix.eyeball_set();
    let covered = set.covered_fraction();
    let scale = if covered > 0.0 { GRID / covered } else { 0.0 };
    let sizes: Vec<f64> = set
        .networks()
        .iter()
        .map(|n| n.user_fraction * scale)
        .collect();
    let mut offsets = Vec::with_capacity(sizes.len());
    let mut acc = 0.0;
    for s in &sizes {
        offsets.push(acc);
        acc += s;
    }

    let width = LEFT + GRID + RIGHT;
    let height = TOP + GRID + BOTTOM;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif">"#
    );
    let _ = writeln!(
        svg,
        r#"<title>Eyeball AS-to-AS matrix for {}</title>"#,
        set.country()
    );
    let _ = writeln!(
        svg,
        r#"<rect x="0" y="0" width="{width:.0}" height="{height:.0}" fill="white"/>"#
    );

    let _ = writeln!(svg, r#"<g id="cells" shape-rendering="crispEdges">"#);
    for (i, row) in matrix.rows().enumerate() {
        for (j, cell) in row.iter().enumerate() {
            let (x, y) = (LEFT + offsets[j], TOP + offsets[i]);
            let (w, h) = (sizes[j], sizes[i]);
            let fill = fill_color(cell.locality);
            let _ = match stroke_color(cell.directness) {
                Some(stroke) => {
                    // inset so that the border stays inside the cell
                    let inset = 1.0_f64.min(w / 4.0).min(h / 4.0);
                    writeln!(
                        svg,
                        r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="{fill}" stroke="{stroke}" stroke-width="{:.3}"><title>AS{} to AS{}</title></rect>"#,
                        x + inset,
                        y + inset,
                        (w - 2.0 * inset).max(0.0),
                        (h - 2.0 * inset).max(0.0),
                        2.0 * inset,
                        cell.src_asn,
                        cell.dst_asn
                    )
                }
                None => writeln!(
                    svg,
                    r#"<rect x="{x:.3}" y="{y:.3}" width="{w:.3}" height="{h:.3}" fill="{fill}" stroke="none"><title>AS{} to AS{}</title></rect>"#,
                    cell.src_asn, cell.dst_asn
                ),
            };
        }
    }
    let _ = writeln!(svg, "</g>");

    let _ = writeln!(
        svg,
        r#"<g id="row-labels" font-size="10" text-anchor="end">"#
    );
    for (i, net) in set.networks().iter().enumerate() {
        let y = TOP + offsets[i] + sizes[i] / 2.0;
        let _ = writeln!(
            svg,
            r#"<text x="{:.3}" y="{y:.3}" dominant-baseline="middle">AS{}</text>"#,
            LEFT - 4.0,
            net.asn
        );
    }
    let _ = writeln!(svg, "</g>");
    let _ = writeln!(
        svg,
        r#"<g id="column-labels" font-size="10" text-anchor="start">"#
    );
    for (j, net) in set.networks().iter().enumerate() {
        let x = LEFT + offsets[j] + sizes[j] / 2.0;
        let y = TOP - 4.0;
        let _ = writeln!(
            svg,
            r#"<text x="{x:.3}" y="{y:.3}" transform="rotate(-60 {x:.3} {y:.3})">AS{}</text>"#,
            net.asn
        );
    }
    let _ = writeln!(svg, "</g>");

    let _ = writeln!(
        svg,
        r#"<text id="caption" x="{LEFT:.0}" y="{:.0}" font-size="12"><tspan x="{LEFT:.0}">Rows are sources, columns destinations.</tspan><tspan x="{LEFT:.0}" dy="16">Networks shown serve {:.1}% of users; {:.1}% of user pairs are not examined.</tspan></text>"#,
        TOP + GRID + 24.0,
        covered * 100.0,
        (1.0 - covered * covered) * 100.0
    );
    svg.push_str("</svg>\n");
    svg
}
