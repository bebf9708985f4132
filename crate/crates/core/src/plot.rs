//! SVG line charts of rejection rate against `δ`.

use std::fmt::Write;

use crate::error::{HarError, Result};
use crate::lrv::LrvKind;
use crate::montecarlo::{CellResult, McReport};

const PANEL_W: f64 = 420.0;
const PANEL_H: f64 = 260.0;
const MARGIN_L: f64 = 50.0;
const MARGIN_R: f64 = 150.0;
const MARGIN_T: f64 = 30.0;
const MARGIN_B: f64 = 40.0;

const COLORS: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// One panel per (model, T) in report order, one line per estimator.
pub fn power_curves_svg(report: &McReport) -> Result<String> {
    let mut panels: Vec<(String, usize, Vec<&CellResult>)> = Vec::new();
    for cell in &report.cells {
        let label = cell.model.label();
        match panels.iter_mut().find(|(m, t, _)| *m == label && *t == cell.t) {
            Some(p) => p.2.push(cell),
            None => panels.push((label, cell.t, vec![cell])),
        }
    }
    if panels.is_empty() {
        return Err(HarError::InvalidInput("report has no cells".into()));
    }
    let width = MARGIN_L + PANEL_W + MARGIN_R;
    let panel_total = MARGIN_T + PANEL_H + MARGIN_B;
    let height = panel_total * panels.len() as f64;
    let mut svg = String::new();
    let w = |e: std::fmt::Error| HarError::Io(e.to_string());
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">"#
    )
    .map_err(w)?;
    writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#).map_err(w)?;
    for (i, (model, t, cells)) in panels.iter().enumerate() {
        let oy = i as f64 * panel_total + MARGIN_T;
        let ox = MARGIN_L;
        let mut deltas: Vec<f64> = cells.iter().map(|c| c.delta).collect();
        deltas.sort_by(f64::total_cmp);
        deltas.dedup();
        let (dmin, dmax) = (deltas[0], deltas[deltas.len() - 1]);
        let span = if dmax > dmin { dmax - dmin } else { 1.0 };
        let px = |d: f64| ox + (d - dmin) / span * PANEL_W;
        let py = |r: f64| oy + (1.0 - r) * PANEL_H;

        writeln!(
            svg,
            r#"<text x="{}" y="{}" font-weight="bold">{}, T = {t}</text>"#,
            ox,
            oy - 10.0,
            escape(model)
        )
        .map_err(w)?;
        writeln!(
            svg,
            r##"<rect x="{ox}" y="{oy}" width="{PANEL_W}" height="{PANEL_H}" fill="none" stroke="#333"/>"##
        )
        .map_err(w)?;
        for k in 0..=4 {
            let r = k as f64 / 4.0;
            writeln!(
                svg,
                r##"<line x1="{ox}" y1="{y}" x2="{x2}" y2="{y}" stroke="#ddd"/><text x="{tx}" y="{ty}" text-anchor="end">{r:.2}</text>"##,
                y = py(r),
                x2 = ox + PANEL_W,
                tx = ox - 6.0,
                ty = py(r) + 4.0
            )
            .map_err(w)?;
        }
        for d in &deltas {
            writeln!(
                svg,
                r#"<text x="{x}" y="{y}" text-anchor="middle">{d}</text>"#,
                x = px(*d),
                y = oy + PANEL_H + 16.0
            )
            .map_err(w)?;
        }
        writeln!(
            svg,
            r#"<text x="{x}" y="{y}" text-anchor="middle">δ</text>"#,
            x = ox + PANEL_W / 2.0,
            y = oy + PANEL_H + 32.0
        )
        .map_err(w)?;
        let alpha = report.config.alpha;
        writeln!(
            svg,
            r##"<line x1="{ox}" y1="{y}" x2="{x2}" y2="{y}" stroke="#999" stroke-dasharray="4 3"/>"##,
            y = py(alpha),
            x2 = ox + PANEL_W
        )
        .map_err(w)?;

        let mut kinds: Vec<LrvKind> = Vec::new();
        for c in cells {
            if !kinds.contains(&c.estimator) {
                kinds.push(c.estimator);
            }
        }
        for (e, kind) in kinds.iter().enumerate() {
            let color = COLORS[e % COLORS.len()];
            let mut pts: Vec<(f64, f64)> = cells
                .iter()
                .filter(|c| c.estimator == *kind && c.rate.is_finite())
                .map(|c| (c.delta, c.rate))
                .collect();
            pts.sort_by(|a, b| a.0.total_cmp(&b.0));
            let path: Vec<String> = pts.iter().map(|(d, r)| format!("{:.2},{:.2}", px(*d), py(*r))).collect();
            writeln!(
                svg,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.8"/>"#,
                path.join(" ")
            )
            .map_err(w)?;
            for (d, r) in &pts {
                writeln!(svg, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}"/>"#, px(*d), py(*r)).map_err(w)?;
            }
            let ly = oy + 12.0 + 16.0 * e as f64;
            let lx = ox + PANEL_W + 12.0;
            writeln!(
                svg,
                r#"<line x1="{lx}" y1="{ly}" x2="{x2}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{tx}" y="{ty}">{}</text>"#,
                escape(kind.table_label()),
                x2 = lx + 18.0,
                tx = lx + 24.0,
                ty = ly + 4.0
            )
            .map_err(w)?;
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
