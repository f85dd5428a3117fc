//! Boxplot grids of simulation results as static SVG 1.1.
//!
//! One grid per `ρ_x`: panel rows follow `ρ²`, panel columns follow `p`.
//! Inside a panel the boxes are grouped by `n`, each group holding the
//! S, U and B estimators; a dashed line marks the population PIR.

use std::fmt::Write;

use pir_core::simulation::{BoxplotStats, Estimator, SimulationResult};

use crate::error::Result;

const PANEL_W: f64 = 300.0;
const PANEL_H: f64 = 230.0;
const LEFT: f64 = 48.0;
const TOP: f64 = 28.0;
const PLOT_W: f64 = 240.0;
const PLOT_H: f64 = 160.0;
const BOX_W: f64 = 14.0;
const GRID_TITLE_H: f64 = 30.0;

const COLORS: [&str; 3] = ["#4c72b0", "#55a868", "#c44e52"];

fn distinct(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for v in values {
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

fn fmt(v: f64) -> String {
    crate::output::round(v, 2)
}

/// Renders the whole result; rows, columns and groups keep spec order.
pub fn boxplot_grid(result: &SimulationResult) -> Result<String> {
    let spec = &result.spec;
    let rho_xs = &spec.rho_x_values;
    let cols = spec.p_values.len() as f64;
    let rows = spec.rho2_values.len() as f64;
    let grid_h = GRID_TITLE_H + rows * PANEL_H;
    let width = cols * PANEL_W;
    let height = rho_xs.len() as f64 * grid_h;

    let mut s = String::new();
    writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="11">"#,
        w = fmt(width),
        h = fmt(height)
    )
    .unwrap();
    writeln!(s, r#"<rect x="0" y="0" width="{}" height="{}" fill="white"/>"#, fmt(width), fmt(height)).unwrap();

    for (g, &rho_x) in rho_xs.iter().enumerate() {
        let gy = g as f64 * grid_h;
        writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle" font-size="14">ρ_x = {}, {} replications</text>"#,
            fmt(width / 2.0),
            fmt(gy + 20.0),
            rho_x,
            spec.replications
        )
        .unwrap();
        for (r, &rho2) in spec.rho2_values.iter().enumerate() {
            for (c, &p) in spec.p_values.iter().enumerate() {
                let x0 = c as f64 * PANEL_W;
                let y0 = gy + GRID_TITLE_H + r as f64 * PANEL_H;
                panel(&mut s, result, x0, y0, p, rho2, rho_x)?;
            }
        }
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn panel(s: &mut String, result: &SimulationResult, x0: f64, y0: f64, p: usize, rho2: f64, rho_x: f64) -> Result<()> {
    let ns = distinct(result.spec.n_values.iter().map(|&n| n as f64));
    let mut stats: Vec<(f64, [BoxplotStats; 3])> = Vec::new();
    let mut pir = 0.0;
    for &n in &ns {
        let Some(cell) = result.find(n as usize, p, rho2, rho_x) else { continue };
        pir = cell.population_pir;
        let mut three = [None; 3];
        for (k, e) in Estimator::ALL.into_iter().enumerate() {
            three[k] = Some(cell.summary(e)?);
        }
        stats.push((n, three.map(|b| b.expect("filled above"))));
    }

    let (mut lo, mut hi) = (pir, pir);
    for b in stats.iter().flat_map(|(_, t)| t) {
        lo = lo.min(b.min);
        hi = hi.max(b.max);
    }
    let pad = ((hi - lo) * 0.05).max(1e-3);
    let (lo, hi) = (lo - pad, hi + pad);
    let px = x0 + LEFT;
    let py = y0 + TOP;
    let ymap = |v: f64| py + PLOT_H * (hi - v) / (hi - lo);

    writeln!(s, r#"<g>"#).unwrap();
    writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="12">p = {p}, ρ² = {rho2}</text>"#,
        fmt(px + PLOT_W / 2.0),
        fmt(y0 + 18.0)
    )
    .unwrap();
    writeln!(
        s,
        r##"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#888"/>"##,
        fmt(px),
        fmt(py),
        fmt(PLOT_W),
        fmt(PLOT_H)
    )
    .unwrap();
    for k in 0..=4 {
        let v = lo + (hi - lo) * k as f64 / 4.0;
        let y = ymap(v);
        writeln!(s, r##"<line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="#888"/>"##, fmt(px - 4.0), fmt(px), y = fmt(y)).unwrap();
        writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#, fmt(px - 6.0), fmt(y + 4.0), fmt(v)).unwrap();
    }

    let group_w = PLOT_W / stats.len().max(1) as f64;
    for (gi, (n, three)) in stats.iter().enumerate() {
        let gx = px + gi as f64 * group_w;
        for (k, b) in three.iter().enumerate() {
            let cx = gx + group_w * (k as f64 + 1.0) / 4.0;
            let color = COLORS[k];
            writeln!(
                s,
                r#"<line x1="{x}" y1="{}" x2="{x}" y2="{}" stroke="{color}"/>"#,
                fmt(ymap(b.max)),
                fmt(ymap(b.min)),
                x = fmt(cx)
            )
            .unwrap();
            for w in [b.min, b.max] {
                writeln!(
                    s,
                    r#"<line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="{color}"/>"#,
                    fmt(cx - BOX_W / 4.0),
                    fmt(cx + BOX_W / 4.0),
                    y = fmt(ymap(w))
                )
                .unwrap();
            }
            writeln!(
                s,
                r#"<rect x="{}" y="{}" width="{}" height="{}" fill="white" stroke="{color}"/>"#,
                fmt(cx - BOX_W / 2.0),
                fmt(ymap(b.q3)),
                fmt(BOX_W),
                fmt((ymap(b.q1) - ymap(b.q3)).max(0.0))
            )
            .unwrap();
            writeln!(
                s,
                r#"<line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="{color}" stroke-width="2"/>"#,
                fmt(cx - BOX_W / 2.0),
                fmt(cx + BOX_W / 2.0),
                y = fmt(ymap(b.median))
            )
            .unwrap();
            writeln!(
                s,
                r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
                fmt(cx),
                fmt(py + PLOT_H + 13.0),
                Estimator::ALL[k].label()
            )
            .unwrap();
        }
        writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">n = {}</text>"#,
            fmt(gx + group_w / 2.0),
            fmt(py + PLOT_H + 27.0),
            n
        )
        .unwrap();
    }
    writeln!(
        s,
        r##"<line class="population-pir" x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="#000" stroke-dasharray="4 3"/>"##,
        fmt(px),
        fmt(px + PLOT_W),
        y = fmt(ymap(pir))
    )
    .unwrap();
    writeln!(s, "</g>").unwrap();
    Ok(())
}
