//! Deterministic SVG figures of sample realizations.
//!
//! Each realization gets its own panel: region boundary, the path polyline
//! from the oracle, the start marker, and a caption with its case label.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::case::CaseLabel;
use crate::disk::{DiskState, DiskStrategy};
use crate::error::Result;
use crate::geom::{rad, Point};
use crate::montecarlo::{realization_for, SampledRealization, State};
use crate::oracle::PathStrategy;
use crate::strip::{normalize_state, Strategy2};
use crate::zalgaller::build_zalgaller;

const PANEL: f64 = 240.0;
const MARGIN: f64 = 16.0;
const CAPTION: f64 = 34.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    Strip,
    Disk,
    /// No region drawn; used for the bare Zalgaller path.
    Free,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    pub frame: Frame,
    pub path: Vec<Point>,
    pub caption: String,
    pub case: Option<CaseLabel>,
}

impl Panel {
    pub fn from_realization(s: &SampledRealization, caption: String) -> Self {
        Self {
            frame: match s.state {
                State::Strip(_) => Frame::Strip,
                State::Disk(_) => Frame::Disk,
            },
            path: s.realization.vertices.clone(),
            caption,
            case: s.case,
        }
    }
}

struct View {
    x0: f64,
    y0: f64,
    scale: f64,
    /// World box, `(xmin, ymin, xmax, ymax)`.
    bbox: (f64, f64, f64, f64),
}

impl View {
    fn fit(panel: &Panel, x0: f64, y0: f64) -> Self {
        let (mut xmin, mut ymin, mut xmax, mut ymax) = match panel.frame {
            Frame::Strip => (0.0, 0.0, 1.0, 0.0),
            Frame::Disk => (-1.0, -1.0, 1.0, 1.0),
            Frame::Free => (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY),
        };
        for p in &panel.path {
            xmin = xmin.min(p.x);
            xmax = xmax.max(p.x);
            ymin = ymin.min(p.y);
            ymax = ymax.max(p.y);
        }
        let pad = 0.08 * (xmax - xmin).max(ymax - ymin).max(1e-9);
        let bbox = (xmin - pad, ymin - pad, xmax + pad, ymax + pad);
        let inner = PANEL - 2.0 * MARGIN;
        let scale = inner / (bbox.2 - bbox.0).max(bbox.3 - bbox.1);
        Self { x0, y0, scale, bbox }
    }

    fn map(&self, p: Point) -> (f64, f64) {
        let inner = PANEL - 2.0 * MARGIN;
        let w = (self.bbox.2 - self.bbox.0) * self.scale;
        let h = (self.bbox.3 - self.bbox.1) * self.scale;
        let ox = self.x0 + MARGIN + 0.5 * (inner - w);
        let oy = self.y0 + MARGIN + 0.5 * (inner - h);
        // SVG y grows downwards.
        (ox + (p.x - self.bbox.0) * self.scale, oy + (self.bbox.3 - p.y) * self.scale)
    }
}

fn draw_panel(out: &mut String, panel: &Panel, index: usize) {
    let x0 = index as f64 * PANEL;
    let view = View::fit(panel, x0, 0.0);
    let color = COLORS[index % COLORS.len()];
    match panel.frame {
        Frame::Strip => {
            for xs in [0.0, 1.0] {
                let (a, b) = (view.map(Point::new(xs, view.bbox.1)), view.map(Point::new(xs, view.bbox.3)));
                let _ = writeln!(
                    out,
                    r##"  <line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="#444" stroke-width="1.5"/>"##,
                    a.0, a.1, b.0, b.1
                );
            }
        }
        Frame::Disk => {
            let (cx, cy) = view.map(Point::new(0.0, 0.0));
            let _ = writeln!(
                out,
                r##"  <circle cx="{cx:.3}" cy="{cy:.3}" r="{:.3}" fill="none" stroke="#444" stroke-width="1.5"/>"##,
                view.scale
            );
        }
        Frame::Free => {}
    }
    let pts: Vec<String> = panel
        .path
        .iter()
        .map(|&p| {
            let (x, y) = view.map(p);
            format!("{x:.3},{y:.3}")
        })
        .collect();
    let _ = writeln!(
        out,
        r#"  <polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
        pts.join(" ")
    );
    if let Some(&start) = panel.path.first() {
        let (x, y) = view.map(start);
        let _ = writeln!(out, r#"  <circle cx="{x:.3}" cy="{y:.3}" r="3.5" fill="{color}"/>"#);
    }
    let cx = x0 + 0.5 * PANEL;
    let _ = writeln!(
        out,
        r#"  <text x="{cx:.3}" y="{:.3}" text-anchor="middle" font-family="sans-serif" font-size="12">{}</text>"#,
        PANEL + 14.0,
        escape(&panel.caption)
    );
    if let Some(case) = panel.case {
        let _ = writeln!(
            out,
            r#"  <text x="{cx:.3}" y="{:.3}" text-anchor="middle" font-family="sans-serif" font-size="12" font-weight="bold">{case}</text>"#,
            PANEL + 29.0
        );
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Panels side by side, with a legend of the distinct case labels.
pub fn render(title: &str, panels: &[Panel]) -> String {
    let width = PANEL * panels.len().max(1) as f64;
    let height = PANEL + CAPTION + 22.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let _ = writeln!(out, "  <title>{}</title>", escape(title));
    let _ = writeln!(out, r#"  <rect width="100%" height="100%" fill="white"/>"#);
    for (i, p) in panels.iter().enumerate() {
        draw_panel(&mut out, p, i);
    }
    let labels = distinct_cases(panels);
    if !labels.is_empty() {
        let legend: Vec<String> = labels.iter().map(|c| c.to_string()).collect();
        let _ = writeln!(
            out,
            r#"  <text x="8" y="{:.3}" font-family="sans-serif" font-size="12">cases: {}</text>"#,
            height - 6.0,
            legend.join(", ")
        );
    }
    out.push_str("</svg>\n");
    out
}

pub fn distinct_cases(panels: &[Panel]) -> Vec<CaseLabel> {
    let mut labels: Vec<CaseLabel> = Vec::new();
    for c in panels.iter().filter_map(|p| p.case) {
        if !labels.contains(&c) {
            labels.push(c);
        }
    }
    labels
}

/// Strip realizations of one 2-segment strategy from `(x, θ°)` starts.
pub fn strip_panels(strat: Strategy2, starts: &[(f64, f64)]) -> Result<Vec<Panel>> {
    starts
        .iter()
        .map(|&(x, theta_deg)| {
            let state = normalize_state(x, rad(theta_deg))?;
            let s = realization_for(State::Strip(state), &PathStrategy::Strip2(strat))?;
            Ok(Panel::from_realization(&s, format!("x = {x}, θ = {theta_deg}°")))
        })
        .collect()
}

/// Disk realizations from `(x, θ°, α°)` triples sharing one `r`.
pub fn disk_panels(r: f64, samples: &[(f64, f64, f64)]) -> Result<Vec<Panel>> {
    samples
        .iter()
        .map(|&(x, theta_deg, alpha_deg)| {
            let mut theta = rad(theta_deg);
            if theta > PI {
                theta -= 2.0 * PI;
            }
            let state = DiskState::new(x, theta)?;
            let strat = DiskStrategy::new(r, rad(alpha_deg))?;
            let s = realization_for(State::Disk(state), &PathStrategy::Disk2(strat))?;
            Ok(Panel::from_realization(&s, format!("x = {x}, θ = {theta_deg}°, α = {alpha_deg}°")))
        })
        .collect()
}

pub const FIG2_STARTS: [(f64, f64); 4] = [(0.1, 80.0), (0.3, 160.0), (0.5, 50.0), (0.9, 140.0)];
pub const FIG6_SAMPLES: [(f64, f64, f64); 3] = [(0.1, 200.0, 110.0), (0.3, 80.0, 160.0), (0.5, 45.0, 20.0)];

pub fn figure2_panels() -> Result<Vec<Panel>> {
    strip_panels(Strategy2::new(1.043, rad(78.7))?, &FIG2_STARTS)
}

pub fn figure4_panels() -> Vec<Panel> {
    vec![Panel {
        frame: Frame::Free,
        path: build_zalgaller().polyline,
        caption: "Zalgaller path A-B-C-D-E".into(),
        case: None,
    }]
}

pub fn figure6_panels() -> Result<Vec<Panel>> {
    disk_panels(0.5, &FIG6_SAMPLES)
}

/// `fig` is 2, 4 or 6.
pub fn figure(fig: u32) -> Result<String> {
    match fig {
        2 => Ok(render("Strip, r = 1.043, α = 78.7°", &figure2_panels()?)),
        4 => Ok(render("Zalgaller's escape path", &figure4_panels())),
        6 => Ok(render("Disk, r = 0.5", &figure6_panels()?)),
        _ => Err(crate::error::EscapeError::Domain(format!("no figure {fig}; choose 2, 4 or 6"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn byte_identical() {
        assert_eq!(figure(2).unwrap(), figure(2).unwrap());
        assert!(figure(3).is_err());
    }

    #[test]
    fn well_formed() {
        for (f, n) in [(2, 4), (4, 1), (6, 3)] {
            let svg = figure(f).unwrap();
            assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
            assert_eq!(svg.matches("<polyline").count(), n);
        }
    }
}
