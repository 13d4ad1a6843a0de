//! SVG output of lifted patches.

use std::fmt::Write;

use crate::substitution::LiftedPatch;

#[derive(Clone, Debug, PartialEq)]
pub struct RenderOptions {
    /// Pixels per unit edge.
    pub scale: f64,
    pub stroke: String,
    pub stroke_width: f64,
    /// Fill per angle class `|j - i|`, cycled when shorter than `n/2`.
    pub colors: Vec<String>,
    /// Draw half tiles with reduced opacity.
    pub fade_halves: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            scale: 20.0,
            stroke: "#333333".into(),
            stroke_width: 0.6,
            colors: [
                "#f6d55c", "#3caea3", "#20639b", "#ed553b", "#8e7dbe", "#99c1b9",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect(),
            fade_halves: true,
        }
    }
}

impl RenderOptions {
    pub fn color(&self, class: usize) -> &str {
        if self.colors.is_empty() {
            return "none";
        }
        &self.colors[(class - 1) % self.colors.len()]
    }
}

/// An SVG 1.1 document with one polygon per tile, in tile order.
pub fn render_svg(patch: &LiftedPatch, opt: &RenderOptions) -> String {
    let s = opt.scale;
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for t in patch.iter() {
        for v in t.embedded_vertices() {
            for a in 0..2 {
                lo[a] = lo[a].min(v[a]);
                hi[a] = hi[a].max(v[a]);
            }
        }
    }
    if patch.is_empty() {
        lo = [0.0; 2];
        hi = [0.0; 2];
    }
    let pad = 1.0;
    let (w, h) = (
        (hi[0] - lo[0] + 2.0 * pad) * s,
        (hi[1] - lo[1] + 2.0 * pad) * s,
    );
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.2}" height="{h:.2}" viewBox="0 0 {w:.2} {h:.2}">"#
    );
    let _ = writeln!(
        out,
        r#"<g stroke="{}" stroke-width="{}" stroke-linejoin="round">"#,
        opt.stroke, opt.stroke_width
    );
    for (t, half) in &patch.tiles {
        let pts: Vec<String> = t
            .embedded_vertices()
            .iter()
            .map(|v| {
                let x = (v[0] - lo[0] + pad) * s;
                let y = (hi[1] - v[1] + pad) * s;
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let opacity = if *half && opt.fade_halves {
            r#" fill-opacity="0.4""#
        } else {
            ""
        };
        let _ = writeln!(
            out,
            r#"<polygon points="{}" fill="{}"{opacity}/>"#,
            pts.join(" "),
            opt.color(t.class())
        );
    }
    out.push_str("</g>\n</svg>\n");
    out
}
