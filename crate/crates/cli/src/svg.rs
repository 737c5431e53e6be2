//! Deterministic SVG output: fixed sampling, fixed number formatting.

use crate::run::Files;
use crate::{Classify, Failure, RenderKind};
use serde_json::Value;
use std::fmt::Write;

const W: f64 = 640.0;
const H: f64 = 480.0;
const M: f64 = 56.0;

struct Frame {
    x: [f64; 2],
    y: [f64; 2],
}

impl Frame {
    fn fit(pts: impl Iterator<Item = [f64; 2]>, equal: bool) -> Frame {
        let (mut x, mut y) = ([f64::INFINITY, f64::NEG_INFINITY], [f64::INFINITY, f64::NEG_INFINITY]);
        for p in pts.filter(|p| p[0].is_finite() && p[1].is_finite()) {
            x = [x[0].min(p[0]), x[1].max(p[0])];
            y = [y[0].min(p[1]), y[1].max(p[1])];
        }
        let pad = |r: [f64; 2]| {
            if !(r[1] > r[0]) {
                let c = if r[0].is_finite() { r[0] } else { 0.0 };
                [c - 1.0, c + 1.0]
            } else {
                let d = 0.05 * (r[1] - r[0]);
                [r[0] - d, r[1] + d]
            }
        };
        let (mut x, mut y) = (pad(x), pad(y));
        if equal {
            let sx = (x[1] - x[0]) / (W - 2.0 * M);
            let sy = (y[1] - y[0]) / (H - 2.0 * M);
            let s = sx.max(sy);
            let (cx, cy) = (0.5 * (x[0] + x[1]), 0.5 * (y[0] + y[1]));
            x = [cx - 0.5 * s * (W - 2.0 * M), cx + 0.5 * s * (W - 2.0 * M)];
            y = [cy - 0.5 * s * (H - 2.0 * M), cy + 0.5 * s * (H - 2.0 * M)];
        }
        Frame { x, y }
    }

    fn px(&self, v: f64) -> f64 {
        M + (v - self.x[0]) / (self.x[1] - self.x[0]) * (W - 2.0 * M)
    }

    fn py(&self, v: f64) -> f64 {
        H - M - (v - self.y[0]) / (self.y[1] - self.y[0]) * (H - 2.0 * M)
    }

    fn open(&self, title: &str, xlabel: &str, ylabel: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="11">"#);
        let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
        let _ = writeln!(s, r#"<text x="{:.1}" y="20" text-anchor="middle" font-size="13">{title}</text>"#, W / 2.0);
        let (l, r, t, b) = (M, W - M, M, H - M);
        let _ = writeln!(s, r#"<path d="M{l:.1},{t:.1} L{l:.1},{b:.1} L{r:.1},{b:.1}" stroke="black" fill="none"/>"#);
        for k in 0..=4 {
            let f = k as f64 / 4.0;
            let xv = self.x[0] + f * (self.x[1] - self.x[0]);
            let yv = self.y[0] + f * (self.y[1] - self.y[0]);
            let (xp, yp) = (self.px(xv), self.py(yv));
            let _ = writeln!(s, r#"<line x1="{xp:.1}" y1="{b:.1}" x2="{xp:.1}" y2="{:.1}" stroke="black"/>"#, b + 4.0);
            let _ = writeln!(s, r#"<text x="{xp:.1}" y="{:.1}" text-anchor="middle">{xv:.2}</text>"#, b + 16.0);
            let _ = writeln!(s, r#"<line x1="{:.1}" y1="{yp:.1}" x2="{l:.1}" y2="{yp:.1}" stroke="black"/>"#, l - 4.0);
            let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{yv:.2}</text>"#, l - 6.0, yp + 4.0);
        }
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{xlabel}</text>"#, W / 2.0, H - 12.0);
        let _ = writeln!(s, r#"<text x="14" y="{:.1}" text-anchor="middle" transform="rotate(-90 14 {:.1})">{ylabel}</text>"#, H / 2.0, H / 2.0);
        s
    }

    fn polyline(&self, s: &mut String, pts: &[[f64; 2]], stroke: &str, width: f64) {
        if pts.is_empty() {
            return;
        }
        let mut d = String::new();
        for (i, p) in pts.iter().enumerate() {
            let _ = write!(d, "{}{:.2},{:.2} ", if i == 0 { "M" } else { "L" }, self.px(p[0]), self.py(p[1]));
        }
        let _ = writeln!(s, r#"<path d="{}" stroke="{stroke}" stroke-width="{width}" fill="none"/>"#, d.trim_end());
    }
}

fn close(mut s: String) -> String {
    s.push_str("</svg>\n");
    s
}

fn empty() -> Failure {
    Failure::Config(anyhow::anyhow!("empty artifact"))
}

fn floats(v: &Value) -> Option<Vec<f64>> {
    v.as_array()?.iter().map(|x| x.as_f64().or(Some(f64::NAN))).collect()
}

fn triple(v: &Value) -> Option<[f64; 3]> {
    let f = floats(v)?;
    (f.len() == 3).then(|| [f[0], f[1], f[2]])
}

/// Isometric view of `(x, y, t)`.
fn iso(p: [f64; 3]) -> [f64; 2] {
    let (c, s) = (std::f64::consts::FRAC_PI_6.cos(), std::f64::consts::FRAC_PI_6.sin());
    [(p[0] - p[1]) * c, p[2] + (p[0] + p[1]) * s]
}

fn rules(v: &Value) -> Result<Vec<([f64; 3], [f64; 3])>, Failure> {
    let arr = v.get("rules").and_then(Value::as_array).ok_or_else(empty)?;
    let out: Vec<_> = arr.iter().filter_map(|r| Some((triple(r.get("a")?)?, triple(r.get("b")?)?))).collect();
    if out.is_empty() {
        return Err(empty());
    }
    Ok(out)
}

fn heatmap(v: &Value) -> Result<String, Failure> {
    let f = v.get("access_field").ok_or_else(empty)?;
    let n = f.get("n").and_then(Value::as_u64).ok_or_else(empty)? as usize;
    let vals = f.get("values").and_then(floats).ok_or_else(empty)?;
    if n == 0 || vals.len() != n * n {
        return Err(empty());
    }
    let tau = std::f64::consts::TAU;
    let fr = Frame { x: [0.0, tau], y: [0.0, tau] };
    let mut s = fr.open("access field F(θ₀, θ)", "θ", "θ₀");
    let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    let cw = (W - 2.0 * M) / n as f64;
    let ch = (H - 2.0 * M) / n as f64;
    for i in 0..n {
        for j in 0..n {
            let v = vals[i * n + j] / scale;
            let a = (v.abs().powf(0.35) * 255.0).round().clamp(0.0, 255.0) as u8;
            let c = 255 - a;
            let (r, g, b) = if v >= 0.0 { (255, c, c) } else { (c, c, 255) };
            let _ = writeln!(
                s,
                r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="#{r:02x}{g:02x}{b:02x}"/>"##,
                M + j as f64 * cw,
                H - M - (i + 1) as f64 * ch,
                cw + 0.05,
                ch + 0.05
            );
        }
    }
    Ok(close(s))
}

fn phi_plot(v: &Value) -> Result<String, Failure> {
    let samples = v.get("samples").and_then(Value::as_array).ok_or_else(empty)?;
    let pts: Vec<[f64; 2]> = samples
        .iter()
        .filter_map(|x| Some([x.get("t")?.as_f64()?, x.get("phi")?.as_f64()?]))
        .collect();
    if pts.is_empty() {
        return Err(empty());
    }
    let fr = Frame::fit(pts.iter().copied(), false);
    let title = format!("φ against θ₀ ({})", v.get("status").and_then(Value::as_str).unwrap_or("?"));
    let mut s = fr.open(&title, "θ₀", "φ");
    fr.polyline(&mut s, &pts, "#1f4e9c", 1.6);
    if let Some(t) = v.get("t_star").and_then(Value::as_f64) {
        let x = fr.px(t);
        let _ = writeln!(s, r##"<line x1="{x:.2}" y1="{M:.1}" x2="{x:.2}" y2="{:.1}" stroke="#c0392b" stroke-dasharray="4 3"/>"##, H - M);
    }
    Ok(close(s))
}

fn rules_xy(v: &Value) -> Result<String, Failure> {
    let rs = rules(v)?;
    let fr = Frame::fit(rs.iter().flat_map(|(a, b)| [[a[0], a[1]], [b[0], b[1]]]), true);
    let mut s = fr.open("rules projected to the xy-plane", "x", "y");
    for (a, b) in &rs {
        fr.polyline(&mut s, &[[a[0], a[1]], [b[0], b[1]]], "#1f4e9c", 0.8);
    }
    Ok(close(s))
}

fn rules_3d(v: &Value) -> Result<String, Failure> {
    let rs = rules(v)?;
    let fr = Frame::fit(rs.iter().flat_map(|(a, b)| [iso(*a), iso(*b)]), true);
    let mut s = fr.open("rules, isometric view", "", "");
    for (a, b) in &rs {
        fr.polyline(&mut s, &[iso(*a), iso(*b)], "#1f4e9c", 0.8);
    }
    Ok(close(s))
}

fn mesh(v: &Value) -> Result<String, Failure> {
    let m = v.get("mesh").ok_or_else(empty)?;
    let verts: Vec<[f64; 3]> = m
        .get("vertices")
        .and_then(Value::as_array)
        .ok_or_else(empty)?
        .iter()
        .filter_map(triple)
        .collect();
    let faces: Vec<Vec<usize>> = m
        .get("faces")
        .and_then(Value::as_array)
        .ok_or_else(empty)?
        .iter()
        .filter_map(|f| f.as_array()?.iter().map(|i| i.as_u64().map(|i| i as usize)).collect())
        .collect();
    if verts.is_empty() || faces.is_empty() {
        return Err(empty());
    }
    let fr = Frame::fit(verts.iter().map(|p| iso(*p)), true);
    let mut s = fr.open("mesh, isometric view", "", "");
    for f in &faces {
        let mut ring: Vec<[f64; 2]> = f.iter().filter_map(|&i| verts.get(i)).map(|p| iso(*p)).collect();
        if let Some(&first) = ring.first() {
            ring.push(first);
        }
        fr.polyline(&mut s, &ring, "#555555", 0.4);
    }
    Ok(close(s))
}

pub fn render(kind: RenderKind, text: &str) -> Result<Files, Failure> {
    let v: Value = serde_json::from_str(text).config()?;
    let (name, body) = match kind {
        RenderKind::AccessHeatmap => ("access_heatmap.svg", heatmap(&v)?),
        RenderKind::PhiPlot => ("phi_plot.svg", phi_plot(&v)?),
        RenderKind::RulesXy => ("rules_xy.svg", rules_xy(&v)?),
        RenderKind::Rules3dProjection => ("rules_3d_projection.svg", rules_3d(&v)?),
        RenderKind::Mesh => ("mesh.svg", mesh(&v)?),
    };
    Ok(vec![(name.into(), body)])
}
