//! Picard iteration `φₙ(t) = x₀ + ∫₀ᵗ X(φₙ₋₁(s)) ds` and an RK4 cross-check.

use super::{norm, FlowError, PlanarField};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt::Write;

#[derive(Clone, Debug)]
pub struct PicardOptions {
    pub t_max: f64,
    /// Quadrature intervals on `[0, t_max]`, rounded up to even.
    pub intervals: usize,
    pub max_iter: usize,
    /// Stop once `sup |φₙ − φₙ₋₁| ≤ tol`.
    pub tol: f64,
}

impl Default for PicardOptions {
    fn default() -> Self {
        PicardOptions { t_max: 1.0, intervals: 2048, max_iter: 400, tol: 1e-10 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IntegralCurve {
    pub t: Vec<f64>,
    pub pts: Vec<[f64; 2]>,
    pub iterations: usize,
    /// Final `sup |φₙ − φₙ₋₁|`; zero for RK4 curves.
    pub residual: f64,
    pub converged: bool,
    /// The curve left the domain and was cut at the last interior sample.
    pub truncated: bool,
}

impl IntegralCurve {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,x,y,residual\n");
        for (t, p) in self.t.iter().zip(&self.pts) {
            let _ = writeln!(out, "{},{},{},{}", t, p[0], p[1], self.residual);
        }
        out
    }

    /// Largest excess of `|φ(tᵢ) − φ(tⱼ)|` over `m |tᵢ − tⱼ|` for consecutive
    /// samples and for each sample against the start.
    pub fn lipschitz_excess(&self, m: f64) -> f64 {
        let mut worst = f64::NEG_INFINITY;
        let mut check = |i: usize, j: usize| {
            let d = norm([self.pts[i][0] - self.pts[j][0], self.pts[i][1] - self.pts[j][1]]);
            worst = worst.max(d - m * (self.t[i] - self.t[j]).abs());
        };
        for i in 1..self.t.len() {
            check(i, i - 1);
            check(i, 0);
        }
        worst
    }

    fn cut(&mut self, field: &PlanarField) {
        let k = self
            .pts
            .iter()
            .position(|p| !(p[0].is_finite() && p[1].is_finite() && field.contains(p[0], p[1])))
            .unwrap_or(self.pts.len());
        if k < self.pts.len() {
            self.pts.truncate(k);
            self.t.truncate(k);
            self.truncated = true;
        }
    }
}

fn check_start(field: &PlanarField, x0: [f64; 2]) -> Result<(), FlowError> {
    let [a, b, c, d] = field.domain;
    if !(x0[0] > a && x0[0] < b && x0[1] > c && x0[1] < d) {
        return Err(FlowError::Start(x0[0], x0[1]));
    }
    Ok(())
}

/// Picard iteration from the constant curve `x₀`, integrated by cumulative
/// Simpson (the `(5, 8, −1)/12` rule on odd nodes).
///
/// Intermediate iterates are evaluated with positions clamped to the domain;
/// the converged curve is cut at its first exit. Since the integral map is
/// causal, the part before the exit is unaffected by the clamping.
pub fn picard(field: &PlanarField, x0: [f64; 2], opts: &PicardOptions) -> Result<IntegralCurve, FlowError> {
    check_start(field, x0)?;
    if !(opts.t_max > 0.0) {
        return Err(FlowError::Invalid(format!("t_max must be positive, got {}", opts.t_max)));
    }
    let n = (opts.intervals.max(2) + 1) & !1;
    let h = opts.t_max / n as f64;
    let [xa, xb, ya, yb] = field.domain;
    let mut phi = vec![x0; n + 1];
    let mut g = vec![[0.0; 2]; n + 1];
    let mut next = vec![[0.0; 2]; n + 1];
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    while iterations < opts.max_iter {
        iterations += 1;
        g.par_iter_mut()
            .zip(phi.par_iter())
            .for_each(|(gi, p)| *gi = field.eval(p[0].clamp(xa, xb), p[1].clamp(ya, yb)));
        next[0] = x0;
        for i in 1..=n {
            let inc = if i % 2 == 0 {
                let (a, b, c) = (g[i - 2], g[i - 1], g[i]);
                let base = next[i - 2];
                [
                    base[0] + h / 3.0 * (a[0] + 4.0 * b[0] + c[0]),
                    base[1] + h / 3.0 * (a[1] + 4.0 * b[1] + c[1]),
                ]
            } else {
                let (a, b, c) = (g[i - 1], g[i], g[i + 1]);
                let base = next[i - 1];
                [
                    base[0] + h / 12.0 * (5.0 * a[0] + 8.0 * b[0] - c[0]),
                    base[1] + h / 12.0 * (5.0 * a[1] + 8.0 * b[1] - c[1]),
                ]
            };
            next[i] = inc;
        }
        residual = 0.0;
        for (p, q) in next.iter().zip(&phi) {
            let d = norm([p[0] - q[0], p[1] - q[1]]);
            if !d.is_finite() {
                break;
            }
            residual = f64::max(residual, d);
        }
        std::mem::swap(&mut phi, &mut next);
        if residual <= opts.tol {
            break;
        }
    }
    let mut curve = IntegralCurve {
        t: (0..=n).map(|i| h * i as f64).collect(),
        pts: phi,
        iterations,
        residual,
        converged: residual <= opts.tol,
        truncated: false,
    };
    curve.cut(field);
    Ok(curve)
}

/// Classical RK4 with `n` steps on `[0, t_max]`, for smooth fields only.
pub fn rk4(field: &PlanarField, x0: [f64; 2], t_max: f64, n: usize) -> Result<IntegralCurve, FlowError> {
    check_start(field, x0)?;
    let n = n.max(1);
    let h = t_max / n as f64;
    let mut pts = Vec::with_capacity(n + 1);
    let mut p = x0;
    pts.push(p);
    let add = |p: [f64; 2], k: [f64; 2], s: f64| [p[0] + s * k[0], p[1] + s * k[1]];
    for _ in 0..n {
        let k1 = field.eval(p[0], p[1]);
        let q = add(p, k1, 0.5 * h);
        let k2 = field.eval(q[0], q[1]);
        let q = add(p, k2, 0.5 * h);
        let k3 = field.eval(q[0], q[1]);
        let q = add(p, k3, h);
        let k4 = field.eval(q[0], q[1]);
        p = [
            p[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            p[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ];
        pts.push(p);
        if !field.contains(p[0], p[1]) {
            break;
        }
    }
    let mut curve = IntegralCurve {
        t: (0..pts.len()).map(|i| h * i as f64).collect(),
        pts,
        iterations: 0,
        residual: 0.0,
        converged: true,
        truncated: false,
    };
    curve.cut(field);
    Ok(curve)
}

/// Largest distance from the samples to the chord through the endpoints,
/// over the chord length.
pub fn straightness(pts: &[[f64; 2]]) -> Result<f64, FlowError> {
    if pts.len() < 3 {
        return Err(FlowError::Degenerate(format!("{} samples, need at least 3", pts.len())));
    }
    let (a, b) = (pts[0], pts[pts.len() - 1]);
    let v = [b[0] - a[0], b[1] - a[1]];
    let len = norm(v);
    if !(len > 0.0) {
        return Err(FlowError::Degenerate("zero-length chord".into()));
    }
    let worst = pts
        .iter()
        .map(|p| ((p[0] - a[0]) * v[1] - (p[1] - a[1]) * v[0]).abs() / len)
        .fold(0.0, f64::max);
    Ok(worst / len)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, TAU};

    const BOX: [f64; 4] = [-2.0, 2.0, -2.0, 2.0];

    #[test]
    fn constant_field_is_a_line() {
        let f = PlanarField::from_exprs("1", "0", BOX).unwrap();
        let c = picard(&f, [0.0, 0.0], &PicardOptions { t_max: 1.5, ..Default::default() }).unwrap();
        assert!(c.converged && !c.truncated);
        for (t, p) in c.t.iter().zip(&c.pts) {
            assert!((p[0] - t).abs() < 1e-14 && p[1] == 0.0);
        }
        assert!(straightness(&c.pts).unwrap() <= 1e-12);
    }

    #[test]
    fn rotation_matches_circle() {
        let f = PlanarField::from_exprs("-y", "x", BOX).unwrap();
        let c = picard(&f, [1.0, 0.0], &PicardOptions { t_max: TAU, ..Default::default() }).unwrap();
        assert!(c.converged, "{}", c.residual);
        let err = c.t.iter().zip(&c.pts).map(|(t, p)| (p[0] - t.cos()).hypot(p[1] - t.sin())).fold(0.0, f64::max);
        assert!(err <= 1e-6, "{err}");
        assert!(c.lipschitz_excess(f.sup_norm()) <= 1e-10);
        let r = rk4(&f, [1.0, 0.0], TAU, 2000).unwrap();
        let last = r.pts.last().unwrap();
        assert!((last[0] - 1.0).abs() < 1e-9 && last[1].abs() < 1e-9);
    }

    #[test]
    fn exit_truncates() {
        let f = PlanarField::from_exprs("1", "0", [-1.0, 1.0, -1.0, 1.0]).unwrap();
        let c = picard(&f, [0.0, 0.0], &PicardOptions { t_max: 3.0, ..Default::default() }).unwrap();
        assert!(c.truncated);
        assert!(c.pts.iter().all(|p| p[0] <= 1.0));
        assert!(c.t.last().unwrap() <= &1.0);
        assert!(matches!(picard(&f, [1.0, 0.0], &PicardOptions::default()), Err(FlowError::Start(..))));
    }

    #[test]
    fn straightness_oracles() {
        assert_eq!(straightness(&[[0.0, 0.0], [0.5, 0.5], [1.0, 1.0]]).unwrap(), 0.0);
        let arc: Vec<[f64; 2]> = (0..=200).map(|k| {
            let a = 0.5 * std::f64::consts::PI * k as f64 / 200.0;
            [a.cos(), a.sin()]
        }).collect();
        let want = (1.0 - FRAC_PI_4.cos()) / (2.0 * FRAC_PI_4.sin());
        assert!((straightness(&arc).unwrap() - want).abs() < 1e-14);
        assert!(straightness(&[[0.0, 0.0], [1.0, 0.0]]).is_err());
        assert!(straightness(&[[1.0, 1.0], [2.0, 0.0], [1.0, 1.0]]).is_err());
    }

    #[test]
    fn csv_header() {
        let f = PlanarField::from_exprs("1", "0", BOX).unwrap();
        let c = picard(&f, [0.0, 0.0], &PicardOptions { t_max: 0.5, intervals: 4, ..Default::default() }).unwrap();
        let s = c.to_csv();
        assert!(s.starts_with("t,x,y,residual\n"));
        assert_eq!(s.lines().count(), 6);
    }
}
