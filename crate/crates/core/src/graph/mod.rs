//! Graphs `t = u(x, y)`: horizontal Gauss map, characteristic points,
//! H-mean curvature, the horizontal-area energy and its variations.
//!
//! Convention: `p = u_x + y/2`, `q = u_y − x/2`.

mod glue;

pub use glue::{glue_check, glue_defect, GlueReport, InterfaceCurve};

use crate::dual::Dual;
use crate::expr::{Expr, ExprError};
use crate::quadrature::{halton2, integrate_rect, integrate_rect_richardson, Bump};
use crate::real::Real;
use crate::spline::{BicubicGrid, Jet2};
use crate::tol::Tolerances;
use nalgebra::{Matrix2, Vector2};
use rayon::prelude::*;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("point ({x}, {y}) is outside the domain")]
    OutsideDomain { x: f64, y: f64 },
    #[error("point ({x}, {y}) is characteristic")]
    Characteristic { x: f64, y: f64 },
    #[error("resolution {0} is below the minimum of 16 per axis")]
    Resolution(usize),
    #[error("test function support [{0:?}] meets the characteristic set or leaves the domain")]
    SupportNotClear([f64; 4]),
    #[error("height field: {0}")]
    Field(String),
}

/// A height function with two derivatives.
pub trait HeightField: Send + Sync {
    /// `(u, ux, uy, uxx, uxy, uyy)`.
    fn jet(&self, x: f64, y: f64) -> Result<Jet2, GraphError>;

    /// `(u, ux, uy)`.
    fn grad(&self, x: f64, y: f64) -> Result<[f64; 3], GraphError> {
        let j = self.jet(x, y)?;
        Ok([j[0], j[1], j[2]])
    }

    /// Membership beyond the patch rectangle and mask.
    fn contains(&self, _x: f64, _y: f64) -> bool {
        true
    }
}

#[derive(Clone)]
pub enum Field {
    Expr(Expr),
    Grid(BicubicGrid),
    Custom(Arc<dyn HeightField>),
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Expr(e) => write!(f, "Expr({e})"),
            Field::Grid(g) => write!(f, "Grid({}x{})", g.nx, g.ny),
            Field::Custom(_) => write!(f, "Custom"),
        }
    }
}

impl Field {
    pub fn jet(&self, x: f64, y: f64) -> Result<Jet2, GraphError> {
        match self {
            Field::Expr(e) => {
                let (f, g, h) = e.hessian(&[x, y])?;
                Ok([f, g[0], g[1], h[0], h[1], h[3]])
            }
            Field::Grid(g) => Ok(g.jet(x, y)),
            Field::Custom(c) => c.jet(x, y),
        }
    }

    /// `(u, ux, uy)`, cheaper than a full jet for expressions.
    pub fn grad(&self, x: f64, y: f64) -> Result<[f64; 3], GraphError> {
        match self {
            Field::Expr(e) => {
                let (f, fx, fy, _) = e.jet2(&[x, y], &[1.0, 0.0], &[0.0, 1.0])?;
                Ok([f, fx, fy])
            }
            Field::Grid(g) => {
                let j = g.jet(x, y);
                Ok([j[0], j[1], j[2]])
            }
            Field::Custom(c) => c.grad(x, y),
        }
    }
}

/// Unnormalized and unit horizontal Gauss map at a point.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct GaussData {
    pub p: f64,
    pub q: f64,
    pub mag: f64,
    /// `None` marks a characteristic point.
    pub nu: Option<[f64; 2]>,
}

impl GaussData {
    pub fn from_pq(p: f64, q: f64, char_tol: f64) -> Self {
        let mag = p.hypot(q);
        let nu = if mag <= char_tol { None } else { Some([p / mag, q / mag]) };
        GaussData { p, q, mag, nu }
    }

    pub fn is_characteristic(&self) -> bool {
        self.nu.is_none()
    }
}

#[inline]
fn pq(x: f64, y: f64, ux: f64, uy: f64) -> (f64, f64) {
    (ux + 0.5 * y, uy - 0.5 * x)
}

/// Jacobian of `(p, q)` from a jet.
fn pq_jacobian(j: &Jet2) -> Matrix2<f64> {
    Matrix2::new(j[3], j[4] + 0.5, j[4] - 0.5, j[5])
}

#[derive(Clone, Debug)]
pub struct GraphPatch {
    pub u: Field,
    /// `[x0, x1, y0, y1]`.
    pub domain: [f64; 4],
    /// Points with `mask(x, y) ≥ 0` belong to the patch.
    pub mask: Option<Expr>,
    pub tol: Tolerances,
}

/// Result of [`GraphPatch::minimality_residual`].
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct MinimalityReport {
    pub strong: f64,
    pub weak: f64,
    pub points_used: usize,
    pub points_excluded: usize,
    pub bumps_used: usize,
    /// Observed `weak / strong`, when the strong residual is nonzero.
    pub weak_over_strong: Option<f64>,
}

impl GraphPatch {
    pub fn new(u: Field, domain: [f64; 4]) -> Self {
        GraphPatch { u, domain, mask: None, tol: Tolerances::default() }
    }

    pub fn from_expr(u: &str, domain: [f64; 4]) -> Result<Self, GraphError> {
        Ok(Self::new(Field::Expr(Expr::parse(u, &["x", "y"])?), domain))
    }

    pub fn with_mask(mut self, mask: &str) -> Result<Self, GraphError> {
        self.mask = Some(Expr::parse(mask, &["x", "y"])?);
        Ok(self)
    }

    pub fn with_tol(mut self, tol: Tolerances) -> Self {
        self.tol = tol;
        self
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        let [x0, x1, y0, y1] = self.domain;
        if !(x >= x0 && x <= x1 && y >= y0 && y <= y1) {
            return false;
        }
        if let Field::Custom(c) = &self.u {
            if !c.contains(x, y) {
                return false;
            }
        }
        match &self.mask {
            None => true,
            Some(m) => matches!(m.eval(&[x, y]), Ok(v) if v >= 0.0),
        }
    }

    fn check(&self, x: f64, y: f64) -> Result<(), GraphError> {
        if self.contains(x, y) {
            Ok(())
        } else {
            Err(GraphError::OutsideDomain { x, y })
        }
    }

    pub fn horizontal_gauss(&self, x: f64, y: f64) -> Result<GaussData, GraphError> {
        self.check(x, y)?;
        let [_, ux, uy] = self.u.grad(x, y)?;
        let (p, q) = pq(x, y, ux, uy);
        Ok(GaussData::from_pq(p, q, self.tol.char_tol))
    }

    /// `∂x p̄ + ∂y q̄`, by dual numbers on the normalized map for analytic
    /// fields and by fourth-order central differences for sampled grids.
    pub fn h_curvature(&self, x: f64, y: f64) -> Result<f64, GraphError> {
        self.check(x, y)?;
        match &self.u {
            Field::Grid(_) => self.h_curvature_fd(x, y),
            _ => {
                let j = self.u.jet(x, y)?;
                h_from_jet(x, y, &j, self.tol.char_tol)
            }
        }
    }

    fn h_curvature_fd(&self, x: f64, y: f64) -> Result<f64, GraphError> {
        let g = self.horizontal_gauss(x, y)?;
        if g.is_characteristic() {
            return Err(GraphError::Characteristic { x, y });
        }
        let size = (self.domain[1] - self.domain[0]).max(self.domain[3] - self.domain[2]);
        let h = 1e-4 * size;
        let nu = |x: f64, y: f64| -> Result<[f64; 2], GraphError> {
            let [_, ux, uy] = self.u.grad(x, y)?;
            let (p, q) = pq(x, y, ux, uy);
            let m = p.hypot(q);
            if m <= self.tol.char_tol {
                return Err(GraphError::Characteristic { x, y });
            }
            Ok([p / m, q / m])
        };
        let d4 = |f: &dyn Fn(f64) -> Result<f64, GraphError>| -> Result<f64, GraphError> {
            Ok((-f(2.0 * h)? + 8.0 * f(h)? - 8.0 * f(-h)? + f(-2.0 * h)?) / (12.0 * h))
        };
        let px = d4(&|d| Ok(nu(x + d, y)?[0]))?;
        let qy = d4(&|d| Ok(nu(x, y + d)?[1]))?;
        Ok(px + qy)
    }

    /// Node coordinates of an `n × n` grid over the domain.
    pub fn grid(&self, n: usize) -> Vec<[f64; 2]> {
        let [x0, x1, y0, y1] = self.domain;
        let n = n.max(2);
        let mut pts = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                let x = x0 + (x1 - x0) * i as f64 / (n - 1) as f64;
                let y = y0 + (y1 - y0) * j as f64 / (n - 1) as f64;
                pts.push([x, y]);
            }
        }
        pts
    }

    /// Characteristic points found on an `n × n` grid, each refined by a
    /// least-squares Newton iteration on `(p, q) = 0` and deduplicated.
    pub fn characteristic_scan(&self, n: usize) -> Vec<[f64; 2]> {
        let n = n.max(2);
        let pts = self.grid(n);
        let jets: Vec<Option<Jet2>> = pts
            .par_iter()
            .map(|&[x, y]| if self.contains(x, y) { self.u.jet(x, y).ok() } else { None })
            .collect();
        let [x0, x1, y0, y1] = self.domain;
        let (hx, hy) = ((x1 - x0) / (n - 1) as f64, (y1 - y0) / (n - 1) as f64);
        let diag = hx.hypot(hy);
        let cells: Vec<(usize, usize)> = (0..n - 1).flat_map(|j| (0..n - 1).map(move |i| (i, j))).collect();
        let found: Vec<Vec<[f64; 2]>> = cells
            .par_iter()
            .map(|&(i, j)| {
                let corners = [j * n + i, j * n + i + 1, (j + 1) * n + i, (j + 1) * n + i + 1];
                let mut out = Vec::new();
                let mut min_mag = f64::INFINITY;
                let mut lip: f64 = 0.0;
                for &k in &corners {
                    let Some(jt) = jets[k] else { continue };
                    let [x, y] = pts[k];
                    let (p, q) = pq(x, y, jt[1], jt[2]);
                    let m = p.hypot(q);
                    if m <= self.tol.char_tol {
                        out.push([x, y]);
                    }
                    min_mag = min_mag.min(m);
                    lip = lip.max(pq_jacobian(&jt).norm());
                }
                if !min_mag.is_finite() || min_mag > 2.0 * lip * diag + self.tol.char_tol {
                    return out;
                }
                let (cx, cy) = (x0 + hx * (i as f64 + 0.5), y0 + hy * (j as f64 + 0.5));
                if let Some(r) = self.newton_char(cx, cy) {
                    let slack = 1e-9 * diag;
                    let lo = [x0 + hx * i as f64 - slack, y0 + hy * j as f64 - slack];
                    let hi = [lo[0] + hx + 2.0 * slack, lo[1] + hy + 2.0 * slack];
                    if r[0] >= lo[0] && r[0] <= hi[0] && r[1] >= lo[1] && r[1] <= hi[1] && self.contains(r[0], r[1]) {
                        out.push(r);
                    }
                }
                out
            })
            .collect();
        let mut pts: Vec<[f64; 2]> = Vec::new();
        for p in found.into_iter().flatten() {
            if !pts.iter().any(|q| (q[0] - p[0]).hypot(q[1] - p[1]) <= 1e-8) {
                pts.push(p);
            }
        }
        pts
    }

    /// Minimum-norm Newton iteration for `(p, q) = 0`.
    fn newton_char(&self, mut x: f64, mut y: f64) -> Option<[f64; 2]> {
        for _ in 0..60 {
            let jt = self.u.jet(x, y).ok()?;
            let (p, q) = pq(x, y, jt[1], jt[2]);
            if p.hypot(q) <= 1e-14 {
                return Some([x, y]);
            }
            let jac = pq_jacobian(&jt);
            let step = jac.svd(true, true).solve(&Vector2::new(p, q), 1e-12).ok()?;
            x -= step[0];
            y -= step[1];
            if !x.is_finite() || !y.is_finite() {
                return None;
            }
            if step.norm() <= 1e-15 * (1.0 + x.hypot(y)) {
                break;
            }
        }
        let jt = self.u.jet(x, y).ok()?;
        let (p, q) = pq(x, y, jt[1], jt[2]);
        (p.hypot(q) <= self.tol.char_tol).then_some([x, y])
    }

    /// Lower estimate of the distance to the nearest zero of `(p, q)` from
    /// the linearization, `|(p, q)| / ‖J‖`.
    fn char_distance_estimate(&self, x: f64, y: f64) -> Result<f64, GraphError> {
        let jt = self.u.jet(x, y)?;
        let (p, q) = pq(x, y, jt[1], jt[2]);
        let nrm = pq_jacobian(&jt).norm();
        Ok(if nrm == 0.0 { f64::INFINITY } else { p.hypot(q) / nrm })
    }

    fn points_for(resolution: usize) -> Result<(usize, usize), GraphError> {
        if resolution < 16 {
            return Err(GraphError::Resolution(resolution));
        }
        const ORDER: usize = 8;
        Ok((resolution.div_ceil(ORDER), ORDER))
    }

    /// `∫_Ω √(p² + q²)` with a Richardson error estimate.
    pub fn energy(&self, resolution: usize) -> Result<(f64, f64), GraphError> {
        let (panels, order) = Self::points_for(resolution)?;
        let err = std::sync::Mutex::new(None);
        let f = |x: f64, y: f64| -> f64 {
            if !self.contains(x, y) {
                return 0.0;
            }
            match self.u.grad(x, y) {
                Ok([_, ux, uy]) => {
                    let (p, q) = pq(x, y, ux, uy);
                    p.hypot(q)
                }
                Err(e) => {
                    err.lock().unwrap().get_or_insert(e);
                    0.0
                }
            }
        };
        let r = integrate_rect_richardson(f, self.domain, panels, order);
        match err.into_inner().unwrap() {
            Some(e) => Err(e),
            None => Ok(r),
        }
    }

    /// True when the closed support of `b` lies in the patch and keeps a
    /// linearized distance of at least `char_margin` from characteristic points.
    pub fn support_is_clear(&self, b: &Bump) -> bool {
        let s = b.support();
        let k = 12;
        let spacing = ((s[1] - s[0]).hypot(s[3] - s[2])) / k as f64;
        let margin = self.tol.char_margin.max(spacing);
        for j in 0..=k {
            for i in 0..=k {
                let x = s[0] + (s[1] - s[0]) * i as f64 / k as f64;
                let y = s[2] + (s[3] - s[2]) * j as f64 / k as f64;
                if !self.contains(x, y) {
                    return false;
                }
                match self.char_distance_estimate(x, y) {
                    Ok(d) if d > margin => {}
                    _ => return false,
                }
            }
        }
        true
    }

    /// `(E′(0), E″(0))` for the vertical variation `u + εφ`.
    pub fn variation(&self, b: &Bump, resolution: usize) -> Result<(f64, f64), GraphError> {
        let (panels, order) = Self::points_for(resolution)?;
        if !self.support_is_clear(b) {
            return Err(GraphError::SupportNotClear(b.support()));
        }
        let e1 = integrate_rect(
            |x, y| {
                let (_, fx, fy) = b.eval(x, y);
                let [_, ux, uy] = self.u.grad(x, y).unwrap_or([0.0; 3]);
                let (p, q) = pq(x, y, ux, uy);
                (p * fx + q * fy) / p.hypot(q)
            },
            b.support(),
            panels,
            order,
        );
        let e2 = integrate_rect(
            |x, y| {
                let (_, fx, fy) = b.eval(x, y);
                let [_, ux, uy] = self.u.grad(x, y).unwrap_or([0.0; 3]);
                let (p, q) = pq(x, y, ux, uy);
                let m = p.hypot(q);
                (q * fx - p * fy).powi(2) / (m * m * m)
            },
            b.support(),
            panels,
            order,
        );
        Ok((e1, e2))
    }

    /// `∫ p̄ φx + q̄ φy` over the support of `b`.
    pub fn weak_defect(&self, b: &Bump, resolution: usize) -> Result<f64, GraphError> {
        let (panels, order) = Self::points_for(resolution)?;
        if !self.support_is_clear(b) {
            return Err(GraphError::SupportNotClear(b.support()));
        }
        Ok(integrate_rect(
            |x, y| {
                let (_, fx, fy) = b.eval(x, y);
                let [_, ux, uy] = self.u.grad(x, y).unwrap_or([0.0; 3]);
                let (p, q) = pq(x, y, ux, uy);
                (p * fx + q * fy) / p.hypot(q)
            },
            b.support(),
            panels,
            order,
        ))
    }

    /// Deterministic battery of up to `count` bumps with clear supports,
    /// centers from a Halton sequence and a cycle of radii.
    pub fn bump_battery(&self, count: usize) -> Vec<Bump> {
        let [x0, x1, y0, y1] = self.domain;
        let (w, h) = (x1 - x0, y1 - y0);
        let scale = w.min(h);
        let radii = [0.2, 0.14, 0.1, 0.07, 0.05];
        let mut out = Vec::new();
        for i in 1..4000 {
            if out.len() == count {
                break;
            }
            let (a, c) = halton2(i);
            let r = radii[i % radii.len()] * scale;
            let b = Bump::new(x0 + a * w, y0 + c * h, r, r);
            if b.inside(self.domain, 1e-3 * scale) && self.support_is_clear(&b) {
                out.push(b);
            }
        }
        out
    }

    /// Strong residual `max |H|` over grid nodes away from the characteristic
    /// set, and weak defect `max |∫ p̄φx + q̄φy|` over a battery of 20 bumps.
    pub fn minimality_residual(&self, n: usize, char_margin: f64) -> Result<MinimalityReport, GraphError> {
        let chars = self.characteristic_scan(n.min(257));
        let pts = self.grid(n);
        let vals: Vec<Option<f64>> = pts
            .par_iter()
            .map(|&[x, y]| {
                if !self.contains(x, y) {
                    return Ok(None);
                }
                if chars.iter().any(|c| (c[0] - x).hypot(c[1] - y) <= char_margin) {
                    return Ok(None);
                }
                if self.char_distance_estimate(x, y)? <= char_margin {
                    return Ok(None);
                }
                self.h_curvature(x, y).map(|h| Some(h.abs()))
            })
            .collect::<Result<_, GraphError>>()?;
        let used: Vec<f64> = vals.iter().flatten().copied().collect();
        let strong = used.iter().copied().fold(0.0, f64::max);
        let mut tol = self.tol;
        tol.char_margin = char_margin;
        let me = GraphPatch { tol, ..self.clone() };
        let bumps = me.bump_battery(20);
        let weak = bumps
            .iter()
            .map(|b| me.weak_defect(b, 64).map(f64::abs))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .fold(0.0, f64::max);
        Ok(MinimalityReport {
            strong,
            weak,
            points_used: used.len(),
            points_excluded: vals.iter().filter(|v| v.is_none()).count(),
            bumps_used: bumps.len(),
            weak_over_strong: (strong > 0.0).then(|| weak / strong),
        })
    }

    /// `max |Δu|` over the unmasked grid nodes.
    pub fn max_laplacian(&self, n: usize) -> Result<f64, GraphError> {
        let pts = self.grid(n);
        let v: Vec<f64> = pts
            .par_iter()
            .filter(|p| self.contains(p[0], p[1]))
            .map(|&[x, y]| self.u.jet(x, y).map(|j| (j[3] + j[5]).abs()))
            .collect::<Result<_, _>>()?;
        Ok(v.into_iter().fold(0.0, f64::max))
    }
}

/// H from a second-order jet: the divergence of the normalized map, with the
/// derivatives of `p̄` and `q̄` carried by dual numbers.
pub fn h_from_jet(x: f64, y: f64, j: &Jet2, char_tol: f64) -> Result<f64, GraphError> {
    let (p, q) = pq(x, y, j[1], j[2]);
    if p.hypot(q) <= char_tol {
        return Err(GraphError::Characteristic { x, y });
    }
    let (px, py, qx, qy) = (j[3], j[4] + 0.5, j[4] - 0.5, j[5]);
    let norm = |a: Dual<f64>, b: Dual<f64>| (a * a + b * b).sqrt();
    let (pdx, qdx) = (Dual::new(p, px), Dual::new(q, qx));
    let (pdy, qdy) = (Dual::new(p, py), Dual::new(q, qy));
    let dpbar_dx = (pdx / norm(pdx, qdx)).d;
    let dqbar_dy = (qdy / norm(pdy, qdy)).d;
    Ok(dpbar_dx + dqbar_dy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn patch(u: &str, d: [f64; 4]) -> GraphPatch {
        GraphPatch::from_expr(u, d).unwrap()
    }

    #[test]
    fn gauss_examples() {
        let p = patch("0", [-2.0, 2.0, -2.0, 2.0]);
        assert!(p.horizontal_gauss(0.0, 0.0).unwrap().is_characteristic());
        let g = p.horizontal_gauss(1.0, 1.0).unwrap();
        assert_eq!((g.p, g.q), (0.5, -0.5));
        let nu = g.nu.unwrap();
        assert!((nu[0] - FRAC_1_SQRT_2).abs() < 1e-15 && (nu[1] + FRAC_1_SQRT_2).abs() < 1e-15);
        let g = patch("x*y/2", [-2.0, 2.0, -2.0, 2.0]).horizontal_gauss(1.0, 2.0).unwrap();
        assert_eq!((g.p, g.q, g.nu), (2.0, 0.0, Some([1.0, 0.0])));
        assert!(matches!(p.horizontal_gauss(3.0, 0.0), Err(GraphError::OutsideDomain { .. })));
    }

    #[test]
    fn curvature_of_plane_and_parabola() {
        let p = patch("0", [-2.0, 2.0, -2.0, 2.0]);
        assert!(p.h_curvature(1.0, 0.0).unwrap().abs() < 1e-15);
        assert!(matches!(p.h_curvature(0.0, 0.0), Err(GraphError::Characteristic { .. })));
        // Independent oracle: central differences of the normalized map.
        let nu = |x: f64, y: f64| {
            let (p, q) = (2.0 * x + y / 2.0, -x / 2.0);
            let m = p.hypot(q);
            (p / m, q / m)
        };
        let h = 1e-5;
        let oracle = (nu(1.0 + h, 1.0).0 - nu(1.0 - h, 1.0).0) / (2.0 * h)
            + (nu(1.0, 1.0 + h).1 - nu(1.0, 1.0 - h).1) / (2.0 * h);
        let hx = patch("x^2", [0.0, 2.0, 0.0, 2.0]).h_curvature(1.0, 1.0).unwrap();
        assert!(hx.abs() > 1e-3);
        assert!((hx - oracle).abs() < 1e-6 * oracle.abs().max(1.0), "{hx} vs {oracle}");
    }

    #[test]
    fn grid_field_uses_differences() {
        let rect = [0.5, 1.5, 0.5, 1.5];
        let g = BicubicGrid::sample(rect, 81, 81, |x, y| x * y / 2.0).unwrap();
        let gp = GraphPatch::new(Field::Grid(g), rect);
        assert!(gp.h_curvature(1.0, 1.0).unwrap().abs() < 1e-6);
    }

    #[test]
    fn scan_plane_and_saddle() {
        let p = patch("0", [-1.0, 1.0, -1.0, 1.0]);
        let c = p.characteristic_scan(20);
        assert_eq!(c.len(), 1);
        assert!(c[0][0].abs() < 1e-10 && c[0][1].abs() < 1e-10);
        let s = patch("x*y/2", [-1.0, 1.0, -1.0, 1.0]).characteristic_scan(21);
        assert!(s.len() > 10);
        assert!(s.iter().all(|q| q[1].abs() < 1e-10));
    }

    #[test]
    fn energy_examples() {
        let (e, err) = patch("0", [0.0, 1.0, 0.0, 1.0]).energy(64).unwrap();
        let exact = (2f64.sqrt() + 1f64.asinh()) / 6.0;
        assert!((e - exact).abs() < 1e-7, "{e} {exact} {err}");
        let (e, _) = patch("x*y/2", [0.0, 1.0, 0.0, 1.0]).energy(32).unwrap();
        assert!((e - 0.5).abs() < 1e-12);
        assert_eq!(patch("x", [0.0, 0.0, 0.0, 1.0]).energy(16).unwrap().0, 0.0);
        assert_eq!(patch("x", [0.0, 1.0, 0.0, 1.0]).energy(8), Err(GraphError::Resolution(8)));
    }

    #[test]
    fn variation_rejects_characteristic_support() {
        let p = patch("0", [-1.0, 1.0, -1.0, 1.0]);
        let b = Bump::new(0.0, 0.0, 0.3, 0.3);
        assert!(matches!(p.variation(&b, 32), Err(GraphError::SupportNotClear(_))));
        let b = Bump::new(0.5, 0.5, 0.2, 0.2);
        let (e1, e2) = p.variation(&b, 32).unwrap();
        assert!(e1.abs() < 1e-10 && e2 > 0.0);
    }
}
