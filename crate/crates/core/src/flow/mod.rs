//! Integral curves of continuous planar vector fields.
//!
//! Fields are merely continuous in general, so the primary integrator is
//! Picard iteration; mollified approximants `X_ε = X * ψ_ε` quantify how far
//! a curve of a smoothed field can drift from one of the original.

mod picard;

pub use picard::{picard, rk4, straightness, IntegralCurve, PicardOptions};

use crate::expr::{Expr, ExprError};
use crate::graph::{GraphError, GraphPatch};
use crate::quadrature::gauss_legendre;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlowError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("mollifier radius {eps} exceeds the domain margin {margin}")]
    Radius { eps: f64, margin: f64 },
    #[error("start point ({0}, {1}) is not interior to the domain")]
    Start(f64, f64),
    #[error("curve is degenerate: {0}")]
    Degenerate(String),
    #[error("{0}")]
    Invalid(String),
}

type Eval = dyn Fn(f64, f64) -> [f64; 2] + Send + Sync;

/// Vector field on the rectangle `[x0, x1] × [y0, y1]`.
#[derive(Clone)]
pub struct PlanarField {
    f: Arc<Eval>,
    pub domain: [f64; 4],
}

impl fmt::Debug for PlanarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PlanarField").field("domain", &self.domain).finish_non_exhaustive()
    }
}

/// Grid used for sup-norms and the empirical modulus.
const PROBE: usize = 129;

impl PlanarField {
    pub fn from_fn<F>(domain: [f64; 4], f: F) -> Self
    where
        F: Fn(f64, f64) -> [f64; 2] + Send + Sync + 'static,
    {
        PlanarField { f: Arc::new(f), domain }
    }

    /// Components in `x, y`; points where either fails to evaluate give `NaN`.
    pub fn from_exprs(a: &str, b: &str, domain: [f64; 4]) -> Result<Self, FlowError> {
        let v = ["x", "y"];
        let (ea, eb) = (Expr::parse(a, &v)?, Expr::parse(b, &v)?);
        Ok(Self::from_fn(domain, move |x, y| {
            [ea.eval(&[x, y]).unwrap_or(f64::NAN), eb.eval(&[x, y]).unwrap_or(f64::NAN)]
        }))
    }

    /// `ν^⊥ = (ν₂, −ν₁)` of a graph patch; zero on the characteristic set.
    pub fn rule_field(patch: GraphPatch) -> Self {
        let domain = patch.domain;
        Self::from_fn(domain, move |x, y| match patch.horizontal_gauss(x, y) {
            Ok(g) => g.nu.map_or([0.0, 0.0], |n| [n[1], -n[0]]),
            Err(_) => [f64::NAN, f64::NAN],
        })
    }

    #[inline]
    pub fn eval(&self, x: f64, y: f64) -> [f64; 2] {
        (self.f)(x, y)
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        let [x0, x1, y0, y1] = self.domain;
        x >= x0 && x <= x1 && y >= y0 && y <= y1
    }

    fn probe_points(&self, n: usize) -> impl Iterator<Item = (f64, f64)> + '_ {
        let [x0, x1, y0, y1] = self.domain;
        (0..n).flat_map(move |j| {
            (0..n).map(move |i| {
                let x = x0 + (x1 - x0) * i as f64 / (n - 1) as f64;
                let y = y0 + (y1 - y0) * j as f64 / (n - 1) as f64;
                (x, y)
            })
        })
    }

    /// `M = max |X|` on a sample grid.
    pub fn sup_norm(&self) -> f64 {
        self.probe_points(PROBE).map(|(x, y)| norm(self.eval(x, y))).fold(0.0, f64::max)
    }

    /// Empirical modulus `C(δ)`: largest `|X(p) − X(q)|` over grid pairs with
    /// `|p − q| ≤ δ`, on a grid of spacing at most `δ/2`.
    pub fn modulus(&self, delta: f64) -> f64 {
        let [x0, x1, y0, y1] = self.domain;
        let n = (((x1 - x0).max(y1 - y0) / (0.5 * delta)).ceil() as usize + 1).clamp(3, 401);
        let hx = (x1 - x0) / (n - 1) as f64;
        let hy = (y1 - y0) / (n - 1) as f64;
        let vals: Vec<[f64; 2]> = self.probe_points(n).map(|(x, y)| self.eval(x, y)).collect();
        let rx = (delta / hx).floor() as isize;
        let ry = (delta / hy).floor() as isize;
        let mut worst: f64 = 0.0;
        for j in 0..n as isize {
            for i in 0..n as isize {
                let a = vals[(j * n as isize + i) as usize];
                for dj in 0..=ry {
                    for di in -rx..=rx {
                        if (dj == 0 && di <= 0) || (di as f64 * hx).hypot(dj as f64 * hy) > delta {
                            continue;
                        }
                        let (ii, jj) = (i + di, j + dj);
                        if ii < 0 || ii >= n as isize || jj >= n as isize {
                            continue;
                        }
                        let b = vals[(jj * n as isize + ii) as usize];
                        worst = worst.max(norm([a[0] - b[0], a[1] - b[1]]));
                    }
                }
            }
        }
        worst
    }
}

#[inline]
pub(crate) fn norm(v: [f64; 2]) -> f64 {
    v[0].hypot(v[1])
}

/// Result of mollification.
#[derive(Clone, Debug)]
pub struct Mollified {
    /// Defined on the domain shrunk by `ε`.
    pub field: PlanarField,
    pub eps: f64,
    /// `sup |X_ε − X|` on the shrunk domain.
    pub m_k: f64,
}

/// Unnormalized bump `exp(−1/(1 − r²))` on the unit disk.
fn psi(r: f64) -> f64 {
    if r >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - r * r)).exp()
    }
}

/// Convolve with the radius-`ε` bump using polar Gauss–Legendre × trapezoid
/// nodes, weights normalized to sum to one.
pub fn mollify(field: &PlanarField, eps: f64) -> Result<Mollified, FlowError> {
    let [x0, x1, y0, y1] = field.domain;
    let margin = 0.5 * (x1 - x0).min(y1 - y0);
    if !(eps > 0.0) || eps >= margin {
        return Err(FlowError::Radius { eps, margin });
    }
    let (gx, gw) = gauss_legendre(12);
    let n_ang = 24;
    let mut nodes = Vec::with_capacity(gx.len() * n_ang);
    for (r, w) in gx.iter().zip(&gw) {
        let r = 0.5 * (r + 1.0);
        let wr = 0.5 * w * r * psi(r);
        for k in 0..n_ang {
            let a = std::f64::consts::TAU * (k as f64 + 0.5) / n_ang as f64;
            nodes.push((eps * r * a.cos(), eps * r * a.sin(), wr));
        }
    }
    let total: f64 = nodes.iter().map(|n| n.2).sum();
    for n in &mut nodes {
        n.2 /= total;
    }
    let inner = [x0 + eps, x1 - eps, y0 + eps, y1 - eps];
    let src = field.clone();
    let smooth = PlanarField::from_fn(inner, move |x, y| {
        let mut acc = [0.0, 0.0];
        for &(dx, dy, w) in &nodes {
            let v = src.eval(x + dx, y + dy);
            acc[0] += w * v[0];
            acc[1] += w * v[1];
        }
        acc
    });
    let m_k = smooth
        .probe_points(PROBE)
        .map(|(x, y)| {
            let (a, b) = (smooth.eval(x, y), field.eval(x, y));
            norm([a[0] - b[0], a[1] - b[1]])
        })
        .fold(0.0, f64::max);
    Ok(Mollified { field: smooth, eps, m_k })
}
