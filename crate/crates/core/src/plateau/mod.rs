//! Spanning a closed curve `c(θ)` by a ruled H-minimal graph.
//!
//! The accessibility function
//! `F(θ₀, θ) = c₃(θ) − c₃(θ₀) + ½(c₁(θ)c₂(θ₀) − c₁(θ₀)c₂(θ))`
//! is the `t`-coordinate of `c(θ₀)⁻¹·c(θ)`; it vanishes exactly when the
//! straight segment from `c(θ₀)` to `c(θ)` can be lifted horizontally.

mod access;
mod assemble;
mod continuation;
mod verdict;

pub use access::{access_field, access_set, isolated_points, legendrian_points, AccessField, AccessRoot, IsolatedReport};
pub use assemble::{spanning_assemble, Assembly, FoldReport, FoldStatus, SpanRule};
pub use continuation::{phi_continue, ContinueOptions, PhiPath, PhiSample, PhiStatus};
pub use verdict::{nonlegendrian_verdict, planarity_residual, NonLegendrianVerdict, VerdictStatus};

use crate::dual::Dual;
use crate::expr::{Expr, ExprError};
use crate::sweep::{sweep_intersections, Segment};
use crate::tol::Tolerances;
use std::f64::consts::TAU;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlateauError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("curve is not closed: |c(0) − c(period)| = {0:e}")]
    NotClosed(f64),
    #[error("projected curve self-intersects near θ = {0} and θ = {1}")]
    NotSimple(f64, f64),
    #[error("period must be 2π, got {0}")]
    Period(f64),
    #[error("start ({t}, {phi}) is not on the root manifold: |F| = {residual:e}")]
    OffManifold { t: f64, phi: f64, residual: f64 },
    #[error("path status is {0}, assembly needs MONOTONE")]
    NotMonotone(String),
    #[error("{0}")]
    Invalid(String),
}

/// Closed space curve with period `2π`.
#[derive(Clone, Debug)]
pub struct ClosedCurve {
    pub c: [Expr; 3],
    pub period: f64,
    pub tol: Tolerances,
}

/// Grid size used for the simplicity check of the projection.
const SIMPLE_GRID: usize = 1024;

impl ClosedCurve {
    /// Parse and validate closure and simplicity of the projection.
    pub fn new(c1: &str, c2: &str, c3: &str) -> Result<Self, PlateauError> {
        Self::with_period(c1, c2, c3, TAU)
    }

    pub fn with_period(c1: &str, c2: &str, c3: &str, period: f64) -> Result<Self, PlateauError> {
        if (period - TAU).abs() > 1e-12 {
            return Err(PlateauError::Period(period));
        }
        let v = ["theta"];
        let curve = ClosedCurve {
            c: [Expr::parse(c1, &v)?, Expr::parse(c2, &v)?, Expr::parse(c3, &v)?],
            period,
            tol: Tolerances::default(),
        };
        curve.validate()?;
        Ok(curve)
    }

    pub fn with_tol(mut self, tol: Tolerances) -> Self {
        self.tol = tol;
        self
    }

    fn validate(&self) -> Result<(), PlateauError> {
        let a = self.point(0.0)?;
        let b = self.point(self.period)?;
        let gap = (0..3).map(|i| (a[i] - b[i]).abs()).fold(0.0, f64::max);
        if gap > 1e-10 {
            return Err(PlateauError::NotClosed(gap));
        }
        let n = SIMPLE_GRID;
        let pts = (0..=n)
            .map(|k| self.point(self.period * k as f64 / n as f64))
            .collect::<Result<Vec<_>, _>>()?;
        let segs: Vec<Segment> = (0..n)
            .map(|k| Segment::new([pts[k][0], pts[k][1]], [pts[k + 1][0], pts[k + 1][1]]))
            .collect();
        for x in sweep_intersections(&segs) {
            let adjacent = x.j == x.i + 1 || (x.i == 0 && x.j == n - 1);
            if !adjacent {
                let th = |k: usize| self.period * k as f64 / n as f64;
                return Err(PlateauError::NotSimple(th(x.i), th(x.j)));
            }
        }
        Ok(())
    }

    pub fn point(&self, th: f64) -> Result<[f64; 3], PlateauError> {
        Ok([self.c[0].eval(&[th])?, self.c[1].eval(&[th])?, self.c[2].eval(&[th])?])
    }

    /// `(c(θ), c′(θ))`.
    pub fn jet(&self, th: f64) -> Result<([f64; 3], [f64; 3]), PlateauError> {
        let t = [Dual::variable(th)];
        let a = self.c[0].eval_with(&t)?;
        let b = self.c[1].eval_with(&t)?;
        let c = self.c[2].eval_with(&t)?;
        Ok(([a.v, b.v, c.v], [a.d, b.d, c.d]))
    }

    /// Frame `T`-component of `c′(θ)`: `c₃′ + ½(c₂c₁′ − c₁c₂′)`.
    pub fn legendrian_defect(&self, th: f64) -> Result<f64, PlateauError> {
        let (c, d) = self.jet(th)?;
        Ok(w_of(&c, &d))
    }

    pub fn access_value(&self, th0: f64, th: f64) -> Result<f64, PlateauError> {
        Ok(access_from_points(&self.point(th0)?, &self.point(th)?))
    }
}

#[inline]
pub(crate) fn w_of(c: &[f64; 3], d: &[f64; 3]) -> f64 {
    d[2] + 0.5 * (c[1] * d[0] - c[0] * d[1])
}

/// `F` from the two endpoints; exactly antisymmetric in floating point.
#[inline]
pub fn access_from_points(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    (b[2] - a[2]) + 0.5 * (b[0] * a[1] - a[0] * b[1])
}

/// `x` reduced to `[0, 2π)`.
pub fn wrap(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Distance between angles on the circle.
pub fn angle_dist(a: f64, b: f64) -> f64 {
    let d = wrap(a - b);
    d.min(TAU - d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    pub(crate) fn good() -> ClosedCurve {
        ClosedCurve::new("1 - cos(theta)", "sin(theta)", "2 - 2*cos(theta) + sin(theta) - sin(theta)*cos(theta)").unwrap()
    }

    #[test]
    fn defect_examples() {
        let c = good();
        assert!(c.legendrian_defect(0.0).unwrap().abs() < 1e-15);
        let circle = ClosedCurve::new("cos(theta)", "sin(theta)", "0").unwrap();
        for th in [0.0, 1.0, 4.0] {
            assert!((circle.legendrian_defect(th).unwrap() + 0.5).abs() < 1e-15);
        }
        let nl = ClosedCurve::new("1 - cos(theta)", "sin(theta)", "0.5*sin(theta) + 0.125*sin(theta)^2").unwrap();
        for th in [0.3f64, 2.0, 5.5] {
            let want = 0.5 + 0.125 * (2.0 * th).sin();
            assert!((nl.legendrian_defect(th).unwrap() - want).abs() < 1e-15);
        }
    }

    #[test]
    fn access_examples() {
        let c = good();
        assert_eq!(c.access_value(1.3, 1.3).unwrap(), 0.0);
        assert!((c.access_value(0.0, PI).unwrap() - 4.0).abs() < 1e-14);
        let circle = ClosedCurve::new("cos(theta)", "sin(theta)", "0").unwrap();
        let (a, b) = (0.4, 2.1);
        assert!((circle.access_value(a, b).unwrap() + 0.5 * (b - a).sin()).abs() < 1e-15);
        assert_eq!(c.access_value(0.7, 2.9).unwrap(), -c.access_value(2.9, 0.7).unwrap());
    }

    #[test]
    fn rejects_open_and_self_crossing() {
        assert!(matches!(ClosedCurve::new("theta", "0", "0"), Err(PlateauError::NotClosed(_))));
        assert!(matches!(ClosedCurve::new("sin(2*theta)", "sin(theta)", "0"), Err(PlateauError::NotSimple(..))));
    }
}
