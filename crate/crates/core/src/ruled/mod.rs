//! Ruled H-minimal surfaces from a seed curve `γ(s)` and a height `h₀(s)`:
//!
//! `F(s, r) = γ(s) + r γ′(s)^⊥`, `h(s, r) = h₀(s) − (r/2) γ(s)·γ′(s)`.
//!
//! Each rule `r ↦ (F(s, r), h(s, r))` is a horizontal line, which makes the
//! lifted graph H-minimal away from its characteristic locus.

mod crossing;
mod height;
mod locus;
mod persistent;

pub use crossing::{rule_crossing_scan, CrossingReport, RuleCrossing};
pub use height::RuledGraph;
pub use locus::{char_locus, char_roots, CharRoots};
pub use persistent::{persistence_check, persistent_family, PersistenceReport, PersistentKind};

use crate::dual::Dual;
use crate::expr::{Expr, ExprError};
use crate::graph::GraphError;
use crate::heis::HPoint;
use crate::real::Real;
use crate::spline::{AngleSpline, SplineError};
use crate::tol::Tolerances;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RuledError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("seed fit: {0}")]
    Spline(String),
    #[error("(s, r) = ({s}, {r}) is outside the parameter box")]
    OutOfRange { s: f64, r: f64 },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("invalid parameter: {0}")]
    Invalid(String),
}

impl From<SplineError> for RuledError {
    fn from(e: SplineError) -> Self {
        RuledError::Spline(e.to_string())
    }
}

#[derive(Clone, Debug)]
pub enum SeedKind {
    Expr([Expr; 2]),
    Spline(AngleSpline),
}

/// Planar seed curve, expected to be parameterized by arclength.
#[derive(Clone, Debug)]
pub struct SeedCurve {
    pub kind: SeedKind,
    pub s_range: [f64; 2],
}

/// `γ`, `γ′`, `γ″` and the signed curvature `κ = γ″·γ′^⊥` at one `s`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeedJet {
    pub g: [f64; 2],
    pub d1: [f64; 2],
    pub d2: [f64; 2],
    pub kappa: f64,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct SeedReport {
    pub pass: bool,
    pub max_speed_error: f64,
    pub kappa_min: f64,
    pub kappa_max: f64,
    /// Grid values of `s` violating the arclength or smoothness checks.
    pub violations: Vec<f64>,
}

/// `a·b^⊥` with `(b₁, b₂)^⊥ = (b₂, −b₁)`.
#[inline]
pub(crate) fn dot_perp<T: Real>(a: [T; 2], b: [T; 2]) -> T {
    a[0] * b[1] - a[1] * b[0]
}

impl SeedCurve {
    pub fn from_exprs(g1: &str, g2: &str, s_range: [f64; 2]) -> Result<Self, RuledError> {
        let v = ["s"];
        if !(s_range[1] > s_range[0]) {
            return Err(RuledError::Invalid("empty s-range".into()));
        }
        Ok(SeedCurve { kind: SeedKind::Expr([Expr::parse(g1, &v)?, Expr::parse(g2, &v)?]), s_range })
    }

    /// Fit ordered samples with an arclength angle spline.
    pub fn from_samples(points: &[[f64; 2]]) -> Result<Self, RuledError> {
        let sp = AngleSpline::fit(points)?;
        Ok(Self::from_angle_spline(sp))
    }

    pub fn from_angle_spline(sp: AngleSpline) -> Self {
        let s_range = sp.s_range();
        SeedCurve { kind: SeedKind::Spline(sp), s_range }
    }

    pub fn point<T: Real>(&self, s: T) -> Result<[T; 2], RuledError> {
        Ok(match &self.kind {
            SeedKind::Expr([a, b]) => [a.eval_with(&[s])?, b.eval_with(&[s])?],
            SeedKind::Spline(sp) => sp.eval(s),
        })
    }

    /// `(γ, γ′, γ″)` in any [`Real`].
    pub fn jet_t<T: Real>(&self, s: T) -> Result<[[T; 2]; 3], RuledError> {
        let sd = Dual::new(Dual::new(s, T::one()), Dual::new(T::one(), T::zero()));
        let p = self.point(sd)?;
        Ok([[p[0].v.v, p[1].v.v], [p[0].v.d, p[1].v.d], [p[0].d.d, p[1].d.d]])
    }

    pub fn jet(&self, s: f64) -> Result<SeedJet, RuledError> {
        let [g, d1, d2] = self.jet_t(s)?;
        Ok(SeedJet { g, d1, d2, kappa: dot_perp(d2, d1) })
    }

    pub fn kappa(&self, s: f64) -> Result<f64, RuledError> {
        Ok(self.jet(s)?.kappa)
    }

    pub fn s_grid(&self, n: usize) -> Vec<f64> {
        let [a, b] = self.s_range;
        let n = n.max(2);
        (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
    }

    /// Arclength and smoothness on a 1000-point grid.
    pub fn validate(&self) -> SeedReport {
        let mut rep = SeedReport {
            pass: true,
            max_speed_error: 0.0,
            kappa_min: f64::INFINITY,
            kappa_max: f64::NEG_INFINITY,
            violations: Vec::new(),
        };
        for s in self.s_grid(1000) {
            match self.jet(s) {
                Ok(j) if j.kappa.is_finite() => {
                    let e = (j.d1[0].hypot(j.d1[1]) - 1.0).abs();
                    rep.max_speed_error = rep.max_speed_error.max(e);
                    rep.kappa_min = rep.kappa_min.min(j.kappa);
                    rep.kappa_max = rep.kappa_max.max(j.kappa);
                    if !(e <= 1e-8) {
                        rep.violations.push(s);
                    }
                }
                _ => rep.violations.push(s),
            }
        }
        rep.pass = rep.violations.is_empty();
        rep
    }
}

/// `|κ|` at which the double-root test `W₀ = 1/(2κ)` applies, and related
/// per-point quantities along one rule.
#[derive(Clone, Debug)]
pub struct RuledSurface {
    pub seed: SeedCurve,
    /// Height along the seed, an expression in `s`.
    pub h0: Expr,
    pub r_range: [f64; 2],
    pub tol: Tolerances,
}

/// Value of the normal coefficient `β`, or the characteristic flag.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Beta {
    Finite(f64),
    Infinite,
}

impl RuledSurface {
    pub fn new(seed: SeedCurve, h0: &str, r_range: [f64; 2]) -> Result<Self, RuledError> {
        if !(r_range[1] > r_range[0]) {
            return Err(RuledError::Invalid("empty r-range".into()));
        }
        Ok(RuledSurface { seed, h0: Expr::parse(h0, &["s"])?, r_range, tol: Tolerances::default() })
    }

    pub fn s_range(&self) -> [f64; 2] {
        self.seed.s_range
    }

    fn check(&self, s: f64, r: f64) -> Result<(), RuledError> {
        let [s0, s1] = self.seed.s_range;
        let [r0, r1] = self.r_range;
        let es = 1e-12 * (1.0 + s0.abs().max(s1.abs()));
        let er = 1e-12 * (1.0 + r0.abs().max(r1.abs()));
        if s >= s0 - es && s <= s1 + es && r >= r0 - er && r <= r1 + er {
            Ok(())
        } else {
            Err(RuledError::OutOfRange { s, r })
        }
    }

    /// `W₀(s) = h₀′(s) + ½ γ′(s)·γ(s)^⊥`.
    pub fn w0(&self, s: f64) -> Result<f64, RuledError> {
        let j = self.seed.jet(s)?;
        let h0p = self.h0.deriv("s", 1, &[s])?;
        Ok(h0p + 0.5 * dot_perp(j.d1, j.g))
    }

    /// `F(s, r)` and `det DF = rκ(s) − 1`.
    pub fn param_f(&self, s: f64, r: f64) -> Result<([f64; 2], f64), RuledError> {
        self.check(s, r)?;
        let j = self.seed.jet(s)?;
        Ok(([j.g[0] + r * j.d1[1], j.g[1] - r * j.d1[0]], r * j.kappa - 1.0))
    }

    /// The point of the surface over `F(s, r)`.
    pub fn lift(&self, s: f64, r: f64) -> Result<HPoint<f64>, RuledError> {
        self.check(s, r)?;
        let [x, y, t] = self.lift_t(s, r)?;
        Ok(HPoint::new(x, y, t))
    }

    /// Lift in any [`Real`], without range checks.
    pub fn lift_t<T: Real>(&self, s: T, r: T) -> Result<[T; 3], RuledError> {
        let [g, d1, _] = self.seed.jet_t(s)?;
        let h0 = self.h0.eval_with(&[s])?;
        let gg = g[0] * d1[0] + g[1] * d1[1];
        Ok([g[0] + r * d1[1], g[1] - r * d1[0], h0 - r * T::from_f64(0.5) * gg])
    }

    /// `W₀ − r + (κ/2) r²`, the denominator of `β` and the characteristic
    /// quadratic.
    pub fn beta_denominator(&self, s: f64, r: f64) -> Result<f64, RuledError> {
        let k = self.seed.kappa(s)?;
        Ok(self.w0(s)? - r + 0.5 * k * r * r)
    }

    pub fn normal_beta(&self, s: f64, r: f64) -> Result<Beta, RuledError> {
        let k = self.seed.kappa(s)?;
        let den = self.beta_denominator(s, r)?;
        if den.abs() <= 1e-12 {
            return Ok(Beta::Infinite);
        }
        Ok(Beta::Finite((r * k - 1.0) / den))
    }

    /// Distance along rules from the seed to the edge of the parameter box,
    /// minimized over `s`; zero when the seed lies on that edge.
    pub fn horizontal_thickness(&self) -> f64 {
        let [r0, r1] = self.r_range;
        if r0 >= 0.0 || r1 <= 0.0 {
            0.0
        } else {
            (-r0).min(r1)
        }
    }

    /// Lifted `(s, r)` grid as vertices and quads, row-major in `s`.
    pub fn mesh(&self, ns: usize, nr: usize) -> Result<Mesh, RuledError> {
        let (ns, nr) = (ns.max(2), nr.max(2));
        let [r0, r1] = self.r_range;
        let mut vertices = Vec::with_capacity(ns * nr);
        for s in self.seed.s_grid(ns) {
            for k in 0..nr {
                let r = r0 + (r1 - r0) * k as f64 / (nr - 1) as f64;
                let p = self.lift(s, r)?;
                vertices.push([p.x, p.y, p.t]);
            }
        }
        let mut faces = Vec::new();
        for i in 0..ns - 1 {
            for k in 0..nr - 1 {
                let a = i * nr + k;
                faces.push([a, a + 1, a + nr + 1, a + nr]);
            }
        }
        Ok(Mesh { vertices, faces })
    }
}

#[derive(Clone, Debug, PartialEq, Default, serde::Serialize)]
pub struct Mesh {
    pub vertices: Vec<[f64; 3]>,
    /// Zero-based vertex indices.
    pub faces: Vec<[usize; 4]>,
}

impl Mesh {
    /// OBJ text with one-based face indices.
    pub fn to_obj(&self) -> String {
        let mut out = String::new();
        for v in &self.vertices {
            let _ = writeln!(out, "v {:.12} {:.12} {:.12}", v[0], v[1], v[2]);
        }
        for f in &self.faces {
            let _ = writeln!(out, "f {} {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1, f[3] + 1);
        }
        out
    }
}
