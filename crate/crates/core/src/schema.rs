//! JSON job inputs. Unknown keys are rejected everywhere.

use crate::flow::{FlowError, PlanarField};
use crate::graph::InterfaceCurve;
use crate::graph::{GraphError, GraphPatch};
use crate::plateau::{ClosedCurve, PlateauError};
use crate::ruled::{persistent_family, PersistentKind};
use crate::ruled::{RuledError, RuledSurface, SeedCurve};
use crate::tol::Tolerances;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SchemaError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Ruled(#[from] RuledError),
    #[error(transparent)]
    Plateau(#[from] PlateauError),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error("{0}")]
    Invalid(String),
}

fn check_rect(d: [f64; 4]) -> Result<(), SchemaError> {
    if d.iter().all(|v| v.is_finite()) && d[0] < d[1] && d[2] < d[3] {
        Ok(())
    } else {
        Err(SchemaError::Invalid(format!("domain {d:?} must be [x0, x1, y0, y1] with x0 < x1, y0 < y1")))
    }
}

fn check_range(name: &str, r: [f64; 2]) -> Result<(), SchemaError> {
    if r[0].is_finite() && r[1].is_finite() && r[0] < r[1] {
        Ok(())
    } else {
        Err(SchemaError::Invalid(format!("{name} {r:?} must be increasing")))
    }
}

/// `{"u": "<expr in x, y>", "domain": [x0, x1, y0, y1], "mask": "<expr>"?}`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatchSpec {
    pub u: String,
    pub domain: [f64; 4],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mask: Option<String>,
}

impl PatchSpec {
    pub fn build(&self, tol: Tolerances) -> Result<GraphPatch, SchemaError> {
        check_rect(self.domain)?;
        let mut p = GraphPatch::from_expr(&self.u, self.domain)?.with_tol(tol);
        if let Some(m) = &self.mask {
            p = p.with_mask(m)?;
        }
        Ok(p)
    }
}

/// `{"gamma": [g1, g2], "h0": "<expr in s>", "s_range": [..], "r_range": [..]}`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuledSpec {
    pub gamma: [String; 2],
    pub h0: String,
    pub s_range: [f64; 2],
    pub r_range: [f64; 2],
}

impl RuledSpec {
    pub fn build(&self, tol: Tolerances) -> Result<RuledSurface, SchemaError> {
        check_range("s_range", self.s_range)?;
        check_range("r_range", self.r_range)?;
        let seed = SeedCurve::from_exprs(&self.gamma[0], &self.gamma[1], self.s_range)?;
        let mut s = RuledSurface::new(seed, &self.h0, self.r_range)?;
        s.tol = tol;
        Ok(s)
    }
}

fn tau() -> f64 {
    std::f64::consts::TAU
}

/// `{"c": [c1, c2, c3], "period": 2π}`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub c: [String; 3],
    #[serde(default = "tau")]
    pub period: f64,
}

impl CurveSpec {
    pub fn build(&self, tol: Tolerances) -> Result<ClosedCurve, SchemaError> {
        Ok(ClosedCurve::with_period(&self.c[0], &self.c[1], &self.c[2], self.period)?.with_tol(tol))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GlueSpec {
    pub side1: PatchSpec,
    pub side2: PatchSpec,
    /// Interface `C(τ)` in the variable `tau`.
    pub curve: [String; 2],
    pub tau_range: [f64; 2],
}

impl GlueSpec {
    pub fn build(&self, tol: Tolerances) -> Result<(GraphPatch, GraphPatch, InterfaceCurve), SchemaError> {
        check_range("tau_range", self.tau_range)?;
        Ok((
            self.side1.build(tol)?,
            self.side2.build(tol)?,
            InterfaceCurve::new(&self.curve[0], &self.curve[1], self.tau_range)?,
        ))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PersistentSpec {
    pub family: PersistentKind,
    pub domain: [f64; 4],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mask: Option<String>,
}

impl PersistentSpec {
    pub fn build(&self, tol: Tolerances) -> Result<GraphPatch, SchemaError> {
        check_rect(self.domain)?;
        Ok(persistent_family(self.family, self.domain, self.mask.as_deref())?.with_tol(tol))
    }
}

/// Either an explicit `field` on `domain`, or `graph`, whose rule field
/// `ν^⊥` is traced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<[f64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<PatchSpec>,
    pub starts: Vec<[f64; 2]>,
    pub t_max: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intervals: Option<usize>,
    /// Mollifier radii to compare against the unsmoothed curves.
    #[serde(default)]
    pub eps: Vec<f64>,
}

impl FlowSpec {
    pub fn build(&self, tol: Tolerances) -> Result<PlanarField, SchemaError> {
        if self.starts.is_empty() {
            return Err(SchemaError::Invalid("flow needs at least one start point".into()));
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return Err(SchemaError::Invalid(format!("t_max must be positive, got {}", self.t_max)));
        }
        match (&self.field, &self.domain, &self.graph) {
            (Some(f), Some(d), None) => {
                check_rect(*d)?;
                Ok(PlanarField::from_exprs(&f[0], &f[1], *d)?)
            }
            (None, None, Some(g)) => Ok(PlanarField::rule_field(g.build(tol)?)),
            _ => Err(SchemaError::Invalid("give either `field` with `domain`, or `graph`".into())),
        }
    }
}
