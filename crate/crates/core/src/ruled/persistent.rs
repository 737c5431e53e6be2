//! Persistent families: H-minimal graphs with harmonic height.

use super::RuledError;
use crate::graph::{Field, GraphPatch, MinimalityReport};
use crate::expr::Expr;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE", deny_unknown_fields)]
pub enum PersistentKind {
    Quadratic { m: f64, a: f64, b: f64, x0: f64, y0: f64 },
    Helicoid { a: f64, b: f64 },
}

fn lit(v: f64) -> String {
    format!("({v:?})")
}

impl PersistentKind {
    /// Height as expression text in `x, y`.
    ///
    /// The quadratic case is the plane through `(x₀, y₀)` rotated by the
    /// slope `m`, translated by the group law:
    /// `−(mX² + (m²−1)XY − mY²)/(2(1+m²)) + a(X + mY)/√(1+m²) + b + ½(x₀y − y₀x)`
    /// with `X = x − x₀`, `Y = y − y₀`.
    pub fn expr_text(&self) -> String {
        match *self {
            PersistentKind::Quadratic { m, a, b, x0, y0 } => {
                let xs = format!("(x - {})", lit(x0));
                let ys = format!("(y - {})", lit(y0));
                let d = 1.0 + m * m;
                format!(
                    "-({m}*{xs}^2 + {m2}*{xs}*{ys} - {m}*{ys}^2)/{den} + {a}*({xs} + {m}*{ys}) + {b} + 0.5*({x0}*y - {y0}*x)",
                    m = lit(m),
                    m2 = lit(m * m - 1.0),
                    den = lit(2.0 * d),
                    a = lit(a / d.sqrt()),
                    b = lit(b),
                    x0 = lit(x0),
                    y0 = lit(y0),
                )
            }
            PersistentKind::Helicoid { a, b } => format!("{}*atan2(y, x) + {}", lit(a), lit(b)),
        }
    }
}

/// Graph patch of a persistent family over `domain` with an optional mask.
///
/// Helicoid patches must exclude the `t`-axis.
pub fn persistent_family(kind: PersistentKind, domain: [f64; 4], mask: Option<&str>) -> Result<GraphPatch, RuledError> {
    if let PersistentKind::Quadratic { m, .. } = kind {
        if !m.is_finite() {
            return Err(RuledError::Invalid("slope m must be finite".into()));
        }
    }
    let u = Expr::parse(&kind.expr_text(), &["x", "y"])?;
    let mut patch = GraphPatch::new(Field::Expr(u), domain);
    if let Some(m) = mask {
        patch = patch.with_mask(m)?;
    }
    if matches!(kind, PersistentKind::Helicoid { .. }) && patch.contains(0.0, 0.0) {
        return Err(RuledError::Invalid("helicoid domain contains the origin".into()));
    }
    Ok(patch)
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct PersistenceReport {
    pub persistent: bool,
    pub max_laplacian: f64,
    pub minimality: MinimalityReport,
}

/// Harmonic and H-minimal on an `n × n` grid, both at `1e-6`.
pub fn persistence_check(patch: &GraphPatch, n: usize) -> Result<PersistenceReport, RuledError> {
    let max_laplacian = patch.max_laplacian(n)?;
    let minimality = patch.minimality_residual(n, patch.tol.char_margin)?;
    let persistent = max_laplacian <= 1e-6 && minimality.strong <= 1e-6 && minimality.weak <= 1e-6;
    Ok(PersistenceReport { persistent, max_laplacian, minimality })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_base_case() {
        let k = PersistentKind::Quadratic { m: 0.0, a: 0.0, b: 0.0, x0: 0.0, y0: 0.0 };
        let p = persistent_family(k, [-1.0, 1.0, -1.0, 1.0], None).unwrap();
        let Field::Expr(e) = &p.u else { panic!() };
        for (x, y) in [(0.3, 0.7), (-1.0, 0.5)] {
            assert!((e.eval(&[x, y]).unwrap() - x * y / 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn helicoid_values_and_origin() {
        let k = PersistentKind::Helicoid { a: 1.0, b: 0.0 };
        assert!(persistent_family(k, [-1.0, 1.0, -1.0, 1.0], None).is_err());
        let p = persistent_family(k, [0.5, 2.0, -1.0, 1.0], None).unwrap();
        let Field::Expr(e) = &p.u else { panic!() };
        assert_eq!(e.eval(&[1.0, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn checks() {
        let p = GraphPatch::from_expr("x*y/2", [-1.0, 1.0, -1.0, 1.0]).unwrap();
        assert!(persistence_check(&p, 41).unwrap().persistent);
        let p = GraphPatch::from_expr("x^2 + y^2", [-1.0, 1.0, -1.0, 1.0]).unwrap();
        let r = persistence_check(&p, 41).unwrap();
        assert!(!r.persistent && (r.max_laplacian - 4.0).abs() < 1e-12);
    }
}
