//! Gluing two graph pieces along an interface curve.
//!
//! The glued surface is weakly H-minimal when each piece is and the jump of
//! the unit Gauss map across the interface is tangent to it.

use super::{GraphError, GraphPatch};
use crate::dual::Dual;
use crate::expr::Expr;
use crate::quadrature::{integrate_rect, Bump};

/// Planar curve `C(τ) = (c₁(τ), c₂(τ))` on `[τ₀, τ₁]`.
#[derive(Clone, Debug)]
pub struct InterfaceCurve {
    pub c: [Expr; 2],
    pub tau_range: [f64; 2],
}

impl InterfaceCurve {
    pub fn new(c1: &str, c2: &str, tau_range: [f64; 2]) -> Result<Self, GraphError> {
        let v = ["tau"];
        Ok(InterfaceCurve { c: [Expr::parse(c1, &v)?, Expr::parse(c2, &v)?], tau_range })
    }

    /// Point and velocity.
    pub fn eval(&self, tau: f64) -> Result<([f64; 2], [f64; 2]), GraphError> {
        let t = [Dual::variable(tau)];
        let a = self.c[0].eval_with(&t)?;
        let b = self.c[1].eval_with(&t)?;
        Ok(([a.v, b.v], [a.d, b.d]))
    }

    /// Unit normal `C′^⊥ / |C′|`, with `(a, b)^⊥ = (b, −a)`.
    pub fn normal(&self, tau: f64) -> Result<[f64; 2], GraphError> {
        let (_, d) = self.eval(tau)?;
        let len = d[0].hypot(d[1]);
        if len == 0.0 {
            return Err(GraphError::Field(format!("interface curve is singular at tau = {tau}")));
        }
        Ok([d[1] / len, -d[0] / len])
    }

    pub fn taus(&self, n: usize) -> Vec<f64> {
        let [a, b] = self.tau_range;
        let n = n.max(2);
        (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
    }
}

/// `max_τ |(ν₁ − ν₂)(C(τ)) · n(τ)|` for arbitrary unit fields.
pub fn glue_defect<F1, F2>(nu1: F1, nu2: F2, curve: &InterfaceCurve, n_tau: usize) -> Result<f64, GraphError>
where
    F1: Fn(f64, f64) -> Result<[f64; 2], GraphError>,
    F2: Fn(f64, f64) -> Result<[f64; 2], GraphError>,
{
    let mut worst: f64 = 0.0;
    for tau in curve.taus(n_tau) {
        let (c, _) = curve.eval(tau)?;
        let n = curve.normal(tau)?;
        let a = nu1(c[0], c[1])?;
        let b = nu2(c[0], c[1])?;
        worst = worst.max(((a[0] - b[0]) * n[0] + (a[1] - b[1]) * n[1]).abs());
    }
    Ok(worst)
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct GlueReport {
    pub defect: f64,
    pub pass: bool,
    /// `max |∫ ν·∇φ|` over bumps straddling the interface.
    pub weak_defect: f64,
    pub bumps_used: usize,
}

fn unit_nu(patch: &GraphPatch, x: f64, y: f64) -> Result<[f64; 2], GraphError> {
    patch
        .horizontal_gauss(x, y)?
        .nu
        .ok_or(GraphError::Characteristic { x, y })
}

/// Interface and weak-form defects of `side1 ∪ side2` along `curve`.
///
/// The weak battery places `n_bumps` bumps centered on the interior of the
/// curve; on the union, `ν` is taken from `side1` wherever it is defined.
pub fn glue_check(
    side1: &GraphPatch,
    side2: &GraphPatch,
    curve: &InterfaceCurve,
    n_tau: usize,
    n_bumps: usize,
) -> Result<GlueReport, GraphError> {
    let defect = glue_defect(|x, y| unit_nu(side1, x, y), |x, y| unit_nu(side2, x, y), curve, n_tau)?;
    let [t0, t1] = curve.tau_range;
    let (c0, _) = curve.eval(t0)?;
    let (c1, _) = curve.eval(t1)?;
    let r = 0.5 * (c1[0] - c0[0]).hypot(c1[1] - c0[1]) / (n_bumps.max(1) as f64 + 1.0);
    let mut weak: f64 = 0.0;
    let mut used = 0;
    for k in 0..n_bumps {
        let tau = t0 + (t1 - t0) * (k as f64 + 1.0) / (n_bumps as f64 + 1.0);
        let (c, _) = curve.eval(tau)?;
        let b = Bump::new(c[0], c[1], r, r);
        let s = b.support();
        if !union_clear(side1, side2, s) {
            continue;
        }
        let val = integrate_rect(
            |x, y| {
                let (_, fx, fy) = b.eval(x, y);
                if fx == 0.0 && fy == 0.0 {
                    return 0.0;
                }
                let nu = if side1.contains(x, y) { unit_nu(side1, x, y) } else { unit_nu(side2, x, y) };
                match nu {
                    Ok(n) => n[0] * fx + n[1] * fy,
                    Err(_) => f64::NAN,
                }
            },
            s,
            16,
            8,
        );
        if val.is_nan() {
            return Err(GraphError::SupportNotClear(s));
        }
        weak = weak.max(val.abs());
        used += 1;
    }
    Ok(GlueReport { defect, pass: defect <= side1.tol.glue_tol, weak_defect: weak, bumps_used: used })
}

/// Every sample of `rect` lies in one of the sides and is noncharacteristic
/// there by more than `char_margin`.
fn union_clear(side1: &GraphPatch, side2: &GraphPatch, rect: [f64; 4]) -> bool {
    let [x0, x1, y0, y1] = rect;
    let k = 12;
    for j in 0..=k {
        for i in 0..=k {
            let x = x0 + (x1 - x0) * i as f64 / k as f64;
            let y = y0 + (y1 - y0) * j as f64 / k as f64;
            let side = if side1.contains(x, y) {
                side1
            } else if side2.contains(x, y) {
                side2
            } else {
                return false;
            };
            match side.horizontal_gauss(x, y) {
                Ok(g) if g.mag > side.tol.char_margin => {}
                _ => return false,
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_fields_defect_one() {
        let c = InterfaceCurve::new("tau", "0", [0.0, 1.0]).unwrap();
        let d = glue_defect(|_, _| Ok([1.0, 0.0]), |_, _| Ok([0.0, 1.0]), &c, 11).unwrap();
        assert_eq!(d, 1.0);
        let d = glue_defect(|_, _| Ok([1.0, 0.0]), |_, _| Ok([0.6, 0.8]), &InterfaceCurve::new("0", "tau", [0.0, 1.0]).unwrap(), 11);
        assert!((d.unwrap() - 0.4).abs() < 1e-15);
    }

    #[test]
    fn tangential_jump_is_zero() {
        let c = InterfaceCurve::new("tau", "0", [0.0, 1.0]).unwrap();
        let d = glue_defect(|_, _| Ok([1.0, 0.0]), |_, _| Ok([-1.0, 0.0]), &c, 11).unwrap();
        assert_eq!(d, 0.0);
    }
}
