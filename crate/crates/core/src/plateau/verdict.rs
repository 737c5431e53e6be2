//! Ruling out ruled spanning graphs for non-Legendrian curves.

use super::access::golden_min;
use super::{ClosedCurve, PlateauError};
use nalgebra::{Matrix3, SymmetricEigen, Vector3};
use serde::Serialize;
use std::f64::consts::TAU;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum VerdictStatus {
    NoRuledSpanningGraph,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct NonLegendrianVerdict {
    pub status: VerdictStatus,
    pub legendrian_min: f64,
    pub argmin: f64,
    /// First window found planar, if any.
    pub planar_window: Option<[f64; 2]>,
}

/// Largest distance of `m` samples on `[a, b]` from their best-fit plane.
pub fn planarity_residual(curve: &ClosedCurve, a: f64, b: f64, m: usize) -> Result<f64, PlateauError> {
    let m = m.max(4);
    let pts = (0..m)
        .map(|k| curve.point(a + (b - a) * k as f64 / (m - 1) as f64).map(Vector3::from))
        .collect::<Result<Vec<_>, _>>()?;
    let mean = pts.iter().sum::<Vector3<f64>>() / m as f64;
    let mut cov = Matrix3::zeros();
    for p in &pts {
        let d = p - mean;
        cov += d * d.transpose();
    }
    let eig = SymmetricEigen::new(cov);
    let k = eig.eigenvalues.imin();
    let normal = eig.eigenvectors.column(k);
    Ok(pts.iter().map(|p| (p - mean).dot(&normal).abs()).fold(0.0, f64::max))
}

/// `NO_RULED_SPANNING_GRAPH` when `min |w| > legendrian_tol` over `n` samples
/// and no window of length `planarity_window` is planar; otherwise
/// `INCONCLUSIVE`.
pub fn nonlegendrian_verdict(curve: &ClosedCurve, n: usize) -> Result<NonLegendrianVerdict, PlateauError> {
    let n = n.max(16);
    let h = TAU / n as f64;
    let mut best = (f64::INFINITY, 0.0);
    for k in 0..n {
        let th = h * k as f64;
        let w = curve.legendrian_defect(th)?.abs();
        if w < best.0 {
            best = (w, th);
        }
    }
    let (argmin, wmin) = golden_min(|x| Ok(curve.legendrian_defect(x)?.abs()), best.1 - h, best.1 + h)?;
    let (wmin, argmin) = if wmin < best.0 { (wmin, argmin.rem_euclid(TAU)) } else { best };

    let len = curve.tol.planarity_window;
    let windows = (4.0 * TAU / len).ceil() as usize;
    let mut planar_window = None;
    for k in 0..windows {
        let a = TAU * k as f64 / windows as f64;
        if planarity_residual(curve, a, a + len, 32)? <= curve.tol.planarity_tol {
            planar_window = Some([a, a + len]);
            break;
        }
    }
    let status = if wmin > curve.tol.legendrian_tol && planar_window.is_none() {
        VerdictStatus::NoRuledSpanningGraph
    } else {
        VerdictStatus::Inconclusive
    };
    Ok(NonLegendrianVerdict { status, legendrian_min: wmin, argmin, planar_window })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdicts() {
        let nl = ClosedCurve::new("1 - cos(theta)", "sin(theta)", "0.5*sin(theta) + 0.125*sin(theta)^2").unwrap();
        let v = nonlegendrian_verdict(&nl, 2000).unwrap();
        assert_eq!(v.status, VerdictStatus::NoRuledSpanningGraph);
        assert!((v.legendrian_min - 0.375).abs() < 1e-9);
        let circle = ClosedCurve::new("cos(theta)", "sin(theta)", "0").unwrap();
        let v = nonlegendrian_verdict(&circle, 2000).unwrap();
        assert_eq!(v.status, VerdictStatus::Inconclusive);
        assert!(v.planar_window.is_some());
        assert!((v.legendrian_min - 0.5).abs() < 1e-12);
    }
}
