//! Root structure of the accessibility function.

use super::{access_from_points, angle_dist, wrap, ClosedCurve, PlateauError};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::TAU;

/// `F(θᵢ, θⱼ)` on the uniform grid `θₖ = 2πk/n`, row-major.
#[derive(Clone, Debug, Serialize)]
pub struct AccessField {
    pub n: usize,
    pub thetas: Vec<f64>,
    pub values: Vec<f64>,
}

impl AccessField {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }
}

pub fn access_field(curve: &ClosedCurve, n: usize) -> Result<AccessField, PlateauError> {
    let thetas: Vec<f64> = (0..n).map(|k| TAU * k as f64 / n as f64).collect();
    let pts = thetas.iter().map(|&t| curve.point(t)).collect::<Result<Vec<_>, _>>()?;
    let values: Vec<f64> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let pts = &pts;
            (0..n).map(move |j| access_from_points(&pts[i], &pts[j]))
        })
        .collect();
    Ok(AccessField { n, thetas, values })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AccessRoot {
    /// In `[0, 2π)`.
    pub theta: f64,
    /// Root without a sign change, found as a minimum of `|F|`.
    pub tangential: bool,
}

/// Bisection on a bracketing interval down to width `1e-14`.
fn bisect<F>(mut f: F, mut a: f64, mut b: f64, mut fa: f64) -> Result<f64, PlateauError>
where
    F: FnMut(f64) -> Result<f64, PlateauError>,
{
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (b - a).abs() <= 1e-14 || m == a || m == b {
            break;
        }
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Golden-section minimum of `f` on `[a, b]`.
pub(crate) fn golden_min<F>(mut f: F, mut a: f64, mut b: f64) -> Result<(f64, f64), PlateauError>
where
    F: FnMut(f64) -> Result<f64, PlateauError>,
{
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while (b - a).abs() > 1e-13 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d)?;
        }
    }
    let x = 0.5 * (a + b);
    Ok((x, f(x)?))
}

/// Roots of `f` on the grid `xs` (values `fs`): sign changes refined by
/// bisection, plus interior local minima of `|f|` whose refined value is at
/// most `tan_tol` (flagged tangential).
fn grid_roots<F, A>(mut f: F, mut abs_f: A, xs: &[f64], fs: &[f64], tan_tol: f64) -> Result<Vec<(f64, bool)>, PlateauError>
where
    F: FnMut(f64) -> Result<f64, PlateauError>,
    A: FnMut(f64) -> Result<f64, PlateauError>,
{
    let n = xs.len();
    let mut out = Vec::new();
    for k in 0..n - 1 {
        let (a, b) = (fs[k], fs[k + 1]);
        if a == 0.0 && k > 0 {
            out.push((xs[k], false));
        } else if a * b < 0.0 {
            out.push((bisect(&mut f, xs[k], xs[k + 1], a)?, false));
        }
    }
    for k in 1..n - 1 {
        let (l, m, r) = (fs[k - 1], fs[k], fs[k + 1]);
        let signs_agree = l * m > 0.0 && m * r > 0.0;
        if signs_agree && m.abs() <= l.abs() && m.abs() <= r.abs() {
            let (x, v) = golden_min(&mut abs_f, xs[k - 1], xs[k + 1])?;
            if v <= tan_tol {
                out.push((x, true));
            }
        }
    }
    Ok(out)
}

/// All `θ` with `F(θ₀, θ) = 0`, `θ₀` included, sorted in `[0, 2π)`.
///
/// The trivial root is divided out through
/// `G(θ) = F(θ₀, θ) / (2 sin((θ − θ₀)/2))`, which tends to `±w(θ₀)` at the
/// two ends of `(θ₀, θ₀ + 2π)`.
pub fn access_set(curve: &ClosedCurve, th0: f64, n: usize) -> Result<Vec<AccessRoot>, PlateauError> {
    let n = n.max(16);
    let p0 = curve.point(th0)?;
    let w0 = curve.legendrian_defect(th0)?;
    let w_end = if w0.abs() <= curve.tol.legendrian_tol { 0.0 } else { w0 };
    let g = |th: f64| -> Result<f64, PlateauError> {
        Ok(access_from_points(&p0, &curve.point(th)?) / (2.0 * (0.5 * (th - th0)).sin()))
    };
    let abs_f = |th: f64| -> Result<f64, PlateauError> { Ok(access_from_points(&p0, &curve.point(th)?).abs()) };
    let xs: Vec<f64> = (0..=n).map(|k| th0 + TAU * k as f64 / n as f64).collect();
    let mut fs = Vec::with_capacity(n + 1);
    fs.push(w_end);
    for &x in &xs[1..n] {
        fs.push(g(x)?);
    }
    fs.push(-w_end);
    let found = grid_roots(g, abs_f, &xs, &fs, curve.tol.manifold_tol)?;
    let mut roots = vec![AccessRoot { theta: wrap(th0), tangential: false }];
    for (x, tangential) in found {
        let th = wrap(x);
        if angle_dist(th, th0) <= 1e-6 || roots.iter().any(|r| angle_dist(r.theta, th) <= 1e-8) {
            continue;
        }
        roots.push(AccessRoot { theta: th, tangential });
    }
    roots.sort_by(|a, b| a.theta.total_cmp(&b.theta));
    Ok(roots)
}

/// Zeros of the Legendrian defect `w` in `[0, 2π)`.
pub fn legendrian_points(curve: &ClosedCurve, n: usize) -> Result<Vec<f64>, PlateauError> {
    let n = n.max(16);
    let w = |th: f64| curve.legendrian_defect(th);
    let xs: Vec<f64> = (0..=n).map(|k| TAU * k as f64 / n as f64).collect();
    let fs = xs.iter().map(|&x| w(x)).collect::<Result<Vec<_>, _>>()?;
    let mut out: Vec<f64> = Vec::new();
    if fs[0] == 0.0 {
        out.push(0.0);
    }
    let found = grid_roots(w, |x| Ok(w(x)?.abs()), &xs, &fs, curve.tol.manifold_tol)?;
    for (x, _) in found {
        let th = wrap(x);
        if !out.iter().any(|&r| angle_dist(r, th) <= 1e-8) {
            out.push(th);
        }
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct IsolatedReport {
    /// `θ₀` whose access set is `{θ₀}`.
    pub points: Vec<f64>,
    pub legendrian: Vec<f64>,
    /// Isolated points with `|w| > legendrian_tol`; always expected empty.
    pub inconsistent: Vec<f64>,
}

/// Isolated points of the root set of `F`.
///
/// Off the Legendrian points `G` takes opposite signs `±w(θ₀)` at the two ends
/// of its interval, so a partner root always exists there; only the zeros of
/// `w` need testing.
pub fn isolated_points(curve: &ClosedCurve, n: usize) -> Result<IsolatedReport, PlateauError> {
    let legendrian = legendrian_points(curve, n)?;
    let mut points = Vec::new();
    let mut inconsistent = Vec::new();
    for &th in &legendrian {
        if access_set(curve, th, n)?.len() == 1 {
            points.push(th);
            if curve.legendrian_defect(th)?.abs() > curve.tol.legendrian_tol {
                inconsistent.push(th);
            }
        }
    }
    Ok(IsolatedReport { points, legendrian, inconsistent })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn circle() -> ClosedCurve {
        ClosedCurve::new("cos(theta)", "sin(theta)", "0").unwrap()
    }

    #[test]
    fn field_antisymmetric() {
        let c = ClosedCurve::new("1 - cos(theta)", "sin(theta)", "sin(4*sin(1 - cos(theta)))").unwrap();
        let f = access_field(&c, 64).unwrap();
        for i in 0..64 {
            assert_eq!(f.at(i, i), 0.0);
            for j in 0..64 {
                assert_eq!(f.at(i, j), -f.at(j, i));
            }
        }
    }

    #[test]
    fn circle_partner_is_antipode() {
        let c = circle();
        for th0 in [0.0, 1.0, 5.0] {
            let r = access_set(&c, th0, 256).unwrap();
            assert_eq!(r.len(), 2, "{r:?}");
            let other = r.iter().find(|x| angle_dist(x.theta, th0) > 1e-3).unwrap();
            assert!(angle_dist(other.theta, th0 + PI) < 1e-12);
        }
        let iso = isolated_points(&c, 256).unwrap();
        assert!(iso.points.is_empty() && iso.legendrian.is_empty());
    }

    #[test]
    fn tangential_root_detected() {
        // F(0, θ) = (1 − cos θ)·(1 − cos(θ − 2))², double root at θ = 2.
        let c = ClosedCurve::new("cos(theta)", "sin(theta)", "0.5*sin(theta) + (1 - cos(theta))*(1 - cos(theta - 2))^2").unwrap();
        let r = access_set(&c, 0.0, 512).unwrap();
        let t = r.iter().find(|x| x.tangential).expect("tangential root");
        assert!((t.theta - 2.0).abs() < 1e-4, "{r:?}");
    }
}
