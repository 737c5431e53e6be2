//! Natural cubic splines: 1D, tensor-product bicubic on uniform grids, and
//! arclength curves built from a spline of the tangent angle.

use crate::quadrature::gauss_legendre;
use crate::real::Real;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SplineError {
    #[error("need at least {need} samples, got {got}")]
    TooFew { need: usize, got: usize },
    #[error("knots must be strictly increasing")]
    Unsorted,
    #[error("sample grid has {got} values, expected {expected}")]
    Shape { expected: usize, got: usize },
    #[error("consecutive samples coincide at index {0}")]
    Duplicate(usize),
}

/// Second derivatives of the natural cubic spline through `(x, y)`.
fn natural_second_derivs(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut m = vec![0.0; n];
    if n < 3 {
        return m;
    }
    // Thomas algorithm on the interior equations.
    let k = n - 2;
    let mut diag = vec![0.0; k];
    let mut upper = vec![0.0; k];
    let mut rhs = vec![0.0; k];
    for i in 0..k {
        let h0 = x[i + 1] - x[i];
        let h1 = x[i + 2] - x[i + 1];
        diag[i] = (h0 + h1) / 3.0;
        upper[i] = h1 / 6.0;
        rhs[i] = (y[i + 2] - y[i + 1]) / h1 - (y[i + 1] - y[i]) / h0;
    }
    for i in 1..k {
        let lower = (x[i + 1] - x[i]) / 6.0;
        let f = lower / diag[i - 1];
        diag[i] -= f * upper[i - 1];
        rhs[i] -= f * rhs[i - 1];
    }
    m[k] = rhs[k - 1] / diag[k - 1];
    for i in (0..k - 1).rev() {
        m[i + 1] = (rhs[i] - upper[i] * m[i + 2]) / diag[i];
    }
    m
}

#[derive(Clone, Debug)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn natural(x: &[f64], y: &[f64]) -> Result<Self, SplineError> {
        if x.len() < 2 {
            return Err(SplineError::TooFew { need: 2, got: x.len() });
        }
        if y.len() != x.len() {
            return Err(SplineError::Shape { expected: x.len(), got: y.len() });
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(SplineError::Unsorted);
        }
        let m = natural_second_derivs(x, y);
        Ok(CubicSpline { x: x.to_vec(), y: y.to_vec(), m })
    }

    pub fn knots(&self) -> &[f64] {
        &self.x
    }

    fn segment(&self, s: f64) -> usize {
        let n = self.x.len();
        match self.x.binary_search_by(|k| k.partial_cmp(&s).unwrap()) {
            Ok(i) => i.min(n - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(n - 2),
        }
    }

    /// Evaluate in any [`Real`]; the segment is picked from the primal value
    /// and extrapolation uses the end cubics.
    pub fn eval<T: Real>(&self, s: T) -> T {
        let i = self.segment(s.value());
        self.eval_on(i, s)
    }

    fn eval_on<T: Real>(&self, i: usize, s: T) -> T {
        let h = self.x[i + 1] - self.x[i];
        let a = (T::from_f64(self.x[i + 1]) - s) / T::from_f64(h);
        let b = T::one() - a;
        let h26 = T::from_f64(h * h / 6.0);
        a * T::from_f64(self.y[i])
            + b * T::from_f64(self.y[i + 1])
            + (a * a * a - a) * h26 * T::from_f64(self.m[i])
            + (b * b * b - b) * h26 * T::from_f64(self.m[i + 1])
    }

    /// Value, first and second derivative.
    pub fn eval3(&self, s: f64) -> (f64, f64, f64) {
        let i = self.segment(s);
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - s) / h;
        let b = 1.0 - a;
        let v = self.eval_on(i, s);
        let d = (self.y[i + 1] - self.y[i]) / h - (3.0 * a * a - 1.0) * h / 6.0 * self.m[i]
            + (3.0 * b * b - 1.0) * h / 6.0 * self.m[i + 1];
        let dd = a * self.m[i] + b * self.m[i + 1];
        (v, d, dd)
    }
}

/// 1D weight vectors `[A, B, C, D]` and their first and second derivatives.
fn weights(t: f64, lo: f64, h: f64) -> [[f64; 4]; 3] {
    let a = (lo + h - t) / h;
    let b = 1.0 - a;
    let h26 = h * h / 6.0;
    [
        [a, b, (a * a * a - a) * h26, (b * b * b - b) * h26],
        [-1.0 / h, 1.0 / h, -(3.0 * a * a - 1.0) * h / 6.0, (3.0 * b * b - 1.0) * h / 6.0],
        [0.0, 0.0, a, b],
    ]
}

/// Natural tensor-product bicubic spline on a uniform grid.
#[derive(Clone, Debug)]
pub struct BicubicGrid {
    pub rect: [f64; 4],
    pub nx: usize,
    pub ny: usize,
    f: Vec<f64>,
    fxx: Vec<f64>,
    fyy: Vec<f64>,
    fxxyy: Vec<f64>,
}

/// `(u, ux, uy, uxx, uxy, uyy)`.
pub type Jet2 = [f64; 6];

impl BicubicGrid {
    /// `values[j * nx + i]` is the sample at `(x_i, y_j)`.
    pub fn new(rect: [f64; 4], nx: usize, ny: usize, values: Vec<f64>) -> Result<Self, SplineError> {
        if nx < 2 || ny < 2 {
            return Err(SplineError::TooFew { need: 2, got: nx.min(ny) });
        }
        if values.len() != nx * ny {
            return Err(SplineError::Shape { expected: nx * ny, got: values.len() });
        }
        if !(rect[1] > rect[0] && rect[3] > rect[2]) {
            return Err(SplineError::Unsorted);
        }
        let xs: Vec<f64> = (0..nx).map(|i| Self::node(rect[0], rect[1], nx, i)).collect();
        let ys: Vec<f64> = (0..ny).map(|j| Self::node(rect[2], rect[3], ny, j)).collect();
        let along_x = |g: &[f64]| -> Vec<f64> {
            let mut out = vec![0.0; nx * ny];
            for j in 0..ny {
                let row = &g[j * nx..(j + 1) * nx];
                out[j * nx..(j + 1) * nx].copy_from_slice(&natural_second_derivs(&xs, row));
            }
            out
        };
        let along_y = |g: &[f64]| -> Vec<f64> {
            let mut out = vec![0.0; nx * ny];
            for i in 0..nx {
                let col: Vec<f64> = (0..ny).map(|j| g[j * nx + i]).collect();
                for (j, v) in natural_second_derivs(&ys, &col).into_iter().enumerate() {
                    out[j * nx + i] = v;
                }
            }
            out
        };
        let fxx = along_x(&values);
        let fyy = along_y(&values);
        let fxxyy = along_y(&fxx);
        Ok(BicubicGrid { rect, nx, ny, f: values, fxx, fyy, fxxyy })
    }

    /// Sample `g` on the grid and fit.
    pub fn sample<G: Fn(f64, f64) -> f64>(rect: [f64; 4], nx: usize, ny: usize, g: G) -> Result<Self, SplineError> {
        let mut v = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                v.push(g(Self::node(rect[0], rect[1], nx, i), Self::node(rect[2], rect[3], ny, j)));
            }
        }
        Self::new(rect, nx, ny, v)
    }

    fn node(a: f64, b: f64, n: usize, i: usize) -> f64 {
        a + (b - a) * i as f64 / (n - 1) as f64
    }

    fn cell(a: f64, b: f64, n: usize, t: f64) -> (usize, f64, f64) {
        let h = (b - a) / (n - 1) as f64;
        let i = (((t - a) / h).floor().max(0.0) as usize).min(n - 2);
        (i, a + h * i as f64, h)
    }

    pub fn jet(&self, x: f64, y: f64) -> Jet2 {
        let (i, xl, hx) = Self::cell(self.rect[0], self.rect[1], self.nx, x);
        let (j, yl, hy) = Self::cell(self.rect[2], self.rect[3], self.ny, y);
        let wx = weights(x, xl, hx);
        let wy = weights(y, yl, hy);
        let idx = |di: usize, dj: usize| (j + dj) * self.nx + i + di;
        let mut out = [0.0; 6];
        // (x-derivative order, y-derivative order) for each output slot.
        let orders = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)];
        for (slot, &(ox, oy)) in orders.iter().enumerate() {
            let (ax, ay) = (&wx[ox], &wy[oy]);
            let mut s = 0.0;
            for di in 0..2 {
                for dj in 0..2 {
                    let k = idx(di, dj);
                    s += ax[di] * ay[dj] * self.f[k]
                        + ax[di] * ay[dj + 2] * self.fyy[k]
                        + ax[di + 2] * ay[dj] * self.fxx[k]
                        + ax[di + 2] * ay[dj + 2] * self.fxxyy[k];
                }
            }
            out[slot] = s;
        }
        out
    }

    pub fn value(&self, x: f64, y: f64) -> f64 {
        self.jet(x, y)[0]
    }
}

const GL_ORDER: usize = 16;

/// Planar curve `γ(s) = γ(s₀) + ∫ (cos θ, sin θ)` with `θ` a natural cubic
/// spline, hence parameterized by arclength by construction.
#[derive(Clone, Debug)]
pub struct AngleSpline {
    theta: CubicSpline,
    start: [f64; 2],
    /// γ at each knot.
    at_knots: Vec<[f64; 2]>,
    gl: (Vec<f64>, Vec<f64>),
}

impl AngleSpline {
    pub fn new(s: &[f64], theta: &[f64], start: [f64; 2]) -> Result<Self, SplineError> {
        let theta = CubicSpline::natural(s, theta)?;
        let gl = gauss_legendre(GL_ORDER);
        let mut me = AngleSpline { theta, start, at_knots: vec![start], gl };
        let knots = me.theta.knots().to_vec();
        for k in 0..knots.len() - 1 {
            let prev = me.at_knots[k];
            let d = me.segment_integral(k, knots[k + 1]);
            me.at_knots.push([prev[0] + d[0], prev[1] + d[1]]);
        }
        Ok(me)
    }

    /// Fit to ordered samples of a curve: chord-length parametric spline,
    /// then resampled by arclength and converted to a tangent-angle spline.
    pub fn fit(points: &[[f64; 2]]) -> Result<Self, SplineError> {
        let n = points.len();
        if n < 4 {
            return Err(SplineError::TooFew { need: 4, got: n });
        }
        let mut t = vec![0.0];
        for i in 1..n {
            let d = (points[i][0] - points[i - 1][0]).hypot(points[i][1] - points[i - 1][1]);
            if d == 0.0 {
                return Err(SplineError::Duplicate(i));
            }
            t.push(t[i - 1] + d);
        }
        let xs: Vec<f64> = points.iter().map(|p| p[0]).collect();
        let ys: Vec<f64> = points.iter().map(|p| p[1]).collect();
        let sx = CubicSpline::natural(&t, &xs)?;
        let sy = CubicSpline::natural(&t, &ys)?;
        let speed = |u: f64| sx.eval3(u).1.hypot(sy.eval3(u).1);
        let (gx, gw) = gauss_legendre(GL_ORDER);
        // Arclength at dense parameter samples.
        let m = 8 * (n - 1);
        let us: Vec<f64> = (0..=m).map(|k| t[n - 1] * k as f64 / m as f64).collect();
        let mut arc = vec![0.0];
        for k in 0..m {
            let (a, b) = (us[k], us[k + 1]);
            let seg: f64 = gx
                .iter()
                .zip(&gw)
                .map(|(x, w)| 0.5 * (b - a) * w * speed(a + 0.5 * (b - a) * (x + 1.0)))
                .sum();
            arc.push(arc[k] + seg);
        }
        let mut angles = Vec::with_capacity(m + 1);
        for &u in &us {
            let a = sy.eval3(u).1.atan2(sx.eval3(u).1);
            angles.push(match angles.last() {
                Some(&prev) => unwrap_near(a, prev),
                None => a,
            });
        }
        Self::new(&arc, &angles, points[0])
    }

    pub fn s_range(&self) -> [f64; 2] {
        let k = self.theta.knots();
        [k[0], k[k.len() - 1]]
    }

    fn segment_integral<T: Real>(&self, k: usize, s: T) -> [T; 2] {
        let sk = self.theta.knots()[k];
        let len = s - T::from_f64(sk);
        let (mut cx, mut cy) = (T::zero(), T::zero());
        for (x, w) in self.gl.0.iter().zip(&self.gl.1) {
            let tau = T::from_f64(0.5 * (x + 1.0));
            let th = self.theta.eval_on(k, T::from_f64(sk) + len * tau);
            let w = T::from_f64(0.5 * w);
            cx = cx + w * th.cos();
            cy = cy + w * th.sin();
        }
        [len * cx, len * cy]
    }

    /// `γ(s)` in any [`Real`], so derivatives come from nested duals.
    pub fn eval<T: Real>(&self, s: T) -> [T; 2] {
        let k = self.theta.segment(s.value());
        let base = self.at_knots[k];
        let d = self.segment_integral(k, s);
        [T::from_f64(base[0]) + d[0], T::from_f64(base[1]) + d[1]]
    }

    /// Tangent angle spline value, slope and curvature.
    pub fn angle(&self, s: f64) -> (f64, f64, f64) {
        self.theta.eval3(s)
    }

    pub fn start(&self) -> [f64; 2] {
        self.start
    }
}

fn unwrap_near(a: f64, prev: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    a + tau * ((prev - a) / tau).round()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual::Dual;

    #[test]
    fn spline_reproduces_lines_and_knots() {
        let x = [0.0, 0.5, 1.5, 2.0, 3.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v - 1.0).collect();
        let s = CubicSpline::natural(&x, &y).unwrap();
        for t in [0.1, 0.7, 1.9, 2.5] {
            let (v, d, dd) = s.eval3(t);
            assert!((v - (2.0 * t - 1.0)).abs() < 1e-14 && (d - 2.0).abs() < 1e-13 && dd.abs() < 1e-13);
        }
        let y2 = [0.3, -1.0, 2.0, 0.0, 1.0];
        let s2 = CubicSpline::natural(&x, &y2).unwrap();
        for (a, b) in x.iter().zip(&y2) {
            assert!((s2.eval(*a) - b).abs() < 1e-14);
        }
        assert_eq!(CubicSpline::natural(&[0.0, 0.0], &[1.0, 1.0]).unwrap_err(), SplineError::Unsorted);
    }

    #[test]
    fn dual_eval_matches_analytic_derivative() {
        let x: Vec<f64> = (0..9).map(|i| i as f64 * 0.4).collect();
        let y: Vec<f64> = x.iter().map(|v| v.sin()).collect();
        let s = CubicSpline::natural(&x, &y).unwrap();
        let d = s.eval(Dual::variable(1.3));
        let (_, d1, _) = s.eval3(1.3);
        assert!((d.d - d1).abs() < 1e-13);
    }

    #[test]
    fn bicubic_exact_on_bilinear_and_close_on_smooth() {
        let g = BicubicGrid::sample([0.0, 1.0, -1.0, 1.0], 6, 7, |x, y| 1.0 + 2.0 * x - y + 0.5 * x * y).unwrap();
        let j = g.jet(0.37, 0.21);
        assert!((j[0] - (1.0 + 0.74 - 0.21 + 0.5 * 0.37 * 0.21)).abs() < 1e-13);
        assert!((j[1] - (2.0 + 0.5 * 0.21)).abs() < 1e-12);
        assert!((j[4] - 0.5).abs() < 1e-12);
        let g = BicubicGrid::sample([0.0, 1.0, 0.0, 1.0], 41, 41, |x, y| (x + 2.0 * y).sin()).unwrap();
        let j = g.jet(0.5, 0.5);
        assert!((j[0] - 1.5f64.sin()).abs() < 1e-6);
        assert!((j[2] - 2.0 * 1.5f64.cos()).abs() < 1e-4);
    }

    #[test]
    fn angle_spline_circle() {
        let s: Vec<f64> = (0..=40).map(|i| i as f64 * 0.05).collect();
        let th: Vec<f64> = s.iter().map(|v| v + std::f64::consts::FRAC_PI_2).collect();
        let c = AngleSpline::new(&s, &th, [1.0, 0.0]).unwrap();
        for t in [0.0f64, 0.33, 1.0, 1.97] {
            let p = c.eval(t);
            assert!((p[0] - t.cos()).abs() < 1e-12 && (p[1] - t.sin()).abs() < 1e-12, "{t}");
            let d = c.eval(Dual::variable(t as f64));
            assert!((d[0].d.hypot(d[1].d) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn fit_recovers_sampled_arc() {
        let pts: Vec<[f64; 2]> = (0..=60).map(|i| {
            let t = i as f64 * 0.025;
            [2.0 * t.cos(), 2.0 * t.sin()]
        }).collect();
        let c = AngleSpline::fit(&pts).unwrap();
        let [_, s1] = c.s_range();
        assert!((s1 - 3.0).abs() < 1e-5, "{s1}");
        let end = c.eval(s1);
        assert!((end[0] - 2.0 * 1.5f64.cos()).abs() < 1e-5 && (end[1] - 2.0 * 1.5f64.sin()).abs() < 1e-5);
    }
}
