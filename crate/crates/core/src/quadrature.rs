//! Gauss-Legendre rules, composite integration and smooth bump test functions.

use rayon::prelude::*;

/// Nodes and weights of the `n`-point rule on `[-1, 1]`, ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    if n == 1 {
        return (vec![0.0], vec![2.0]);
    }
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        // Tricomi initial guess, then Newton on P_n.
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Composite rule on `[a, b]` with `panels` equal panels of `order` points.
#[derive(Clone, Debug)]
pub struct Composite1D {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Composite1D {
    pub fn new(a: f64, b: f64, panels: usize, order: usize) -> Self {
        let (gx, gw) = gauss_legendre(order);
        let h = (b - a) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * order);
        let mut weights = Vec::with_capacity(panels * order);
        for k in 0..panels {
            let lo = a + h * k as f64;
            for (x, w) in gx.iter().zip(&gw) {
                nodes.push(lo + 0.5 * h * (x + 1.0));
                weights.push(0.5 * h * w);
            }
        }
        Composite1D { nodes, weights }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Tensor Gauss-Legendre integral of `f` over `[x0,x1]×[y0,y1]`.
///
/// Rows are evaluated in parallel and summed in row order, so the result
/// does not depend on the thread count.
pub fn integrate_rect<F>(f: F, rect: [f64; 4], panels: usize, order: usize) -> f64
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    let [x0, x1, y0, y1] = rect;
    if x1 <= x0 || y1 <= y0 {
        return 0.0;
    }
    let qx = Composite1D::new(x0, x1, panels, order);
    let qy = Composite1D::new(y0, y1, panels, order);
    let rows: Vec<f64> = qy
        .nodes
        .par_iter()
        .zip(qy.weights.par_iter())
        .map(|(&y, &wy)| wy * qx.integrate(|x| f(x, y)))
        .collect();
    rows.iter().sum()
}

/// Integral at `panels` and `2·panels` with the difference as error estimate.
pub fn integrate_rect_richardson<F>(f: F, rect: [f64; 4], panels: usize, order: usize) -> (f64, f64)
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    let coarse = integrate_rect(&f, rect, panels, order);
    let fine = integrate_rect(&f, rect, 2 * panels, order);
    (fine, (fine - coarse).abs())
}

/// `exp(-1/(1-s²))` for `|s| < 1`, zero outside, with its first derivative.
pub fn bump1(s: f64) -> (f64, f64) {
    if s.abs() >= 1.0 {
        return (0.0, 0.0);
    }
    let d = 1.0 - s * s;
    let v = (-1.0 / d).exp();
    (v, v * (-2.0 * s / (d * d)))
}

/// Tensor-product bump `b((x-cx)/rx)·b((y-cy)/ry)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bump {
    pub cx: f64,
    pub cy: f64,
    pub rx: f64,
    pub ry: f64,
}

impl Bump {
    pub fn new(cx: f64, cy: f64, rx: f64, ry: f64) -> Self {
        Bump { cx, cy, rx, ry }
    }

    /// Closed support rectangle `[x0,x1,y0,y1]`.
    pub fn support(&self) -> [f64; 4] {
        [self.cx - self.rx, self.cx + self.rx, self.cy - self.ry, self.cy + self.ry]
    }

    /// `(φ, φx, φy)`.
    pub fn eval(&self, x: f64, y: f64) -> (f64, f64, f64) {
        let (bx, dbx) = bump1((x - self.cx) / self.rx);
        let (by, dby) = bump1((y - self.cy) / self.ry);
        (bx * by, dbx / self.rx * by, bx * dby / self.ry)
    }

    /// True when the support, padded by `pad`, lies inside `rect`.
    pub fn inside(&self, rect: [f64; 4], pad: f64) -> bool {
        let s = self.support();
        s[0] - pad >= rect[0] && s[1] + pad <= rect[1] && s[2] - pad >= rect[2] && s[3] + pad <= rect[3]
    }
}

/// Halton sequence in bases 2 and 3, used for deterministic bump batteries.
pub fn halton2(i: usize) -> (f64, f64) {
    fn radical(mut i: usize, b: usize) -> f64 {
        let mut f = 1.0;
        let mut r = 0.0;
        while i > 0 {
            f /= b as f64;
            r += f * (i % b) as f64;
            i /= b;
        }
        r
    }
    (radical(i, 2), radical(i, 3))
}
