//! The lifted ruled surface as a height field `t = u(x, y)`.
//!
//! `(s, r)` is recovered from `(x, y)` by Newton on `F(s, r) = (x, y)`; the
//! jet of `u` comes from repeating a few Newton steps in nested dual
//! arithmetic seeded at `(x, y)`, which carries exact second derivatives.

use super::{dot_perp, RuledError, RuledSurface};
use crate::dual::Dual;
use crate::graph::{Field, GraphError, GraphPatch, HeightField};
use crate::real::Real;
use crate::spline::Jet2;
use std::sync::Arc;

type HD = Dual<Dual<f64>>;

const TABLE: usize = 64;

#[derive(Clone, Debug)]
pub struct RuledGraph {
    surface: RuledSurface,
    table: Vec<(f64, f64, [f64; 2])>,
    bbox: [f64; 4],
}

impl RuledGraph {
    pub fn new(surface: RuledSurface) -> Result<Self, RuledError> {
        let [r0, r1] = surface.r_range;
        let mut table = Vec::with_capacity(TABLE * TABLE);
        let mut bbox = [f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY];
        for s in surface.seed.s_grid(TABLE) {
            for k in 0..TABLE {
                let r = r0 + (r1 - r0) * k as f64 / (TABLE - 1) as f64;
                let (p, _) = surface.param_f(s, r)?;
                bbox = [bbox[0].min(p[0]), bbox[1].max(p[0]), bbox[2].min(p[1]), bbox[3].max(p[1])];
                table.push((s, r, p));
            }
        }
        Ok(RuledGraph { surface, table, bbox })
    }

    pub fn surface(&self) -> &RuledSurface {
        &self.surface
    }

    /// Bounding box of the sampled image of the parameter box.
    pub fn bbox(&self) -> [f64; 4] {
        self.bbox
    }

    /// Graph patch over the bounding box; points outside the image of the
    /// parameter box are excluded by the field itself.
    pub fn into_patch(self) -> GraphPatch {
        let tol = self.surface.tol;
        let bbox = self.bbox;
        GraphPatch::new(Field::Custom(Arc::new(self)), bbox).with_tol(tol)
    }

    fn step<T: Real>(&self, s: T, r: T, x: T, y: T) -> Result<(T, T), RuledError> {
        let [g, d1, d2] = self.surface.seed.jet_t(s)?;
        let res = [g[0] + r * d1[1] - x, g[1] - r * d1[0] - y];
        let fs = [d1[0] + r * d2[1], d1[1] - r * d2[0]];
        let fr = [d1[1], -d1[0]];
        let det = dot_perp(fs, fr);
        let ds = (res[0] * fr[1] - res[1] * fr[0]) / det;
        let dr = (fs[0] * res[1] - fs[1] * res[0]) / det;
        Ok((s - ds, r - dr))
    }

    /// Parameters `(s, r)` with `F(s, r) = (x, y)` inside the box.
    pub fn invert(&self, x: f64, y: f64) -> Option<(f64, f64)> {
        let &(mut s, mut r, _) = self
            .table
            .iter()
            .min_by(|a, b| {
                let da = (a.2[0] - x).powi(2) + (a.2[1] - y).powi(2);
                let db = (b.2[0] - x).powi(2) + (b.2[1] - y).powi(2);
                da.total_cmp(&db)
            })?;
        let scale = 1.0 + x.abs().max(y.abs());
        for _ in 0..60 {
            let (s2, r2) = self.step(s, r, x, y).ok()?;
            let moved = (s2 - s).abs() + (r2 - r).abs();
            s = s2;
            r = r2;
            if !s.is_finite() || !r.is_finite() {
                return None;
            }
            if moved <= 1e-15 * (1.0 + s.abs() + r.abs()) {
                break;
            }
        }
        let [s0, s1] = self.surface.s_range();
        let [r0, r1] = self.surface.r_range;
        let slack = 1e-10;
        if s < s0 - slack || s > s1 + slack || r < r0 - slack || r > r1 + slack {
            return None;
        }
        let [gx, gy, _] = self.surface.lift_t(s, r).ok()?;
        ((gx - x).hypot(gy - y) <= 1e-11 * scale).then_some((s, r))
    }

    fn jet_pass(&self, s: f64, r: f64, x: f64, y: f64, a: [f64; 2], b: [f64; 2]) -> Result<HD, RuledError> {
        let xh = Dual::new(Dual::new(x, a[0]), Dual::new(b[0], 0.0));
        let yh = Dual::new(Dual::new(y, a[1]), Dual::new(b[1], 0.0));
        let (mut sh, mut rh): (HD, HD) = (HD::from_f64(s), HD::from_f64(r));
        for _ in 0..3 {
            (sh, rh) = self.step(sh, rh, xh, yh)?;
        }
        Ok(self.surface.lift_t(sh, rh)?[2])
    }
}

impl HeightField for RuledGraph {
    fn jet(&self, x: f64, y: f64) -> Result<Jet2, GraphError> {
        let (s, r) = self.invert(x, y).ok_or(GraphError::OutsideDomain { x, y })?;
        let err = |e: RuledError| GraphError::Field(e.to_string());
        let (ex, ey) = ([1.0, 0.0], [0.0, 1.0]);
        let xx = self.jet_pass(s, r, x, y, ex, ex).map_err(err)?;
        let xy = self.jet_pass(s, r, x, y, ex, ey).map_err(err)?;
        let yy = self.jet_pass(s, r, x, y, ey, ey).map_err(err)?;
        Ok([xx.v.v, xx.v.d, xy.d.v, xx.d.d, xy.d.d, yy.d.d])
    }

    fn grad(&self, x: f64, y: f64) -> Result<[f64; 3], GraphError> {
        let (s, r) = self.invert(x, y).ok_or(GraphError::OutsideDomain { x, y })?;
        let xy = self
            .jet_pass(s, r, x, y, [1.0, 0.0], [0.0, 1.0])
            .map_err(|e| GraphError::Field(e.to_string()))?;
        Ok([xy.v.v, xy.v.d, xy.d.v])
    }

    fn contains(&self, x: f64, y: f64) -> bool {
        self.invert(x, y).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ruled::SeedCurve;

    #[test]
    fn line_seed_gives_saddle() {
        let s = RuledSurface::new(SeedCurve::from_exprs("s", "0", [-1.0, 1.0]).unwrap(), "0", [-1.0, 1.0]).unwrap();
        let g = RuledGraph::new(s).unwrap();
        let j = g.jet(0.3, -0.4).unwrap();
        let want = [0.3 * -0.4 / 2.0, -0.2, 0.15, 0.0, 0.5, 0.0];
        for (a, b) in j.iter().zip(want) {
            assert!((a - b).abs() < 1e-13, "{j:?}");
        }
        assert!(!g.contains(1.5, 0.0));
    }

    #[test]
    fn jet_matches_differences() {
        let s = RuledSurface::new(
            SeedCurve::from_exprs("cos(s)", "sin(s)", [0.2, 2.0]).unwrap(),
            "0.3*s^2 - 0.2*s",
            [-0.4, 0.4],
        )
        .unwrap();
        let g = RuledGraph::new(s).unwrap();
        let (x, y, h) = (0.5, 0.8, 1e-4);
        let j = g.jet(x, y).unwrap();
        let u = |x, y| g.jet(x, y).unwrap()[0];
        let ux = (u(x + h, y) - u(x - h, y)) / (2.0 * h);
        let uyy = (u(x, y + h) - 2.0 * u(x, y) + u(x, y - h)) / (h * h);
        assert!((j[1] - ux).abs() < 1e-7, "{} {}", j[1], ux);
        assert!((j[5] - uyy).abs() < 1e-5, "{} {}", j[5], uyy);
    }
}
