//! Lifting a continued branch to a ruled spanning surface.

use super::continuation::correct;
use super::{ClosedCurve, PhiPath, PhiStatus, PlateauError};
use crate::ruled::Mesh;
use crate::sweep::{sweep_intersections, Segment};
use serde::Serialize;

/// Horizontal segment from `c(t)` to `c(φ)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SpanRule {
    pub t: f64,
    pub phi: f64,
    pub a: [f64; 3],
    pub b: [f64; 3],
}

impl SpanRule {
    /// Point at parameter `s ∈ [0, 1]`: `a·(s(b̄ − ā), 0)`.
    pub fn at(&self, s: f64) -> [f64; 3] {
        let v = [self.b[0] - self.a[0], self.b[1] - self.a[1]];
        [
            self.a[0] + s * v[0],
            self.a[1] + s * v[1],
            self.a[2] + 0.5 * s * (self.a[0] * v[1] - v[0] * self.a[1]),
        ]
    }

    /// `|t-coordinate at s = 1 − b₃|`; zero exactly when `F(t, φ) = 0`.
    pub fn closure_gap(&self) -> f64 {
        (self.at(1.0)[2] - self.b[2]).abs()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FoldStatus {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct FoldReport {
    pub status: FoldStatus,
    /// Interior crossings of projected rules.
    pub crossings: usize,
    pub clusters: usize,
    /// Largest height difference between two rules at a shared projection.
    pub max_height_gap: f64,
    /// The single shared point, when all crossings meet there.
    pub common_point: Option<[f64; 3]>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Assembly {
    pub rules: Vec<SpanRule>,
    #[serde(skip)]
    pub mesh: Mesh,
    pub fold: FoldReport,
    pub forced: bool,
}

/// Rules sampled uniformly in `t` along `path`, the quad mesh through them,
/// and the fold check on their projections.
///
/// A path that is not `MONOTONE` is refused unless `force` is set.
pub fn spanning_assemble(
    curve: &ClosedCurve,
    path: &PhiPath,
    n_rules: usize,
    points_per_rule: usize,
    force: bool,
) -> Result<Assembly, PlateauError> {
    if path.status != PhiStatus::Monotone && !force {
        return Err(PlateauError::NotMonotone(path.status.name().into()));
    }
    let s = &path.samples;
    if s.len() < 2 {
        return Err(PlateauError::Invalid("path has fewer than two samples".into()));
    }
    let (t0, t1) = (s[0].t, s[s.len() - 1].t);
    let n_rules = n_rules.max(2);
    let mut rules = Vec::with_capacity(n_rules);
    let mut seg = 0;
    for k in 0..n_rules {
        let t = t0 + (t1 - t0) * k as f64 / (n_rules - 1) as f64;
        while seg + 2 < s.len() && (s[seg + 1].t - t) * (t1 - t0) < 0.0 {
            seg += 1;
        }
        let (p, q) = (&s[seg], &s[seg + 1]);
        let w = if q.t == p.t { 0.0 } else { ((t - p.t) / (q.t - p.t)).clamp(0.0, 1.0) };
        let guess = p.phi + w * (q.phi - p.phi);
        let phi = if w == 0.0 {
            p.phi
        } else if w == 1.0 {
            q.phi
        } else {
            correct(curve, t, guess).map_or(guess, |(x, _)| x)
        };
        rules.push(SpanRule { t, phi, a: curve.point(t)?, b: curve.point(phi)? });
    }
    let m = points_per_rule.max(2);
    let mut mesh = Mesh { vertices: Vec::with_capacity(n_rules * m), faces: Vec::new() };
    for r in &rules {
        for j in 0..m {
            mesh.vertices.push(r.at(j as f64 / (m - 1) as f64));
        }
    }
    for i in 0..n_rules - 1 {
        for j in 0..m - 1 {
            let a = i * m + j;
            mesh.faces.push([a, a + 1, a + m + 1, a + m]);
        }
    }
    let fold = fold_check(&rules);
    Ok(Assembly { rules, mesh, fold, forced: path.status != PhiStatus::Monotone })
}

/// Projected rules may only meet in one point of the lifted surface.
pub fn fold_check(rules: &[SpanRule]) -> FoldReport {
    let segs: Vec<Segment> = rules.iter().map(|r| Segment::new([r.a[0], r.a[1]], [r.b[0], r.b[1]])).collect();
    let end = 1e-9;
    let mut pts: Vec<[f64; 3]> = Vec::new();
    let mut gap: f64 = 0.0;
    for x in sweep_intersections(&segs) {
        let interior = x.ti > end && x.ti < 1.0 - end && x.tj > end && x.tj < 1.0 - end;
        if !interior {
            continue;
        }
        let zi = rules[x.i].at(x.ti)[2];
        let zj = rules[x.j].at(x.tj)[2];
        gap = gap.max((zi - zj).abs());
        pts.push([x.point[0], x.point[1], 0.5 * (zi + zj)]);
    }
    let mut reps: Vec<[f64; 3]> = Vec::new();
    for p in &pts {
        let near = reps.iter().any(|r| (r[0] - p[0]).hypot(r[1] - p[1]) <= 1e-6);
        if !near {
            reps.push(*p);
        }
    }
    let pass = pts.is_empty() || (reps.len() == 1 && gap <= 1e-6);
    FoldReport {
        status: if pass { FoldStatus::Pass } else { FoldStatus::Fail },
        crossings: pts.len(),
        clusters: reps.len(),
        max_height_gap: gap,
        common_point: if reps.len() == 1 { Some(reps[0]) } else { None },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heis::frame_decompose;
    use crate::plateau::{phi_continue, ContinueOptions};
    use std::f64::consts::PI;

    #[test]
    fn disk_assembles_with_common_center() {
        let c = ClosedCurve::new("cos(theta)", "sin(theta)", "0").unwrap();
        let p = phi_continue(&c, 0.0, PI, &ContinueOptions::default()).unwrap();
        let a = spanning_assemble(&c, &p, 60, 9, false).unwrap();
        assert_eq!(a.fold.status, FoldStatus::Pass);
        let cp = a.fold.common_point.unwrap();
        assert!(cp.iter().all(|v| v.abs() < 1e-9));
        for r in &a.rules {
            assert!(r.closure_gap() < 1e-12);
        }
    }

    #[test]
    fn rules_are_horizontal() {
        let r = SpanRule { t: 0.0, phi: 1.0, a: [0.3, -0.2, 0.7], b: [1.1, 0.4, 0.0] };
        let h = 1e-3;
        for s in [0.1, 0.5, 0.9] {
            let (p, q) = (r.at(s - h), r.at(s + h));
            let base = r.at(s);
            let v = [(q[0] - p[0]) / (2.0 * h), (q[1] - p[1]) / (2.0 * h), (q[2] - p[2]) / (2.0 * h)];
            let fv = frame_decompose(&crate::heis::HPoint::new(base[0], base[1], base[2]), v);
            assert!(fv.w.abs() < 1e-12);
        }
    }
}
