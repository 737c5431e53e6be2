//! Pairwise intersections of planar segments by an x-sorted sweep.
//!
//! Segments are sorted by their left end; an active list holds segments whose
//! x-extent still overlaps the sweep position. Collinear overlaps are ignored
//! since they carry no single crossing point.

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub a: [f64; 2],
    pub b: [f64; 2],
}

impl Segment {
    pub fn new(a: [f64; 2], b: [f64; 2]) -> Self {
        Segment { a, b }
    }

    fn xmin(&self) -> f64 {
        self.a[0].min(self.b[0])
    }

    fn xmax(&self) -> f64 {
        self.a[0].max(self.b[0])
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Crossing {
    pub i: usize,
    pub j: usize,
    pub point: [f64; 2],
    /// Parameters along segment `i` and `j`, each in `[0, 1]`.
    pub ti: f64,
    pub tj: f64,
}

fn cross(u: [f64; 2], v: [f64; 2]) -> f64 {
    u[0] * v[1] - u[1] * v[0]
}

/// Intersection of two segments, `None` when disjoint, parallel or collinear.
pub fn intersect(s: &Segment, t: &Segment) -> Option<([f64; 2], f64, f64)> {
    let r = [s.b[0] - s.a[0], s.b[1] - s.a[1]];
    let q = [t.b[0] - t.a[0], t.b[1] - t.a[1]];
    let den = cross(r, q);
    let scale = (r[0].hypot(r[1]) * q[0].hypot(q[1])).max(f64::MIN_POSITIVE);
    if den.abs() <= 1e-14 * scale {
        return None;
    }
    let d = [t.a[0] - s.a[0], t.a[1] - s.a[1]];
    let u = cross(d, q) / den;
    let v = cross(d, r) / den;
    let tol = 1e-12;
    if u < -tol || u > 1.0 + tol || v < -tol || v > 1.0 + tol {
        return None;
    }
    let u = u.clamp(0.0, 1.0);
    Some(([s.a[0] + u * r[0], s.a[1] + u * r[1]], u, v.clamp(0.0, 1.0)))
}

/// All crossing pairs `(i, j)` with `i < j`, sorted by `(i, j)`.
pub fn sweep_intersections(segs: &[Segment]) -> Vec<Crossing> {
    let mut order: Vec<usize> = (0..segs.len()).collect();
    order.sort_by(|&p, &q| segs[p].xmin().total_cmp(&segs[q].xmin()).then(p.cmp(&q)));
    let mut active: Vec<usize> = Vec::new();
    let mut out = Vec::new();
    for &k in &order {
        let x = segs[k].xmin();
        active.retain(|&a| segs[a].xmax() >= x - 1e-12);
        for &a in &active {
            if let Some((p, ta, tk)) = intersect(&segs[a], &segs[k]) {
                let (i, j, ti, tj) = if a < k { (a, k, ta, tk) } else { (k, a, tk, ta) };
                out.push(Crossing { i, j, point: p, ti, tj });
            }
        }
        active.push(k);
    }
    out.sort_by(|p, q| (p.i, p.j).cmp(&(q.i, q.j)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_cross() {
        let s = Segment::new([0.0, 0.0], [2.0, 2.0]);
        let t = Segment::new([0.0, 2.0], [2.0, 0.0]);
        let (p, u, v) = intersect(&s, &t).unwrap();
        assert_eq!(p, [1.0, 1.0]);
        assert_eq!((u, v), (0.5, 0.5));
    }

    #[test]
    fn parallel_and_collinear_ignored() {
        let s = Segment::new([0.0, 0.0], [2.0, 0.0]);
        assert!(intersect(&s, &Segment::new([0.0, 1.0], [2.0, 1.0])).is_none());
        assert!(intersect(&s, &Segment::new([1.0, 0.0], [3.0, 0.0])).is_none());
    }

    #[test]
    fn diameters_meet_at_center() {
        let segs: Vec<Segment> = (0..8)
            .map(|k| {
                let a = k as f64 * 0.3;
                Segment::new([a.cos(), a.sin()], [-a.cos(), -a.sin()])
            })
            .collect();
        let xs = sweep_intersections(&segs);
        assert_eq!(xs.len(), 28);
        assert!(xs.iter().all(|c| c.point[0].abs() < 1e-12 && c.point[1].abs() < 1e-12));
    }
}
