//! Pairwise crossings of projected rules.

use super::locus::char_locus;
use super::{RuledError, RuledSurface};
use crate::sweep::{sweep_intersections, Segment};

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct RuleCrossing {
    pub s_i: f64,
    pub s_j: f64,
    pub r_i: f64,
    pub r_j: f64,
    pub point: [f64; 2],
    /// The crossing coincides with a characteristic point of either rule.
    pub characteristic: bool,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct CrossingReport {
    pub crossings: Vec<RuleCrossing>,
    /// Some rule carries two or more distinct characteristic crossings.
    pub diagnostic_fail: bool,
}

/// Intersections among `resolution` rules spread over the `s`-range.
pub fn rule_crossing_scan(surface: &RuledSurface, resolution: usize) -> Result<CrossingReport, RuledError> {
    let grid = surface.seed.s_grid(resolution);
    let [r0, r1] = surface.r_range;
    let segs = grid
        .iter()
        .map(|&s| Ok(Segment::new(surface.param_f(s, r0)?.0, surface.param_f(s, r1)?.0)))
        .collect::<Result<Vec<_>, RuledError>>()?;
    let locus = char_locus(surface, &grid)?;
    let char_pts: Vec<Vec<[f64; 2]>> = locus
        .iter()
        .map(|cr| {
            cr.in_range(surface.r_range)
                .into_iter()
                .map(|r| surface.param_f(cr.s, r).map(|p| p.0))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;
    let near = |pts: &[[f64; 2]], p: [f64; 2]| pts.iter().any(|q| (q[0] - p[0]).hypot(q[1] - p[1]) <= 1e-8);
    let mut per_rule: Vec<Vec<[f64; 2]>> = vec![Vec::new(); grid.len()];
    let mut crossings = Vec::new();
    for c in sweep_intersections(&segs) {
        let characteristic = near(&char_pts[c.i], c.point) || near(&char_pts[c.j], c.point);
        if characteristic {
            for k in [c.i, c.j] {
                if !near(&per_rule[k], c.point) {
                    per_rule[k].push(c.point);
                }
            }
        }
        crossings.push(RuleCrossing {
            s_i: grid[c.i],
            s_j: grid[c.j],
            r_i: r0 + c.ti * (r1 - r0),
            r_j: r0 + c.tj * (r1 - r0),
            point: c.point,
            characteristic,
        });
    }
    let diagnostic_fail = per_rule.iter().any(|v| v.len() >= 2);
    Ok(CrossingReport { crossings, diagnostic_fail })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ruled::SeedCurve;

    #[test]
    fn parallel_rules_never_cross() {
        let l = RuledSurface::new(SeedCurve::from_exprs("s", "0", [-1.0, 1.0]).unwrap(), "0", [-1.0, 1.0]).unwrap();
        assert!(rule_crossing_scan(&l, 40).unwrap().crossings.is_empty());
    }

    #[test]
    fn circle_rules_meet_at_origin() {
        let c = RuledSurface::new(SeedCurve::from_exprs("cos(s)", "sin(s)", [0.0, 3.0]).unwrap(), "0", [-2.0, -0.5])
            .unwrap();
        let rep = rule_crossing_scan(&c, 24).unwrap();
        assert_eq!(rep.crossings.len(), 24 * 23 / 2);
        assert!(rep.crossings.iter().all(|x| x.characteristic && x.point[0].hypot(x.point[1]) < 1e-12));
        assert!(!rep.diagnostic_fail);
    }
}
