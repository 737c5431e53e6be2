//! Characteristic locus: roots of `(κ/2) r² − r + W₀ = 0` along each rule.

use super::{RuledError, RuledSurface};

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct CharRoots {
    pub s: f64,
    pub kappa: f64,
    pub w0: f64,
    /// `1 − 2κW₀`.
    pub disc: f64,
    /// Ascending; a double root appears once.
    pub roots: Vec<f64>,
    pub double: bool,
}

/// Roots of `(κ/2) r² − r + W₀` with the cancellation-free formula.
pub fn char_roots(kappa: f64, w0: f64, kappa_zero: f64, double_tol: f64) -> (Vec<f64>, f64, bool) {
    let disc = 1.0 - 2.0 * kappa * w0;
    if kappa.abs() <= kappa_zero {
        return (vec![w0], disc, false);
    }
    if disc.abs() <= double_tol {
        return (vec![1.0 / kappa], disc, true);
    }
    if disc < 0.0 {
        return (Vec::new(), disc, false);
    }
    // b = −1 in a r² + b r + c; both roots without subtracting near-equals.
    let q = 1.0 + disc.sqrt();
    let mut r = vec![q / kappa, 2.0 * w0 / q];
    r.sort_by(f64::total_cmp);
    (r, disc, false)
}

/// Characteristic roots at each `s` of the grid.
pub fn char_locus(surface: &RuledSurface, s_grid: &[f64]) -> Result<Vec<CharRoots>, RuledError> {
    s_grid
        .iter()
        .map(|&s| {
            let kappa = surface.seed.kappa(s)?;
            let w0 = surface.w0(s)?;
            let (roots, disc, double) = char_roots(kappa, w0, surface.tol.kappa_zero, surface.tol.double_root_tol);
            Ok(CharRoots { s, kappa, w0, disc, roots, double })
        })
        .collect()
}

impl CharRoots {
    /// Roots inside `[r0, r1]`.
    pub fn in_range(&self, r: [f64; 2]) -> Vec<f64> {
        self.roots.iter().copied().filter(|&x| x >= r[0] && x <= r[1]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ruled::SeedCurve;

    #[test]
    fn circle_double_root() {
        let c = RuledSurface::new(SeedCurve::from_exprs("cos(s)", "sin(s)", [0.0, 6.0]).unwrap(), "0", [-2.0, 2.0])
            .unwrap();
        for cr in char_locus(&c, &c.seed.s_grid(17)).unwrap() {
            assert!(cr.double && cr.disc.abs() <= 1e-10);
            assert!((cr.roots[0] + 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn line_roots() {
        let l = RuledSurface::new(SeedCurve::from_exprs("s", "0", [-1.0, 1.0]).unwrap(), "0", [-1.0, 1.0]).unwrap();
        assert!(char_locus(&l, &[0.3]).unwrap()[0].roots == vec![0.0]);
        let l = RuledSurface::new(SeedCurve::from_exprs("s", "0", [-1.0, 1.0]).unwrap(), "0.7*s - 2", [-1.0, 1.0]).unwrap();
        assert!((char_locus(&l, &[0.3]).unwrap()[0].roots[0] - 0.7).abs() < 1e-15);
    }

    #[test]
    fn stable_roots_satisfy_quadratic() {
        for &(k, w) in &[(1e-6, 0.3), (2.0, 0.2), (-3.0, 1.5), (0.5, -4.0), (1.0, 0.49999999)] {
            let (rs, _, _) = char_roots(k, w, 1e-12, 1e-10);
            for r in rs {
                let v = 0.5 * k * r * r - r + w;
                assert!(v.abs() <= 1e-10 * (1.0 + r * r), "k={k} w={w} r={r} v={v}");
            }
        }
        assert!(char_roots(1.0, 1.0, 1e-12, 1e-10).0.is_empty());
    }
}
