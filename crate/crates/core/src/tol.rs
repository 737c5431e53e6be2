//! Default tolerances, collected so the CLI can override them in one place.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Gauss-map magnitude at or below which a point is characteristic.
    pub char_tol: f64,
    /// Exclusion radius around detected characteristic points.
    pub char_margin: f64,
    pub glue_tol: f64,
    /// Absolute slack for floating-point group identities.
    pub group_tol: f64,
    pub legendrian_tol: f64,
    pub planarity_window: f64,
    pub planarity_tol: f64,
    /// Offset from an isolated point before continuation engages.
    pub seed_offset: f64,
    /// `|1 - 2κW₀|` below which a characteristic root is double.
    pub double_root_tol: f64,
    /// `|κ|` below which the characteristic equation is linear.
    pub kappa_zero: f64,
    /// Residual allowed on the continuation manifold `F(t, φ) = 0`.
    pub manifold_tol: f64,
    pub root_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            char_tol: 1e-9,
            char_margin: 1e-3,
            glue_tol: 1e-8,
            group_tol: 1e-12,
            legendrian_tol: 1e-6,
            planarity_window: 0.1,
            planarity_tol: 1e-8,
            seed_offset: 1e-4,
            double_root_tol: 1e-10,
            kappa_zero: 1e-12,
            manifold_tol: 1e-9,
            root_tol: 1e-10,
        }
    }
}
