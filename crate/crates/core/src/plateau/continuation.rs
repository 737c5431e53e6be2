//! Following the nontrivial root branch `φ(t)` of `F(t, φ) = 0`.

use super::{access_from_points, angle_dist, wrap, ClosedCurve, PlateauError};
use serde::Serialize;
use std::f64::consts::TAU;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhiSample {
    pub t: f64,
    /// Unwrapped, with `φ − t ∈ [0, 2π]`.
    pub phi: f64,
    pub dphi: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PhiStatus {
    Monotone,
    Obstructed { t_star: f64 },
    Terminated { reason: String },
}

impl PhiStatus {
    pub fn name(&self) -> &'static str {
        match self {
            PhiStatus::Monotone => "MONOTONE",
            PhiStatus::Obstructed { .. } => "OBSTRUCTED",
            PhiStatus::Terminated { .. } => "TERMINATED",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PhiPath {
    pub samples: Vec<PhiSample>,
    pub status: PhiStatus,
    /// Where the branch rejoins the diagonal, if it does.
    pub end_t: Option<f64>,
    /// Every sign change of `φ′` met along the way.
    pub obstructions: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct ContinueOptions {
    /// `+1` continues towards increasing `t`, `−1` towards decreasing.
    pub direction: f64,
    pub h_init: f64,
    pub h_max: f64,
    pub h_min: f64,
    /// Stop after `t` has moved this far.
    pub max_span: f64,
    pub continue_past_obstruction: bool,
}

impl Default for ContinueOptions {
    fn default() -> Self {
        ContinueOptions {
            direction: 1.0,
            h_init: 1e-4,
            h_max: 0.02,
            h_min: 1e-12,
            max_span: TAU,
            continue_past_obstruction: false,
        }
    }
}

/// `(F, N, D)` at `(t, φ)`, where `φ′ = N/D` along the root set.
fn fnd(curve: &ClosedCurve, t: f64, phi: f64) -> Result<(f64, f64, f64), PlateauError> {
    let (a, da) = curve.jet(t)?;
    let (b, db) = curve.jet(phi)?;
    let f = access_from_points(&a, &b);
    let n = da[2] - 0.5 * (b[0] * da[1] - b[1] * da[0]);
    let d = db[2] - 0.5 * (a[0] * db[1] - a[1] * db[0]);
    Ok((f, n, d))
}

fn slope(curve: &ClosedCurve, t: f64, phi: f64) -> Result<f64, PlateauError> {
    let (_, n, d) = fnd(curve, t, phi)?;
    Ok(n / d)
}

/// Newton on the deflated `G = F / (2 sin((φ − t)/2))` at fixed `t`.
pub(crate) fn correct(curve: &ClosedCurve, t: f64, guess: f64) -> Option<(f64, f64)> {
    let mut phi = guess;
    for _ in 0..40 {
        let (f, _, fp) = fnd(curve, t, phi).ok()?;
        let half = 0.5 * (phi - t);
        let s = 2.0 * half.sin();
        if s == 0.0 {
            return None;
        }
        let ds = half.cos();
        let g = f / s;
        let dg = (fp * s - f * ds) / (s * s);
        if dg == 0.0 || !dg.is_finite() {
            return None;
        }
        let step = g / dg;
        phi -= step;
        if step.abs() <= 1e-15 * (1.0 + phi.abs()) {
            break;
        }
    }
    let (f, _, _) = fnd(curve, t, phi).ok()?;
    (f.abs() <= 1e-12 && f.is_finite()).then_some((phi, f.abs()))
}

/// Distance of `φ − t` from the diagonal (`0` or `2π`).
fn diag_dist(t: f64, phi: f64) -> f64 {
    let d = phi - t;
    d.min(TAU - d)
}

/// Continue the branch from `(t₀, φ₀)`.
///
/// When `φ₀ = t₀` the start is taken as an isolated point and the branch is
/// seeded with `φ′ = −1` at offset `tol.seed_offset`.
pub fn phi_continue(curve: &ClosedCurve, t0: f64, phi0: f64, opts: &ContinueOptions) -> Result<PhiPath, PlateauError> {
    let dir = if opts.direction < 0.0 { -1.0 } else { 1.0 };
    let delta = curve.tol.seed_offset;
    let mut samples = Vec::new();
    let (mut t, mut phi);
    if angle_dist(t0, phi0) <= 1e-12 {
        samples.push(PhiSample { t: t0, phi: if dir > 0.0 { t0 + TAU } else { t0 }, dphi: -1.0, residual: 0.0 });
        t = t0 + dir * delta;
        let guess = if dir > 0.0 { t0 + TAU - delta } else { t0 + delta };
        match correct(curve, t, guess) {
            Some((p, _)) => phi = p,
            None => {
                return Ok(PhiPath {
                    samples,
                    status: PhiStatus::Terminated { reason: "seed did not converge".into() },
                    end_t: None,
                    obstructions: vec![],
                })
            }
        }
    } else {
        t = t0;
        phi = t0 + wrap(phi0 - t0);
    }
    let (f, mut n_prev, mut d_prev) = fnd(curve, t, phi)?;
    if f.abs() > curve.tol.manifold_tol {
        return Err(PlateauError::OffManifold { t, phi, residual: f.abs() });
    }
    samples.push(PhiSample { t, phi, dphi: n_prev / d_prev, residual: f.abs() });

    let mut h = opts.h_init;
    let mut max_d = diag_dist(t, phi);
    let mut obstructions = Vec::new();
    let terminated = |samples: Vec<PhiSample>, reason: &str, obstructions: Vec<f64>| PhiPath {
        samples,
        status: PhiStatus::Terminated { reason: reason.into() },
        end_t: None,
        obstructions,
    };
    loop {
        let span = (t - t0).abs();
        if span >= opts.max_span - 1e-12 {
            break;
        }
        let d_now = diag_dist(t, phi);
        let mut hh = h.min(opts.h_max).min(opts.max_span - span);
        if max_d > 0.1 {
            hh = hh.min((0.25 * d_now).max(0.5 * delta));
        }
        let step = dir * hh;
        let pred = (|| -> Result<f64, PlateauError> {
            let k1 = slope(curve, t, phi)?;
            let k2 = slope(curve, t + 0.5 * step, phi + 0.5 * step * k1)?;
            let k3 = slope(curve, t + 0.5 * step, phi + 0.5 * step * k2)?;
            let k4 = slope(curve, t + step, phi + step * k3)?;
            Ok(phi + step * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0)
        })();
        let accepted = match pred {
            Ok(p) if p.is_finite() => correct(curve, t + step, p).filter(|(c, _)| (c - p).abs() <= 1e-7),
            _ => None,
        };
        let Some((phi_new, res)) = accepted else {
            h *= 0.5;
            if h < opts.h_min {
                return Ok(terminated(samples, "step size underflow", obstructions));
            }
            continue;
        };
        let t_new = t + step;
        let (_, n_new, d_new) = fnd(curve, t_new, phi_new)?;
        if d_new * d_prev < 0.0 || (n_new / d_new).abs() > 1e6 {
            samples.push(PhiSample { t: t_new, phi: phi_new, dphi: n_new / d_new, residual: res });
            return Ok(terminated(samples, "vanishing denominator", obstructions));
        }
        if n_new * n_prev < 0.0 {
            let t_star = bracket_obstruction(curve, (t, phi, n_prev), (t_new, phi_new))?;
            obstructions.push(t_star);
            if !opts.continue_past_obstruction {
                samples.push(PhiSample { t: t_new, phi: phi_new, dphi: n_new / d_new, residual: res });
                return Ok(PhiPath { samples, status: PhiStatus::Obstructed { t_star }, end_t: None, obstructions });
            }
        }
        samples.push(PhiSample { t: t_new, phi: phi_new, dphi: n_new / d_new, residual: res });
        t = t_new;
        phi = phi_new;
        n_prev = n_new;
        d_prev = d_new;
        h = (1.5 * h).min(opts.h_max);
        let d = diag_dist(t, phi);
        max_d = max_d.max(d);
        if max_d >= 20.0 * delta && d <= 2.0 * delta {
            let end = wrap(t + 0.5 * (phi - t - if phi - t > std::f64::consts::PI { TAU } else { 0.0 }));
            let status = match obstructions.first() {
                Some(&t_star) => PhiStatus::Obstructed { t_star },
                None => PhiStatus::Monotone,
            };
            return Ok(PhiPath { samples, status, end_t: Some(end), obstructions });
        }
    }
    let status = match obstructions.first() {
        Some(&t_star) => PhiStatus::Obstructed { t_star },
        None => PhiStatus::Monotone,
    };
    Ok(PhiPath { samples, status, end_t: None, obstructions })
}

/// Bisect the sign change of `N` between two accepted samples to width `1e-6`.
fn bracket_obstruction(curve: &ClosedCurve, a: (f64, f64, f64), b: (f64, f64)) -> Result<f64, PlateauError> {
    let (mut ta, mut pa, na) = a;
    let (mut tb, mut pb) = b;
    while (tb - ta).abs() > 1e-6 {
        let tm = 0.5 * (ta + tb);
        let Some((pm, _)) = correct(curve, tm, 0.5 * (pa + pb)) else { break };
        let (_, nm, _) = fnd(curve, tm, pm)?;
        if (nm < 0.0) == (na < 0.0) {
            ta = tm;
            pa = pm;
        } else {
            tb = tm;
            pb = pm;
        }
    }
    Ok(0.5 * (ta + tb))
}
