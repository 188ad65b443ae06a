//! Variational mean-field energy of the coherent product-state ansatz and its
//! minimisation.
//!
//! Even sites carry `√((N − Δ)/M)` atoms' worth of amplitude and odd sites
//! `√((N + Δ)/M)`, so the state is parametrised by the imbalance `Δ` and the
//! cavity amplitude `α`:
//!
//! ```text
//! E(α, Δ) = ω|α|² − 2 g Re(α) Δ − 2 J cosθ √(N² − Δ²)
//! ```
//!
//! With cavity loss the field is slaved to the atoms, `α = i g Δ / (κ + iω)`,
//! which leaves a one-dimensional problem in `Δ`. Its minimiser is found
//! numerically; the closed form `Δ = N √(1 − (g_crit/g)⁴)` is only used by the
//! tests.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{critical_coupling, ModelParams};

/// Points on the coarse imbalance grid before golden-section refinement.
pub const COARSE_GRID_POINTS: usize = 1000;
/// Refinement stops once the bracket is narrower than this fraction of `N`.
pub const REFINE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanFieldPoint {
    /// Population imbalance `Δ = Σ (−1)^i n_i`, in atoms.
    pub delta: f64,
    pub alpha: Complex64,
    pub energy: f64,
}

impl MeanFieldPoint {
    pub fn photon_number(&self) -> f64 {
        self.alpha.norm_sqr()
    }
}

/// Mean-field energy `E(α, Δ)` of the product-state ansatz.
pub fn energy(
    alpha: Complex64,
    delta: f64,
    theta: f64,
    g: f64,
    params: &ModelParams,
) -> Result<f64> {
    let n = params.n_atoms();
    if !(delta.abs() <= n) {
        return Err(Error::ImbalanceOutOfRange { delta, n_atoms: n });
    }
    Ok(params.omega() * alpha.norm_sqr()
        - 2.0 * g * alpha.re * delta
        - 2.0 * params.hop_j() * theta.cos() * (n * n - delta * delta).sqrt())
}

/// Stationary cavity amplitude for a fixed imbalance, `α = i g Δ / (κ + iω)`.
pub fn slaved_cavity_field(delta: f64, g: f64, params: &ModelParams) -> Complex64 {
    Complex64::new(0.0, g * delta) / Complex64::new(params.kappa(), params.omega())
}

fn slaved_energy(delta: f64, theta: f64, g: f64, params: &ModelParams) -> f64 {
    let alpha = slaved_cavity_field(delta, g, params);
    energy(
        alpha,
        delta.clamp(-params.n_atoms(), params.n_atoms()),
        theta,
        g,
        params,
    )
    .expect("delta clamped to [-N, N]")
}

/// Golden-section search for the minimum of `f` on `[lo, hi]`.
fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

/// Global minimiser of the mean-field energy with the cavity slaved to the atoms.
///
/// Searches `Δ ∈ [0, N]`; the mirror branch `(−Δ, −α)` is degenerate and
/// never returned. Below threshold the normal state `Δ = 0, α = 0` is returned
/// exactly.
pub fn minimize_energy(theta: f64, g: f64, params: &ModelParams) -> Result<MeanFieldPoint> {
    critical_coupling(params, theta)?;
    let n = params.n_atoms();
    let f = |d: f64| slaved_energy(d, theta, g, params);

    let step = n / COARSE_GRID_POINTS as f64;
    let (best, _) = (0..=COARSE_GRID_POINTS)
        .map(|k| (k, f(k as f64 * step)))
        .fold(
            (0, f64::INFINITY),
            |acc, (k, e)| if e < acc.1 { (k, e) } else { acc },
        );
    let lo = best.saturating_sub(1) as f64 * step;
    let hi = ((best + 1).min(COARSE_GRID_POINTS)) as f64 * step;
    let refined = golden_section(f, lo, hi, REFINE_TOLERANCE * n);

    let e_normal = f(0.0);
    let e_refined = f(refined);
    // A gain below rounding level means the normal state is the minimum.
    let delta = if e_refined < e_normal - 1e-12 * e_normal.abs() {
        refined
    } else {
        0.0
    };
    let alpha = if delta == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        slaved_cavity_field(delta, g, params)
    };
    Ok(MeanFieldPoint {
        delta,
        alpha,
        energy: energy(alpha, delta, theta, g, params)?,
    })
}

/// Mean-field intracavity photon number `|α|²` at the energy minimum.
pub fn predict_photon_number(theta: f64, g: f64, params: &ModelParams) -> Result<f64> {
    Ok(minimize_energy(theta, g, params)?.photon_number())
}

/// Closed-form imbalance `N √(1 − (g_crit/g)⁴)` above threshold, zero below.
pub fn closed_form_imbalance(theta: f64, g: f64, params: &ModelParams) -> Result<f64> {
    let gc = critical_coupling(params, theta)?;
    if g <= gc {
        return Ok(0.0);
    }
    Ok(params.n_atoms() * (1.0 - (gc / g).powi(4)).sqrt())
}

/// Closed-form photon number `g² Δ² / (ω² + κ²)`.
pub fn closed_form_photon_number(theta: f64, g: f64, params: &ModelParams) -> Result<f64> {
    let delta = closed_form_imbalance(theta, g, params)?;
    Ok(g * g * delta * delta / params.cavity_norm_sq())
}
