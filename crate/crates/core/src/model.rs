//! Physical parameters of the ring-cavity model and the analytic
//! superradiant boundary.
//!
//! The model is an `M`-site bosonic ring with tunnelling `J e^{iθ}` between
//! neighbours (periodic boundary), whose sites couple with alternating sign
//! `±g` to a single cavity mode of detuning `ω` and loss rate `κ`. Rotation of
//! the ring at angular frequency `Ω` enters only through the gauge phase
//! `θ = π² n_s Ω / ω_rec`, with `n_s = M/4 + 1` sites per side of the square.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::two_pi_khz;

/// Validated physical constants, all rates in rad/ms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    omega: f64,
    kappa: f64,
    hop_j: f64,
    n_atoms: f64,
    n_sites: usize,
    omega_rec: f64,
}

impl ModelParams {
    pub fn new(
        omega: f64,
        kappa: f64,
        hop_j: f64,
        n_atoms: f64,
        n_sites: usize,
        omega_rec: f64,
    ) -> Result<Self> {
        let params = ModelParams {
            omega,
            kappa,
            hop_j,
            n_atoms,
            n_sites,
            omega_rec,
        };
        params.validate()?;
        Ok(params)
    }

    /// Same as [`ModelParams::new`] with every rate given in units of 2π × kHz.
    pub fn from_two_pi_khz(
        omega: f64,
        kappa: f64,
        hop_j: f64,
        n_atoms: f64,
        n_sites: usize,
        omega_rec: f64,
    ) -> Result<Self> {
        Self::new(
            two_pi_khz(omega),
            two_pi_khz(kappa),
            two_pi_khz(hop_j),
            n_atoms,
            n_sites,
            two_pi_khz(omega_rec),
        )
    }

    /// Four-site ring of ⁸⁷Rb: J = 2, κ = 5, ω_rec = 3.5 (2π × kHz), N = 60 000.
    ///
    /// The cavity detuning is not fixed by the experiment proposal; the default
    /// ω = 2π × 10 kHz is an assumption of this crate.
    pub fn reference() -> Self {
        Self::from_two_pi_khz(DEFAULT_OMEGA_2PI_KHZ, 5.0, 2.0, 60_000.0, 4, 3.5)
            .expect("reference parameters are valid")
    }

    fn validate(&self) -> Result<()> {
        fn positive(name: &'static str, v: f64) -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::invalid(
                    name,
                    format!("must be finite and > 0, got {v}"),
                ))
            }
        }
        positive("omega", self.omega)?;
        positive("J", self.hop_j)?;
        positive("N_atoms", self.n_atoms)?;
        positive("omega_rec", self.omega_rec)?;
        if !(self.kappa.is_finite() && self.kappa >= 0.0) {
            return Err(Error::invalid(
                "kappa",
                format!("must be finite and >= 0, got {}", self.kappa),
            ));
        }
        sites_per_side(self.n_sites)?;
        Ok(())
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn hop_j(&self) -> f64 {
        self.hop_j
    }

    pub fn n_atoms(&self) -> f64 {
        self.n_atoms
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn omega_rec(&self) -> f64 {
        self.omega_rec
    }

    /// `n_s = M/4 + 1`.
    pub fn sites_per_side(&self) -> usize {
        self.n_sites / 4 + 1
    }

    /// `ω² + κ²`, the squared modulus of the cavity response denominator.
    pub fn cavity_norm_sq(&self) -> f64 {
        self.omega * self.omega + self.kappa * self.kappa
    }

    pub fn with_n_atoms(self, n_atoms: f64) -> Result<Self> {
        Self::new(
            self.omega,
            self.kappa,
            self.hop_j,
            n_atoms,
            self.n_sites,
            self.omega_rec,
        )
    }

    pub fn with_kappa(self, kappa: f64) -> Result<Self> {
        Self::new(
            self.omega,
            kappa,
            self.hop_j,
            self.n_atoms,
            self.n_sites,
            self.omega_rec,
        )
    }

    pub fn with_hop_j(self, hop_j: f64) -> Result<Self> {
        Self::new(
            self.omega,
            self.kappa,
            hop_j,
            self.n_atoms,
            self.n_sites,
            self.omega_rec,
        )
    }

    pub fn with_n_sites(self, n_sites: usize) -> Result<Self> {
        Self::new(
            self.omega,
            self.kappa,
            self.hop_j,
            self.n_atoms,
            n_sites,
            self.omega_rec,
        )
    }

    /// Critical coupling of the non-rotating system, `g_crit(θ = 0)`.
    pub fn g0_crit(&self) -> f64 {
        critical_coupling(self, 0.0).expect("theta = 0 is always in domain")
    }
}

/// Documented default for the effective cavity detuning, in 2π × kHz.
pub const DEFAULT_OMEGA_2PI_KHZ: f64 = 10.0;

/// Number of sites on each side of the square ring, `M/4 + 1`.
pub fn sites_per_side(n_sites: usize) -> Result<usize> {
    if n_sites >= 4 && n_sites.is_multiple_of(4) {
        Ok(n_sites / 4 + 1)
    } else {
        Err(Error::UnsupportedGeometry { n_sites })
    }
}

/// Gauge phase acquired per bond when the ring rotates at `omega_rot` (rad/ms).
pub fn theta_from_rotation(omega_rot: f64, params: &ModelParams) -> f64 {
    PI * PI * params.sites_per_side() as f64 * omega_rot / params.omega_rec
}

/// Inverse of [`theta_from_rotation`].
pub fn rotation_from_theta(theta: f64, params: &ModelParams) -> f64 {
    theta * params.omega_rec / (PI * PI * params.sites_per_side() as f64)
}

fn check_phase(theta: f64) -> Result<f64> {
    let c = theta.cos();
    if theta.is_finite() && c >= 0.0 {
        Ok(c)
    } else {
        Err(Error::PhaseOutOfDomain { theta })
    }
}

/// Open-system critical coupling `√(J cosθ (ω² + κ²) / (N ω))`.
///
/// Reduces to the closed-system `√(J ω cosθ / N)` at κ = 0.
pub fn critical_coupling(params: &ModelParams, theta: f64) -> Result<f64> {
    let c = check_phase(theta)?;
    Ok((params.hop_j * c * params.cavity_norm_sq() / (params.n_atoms * params.omega)).sqrt())
}

/// Phase boundary relative to the non-rotating system: `g_crit(θ)/g_crit(0) = √cosθ`.
pub fn boundary_curve(theta: f64) -> Result<f64> {
    Ok(check_phase(theta)?.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn sites_per_side_examples() {
        assert_eq!(sites_per_side(4).unwrap(), 2);
        assert_eq!(sites_per_side(8).unwrap(), 3);
        assert!(matches!(
            sites_per_side(6),
            Err(Error::UnsupportedGeometry { n_sites: 6 })
        ));
        assert!(sites_per_side(0).is_err());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(ModelParams::new(0.0, 1.0, 1.0, 1.0, 4, 1.0).is_err());
        assert!(ModelParams::new(1.0, -1.0, 1.0, 1.0, 4, 1.0).is_err());
        assert!(ModelParams::new(1.0, 0.0, 1.0, 1.0, 4, 1.0).is_ok());
        assert!(ModelParams::new(1.0, 1.0, 1.0, f64::NAN, 4, 1.0).is_err());
        let err = ModelParams::reference().with_n_sites(6).unwrap_err();
        assert!(err.to_string().contains("multiple of 4"));
    }

    #[test]
    fn rotation_phase_map() {
        let p = ModelParams::reference();
        let ns = p.sites_per_side() as f64;
        assert_eq!(theta_from_rotation(0.0, &p), 0.0);
        let drive = p.omega_rec() / (20.0 * PI * ns);
        assert_relative_eq!(
            theta_from_rotation(drive, &p),
            PI / 20.0,
            max_relative = 1e-14
        );
        let bias = p.omega_rec() / (4.0 * PI * ns);
        assert_relative_eq!(
            theta_from_rotation(bias, &p),
            PI / 4.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn critical_coupling_examples() {
        let p = ModelParams::reference();
        assert!(critical_coupling(&p, FRAC_PI_2).unwrap() < 1e-8);

        let closed = p.with_kappa(0.0).unwrap();
        assert_relative_eq!(
            critical_coupling(&closed, 0.0).unwrap(),
            (p.hop_j() * p.omega() / p.n_atoms()).sqrt(),
            max_relative = 1e-14
        );

        // 2π·kHz: sqrt(2 * (100 + 25) / (60000 * 10)) = 0.0204124...
        let g0 = crate::units::to_two_pi_khz(p.g0_crit());
        assert_relative_eq!(g0, (250.0f64 / 600_000.0).sqrt(), max_relative = 1e-13);
        assert!((g0 - 0.020412).abs() < 1e-6);

        assert!(matches!(
            critical_coupling(&p, 2.0),
            Err(Error::PhaseOutOfDomain { .. })
        ));
    }

    #[test]
    fn boundary_examples() {
        assert_eq!(boundary_curve(0.0).unwrap(), 1.0);
        assert!(boundary_curve(FRAC_PI_2).unwrap() < 1e-8);
        assert_relative_eq!(
            boundary_curve(PI / 3.0).unwrap(),
            0.5f64.sqrt(),
            max_relative = 1e-14
        );
        assert!(boundary_curve(3.0).is_err());
    }

    proptest! {
        #[test]
        fn critical_coupling_is_even(theta in -1.5f64..1.5) {
            let p = ModelParams::reference();
            prop_assert_eq!(
                critical_coupling(&p, theta).unwrap(),
                critical_coupling(&p, -theta).unwrap()
            );
        }

        #[test]
        fn critical_coupling_decreases(a in 0.0f64..1.5, b in 0.0f64..1.5) {
            let p = ModelParams::reference();
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            prop_assume!(hi - lo > 1e-9);
            prop_assert!(critical_coupling(&p, hi).unwrap() < critical_coupling(&p, lo).unwrap());
        }

        #[test]
        fn critical_coupling_scales_with_atom_number(n in 1.0f64..1e7, theta in 0.0f64..1.5) {
            let p = ModelParams::reference().with_n_atoms(n).unwrap();
            let q = p.with_n_atoms(2.0 * n).unwrap();
            let ratio = critical_coupling(&p, theta).unwrap() / critical_coupling(&q, theta).unwrap();
            prop_assert!((ratio - 2f64.sqrt()).abs() < 1e-12);
        }

        #[test]
        fn boundary_times_g0_is_g_crit(theta in 0.0f64..1.5) {
            let p = ModelParams::reference();
            let lhs = boundary_curve(theta).unwrap() * critical_coupling(&p, 0.0).unwrap();
            let rhs = critical_coupling(&p, theta).unwrap();
            prop_assert!((lhs - rhs).abs() <= 4.0 * f64::EPSILON * rhs.max(1e-300));
        }

        #[test]
        fn rotation_round_trip(theta in -10.0f64..10.0) {
            let p = ModelParams::reference();
            let back = theta_from_rotation(rotation_from_theta(theta, &p), &p);
            prop_assert!((back - theta).abs() <= 4.0 * f64::EPSILON * theta.abs().max(1.0));
        }
    }
}
