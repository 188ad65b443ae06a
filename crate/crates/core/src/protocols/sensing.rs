use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use super::schedule::Schedule;
use crate::dynamics::{run_ensemble, AtomSampler, EnsembleSeries, IntegratorConfig};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::units::two_pi_khz;

/// Real-time sensing run: ramp `g` (and optionally a bias phase `θ0`) over
/// `t_ramp`, hold until `t0`, then drive `θ = θ0 + δθ sin(ω_dr (t − t0))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensingConfig {
    /// Bias phase, rad.
    pub theta0: f64,
    /// Drive amplitude, rad.
    pub delta_theta: f64,
    /// Drive angular frequency, rad/ms.
    pub omega_drive: f64,
    /// Final coupling in units of `g_crit(θ = 0)`.
    pub g_final_rel: f64,
    pub t_ramp: f64,
    pub t0: f64,
    pub t_end: f64,
    pub n_traj: usize,
}

/// Ramp 1 ms plus 2 ms relaxation.
pub const DEFAULT_T0: f64 = 3.0;
/// `t0` plus eight drive periods at 2π × 0.5 kHz, the minimum the spectrum accepts.
pub const DEFAULT_SENSING_T_END: f64 = 19.0;

impl SensingConfig {
    /// Drive around the resting ring: `θ0 = 0`, `δθ = π/20`,
    /// `ω_dr = 2π × 0.5 kHz`, `g = 1.09 g₀crit`, 10³ trajectories.
    pub fn at_rest() -> Self {
        SensingConfig {
            theta0: 0.0,
            delta_theta: PI / 20.0,
            omega_drive: two_pi_khz(0.5),
            g_final_rel: 1.09,
            t_ramp: 1.0,
            t0: DEFAULT_T0,
            t_end: DEFAULT_SENSING_T_END,
            n_traj: 1000,
        }
    }

    /// Same drive with a bias rotation giving `θ0 = π/4`.
    pub fn biased() -> Self {
        SensingConfig {
            theta0: FRAC_PI_4,
            ..Self::at_rest()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0 <= self.t_ramp && self.t_ramp <= self.t0 && self.t0 <= self.t_end) {
            return Err(Error::invalid(
                "t_ramp/t0/t_end",
                format!(
                    "need 0 <= t_ramp <= t0 <= t_end, got {} / {} / {}",
                    self.t_ramp, self.t0, self.t_end
                ),
            ));
        }
        if !(self.delta_theta >= 0.0) {
            return Err(Error::invalid(
                "delta_theta",
                format!("must be >= 0, got {}", self.delta_theta),
            ));
        }
        if !(self.theta0.abs() + self.delta_theta < FRAC_PI_2) {
            return Err(Error::invalid(
                "theta0",
                format!(
                    "|theta0| + delta_theta = {} must stay below pi/2",
                    self.theta0.abs() + self.delta_theta
                ),
            ));
        }
        if !(self.g_final_rel.is_finite() && self.g_final_rel >= 0.0) {
            return Err(Error::invalid(
                "g_rel",
                format!("must be >= 0, got {}", self.g_final_rel),
            ));
        }
        if !(self.omega_drive.is_finite() && self.omega_drive >= 0.0) {
            return Err(Error::invalid(
                "omega_drive",
                format!("must be >= 0, got {}", self.omega_drive),
            ));
        }
        if self.n_traj < 2 {
            return Err(Error::invalid(
                "n_traj",
                format!("must be >= 2, got {}", self.n_traj),
            ));
        }
        Ok(())
    }
}

/// Shot-to-shot atom-number fluctuations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FluctuationConfig {
    pub mean_atoms: f64,
    pub sigma_atoms: f64,
}

impl FluctuationConfig {
    pub fn sampler(&self) -> AtomSampler {
        AtomSampler::Gaussian {
            mean: self.mean_atoms,
            sigma: self.sigma_atoms,
        }
    }
}

pub fn build_sensing_schedule(cfg: &SensingConfig, params: &ModelParams) -> Result<Schedule> {
    cfg.validate()?;
    Schedule::ramped(cfg.g_final_rel * params.g0_crit(), cfg.theta0, cfg.t_ramp)?.with_drive(
        cfg.t0,
        cfg.delta_theta,
        cfg.omega_drive,
    )
}

/// Runs the sensing protocol at fixed atom number `params.n_atoms()`.
///
/// The duration is `cfg.t_end`; `integ` supplies the step size and sampling.
pub fn run_sensing(
    cfg: &SensingConfig,
    params: &ModelParams,
    integ: &IntegratorConfig,
    seed: u64,
) -> Result<EnsembleSeries> {
    let schedule = build_sensing_schedule(cfg, params)?;
    let integ = IntegratorConfig {
        t_end: cfg.t_end,
        ..*integ
    };
    run_ensemble(
        &schedule,
        params,
        &integ,
        cfg.n_traj,
        seed,
        &AtomSampler::fixed(params.n_atoms()),
    )
}

/// Sensing with a Gaussian atom number per trajectory.
///
/// The coupling is calibrated once, from the mean atom number.
pub fn run_sensing_with_fluctuations(
    cfg: &SensingConfig,
    fluct: &FluctuationConfig,
    params: &ModelParams,
    integ: &IntegratorConfig,
    seed: u64,
) -> Result<EnsembleSeries> {
    let calibrated = params.with_n_atoms(fluct.mean_atoms)?;
    let schedule = build_sensing_schedule(cfg, &calibrated)?;
    let integ = IntegratorConfig {
        t_end: cfg.t_end,
        ..*integ
    };
    run_ensemble(
        &schedule,
        &calibrated,
        &integ,
        cfg.n_traj,
        seed,
        &fluct.sampler(),
    )
}
