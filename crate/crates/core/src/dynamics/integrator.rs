//! Equations of motion and their stochastic integration.
//!
//! From `dA/dt = i[H, A]` with cavity loss `κ` and its input noise `ξ`,
//! `⟨ξ*(t') ξ(t)⟩ = κ δ(t − t')`:
//!
//! ```text
//! dα/dt  = −(κ + iω) α + i g D + ξ,            D = Σ_j (−1)^j |b_j|²
//! db_j/dt = i g (α + α*) (−1)^j b_j + i J (e^{iθ} b_{j+1} + e^{−iθ} b_{j−1})
//! ```
//!
//! The default [`StepScheme::Splitting`] is a Strang composition of three flows
//! that are each solved exactly: cavity relaxation towards `i g D/(κ + iω)`
//! with `D` frozen, the on-site phase kick with `α` frozen, and ring hopping
//! (diagonal in lattice momentum). The atomic flows are unitary, so `Σ|b_j|²`
//! is conserved to rounding. [`StepScheme::Heun`] integrates the same drift
//! with the explicit trapezoidal predictor–corrector and is kept as an
//! independent route.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::noise::NoiseStream;
use super::state::{parity, sample_initial, SystemState};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::protocols::Schedule;

pub const DEFAULT_DT: f64 = 5e-4;
pub const DEFAULT_RECORD_EVERY: usize = 20;
/// Upper bound on `dt · max(ω, κ, g√N, J)`.
pub const STABILITY_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepScheme {
    #[default]
    Splitting,
    Heun,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    /// Time step, ms.
    pub dt: f64,
    /// Steps between recorded samples.
    pub record_every: usize,
    /// Duration, ms.
    pub t_end: f64,
    #[serde(default)]
    pub scheme: StepScheme,
}

impl IntegratorConfig {
    pub fn new(t_end: f64) -> Self {
        IntegratorConfig {
            dt: DEFAULT_DT,
            record_every: DEFAULT_RECORD_EVERY,
            t_end,
            scheme: StepScheme::default(),
        }
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = dt;
        self
    }

    pub fn with_record_every(mut self, record_every: usize) -> Self {
        self.record_every = record_every;
        self
    }

    pub fn with_scheme(mut self, scheme: StepScheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn n_steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }

    /// Spacing of recorded samples, ms.
    pub fn sample_interval(&self) -> f64 {
        self.dt * self.record_every as f64
    }

    pub fn validate(&self, params: &ModelParams, g_max: f64) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::invalid(
                "dt",
                format!("must be > 0, got {}", self.dt),
            ));
        }
        if self.record_every == 0 {
            return Err(Error::invalid("record_every", "must be >= 1"));
        }
        if !(self.t_end.is_finite() && self.t_end >= self.dt) {
            return Err(Error::invalid(
                "t_end",
                format!("must be >= dt, got {}", self.t_end),
            ));
        }
        if self.n_steps() < self.record_every {
            return Err(Error::invalid(
                "t_end",
                format!(
                    "{} ms is shorter than one record interval ({} ms); the series would be empty",
                    self.t_end,
                    self.sample_interval()
                ),
            ));
        }
        let rate = params
            .omega()
            .max(params.kappa())
            .max(g_max * params.n_atoms().sqrt())
            .max(params.hop_j());
        if self.dt * rate >= STABILITY_LIMIT {
            return Err(Error::invalid(
                "dt",
                format!(
                    "dt * max(omega, kappa, g*sqrt(N), J) = {:.3} exceeds {STABILITY_LIMIT}",
                    self.dt * rate
                ),
            ));
        }
        Ok(())
    }
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self::new(10.0)
    }
}

/// Deterministic part of the equations of motion at fixed controls.
pub fn drift(state: &SystemState, g: f64, theta: f64, params: &ModelParams) -> SystemState {
    let mut out = state.zeros_like();
    drift_into(state, g, theta, params, &mut out);
    out
}

pub(crate) fn drift_into(
    state: &SystemState,
    g: f64,
    theta: f64,
    params: &ModelParams,
    out: &mut SystemState,
) {
    let m = state.sites.len();
    let i = Complex64::i();
    let alpha = state.cavity;
    out.cavity =
        -Complex64::new(params.kappa(), params.omega()) * alpha + i * (g * state.imbalance());
    let kick = g * 2.0 * alpha.re;
    let fwd = Complex64::from_polar(params.hop_j(), theta);
    let bwd = fwd.conj();
    for j in 0..m {
        let b = state.sites[j];
        let next = state.sites[(j + 1) % m];
        let prev = state.sites[(j + m - 1) % m];
        out.sites[j] = i * (kick * parity(j) * b + fwd * next + bwd * prev);
    }
}

/// Reusable per-trajectory stepping workspace.
pub(crate) struct Stepper {
    params: ModelParams,
    dt: f64,
    scheme: StepScheme,
    inv_z: Complex64,
    half_decay: Complex64,
    noise_amp: f64,
    twiddle: Vec<Complex64>,
    modes: Vec<Complex64>,
    hop_theta: f64,
    hop_phase: Vec<Complex64>,
    k1: SystemState,
    k2: SystemState,
    trial: SystemState,
}

impl Stepper {
    pub(crate) fn new(params: &ModelParams, dt: f64, scheme: StepScheme) -> Self {
        let m = params.n_sites();
        let z = Complex64::new(params.kappa(), params.omega());
        let twiddle = (0..m * m)
            .map(|jk| Complex64::from_polar(1.0, TAU * ((jk / m) * (jk % m) % m) as f64 / m as f64))
            .collect();
        let zero = SystemState::new(Complex64::new(0.0, 0.0), vec![Complex64::new(0.0, 0.0); m]);
        Stepper {
            params: *params,
            dt,
            scheme,
            inv_z: 1.0 / z,
            half_decay: (-z * (0.5 * dt)).exp(),
            noise_amp: (params.kappa() * dt / 2.0).sqrt(),
            twiddle,
            modes: vec![Complex64::new(0.0, 0.0); m],
            hop_theta: f64::NAN,
            hop_phase: vec![Complex64::new(0.0, 0.0); m],
            k1: zero.clone(),
            k2: zero.clone(),
            trial: zero,
        }
    }

    /// Advances `state` from `t` to `t + dt`. Adds cavity noise when `noise` is given.
    pub(crate) fn advance(
        &mut self,
        state: &mut SystemState,
        t: f64,
        schedule: &Schedule,
        noise: Option<&mut NoiseStream>,
    ) {
        match self.scheme {
            StepScheme::Splitting => self.advance_split(state, t, schedule, noise),
            StepScheme::Heun => self.advance_heun(state, t, schedule, noise),
        }
    }

    fn noise_kick(&self, noise: &mut NoiseStream) -> Complex64 {
        let re = noise.standard_normal();
        let im = noise.standard_normal();
        Complex64::new(re, im) * self.noise_amp
    }

    fn relax_cavity(&self, state: &mut SystemState, g: f64) {
        let target = Complex64::new(0.0, g * state.imbalance()) * self.inv_z;
        state.cavity = target + (state.cavity - target) * self.half_decay;
    }

    fn onsite_kick(&self, state: &mut SystemState, g: f64, h: f64) {
        let rot = Complex64::from_polar(1.0, 2.0 * g * state.cavity.re * h);
        let rot_odd = rot.conj();
        for (j, b) in state.sites.iter_mut().enumerate() {
            *b *= if j % 2 == 0 { rot } else { rot_odd };
        }
    }

    fn hop(&mut self, state: &mut SystemState, theta: f64) {
        let m = state.sites.len();
        if theta != self.hop_theta {
            let two_j_dt = 2.0 * self.params.hop_j() * self.dt;
            for (k, p) in self.hop_phase.iter_mut().enumerate() {
                let q = TAU * k as f64 / m as f64;
                *p = Complex64::from_polar(1.0 / m as f64, two_j_dt * (q + theta).cos());
            }
            self.hop_theta = theta;
        }
        // c_k = Σ_j b_j e^{-i q_k j};  b_j = (1/M) Σ_k c_k e^{i q_k j}
        for k in 0..m {
            let row = &self.twiddle[k * m..(k + 1) * m];
            let c: Complex64 = state.sites.iter().zip(row).map(|(b, w)| b * w.conj()).sum();
            self.modes[k] = c * self.hop_phase[k];
        }
        for j in 0..m {
            let row = &self.twiddle[j * m..(j + 1) * m];
            state.sites[j] = self.modes.iter().zip(row).map(|(c, w)| c * w).sum();
        }
    }

    fn advance_split(
        &mut self,
        state: &mut SystemState,
        t: f64,
        schedule: &Schedule,
        noise: Option<&mut NoiseStream>,
    ) {
        let t_mid = t + 0.5 * self.dt;
        let g = schedule.coupling(t_mid);
        let theta = schedule.phase(t_mid);
        let half = 0.5 * self.dt;

        self.relax_cavity(state, g);
        if let Some(noise) = noise {
            state.cavity += self.noise_kick(noise);
        }
        self.onsite_kick(state, g, half);
        self.hop(state, theta);
        self.onsite_kick(state, g, half);
        self.relax_cavity(state, g);
    }

    fn advance_heun(
        &mut self,
        state: &mut SystemState,
        t: f64,
        schedule: &Schedule,
        noise: Option<&mut NoiseStream>,
    ) {
        let dt = self.dt;
        drift_into(
            state,
            schedule.coupling(t),
            schedule.phase(t),
            &self.params,
            &mut self.k1,
        );
        self.trial.cavity = state.cavity + self.k1.cavity * dt;
        for ((y, b), k) in self
            .trial
            .sites
            .iter_mut()
            .zip(&state.sites)
            .zip(&self.k1.sites)
        {
            *y = b + k * dt;
        }
        drift_into(
            &self.trial,
            schedule.coupling(t + dt),
            schedule.phase(t + dt),
            &self.params,
            &mut self.k2,
        );
        state.cavity += (self.k1.cavity + self.k2.cavity) * (0.5 * dt);
        for ((b, k1), k2) in state
            .sites
            .iter_mut()
            .zip(&self.k1.sites)
            .zip(&self.k2.sites)
        {
            *b += (k1 + k2) * (0.5 * dt);
        }
        if let Some(noise) = noise {
            state.cavity += self.noise_kick(noise);
        }
    }
}

/// One integration step from `t` to `t + dt`.
///
/// Pass `None` for `noise` to integrate the noiseless equations.
pub fn step(
    state: &SystemState,
    t: f64,
    dt: f64,
    schedule: &Schedule,
    params: &ModelParams,
    noise: Option<&mut NoiseStream>,
) -> Result<SystemState> {
    step_with(state, t, dt, schedule, params, noise, StepScheme::default())
}

pub fn step_with(
    state: &SystemState,
    t: f64,
    dt: f64,
    schedule: &Schedule,
    params: &ModelParams,
    noise: Option<&mut NoiseStream>,
    scheme: StepScheme,
) -> Result<SystemState> {
    let mut next = state.clone();
    Stepper::new(params, dt, scheme).advance(&mut next, t, schedule, noise);
    if next.is_finite() {
        Ok(next)
    } else {
        Err(Error::NonFinite {
            time: t + dt,
            trajectory: None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub t: f64,
    pub photon: f64,
    pub imbalance: f64,
    pub atoms: f64,
    pub g: f64,
    pub theta: f64,
}

/// Recorded observables of a single trajectory and its final state.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub final_state: SystemState,
    pub initial_atoms: f64,
}

impl Trajectory {
    /// Largest relative deviation of `Σ|b_j|²` from its initial value.
    pub fn max_atom_drift(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| ((s.atoms - self.initial_atoms) / self.initial_atoms).abs())
            .fold(0.0, f64::max)
    }

    /// Time average of the photon number over samples with `start <= t <= end`.
    pub fn mean_photon_in(&self, start: f64, end: f64) -> Option<f64> {
        let (sum, n) = self
            .samples
            .iter()
            .filter(|s| s.t >= start - 1e-9 && s.t <= end + 1e-9)
            .fold((0.0, 0usize), |(sum, n), s| (sum + s.photon, n + 1));
        (n > 0).then(|| sum / n as f64)
    }
}

fn record(state: &SystemState, t: f64, schedule: &Schedule) -> Sample {
    Sample {
        t,
        photon: state.photon_number(),
        imbalance: state.imbalance(),
        atoms: state.total_atoms(),
        g: schedule.coupling(t),
        theta: schedule.phase(t),
    }
}

pub(crate) fn evolve(
    initial: SystemState,
    schedule: &Schedule,
    params: &ModelParams,
    config: &IntegratorConfig,
    mut noise: Option<&mut NoiseStream>,
) -> Result<Trajectory> {
    config.validate(params, schedule.max_coupling())?;
    let trajectory = noise.as_ref().map(|n| n.trajectory_index() as usize);
    let n_steps = config.n_steps();
    let mut stepper = Stepper::new(params, config.dt, config.scheme);
    let mut state = initial;
    let initial_atoms = state.total_atoms();
    let mut samples = Vec::with_capacity(n_steps / config.record_every + 1);
    samples.push(record(&state, 0.0, schedule));
    for k in 0..n_steps {
        let t = k as f64 * config.dt;
        stepper.advance(&mut state, t, schedule, noise.as_deref_mut());
        if (k + 1) % config.record_every == 0 {
            let t_next = (k + 1) as f64 * config.dt;
            if !state.is_finite() {
                return Err(Error::NonFinite {
                    time: t_next,
                    trajectory,
                });
            }
            samples.push(record(&state, t_next, schedule));
        }
    }
    if !state.is_finite() {
        return Err(Error::NonFinite {
            time: n_steps as f64 * config.dt,
            trajectory,
        });
    }
    Ok(Trajectory {
        samples,
        final_state: state,
        initial_atoms,
    })
}

/// One truncated-Wigner trajectory: Wigner-sampled initial state, noisy cavity.
pub fn integrate_trajectory(
    schedule: &Schedule,
    params: &ModelParams,
    config: &IntegratorConfig,
    noise: &mut NoiseStream,
    atoms_this_traj: f64,
) -> Result<Trajectory> {
    if !(atoms_this_traj.is_finite() && atoms_this_traj > 0.0) {
        return Err(Error::invalid(
            "atoms_this_traj",
            format!("must be > 0, got {atoms_this_traj}"),
        ));
    }
    let initial = sample_initial(params, atoms_this_traj, noise);
    evolve(initial, schedule, params, config, Some(noise))
}

/// Noiseless evolution of a given initial state (mean-field dynamics).
pub fn integrate_deterministic(
    initial: SystemState,
    schedule: &Schedule,
    params: &ModelParams,
    config: &IntegratorConfig,
) -> Result<Trajectory> {
    if initial.sites.len() != params.n_sites() {
        return Err(Error::invalid(
            "initial",
            format!(
                "state has {} sites, model has {}",
                initial.sites.len(),
                params.n_sites()
            ),
        ));
    }
    evolve(initial, schedule, params, config, None)
}
