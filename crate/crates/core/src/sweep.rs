//! Phase diagram over the gauge phase `θ` and the relative coupling
//! `g/g₀crit`, from steady-state photon numbers of truncated-Wigner ensembles.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{derive_seed, run_ensemble, AtomSampler, EnsembleSeries, IntegratorConfig};
use crate::error::{Error, Result};
use crate::model::{boundary_curve, ModelParams};
use crate::protocols::Schedule;

/// Photon number above which a steady state counts as superradiant.
pub const DEFAULT_SR_THRESHOLD: f64 = 10.0;
/// Relative difference between tail halves beyond which a point may be unconverged.
pub const STATIONARITY_RELATIVE: f64 = 0.2;
/// ... and the number of combined standard errors it must also exceed.
pub const STATIONARITY_SIGMAS: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Phase {
    /// Normal phase: vacuum-level cavity field, balanced sites.
    Np,
    /// Superradiant phase.
    Sr,
}

pub fn classify(photon_steady: f64, sr_threshold: f64) -> Phase {
    if photon_steady > sr_threshold {
        Phase::Sr
    } else {
        Phase::Np
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SteadyState {
    pub photon: f64,
    /// Standard error of `photon`, from the time-averaged ensemble spread.
    pub stderr: f64,
    pub converged: bool,
}

fn window_mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Tail average of the mean photon number with a stationarity check.
///
/// The point is flagged unconverged when the two halves of the tail differ by
/// more than 20 % and by more than three combined standard errors.
pub fn detect_steady_state(
    series: &EnsembleSeries,
    tail_start: f64,
    tail_end: f64,
) -> Result<SteadyState> {
    let w = series.window(tail_start, tail_end);
    if w.len() < 2 {
        return Err(Error::InvalidWindow {
            start: tail_start,
            end: tail_end,
            reason: format!("tail holds {} samples, need at least 2", w.len()),
        });
    }
    let photon = &series.mean_photon[w.clone()];
    let spread = &series.std_photon[w.clone()];
    let sqrt_n = (series.n_traj as f64).sqrt();
    let mid = photon.len() / 2;
    let (m1, m2) = (window_mean(&photon[..mid]), window_mean(&photon[mid..]));
    let (se1, se2) = (
        window_mean(&spread[..mid]) / sqrt_n,
        window_mean(&spread[mid..]) / sqrt_n,
    );
    let diff = (m1 - m2).abs();
    let scale = 0.5 * (m1.abs() + m2.abs());
    let drifting =
        diff > STATIONARITY_RELATIVE * scale && diff > STATIONARITY_SIGMAS * se1.hypot(se2);
    Ok(SteadyState {
        photon: window_mean(photon),
        stderr: window_mean(spread) / sqrt_n,
        converged: !drifting,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    /// Gauge phases, rad, strictly increasing in `[0, π/2)`.
    pub theta_values: Vec<f64>,
    /// Couplings relative to `g_crit(θ = 0)`, strictly increasing.
    pub g_rel_values: Vec<f64>,
    pub n_traj: usize,
    pub t_end: f64,
    /// Start of the averaging tail, ms; the tail runs to `t_end`.
    pub tail_start: f64,
    pub seed: u64,
    pub sr_threshold: f64,
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
        .collect()
}

impl GridSpec {
    /// Evenly spaced grid with the documented defaults: 100 trajectories,
    /// 15 ms per point averaged over the last 5 ms.
    pub fn uniform(theta: (f64, f64, usize), g_rel: (f64, f64, usize), seed: u64) -> Self {
        GridSpec {
            theta_values: linspace(theta.0, theta.1, theta.2),
            g_rel_values: linspace(g_rel.0, g_rel.1, g_rel.2),
            n_traj: 100,
            t_end: 15.0,
            tail_start: 10.0,
            seed,
            sr_threshold: DEFAULT_SR_THRESHOLD,
        }
    }

    /// The 12 × 12 desk-scale grid over `θ ∈ [0, 1.45]`, `g/g₀crit ∈ [0.6, 1.4]`.
    pub fn desk(seed: u64) -> Self {
        Self::uniform((0.0, 1.45, 12), (0.6, 1.4, 12), seed)
    }

    pub fn validate(&self) -> Result<()> {
        let increasing = |v: &[f64]| !v.is_empty() && v.windows(2).all(|w| w[1] > w[0]);
        if !increasing(&self.theta_values) {
            return Err(Error::invalid(
                "theta_values",
                "must be non-empty and strictly increasing",
            ));
        }
        if !increasing(&self.g_rel_values) {
            return Err(Error::invalid(
                "g_rel_values",
                "must be non-empty and strictly increasing",
            ));
        }
        if self
            .theta_values
            .iter()
            .any(|&t| !(0.0..std::f64::consts::FRAC_PI_2).contains(&t))
        {
            return Err(Error::invalid("theta_values", "must lie in [0, pi/2)"));
        }
        if self.g_rel_values[0] < 0.0 {
            return Err(Error::invalid("g_rel_values", "must be >= 0"));
        }
        if !(0.0 < self.tail_start && self.tail_start < self.t_end) {
            return Err(Error::invalid(
                "tail_start",
                format!(
                    "tail [{}, {}] must lie inside (0, t_end]",
                    self.tail_start, self.t_end
                ),
            ));
        }
        if self.n_traj < 2 {
            return Err(Error::invalid("n_traj", "must be >= 2"));
        }
        Ok(())
    }
}

/// Where the NP → SR flip of one θ column sits on the g grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum BoundaryEstimate {
    /// Midpoint of the bracketing pair of couplings.
    Bracketed(f64),
    /// Every point is SR.
    BelowGrid,
    /// Every point is NP.
    AboveGrid,
    /// An unconverged or failed point sits at the flip, or the column flips more than once.
    Unresolved,
}

#[derive(Debug, Clone, Serialize)]
pub struct PhaseDiagram {
    pub grid: GridSpec,
    /// Indexed `[theta][g_rel]`.
    pub photon_steady: Vec<Vec<f64>>,
    pub photon_stderr: Vec<Vec<f64>>,
    pub converged: Vec<Vec<bool>>,
    pub is_sr: Vec<Vec<bool>>,
    /// `(θ, √cosθ)` for every column.
    pub boundary_analytic: Vec<(f64, f64)>,
    /// Points whose ensemble failed, with the error message.
    pub failures: Vec<(usize, usize, String)>,
}

impl PhaseDiagram {
    pub fn empirical_boundary(&self, theta_index: usize) -> BoundaryEstimate {
        let sr = &self.is_sr[theta_index];
        let ok = &self.converged[theta_index];
        let flips: Vec<usize> = (1..sr.len()).filter(|&k| sr[k] != sr[k - 1]).collect();
        match flips.as_slice() {
            [] if sr.iter().all(|&s| s) => BoundaryEstimate::BelowGrid,
            [] => BoundaryEstimate::AboveGrid,
            [k] if !sr[k - 1] && ok[*k] && ok[k - 1] => {
                let g = &self.grid.g_rel_values;
                BoundaryEstimate::Bracketed(0.5 * (g[k - 1] + g[*k]))
            }
            _ => BoundaryEstimate::Unresolved,
        }
    }
}

/// Runs one ensemble per grid point (in parallel) and classifies the steady states.
///
/// Failed points are recorded in `failures` with NaN photon number and do not
/// abort the sweep.
pub fn sweep_phase_diagram(
    grid: &GridSpec,
    params: &ModelParams,
    integ: &IntegratorConfig,
) -> Result<PhaseDiagram> {
    grid.validate()?;
    let g0 = params.g0_crit();
    let n_g = grid.g_rel_values.len();
    let integ = IntegratorConfig {
        t_end: grid.t_end,
        ..*integ
    };
    let sampler = AtomSampler::fixed(params.n_atoms());
    let points: Vec<(usize, usize)> = (0..grid.theta_values.len())
        .flat_map(|i| (0..n_g).map(move |k| (i, k)))
        .collect();
    let results: Vec<Result<SteadyState>> = points
        .par_iter()
        .map(|&(i, k)| {
            let schedule = Schedule::constant(grid.g_rel_values[k] * g0, grid.theta_values[i]);
            let seed = derive_seed(grid.seed, (i * n_g + k) as u64);
            let series = run_ensemble(&schedule, params, &integ, grid.n_traj, seed, &sampler)?;
            detect_steady_state(&series, grid.tail_start, grid.t_end)
        })
        .collect();

    let n_theta = grid.theta_values.len();
    let mut diagram = PhaseDiagram {
        grid: grid.clone(),
        photon_steady: vec![vec![f64::NAN; n_g]; n_theta],
        photon_stderr: vec![vec![f64::NAN; n_g]; n_theta],
        converged: vec![vec![false; n_g]; n_theta],
        is_sr: vec![vec![false; n_g]; n_theta],
        boundary_analytic: grid
            .theta_values
            .iter()
            .map(|&t| Ok((t, boundary_curve(t)?)))
            .collect::<Result<_>>()?,
        failures: Vec::new(),
    };
    for (&(i, k), result) in points.iter().zip(results) {
        match result {
            Ok(st) => {
                diagram.photon_steady[i][k] = st.photon;
                diagram.photon_stderr[i][k] = st.stderr;
                diagram.converged[i][k] = st.converged;
                diagram.is_sr[i][k] = classify(st.photon, grid.sr_threshold) == Phase::Sr;
            }
            Err(e) => diagram.failures.push((i, k, e.to_string())),
        }
    }
    Ok(diagram)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant_series(values: Vec<f64>, std: f64) -> EnsembleSeries {
        let n = values.len();
        EnsembleSeries {
            times: (0..n).map(|k| k as f64 * 0.01).collect(),
            mean_photon: values,
            std_photon: vec![std; n],
            mean_imbalance: vec![0.0; n],
            std_imbalance: vec![0.0; n],
            mean_atoms: vec![1.0; n],
            theta_trace: vec![0.0; n],
            g_trace: vec![0.0; n],
            n_traj: 100,
        }
    }

    #[test]
    fn classification() {
        assert_eq!(classify(10.5, DEFAULT_SR_THRESHOLD), Phase::Sr);
        assert_eq!(classify(9.9, DEFAULT_SR_THRESHOLD), Phase::Np);
        assert_eq!(classify(0.0, DEFAULT_SR_THRESHOLD), Phase::Np);
        assert_eq!(classify(10.0, DEFAULT_SR_THRESHOLD), Phase::Np);
    }

    #[test]
    fn steady_state_of_constant_series() {
        let s = constant_series(vec![4.25; 500], 1.0);
        let st = detect_steady_state(&s, 1.0, 4.99).unwrap();
        assert_eq!(st.photon, 4.25);
        assert!(st.converged);
        assert!((st.stderr - 0.1).abs() < 1e-12);
    }

    #[test]
    fn drifting_series_is_flagged() {
        let ramp: Vec<f64> = (0..500).map(|k| 1.0 + k as f64).collect();
        let st = detect_steady_state(&constant_series(ramp.clone(), 1.0), 0.0, 5.0).unwrap();
        assert!(!st.converged);
        // The same drift buried in a wide ensemble spread is not significant.
        let st = detect_steady_state(&constant_series(ramp, 1e5), 0.0, 5.0).unwrap();
        assert!(st.converged);
    }

    #[test]
    fn empty_tail_is_an_error() {
        let s = constant_series(vec![1.0; 10], 0.0);
        assert!(detect_steady_state(&s, 5.0, 6.0).is_err());
    }

    #[test]
    fn grid_validation() {
        let mut g = GridSpec::desk(1);
        g.validate().unwrap();
        assert_eq!(g.theta_values.len(), 12);
        assert_eq!(g.g_rel_values[11], 1.4);
        g.theta_values[3] = g.theta_values[2];
        assert!(g.validate().is_err());
        let mut g = GridSpec::desk(1);
        g.theta_values.push(1.6);
        assert!(g.validate().is_err());
        let mut g = GridSpec::desk(1);
        g.tail_start = 20.0;
        assert!(g.validate().is_err());
    }

    #[test]
    fn boundary_estimates() {
        let grid = GridSpec::uniform((0.0, 0.0, 1), (0.8, 1.2, 5), 0);
        let mk = |sr: Vec<bool>, ok: Vec<bool>| PhaseDiagram {
            grid: grid.clone(),
            photon_steady: vec![vec![0.0; 5]],
            photon_stderr: vec![vec![0.0; 5]],
            converged: vec![ok],
            is_sr: vec![sr],
            boundary_analytic: vec![(0.0, 1.0)],
            failures: vec![],
        };
        let all = vec![true; 5];
        let d = mk(vec![false, false, true, true, true], all.clone());
        assert!(
            matches!(d.empirical_boundary(0), BoundaryEstimate::Bracketed(g) if (g - 0.95).abs() < 1e-12)
        );
        assert_eq!(
            mk(vec![true; 5], all.clone()).empirical_boundary(0),
            BoundaryEstimate::BelowGrid
        );
        assert_eq!(
            mk(vec![false; 5], all.clone()).empirical_boundary(0),
            BoundaryEstimate::AboveGrid
        );
        assert_eq!(
            mk(vec![false, true, false, true, true], all).empirical_boundary(0),
            BoundaryEstimate::Unresolved
        );
        assert_eq!(
            mk(
                vec![false, false, true, true, true],
                vec![true, false, true, true, true]
            )
            .empirical_boundary(0),
            BoundaryEstimate::Unresolved
        );
    }
}
