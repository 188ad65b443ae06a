use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use super::integrator::{integrate_trajectory, IntegratorConfig, Trajectory};
use super::noise::{keyed_stream, NoiseStream};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::protocols::Schedule;

/// Key offset separating the atom-number draws from the trajectory noise, so
/// that switching the sampler never shifts the noise sequence.
const ATOM_SAMPLER_KEY: u64 = 0x6174_6f6d_2d6e_756d;

/// Lower cut of the truncated Gaussian, as a fraction of the mean.
pub const ATOM_FLOOR_FRACTION: f64 = 0.1;

/// Atom number assigned to each trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AtomSampler {
    Fixed {
        atoms: f64,
    },
    /// Gaussian shot-to-shot fluctuations, redrawn below `0.1·mean`.
    Gaussian {
        mean: f64,
        sigma: f64,
    },
}

impl AtomSampler {
    pub fn fixed(atoms: f64) -> Self {
        AtomSampler::Fixed { atoms }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            AtomSampler::Fixed { atoms } if atoms.is_finite() && atoms > 0.0 => Ok(()),
            AtomSampler::Gaussian { mean, sigma }
                if mean.is_finite() && mean > 0.0 && sigma.is_finite() && sigma >= 0.0 =>
            {
                Ok(())
            }
            other => Err(Error::invalid("atom_sampler", format!("{other:?}"))),
        }
    }

    /// Atom number of trajectory `index` under master seed `seed`.
    pub fn draw(&self, seed: u64, index: u64) -> f64 {
        match *self {
            AtomSampler::Fixed { atoms } => atoms,
            AtomSampler::Gaussian { mean, sigma } => {
                let mut rng = keyed_stream(seed ^ ATOM_SAMPLER_KEY, index);
                loop {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    let n = mean + sigma * z;
                    if n >= ATOM_FLOOR_FRACTION * mean {
                        return n;
                    }
                }
            }
        }
    }
}

/// Ensemble statistics on the common sample grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleSeries {
    pub times: Vec<f64>,
    pub mean_photon: Vec<f64>,
    pub std_photon: Vec<f64>,
    pub mean_imbalance: Vec<f64>,
    pub std_imbalance: Vec<f64>,
    pub mean_atoms: Vec<f64>,
    pub theta_trace: Vec<f64>,
    pub g_trace: Vec<f64>,
    pub n_traj: usize,
}

fn mean_std(values: impl Iterator<Item = f64> + Clone, n: usize) -> (f64, f64) {
    let mean = values.clone().sum::<f64>() / n as f64;
    let var = values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n as f64 - 1.0);
    (mean, var.sqrt())
}

impl EnsembleSeries {
    /// Reduces trajectories (in the given order) to per-time mean and sample
    /// standard deviation.
    pub fn from_trajectories(trajectories: &[Trajectory]) -> Result<Self> {
        let n = trajectories.len();
        if n < 2 {
            return Err(Error::invalid(
                "n_traj",
                format!("need at least 2 trajectories, got {n}"),
            ));
        }
        let len = trajectories[0].samples.len();
        if trajectories.iter().any(|t| t.samples.len() != len) {
            return Err(Error::invalid("trajectories", "sample grids differ"));
        }
        let mut out = EnsembleSeries {
            times: Vec::with_capacity(len),
            mean_photon: Vec::with_capacity(len),
            std_photon: Vec::with_capacity(len),
            mean_imbalance: Vec::with_capacity(len),
            std_imbalance: Vec::with_capacity(len),
            mean_atoms: Vec::with_capacity(len),
            theta_trace: Vec::with_capacity(len),
            g_trace: Vec::with_capacity(len),
            n_traj: n,
        };
        for k in 0..len {
            let s0 = &trajectories[0].samples[k];
            let (mp, sp) = mean_std(trajectories.iter().map(|t| t.samples[k].photon), n);
            let (mi, si) = mean_std(trajectories.iter().map(|t| t.samples[k].imbalance), n);
            let ma = trajectories.iter().map(|t| t.samples[k].atoms).sum::<f64>() / n as f64;
            out.times.push(s0.t);
            out.mean_photon.push(mp);
            out.std_photon.push(sp);
            out.mean_imbalance.push(mi);
            out.std_imbalance.push(si);
            out.mean_atoms.push(ma);
            out.theta_trace.push(s0.theta);
            out.g_trace.push(s0.g);
        }
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Indices of samples with `start <= t <= end` (inclusive, to within 1 ns).
    pub fn window(&self, start: f64, end: f64) -> std::ops::Range<usize> {
        let lo = self.times.partition_point(|&t| t < start - 1e-9);
        let hi = self.times.partition_point(|&t| t <= end + 1e-9);
        lo..hi.max(lo)
    }

    /// Uniform sample spacing, ms.
    pub fn sample_interval(&self) -> Option<f64> {
        (self.times.len() >= 2).then(|| self.times[1] - self.times[0])
    }
}

/// Runs `n_traj` trajectories in parallel and returns them ordered by index.
pub fn run_trajectories(
    schedule: &Schedule,
    params: &ModelParams,
    config: &IntegratorConfig,
    n_traj: usize,
    seed: u64,
    sampler: &AtomSampler,
) -> Result<Vec<Trajectory>> {
    if n_traj < 2 {
        return Err(Error::invalid(
            "n_traj",
            format!("must be >= 2, got {n_traj}"),
        ));
    }
    sampler.validate()?;
    config.validate(params, schedule.max_coupling())?;
    let results: Vec<Result<Trajectory>> = (0..n_traj as u64)
        .into_par_iter()
        .map(|i| {
            let atoms = sampler.draw(seed, i);
            let mut noise = NoiseStream::new(seed, i);
            integrate_trajectory(schedule, params, config, &mut noise, atoms)
        })
        .collect();

    let failed = results.iter().filter(|r| r.is_err()).count();
    if failed > 0 {
        let first = results
            .into_iter()
            .find_map(|r| r.err())
            .expect("failed > 0");
        return Err(Error::Ensemble {
            failed,
            total: n_traj,
            first: Box::new(first),
        });
    }
    Ok(results.into_iter().map(|r| r.expect("checked")).collect())
}

/// Truncated-Wigner ensemble statistics for `n_traj` trajectories.
pub fn run_ensemble(
    schedule: &Schedule,
    params: &ModelParams,
    config: &IntegratorConfig,
    n_traj: usize,
    seed: u64,
    sampler: &AtomSampler,
) -> Result<EnsembleSeries> {
    let trajectories = run_trajectories(schedule, params, config, n_traj, seed, sampler)?;
    EnsembleSeries::from_trajectories(&trajectories)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_trajectories_have_zero_spread() {
        let p = ModelParams::reference();
        let cfg = IntegratorConfig::new(0.5);
        let sched = Schedule::constant(0.5 * p.g0_crit(), 0.0);
        let mut noise = NoiseStream::new(9, 0);
        let t = integrate_trajectory(&sched, &p, &cfg, &mut noise, p.n_atoms()).unwrap();
        let series = EnsembleSeries::from_trajectories(&[t.clone(), t]).unwrap();
        assert!(series.std_photon.iter().all(|&s| s == 0.0));
        assert!(series.std_imbalance.iter().all(|&s| s == 0.0));
    }

    #[test]
    fn rejects_single_trajectory() {
        let p = ModelParams::reference();
        let cfg = IntegratorConfig::new(0.5);
        let sched = Schedule::constant(0.0, 0.0);
        assert!(run_ensemble(&sched, &p, &cfg, 1, 0, &AtomSampler::fixed(1e4)).is_err());
    }

    #[test]
    fn failing_trajectories_fail_the_ensemble() {
        let p = ModelParams::reference();
        let cfg = IntegratorConfig::new(0.5);
        let sched = Schedule::constant(0.0, 0.0);
        let bad = AtomSampler::Gaussian {
            mean: -1.0,
            sigma: 0.0,
        };
        assert!(run_ensemble(&sched, &p, &cfg, 4, 0, &bad).is_err());
    }

    #[test]
    fn gaussian_sampler() {
        let s = AtomSampler::Gaussian {
            mean: 40_000.0,
            sigma: 4_000.0,
        };
        let n = 4000;
        let draws: Vec<f64> = (0..n).map(|i| s.draw(5, i)).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        assert!((mean - 40_000.0).abs() < 3.0 * 4_000.0 / (n as f64).sqrt());
        assert!(draws.iter().all(|&d| d >= 4_000.0));
        assert_eq!(s.draw(5, 17), s.draw(5, 17));

        let wide = AtomSampler::Gaussian {
            mean: 100.0,
            sigma: 200.0,
        };
        assert!((0..1000).all(|i| wide.draw(1, i) >= 10.0));

        let degenerate = AtomSampler::Gaussian {
            mean: 40_000.0,
            sigma: 0.0,
        };
        assert_eq!(degenerate.draw(3, 3), 40_000.0);
    }

    #[test]
    fn window_selection() {
        let series = EnsembleSeries {
            times: (0..11).map(|k| k as f64 * 0.1).collect(),
            mean_photon: vec![0.0; 11],
            std_photon: vec![0.0; 11],
            mean_imbalance: vec![0.0; 11],
            std_imbalance: vec![0.0; 11],
            mean_atoms: vec![0.0; 11],
            theta_trace: vec![0.0; 11],
            g_trace: vec![0.0; 11],
            n_traj: 2,
        };
        assert_eq!(series.window(0.3, 0.6), 3..7);
        assert_eq!(series.window(2.0, 3.0), 11..11);
    }
}
