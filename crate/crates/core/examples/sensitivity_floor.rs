//! Two steady ensembles a phase step of pi/400 apart, compared against their
//! combined standard error.

use std::f64::consts::{FRAC_PI_4, PI};

use rotsense::dynamics::{run_trajectories, AtomSampler, IntegratorConfig};
use rotsense::protocols::{build_sensing_schedule, SensingConfig};
use rotsense::ModelParams;

fn tail_mean(theta0: f64, n_traj: usize, seed: u64) -> rotsense::Result<(f64, f64)> {
    let p = ModelParams::reference();
    let cfg = SensingConfig {
        theta0,
        delta_theta: 0.0,
        t_end: 10.0,
        n_traj,
        ..SensingConfig::biased()
    };
    let schedule = build_sensing_schedule(&cfg, &p)?;
    let trajs = run_trajectories(
        &schedule,
        &p,
        &IntegratorConfig::new(cfg.t_end),
        n_traj,
        seed,
        &AtomSampler::fixed(p.n_atoms()),
    )?;
    let means: Vec<f64> = trajs
        .iter()
        .filter_map(|t| t.mean_photon_in(5.0, 10.0))
        .collect();
    let n = means.len() as f64;
    let mean = means.iter().sum::<f64>() / n;
    let var = means.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok((mean, (var / n).sqrt()))
}

fn main() -> rotsense::Result<()> {
    let n_traj = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(300);
    let (a, se_a) = tail_mean(FRAC_PI_4, n_traj, 1)?;
    let (b, se_b) = tail_mean(FRAC_PI_4 + PI / 400.0, n_traj, 2)?;
    let se = se_a.hypot(se_b);
    println!("theta = pi/4:         {a:.1} +- {se_a:.1}");
    println!("theta = pi/4 + pi/400: {b:.1} +- {se_b:.1}");
    println!(
        "difference {:.1} = {:.1} combined standard errors",
        b - a,
        (b - a) / se
    );
    Ok(())
}
