//! Biased sensing with a Gaussian atom number per shot (N = 40000, sigma = 4000).

use std::f64::consts::TAU;

use rotsense::dynamics::IntegratorConfig;
use rotsense::protocols::{
    readout_stats, run_sensing_with_fluctuations, FluctuationConfig, SensingConfig,
};
use rotsense::ModelParams;

fn main() -> rotsense::Result<()> {
    let n_traj = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(300);
    let p = ModelParams::reference();
    let cfg = SensingConfig {
        n_traj,
        ..SensingConfig::biased()
    };
    let fluct = FluctuationConfig {
        mean_atoms: 40_000.0,
        sigma_atoms: 4_000.0,
    };
    let series = run_sensing_with_fluctuations(&cfg, &fluct, &p, &IntegratorConfig::default(), 2)?;
    let period = TAU / cfg.omega_drive;
    let mut t = cfg.t0;
    while t + period <= cfg.t_end + 1e-9 {
        let s = readout_stats(&series, t, t + period)?;
        println!(
            "[{:5.1}, {:5.1}] ms  depth {:7.1}  std band {:7.1}  {}",
            t,
            t + period,
            s.modulation_depth,
            s.mean_std,
            if s.modulation_depth > s.mean_std {
                "resolved"
            } else {
                "buried"
            }
        );
        t += period;
    }
    Ok(())
}
