//! Real-time sensing: a sinusoidal gauge phase around rest doubles the
//! readout frequency; a bias phase of pi/4 makes it follow the drive.

use std::f64::consts::TAU;

use rotsense::dynamics::IntegratorConfig;
use rotsense::protocols::{readout_stats, response_spectrum, run_sensing, SensingConfig};
use rotsense::ModelParams;

fn main() -> rotsense::Result<()> {
    let n_traj = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(200);
    let p = ModelParams::reference();
    for (name, base) in [
        ("at rest", SensingConfig::at_rest()),
        ("biased", SensingConfig::biased()),
    ] {
        let cfg = SensingConfig { n_traj, ..base };
        let series = run_sensing(&cfg, &p, &IntegratorConfig::default(), 1)?;
        let w = cfg.omega_drive;
        let spec = response_spectrum(&series, cfg.t0, cfg.t_end, w)?;
        let last = readout_stats(&series, cfg.t_end - TAU / w, cfg.t_end + 1e-9)?;
        println!("{name}: theta0 = {:.4}", cfg.theta0);
        println!(
            "  |X(w)| = {:.2}, |X(2w)| = {:.2}",
            spec.magnitude_at(w),
            spec.magnitude_at(2.0 * w)
        );
        println!(
            "  dominant at {:.3} x 2pi kHz",
            spec.dominant_frequency() / TAU
        );
        println!(
            "  last period: mean {:.1}, depth {:.1}, std band {:.1}",
            last.mean_photon, last.modulation_depth, last.mean_std
        );
    }
    Ok(())
}
