//! Empty cavity driven only by vacuum noise: the photon number settles at 1/2.

use rotsense::dynamics::{run_ensemble, AtomSampler, IntegratorConfig};
use rotsense::protocols::{readout_stats, Schedule};
use rotsense::ModelParams;

fn main() -> rotsense::Result<()> {
    let p = ModelParams::reference();
    let series = run_ensemble(
        &Schedule::constant(0.0, 0.0),
        &p,
        &IntegratorConfig::new(3.0),
        500,
        1,
        &AtomSampler::fixed(p.n_atoms()),
    )?;
    for k in (0..series.len()).step_by(30) {
        println!(
            "t = {:5.2} ms  <|alpha|^2> = {:.4}",
            series.times[k], series.mean_photon[k]
        );
    }
    let tail = readout_stats(&series, 1.0, 3.0 + 1e-9)?;
    println!(
        "stationary <|alpha|^2> = {:.4} (expected 0.5)",
        tail.mean_photon
    );
    Ok(())
}
