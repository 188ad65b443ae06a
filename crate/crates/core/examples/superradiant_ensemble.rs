//! Truncated-Wigner ensemble above threshold: both symmetry-broken branches
//! appear and the mean photon number meets the mean-field value.

use rotsense::dynamics::{run_trajectories, AtomSampler, EnsembleSeries, IntegratorConfig};
use rotsense::meanfield::closed_form_photon_number;
use rotsense::protocols::{readout_stats, Schedule};
use rotsense::ModelParams;

fn main() -> rotsense::Result<()> {
    let n_traj = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(200);
    let p = ModelParams::reference();
    let g = 1.2 * p.g0_crit();
    let trajs = run_trajectories(
        &Schedule::constant(g, 0.0),
        &p,
        &IntegratorConfig::new(6.0),
        n_traj,
        7,
        &AtomSampler::fixed(p.n_atoms()),
    )?;
    let positive = trajs
        .iter()
        .filter(|t| t.final_state.imbalance() > 0.0)
        .count();
    let drift = trajs.iter().map(|t| t.max_atom_drift()).fold(0.0, f64::max);
    let series = EnsembleSeries::from_trajectories(&trajs)?;
    let tail = readout_stats(&series, 3.0, 6.0 + 1e-9)?;

    println!("{n_traj} trajectories at g = 1.2 g0crit");
    println!(
        "D > 0 branch: {positive}, D < 0 branch: {}",
        n_traj - positive
    );
    println!(
        "tail photons {:.1} +- {:.1}, mean field {:.1}",
        tail.mean_photon,
        tail.standard_error(n_traj),
        closed_form_photon_number(0.0, g, &p)?
    );
    println!("largest relative atom drift {drift:.1e}");
    Ok(())
}
