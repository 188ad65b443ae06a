//! Numerical minimum of the mean-field energy against the closed-form branch.

use std::f64::consts::PI;

use rotsense::meanfield::{closed_form_photon_number, minimize_energy};
use rotsense::model::critical_coupling;
use rotsense::ModelParams;

fn main() -> rotsense::Result<()> {
    let p = ModelParams::reference();
    for theta in [0.0, PI / 4.0] {
        let gc = critical_coupling(&p, theta)?;
        println!("theta = {:.4}, gcrit = {:.5} rad/ms", theta, gc);
        println!(
            "{:>7} {:>10} {:>12} {:>12} {:>12}",
            "g/gc", "Delta/N", "Re alpha", "photons", "closed form"
        );
        for ratio in [0.8, 0.95, 1.0, 1.05, 1.1, 1.2, 1.5, 2.0] {
            let g = ratio * gc;
            let m = minimize_energy(theta, g, &p)?;
            println!(
                "{:>7.2} {:>10.5} {:>12.3} {:>12.2} {:>12.2}",
                ratio,
                m.delta / p.n_atoms(),
                m.alpha.re,
                m.photon_number(),
                closed_form_photon_number(theta, g, &p)?
            );
        }
    }
    Ok(())
}
