//! Critical coupling versus gauge phase, and the rotation rate that produces it.

use std::f64::consts::PI;

use rotsense::model::{boundary_curve, critical_coupling, rotation_from_theta};
use rotsense::units::to_two_pi_khz;
use rotsense::ModelParams;

fn main() -> rotsense::Result<()> {
    let p = ModelParams::reference();
    println!("g0crit = {:.6} x 2pi kHz", to_two_pi_khz(p.g0_crit()));
    println!(
        "{:>8} {:>14} {:>12} {:>16}",
        "theta/pi", "gcrit [2pikHz]", "gcrit/g0", "Omega [rad/ms]"
    );
    for k in 0..=9 {
        let theta = k as f64 * PI / 20.0;
        println!(
            "{:>8.3} {:>14.6} {:>12.5} {:>16.6}",
            theta / PI,
            to_two_pi_khz(critical_coupling(&p, theta)?),
            boundary_curve(theta)?,
            rotation_from_theta(theta, &p)
        );
    }
    Ok(())
}
