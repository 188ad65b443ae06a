//! Coarse phase diagram over (theta, g/g0crit), written as CSV next to a text map.

use rotsense::config::{OutputFormat, RunConfig};
use rotsense::dynamics::IntegratorConfig;
use rotsense::output::{boundary_table, phase_diagram_table, write_table, Metadata};
use rotsense::sweep::{sweep_phase_diagram, BoundaryEstimate, GridSpec};
use rotsense::ModelParams;

fn main() -> rotsense::Result<()> {
    let p = ModelParams::reference();
    let mut grid = GridSpec::uniform((0.0, 1.4, 8), (0.6, 1.4, 9), 3);
    grid.n_traj = 40;
    grid.t_end = 10.0;
    grid.tail_start = 5.0;
    let d = sweep_phase_diagram(&grid, &p, &IntegratorConfig::default())?;

    println!("rows: theta [rad], columns: g/g0crit; '#' SR, '.' NP, '?' unconverged, '|' analytic boundary");
    print!("{:>6} ", "");
    for g in &grid.g_rel_values {
        print!("{g:>5.2}");
    }
    println!();
    for (i, &theta) in grid.theta_values.iter().enumerate() {
        print!("{theta:>6.2} ");
        let b = d.boundary_analytic[i].1;
        for (k, &g) in grid.g_rel_values.iter().enumerate() {
            let mark = match (d.converged[i][k], d.is_sr[i][k]) {
                (false, _) => '?',
                (true, true) => '#',
                (true, false) => '.',
            };
            let edge = if k > 0 && grid.g_rel_values[k - 1] < b && g >= b {
                '|'
            } else {
                ' '
            };
            print!("{edge:>3}{mark} ");
        }
        match d.empirical_boundary(i) {
            BoundaryEstimate::Bracketed(g) => println!("  boundary ~ {g:.3} (analytic {b:.3})"),
            other => println!("  {other:?} (analytic {b:.3})"),
        }
    }

    let dir = std::env::temp_dir().join("rotsense-phase-diagram");
    let meta = Metadata::new("sweep", &RunConfig::default());
    let pd = write_table(
        &dir,
        "phase_diagram",
        OutputFormat::Csv,
        &meta,
        &phase_diagram_table(&d),
    )?;
    write_table(
        &dir,
        "boundary",
        OutputFormat::Csv,
        &meta,
        &boundary_table(0.0, 1.4, 101)?,
    )?;
    println!("wrote {}", pd.display());
    Ok(())
}
