//! Loads a TOML run configuration, applies it and writes the mean-field table.

use std::f64::consts::PI;

use rotsense::config::RunConfig;
use rotsense::meanfield::minimize_energy;
use rotsense::output::{meanfield_table, write_csv, Metadata};

const CONFIG: &str = r#"
seed = 4
format = "csv"

[params]
omega = 10.0
kappa = 5.0
J = 2.0
N_atoms = 60000
M = 4
omega_rec = 3.5

[meanfield]
theta = [0.0, 0.25]
g_rel = [0.9, 1.1, 1.3]
"#;

fn main() -> rotsense::Result<()> {
    let cfg = RunConfig::from_toml_str(CONFIG)?;
    cfg.validate()?;
    let p = cfg.model_params()?;
    let mut points = Vec::new();
    for &t in &cfg.meanfield.theta {
        for &g in &cfg.meanfield.g_rel {
            points.push((t * PI, g, minimize_energy(t * PI, g * p.g0_crit(), &p)?));
        }
    }
    write_csv(
        std::io::stdout().lock(),
        &Metadata::new("meanfield", &cfg),
        &meanfield_table(&points),
    )
}
