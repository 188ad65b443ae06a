use rotsense::dynamics::IntegratorConfig;
use rotsense::model::boundary_curve;
use rotsense::sweep::{sweep_phase_diagram, BoundaryEstimate, GridSpec};
use rotsense::ModelParams;

fn small_grid(seed: u64) -> GridSpec {
    let mut grid = GridSpec::uniform((0.0, 1.0, 3), (0.7, 1.3, 4), seed);
    grid.n_traj = 20;
    grid.t_end = 6.0;
    grid.tail_start = 3.0;
    grid
}

#[test]
fn small_grid_separates_the_phases() {
    let p = ModelParams::reference();
    let grid = small_grid(1);
    let d = sweep_phase_diagram(&grid, &p, &IntegratorConfig::default()).unwrap();
    assert!(d.failures.is_empty());
    for (i, &theta) in grid.theta_values.iter().enumerate() {
        let b = boundary_curve(theta).unwrap();
        assert_eq!(d.boundary_analytic[i], (theta, b));
        for (k, &g) in grid.g_rel_values.iter().enumerate() {
            if g < b - 0.1 {
                assert!(!d.is_sr[i][k], "theta={theta} g={g}");
                assert!(d.photon_steady[i][k] < 5.0);
            }
            if g > b + 0.1 {
                assert!(d.is_sr[i][k], "theta={theta} g={g}");
            }
        }
        for k in 1..grid.g_rel_values.len() {
            assert!(
                d.photon_steady[i][k]
                    >= d.photon_steady[i][k - 1]
                        - 3.0 * d.photon_stderr[i][k].hypot(d.photon_stderr[i][k - 1])
            );
        }
    }
    match d.empirical_boundary(0) {
        BoundaryEstimate::Bracketed(g) => assert!((g - 1.0).abs() < 1e-12, "{g}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn sweep_is_reproducible_and_seeded() {
    let p = ModelParams::reference();
    let mut grid = small_grid(5);
    grid.theta_values = vec![0.5];
    grid.g_rel_values = vec![0.8, 1.2];
    grid.t_end = 3.0;
    grid.tail_start = 2.0;
    let integ = IntegratorConfig::default();
    let a = sweep_phase_diagram(&grid, &p, &integ).unwrap();
    let b = sweep_phase_diagram(&grid, &p, &integ).unwrap();
    assert_eq!(a.photon_steady, b.photon_steady);
    grid.seed = 6;
    let c = sweep_phase_diagram(&grid, &p, &integ).unwrap();
    assert_ne!(a.photon_steady, c.photon_steady);
}

#[test]
fn invalid_grid_is_rejected() {
    let p = ModelParams::reference();
    let mut grid = small_grid(1);
    grid.theta_values = vec![0.2, 1.7];
    assert!(sweep_phase_diagram(&grid, &p, &IntegratorConfig::default()).is_err());
}
