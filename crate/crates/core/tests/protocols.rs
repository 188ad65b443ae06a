use std::f64::consts::{FRAC_PI_4, PI};

use rotsense::dynamics::{integrate_deterministic, EnsembleSeries, IntegratorConfig, SystemState};
use rotsense::protocols::{
    build_sensing_schedule, readout_stats, response_spectrum, run_sensing,
    run_sensing_with_fluctuations, FluctuationConfig, Schedule, SensingConfig,
};
use rotsense::ModelParams;

/// Noiseless sensing run as a two-copy "ensemble" so the readout helpers apply.
fn noiseless(cfg: &SensingConfig) -> EnsembleSeries {
    let p = ModelParams::reference();
    run_noiseless(&build_sensing_schedule(cfg, &p).unwrap(), cfg)
}

fn run_noiseless(schedule: &Schedule, cfg: &SensingConfig) -> EnsembleSeries {
    let p = ModelParams::reference();
    let init = SystemState::uniform(&p, p.n_atoms()).with_imbalance_seed(1e-3);
    let integ = IntegratorConfig::new(cfg.t_end);
    let traj = integrate_deterministic(init, schedule, &p, &integ).unwrap();
    EnsembleSeries::from_trajectories(&[traj.clone(), traj]).unwrap()
}

#[test]
fn drive_sign_does_not_matter_at_rest() {
    let cfg = SensingConfig::at_rest();
    let p = ModelParams::reference();
    let plus = noiseless(&cfg);
    let mirrored = Schedule::ramped(cfg.g_final_rel * p.g0_crit(), 0.0, cfg.t_ramp)
        .unwrap()
        .with_drive(cfg.t0, -PI / 20.0, cfg.omega_drive)
        .unwrap();
    let minus = run_noiseless(&mirrored, &cfg);
    for (a, b) in plus.mean_photon.iter().zip(&minus.mean_photon) {
        assert!((a - b).abs() <= 1e-9 * a.max(1.0), "{a} vs {b}");
    }
}

#[test]
fn noiseless_response_doubles_at_rest_and_follows_drive_when_biased() {
    let rest_cfg = SensingConfig::at_rest();
    let w = rest_cfg.omega_drive;
    let rest = noiseless(&rest_cfg);
    let spec = response_spectrum(&rest, rest_cfg.t0, rest_cfg.t_end, w).unwrap();
    assert!(spec.magnitude_at(2.0 * w) > 3.0 * spec.magnitude_at(w));

    let biased_cfg = SensingConfig::biased();
    let biased = noiseless(&biased_cfg);
    let spec = response_spectrum(&biased, biased_cfg.t0, biased_cfg.t_end, w).unwrap();
    assert!((spec.dominant_frequency() - w).abs() < 1e-9);

    let window = (rest_cfg.t0, rest_cfg.t_end + 1e-9);
    let r = readout_stats(&rest, window.0, window.1).unwrap();
    let b = readout_stats(&biased, window.0, window.1).unwrap();
    assert!(b.modulation_depth > r.modulation_depth);
    assert!(b.mean_photon > r.mean_photon);
}

#[test]
fn constant_phase_gives_stationary_readout() {
    let p = ModelParams::reference();
    let cfg = SensingConfig {
        delta_theta: 0.0,
        t_end: 6.0,
        n_traj: 100,
        ..SensingConfig::biased()
    };
    let s = run_sensing(&cfg, &p, &IntegratorConfig::default(), 12).unwrap();
    let a = readout_stats(&s, 3.0, 4.5).unwrap();
    let b = readout_stats(&s, 4.5, 6.0 + 1e-9).unwrap();
    let se = a.standard_error(100).hypot(b.standard_error(100));
    assert!((a.mean_photon - b.mean_photon).abs() < 4.0 * se);
}

#[test]
fn ensemble_readout_is_reproducible() {
    let p = ModelParams::reference();
    let cfg = SensingConfig {
        t_end: 4.0,
        n_traj: 8,
        ..SensingConfig::biased()
    };
    let integ = IntegratorConfig::default();
    assert_eq!(
        run_sensing(&cfg, &p, &integ, 1).unwrap(),
        run_sensing(&cfg, &p, &integ, 1).unwrap()
    );
    assert_ne!(
        run_sensing(&cfg, &p, &integ, 1).unwrap(),
        run_sensing(&cfg, &p, &integ, 2).unwrap()
    );
}

#[test]
fn atom_number_fluctuations_widen_the_band() {
    let p = ModelParams::reference().with_n_atoms(40_000.0).unwrap();
    let cfg = SensingConfig {
        theta0: FRAC_PI_4,
        delta_theta: 0.0,
        t_end: 5.0,
        n_traj: 100,
        ..SensingConfig::biased()
    };
    let integ = IntegratorConfig::default();
    let fixed = run_sensing(&cfg, &p, &integ, 3).unwrap();
    let fluct = FluctuationConfig {
        mean_atoms: 40_000.0,
        sigma_atoms: 4_000.0,
    };
    let spread = run_sensing_with_fluctuations(&cfg, &fluct, &p, &integ, 3).unwrap();
    let a = readout_stats(&fixed, 3.0, 5.0 + 1e-9).unwrap();
    let b = readout_stats(&spread, 3.0, 5.0 + 1e-9).unwrap();
    assert!(
        b.mean_std > 3.0 * a.mean_std,
        "{} vs {}",
        b.mean_std,
        a.mean_std
    );
    let atoms = spread.mean_atoms[0];
    assert!((atoms / 40_000.0 - 1.0).abs() < 0.05, "{atoms}");
}
