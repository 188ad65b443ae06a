//! Truncated-Wigner dynamics of the ring-cavity system.

mod ensemble;
mod integrator;
mod noise;
mod state;

pub use ensemble::{
    run_ensemble, run_trajectories, AtomSampler, EnsembleSeries, ATOM_FLOOR_FRACTION,
};
pub use integrator::{
    drift, integrate_deterministic, integrate_trajectory, step, step_with, IntegratorConfig,
    Sample, StepScheme, Trajectory, DEFAULT_DT, DEFAULT_RECORD_EVERY, STABILITY_LIMIT,
};
pub use noise::{derive_seed, NoiseStream};
pub use state::{sample_initial, SystemState};
