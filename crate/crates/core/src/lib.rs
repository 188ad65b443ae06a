//! Semiclassical simulation of a rotation sensor built from a ring of
//! Bose-Einstein condensates coupled to a lossy optical cavity.
//!
//! Rotation imprints a gauge phase `θ` on the tunnelling around the ring,
//! which lowers the coupling needed for the superradiant instability. The
//! cavity output then tracks the rotation in real time.
//!
//! * [`model`]: parameters, units, rotation-to-phase map and analytic boundary.
//! * [`meanfield`]: variational energy and its minimiser.
//! * [`dynamics`]: truncated-Wigner trajectories and ensembles.
//! * [`protocols`]: control schedules, sensing runs, readout spectra.
//! * [`sweep`]: phase diagram over `(θ, g/g₀crit)`.
//! * [`config`] and [`output`]: run configuration and CSV/JSON writers used by
//!   the `rotsense` binary.

pub mod cli;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod meanfield;
pub mod model;
pub mod output;
pub mod protocols;
pub mod sweep;
pub mod units;

pub use error::{Error, Result};
pub use model::ModelParams;
