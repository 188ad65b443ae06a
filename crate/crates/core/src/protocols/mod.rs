//! Control schedules, sensing experiments and spectral readout.

mod readout;
mod schedule;
mod sensing;
mod spectrum;

pub use readout::{readout_stats, ReadoutStats};
pub use schedule::Schedule;
pub use sensing::{
    build_sensing_schedule, run_sensing, run_sensing_with_fluctuations, FluctuationConfig,
    SensingConfig, DEFAULT_SENSING_T_END, DEFAULT_T0,
};
pub use spectrum::{response_spectrum, spectrum_of, Spectrum, MIN_DRIVE_PERIODS};
