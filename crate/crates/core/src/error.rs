use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A physical or numerical parameter violates its documented range.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// The ring size cannot be mapped onto a square with an alternating coupling pattern.
    #[error("unsupported geometry: M = {n_sites} sites (M must be a positive multiple of 4)")]
    UnsupportedGeometry { n_sites: usize },

    /// The superradiant boundary is only derived for cos(theta) >= 0.
    #[error("phase theta = {theta} rad is outside the supported domain cos(theta) >= 0")]
    PhaseOutOfDomain { theta: f64 },

    #[error("imbalance |delta| = {delta} exceeds the atom number {n_atoms}")]
    ImbalanceOutOfRange { delta: f64, n_atoms: f64 },

    #[error("state became non-finite at t = {time} ms{}", trajectory_suffix(*.trajectory))]
    NonFinite {
        time: f64,
        trajectory: Option<usize>,
    },

    #[error("invalid time window [{start}, {end}] ms: {reason}")]
    InvalidWindow {
        start: f64,
        end: f64,
        reason: String,
    },

    #[error(
        "ensemble failed: {failed} of {total} trajectories did not complete; first error: {first}"
    )]
    Ensemble {
        failed: usize,
        total: usize,
        first: Box<Error>,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn trajectory_suffix(trajectory: Option<usize>) -> String {
    match trajectory {
        Some(i) => format!(" in trajectory {i}"),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors caused by user input rather than numerical failure.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. }
                | Error::UnsupportedGeometry { .. }
                | Error::PhaseOutOfDomain { .. }
                | Error::ImbalanceOutOfRange { .. }
                | Error::InvalidWindow { .. }
                | Error::Config(_)
        )
    }
}
