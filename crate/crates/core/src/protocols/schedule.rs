use serde::Serialize;

use crate::error::{Error, Result};

/// Time-dependent controls `g(t)` and `θ(t)`.
///
/// Both controls ramp linearly from zero over `[0, t_ramp]` and then hold.
/// From `t0` on the phase is modulated as `θ0 + δθ sin(ω_dr (t − t0))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Schedule {
    g_final: f64,
    theta0: f64,
    t_ramp: f64,
    t0: f64,
    delta_theta: f64,
    omega_drive: f64,
}

impl Schedule {
    /// Controls fixed at `(g, θ)` from `t = 0`.
    pub fn constant(g: f64, theta: f64) -> Self {
        Schedule {
            g_final: g,
            theta0: theta,
            t_ramp: 0.0,
            t0: 0.0,
            delta_theta: 0.0,
            omega_drive: 0.0,
        }
    }

    /// Linear ramp of both controls to `(g_final, theta0)` over `t_ramp` ms.
    pub fn ramped(g_final: f64, theta0: f64, t_ramp: f64) -> Result<Self> {
        if !(g_final.is_finite() && g_final >= 0.0) {
            return Err(Error::invalid(
                "g_final",
                format!("must be >= 0, got {g_final}"),
            ));
        }
        if !(t_ramp.is_finite() && t_ramp >= 0.0) {
            return Err(Error::invalid(
                "t_ramp",
                format!("must be >= 0, got {t_ramp}"),
            ));
        }
        Ok(Schedule {
            g_final,
            theta0,
            t_ramp,
            t0: t_ramp,
            delta_theta: 0.0,
            omega_drive: 0.0,
        })
    }

    /// Adds the sinusoidal phase drive starting at `t0`.
    pub fn with_drive(mut self, t0: f64, delta_theta: f64, omega_drive: f64) -> Result<Self> {
        if !(t0.is_finite() && t0 >= self.t_ramp) {
            return Err(Error::invalid(
                "t0",
                format!(
                    "drive must start after the ramp (t0 = {t0} < t_ramp = {})",
                    self.t_ramp
                ),
            ));
        }
        if !(omega_drive.is_finite() && omega_drive >= 0.0) {
            return Err(Error::invalid(
                "omega_drive",
                format!("must be >= 0, got {omega_drive}"),
            ));
        }
        self.t0 = t0;
        self.delta_theta = delta_theta;
        self.omega_drive = omega_drive;
        Ok(self)
    }

    fn ramp_fraction(&self, t: f64) -> f64 {
        if t >= self.t_ramp {
            1.0
        } else if t <= 0.0 {
            0.0
        } else {
            t / self.t_ramp
        }
    }

    pub fn coupling(&self, t: f64) -> f64 {
        self.g_final * self.ramp_fraction(t)
    }

    pub fn phase(&self, t: f64) -> f64 {
        if t > self.t0 && self.delta_theta != 0.0 {
            self.theta0 + self.delta_theta * (self.omega_drive * (t - self.t0)).sin()
        } else {
            self.theta0 * self.ramp_fraction(t)
        }
    }

    /// Largest coupling reached, used for step-size checks.
    pub fn max_coupling(&self) -> f64 {
        self.g_final
    }

    pub fn g_final(&self) -> f64 {
        self.g_final
    }

    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    pub fn t_ramp(&self) -> f64 {
        self.t_ramp
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn delta_theta(&self) -> f64 {
        self.delta_theta
    }

    pub fn omega_drive(&self) -> f64 {
        self.omega_drive
    }
}
