//! Frequency units.
//!
//! Everything inside the crate is an angular frequency in rad/ms with time in
//! ms. Configuration files and CSV metadata quote rates the way experimental
//! papers do, as multiples of 2π × kHz; since 1 kHz = 1 ms⁻¹, a value `x` in
//! those units is `2π·x` rad/ms.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FrequencyUnit {
    /// Multiples of 2π × kHz (configuration-file convention).
    TwoPiKilohertz,
    /// rad/ms (internal convention).
    RadPerMs,
}

impl FrequencyUnit {
    /// Converts `value` expressed in `self` to rad/ms.
    pub fn to_rad_per_ms(self, value: f64) -> f64 {
        match self {
            FrequencyUnit::TwoPiKilohertz => value * TAU,
            FrequencyUnit::RadPerMs => value,
        }
    }

    /// Converts `value` in rad/ms to `self`.
    pub fn from_rad_per_ms(self, value: f64) -> f64 {
        match self {
            FrequencyUnit::TwoPiKilohertz => value / TAU,
            FrequencyUnit::RadPerMs => value,
        }
    }
}

#[inline]
pub fn two_pi_khz(value: f64) -> f64 {
    FrequencyUnit::TwoPiKilohertz.to_rad_per_ms(value)
}

#[inline]
pub fn to_two_pi_khz(rad_per_ms: f64) -> f64 {
    FrequencyUnit::TwoPiKilohertz.from_rad_per_ms(rad_per_ms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn paper_rates() {
        assert_eq!(two_pi_khz(1.0), TAU);
        assert!((two_pi_khz(5.0) - 31.415_926_535_897_93).abs() < 1e-12);
        assert_eq!(FrequencyUnit::RadPerMs.to_rad_per_ms(3.0), 3.0);
    }

    proptest! {
        #[test]
        fn round_trip_is_exact_to_an_ulp(x in -1e6f64..1e6) {
            let back = to_two_pi_khz(two_pi_khz(x));
            prop_assert!((back - x).abs() <= f64::EPSILON * x.abs());
        }
    }
}
