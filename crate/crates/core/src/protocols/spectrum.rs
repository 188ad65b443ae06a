use std::f64::consts::TAU;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::dynamics::EnsembleSeries;
use crate::error::{Error, Result};

/// The analysis window must span at least this many drive periods.
pub const MIN_DRIVE_PERIODS: f64 = 8.0;

/// Magnitude spectrum of the mean photon number over a time window.
///
/// Frequencies are angular, in rad/ms. Magnitudes are amplitude-normalised:
/// a pure `A sin(ω t)` on a bin shows up as `A` at `ω`.
#[derive(Debug, Clone, Serialize)]
pub struct Spectrum {
    pub frequencies: Vec<f64>,
    pub magnitudes: Vec<f64>,
    #[serde(skip)]
    tapered: Vec<f64>,
    #[serde(skip)]
    sample_interval: f64,
    #[serde(skip)]
    window_gain: f64,
}

impl Spectrum {
    /// Frequency of the largest positive-frequency component.
    pub fn dominant_frequency(&self) -> f64 {
        let (k, _) =
            self.magnitudes
                .iter()
                .enumerate()
                .fold(
                    (0, f64::NEG_INFINITY),
                    |acc, (k, &m)| if m > acc.1 { (k, m) } else { acc },
                );
        self.frequencies[k]
    }

    /// Tapered DFT magnitude evaluated at an arbitrary angular frequency.
    pub fn magnitude_at(&self, omega: f64) -> f64 {
        let sum: Complex64 = self
            .tapered
            .iter()
            .enumerate()
            .map(|(k, &x)| x * Complex64::from_polar(1.0, -omega * k as f64 * self.sample_interval))
            .sum();
        2.0 * sum.norm() / self.window_gain
    }

    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }
}

/// Hann-tapered, mean-subtracted spectrum of `values` sampled every `dt` ms.
pub fn spectrum_of(values: &[f64], dt: f64) -> Spectrum {
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let taper: Vec<f64> = (0..n)
        .map(|k| 0.5 * (1.0 - (TAU * k as f64 / n as f64).cos()))
        .collect();
    let window_gain: f64 = taper.iter().sum();
    let tapered: Vec<f64> = values
        .iter()
        .zip(&taper)
        .map(|(v, w)| (v - mean) * w)
        .collect();

    let mut buf: Vec<Complex64> = tapered.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);

    let (frequencies, magnitudes) = (1..=n / 2)
        .map(|k| {
            (
                TAU * k as f64 / (n as f64 * dt),
                2.0 * buf[k].norm() / window_gain,
            )
        })
        .unzip();
    Spectrum {
        frequencies,
        magnitudes,
        tapered,
        sample_interval: dt,
        window_gain,
    }
}

/// Spectrum of `series.mean_photon` over samples with `start <= t < end`.
///
/// Rejects windows shorter than [`MIN_DRIVE_PERIODS`] periods of `omega_drive`.
pub fn response_spectrum(
    series: &EnsembleSeries,
    start: f64,
    end: f64,
    omega_drive: f64,
) -> Result<Spectrum> {
    let bad = |reason: String| Error::InvalidWindow { start, end, reason };
    let dt = series
        .sample_interval()
        .ok_or_else(|| bad("series has fewer than two samples".into()))?;
    let lo = series.times.partition_point(|&t| t < start - 1e-9);
    let hi = series.times.partition_point(|&t| t < end - 1e-9);
    if hi <= lo + 1 {
        return Err(bad("window holds fewer than two samples".into()));
    }
    let span = (hi - lo) as f64 * dt;
    if omega_drive > 0.0 {
        let needed = MIN_DRIVE_PERIODS * TAU / omega_drive;
        if span < needed * (1.0 - 1e-9) {
            return Err(bad(format!(
                "window spans {span:.3} ms, need at least {MIN_DRIVE_PERIODS} drive periods ({needed:.3} ms)"
            )));
        }
    }
    let grid_ok = series.times[lo..hi]
        .windows(2)
        .all(|w| ((w[1] - w[0]) - dt).abs() < 1e-6 * dt);
    if !grid_ok {
        return Err(bad("samples are not uniformly spaced".into()));
    }
    Ok(spectrum_of(&series.mean_photon[lo..hi], dt))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn series_from(f: impl Fn(f64) -> f64, dt: f64, n: usize) -> EnsembleSeries {
        let times: Vec<f64> = (0..n).map(|k| k as f64 * dt).collect();
        let values: Vec<f64> = times.iter().map(|&t| f(t)).collect();
        EnsembleSeries {
            mean_photon: values,
            std_photon: vec![0.0; n],
            mean_imbalance: vec![0.0; n],
            std_imbalance: vec![0.0; n],
            mean_atoms: vec![0.0; n],
            theta_trace: vec![0.0; n],
            g_trace: vec![0.0; n],
            n_traj: 2,
            times,
        }
    }

    #[test]
    fn sine_peaks_at_drive() {
        let w = PI;
        let s = series_from(|t| 3.0 + (w * t).sin(), 0.01, 2000);
        let spec = response_spectrum(&s, 0.0, 16.0, w).unwrap();
        assert!((spec.dominant_frequency() - w).abs() < 1e-9);
        assert!((spec.magnitude_at(w) - 1.0).abs() < 1e-6);
        assert!(spec.magnitude_at(2.0 * w) < 1e-6);
    }

    #[test]
    fn squared_sine_peaks_at_double_frequency() {
        let w = PI;
        let s = series_from(|t| (w * t).sin().powi(2), 0.01, 2000);
        let spec = response_spectrum(&s, 2.0, 18.0, w).unwrap();
        assert!((spec.dominant_frequency() - 2.0 * w).abs() < 1e-9);
        assert!(spec.magnitude_at(2.0 * w) > 100.0 * spec.magnitude_at(w));
    }

    #[test]
    fn off_bin_tone_is_located() {
        let w = 2.3;
        let s = series_from(|t| (w * t).cos(), 0.01, 3000);
        let spec = response_spectrum(&s, 0.0, 30.0, 2.0).unwrap();
        let resolution = TAU / 30.0;
        assert!((spec.dominant_frequency() - w).abs() <= resolution / 2.0);
    }

    #[test]
    fn short_window_is_rejected() {
        let s = series_from(|t| t, 0.01, 2000);
        assert!(matches!(
            response_spectrum(&s, 3.0, 10.0, PI),
            Err(Error::InvalidWindow { .. })
        ));
        assert!(response_spectrum(&s, 30.0, 40.0, PI).is_err());
    }
}
