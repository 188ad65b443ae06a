use serde::Serialize;

use crate::dynamics::EnsembleSeries;
use crate::error::{Error, Result};

/// Photon readout summarised over a time window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReadoutStats {
    /// Time average of the ensemble-mean photon number.
    pub mean_photon: f64,
    /// Peak-to-trough excursion of the ensemble-mean photon number.
    pub modulation_depth: f64,
    /// Time average of the ensemble standard deviation (half-width of the ±1σ band).
    pub mean_std: f64,
    pub n_samples: usize,
}

impl ReadoutStats {
    /// Standard error of `mean_photon` treating `mean_std / √n_traj` as the
    /// per-sample error. Time correlations are ignored, which is conservative
    /// only for uncorrelated-in-time trajectories; use it as an estimate.
    pub fn standard_error(&self, n_traj: usize) -> f64 {
        self.mean_std / (n_traj as f64).sqrt()
    }
}

pub fn readout_stats(series: &EnsembleSeries, start: f64, end: f64) -> Result<ReadoutStats> {
    let w = series.window(start, end);
    if w.is_empty() {
        return Err(Error::InvalidWindow {
            start,
            end,
            reason: "no samples in window".into(),
        });
    }
    let n = w.len() as f64;
    let means = &series.mean_photon[w.clone()];
    let (lo, hi) = means
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    Ok(ReadoutStats {
        mean_photon: means.iter().sum::<f64>() / n,
        modulation_depth: hi - lo,
        mean_std: series.std_photon[w.clone()].iter().sum::<f64>() / n,
        n_samples: w.len(),
    })
}
