use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};

use super::noise::NoiseStream;
use crate::model::ModelParams;

/// One phase-space point: the cavity amplitude and the `M` site amplitudes.
///
/// Site indices are periodic, `b_M ≡ b_0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemState {
    pub cavity: Complex64,
    pub sites: Vec<Complex64>,
}

/// Alternating sign `(−1)^j` of the cavity coupling on site `j`.
#[inline]
pub(crate) fn parity(j: usize) -> f64 {
    if j.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

impl SystemState {
    pub fn new(cavity: Complex64, sites: Vec<Complex64>) -> Self {
        SystemState { cavity, sites }
    }

    /// Empty cavity and `atoms/M` atoms on every site, all real.
    pub fn uniform(params: &ModelParams, atoms: f64) -> Self {
        let m = params.n_sites();
        let b = Complex64::new((atoms / m as f64).sqrt(), 0.0);
        SystemState {
            cavity: Complex64::new(0.0, 0.0),
            sites: vec![b; m],
        }
    }

    /// Tilts the populations by a relative amount `eps`, `n_j → n_j (1 + eps (−1)^j)`.
    ///
    /// Seeds symmetry breaking for noiseless runs that would otherwise sit on
    /// the normal-state fixed point forever.
    pub fn with_imbalance_seed(mut self, eps: f64) -> Self {
        for (j, b) in self.sites.iter_mut().enumerate() {
            *b *= (1.0 + eps * parity(j)).sqrt();
        }
        self
    }

    pub fn zeros_like(&self) -> Self {
        SystemState {
            cavity: Complex64::new(0.0, 0.0),
            sites: vec![Complex64::new(0.0, 0.0); self.sites.len()],
        }
    }

    pub fn photon_number(&self) -> f64 {
        self.cavity.norm_sqr()
    }

    /// `D = Σ (−1)^j |b_j|²`.
    pub fn imbalance(&self) -> f64 {
        self.sites
            .iter()
            .enumerate()
            .map(|(j, b)| parity(j) * b.norm_sqr())
            .sum()
    }

    pub fn total_atoms(&self) -> f64 {
        self.sites.iter().map(|b| b.norm_sqr()).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.cavity.is_finite() && self.sites.iter().all(|b| b.is_finite())
    }

    /// Largest component-wise distance to `other`.
    pub fn max_abs_diff(&self, other: &SystemState) -> f64 {
        self.sites
            .iter()
            .zip(&other.sites)
            .map(|(a, b)| (a - b).norm())
            .fold((self.cavity - other.cavity).norm(), f64::max)
    }
}

/// Draws an initial state from the Wigner function of the coherent state
/// `|α = 0⟩ ⊗ Π_j |√(N/M)⟩`: every quadrature gets independent Gaussian noise
/// of variance 1/4 around its coherent value.
pub fn sample_initial(
    params: &ModelParams,
    atoms_this_traj: f64,
    noise: &mut NoiseStream,
) -> SystemState {
    let mut draw = || -> Complex64 {
        let re: f64 = StandardNormal.sample(noise.rng());
        let im: f64 = StandardNormal.sample(noise.rng());
        Complex64::new(re, im) * 0.5
    };
    let cavity = draw();
    let mean = (atoms_this_traj / params.n_sites() as f64).sqrt();
    let sites = (0..params.n_sites()).map(|_| mean + draw()).collect();
    SystemState { cavity, sites }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn observables() {
        let s = SystemState::new(
            Complex64::new(3.0, 4.0),
            vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 2.0),
                Complex64::new(1.0, 1.0),
                Complex64::new(0.0, 0.0),
            ],
        );
        assert_eq!(s.photon_number(), 25.0);
        assert_eq!(s.total_atoms(), 1.0 + 4.0 + 2.0);
        assert_eq!(s.imbalance(), 1.0 - 4.0 + 2.0);
    }

    #[test]
    fn imbalance_seed() {
        let p = ModelParams::reference();
        let s = SystemState::uniform(&p, 60_000.0).with_imbalance_seed(1e-3);
        assert!((s.total_atoms() - 60_000.0).abs() < 1e-8);
        assert!((s.imbalance() - 60.0).abs() < 1e-8);
    }

    #[test]
    fn sampling_is_reproducible() {
        let p = ModelParams::reference();
        let a = sample_initial(&p, 1000.0, &mut NoiseStream::new(42, 7));
        let b = sample_initial(&p, 1000.0, &mut NoiseStream::new(42, 7));
        let c = sample_initial(&p, 1000.0, &mut NoiseStream::new(42, 8));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn wigner_moments() {
        let p = ModelParams::reference();
        let atoms = 400.0;
        let n = 40_000;
        let (mut a_re, mut a2, mut b2) = (0.0, 0.0, 0.0);
        for i in 0..n {
            let s = sample_initial(&p, atoms, &mut NoiseStream::new(3, i));
            a_re += s.cavity.re;
            a2 += s.photon_number();
            b2 += s.sites[1].norm_sqr();
        }
        let n = n as f64;
        // Standard errors: Re α ~ 0.5/√n, |α|² ~ 0.5/√n, |b|² ~ √(2·100·0.5)/√n.
        assert!((a_re / n).abs() < 5.0 * 0.5 / n.sqrt());
        assert!((a2 / n - 0.5).abs() < 5.0 * 0.5 / n.sqrt());
        assert!((b2 / n - (atoms / 4.0 + 0.5)).abs() < 5.0 * 10.0 / n.sqrt());
    }
}
