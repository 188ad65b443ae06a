//! Run configuration: a TOML file plus command-line overrides.
//!
//! Rates in the `[params]` section are in units of 2π × kHz. Phases are given
//! as fractions of π (`theta0 = 0.25` means π/4) except in `[sweep]`, whose
//! keys carry an explicit `_rad` suffix. Unknown keys are rejected.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dynamics::{IntegratorConfig, StepScheme, DEFAULT_DT, DEFAULT_RECORD_EVERY};
use crate::error::{Error, Result};
use crate::model::{ModelParams, DEFAULT_OMEGA_2PI_KHZ};
use crate::protocols::{FluctuationConfig, SensingConfig, DEFAULT_SENSING_T_END, DEFAULT_T0};
use crate::sweep::{GridSpec, DEFAULT_SR_THRESHOLD};
use crate::units::two_pi_khz;

/// Largest rate accepted in the configuration, 2π × kHz. Larger values are
/// almost always a unit mistake (e.g. Hz instead of kHz).
pub const MAX_RATE_2PI_KHZ: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Threads {
    #[default]
    #[serde(with = "auto")]
    Auto,
    Count(usize),
}

mod auto {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str("auto")
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(), D::Error> {
        let s = String::deserialize(d)?;
        if s == "auto" {
            Ok(())
        } else {
            Err(D::Error::custom(format!(
                "expected \"auto\" or an integer, got {s:?}"
            )))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ParamsSection {
    pub omega: f64,
    pub kappa: f64,
    #[serde(rename = "J")]
    pub hop_j: f64,
    #[serde(rename = "N_atoms")]
    pub n_atoms: f64,
    #[serde(rename = "M")]
    pub n_sites: usize,
    pub omega_rec: f64,
}

impl Default for ParamsSection {
    fn default() -> Self {
        ParamsSection {
            omega: DEFAULT_OMEGA_2PI_KHZ,
            kappa: 5.0,
            hop_j: 2.0,
            n_atoms: 60_000.0,
            n_sites: 4,
            omega_rec: 3.5,
        }
    }
}

impl ParamsSection {
    pub fn resolve(&self) -> Result<ModelParams> {
        let rate = |name: &'static str, v: f64, allow_zero: bool| -> Result<()> {
            let lower_ok = if allow_zero { v >= 0.0 } else { v > 0.0 };
            if lower_ok && v <= MAX_RATE_2PI_KHZ {
                Ok(())
            } else {
                let lower = if allow_zero { "[0" } else { "(0" };
                Err(Error::Config(format!(
                    "params.{name} = {v} is outside {lower}, {MAX_RATE_2PI_KHZ}] (units of 2pi x kHz)"
                )))
            }
        };
        rate("omega", self.omega, false)?;
        rate("kappa", self.kappa, true)?;
        rate("J", self.hop_j, false)?;
        rate("omega_rec", self.omega_rec, false)?;
        ModelParams::from_two_pi_khz(
            self.omega,
            self.kappa,
            self.hop_j,
            self.n_atoms,
            self.n_sites,
            self.omega_rec,
        )
        .map_err(|e| Error::Config(format!("params: {e}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IntegratorSection {
    pub dt: f64,
    pub record_every: usize,
    pub scheme: StepScheme,
}

impl Default for IntegratorSection {
    fn default() -> Self {
        IntegratorSection {
            dt: DEFAULT_DT,
            record_every: DEFAULT_RECORD_EVERY,
            scheme: StepScheme::default(),
        }
    }
}

impl IntegratorSection {
    pub fn with_t_end(&self, t_end: f64) -> IntegratorConfig {
        IntegratorConfig {
            dt: self.dt,
            record_every: self.record_every,
            t_end,
            scheme: self.scheme,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MeanFieldSection {
    /// Fractions of π.
    pub theta: Vec<f64>,
    pub g_rel: Vec<f64>,
}

impl Default for MeanFieldSection {
    fn default() -> Self {
        MeanFieldSection {
            theta: vec![0.0, 0.125, 0.25, 0.375],
            g_rel: (0..=20).map(|k| 0.5 + 0.05 * k as f64).collect(),
        }
    }
}

/// Constant-control runs (`trajectory` and `ensemble` commands).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunSection {
    pub g_rel: f64,
    /// Fraction of π.
    pub theta: f64,
    /// Linear ramp of both controls, ms.
    pub t_ramp: f64,
    pub t_end: f64,
    pub n_traj: usize,
    /// Start of the averaging tail for the summary, ms.
    pub tail_start: f64,
    /// Trajectory index for the `trajectory` command.
    pub index: u64,
    /// Integrate the `trajectory` command without noise from a uniform state.
    pub noiseless: bool,
    /// Relative site-population offset seeding noiseless runs.
    pub imbalance_seed: f64,
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection {
            g_rel: 1.2,
            theta: 0.0,
            t_ramp: 0.0,
            t_end: 15.0,
            n_traj: 100,
            tail_start: 10.0,
            index: 0,
            noiseless: false,
            imbalance_seed: 1e-4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SenseSection {
    /// Fraction of π.
    pub theta0: f64,
    /// Fraction of π.
    pub delta_theta: f64,
    /// 2π × kHz.
    pub omega_drive: f64,
    pub g_rel: f64,
    pub t_ramp: f64,
    pub t0: f64,
    pub t_end: f64,
    pub n_traj: usize,
    /// Relative width σ/N of shot-to-shot atom-number fluctuations; 0 disables.
    pub sigma_rel: f64,
}

impl Default for SenseSection {
    fn default() -> Self {
        SenseSection {
            theta0: 0.0,
            delta_theta: 0.05,
            omega_drive: 0.5,
            g_rel: 1.09,
            t_ramp: 1.0,
            t0: DEFAULT_T0,
            t_end: DEFAULT_SENSING_T_END,
            n_traj: 1000,
            sigma_rel: 0.0,
        }
    }
}

impl SenseSection {
    pub fn sensing_config(&self) -> SensingConfig {
        SensingConfig {
            theta0: self.theta0 * PI,
            delta_theta: self.delta_theta * PI,
            omega_drive: two_pi_khz(self.omega_drive),
            g_final_rel: self.g_rel,
            t_ramp: self.t_ramp,
            t0: self.t0,
            t_end: self.t_end,
            n_traj: self.n_traj,
        }
    }

    pub fn fluctuations(&self, params: &ModelParams) -> Option<FluctuationConfig> {
        (self.sigma_rel > 0.0).then(|| FluctuationConfig {
            mean_atoms: params.n_atoms(),
            sigma_atoms: self.sigma_rel * params.n_atoms(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    pub theta_min_rad: f64,
    pub theta_max_rad: f64,
    pub n_theta: usize,
    pub g_rel_min: f64,
    pub g_rel_max: f64,
    pub n_g: usize,
    pub n_traj: usize,
    pub t_end: f64,
    pub tail_start: f64,
    pub sr_threshold: f64,
}

impl Default for SweepSection {
    fn default() -> Self {
        SweepSection {
            theta_min_rad: 0.0,
            theta_max_rad: 1.45,
            n_theta: 12,
            g_rel_min: 0.6,
            g_rel_max: 1.4,
            n_g: 12,
            n_traj: 100,
            t_end: 15.0,
            tail_start: 10.0,
            sr_threshold: DEFAULT_SR_THRESHOLD,
        }
    }
}

impl SweepSection {
    pub fn grid(&self, seed: u64) -> GridSpec {
        let mut grid = GridSpec::uniform(
            (self.theta_min_rad, self.theta_max_rad, self.n_theta),
            (self.g_rel_min, self.g_rel_max, self.n_g),
            seed,
        );
        grid.n_traj = self.n_traj;
        grid.t_end = self.t_end;
        grid.tail_start = self.tail_start;
        grid.sr_threshold = self.sr_threshold;
        grid
    }
}

/// Fully resolved configuration of one invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub seed: u64,
    /// Worker threads; never affects results.
    pub threads: Threads,
    pub format: OutputFormat,
    pub out_dir: PathBuf,
    pub params: ParamsSection,
    pub integrator: IntegratorSection,
    pub meanfield: MeanFieldSection,
    pub trajectory: RunSection,
    pub ensemble: RunSection,
    pub sense: SenseSection,
    pub sweep: SweepSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 1,
            threads: Threads::Auto,
            format: OutputFormat::Csv,
            out_dir: PathBuf::from("."),
            params: ParamsSection::default(),
            integrator: IntegratorSection::default(),
            meanfield: MeanFieldSection::default(),
            trajectory: RunSection {
                n_traj: 1,
                ..RunSection::default()
            },
            ensemble: RunSection::default(),
            sense: SenseSection::default(),
            sweep: SweepSection::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn model_params(&self) -> Result<ModelParams> {
        self.params.resolve()
    }

    /// Checks everything that can be checked without running a command.
    pub fn validate(&self) -> Result<()> {
        self.model_params()?;
        if self.integrator.dt <= 0.0 || self.integrator.record_every == 0 {
            return Err(Error::Config(
                "integrator.dt must be > 0 and record_every >= 1".into(),
            ));
        }
        if let Threads::Count(0) = self.threads {
            return Err(Error::Config("threads must be >= 1 or \"auto\"".into()));
        }
        if self.sense.sigma_rel < 0.0 {
            return Err(Error::Config("sense.sigma_rel must be >= 0".into()));
        }
        self.sense
            .sensing_config()
            .validate()
            .map_err(|e| Error::Config(format!("sense: {e}")))?;
        self.sweep
            .grid(self.seed)
            .validate()
            .map_err(|e| Error::Config(format!("sweep: {e}")))?;
        Ok(())
    }

    /// TOML rendering of the configuration that determines the results
    /// (everything except the thread count and output location).
    pub fn results_toml(&self) -> String {
        toml::to_string(&self.echo()).expect("config serialises")
    }

    /// JSON form of [`RunConfig::results_toml`].
    pub fn results_json(&self) -> serde_json::Value {
        serde_json::to_value(self.echo()).expect("config serialises")
    }

    fn echo(&self) -> Echo<'_> {
        Echo {
            seed: self.seed,
            params: &self.params,
            integrator: &self.integrator,
            meanfield: &self.meanfield,
            trajectory: &self.trajectory,
            ensemble: &self.ensemble,
            sense: &self.sense,
            sweep: &self.sweep,
        }
    }
}

#[derive(Serialize)]
struct Echo<'a> {
    seed: u64,
    params: &'a ParamsSection,
    integrator: &'a IntegratorSection,
    meanfield: &'a MeanFieldSection,
    trajectory: &'a RunSection,
    ensemble: &'a RunSection,
    sense: &'a SenseSection,
    sweep: &'a SweepSection,
}

#[cfg(test)]
mod tests {
    use super::*;

    const REFERENCE: &str = r#"
seed = 3

[params]
omega = 10.0
kappa = 5.0
J = 2.0
N_atoms = 60000
M = 4
omega_rec = 3.5
"#;

    #[test]
    fn reference_file_is_valid() {
        let cfg = RunConfig::from_toml_str(REFERENCE).unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.seed, 3);
        assert_eq!(cfg.model_params().unwrap(), ModelParams::reference());
    }

    #[test]
    fn bad_geometry_names_constraint() {
        let text = REFERENCE.replace("M = 4", "M = 6");
        let err = RunConfig::from_toml_str(&text)
            .unwrap()
            .validate()
            .unwrap_err();
        assert!(err.is_usage());
        assert!(err.to_string().contains("multiple of 4"), "{err}");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = REFERENCE.replace("kappa = 5.0", "kapa = 5.0");
        let err = RunConfig::from_toml_str(&text).unwrap_err();
        assert!(err.to_string().contains("kapa"), "{err}");
        assert!(RunConfig::from_toml_str("sede = 1").is_err());
    }

    #[test]
    fn unit_mistakes_are_caught() {
        let text = REFERENCE.replace("J = 2.0", "J = 2000.0");
        let err = RunConfig::from_toml_str(&text)
            .unwrap()
            .validate()
            .unwrap_err();
        assert!(err.to_string().contains("params.J"), "{err}");
    }

    #[test]
    fn threads_accepts_auto_or_count() {
        assert_eq!(
            RunConfig::from_toml_str("threads = \"auto\"")
                .unwrap()
                .threads,
            Threads::Auto
        );
        assert_eq!(
            RunConfig::from_toml_str("threads = 4").unwrap().threads,
            Threads::Count(4)
        );
        assert!(RunConfig::from_toml_str("threads = \"many\"").is_err());
    }

    #[test]
    fn echo_round_trips_and_omits_threads() {
        let mut cfg = RunConfig::from_toml_str(REFERENCE).unwrap();
        cfg.threads = Threads::Count(7);
        let echo = cfg.results_toml();
        assert!(!echo.contains("threads"));
        let back = RunConfig::from_toml_str(&echo).unwrap();
        assert_eq!(back.params, cfg.params);
        assert_eq!(back.sense, cfg.sense);
    }

    #[test]
    fn sense_section_uses_fractions_of_pi() {
        let cfg = RunConfig::from_toml_str("[sense]\ntheta0 = 0.25\n").unwrap();
        let s = cfg.sense.sensing_config();
        assert_eq!(s.theta0, PI / 4.0);
        assert_eq!(s.delta_theta, PI / 20.0);
        assert_eq!(s.omega_drive, PI);
    }
}
