//! Command-line front end behind the `rotsense` binary.
//!
//! Settings resolve in the order built-in defaults, `--config` file, command
//! flags. The thread count additionally reads `ROTSENSE_THREADS` between the
//! file and the flag. Usage errors exit with status 2, runtime errors with 1,
//! and both print a one-line JSON error record on stderr.

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::config::{OutputFormat, RunConfig, Threads};
use crate::dynamics::{
    integrate_deterministic, integrate_trajectory, run_ensemble, AtomSampler, NoiseStream,
    SystemState, Trajectory,
};
use crate::error::{Error, Result};
use crate::meanfield::minimize_energy;
use crate::output::{self, Metadata};
use crate::protocols::{
    readout_stats, response_spectrum, run_sensing, run_sensing_with_fluctuations, Schedule,
};
use crate::sweep::{sweep_phase_diagram, BoundaryEstimate};

pub const THREADS_ENV: &str = "ROTSENSE_THREADS";

/// Rows in the analytic boundary file.
const BOUNDARY_POINTS: usize = 101;

#[derive(Debug, Parser)]
#[command(
    name = "rotsense",
    version,
    about = "Cavity-BEC ring rotation sensor simulator"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// TOML configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (results do not depend on it).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_parser = parse_format)]
    pub format: Option<OutputFormat>,
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
}

fn parse_format(s: &str) -> std::result::Result<OutputFormat, String> {
    match s {
        "csv" => Ok(OutputFormat::Csv),
        "json" => Ok(OutputFormat::Json),
        _ => Err(format!("expected csv or json, got {s:?}")),
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mean-field energy minimum over a (theta, g) grid.
    Meanfield(MeanFieldArgs),
    /// One truncated-Wigner trajectory at constant controls.
    Trajectory(RunArgs),
    /// Ensemble statistics at constant controls.
    Ensemble(RunArgs),
    /// Phase diagram over (theta, g/g0crit).
    Sweep(SweepArgs),
    /// Real-time rotation sensing with a modulated gauge phase.
    Sense(SenseArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Meanfield(_) => "meanfield",
            Command::Trajectory(_) => "trajectory",
            Command::Ensemble(_) => "ensemble",
            Command::Sweep(_) => "sweep",
            Command::Sense(_) => "sense",
        }
    }
}

#[derive(Debug, Args)]
pub struct MeanFieldArgs {
    /// Gauge phases as fractions of pi.
    #[arg(long, value_delimiter = ',')]
    pub theta: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub g_rel: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub g_rel: Option<f64>,
    /// Gauge phase as a fraction of pi.
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub t_ramp: Option<f64>,
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub n_traj: Option<usize>,
    #[arg(long)]
    pub tail_start: Option<f64>,
    #[arg(long)]
    pub index: Option<u64>,
    #[arg(long)]
    pub noiseless: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub theta_max_rad: Option<f64>,
    #[arg(long)]
    pub n_theta: Option<usize>,
    #[arg(long)]
    pub g_rel_min: Option<f64>,
    #[arg(long)]
    pub g_rel_max: Option<f64>,
    #[arg(long)]
    pub n_g: Option<usize>,
    #[arg(long)]
    pub n_traj: Option<usize>,
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub tail_start: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SenseArgs {
    /// Bias phase as a fraction of pi.
    #[arg(long)]
    pub theta0: Option<f64>,
    /// Drive amplitude as a fraction of pi.
    #[arg(long)]
    pub delta_theta: Option<f64>,
    /// Drive frequency in 2pi x kHz.
    #[arg(long)]
    pub omega_drive: Option<f64>,
    #[arg(long)]
    pub g_rel: Option<f64>,
    #[arg(long)]
    pub t0: Option<f64>,
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub n_traj: Option<usize>,
    /// Relative atom-number spread sigma/N.
    #[arg(long)]
    pub sigma_rel: Option<f64>,
}

fn patch<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

/// Resolves the configuration for one invocation.
pub fn resolve_config(cli: &Cli, env_threads: Option<&str>) -> Result<RunConfig> {
    let g = &cli.global;
    let mut cfg = match &g.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    if let Some(s) = env_threads.filter(|s| !s.trim().is_empty()) {
        let n: usize = s.trim().parse().map_err(|_| {
            Error::Config(format!(
                "{THREADS_ENV} must be a positive integer, got {s:?}"
            ))
        })?;
        cfg.threads = Threads::Count(n);
    }
    patch(&mut cfg.seed, g.seed);
    patch(&mut cfg.threads, g.threads.map(Threads::Count));
    patch(&mut cfg.format, g.format);
    patch(&mut cfg.out_dir, g.out_dir.clone());

    match &cli.command {
        Command::Meanfield(a) => {
            patch(&mut cfg.meanfield.theta, a.theta.clone());
            patch(&mut cfg.meanfield.g_rel, a.g_rel.clone());
        }
        Command::Trajectory(a) => apply_run(&mut cfg.trajectory, a),
        Command::Ensemble(a) => apply_run(&mut cfg.ensemble, a),
        Command::Sweep(a) => {
            let s = &mut cfg.sweep;
            patch(&mut s.theta_max_rad, a.theta_max_rad);
            patch(&mut s.n_theta, a.n_theta);
            patch(&mut s.g_rel_min, a.g_rel_min);
            patch(&mut s.g_rel_max, a.g_rel_max);
            patch(&mut s.n_g, a.n_g);
            patch(&mut s.n_traj, a.n_traj);
            patch(&mut s.t_end, a.t_end);
            patch(&mut s.tail_start, a.tail_start);
        }
        Command::Sense(a) => {
            let s = &mut cfg.sense;
            patch(&mut s.theta0, a.theta0);
            patch(&mut s.delta_theta, a.delta_theta);
            patch(&mut s.omega_drive, a.omega_drive);
            patch(&mut s.g_rel, a.g_rel);
            patch(&mut s.t0, a.t0);
            patch(&mut s.t_end, a.t_end);
            patch(&mut s.n_traj, a.n_traj);
            patch(&mut s.sigma_rel, a.sigma_rel);
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn apply_run(section: &mut crate::config::RunSection, a: &RunArgs) {
    patch(&mut section.g_rel, a.g_rel);
    patch(&mut section.theta, a.theta);
    patch(&mut section.t_ramp, a.t_ramp);
    patch(&mut section.t_end, a.t_end);
    patch(&mut section.n_traj, a.n_traj);
    patch(&mut section.tail_start, a.tail_start);
    patch(&mut section.index, a.index);
    if a.noiseless {
        section.noiseless = true;
    }
}

/// Result of a command: the files written and a one-line summary.
#[derive(Debug, Clone)]
pub struct Summary {
    pub line: String,
    pub files: Vec<PathBuf>,
}

/// Runs `command` with a resolved configuration on a dedicated thread pool.
pub fn dispatch(command: &Command, cfg: &RunConfig) -> Result<Summary> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Threads::Count(n) = cfg.threads {
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| Error::Config(format!("cannot start thread pool: {e}")))?;
    pool.install(|| run_command(command, cfg))
}

fn run_command(command: &Command, cfg: &RunConfig) -> Result<Summary> {
    let params = cfg.model_params()?;
    let g0 = params.g0_crit();
    let meta = Metadata::new(command.name(), cfg);
    let write = |stem: &str, table: &output::Table| {
        output::write_table(&cfg.out_dir, stem, cfg.format, &meta, table)
    };

    match command {
        Command::Meanfield(_) => {
            let mut points = Vec::new();
            for &t in &cfg.meanfield.theta {
                for &g_rel in &cfg.meanfield.g_rel {
                    let theta = t * PI;
                    points.push((theta, g_rel, minimize_energy(theta, g_rel * g0, &params)?));
                }
            }
            let n_sr = points.iter().filter(|p| p.2.delta > 0.0).count();
            let path = write("meanfield", &output::meanfield_table(&points))?;
            Ok(Summary {
                line: format!(
                    "meanfield: {} points, {} superradiant -> {}",
                    points.len(),
                    n_sr,
                    path.display()
                ),
                files: vec![path],
            })
        }
        Command::Trajectory(_) => {
            let s = &cfg.trajectory;
            let schedule = run_schedule(s, g0)?;
            let integ = cfg.integrator.with_t_end(s.t_end);
            let traj: Trajectory = if s.noiseless {
                let init = SystemState::uniform(&params, params.n_atoms())
                    .with_imbalance_seed(s.imbalance_seed);
                integrate_deterministic(init, &schedule, &params, &integ)?
            } else {
                let mut noise = NoiseStream::new(cfg.seed, s.index);
                integrate_trajectory(&schedule, &params, &integ, &mut noise, params.n_atoms())?
            };
            let tail = traj
                .mean_photon_in(s.tail_start, s.t_end + 1e-9)
                .unwrap_or(f64::NAN);
            let path = write("trajectory", &output::trajectory_table(&traj, g0))?;
            Ok(Summary {
                line: format!(
                    "trajectory: tail photons {} atom drift {:.3e} -> {}",
                    output::format_sig(tail),
                    traj.max_atom_drift(),
                    path.display()
                ),
                files: vec![path],
            })
        }
        Command::Ensemble(_) => {
            let s = &cfg.ensemble;
            let schedule = run_schedule(s, g0)?;
            let integ = cfg.integrator.with_t_end(s.t_end);
            let series = run_ensemble(
                &schedule,
                &params,
                &integ,
                s.n_traj,
                cfg.seed,
                &AtomSampler::fixed(params.n_atoms()),
            )?;
            let stats = readout_stats(&series, s.tail_start, s.t_end + 1e-9)?;
            let path = write("ensemble", &output::series_table(&series, g0))?;
            Ok(Summary {
                line: format!(
                    "ensemble: {} trajectories, tail photons {} +- {} -> {}",
                    s.n_traj,
                    output::format_sig(stats.mean_photon),
                    output::format_sig(stats.standard_error(s.n_traj)),
                    path.display()
                ),
                files: vec![path],
            })
        }
        Command::Sweep(_) => {
            let grid = cfg.sweep.grid(cfg.seed);
            let integ = cfg.integrator.with_t_end(grid.t_end);
            let diagram = sweep_phase_diagram(&grid, &params, &integ)?;
            let n_sr = diagram.is_sr.iter().flatten().filter(|&&b| b).count();
            let n_unconverged = diagram.converged.iter().flatten().filter(|&&b| !b).count();
            let bracketed = (0..grid.theta_values.len())
                .filter(|&i| {
                    matches!(
                        diagram.empirical_boundary(i),
                        BoundaryEstimate::Bracketed(_)
                    )
                })
                .count();
            let pd = write("phase_diagram", &output::phase_diagram_table(&diagram))?;
            let bd = write(
                "boundary",
                &output::boundary_table(
                    cfg.sweep.theta_min_rad,
                    cfg.sweep.theta_max_rad,
                    BOUNDARY_POINTS,
                )?,
            )?;
            Ok(Summary {
                line: format!(
                    "sweep: {} points, {} superradiant, {} unconverged, {} failed, boundary bracketed in {}/{} columns -> {}",
                    grid.theta_values.len() * grid.g_rel_values.len(),
                    n_sr,
                    n_unconverged,
                    diagram.failures.len(),
                    bracketed,
                    grid.theta_values.len(),
                    pd.display()
                ),
                files: vec![pd, bd],
            })
        }
        Command::Sense(_) => {
            let s = cfg.sense.sensing_config();
            let integ = cfg.integrator.with_t_end(s.t_end);
            let series = match cfg.sense.fluctuations(&params) {
                Some(f) => run_sensing_with_fluctuations(&s, &f, &params, &integ, cfg.seed)?,
                None => run_sensing(&s, &params, &integ, cfg.seed)?,
            };
            let stats = readout_stats(&series, s.t0, s.t_end + 1e-9)?;
            let spectrum = response_spectrum(&series, s.t0, s.t_end, s.omega_drive)?;
            let ts = write("sense", &output::series_table(&series, g0))?;
            let sp = write("spectrum", &output::spectrum_table(&spectrum))?;
            Ok(Summary {
                line: format!(
                    "sense: mean photons {} depth {} band {} dominant {} x 2pi kHz -> {}",
                    output::format_sig(stats.mean_photon),
                    output::format_sig(stats.modulation_depth),
                    output::format_sig(stats.mean_std),
                    output::format_sig(spectrum.dominant_frequency() / std::f64::consts::TAU),
                    ts.display()
                ),
                files: vec![ts, sp],
            })
        }
    }
}

fn run_schedule(s: &crate::config::RunSection, g0: f64) -> Result<Schedule> {
    let (g, theta) = (s.g_rel * g0, s.theta * PI);
    if s.t_ramp > 0.0 {
        Schedule::ramped(g, theta, s.t_ramp)
    } else {
        Ok(Schedule::constant(g, theta))
    }
}

fn error_record(class: &str, message: &str) -> String {
    json!({ "error": { "class": class, "message": message } }).to_string()
}

/// Entry point used by the binary.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{}", error_record("usage", e.render().to_string().trim()));
            return ExitCode::from(2);
        }
    };
    let env = std::env::var(THREADS_ENV).ok();
    let outcome = resolve_config(&cli, env.as_deref()).and_then(|cfg| dispatch(&cli.command, &cfg));
    match outcome {
        Ok(summary) => {
            println!("{}", summary.line);
            ExitCode::SUCCESS
        }
        Err(e) if e.is_usage() => {
            eprintln!("{}", error_record("usage", &e.to_string()));
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("{}", error_record("runtime", &e.to_string()));
            ExitCode::from(1)
        }
    }
}
