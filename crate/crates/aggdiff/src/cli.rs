//! Subcommand dispatch. Exit codes: 0 success, 1 validation or usage
//! error, 2 numerical failure.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use aggdiff_core::energy::{free_energy, hls_ratio, EnergyBreakdown};
use aggdiff_core::evolution::{evolve_with, potential_1d, FlowParams};
use aggdiff_core::riesz::riesz_potential;
use aggdiff_core::stationary::{solve_stationary, uniqueness, StationaryReport};
use aggdiff_core::{LineDensity, RadialDensity};
use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::config::RunConfig;
use crate::io::{self, DensityFile};
use crate::verify;

#[derive(Debug, Parser)]
#[command(
    name = "aggdiff",
    version,
    about = "Stationary states of aggregation-diffusion equations with Riesz attraction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve for the stationary profile; writes profile.csv and report.json.
    Stationary {
        #[arg(long)]
        config: PathBuf,
        /// Initial density CSV; defaults to the uniform ball of radius min(1, r_max/2).
        #[arg(long)]
        initial: Option<PathBuf>,
    },
    /// Run the 1D flow; writes trace.csv and final.csv.
    Evolve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        initial: PathBuf,
    },
    /// Print the Riesz potential of a density as CSV.
    Potential {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        density: PathBuf,
    },
    /// Print the energy breakdown of a density as JSON.
    Energy {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        density: PathBuf,
    },
    /// Solve from three initial shapes; writes uniqueness.json.
    Uniqueness {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run an invariant suite and print a pass/fail table.
    Verify {
        /// hypergeom, riesz, energy, stationary, evolution or all.
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Failure class of a finished command.
#[derive(Debug, PartialEq, Eq)]
pub enum Failure {
    Validation,
    Numerical,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation => 1,
            Failure::Numerical => 2,
        }
    }
}

/// Core numerical errors map to 2; everything else (bad arguments, bad
/// files, bad configuration) maps to 1.
pub fn classify(err: &anyhow::Error) -> Failure {
    match err.chain().find_map(|e| e.downcast_ref::<aggdiff_core::Error>()) {
        Some(e) if !e.is_validation() => Failure::Numerical,
        _ => Failure::Validation,
    }
}

pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match dispatch(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        // a verify suite ran but had failing checks
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(classify(&e).code())
        }
    }
}

fn dispatch(command: Command) -> anyhow::Result<bool> {
    match command {
        Command::Stationary { config, initial } => stationary(&config, initial.as_deref()),
        Command::Evolve { config, initial } => evolve(&config, &initial),
        Command::Potential { config, density } => potential(&config, &density),
        Command::Energy { config, density } => energy(&config, &density),
        Command::Uniqueness { config } => unique(&config),
        Command::Verify { suite, seed } => {
            let checks = verify::run(&suite, seed)?;
            print!("{}", verify::table(&checks));
            return Ok(checks.iter().all(|c| c.passed));
        }
    }?;
    Ok(true)
}

fn radial_input(density: DensityFile) -> anyhow::Result<RadialDensity> {
    match density {
        DensityFile::Radial(rho) => Ok(rho),
        DensityFile::Line(_) => bail!("expected a radial profile (columns r,rho)"),
    }
}

#[derive(Serialize)]
struct EnergyJson {
    #[serde(rename = "Hm")]
    entropy: f64,
    #[serde(rename = "Wk")]
    interaction: f64,
    #[serde(rename = "F")]
    free_energy: f64,
    #[serde(rename = "D")]
    multiplier: f64,
    m_norm_pow: f64,
    hls_ratio: f64,
}

impl EnergyJson {
    fn new(e: &EnergyBreakdown, hls_ratio: f64) -> Self {
        Self {
            entropy: e.entropy,
            interaction: e.interaction,
            free_energy: e.free_energy,
            multiplier: e.multiplier,
            m_norm_pow: e.m_norm_pow,
            hls_ratio,
        }
    }
}

#[derive(Serialize)]
struct ReportJson<'a> {
    #[serde(rename = "N")]
    dim: usize,
    k: f64,
    m: f64,
    chi: f64,
    regime: String,
    #[serde(rename = "D")]
    multiplier: f64,
    #[serde(rename = "D_from_energy")]
    multiplier_from_energy: f64,
    el_residual: f64,
    char_residual_1d: Option<f64>,
    support_radius: f64,
    monotone_defect: f64,
    iterations: usize,
    last_change: f64,
    lipschitz_estimate: f64,
    lipschitz_density: f64,
    potential_gradient: f64,
    max_density: f64,
    r_max: f64,
    n: usize,
    energy: EnergyJson,
    regrowths: usize,
    widenings: usize,
    stationarity_guaranteed: bool,
    warnings: &'a [String],
}

impl<'a> ReportJson<'a> {
    fn new(r: &'a StationaryReport, cfg: &RunConfig) -> anyhow::Result<Self> {
        let p = cfg.model()?;
        Ok(Self {
            dim: p.dim(),
            k: p.k(),
            m: p.m(),
            chi: p.chi(),
            regime: format!("{:?}", p.regime()),
            multiplier: r.multiplier,
            multiplier_from_energy: r.multiplier_from_energy,
            el_residual: r.el_residual,
            char_residual_1d: r.char_residual_1d,
            support_radius: r.support_radius,
            monotone_defect: r.monotone_defect,
            iterations: r.iterations,
            last_change: r.last_change,
            lipschitz_estimate: r.lipschitz_estimate,
            lipschitz_density: r.lipschitz_density,
            potential_gradient: r.potential_gradient,
            max_density: r.max_density,
            r_max: r.profile.grid().r_max(),
            n: r.profile.grid().len(),
            energy: EnergyJson::new(&r.energy, hls_ratio(&r.profile, &p)?),
            regrowths: r.regrowths,
            widenings: r.widenings,
            stationarity_guaranteed: r.stationarity_guaranteed,
            warnings: &r.warnings,
        })
    }
}

fn stationary(config_path: &Path, initial: Option<&Path>) -> anyhow::Result<()> {
    let cfg = RunConfig::load(config_path)?;
    let params = cfg.model()?;
    let grid = cfg.radial_grid()?;
    let init = match initial {
        Some(path) => radial_input(io::read_density(path, params.dim())?)?.resample(&grid)?,
        None => RadialDensity::uniform_ball(grid.clone(), params.dim(), (0.5 * grid.r_max()).min(1.0))?,
    };
    let report = solve_stationary(&params, &cfg.solver_config(), &init)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    let digits = cfg.io.precision;
    let dir = &cfg.io.output_dir;
    io::write_atomic(&dir.join("profile.csv"), &io::radial_csv(&report.profile, digits)?)?;
    io::write_atomic(
        &dir.join("report.json"),
        &io::to_json(&ReportJson::new(&report, &cfg)?, digits)?,
    )?;
    Ok(())
}

fn line_input(density: DensityFile) -> anyhow::Result<LineDensity> {
    Ok(match density {
        DensityFile::Line(rho) => rho,
        DensityFile::Radial(rho) => rho.to_line()?,
    })
}

fn evolve(config_path: &Path, initial: &Path) -> anyhow::Result<()> {
    let cfg = RunConfig::load(config_path)?;
    let params = cfg.model()?;
    if params.dim() != 1 {
        bail!("evolve needs N = 1");
    }
    let flow = FlowParams::try_from(&params)?;
    let evo = cfg.evolution_config()?;
    let init = line_input(io::read_density(initial, 1)?)?.resample(&evo.grid()?)?;
    let digits = cfg.io.precision;
    let dir = cfg.io.output_dir.clone();
    let dump = cfg.evolution.dump_profiles.unwrap_or(false);
    let mut dump_error: Option<anyhow::Error> = None;
    let trace = evolve_with(&init, &flow, &evo, |_, t, rho| {
        if !dump || dump_error.is_some() {
            return;
        }
        let name = format!("profile_{}.csv", io::fmt_float(t, 10));
        if let Err(e) = io::line_csv(rho, digits).and_then(|b| io::write_atomic(&dir.join(name), &b)) {
            dump_error = Some(e);
        }
    })?;
    if let Some(e) = dump_error {
        return Err(e);
    }
    if let Some(t) = trace.steady_at {
        eprintln!("steady state reached at t = {t:e}; held to t_end");
    }
    let rows = (0..trace.times.len()).map(|i| {
        vec![
            trace.times[i],
            trace.mass[i],
            trace.entropy[i],
            trace.interaction[i],
            trace.free_energy[i],
        ]
    });
    io::write_atomic(
        &dir.join("trace.csv"),
        &io::csv_table(&["t", "mass", "Hm", "Wk", "F"], rows, digits)?,
    )?;
    io::write_atomic(&dir.join("final.csv"), &io::line_csv(&trace.final_density, digits)?)?;
    Ok(())
}

fn potential(config_path: &Path, density: &Path) -> anyhow::Result<()> {
    let cfg = RunConfig::load(config_path)?;
    let params = cfg.model()?;
    let digits = cfg.io.precision;
    let text = match io::read_density(density, params.dim())? {
        DensityFile::Radial(rho) => {
            let s = riesz_potential(&rho, &params)?;
            let g = rho.grid();
            io::csv_table(
                &["r", "raw_riesz", "S_k"],
                (0..g.len()).map(|i| vec![g.center(i), s.raw()[i], s.values()[i]]),
                digits,
            )?
        }
        DensityFile::Line(rho) => {
            if params.dim() != 1 {
                bail!("a line density needs N = 1");
            }
            let s = potential_1d(&rho, params.k())?;
            let g = rho.grid();
            io::csv_table(
                &["x", "raw_riesz", "S_k"],
                (0..g.len()).map(|i| vec![g.center(i), params.k() * s[i], s[i]]),
                digits,
            )?
        }
    };
    print!("{}", String::from_utf8(text)?);
    Ok(())
}

fn energy(config_path: &Path, density: &Path) -> anyhow::Result<()> {
    let cfg = RunConfig::load(config_path)?;
    let params = cfg.model()?;
    let json = match io::read_density(density, params.dim())? {
        DensityFile::Radial(rho) => EnergyJson::new(&free_energy(&rho, &params)?, hls_ratio(&rho, &params)?),
        DensityFile::Line(rho) => EnergyJson::new(&free_energy(&rho, &params)?, hls_ratio(&rho, &params)?),
    };
    print!("{}", String::from_utf8(io::to_json(&json, cfg.io.precision)?)?);
    Ok(())
}

#[derive(Serialize)]
struct UniquenessJson {
    labels: Vec<&'static str>,
    distances: Vec<PairJson>,
    max_distance: f64,
    /// Uniqueness is proved only for N = 1; otherwise the distances are
    /// reported without a claim.
    asserted: bool,
    free_energy: Vec<f64>,
    el_residual: Vec<f64>,
}

#[derive(Serialize)]
struct PairJson {
    a: &'static str,
    b: &'static str,
    l1: f64,
}

fn unique(config_path: &Path) -> anyhow::Result<()> {
    let cfg = RunConfig::load(config_path)?;
    let params = cfg.model()?;
    let report = uniqueness(&params, &cfg.solver_config(), &cfg.radial_grid()?)?;
    let json = UniquenessJson {
        distances: report
            .distances
            .iter()
            .map(|&(i, j, l1)| PairJson {
                a: report.labels[i],
                b: report.labels[j],
                l1,
            })
            .collect(),
        labels: report.labels.clone(),
        max_distance: report.max_distance,
        asserted: report.asserted,
        free_energy: report.reports.iter().map(|r| r.energy.free_energy).collect(),
        el_residual: report.reports.iter().map(|r| r.el_residual).collect(),
    };
    let path = cfg.io.output_dir.join("uniqueness.json");
    io::write_atomic(&path, &io::to_json(&json, cfg.io.precision)?).context("writing uniqueness report")?;
    Ok(())
}
