//! The single JSON run configuration. Unknown fields are rejected at every
//! level; omitted solver and evolution fields take the library defaults.

use std::path::{Path, PathBuf};

use aggdiff_core::evolution::EvolutionConfig;
use aggdiff_core::stationary::SolverConfig;
use aggdiff_core::{LineGrid, ModelParams, RadialGrid};
use anyhow::{bail, Context};
use serde::Deserialize;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub params: ParamsSection,
    pub grid: GridSection,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub evolution: EvolutionSection,
    #[serde(default)]
    pub io: IoSection,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSection {
    #[serde(rename = "N")]
    pub dim: usize,
    pub k: f64,
    pub m: f64,
    pub chi: f64,
}

/// Radial extent `r_max` or, equivalently for even 1D data, `L`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub r_max: Option<f64>,
    #[serde(rename = "L")]
    pub half_width: Option<f64>,
    pub n: usize,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub omega: Option<f64>,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub d_bracket: Option<[f64; 2]>,
    pub support_margin: Option<f64>,
    pub support_floor: Option<f64>,
    pub mass_tol: Option<f64>,
    pub max_widenings: Option<usize>,
    pub max_regrowths: Option<usize>,
    pub track_energy: Option<bool>,
    pub rescale_initial: Option<bool>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolutionSection {
    pub t_end: Option<f64>,
    pub cfl: Option<f64>,
    pub parabolic_safety: Option<f64>,
    pub output_stride: Option<usize>,
    #[serde(rename = "L")]
    pub half_width: Option<f64>,
    pub n: Option<usize>,
    pub steady_tol: Option<f64>,
    pub max_steps: Option<usize>,
    /// Write `profile_<t>.csv` at every sample.
    pub dump_profiles: Option<bool>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IoSection {
    pub output_dir: PathBuf,
    /// Significant digits of every floating-point output.
    pub precision: usize,
}

impl Default for IoSection {
    fn default() -> Self {
        Self {
            output_dir: PathBuf::from("."),
            precision: 17,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> anyhow::Result<Self> {
        let config: Self = serde_json::from_str(text).context("invalid configuration")?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_json(&text)
    }

    fn validate(&self) -> anyhow::Result<()> {
        self.model()?;
        self.radial_grid()?;
        self.solver_config().validate()?;
        self.evolution_config()?.validate()?;
        if !(1..=17).contains(&self.io.precision) {
            bail!("io.precision must lie in 1..=17");
        }
        Ok(())
    }

    pub fn model(&self) -> aggdiff_core::Result<ModelParams> {
        let p = &self.params;
        ModelParams::new(p.dim, p.k, p.m, p.chi)
    }

    pub fn extent(&self) -> anyhow::Result<f64> {
        match (self.grid.r_max, self.grid.half_width) {
            (Some(r), None) | (None, Some(r)) => Ok(r),
            (Some(a), Some(b)) if a == b => Ok(a),
            (Some(_), Some(_)) => bail!("grid.r_max and grid.L disagree"),
            (None, None) => bail!("grid needs r_max (or L)"),
        }
    }

    pub fn radial_grid(&self) -> anyhow::Result<RadialGrid> {
        Ok(RadialGrid::new(self.extent()?, self.grid.n)?)
    }

    pub fn solver_config(&self) -> SolverConfig {
        let d = SolverConfig::default();
        let s = &self.solver;
        SolverConfig {
            omega: s.omega.unwrap_or(d.omega),
            tol: s.tol.unwrap_or(d.tol),
            max_iter: s.max_iter.unwrap_or(d.max_iter),
            d_bracket: s.d_bracket.map(|[a, b]| (a, b)).unwrap_or(d.d_bracket),
            support_margin: s.support_margin.unwrap_or(d.support_margin),
            support_floor: s.support_floor.unwrap_or(d.support_floor),
            mass_tol: s.mass_tol.unwrap_or(d.mass_tol),
            max_widenings: s.max_widenings.unwrap_or(d.max_widenings),
            max_regrowths: s.max_regrowths.unwrap_or(d.max_regrowths),
            track_energy: s.track_energy.unwrap_or(d.track_energy),
            rescale_initial: s.rescale_initial.unwrap_or(d.rescale_initial),
        }
    }

    /// Evolution settings; the domain defaults to `[−r_max, r_max]` with
    /// `2n` cells, the mirror of the radial grid.
    pub fn evolution_config(&self) -> anyhow::Result<EvolutionConfig> {
        let d = EvolutionConfig::default();
        let e = &self.evolution;
        Ok(EvolutionConfig {
            t_end: e.t_end.unwrap_or(d.t_end),
            cfl: e.cfl.unwrap_or(d.cfl),
            parabolic_safety: e.parabolic_safety.unwrap_or(d.parabolic_safety),
            output_stride: e.output_stride.unwrap_or(d.output_stride),
            half_width: match e.half_width {
                Some(l) => l,
                None => self.extent()?,
            },
            n: e.n.unwrap_or(2 * self.grid.n),
            steady_tol: e.steady_tol.unwrap_or(d.steady_tol),
            max_steps: e.max_steps.unwrap_or(d.max_steps),
        })
    }

    pub fn line_grid(&self) -> anyhow::Result<LineGrid> {
        Ok(self.evolution_config()?.grid()?)
    }
}
