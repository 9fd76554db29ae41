//! Explicit finite-volume simulator for the 1D equation
//! `∂t ρ = ∂x(ρ ∂x ξ)`, `ξ = (m/(m−1))ρ^{m−1} + χS_k`.
//!
//! Upwind fluxes in the velocity `u = −∂x ξ` with no-flux walls. The update
//! telescopes, so mass is conserved to rounding, and it keeps `ρ ≥ 0` under
//! the step bound of [`step`]. Its discrete steady states are exactly the
//! discrete Euler–Lagrange fixed points of the stationary solver on the
//! same grid, since a vanishing flux means `ξ` is constant on the support.

use alloc::string::String;
use alloc::vec::Vec;
use libm::pow;

use crate::error::{Error, Result};
use crate::kernel1d::LineKernel;
use crate::model::{LineDensity, LineGrid, ModelParams};

/// Exponents and strength driving the flow. Unlike [`ModelParams`] this
/// admits `χ = 0`, the porous-medium equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowParams {
    k: f64,
    m: f64,
    chi: f64,
}

impl FlowParams {
    pub fn new(k: f64, m: f64, chi: f64) -> Result<Self> {
        if !(k > -1.0 && k < 0.0) {
            return Err(Error::param("k", "must lie in (−1, 0) for the 1D flow"));
        }
        if !(m > 1.0 && m.is_finite()) {
            return Err(Error::param("m", "must be finite and > 1"));
        }
        if !(chi >= 0.0 && chi.is_finite()) {
            return Err(Error::param("chi", "must be finite and ≥ 0"));
        }
        Ok(Self { k, m, chi })
    }

    /// `χ = 0`: pure porous-medium diffusion.
    pub fn porous_medium(m: f64) -> Result<Self> {
        Self::new(-0.5, m, 0.0)
    }

    pub fn k(&self) -> f64 {
        self.k
    }
    pub fn m(&self) -> f64 {
        self.m
    }
    pub fn chi(&self) -> f64 {
        self.chi
    }

    /// `(H_m, W_k, H_m + χW_k)` of `rho`, normalisation not required.
    ///
    /// `W_k` takes the outer integral at cell centres, which makes the
    /// scheme an exact semi-discrete gradient flow of this energy. The
    /// cell-pair form of [`crate::energy`] differs by a discretisation
    /// error that shows up as spurious increases near the steady state
    /// for strongly singular kernels.
    pub fn free_energy(&self, rho: &LineDensity, kernel: &LineKernel) -> (f64, f64, f64) {
        let entropy = rho.power_integral(self.m) / (self.m - 1.0);
        let interaction = kernel.centre_double_integral(rho.values()) / (2.0 * self.k);
        (entropy, interaction, entropy + self.chi * interaction)
    }
}

impl TryFrom<&ModelParams> for FlowParams {
    type Error = Error;
    fn try_from(params: &ModelParams) -> Result<Self> {
        if params.dim() != 1 {
            return Err(Error::input("the evolution is one-dimensional (N = 1)"));
        }
        Self::new(params.k(), params.m(), params.chi())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionConfig {
    pub t_end: f64,
    /// Fraction of the advective bound `Δx/max|u|`.
    pub cfl: f64,
    /// Fraction of the parabolic bound `Δx²/(2m max ρ^{m−1})`.
    pub parabolic_safety: f64,
    /// Steps between trace samples.
    pub output_stride: usize,
    /// Domain `[−L, L]`.
    pub half_width: f64,
    pub n: usize,
    /// Stop early once the estimated remaining L¹ drift to the discrete
    /// steady state is below this. Zero disables the test.
    pub steady_tol: f64,
    /// Hard cap on the number of steps.
    pub max_steps: usize,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        Self {
            t_end: 50.0,
            cfl: 0.4,
            parabolic_safety: 0.4,
            output_stride: 100,
            half_width: 3.0,
            n: 256,
            steady_tol: 1e-9,
            max_steps: 50_000_000,
        }
    }
}

impl EvolutionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::param("t_end", "must be finite and positive"));
        }
        if !(self.cfl > 0.0 && self.cfl < 1.0) {
            return Err(Error::param("cfl", "must lie in (0, 1)"));
        }
        if !(self.parabolic_safety > 0.0 && self.parabolic_safety < 1.0) {
            return Err(Error::param("parabolic_safety", "must lie in (0, 1)"));
        }
        if self.output_stride == 0 {
            return Err(Error::param("output_stride", "must be positive"));
        }
        if !(self.steady_tol >= 0.0) {
            return Err(Error::param("steady_tol", "must be ≥ 0"));
        }
        if self.max_steps == 0 {
            return Err(Error::param("max_steps", "must be positive"));
        }
        LineGrid::new(self.half_width, self.n).map(|_| ())
    }

    pub fn grid(&self) -> Result<LineGrid> {
        LineGrid::new(self.half_width, self.n)
    }
}

/// Samples of one run. The last sample is always at `t_end`.
#[derive(Debug, Clone)]
pub struct EvolutionTrace {
    pub times: Vec<f64>,
    pub mass: Vec<f64>,
    pub entropy: Vec<f64>,
    pub interaction: Vec<f64>,
    pub free_energy: Vec<f64>,
    pub final_density: LineDensity,
    pub steps: usize,
    /// Time at which the steady-state test fired; the state is then held
    /// fixed up to `t_end`.
    pub steady_at: Option<f64>,
    pub min_dt: f64,
    pub max_dt: f64,
}

impl EvolutionTrace {
    /// Largest `|mass − mass₀|` over the samples.
    pub fn mass_drift(&self) -> f64 {
        let m0 = self.mass[0];
        self.mass.iter().map(|m| (m - m0).abs()).fold(0.0, f64::max)
    }

    /// Largest increase of `F` between consecutive samples (0 if none).
    pub fn max_energy_increase(&self) -> f64 {
        self.free_energy.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }
}

/// `S_k(x_i) = (1/k) Σ_j ∫_{cell j} |x_i − y|^k dy ρ_j` at every cell centre.
pub fn potential_1d(rho: &LineDensity, k: f64) -> Result<Vec<f64>> {
    if !(k > -1.0 && k < 0.0) {
        return Err(Error::param("k", "must lie in (−1, 0)"));
    }
    let grid = rho.grid();
    let kernel = LineKernel::new(grid.len(), grid.dx(), k);
    Ok(potential_with(&kernel, rho.values()))
}

fn potential_with(kernel: &LineKernel, values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let Some(first) = values.iter().position(|&v| v != 0.0) else {
        return alloc::vec![0.0; n];
    };
    let last = values.iter().rposition(|&v| v != 0.0).unwrap_or(first);
    let k = kernel.k();
    let row = |i: usize| kernel.point_potential(values, i, first..last + 1) / k;
    // thread dispatch only pays off on large supports
    if n * (last + 1 - first) >= 1 << 17 {
        crate::par::map_indices(n, row)
    } else {
        (0..n).map(row).collect()
    }
}

/// Interface velocities `u_{i+1/2}`, `i = 0..n−1`, zero between empty cells.
fn velocities(values: &[f64], potential: &[f64], flow: &FlowParams, dx: f64) -> Vec<f64> {
    let m = flow.m;
    let xi: Vec<f64> = values
        .iter()
        .zip(potential)
        .map(|(&r, &s)| m / (m - 1.0) * if r > 0.0 { pow(r, m - 1.0) } else { 0.0 } + flow.chi * s)
        .collect();
    (0..values.len() - 1)
        .map(|i| {
            if values[i] == 0.0 && values[i + 1] == 0.0 {
                0.0
            } else {
                -(xi[i + 1] - xi[i]) / dx
            }
        })
        .collect()
}

/// Largest `dt` keeping every cell nonnegative: the outflow of cell `i`
/// in one step is `dt (u⁺_{i+1/2} + u⁻_{i−1/2}) ρ_i / Δx`.
fn positivity_bound(u: &[f64], dx: f64) -> f64 {
    let n = u.len() + 1;
    let mut worst = 0.0f64;
    for i in 0..n {
        let right = if i + 1 < n { u[i].max(0.0) } else { 0.0 };
        let left = if i > 0 { (-u[i - 1]).max(0.0) } else { 0.0 };
        worst = worst.max(right + left);
    }
    if worst > 0.0 {
        dx / worst
    } else {
        f64::INFINITY
    }
}

/// `min(cfl·Δx/max|u|, safety·Δx²/(2m max ρ^{m−1}))`, further capped by
/// the positivity bound.
pub fn stable_dt(rho: &LineDensity, flow: &FlowParams, cfl: f64, safety: f64) -> f64 {
    let grid = rho.grid();
    let kernel = LineKernel::new(grid.len(), grid.dx(), flow.k);
    let potential = potential_with(&kernel, rho.values());
    let u = velocities(rho.values(), &potential, flow, grid.dx());
    choose_dt(rho.values(), &u, flow, grid.dx(), cfl, safety)
}

fn choose_dt(values: &[f64], u: &[f64], flow: &FlowParams, dx: f64, cfl: f64, safety: f64) -> f64 {
    let umax = u.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let pmax = values
        .iter()
        .fold(0.0f64, |a, &v| a.max(if v > 0.0 { pow(v, flow.m - 1.0) } else { 0.0 }));
    let advective = if umax > 0.0 { cfl * dx / umax } else { f64::INFINITY };
    let parabolic = if pmax > 0.0 {
        safety * dx * dx / (2.0 * flow.m * pmax)
    } else {
        f64::INFINITY
    };
    advective.min(parabolic).min(positivity_bound(u, dx))
}

fn apply_fluxes(values: &[f64], u: &[f64], dt: f64, dx: f64) -> Vec<f64> {
    let n = values.len();
    let flux: Vec<f64> = (0..n - 1)
        .map(|i| u[i].max(0.0) * values[i] + u[i].min(0.0) * values[i + 1])
        .collect();
    let ratio = dt / dx;
    (0..n)
        .map(|i| {
            let right = if i + 1 < n { flux[i] } else { 0.0 };
            let left = if i > 0 { flux[i - 1] } else { 0.0 };
            values[i] - ratio * (right - left)
        })
        .collect()
}

fn check_state(values: &[f64], step: usize) -> Result<()> {
    if let Some(i) = values.iter().position(|v| v.is_nan()) {
        return Err(Error::Breakdown {
            step,
            reason: format_cell("NaN density", i, f64::NAN),
        });
    }
    if let Some(i) = values.iter().position(|&v| v < 0.0) {
        return Err(Error::Breakdown {
            step,
            reason: format_cell("negative density", i, values[i]),
        });
    }
    Ok(())
}

fn format_cell(what: &str, cell: usize, value: f64) -> String {
    alloc::format!("{what} {value:e} in cell {cell}")
}

/// One explicit Euler step. Rejects `dt` above the positivity bound.
pub fn step(rho: &LineDensity, flow: &FlowParams, dt: f64) -> Result<LineDensity> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::param("dt", "must be finite and positive"));
    }
    let grid = rho.grid();
    let kernel = LineKernel::new(grid.len(), grid.dx(), flow.k);
    let potential = potential_with(&kernel, rho.values());
    let u = velocities(rho.values(), &potential, flow, grid.dx());
    let bound = positivity_bound(&u, grid.dx());
    if dt > bound {
        return Err(Error::UnstableTimeStep { dt, bound });
    }
    let next = apply_fluxes(rho.values(), &u, dt, grid.dx());
    check_state(&next, 1)?;
    LineDensity::new(grid.clone(), next)
}

/// Steps between checks of the steady-state test.
const STEADY_BLOCK: usize = 500;

/// Runs to `t_end`, calling `observer(step, t, ρ)` at every sample.
///
/// The steady-state test compares the L¹ change over consecutive blocks of
/// [`STEADY_BLOCK`] steps. With contraction `q = d_j/d_{j−1} < 1` the
/// remaining drift is estimated by the geometric tail `d_j q/(1−q)`; once
/// that falls below `steady_tol` the state is taken as the discrete steady
/// state and held up to `t_end`.
pub fn evolve_with(
    initial: &LineDensity,
    flow: &FlowParams,
    config: &EvolutionConfig,
    mut observer: impl FnMut(usize, f64, &LineDensity),
) -> Result<EvolutionTrace> {
    config.validate()?;
    initial.require_normalized()?;
    let grid = initial.grid().clone();
    if grid != config.grid()? {
        return Err(Error::input("initial density is not on the configured grid"));
    }
    let dx = grid.dx();
    let kernel = LineKernel::new(grid.len(), dx, flow.k);
    let mut trace = EvolutionTrace {
        times: Vec::new(),
        mass: Vec::new(),
        entropy: Vec::new(),
        interaction: Vec::new(),
        free_energy: Vec::new(),
        final_density: initial.clone(),
        steps: 0,
        steady_at: None,
        min_dt: f64::INFINITY,
        max_dt: 0.0,
    };
    let record = |trace: &mut EvolutionTrace, t: f64, rho: &LineDensity| {
        let (h, w, f) = flow.free_energy(rho, &kernel);
        trace.times.push(t);
        trace.mass.push(rho.mass());
        trace.entropy.push(h);
        trace.interaction.push(w);
        trace.free_energy.push(f);
    };
    let mut values = initial.values().to_vec();
    let mut t = 0.0;
    let mut steps = 0usize;
    record(&mut trace, t, initial);
    observer(0, t, initial);
    let mut block_start = values.clone();
    let mut previous_block: Option<f64> = None;
    while t < config.t_end {
        if steps == config.max_steps {
            return Err(Error::Breakdown {
                step: steps,
                reason: alloc::format!("step cap reached at t = {t:e} before t_end = {:e}", config.t_end),
            });
        }
        let potential = if flow.chi > 0.0 {
            potential_with(&kernel, &values)
        } else {
            alloc::vec![0.0; values.len()]
        };
        let u = velocities(&values, &potential, flow, dx);
        let mut dt = choose_dt(&values, &u, flow, dx, config.cfl, config.parabolic_safety);
        if !(dt > 0.0) {
            return Err(Error::Breakdown {
                step: steps + 1,
                reason: alloc::format!("time step collapsed to {dt:e}"),
            });
        }
        let last = t + dt >= config.t_end;
        if last {
            dt = config.t_end - t;
        }
        values = apply_fluxes(&values, &u, dt, dx);
        steps += 1;
        check_state(&values, steps)?;
        t = if last { config.t_end } else { t + dt };
        trace.min_dt = trace.min_dt.min(dt);
        trace.max_dt = trace.max_dt.max(dt);

        let mut steady = false;
        if config.steady_tol > 0.0 && steps.is_multiple_of(STEADY_BLOCK) {
            let change: f64 = values.iter().zip(&block_start).map(|(a, b)| (a - b).abs()).sum::<f64>() * dx;
            if let Some(prev) = previous_block {
                let q = change / prev;
                steady = q < 1.0 && change * q / (1.0 - q) < config.steady_tol;
            }
            previous_block = Some(change);
            block_start.clone_from(&values);
        }
        if steady || last || steps.is_multiple_of(config.output_stride) {
            let rho = LineDensity::new(grid.clone(), values.clone())?;
            record(&mut trace, t, &rho);
            observer(steps, t, &rho);
        }
        if steady && !last {
            trace.steady_at = Some(t);
            t = config.t_end;
            let rho = LineDensity::new(grid.clone(), values.clone())?;
            record(&mut trace, t, &rho);
            observer(steps, t, &rho);
        }
    }
    trace.steps = steps;
    trace.final_density = LineDensity::new(grid, values)?;
    Ok(trace)
}

pub fn evolve(initial: &LineDensity, flow: &FlowParams, config: &EvolutionConfig) -> Result<EvolutionTrace> {
    evolve_with(initial, flow, config, |_, _, _| {})
}

/// Least-squares slope of `log y` against `log x`.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::input("need at least two matching samples"));
    }
    if x.iter().chain(y).any(|v| !(*v > 0.0)) {
        return Err(Error::input("log-log fit needs positive samples"));
    }
    let lx: Vec<f64> = x.iter().map(|v| libm::log(*v)).collect();
    let ly: Vec<f64> = y.iter().map(|v| libm::log(*v)).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::input("log-log fit needs distinct abscissae"));
    }
    Ok(sxy / sxx)
}
