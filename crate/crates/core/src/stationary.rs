//! Euler–Lagrange fixed point for global minimisers and its diagnostics.
//!
//! A minimiser satisfies `ρ^{m−1} = ((m−1)/m)(D − χS_k)₊` with `D` fixed by
//! unit mass. The solver iterates the damped map `ρ ← (1−ω)ρ + ωG(ρ)`,
//! choosing `D` by bisection at every step.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use libm::{floor, pow};

use crate::energy::EnergyBreakdown;
use crate::error::{Error, Result};
use crate::model::{sphere_area, LineDensity, ModelParams, RadialDensity, RadialGrid, Regime};
use crate::quad::GaussLegendre;
use crate::riesz::{PotentialProfile, RieszOperator};

/// Relative level below which a cell counts as vacuum.
pub const SUPPORT_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Damping `ω ∈ (0, 1]`.
    pub omega: f64,
    /// Stop once the L¹ change of one damped step is below this.
    pub tol: f64,
    pub max_iter: usize,
    /// Initial multiplier search interval.
    pub d_bracket: (f64, f64),
    /// Largest fraction of `r_max` the support may reach before regrowth.
    pub support_margin: f64,
    /// A converged support below this fraction of `r_max` triggers a re-solve
    /// on a tighter domain. Zero disables shrinking.
    pub support_floor: f64,
    /// Mass tolerance of the multiplier bisection.
    pub mass_tol: f64,
    pub max_widenings: usize,
    /// Cap on domain changes, growth and shrinking together.
    pub max_regrowths: usize,
    /// Record `F` along the iterates.
    pub track_energy: bool,
    /// Dilate the initial guess to its energy-optimal scale and fit the grid
    /// around it before iterating.
    pub rescale_initial: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            omega: 0.5,
            tol: 1e-11,
            max_iter: 20_000,
            d_bracket: (-10.0, 10.0),
            support_margin: 0.9,
            support_floor: 0.25,
            mass_tol: 1e-12,
            max_widenings: 8,
            max_regrowths: 5,
            track_energy: false,
            rescale_initial: true,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0 && self.omega <= 1.0) {
            return Err(Error::param("omega", "must lie in (0, 1]"));
        }
        if !(self.tol > 0.0) {
            return Err(Error::param("tol", "must be positive"));
        }
        if !(self.d_bracket.0 < self.d_bracket.1) || !self.d_bracket.0.is_finite() || !self.d_bracket.1.is_finite() {
            return Err(Error::param("d_bracket", "endpoints must be finite and ordered"));
        }
        if !(self.support_margin > 0.0 && self.support_margin < 1.0) {
            return Err(Error::param("support_margin", "must lie in (0, 1)"));
        }
        if !(self.support_floor >= 0.0 && self.support_floor < 0.5 * self.support_margin) {
            return Err(Error::param("support_floor", "must lie in [0, support_margin/2)"));
        }
        if !(self.mass_tol > 0.0) {
            return Err(Error::param("mass_tol", "must be positive"));
        }
        if self.max_iter == 0 {
            return Err(Error::param("max_iter", "must be positive"));
        }
        Ok(())
    }
}

/// Converged profile and everything measured on it.
#[derive(Debug, Clone)]
pub struct StationaryReport {
    pub profile: RadialDensity,
    pub potential: PotentialProfile,
    /// Multiplier from the mass bisection on the final potential.
    pub multiplier: f64,
    /// `D[ρ] = 2F + ((m−2)/(m−1))‖ρ‖_m^m` of the final profile, with `W`
    /// summed against the solver's own centre-point potential. The solver
    /// identifies the Euler–Lagrange constant with this value; the gap
    /// between the two is reported, not enforced.
    pub multiplier_from_energy: f64,
    pub el_residual: f64,
    pub support_radius: f64,
    pub monotone_defect: f64,
    pub char_residual_1d: Option<f64>,
    pub iterations: usize,
    pub last_change: f64,
    /// Discrete Lipschitz constant of `ρ^{m−1}`.
    pub lipschitz_estimate: f64,
    /// Discrete Lipschitz constant of `ρ`.
    pub lipschitz_density: f64,
    /// `max |S_{i+1} − S_i| / Δr`.
    pub potential_gradient: f64,
    pub max_density: f64,
    pub energy: EnergyBreakdown,
    /// `F` at each iterate on the final grid when tracking is on.
    pub energy_trace: Vec<f64>,
    pub regrowths: usize,
    pub widenings: usize,
    /// Only for `m_c < m < m*` is the minimiser a stationary state in the
    /// distributional sense.
    pub stationarity_guaranteed: bool,
    pub warnings: Vec<String>,
}

struct Projection {
    multiplier: f64,
    values: Vec<f64>,
    widenings: usize,
}

/// `G_D(r_i) = (((m−1)/m)(D − χS_i))₊^{1/(m−1)}`.
fn profile_for(d: f64, potential: &[f64], params: &ModelParams, out: &mut [f64]) {
    let m = params.m();
    let c = (m - 1.0) / m;
    let e = 1.0 / (m - 1.0);
    let chi = params.chi();
    for (o, s) in out.iter_mut().zip(potential) {
        let base = c * (d - chi * s);
        *o = if base > 0.0 { pow(base, e) } else { 0.0 };
    }
}

fn radial_mass(values: &[f64], weights: &[f64], sigma: f64) -> f64 {
    sigma * values.iter().zip(weights).map(|(v, w)| v * w).sum::<f64>()
}

/// Unit-mass projection: bisection on `D`.
fn project(
    potential: &[f64],
    params: &ModelParams,
    weights: &[f64],
    bracket: (f64, f64),
    config: &SolverConfig,
) -> Result<Projection> {
    let sigma = sphere_area(params.dim());
    let mut buf = vec![0.0; potential.len()];
    let mass_at = |d: f64, buf: &mut Vec<f64>| {
        profile_for(d, potential, params, buf);
        radial_mass(buf, weights, sigma)
    };
    let (mut lo, mut hi) = bracket;
    let mut widenings = 0;
    loop {
        let below = mass_at(lo, &mut buf) < 1.0;
        let above = mass_at(hi, &mut buf) > 1.0;
        if below && above {
            break;
        }
        if widenings == config.max_widenings {
            return Err(Error::BracketFailure { lo, hi, widenings });
        }
        let mid = 0.5 * (lo + hi);
        let half = 2.0 * (hi - lo);
        lo = mid - half;
        hi = mid + half;
        widenings += 1;
    }
    let mut d = 0.5 * (lo + hi);
    for _ in 0..200 {
        d = 0.5 * (lo + hi);
        let mass = mass_at(d, &mut buf);
        if (mass - 1.0).abs() <= config.mass_tol || d == lo || d == hi {
            break;
        }
        if mass < 1.0 {
            lo = d;
        } else {
            hi = d;
        }
    }
    profile_for(d, potential, params, &mut buf);
    let mass = radial_mass(&buf, weights, sigma);
    if mass > 0.0 {
        for v in &mut buf {
            *v /= mass;
        }
    }
    Ok(Projection {
        multiplier: d,
        values: buf,
        widenings,
    })
}

fn l1(a: &[f64], b: &[f64], weights: &[f64], sigma: f64) -> f64 {
    sigma
        * a.iter()
            .zip(b)
            .zip(weights)
            .map(|((x, y), w)| (x - y).abs() * w)
            .sum::<f64>()
}

fn support_index(values: &[f64]) -> usize {
    let max = values.iter().cloned().fold(0.0, f64::max);
    values
        .iter()
        .rposition(|&v| v > SUPPORT_THRESHOLD * max)
        .map_or(0, |i| i + 1)
}

/// Dilation factor minimising `λ ↦ F[ρ^λ] = λ^{N(m−1)}H + λ^{−k}χW`.
///
/// Needs `W < 0 < H` and `m > m_c`, where the minimiser is unique.
pub fn optimal_dilation(energy: &EnergyBreakdown, params: &ModelParams) -> Result<f64> {
    let alpha = params.dim() as f64 * (params.m() - 1.0);
    let beta = -params.k();
    if !(alpha > beta) {
        return Err(Error::input("optimal dilation needs m > m_c"));
    }
    if !(energy.entropy > 0.0 && energy.interaction < 0.0) {
        return Err(Error::input("optimal dilation needs H > 0 > W"));
    }
    let ratio = beta * params.chi() * (-energy.interaction) / (alpha * energy.entropy);
    Ok(pow(ratio, 1.0 / (alpha - beta)))
}

/// Fraction of `r_max` the support should fill after any domain change.
const FIT_FRACTION: f64 = 0.6;

/// `initial` dilated to its energy-optimal scale on a grid with the same
/// cell count whose support fills [`FIT_FRACTION`] of `r_max`.
pub fn rescaled_initial(initial: &RadialDensity, params: &ModelParams) -> Result<RadialDensity> {
    let energy = crate::energy::free_energy(initial, params)?;
    let lambda = optimal_dilation(&energy, params)?;
    let support = initial.support_radius(0.0);
    let grid = RadialGrid::new(support / (lambda * FIT_FRACTION), initial.grid().len())?;
    initial.dilate(lambda)?.resample(&grid)?.normalize()
}

/// Bracket centred on `center`, wide enough for the potential's scale.
fn bracket_around(center: f64, potential: &[f64], params: &ModelParams, min_half: f64) -> (f64, f64) {
    let scale = params.chi() * potential.iter().fold(0.0f64, |a, s| a.max(s.abs()));
    let half = (0.25 * (center.abs() + scale)).max(min_half);
    (center - half, center + half)
}

/// Finds the minimiser by damped fixed-point iteration.
///
/// With `rescale_initial` the initial guess is first dilated to its
/// energy-optimal scale and put on a fitted grid (same cell count). During
/// the iteration, a support reaching `support_margin·r_max` multiplies
/// `r_max` by 1.5 and restarts from the current profile; a converged
/// support below `support_floor·r_max` is re-solved on a grid it fills to
/// 60%. The multiplier bracket has at least the half-width of
/// `d_bracket`, starts centred on `D[ρ₀]` and then follows the running
/// multiplier.
pub fn solve_stationary(
    params: &ModelParams,
    config: &SolverConfig,
    initial: &RadialDensity,
) -> Result<StationaryReport> {
    config.validate()?;
    initial.require_normalized()?;
    if initial.dim() != params.dim() {
        return Err(Error::input("initial density and parameters disagree on N"));
    }
    let mut warnings = Vec::new();
    if params.regime() != Regime::DiffusionDominated {
        warnings.push(format!(
            "m = {} is not above m_c = {}: minimisers need not exist",
            params.m(),
            params.m_c()
        ));
    }
    if !params.stationarity_guaranteed() {
        warnings.push(String::from(
            "m ≥ m*: the minimiser solves the Euler–Lagrange identity but is not guaranteed to be a stationary state",
        ));
    }
    let sigma = sphere_area(params.dim());
    let cfg_half = 0.5 * (config.d_bracket.1 - config.d_bracket.0);
    let mut rho = if config.rescale_initial && params.regime() == Regime::DiffusionDominated {
        rescaled_initial(initial, params)?
    } else {
        initial.clone()
    };
    let mut center = crate::energy::free_energy(&rho, params)?.multiplier;
    let mut regrowths = 0;
    let mut widenings = 0;
    let mut energy_trace = Vec::new();
    let mut iterations = 0;
    'grids: loop {
        let grid = rho.grid().clone();
        let op = RieszOperator::new(params, &grid);
        let weights = grid.shell_weights(params.dim());
        let n = grid.len();
        let margin_index = floor(config.support_margin * n as f64) as usize;
        let mut values = rho.values().to_vec();
        let mut last_change = f64::INFINITY;
        let mut converged = false;
        while iterations < config.max_iter {
            iterations += 1;
            let raw = op.apply_values(&values);
            let potential: Vec<f64> = raw.iter().map(|r| r / params.k()).collect();
            let min_half = if iterations == 1 { cfg_half } else { 0.0 };
            let bracket = bracket_around(center, &potential, params, min_half);
            let proj = project(&potential, params, &weights, bracket, config)?;
            widenings += proj.widenings;
            center = proj.multiplier;
            if config.track_energy {
                let iterate = RadialDensity::new(grid.clone(), params.dim(), values.clone())?;
                energy_trace.push(crate::energy::free_energy(&iterate, params)?.free_energy);
            }
            if support_index(&proj.values) > margin_index {
                if regrowths == config.max_regrowths {
                    return Err(Error::DomainExhausted {
                        r_max: grid.r_max(),
                        support_radius: grid.edge(support_index(&proj.values)),
                    });
                }
                regrowths += 1;
                let bigger = RadialGrid::new(grid.r_max() * 1.5, n)?;
                let current = RadialDensity::new(grid.clone(), params.dim(), values)?;
                rho = current.resample(&bigger)?.normalize()?;
                energy_trace.clear();
                continue 'grids;
            }
            let omega = config.omega;
            let next: Vec<f64> = values
                .iter()
                .zip(&proj.values)
                .map(|(r, g)| (1.0 - omega) * r + omega * g)
                .collect();
            last_change = l1(&next, &values, &weights, sigma);
            values = next;
            if last_change < config.tol {
                converged = true;
                break;
            }
        }
        let profile = RadialDensity::new(grid.clone(), params.dim(), values)?.normalize()?;
        let raw = op.apply_values(profile.values());
        let potential = PotentialProfile::from_raw(grid.clone(), params.k(), raw.clone());
        let bracket = bracket_around(center, potential.values(), params, 0.0);
        let proj = project(potential.values(), params, &weights, bracket, config)?;
        let el = el_residual(&profile, &potential, proj.multiplier, params)?;
        if !converged {
            return Err(Error::NotConverged {
                iterations,
                last_change,
                el_residual: el,
            });
        }
        let max_density = profile.values().iter().cloned().fold(0.0, f64::max);
        let threshold = SUPPORT_THRESHOLD * max_density;
        let support = profile.support_radius(threshold);
        if support < config.support_floor * grid.r_max() && regrowths < config.max_regrowths {
            regrowths += 1;
            let tighter = RadialGrid::new(support / FIT_FRACTION, grid.len())?;
            // cells below the support threshold hold only damping residue
            let trimmed = profile
                .values()
                .iter()
                .map(|&v| if v > threshold { v } else { 0.0 })
                .collect();
            rho = RadialDensity::new(grid.clone(), params.dim(), trimmed)?
                .resample(&tighter)?
                .normalize()?;
            energy_trace.clear();
            continue 'grids;
        }
        // D is checked against the energy the fixed point is consistent
        // with (centre-point potential); the reported F is the canonical
        // discrete functional, the one `free_energy` evaluates from a file
        let norm = profile.power_integral(params.m());
        let solver_energy = EnergyBreakdown::from_parts(params, norm, op.double_integral_with(profile.values(), &raw));
        let energy = crate::energy::free_energy(&profile, params)?;
        let char_residual_1d = if params.dim() == 1 {
            Some(char_residual_1d(&profile.to_line()?, params)?)
        } else {
            None
        };
        let dr = grid.dr();
        let pressure: Vec<f64> = profile.values().iter().map(|v| pow(*v, params.m() - 1.0)).collect();
        return Ok(StationaryReport {
            multiplier: proj.multiplier,
            multiplier_from_energy: solver_energy.multiplier,
            el_residual: el,
            support_radius: support,
            monotone_defect: profile.monotone_defect(),
            char_residual_1d,
            iterations,
            last_change,
            lipschitz_estimate: max_slope(&pressure, dr),
            lipschitz_density: max_slope(profile.values(), dr),
            potential_gradient: max_slope(potential.values(), dr),
            max_density,
            energy,
            energy_trace,
            regrowths,
            widenings,
            stationarity_guaranteed: params.stationarity_guaranteed(),
            warnings,
            potential,
            profile,
        });
    }
}

fn max_slope(values: &[f64], h: f64) -> f64 {
    values.windows(2).map(|w| (w[1] - w[0]).abs() / h).fold(0.0, f64::max)
}

/// `max_{ρ>0} |ρ^{m−1} − ((m−1)/m)(D − χS)₊| / max ρ^{m−1}`.
pub fn el_residual(
    rho: &RadialDensity,
    potential: &PotentialProfile,
    multiplier: f64,
    params: &ModelParams,
) -> Result<f64> {
    if rho.grid() != potential.grid() {
        return Err(Error::input("density and potential grids differ"));
    }
    let m = params.m();
    let max = rho.values().iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return Err(Error::input("EL residual of a zero density"));
    }
    let scale = pow(max, m - 1.0);
    let c = (m - 1.0) / m;
    let worst = rho
        .values()
        .iter()
        .zip(potential.values())
        .filter(|(v, _)| **v > SUPPORT_THRESHOLD * max)
        .map(|(v, s)| (pow(*v, m - 1.0) - (c * (multiplier - params.chi() * s)).max(0.0)).abs())
        .fold(0.0, f64::max);
    Ok(worst / scale)
}

const CHAR_NODES: usize = 32;

/// Piecewise-linear interpolant through the cell centres, zero outside.
struct Interpolant<'a> {
    values: &'a [f64],
    x0: f64,
    dx: f64,
}

impl Interpolant<'_> {
    fn at(&self, x: f64) -> f64 {
        let t = (x - self.x0) / self.dx;
        let i = floor(t);
        let frac = t - i;
        let get = |j: f64| -> f64 {
            if j < 0.0 || j >= self.values.len() as f64 {
                0.0
            } else {
                self.values[j as usize]
            }
        };
        (1.0 - frac) * get(i) + frac * get(i + 1.0)
    }
}

/// Largest defect of `ρ(p)^m = (χ/2)∫∫₀¹ |q|^k ρ(p−sq)ρ(p−sq+q) ds dq` over
/// the support cells, relative to `max ρ^m`.
///
/// `ρ` is interpolated linearly between cell centres. The `s`-integral uses
/// 32 Gauss points on the part of `(0, 1)` where both factors can be nonzero;
/// in `q` the inner integral is interpolated linearly on cells of width `Δx`
/// and integrated exactly against `|q|^k`.
pub fn char_residual_1d(rho: &LineDensity, params: &ModelParams) -> Result<f64> {
    if params.dim() != 1 {
        return Err(Error::input("the 1D characterization needs N = 1"));
    }
    let grid = rho.grid();
    let values = rho.values();
    let n = grid.len();
    let dx = grid.dx();
    let max = values.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return Err(Error::input("characterization residual of a zero density"));
    }
    let thr = SUPPORT_THRESHOLD * max;
    let first = values.iter().position(|&v| v > thr).unwrap_or(0);
    let last = values.iter().rposition(|&v| v > thr).unwrap_or(0);
    if first == 0 || last + 1 == n {
        return Err(Error::input("support must stay inside the grid"));
    }
    let interp = Interpolant {
        values,
        x0: grid.center(0),
        dx,
    };
    // the interpolant vanishes outside (lo, hi)
    let lo = grid.center(first) - dx;
    let hi = grid.center(last) + dx;
    let reach = libm::ceil((hi - lo) / dx) as i64 + 1;
    let k = params.k();
    let moments: Vec<(f64, f64)> = (0..reach).map(|j| q_moments(j as f64, k, dx)).collect();
    let gl = GaussLegendre::new(CHAR_NODES);
    let chi = params.chi();
    let m = params.m();
    let rows = crate::par::map_indices(last + 1 - first, |t| {
        let i = first + t;
        let p = grid.center(i);
        let g = |q: f64| -> f64 {
            if q == 0.0 {
                let v = interp.at(p);
                return v * v;
            }
            // p − sq ∈ (lo, hi) and p + (1−s)q ∈ (lo, hi)
            let (a1, b1) = s_window(p, -q, lo, hi);
            let (a2, b2) = s_window(p + q, -q, lo, hi);
            let a = a1.max(a2).max(0.0);
            let b = b1.min(b2).min(1.0);
            if b <= a {
                return 0.0;
            }
            gl.integrate(a, b, |s| interp.at(p - s * q) * interp.at(p - s * q + q))
        };
        let samples: Vec<f64> = (-reach..=reach).map(|j| g(j as f64 * dx)).collect();
        let mut rhs = 0.0;
        for j in 0..reach as usize {
            let (m0, m1) = moments[j];
            // [jΔx, (j+1)Δx]
            let g0 = samples[reach as usize + j];
            let g1 = samples[reach as usize + j + 1];
            rhs += g0 * m0 + (g1 - g0) * m1;
            // mirrored cell [−(j+1)Δx, −jΔx], linear coordinate runs the other way
            let h0 = samples[reach as usize - j - 1];
            let h1 = samples[reach as usize - j];
            rhs += h0 * m0 + (h1 - h0) * (m0 - m1);
        }
        let rhs = 0.5 * chi * rhs;
        (pow(values[i], m) - rhs).abs()
    });
    let worst = rows.into_iter().fold(0.0, f64::max);
    Ok(worst / pow(max, m))
}

/// `s` with `base + s·slope ∈ (lo, hi)`, as an interval (slope ≠ 0).
fn s_window(base: f64, slope: f64, lo: f64, hi: f64) -> (f64, f64) {
    let s1 = (lo - base) / slope;
    let s2 = (hi - base) / slope;
    if s1 < s2 {
        (s1, s2)
    } else {
        (s2, s1)
    }
}

/// `(∫_j^{j+1} t^k dt, ∫_j^{j+1} t^k (t−j) dt)·Δx^{k+1}`.
fn q_moments(j: f64, k: f64, dx: f64) -> (f64, f64) {
    let scale = pow(dx, k + 1.0);
    let p1 = |t: f64| pow(t, k + 1.0) / (k + 1.0);
    let p2 = |t: f64| pow(t, k + 2.0) / (k + 2.0);
    let m0 = p1(j + 1.0) - p1(j);
    let m1 = p2(j + 1.0) - p2(j) - j * m0;
    (scale * m0, scale * m1)
}

/// Both sides of `z^{1−m}/(m−1) + z^k/k ≥ 1/(m−1) + 1/k` and their gap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointwiseInequality {
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
}

pub fn pointwise_inequality(z: f64, m: f64, k: f64) -> Result<PointwiseInequality> {
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::param("z", "must be finite and positive"));
    }
    if !(k < 0.0 && m > 1.0 - k) {
        return Err(Error::param("m", "must exceed 1 − k with k < 0"));
    }
    let lz = libm::log(z);
    let lhs = pow(z, 1.0 - m) / (m - 1.0) + pow(z, k) / k;
    let rhs = 1.0 / (m - 1.0) + 1.0 / k;
    // the two expm1 terms carry the gap without cancelling against rhs
    let gap = libm::expm1((1.0 - m) * lz) / (m - 1.0) + libm::expm1(k * lz) / k;
    Ok(PointwiseInequality { lhs, rhs, gap })
}

/// Energies of a candidate family compared with a reference profile.
#[derive(Debug, Clone, PartialEq)]
pub struct MinimalityReport {
    pub reference_energy: f64,
    pub energies: Vec<f64>,
    /// `F[candidate] − F[ρ̄]`.
    pub excess: Vec<f64>,
    /// Indices with `F[candidate] < F[ρ̄] − slack`.
    pub violations: Vec<usize>,
    pub slack: f64,
}

pub const MINIMALITY_SLACK: f64 = 1e-6;

pub fn minimality_check_1d(
    rho_bar: &LineDensity,
    candidates: &[LineDensity],
    params: &ModelParams,
) -> Result<MinimalityReport> {
    let reference_energy = crate::energy::free_energy(rho_bar, params)?.free_energy;
    let slack = MINIMALITY_SLACK * reference_energy.abs();
    let energies = candidates
        .iter()
        .map(|c| crate::energy::free_energy(c, params).map(|e| e.free_energy))
        .collect::<Result<Vec<f64>>>()?;
    let excess: Vec<f64> = energies.iter().map(|e| e - reference_energy).collect();
    let violations = excess
        .iter()
        .enumerate()
        .filter(|(_, &e)| e < -slack)
        .map(|(i, _)| i)
        .collect();
    Ok(MinimalityReport {
        reference_energy,
        energies,
        excess,
        violations,
        slack,
    })
}

/// `F[ρ̄^λ]` over a list of dilation factors.
#[derive(Debug, Clone, PartialEq)]
pub struct DilationScan {
    pub lambdas: Vec<f64>,
    pub energies: Vec<f64>,
    pub argmin: f64,
}

pub fn dilation_scan(rho_bar: &LineDensity, params: &ModelParams, lambdas: &[f64]) -> Result<DilationScan> {
    if lambdas.is_empty() {
        return Err(Error::input("empty dilation scan"));
    }
    let energies = lambdas
        .iter()
        .map(|&l| crate::energy::free_energy(&rho_bar.dilate(l)?, params).map(|e| e.free_energy))
        .collect::<Result<Vec<f64>>>()?;
    let best = energies
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    Ok(DilationScan {
        lambdas: lambdas.to_vec(),
        energies,
        argmin: lambdas[best],
    })
}

/// The three starting shapes of the uniqueness harness, normalised on `grid`.
pub fn uniqueness_initials(grid: &RadialGrid, dim: usize) -> Result<Vec<(&'static str, RadialDensity)>> {
    let r0 = (0.5 * grid.r_max()).min(1.0);
    let uniform = RadialDensity::uniform_ball(grid.clone(), dim, r0)?;
    let tri_r = (0.75 * grid.r_max()).min(1.5);
    let triangle = RadialDensity::from_fn(grid.clone(), dim, |r| (1.0 - r / tri_r).max(0.0))?.normalize()?;
    let width = (0.2 * grid.r_max()).min(0.5);
    let gaussian = RadialDensity::from_fn(grid.clone(), dim, |r| {
        if r < 3.0 * width {
            libm::exp(-0.5 * (r / width) * (r / width))
        } else {
            0.0
        }
    })?
    .normalize()?;
    Ok(vec![
        ("uniform", uniform),
        ("triangle", triangle),
        ("gaussian", gaussian),
    ])
}

#[derive(Debug, Clone)]
pub struct UniquenessReport {
    pub labels: Vec<&'static str>,
    pub reports: Vec<StationaryReport>,
    /// `(i, j, ‖ρ_i − ρ_j‖₁)` after centring.
    pub distances: Vec<(usize, usize, f64)>,
    pub max_distance: f64,
    /// Uniqueness is a theorem only for N = 1.
    pub asserted: bool,
}

/// Solves from the three standard initials and compares the results
/// pairwise. A pilot solve from the uniform initial on `grid` fixes a
/// common grid fitted to the support; the three initials are then built
/// on that grid and solved without rescaling or shrinking, so the
/// profiles are compared cell by cell. In 1D they are compared as centred
/// line densities.
pub fn uniqueness(params: &ModelParams, config: &SolverConfig, grid: &RadialGrid) -> Result<UniquenessReport> {
    let pilot_initial = uniqueness_initials(grid, params.dim())?.swap_remove(0).1;
    let pilot = solve_stationary(params, config, &pilot_initial)?;
    let common = pilot.profile.grid().clone();
    let fixed = SolverConfig {
        rescale_initial: false,
        support_floor: 0.0,
        ..config.clone()
    };
    let mut labels = Vec::new();
    let mut reports = Vec::new();
    for (label, init) in uniqueness_initials(&common, params.dim())? {
        labels.push(label);
        reports.push(solve_stationary(params, &fixed, &init)?);
    }
    let mut distances = Vec::new();
    for i in 0..reports.len() {
        for j in i + 1..reports.len() {
            let (a, b) = (&reports[i].profile, &reports[j].profile);
            let d = if params.dim() == 1 {
                let la = a.to_line()?.centered()?;
                let lb = b.to_line()?.centered()?;
                // common grid: the wider of the two
                if la.grid().half_width() >= lb.grid().half_width() {
                    la.l1_distance(&lb)?
                } else {
                    lb.l1_distance(&la)?
                }
            } else if a.grid().r_max() >= b.grid().r_max() {
                a.l1_distance(b)?
            } else {
                b.l1_distance(a)?
            };
            distances.push((i, j, d));
        }
    }
    let max_distance = distances.iter().map(|d| d.2).fold(0.0, f64::max);
    Ok(UniquenessReport {
        labels,
        reports,
        distances,
        max_distance,
        asserted: params.dim() == 1,
    })
}
