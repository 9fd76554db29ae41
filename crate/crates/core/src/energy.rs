//! Free energy `F = H_m + χW_k`, its parts, the multiplier `D[ρ]` and the
//! scale-invariant HLS ratio.

use libm::pow;

use crate::error::{Error, Result};
use crate::kernel1d::LineKernel;
use crate::model::{LineDensity, ModelParams, RadialDensity};
use crate::riesz::RieszOperator;

/// What the energy functionals need from a density.
pub trait Density {
    /// Ambient dimension.
    fn dim(&self) -> usize;
    fn mass(&self) -> f64;
    /// `∫ ρ^p`.
    fn power_integral(&self, p: f64) -> f64;
    fn require_normalized(&self) -> Result<()>;
    /// `∬ |x − y|^k ρ(x)ρ(y)`, no normalisation required.
    fn riesz_double_integral(&self, params: &ModelParams) -> Result<f64>;
}

impl Density for LineDensity {
    fn dim(&self) -> usize {
        1
    }
    fn mass(&self) -> f64 {
        LineDensity::mass(self)
    }
    fn power_integral(&self, p: f64) -> f64 {
        LineDensity::power_integral(self, p)
    }
    fn require_normalized(&self) -> Result<()> {
        LineDensity::require_normalized(self)
    }
    fn riesz_double_integral(&self, params: &ModelParams) -> Result<f64> {
        if params.dim() != 1 {
            return Err(Error::input("line densities need N = 1"));
        }
        let grid = self.grid();
        Ok(LineKernel::new(grid.len(), grid.dx(), params.k()).double_integral(self.values()))
    }
}

impl Density for RadialDensity {
    fn dim(&self) -> usize {
        RadialDensity::dim(self)
    }
    fn mass(&self) -> f64 {
        RadialDensity::mass(self)
    }
    fn power_integral(&self, p: f64) -> f64 {
        RadialDensity::power_integral(self, p)
    }
    fn require_normalized(&self) -> Result<()> {
        RadialDensity::require_normalized(self)
    }
    fn riesz_double_integral(&self, params: &ModelParams) -> Result<f64> {
        if params.dim() != RadialDensity::dim(self) {
            return Err(Error::input("density and parameters disagree on N"));
        }
        if params.dim() == 1 {
            // the even extension carries the exact cell-pair sums
            return self.to_line()?.riesz_double_integral(params);
        }
        RieszOperator::new(params, self.grid()).double_integral(self)
    }
}

/// Components of the free energy of one density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBreakdown {
    /// `H_m = ∫ρ^m/(m−1)`.
    pub entropy: f64,
    /// `W_k = ∬|x−y|^k ρρ/(2k)`.
    pub interaction: f64,
    /// `H_m + χW_k`.
    pub free_energy: f64,
    /// `D = 2F + ((m−2)/(m−1))‖ρ‖_m^m`.
    pub multiplier: f64,
    /// `‖ρ‖_m^m`.
    pub m_norm_pow: f64,
}

impl EnergyBreakdown {
    /// Assembles the breakdown from `∫ρ^m` and `∬|x−y|^k ρρ`.
    pub fn from_parts(params: &ModelParams, m_norm_pow: f64, double_integral: f64) -> Self {
        let m = params.m();
        let entropy = m_norm_pow / (m - 1.0);
        let interaction = double_integral / (2.0 * params.k());
        let free_energy = entropy + params.chi() * interaction;
        let multiplier = 2.0 * free_energy + (m - 2.0) / (m - 1.0) * m_norm_pow;
        Self {
            entropy,
            interaction,
            free_energy,
            multiplier,
            m_norm_pow,
        }
    }
}

pub fn entropy<D: Density + ?Sized>(rho: &D, m: f64) -> Result<f64> {
    if !(m > 1.0 && m.is_finite()) {
        return Err(Error::param("m", "must be finite and > 1"));
    }
    Ok(rho.power_integral(m) / (m - 1.0))
}

pub fn interaction<D: Density + ?Sized>(rho: &D, params: &ModelParams) -> Result<f64> {
    rho.require_normalized()?;
    Ok(rho.riesz_double_integral(params)? / (2.0 * params.k()))
}

pub fn free_energy<D: Density + ?Sized>(rho: &D, params: &ModelParams) -> Result<EnergyBreakdown> {
    rho.require_normalized()?;
    if rho.dim() != params.dim() {
        return Err(Error::input("density and parameters disagree on N"));
    }
    let norm = rho.power_integral(params.m());
    Ok(EnergyBreakdown::from_parts(
        params,
        norm,
        rho.riesz_double_integral(params)?,
    ))
}

/// `|∬|x−y|^k ρρ| / (‖ρ‖₁^{(k+N)/N} ‖ρ‖_{m_c}^{m_c})`.
pub fn hls_ratio<D: Density + ?Sized>(rho: &D, params: &ModelParams) -> Result<f64> {
    let mass = rho.mass();
    if !(mass > 0.0) {
        return Err(Error::input("the HLS ratio needs a nonzero density"));
    }
    let n = params.dim() as f64;
    let k = params.k();
    let dbl = rho.riesz_double_integral(params)?;
    Ok(dbl.abs() / (pow(mass, (k + n) / n) * rho.power_integral(params.m_c())))
}
