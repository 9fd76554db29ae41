//! Radial Riesz potentials `|x|^k ∗ ρ` and the associated estimates.
//!
//! For radial `ρ`, `|x|^k ∗ ρ(x) = ∫₀^∞ Θ_k(|x|, η) ρ(η) η^{N−1} dη` with the
//! angular kernel `Θ_k(r, η) = r^k ϑ_k(η/r)` (η < r) and
//! `ϑ_k(u) = 2^{N−2} σ_{N−1} (1+u)^k H(−k/2, (N−1)/2; N−1; 4u/(1+u)²)`.
//! In one dimension the "sphere" is two points and `Θ_k = |r−η|^k + (r+η)^k`.
//!
//! Potentials on a grid go through [`RieszOperator`], which stores the exact
//! cell weights `∫_{cell j} Θ_k(r_i, η) η^{N−1} dη` once per grid.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use libm::{log, pow};

use crate::error::{Error, Result};
use crate::hypergeom::{beta, gamma, rgamma, Gauss2F1};
use crate::model::{sphere_area, KernelBranch, ModelParams, RadialDensity, RadialGrid};
use crate::quad::{GaussLegendre, TanhSinh};

const FAR_NODES: usize = 10;
const TANH_SINH_STEP: f64 = 1.0 / 16.0;
/// Cells closer than this many widths to `r` use the singular rule.
const NEAR_CELLS: f64 = 2.0;

/// Angular kernel `Θ_k` for fixed `(N, k)`.
#[derive(Debug, Clone)]
pub struct ThetaKernel {
    dim: usize,
    k: f64,
    /// `2^{N−2} σ_{N−1} B(b, c−b)`; unused for N = 1.
    prefactor: f64,
    hyp: Option<Gauss2F1>,
}

impl ThetaKernel {
    pub fn new(params: &ModelParams) -> Self {
        let dim = params.dim();
        let k = params.k();
        if dim == 1 {
            return Self {
                dim,
                k,
                prefactor: 0.0,
                hyp: None,
            };
        }
        let b = (dim as f64 - 1.0) / 2.0;
        let c = dim as f64 - 1.0;
        let prefactor = pow(2.0, dim as f64 - 2.0) * sphere_area(dim - 1) * beta(b, c - b);
        let hyp = Gauss2F1::new(-k / 2.0, b, c).expect("admissible for N ≥ 2 and k < 0");
        Self {
            dim,
            k,
            prefactor,
            hyp: Some(hyp),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `ϑ_k(u)` for `0 ≤ u < 1`, with `v = 1 − u` supplied exactly.
    pub fn vartheta(&self, u: f64, v: f64) -> f64 {
        match self.hyp {
            None => pow(v, self.k) + pow(1.0 + u, self.k),
            Some(h) => {
                let s = 1.0 + u;
                let z = 4.0 * u / (s * s);
                // clamp: extreme tanh-sinh nodes can square to zero
                let w = ((v / s) * (v / s)).max(f64::MIN_POSITIVE);
                self.prefactor * pow(s, self.k) * h.eval_complement(z, w)
            }
        }
    }

    /// `Θ_k(r, η)` with `gap = |r − η|` supplied exactly.
    pub fn theta_gap(&self, r: f64, eta: f64, gap: f64) -> f64 {
        if self.dim == 1 {
            return pow(gap, self.k) + pow(r + eta, self.k);
        }
        let (big, small) = if eta < r { (r, eta) } else { (eta, r) };
        pow(big, self.k) * self.vartheta(small / big, gap / big)
    }

    /// `∫_a^b Θ_k(r, η) η^{N−1} dη` for `0 ≤ a < b`, `r ≥ 0`.
    pub fn cell_weight(&self, r: f64, a: f64, b: f64) -> f64 {
        let k = self.k;
        if self.dim == 1 {
            // exact antiderivatives of |η − r|^k and (η + r)^k
            let q = k + 1.0;
            let f = |t: f64| t.signum() * pow(t.abs(), q) / q;
            return f(b - r) - f(a - r) + (pow(r + b, q) - pow(r + a, q)) / q;
        }
        if r == 0.0 {
            // Θ_k(0, η) = σ_N η^k
            let p = k + self.dim as f64;
            return sphere_area(self.dim) * (pow(b, p) - pow(a, p)) / p;
        }
        let h = b - a;
        let dist = if r < a {
            a - r
        } else if r > b {
            r - b
        } else {
            0.0
        };
        if dist >= NEAR_CELLS * h {
            let gl = gauss_far();
            return gl.integrate(a, b, |eta| {
                self.theta_gap(r, eta, (r - eta).abs()) * pow_int(eta, self.dim - 1)
            });
        }
        if r <= a {
            self.integral_from(r, b) - self.integral_from(r, a)
        } else if r >= b {
            self.integral_from(r, a) - self.integral_from(r, b)
        } else {
            self.integral_from(r, a) + self.integral_from(r, b)
        }
    }

    /// `|∫_r^end Θ_k(r, η) η^{N−1} dη|` with the singular endpoint at `r`.
    fn integral_from(&self, r: f64, end: f64) -> f64 {
        if end == r {
            return 0.0;
        }
        let ts = tanh_sinh();
        let nm1 = self.dim - 1;
        if end > r {
            ts.integrate(r, end, |p| self.theta_gap(r, p.x, p.from_a) * pow_int(p.x, nm1))
        } else {
            ts.integrate(end, r, |p| self.theta_gap(r, p.x, p.from_b) * pow_int(p.x, nm1))
        }
    }
}

fn pow_int(x: f64, e: usize) -> f64 {
    match e {
        0 => 1.0,
        1 => x,
        2 => x * x,
        _ => pow(x, e as f64),
    }
}

#[cfg(feature = "std")]
fn gauss_far() -> &'static GaussLegendre {
    static RULE: std::sync::OnceLock<GaussLegendre> = std::sync::OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(FAR_NODES))
}

#[cfg(feature = "std")]
fn tanh_sinh() -> &'static TanhSinh {
    static RULE: std::sync::OnceLock<TanhSinh> = std::sync::OnceLock::new();
    RULE.get_or_init(|| TanhSinh::new(TANH_SINH_STEP))
}

#[cfg(not(feature = "std"))]
fn gauss_far() -> GaussLegendre {
    GaussLegendre::new(FAR_NODES)
}

#[cfg(not(feature = "std"))]
fn tanh_sinh() -> TanhSinh {
    TanhSinh::new(TANH_SINH_STEP)
}

/// `Θ_k(r, η)` for `r, η > 0`. The diagonal is rejected when the kernel is
/// unbounded there (`k ≤ 1 − N`).
pub fn theta(r: f64, eta: f64, params: &ModelParams) -> Result<f64> {
    if !(r > 0.0 && eta > 0.0 && r.is_finite() && eta.is_finite()) {
        return Err(Error::input("theta needs finite positive radii"));
    }
    if r == eta && params.kernel_branch() != KernelBranch::Regular {
        return Err(Error::input("theta is infinite on the diagonal r = η for k ≤ 1 − N"));
    }
    Ok(ThetaKernel::new(params).theta_gap(r, eta, (r - eta).abs()))
}

/// Cell-weight matrix of `|·|^k ∗` on a radial grid, evaluated at the cell
/// centres.
#[derive(Debug, Clone)]
pub struct RieszOperator {
    params: ModelParams,
    grid: RadialGrid,
    kernel: ThetaKernel,
    /// row-major, `weights[i*n + j] = ∫_{cell j} Θ_k(r_i, η) η^{N−1} dη`
    weights: Vec<f64>,
}

impl RieszOperator {
    pub fn new(params: &ModelParams, grid: &RadialGrid) -> Self {
        let kernel = ThetaKernel::new(params);
        let n = grid.len();
        let rows = crate::par::map_indices(n, |i| {
            let r = grid.center(i);
            (0..n)
                .map(|j| kernel.cell_weight(r, grid.edge(j), grid.edge(j + 1)))
                .collect::<Vec<f64>>()
        });
        let weights = rows.into_iter().flatten().collect();
        Self {
            params: *params,
            grid: grid.clone(),
            kernel,
            weights,
        }
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }
    pub fn params(&self) -> &ModelParams {
        &self.params
    }
    pub fn kernel(&self) -> &ThetaKernel {
        &self.kernel
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.grid.len() + j]
    }

    fn check(&self, rho: &RadialDensity) -> Result<()> {
        if rho.dim() != self.params.dim() {
            return Err(Error::input(format!(
                "density has N = {}, operator N = {}",
                rho.dim(),
                self.params.dim()
            )));
        }
        if *rho.grid() != self.grid {
            return Err(Error::input("density grid differs from the operator grid"));
        }
        Ok(())
    }

    /// Raw potential `(|·|^k ∗ ρ)(r_i)` from cell values on this grid,
    /// without normalisation checks.
    pub fn apply_values(&self, values: &[f64]) -> Vec<f64> {
        let n = self.grid.len();
        let support = match values.iter().rposition(|&v| v != 0.0) {
            Some(last) => last + 1,
            None => return alloc::vec![0.0; n],
        };
        crate::par::map_indices(n, |i| {
            let row = &self.weights[i * n..i * n + support];
            row.iter().zip(&values[..support]).map(|(w, v)| w * v).sum()
        })
    }

    /// Potential of a normalised density on this grid.
    pub fn potential(&self, rho: &RadialDensity) -> Result<PotentialProfile> {
        self.check(rho)?;
        rho.require_normalized()?;
        let raw = self.apply_values(rho.values());
        Ok(PotentialProfile::from_raw(self.grid.clone(), self.params.k(), raw))
    }

    /// `∬ |x − y|^k ρρ = σ_N Σ_i ρ_i w_i raw_i`; no normalisation required.
    pub fn double_integral(&self, rho: &RadialDensity) -> Result<f64> {
        self.check(rho)?;
        let raw = self.apply_values(rho.values());
        Ok(self.double_integral_with(rho.values(), &raw))
    }

    pub(crate) fn double_integral_with(&self, values: &[f64], raw: &[f64]) -> f64 {
        let dim = self.params.dim();
        let sum: f64 = values
            .iter()
            .zip(raw)
            .enumerate()
            .filter(|(_, (v, _))| **v != 0.0)
            .map(|(i, (v, r))| v * r * self.grid.shell_weight(i, dim))
            .sum();
        sphere_area(dim) * sum
    }

    /// Cross term `∬_{|x|>A_H, |y|<A_H} |x − y|^k ρρ` over `M_ρ(A_H) K(H)`.
    pub fn cross_range_ratio(&self, rho: &RadialDensity, level: f64, q: f64) -> Result<f64> {
        self.check(rho)?;
        let k_value = cross_range_k(level, &self.params, q)?;
        let a_h = rho.level_set_radius(level)?;
        if pow(level, -q) < 2.0 * a_h {
            return Err(Error::input(format!(
                "H^(-q) = {} is below 2·A_H = {}: outside the estimate's hypothesis",
                pow(level, -q),
                2.0 * a_h
            )));
        }
        let mass_inside = rho.mass_function(a_h)?;
        if mass_inside == 0.0 {
            return Ok(0.0);
        }
        let n = self.grid.len();
        let split = (0..=n).find(|&j| self.grid.edge(j) >= a_h).unwrap_or(n);
        let dim = self.params.dim();
        let values = rho.values();
        let mut cross = 0.0;
        for i in split..n {
            if values[i] == 0.0 {
                continue;
            }
            let inner: f64 = (0..split).map(|j| self.weight(i, j) * values[j]).sum();
            cross += values[i] * self.grid.shell_weight(i, dim) * inner;
        }
        cross *= sphere_area(dim);
        Ok(cross / (mass_inside * k_value))
    }
}

/// Potential sampled at the cell centres of a radial grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialProfile {
    grid: RadialGrid,
    raw: Vec<f64>,
    values: Vec<f64>,
}

impl PotentialProfile {
    pub fn from_raw(grid: RadialGrid, k: f64, raw: Vec<f64>) -> Self {
        let values = raw.iter().map(|r| r / k).collect();
        Self { grid, raw, values }
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }
    /// `(|·|^k ∗ ρ)(r_i)`.
    pub fn raw(&self) -> &[f64] {
        &self.raw
    }
    /// `S_k(r_i) = raw_i / k`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Riesz potential of a normalised radial density at its cell centres.
pub fn riesz_potential(rho: &RadialDensity, params: &ModelParams) -> Result<PotentialProfile> {
    RieszOperator::new(params, rho.grid()).potential(rho)
}

/// Flags an evaluation radius sitting on a jump of `ρ` where the kernel is
/// unbounded on the diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureWarning {
    pub radius: f64,
    pub message: String,
}

/// Raw potential at arbitrary radii `0 ≤ r`, computed cell by cell.
pub fn raw_riesz_at(
    rho: &RadialDensity,
    params: &ModelParams,
    radii: &[f64],
) -> Result<(Vec<f64>, Vec<QuadratureWarning>)> {
    if rho.dim() != params.dim() {
        return Err(Error::input("density and parameters disagree on N"));
    }
    if let Some(r) = radii.iter().find(|r| !(r.is_finite() && **r >= 0.0)) {
        return Err(Error::input(format!(
            "evaluation radius {r} must be finite and nonnegative"
        )));
    }
    let kernel = ThetaKernel::new(params);
    let grid = rho.grid();
    let values = rho.values();
    let n = grid.len();
    let mut warnings = Vec::new();
    if params.kernel_branch() != KernelBranch::Regular {
        for &r in radii {
            let j = libm::round(r / grid.dr()) as usize;
            if j >= 1 && j < n && (grid.edge(j) - r).abs() <= 1e-12 * grid.r_max() && values[j - 1] != values[j] {
                warnings.push(QuadratureWarning {
                    radius: r,
                    message: format!("r = {r} sits on a density jump with a singular kernel (k ≤ 1 − N)"),
                });
            }
        }
    }
    let out = crate::par::map_indices(radii.len(), |t| {
        let r = radii[t];
        (0..n)
            .filter(|&j| values[j] != 0.0)
            .map(|j| values[j] * kernel.cell_weight(r, grid.edge(j), grid.edge(j + 1)))
            .sum()
    });
    Ok((out, warnings))
}

/// `C₁ = 2^{N−2} σ_{N−1} Γ(b)Γ(c−a−b)/Γ(c−a)` for the bounded branch.
pub fn c1(params: &ModelParams) -> Result<f64> {
    if params.kernel_branch() != KernelBranch::Regular || params.dim() < 2 {
        return Err(Error::input("C1 is defined for 1 − N < k < 0 with N ≥ 2"));
    }
    let (a, b, c) = hyp_params(params);
    Ok(angular_prefactor(params) * gamma(b) * gamma(c - a - b) * rgamma(c - a))
}

/// `C₂` of the singular and critical branches.
pub fn c2(params: &ModelParams) -> Result<f64> {
    let (a, b, c) = hyp_params(params);
    let n = params.dim() as f64;
    match params.kernel_branch() {
        KernelBranch::Singular => Ok(angular_prefactor(params) * gamma(c - b) * gamma(a + b - c) * rgamma(a)),
        KernelBranch::Critical if params.dim() >= 2 => {
            let g = gamma(n / 2.0 - 0.5);
            let ratio = (n - 1.0) * gamma(n) / (2.0 * gamma((n + 1.0) / 2.0) * gamma((n + 1.0) / 2.0));
            Ok(angular_prefactor(params) * g * g * rgamma(n - 1.0) * ratio.max(1.0))
        }
        _ => Err(Error::input("C2 is defined for −N < k ≤ 1 − N with N ≥ 2")),
    }
}

fn hyp_params(params: &ModelParams) -> (f64, f64, f64) {
    let n = params.dim() as f64;
    (-params.k() / 2.0, (n - 1.0) / 2.0, n - 1.0)
}

fn angular_prefactor(params: &ModelParams) -> f64 {
    let n = params.dim();
    pow(2.0, n as f64 - 2.0) * sphere_area(n - 1)
}

/// Far-field amplification `T_k(r, R)` for `r > R`.
pub fn t_k(r: f64, support: f64, params: &ModelParams) -> Result<f64> {
    if !(r > support && support >= 0.0) {
        return Err(Error::input("T_k needs r > R ≥ 0"));
    }
    let ratio = (r + support) / (r - support);
    match params.kernel_branch() {
        KernelBranch::Singular => Ok(pow(ratio, 1.0 - params.k() - params.dim() as f64)),
        KernelBranch::Critical => Ok(1.0 + log(ratio)),
        KernelBranch::Regular => Err(Error::input("T_k is only used for k ≤ 1 − N")),
    }
}

/// One evaluation radius of the decay check.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayRow {
    pub r: f64,
    pub raw: f64,
    /// `raw / r^k` or `raw / (T_k r^k)`, to be compared with `bound`.
    pub upper_ratio: f64,
    pub bound: f64,
    /// `raw / ((r+1)^k M_ρ(1))`, must be ≥ 1.
    pub lower_ratio: f64,
    pub upper_ok: bool,
    pub lower_ok: bool,
}

/// Outcome of [`decay_envelope_check`]. The first row is the cell adjacent
/// to the support, where the estimate is least sharp.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayReport {
    pub rows: Vec<DecayRow>,
    pub upper_violations: usize,
    pub lower_violations: usize,
    pub max_upper_ratio: f64,
    pub min_lower_ratio: f64,
}

const ENVELOPE_TOL: f64 = 1e-6;

/// Checks the far-field upper bound and the `(|x|+1)^k` lower bound at every
/// cell centre outside `B_R`.
pub fn decay_envelope_check(
    profile: &PotentialProfile,
    rho: &RadialDensity,
    support: f64,
    params: &ModelParams,
) -> Result<DecayReport> {
    if params.dim() < 2 {
        return Err(Error::input("the envelope constants need N ≥ 2"));
    }
    if profile.grid() != rho.grid() {
        return Err(Error::input("potential and density grids differ"));
    }
    if !(support > 0.0) || profile.grid().r_max() < 4.0 * support {
        return Err(Error::input("need 0 < R and r_max ≥ 4R"));
    }
    if rho.support_radius(0.0) > support * (1.0 + 1e-12) {
        return Err(Error::input("density is not supported in B_R"));
    }
    let branch = params.kernel_branch();
    let bound = match branch {
        KernelBranch::Regular => c1(params)?,
        _ => c2(params)?,
    };
    let inner_mass = rho.mass_function(profile.grid().r_max().min(1.0))?;
    let k = params.k();
    let grid = profile.grid();
    let mut rows = Vec::new();
    for i in 0..grid.len() {
        let r = grid.center(i);
        if r <= support {
            continue;
        }
        let raw = profile.raw()[i];
        let envelope = match branch {
            KernelBranch::Regular => pow(r, k),
            _ => t_k(r, support, params)? * pow(r, k),
        };
        let upper_ratio = raw / envelope;
        let lower_ratio = raw / (pow(r + 1.0, k) * inner_mass);
        rows.push(DecayRow {
            r,
            raw,
            upper_ratio,
            bound,
            lower_ratio,
            upper_ok: upper_ratio <= bound * (1.0 + ENVELOPE_TOL),
            lower_ok: lower_ratio * (1.0 + ENVELOPE_TOL) >= 1.0,
        });
    }
    Ok(DecayReport {
        upper_violations: rows.iter().filter(|r| !r.upper_ok).count(),
        lower_violations: rows.iter().filter(|r| !r.lower_ok).count(),
        max_upper_ratio: rows.iter().map(|r| r.upper_ratio).fold(0.0, f64::max),
        min_lower_ratio: rows.iter().map(|r| r.lower_ratio).fold(f64::INFINITY, f64::min),
        rows,
    })
}

/// `K_{k,q,N}(H)` of the cross-range interaction estimate.
pub fn cross_range_k(level: f64, params: &ModelParams, q: f64) -> Result<f64> {
    let n = params.dim() as f64;
    if !(q >= 0.0 && q < params.m() / n) {
        return Err(Error::param("q", "must lie in [0, m/N)"));
    }
    if !(level >= 1.0 && level.is_finite()) {
        return Err(Error::param("H", "must be finite and ≥ 1"));
    }
    let k = params.k();
    Ok(match params.kernel_branch() {
        KernelBranch::Critical => pow(level, 1.0 - q) * (2.0 + log(1.0 + pow(level, q))) + pow(level, q * (n - 1.0)),
        _ => pow(level, 1.0 - q * (k + n)) + pow(level, -k * q),
    })
}

/// Free-function form of [`RieszOperator::cross_range_ratio`].
pub fn cross_range_ratio(rho: &RadialDensity, level: f64, params: &ModelParams, q: f64) -> Result<f64> {
    RieszOperator::new(params, rho.grid()).cross_range_ratio(rho, level, q)
}

/// `c_{N,s} = (2s−N)Γ(N/2−s)/(π^{N/2} 4^s Γ(s))`.
pub fn fractional_constant(dim: usize, s: f64) -> Result<f64> {
    let n = dim as f64;
    if dim == 0 || !(s > 0.0 && s < n / 2.0) {
        return Err(Error::param("s", "must lie in (0, N/2)"));
    }
    let value = (2.0 * s - n) * gamma(n / 2.0 - s) / (pow(core::f64::consts::PI, n / 2.0) * pow(4.0, s) * gamma(s));
    if !value.is_finite() {
        return Err(Error::param("s", "too close to N/2: Γ(N/2 − s) overflows"));
    }
    Ok(value)
}

/// The same constant written through `k = 2s − N`:
/// `kΓ(−k/2)/(π^{N/2} 2^{k+N} Γ((k+N)/2))`.
pub fn fractional_constant_k(dim: usize, k: f64) -> Result<f64> {
    let n = dim as f64;
    if dim == 0 || !(k > -n && k < 0.0) {
        return Err(Error::param("k", "must lie in (−N, 0)"));
    }
    let value = k * gamma(-k / 2.0) / (pow(core::f64::consts::PI, n / 2.0) * pow(2.0, k + n) * gamma((k + n) / 2.0));
    if !value.is_finite() {
        return Err(Error::param("k", "too close to 0: Γ(−k/2) overflows"));
    }
    Ok(value)
}
