//! Parameters, uniform grids and piecewise-constant densities.
//!
//! Densities are finite-volume objects: one nonnegative value per cell,
//! constant across the cell. Radial densities carry the dimension `N` and
//! integrate against the exact shell volumes `(e_{i+1}^N − e_i^N)/N`.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;
use libm::pow;

use crate::error::{Error, Result};
use crate::hypergeom::rgamma;

/// Mass tolerance behind the `normalized` flag.
pub const NORMALIZATION_TOL: f64 = 1e-10;
pub const MIN_CELLS: usize = 8;

/// Surface measure of the unit sphere in ℝᴺ, `2π^{N/2}/Γ(N/2)`.
///
/// `sphere_area(1) = 2` counts the two points of S⁰; `sphere_area(0) = 0`.
pub fn sphere_area(dim: usize) -> f64 {
    if dim == 0 {
        return 0.0;
    }
    let half = dim as f64 / 2.0;
    2.0 * pow(PI, half) * rgamma(half)
}

/// Competition between diffusion and attraction under dilations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    AttractionDominated,
    FairCompetition,
    DiffusionDominated,
}

/// Regularity threshold `m*`: finite only when `k < 1 − N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MStar {
    Finite(f64),
    Unbounded,
}

impl MStar {
    /// True when `m < m*`.
    pub fn exceeds(&self, m: f64) -> bool {
        match *self {
            MStar::Finite(v) => m < v,
            MStar::Unbounded => true,
        }
    }
}

/// Position of `k` relative to `1 − N`, which decides whether the angular
/// kernel stays bounded on the diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelBranch {
    /// `1 − N < k < 0`: bounded kernel.
    Regular,
    /// `k = 1 − N`: logarithmic singularity.
    Critical,
    /// `−N < k < 1 − N`: algebraic singularity `|r − η|^{k+N−1}`.
    Singular,
}

const BRANCH_TOL: f64 = 1e-12;

/// Physical parameters `(N, k, m, χ)` and derived exponents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    dim: usize,
    k: f64,
    m: f64,
    chi: f64,
    s: f64,
    m_c: f64,
    m_star: MStar,
    sigma: f64,
}

impl ModelParams {
    pub fn new(dim: usize, k: f64, m: f64, chi: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::param("N", "must be a positive integer"));
        }
        let n = dim as f64;
        if !(k > -n && k < 0.0) {
            return Err(Error::param("k", "must lie in (−N, 0)"));
        }
        if !(m > 1.0 && m.is_finite()) {
            return Err(Error::param("m", "must be finite and > 1"));
        }
        if !(chi > 0.0 && chi.is_finite()) {
            return Err(Error::param("chi", "must be finite and positive"));
        }
        let m_star = if k < 1.0 - n - BRANCH_TOL {
            MStar::Finite((2.0 - k - n) / (1.0 - k - n))
        } else {
            MStar::Unbounded
        };
        Ok(Self {
            dim,
            k,
            m,
            chi,
            s: (k + n) / 2.0,
            m_c: 1.0 - k / n,
            m_star,
            sigma: sphere_area(dim),
        })
    }

    /// Same `N`, `k`, `m` with a different interaction strength.
    pub fn with_chi(&self, chi: f64) -> Result<Self> {
        Self::new(self.dim, self.k, self.m, chi)
    }

    pub fn dim(&self) -> usize {
        self.dim
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
    /// Fractional order `s = (k + N)/2`.
    pub fn s(&self) -> f64 {
        self.s
    }
    pub fn m_c(&self) -> f64 {
        self.m_c
    }
    pub fn m_star(&self) -> MStar {
        self.m_star
    }
    /// `σ_N`, surface measure of the unit sphere.
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn regime(&self) -> Regime {
        let gap = self.m - self.m_c;
        if gap.abs() <= 1e-12 * self.m_c {
            Regime::FairCompetition
        } else if gap > 0.0 {
            Regime::DiffusionDominated
        } else {
            Regime::AttractionDominated
        }
    }

    pub fn kernel_branch(&self) -> KernelBranch {
        let critical = 1.0 - self.dim as f64;
        if (self.k - critical).abs() <= BRANCH_TOL {
            KernelBranch::Critical
        } else if self.k > critical {
            KernelBranch::Regular
        } else {
            KernelBranch::Singular
        }
    }

    /// Minimisers are stationary states in the weak sense only for `m < m*`.
    pub fn stationarity_guaranteed(&self) -> bool {
        self.regime() == Regime::DiffusionDominated && self.m_star.exceeds(self.m)
    }
}

/// Uniform radial grid on `[0, r_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    r_max: f64,
    n: usize,
}

impl RadialGrid {
    pub fn new(r_max: f64, n: usize) -> Result<Self> {
        if !(r_max > 0.0 && r_max.is_finite()) {
            return Err(Error::param("r_max", "must be finite and positive"));
        }
        if n < MIN_CELLS {
            return Err(Error::param("n", format!("must be at least {MIN_CELLS}")));
        }
        Ok(Self { r_max, n })
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }
    pub fn len(&self) -> usize {
        self.n
    }
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }
    pub fn dr(&self) -> f64 {
        self.r_max / self.n as f64
    }
    pub fn edge(&self, i: usize) -> f64 {
        if i == self.n {
            self.r_max
        } else {
            self.r_max * (i as f64 / self.n as f64)
        }
    }
    pub fn center(&self, i: usize) -> f64 {
        self.r_max * ((i as f64 + 0.5) / self.n as f64)
    }
    pub fn centers(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.center(i)).collect()
    }
    pub fn edges(&self) -> Vec<f64> {
        (0..=self.n).map(|i| self.edge(i)).collect()
    }

    /// `∫_{cell i} r^{N−1} dr`.
    pub fn shell_weight(&self, i: usize, dim: usize) -> f64 {
        shell(self.edge(i), self.edge(i + 1), dim)
    }

    pub fn shell_weights(&self, dim: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.shell_weight(i, dim)).collect()
    }

    /// Same cell count, radii scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            r_max: self.r_max * factor,
            n: self.n,
        }
    }
}

/// `∫_lo^hi r^{N−1} dr = (hi^N − lo^N)/N`.
pub(crate) fn shell(lo: f64, hi: f64, dim: usize) -> f64 {
    match dim {
        1 => hi - lo,
        2 => 0.5 * (hi - lo) * (hi + lo),
        3 => (hi - lo) * (hi * hi + hi * lo + lo * lo) / 3.0,
        _ => (pow(hi, dim as f64) - pow(lo, dim as f64)) / dim as f64,
    }
}

fn check_values(values: &[f64], n: usize) -> Result<()> {
    if values.len() != n {
        return Err(Error::input(format!("expected {n} cell values, got {}", values.len())));
    }
    if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v >= 0.0)) {
        return Err(Error::input(format!(
            "density must be finite and nonnegative; cell {i} holds {v}"
        )));
    }
    Ok(())
}

/// Radially symmetric density in ℝᴺ, piecewise constant on a [`RadialGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct RadialDensity {
    grid: RadialGrid,
    dim: usize,
    values: Vec<f64>,
    normalized: bool,
}

impl RadialDensity {
    pub fn new(grid: RadialGrid, dim: usize, values: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::param("N", "must be a positive integer"));
        }
        check_values(&values, grid.len())?;
        let mut rho = Self {
            grid,
            dim,
            values,
            normalized: false,
        };
        rho.normalized = (rho.mass() - 1.0).abs() <= NORMALIZATION_TOL;
        Ok(rho)
    }

    /// Samples `f` at the cell centres.
    pub fn from_fn(grid: RadialGrid, dim: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.centers().into_iter().map(f).collect();
        Self::new(grid, dim, values)
    }

    /// Unit-mass indicator of `B_R`; cells cut by the sphere get the exact
    /// volume fraction.
    pub fn uniform_ball(grid: RadialGrid, dim: usize, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius <= grid.r_max()) {
            return Err(Error::param("radius", "must lie in (0, r_max]"));
        }
        let height = dim as f64 / (sphere_area(dim) * pow(radius, dim as f64));
        let values = (0..grid.len())
            .map(|i| {
                let (lo, hi) = (grid.edge(i), grid.edge(i + 1));
                if hi <= radius {
                    height
                } else if lo >= radius {
                    0.0
                } else {
                    height * shell(lo, radius, dim) / shell(lo, hi, dim)
                }
            })
            .collect();
        Self::new(grid, dim, values)
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn require_normalized(&self) -> Result<()> {
        if self.normalized {
            Ok(())
        } else {
            Err(Error::input(format!(
                "density must have unit mass (mass = {})",
                self.mass()
            )))
        }
    }

    /// Copy rescaled to unit mass.
    pub fn normalize(&self) -> Result<Self> {
        let mass = self.mass();
        if !(mass > 0.0) {
            return Err(Error::input("cannot normalize a zero density"));
        }
        Self::new(
            self.grid.clone(),
            self.dim,
            self.values.iter().map(|v| v / mass).collect(),
        )
    }

    pub fn scale(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.grid.clone(),
            self.dim,
            self.values.iter().map(|v| v * factor).collect(),
        )
    }

    pub fn mass(&self) -> f64 {
        self.power_integral(1.0)
    }

    /// `∫ ρ^p dx`.
    pub fn power_integral(&self, p: f64) -> f64 {
        let sigma = sphere_area(self.dim);
        let sum: f64 = self
            .values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v > 0.0)
            .map(|(i, &v)| if p == 1.0 { v } else { pow(v, p) } * self.grid.shell_weight(i, self.dim))
            .sum();
        sigma * sum
    }

    /// `‖ρ‖_p`, or the essential supremum for `p = ∞`.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        if p.is_infinite() && p > 0.0 {
            return Ok(self.values.iter().cloned().fold(0.0, f64::max));
        }
        if !(p >= 1.0) {
            return Err(Error::param("p", "must be ≥ 1"));
        }
        Ok(pow(self.power_integral(p), 1.0 / p))
    }

    /// `M_ρ(R) = ∫_{B_R} ρ dx`, with the exact partial shell for the cut cell.
    pub fn mass_function(&self, radius: f64) -> Result<f64> {
        if !(radius >= 0.0 && radius <= self.grid.r_max()) {
            return Err(Error::param("R", "must lie in [0, r_max]"));
        }
        let mut sum = 0.0;
        for (i, &v) in self.values.iter().enumerate() {
            let lo = self.grid.edge(i);
            if lo >= radius {
                break;
            }
            let hi = self.grid.edge(i + 1).min(radius);
            sum += v * shell(lo, hi, self.dim);
        }
        Ok(sphere_area(self.dim) * sum)
    }

    /// First index `i` with `ρ_{i+1} > ρ_i`, if any.
    pub fn first_increase(&self) -> Option<usize> {
        self.values.windows(2).position(|w| w[1] > w[0])
    }

    /// Largest positive jump `max(ρ_{i+1} − ρ_i, 0)`.
    pub fn monotone_defect(&self) -> f64 {
        self.values
            .windows(2)
            .map(|w| (w[1] - w[0]).max(0.0))
            .fold(0.0, f64::max)
    }

    /// Radius `A_H` of the superlevel set `{ρ ≥ H}` of a non-increasing profile.
    pub fn level_set_radius(&self, level: f64) -> Result<f64> {
        if !(level > 0.0) {
            return Err(Error::param("H", "must be positive"));
        }
        if let Some(i) = self.first_increase() {
            return Err(Error::input(format!(
                "density is not non-increasing: ρ[{}] = {} < ρ[{}] = {} at r = {}",
                i,
                self.values[i],
                i + 1,
                self.values[i + 1],
                self.grid.center(i + 1)
            )));
        }
        let count = self.values.iter().take_while(|&&v| v >= level).count();
        Ok(self.grid.edge(count))
    }

    /// Outer edge of the last cell with `ρ > threshold`.
    pub fn support_radius(&self, threshold: f64) -> f64 {
        match self.values.iter().rposition(|&v| v > threshold) {
            Some(i) => self.grid.edge(i + 1),
            None => 0.0,
        }
    }

    /// `ρ^λ(x) = λ^N ρ(λx)` represented exactly on the grid scaled by `1/λ`.
    pub fn dilate(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::param("lambda", "must be finite and positive"));
        }
        let height = pow(lambda, self.dim as f64);
        let mut out = Self {
            grid: self.grid.scaled(1.0 / lambda),
            dim: self.dim,
            values: self.values.iter().map(|v| v * height).collect(),
            normalized: self.normalized,
        };
        out.normalized = (out.mass() - 1.0).abs() <= NORMALIZATION_TOL;
        Ok(out)
    }

    /// Dilation followed by conservative resampling onto `target`.
    pub fn dilate_onto(&self, lambda: f64, target: &RadialGrid) -> Result<Self> {
        self.dilate(lambda)?.resample(target)
    }

    /// Conservative transfer onto another radial grid: each target cell gets
    /// the exact mass of the source pieces it overlaps. Mass beyond the
    /// target's `r_max` is an error.
    pub fn resample(&self, target: &RadialGrid) -> Result<Self> {
        if *target == self.grid {
            return Ok(self.clone());
        }
        let dim = self.dim;
        let mut out = alloc::vec![0.0; target.len()];
        let mut lost = 0.0;
        let mut j = 0;
        for (i, &v) in self.values.iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            let (lo, hi) = (self.grid.edge(i), self.grid.edge(i + 1));
            if hi > target.r_max() {
                lost += v * shell(lo.max(target.r_max()), hi, dim);
            }
            while j > 0 && target.edge(j) > lo {
                j -= 1;
            }
            while j < target.len() && target.edge(j + 1) <= lo {
                j += 1;
            }
            let mut t = j;
            while t < target.len() && target.edge(t) < hi {
                let a = lo.max(target.edge(t));
                let b = hi.min(target.edge(t + 1));
                if b > a {
                    out[t] += v * shell(a, b, dim);
                }
                t += 1;
            }
        }
        let total = self.mass();
        if lost * sphere_area(dim) > 1e-14 * total.max(f64::MIN_POSITIVE) {
            return Err(Error::input(format!(
                "resampling onto r_max = {} would drop mass {:e}",
                target.r_max(),
                lost * sphere_area(dim)
            )));
        }
        for (t, v) in out.iter_mut().enumerate() {
            *v /= target.shell_weight(t, dim);
        }
        Self::new(target.clone(), dim, out)
    }

    /// `∫ |ρ − other| dx`, resampling `other` onto this grid if needed.
    pub fn l1_distance(&self, other: &Self) -> Result<f64> {
        if other.dim != self.dim {
            return Err(Error::input("dimension mismatch"));
        }
        let other = other.resample(&self.grid)?;
        let sigma = sphere_area(self.dim);
        Ok(sigma
            * self
                .values
                .iter()
                .zip(other.values())
                .enumerate()
                .map(|(i, (a, b))| (a - b).abs() * self.grid.shell_weight(i, self.dim))
                .sum::<f64>())
    }

    /// Even line density on `[−r_max, r_max]` (N = 1 only).
    pub fn to_line(&self) -> Result<LineDensity> {
        if self.dim != 1 {
            return Err(Error::input("only N = 1 radial profiles map to line densities"));
        }
        let n = self.grid.len();
        let grid = LineGrid::new(self.grid.r_max(), 2 * n)?;
        let values = self.values.iter().rev().chain(self.values.iter()).cloned().collect();
        LineDensity::new(grid, values)
    }
}

/// Uniform grid of `n` cells on `[−L, L]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LineGrid {
    half_width: f64,
    n: usize,
}

impl LineGrid {
    pub fn new(half_width: f64, n: usize) -> Result<Self> {
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::param("L", "must be finite and positive"));
        }
        if n < MIN_CELLS {
            return Err(Error::param("n", format!("must be at least {MIN_CELLS}")));
        }
        Ok(Self { half_width, n })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }
    pub fn len(&self) -> usize {
        self.n
    }
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }
    pub fn dx(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }
    pub fn edge(&self, i: usize) -> f64 {
        let frac = i as f64 / self.n as f64;
        self.half_width * (2.0 * frac - 1.0)
    }
    pub fn center(&self, i: usize) -> f64 {
        let frac = (i as f64 + 0.5) / self.n as f64;
        self.half_width * (2.0 * frac - 1.0)
    }
    pub fn centers(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.center(i)).collect()
    }
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            half_width: self.half_width * factor,
            n: self.n,
        }
    }
}

/// Density on the real line, piecewise constant on a [`LineGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct LineDensity {
    grid: LineGrid,
    values: Vec<f64>,
    normalized: bool,
}

impl LineDensity {
    pub fn new(grid: LineGrid, values: Vec<f64>) -> Result<Self> {
        check_values(&values, grid.len())?;
        let mut rho = Self {
            grid,
            values,
            normalized: false,
        };
        rho.normalized = (rho.mass() - 1.0).abs() <= NORMALIZATION_TOL;
        Ok(rho)
    }

    pub fn from_fn(grid: LineGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.centers().into_iter().map(f).collect();
        Self::new(grid, values)
    }

    /// Unit-mass indicator of `[a, b]` with exact cell fractions.
    pub fn uniform(grid: LineGrid, a: f64, b: f64) -> Result<Self> {
        if !(a < b && a >= -grid.half_width() && b <= grid.half_width()) {
            return Err(Error::input("interval must be nonempty and inside the grid"));
        }
        let height = 1.0 / (b - a);
        let dx = grid.dx();
        let values = (0..grid.len())
            .map(|i| {
                let overlap = grid.edge(i + 1).min(b) - grid.edge(i).max(a);
                height * overlap.max(0.0) / dx
            })
            .collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &LineGrid {
        &self.grid
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn require_normalized(&self) -> Result<()> {
        if self.normalized {
            Ok(())
        } else {
            Err(Error::input(format!(
                "density must have unit mass (mass = {})",
                self.mass()
            )))
        }
    }

    pub fn mass(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.dx()
    }

    pub fn power_integral(&self, p: f64) -> f64 {
        self.values
            .iter()
            .filter(|v| **v > 0.0)
            .map(|&v| if p == 1.0 { v } else { pow(v, p) })
            .sum::<f64>()
            * self.grid.dx()
    }

    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        if p.is_infinite() && p > 0.0 {
            return Ok(self.values.iter().cloned().fold(0.0, f64::max));
        }
        if !(p >= 1.0) {
            return Err(Error::param("p", "must be ≥ 1"));
        }
        Ok(pow(self.power_integral(p), 1.0 / p))
    }

    pub fn normalize(&self) -> Result<Self> {
        let mass = self.mass();
        if !(mass > 0.0) {
            return Err(Error::input("cannot normalize a zero density"));
        }
        Self::new(self.grid.clone(), self.values.iter().map(|v| v / mass).collect())
    }

    pub fn scale(&self, factor: f64) -> Result<Self> {
        Self::new(self.grid.clone(), self.values.iter().map(|v| v * factor).collect())
    }

    pub fn center_of_mass(&self) -> f64 {
        let mass: f64 = self.values.iter().sum();
        if mass == 0.0 {
            return 0.0;
        }
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| v * self.grid.center(i))
            .sum::<f64>()
            / mass
    }

    /// `ρ^λ(x) = λ ρ(λx)` on the grid scaled by `1/λ`.
    pub fn dilate(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::param("lambda", "must be finite and positive"));
        }
        Self::new(
            self.grid.scaled(1.0 / lambda),
            self.values.iter().map(|v| v * lambda).collect(),
        )
    }

    /// Conservative transfer of `x ↦ ρ(x − shift)` onto `target`.
    pub fn resample_shifted(&self, target: &LineGrid, shift: f64) -> Result<Self> {
        let mut out = alloc::vec![0.0; target.len()];
        let mut lost = 0.0;
        let tdx = target.dx();
        for (i, &v) in self.values.iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            let lo = self.grid.edge(i) + shift;
            let hi = self.grid.edge(i + 1) + shift;
            let clipped = hi.min(target.half_width()) - lo.max(-target.half_width());
            lost += v * ((hi - lo) - clipped.max(0.0));
            let first = libm::floor((lo + target.half_width()) / tdx).max(0.0) as usize;
            let mut t = first.min(target.len());
            while t < target.len() && target.edge(t) < hi {
                let overlap = hi.min(target.edge(t + 1)) - lo.max(target.edge(t));
                if overlap > 0.0 {
                    out[t] += v * overlap;
                }
                t += 1;
            }
        }
        if lost > 1e-14 * self.mass().max(f64::MIN_POSITIVE) {
            return Err(Error::input(format!(
                "resampling would drop mass {lost:e} outside [−L, L]"
            )));
        }
        for v in &mut out {
            *v /= tdx;
        }
        Self::new(target.clone(), out)
    }

    pub fn resample(&self, target: &LineGrid) -> Result<Self> {
        if *target == self.grid {
            return Ok(self.clone());
        }
        self.resample_shifted(target, 0.0)
    }

    /// Translate so that the centre of mass sits at the origin.
    pub fn centered(&self) -> Result<Self> {
        let com = self.center_of_mass();
        if com == 0.0 {
            return Ok(self.clone());
        }
        self.resample_shifted(&self.grid, -com)
    }

    /// Symmetric-decreasing rearrangement of the cell values: sorted in
    /// descending order and dealt out from the middle, right then left.
    /// Same multiset of values, so mass and every Lᵖ norm are unchanged.
    pub fn rearrange(&self) -> Self {
        let n = self.values.len();
        let mut sorted = self.values.clone();
        sorted.sort_by(|a, b| b.total_cmp(a));
        let mut out = alloc::vec![0.0; n];
        // centre cell for odd n, right-of-centre for even n
        let mid = n / 2;
        for (rank, v) in sorted.into_iter().enumerate() {
            let step = rank.div_ceil(2);
            let idx = if n % 2 == 1 {
                if rank % 2 == 0 {
                    mid + step
                } else {
                    mid - step
                }
            } else if rank % 2 == 0 {
                mid + step
            } else {
                mid - step
            };
            out[idx] = v;
        }
        Self {
            grid: self.grid.clone(),
            values: out,
            normalized: self.normalized,
        }
    }

    /// `∫ |ρ − other| dx` after resampling `other` onto this grid.
    pub fn l1_distance(&self, other: &Self) -> Result<f64> {
        let other = other.resample(&self.grid)?;
        Ok(self
            .values
            .iter()
            .zip(other.values())
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
            * self.grid.dx())
    }

    /// Outermost edges of the cells with `ρ > threshold`.
    pub fn support(&self, threshold: f64) -> Option<(f64, f64)> {
        let first = self.values.iter().position(|&v| v > threshold)?;
        let last = self.values.iter().rposition(|&v| v > threshold)?;
        Some((self.grid.edge(first), self.grid.edge(last + 1)))
    }
}
