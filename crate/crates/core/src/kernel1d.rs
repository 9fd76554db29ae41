//! Exact cell integrals of `|t|^k` on a uniform 1D grid, `−1 < k < 0`.
//!
//! Both kernels are Toeplitz in the cell offset `d = i − j`. Far from the
//! diagonal the closed-form differences cancel badly (relative error grows
//! like `d²·ε`), so they are evaluated through the binomial expansion of the
//! same closed form instead.

use alloc::vec::Vec;
use libm::pow;

/// `Σ_{j≥1} C(p, 2j) ε^{2j}` (even part of `(1+ε)^p − 1`), `0 < ε ≤ 1/2`.
fn even_binomial_tail(p: f64, eps: f64) -> f64 {
    let e2 = eps * eps;
    let mut coef = p * (p - 1.0) / 2.0;
    let mut power = e2;
    let mut sum = 0.0;
    let mut j = 1.0;
    loop {
        let term = coef * power;
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() || j > 200.0 {
            break;
        }
        // C(p, 2j+2) = C(p, 2j)·(p−2j)(p−2j−1)/((2j+1)(2j+2))
        coef *= (p - 2.0 * j) * (p - 2.0 * j - 1.0) / ((2.0 * j + 1.0) * (2.0 * j + 2.0));
        power *= e2;
        j += 1.0;
    }
    sum
}

/// `Σ_{j≥0} C(q, 2j+1) ε^{2j+1}` (odd part of `(1+ε)^q`), `0 < ε ≤ 1/2`.
fn odd_binomial_sum(q: f64, eps: f64) -> f64 {
    let e2 = eps * eps;
    let mut coef = q;
    let mut power = eps;
    let mut sum = 0.0;
    let mut j = 0.0;
    loop {
        let term = coef * power;
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() || j > 200.0 {
            break;
        }
        // C(q, 2j+3) = C(q, 2j+1)·(q−2j−1)(q−2j−2)/((2j+2)(2j+3))
        coef *= (q - 2.0 * j - 1.0) * (q - 2.0 * j - 2.0) / ((2.0 * j + 2.0) * (2.0 * j + 3.0));
        power *= e2;
        j += 1.0;
    }
    sum
}

/// `∫_{cell i}∫_{cell j} |x − y|^k dx dy` for offset `d = i − j`.
///
/// Second difference of `G(t) = |t|^{k+2}/((k+1)(k+2))` with step `Δx`.
pub fn pair_weight(d: i64, dx: f64, k: f64) -> f64 {
    let p = k + 2.0;
    let scale = pow(dx, p) / ((k + 1.0) * (k + 2.0));
    let d = d.unsigned_abs();
    let shape = match d {
        0 => 2.0,
        1 => pow(2.0, p) - 2.0,
        _ => {
            let df = d as f64;
            2.0 * pow(df, p) * even_binomial_tail(p, 1.0 / df)
        }
    };
    scale * shape
}

/// `∫_{cell j} |x_i − y|^k dy` for the centre `x_i` of cell `i`, `d = i − j`.
pub fn point_weight(d: i64, dx: f64, k: f64) -> f64 {
    let q = k + 1.0;
    let scale = pow(dx, q) / q;
    let d = d.unsigned_abs();
    let shape = if d == 0 {
        2.0 * pow(0.5, q)
    } else {
        // (d+½)^q − (d−½)^q
        let df = d as f64;
        2.0 * pow(df, q) * odd_binomial_sum(q, 0.5 / df)
    };
    scale * shape
}

/// Toeplitz tables of [`pair_weight`] and [`point_weight`] for offsets
/// `0..n`.
#[derive(Debug, Clone)]
pub struct LineKernel {
    k: f64,
    dx: f64,
    pair: Vec<f64>,
    point: Vec<f64>,
}

impl LineKernel {
    pub fn new(n: usize, dx: f64, k: f64) -> Self {
        let pair = (0..n as i64).map(|d| pair_weight(d, dx, k)).collect();
        let point = (0..n as i64).map(|d| point_weight(d, dx, k)).collect();
        Self { k, dx, pair, point }
    }

    pub fn k(&self) -> f64 {
        self.k
    }
    pub fn dx(&self) -> f64 {
        self.dx
    }
    pub fn len(&self) -> usize {
        self.pair.len()
    }
    pub fn is_empty(&self) -> bool {
        self.pair.is_empty()
    }
    pub fn pair(&self, d: usize) -> f64 {
        self.pair[d]
    }
    pub fn point(&self, d: usize) -> f64 {
        self.point[d]
    }

    /// `(|·|^k ∗ ρ)(x_i)` for one cell centre, summing only over `range`
    /// (cells outside it must hold zero).
    pub fn point_potential(&self, values: &[f64], i: usize, range: core::ops::Range<usize>) -> f64 {
        range.map(|j| self.point[i.abs_diff(j)] * values[j]).sum()
    }

    /// `Δx Σ_i ρ_i (|·|^k ∗ ρ)(x_i)`: the double integral with the outer
    /// variable sampled at cell centres. This is the interaction whose
    /// discrete gradient is the centre potential.
    pub fn centre_double_integral(&self, values: &[f64]) -> f64 {
        let Some(first) = values.iter().position(|&v| v != 0.0) else {
            return 0.0;
        };
        let last = values.iter().rposition(|&v| v != 0.0).unwrap_or(first);
        let rows = crate::par::map_indices(last + 1 - first, |r| {
            let i = first + r;
            values[i] * self.point_potential(values, i, first..last + 1)
        });
        rows.iter().sum::<f64>() * self.dx
    }

    /// `∬ |x − y|^k ρ(x)ρ(y)` with rows summed in index order.
    pub fn double_integral(&self, values: &[f64]) -> f64 {
        let Some(first) = values.iter().position(|&v| v != 0.0) else {
            return 0.0;
        };
        let last = values.iter().rposition(|&v| v != 0.0).unwrap_or(first);
        let rows = crate::par::map_indices(last + 1 - first, |r| {
            let i = first + r;
            values[i]
                * (first..=last)
                    .map(|j| self.pair[i.abs_diff(j)] * values[j])
                    .sum::<f64>()
        });
        rows.iter().sum()
    }
}
