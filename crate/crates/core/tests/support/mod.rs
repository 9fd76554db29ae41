//! Independent oracles shared by the integration tests. Nothing here calls
//! into the crate's own quadrature or special-function code.
#![allow(dead_code)]

use std::f64::consts::PI;

/// Double-exponential quadrature; endpoint evaluations that overflow are
/// dropped (their weights are far below the target error).
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    quadrature::double_exponential::integrate(
        |x| {
            let v = f(x);
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        a,
        b,
        tol,
    )
    .integral
}

/// Area of the unit sphere in `R^dim` through libm's gamma.
pub fn sphere(dim: usize) -> f64 {
    let n = dim as f64;
    2.0 * PI.powf(n / 2.0) / libm::tgamma(n / 2.0)
}

/// `∫_{S^{N−1}} |r e − η ω|^k dω` by direct quadrature over the polar angle.
pub fn angular(r: f64, eta: f64, dim: usize, k: f64) -> f64 {
    let gap = (r - eta) * (r - eta);
    let f = |theta: f64| {
        let s = (0.5 * theta).sin();
        // |x − y|² = (r − η)² + 4rη sin²(θ/2), no cancellation near θ = 0
        (gap + 4.0 * r * eta * s * s).powf(0.5 * k) * theta.sin().powi(dim as i32 - 2)
    };
    if dim == 1 {
        return (r - eta).abs().powf(k) + (r + eta).powf(k);
    }
    // the peak at θ = 0 has width ~|r − η|/r; split there so both pieces
    // see it at an endpoint
    let split = ((r - eta).abs() / r.max(eta)).clamp(1e-6, 0.5);
    sphere(dim - 1) * (integrate(f, 0.0, split, 1e-14) + integrate(f, split, PI, 1e-14))
}

/// `∫ |x − y|^k ρ(y) dy` at `|x| = r` for a piecewise-constant radial
/// density given by cell `edges` and `values`.
pub fn raw_potential(edges: &[f64], values: &[f64], r: f64, dim: usize, k: f64) -> f64 {
    let n = dim as i32;
    let radial = |eta: f64| eta.powi(n - 1) * angular(r, eta, dim, k);
    let mut total = 0.0;
    for (j, &v) in values.iter().enumerate() {
        if v == 0.0 {
            continue;
        }
        let (a, b) = (edges[j], edges[j + 1]);
        let part = if a < r && r < b {
            integrate(radial, a, r, 1e-13) + integrate(radial, r, b, 1e-13)
        } else {
            integrate(radial, a, b, 1e-13)
        };
        total += v * part;
    }
    total
}

/// `B(b, c−b)·₂F₁(a, b; c; z)` through the Euler integral
/// `∫₀¹ t^{b−1}(1−t)^{c−b−1}(1−zt)^{−a} dt`.
pub fn euler_h(a: f64, b: f64, c: f64, z: f64) -> f64 {
    let d = c - b;
    // t = s^{1/b} on [0, ½] and 1 − t = s^{1/d} on [½, 1] absorb the
    // endpoint powers into the measure
    let left = |s: f64| {
        let t = s.powf(1.0 / b);
        (1.0 - t).powf(d - 1.0) * (1.0 - z * t).powf(-a) / b
    };
    let right = |s: f64| {
        let t = 1.0 - s.powf(1.0 / d);
        t.powf(b - 1.0) * (1.0 - z * t).powf(-a) / d
    };
    integrate(left, 0.0, 0.5f64.powf(b), 1e-15) + integrate(right, 0.0, 0.5f64.powf(d), 1e-15)
}

pub fn beta(p: f64, q: f64) -> f64 {
    libm::tgamma(p) * libm::tgamma(q) / libm::tgamma(p + q)
}

/// ₂F₁ through the Euler integral.
pub fn f21(a: f64, b: f64, c: f64, z: f64) -> f64 {
    euler_h(a, b, c, z) / beta(b, c - b)
}
