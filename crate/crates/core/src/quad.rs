//! Quadrature rules: Gauss–Legendre for smooth integrands and tanh-sinh
//! (double exponential) for integrands with endpoint singularities.

use alloc::vec::Vec;
use core::f64::consts::PI;
use libm::{cos, cosh, exp, sinh};

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// `n`-point rule; nodes from Newton iteration on Pₙ.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss–Legendre needs at least one node");
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        let nf = n as f64;
        for i in 0..n {
            let mut x = cos(PI * (i as f64 + 0.75) / (nf + 0.5));
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            nodes.push(x);
            weights.push(2.0 / ((1.0 - x * x) * dp * dp));
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

/// A sample point of the tanh-sinh rule on `[a, b]`: abscissa, distances to
/// both endpoints (exact, not computed as differences) and weight.
#[derive(Debug, Clone, Copy)]
pub struct DePoint {
    pub x: f64,
    pub from_a: f64,
    pub from_b: f64,
    pub weight: f64,
}

/// Tanh-sinh rule with step `h`. Endpoint distances are kept separately so
/// integrands singular at an endpoint can be evaluated without cancellation.
#[derive(Debug, Clone)]
pub struct TanhSinh {
    /// (fraction of the interval from a, fraction from b, unit weight)
    samples: Vec<(f64, f64, f64)>,
}

impl TanhSinh {
    pub fn new(h: f64) -> Self {
        let mut samples = Vec::new();
        let t_max = 6.5;
        let steps = (t_max / h) as i64;
        for j in -steps..=steps {
            let t = j as f64 * h;
            let y = 0.5 * PI * sinh(t);
            let e = exp(-2.0 * y.abs());
            // fractions of the interval measured from each end
            let (from_a, from_b) = if y >= 0.0 {
                (1.0 / (1.0 + e), e / (1.0 + e))
            } else {
                (e / (1.0 + e), 1.0 / (1.0 + e))
            };
            // (1/2)·(π/2)cosh t·sech² y·h, sech² y = 4e/(1+e)²
            let weight = 0.5 * 0.5 * PI * cosh(t) * 4.0 * e / ((1.0 + e) * (1.0 + e)) * h;
            if weight < 1e-300 || from_a == 0.0 || from_b == 0.0 {
                continue;
            }
            samples.push((from_a, from_b, weight));
        }
        Self { samples }
    }

    pub fn points(&self, a: f64, b: f64) -> impl Iterator<Item = DePoint> + '_ {
        let len = b - a;
        self.samples.iter().map(move |&(fa, fb, w)| {
            let from_a = fa * len;
            let from_b = fb * len;
            let x = if fa < fb { a + from_a } else { b - from_b };
            DePoint {
                x,
                from_a,
                from_b,
                weight: w * len,
            }
        })
    }

    pub fn integrate<F: FnMut(DePoint) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.points(a, b).map(|p| p.weight * f(p)).sum()
    }
}
