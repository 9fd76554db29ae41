//! Numerical core for stationary states of the aggregation-diffusion equation
//!
//! ```text
//! ∂t ρ = Δρ^m + χ ∇·(ρ ∇S_k),   S_k = W_k ∗ ρ,   W_k(x) = |x|^k / k,   −N < k < 0
//! ```
//!
//! in the diffusion-dominated regime `m > m_c = 1 − k/N`.
//!
//! The crate is `no_std` (with `alloc`). Enabling the default `parallel`
//! feature pulls in `std` and rayon for the O(n²) potential assemblies;
//! results are bit-identical with and without it.
//!
//! Module map:
//! - [`model`]: parameters, uniform grids, piecewise-constant densities.
//! - [`hypergeom`]: gamma family and the Gauss function ₂F₁ on `[0, 1)`.
//! - [`riesz`]: radial Riesz potentials, far-field estimates, cross-range diagnostic.
//! - [`energy`]: free energy, its components and the HLS ratio.
//! - [`stationary`]: Euler–Lagrange fixed-point solver and residual checks.
//! - [`evolution`]: 1D finite-volume gradient-flow simulator.
#![cfg_attr(not(any(feature = "std", test)), no_std)]
// `!(x > 0.0)` is deliberate: it rejects NaN along with the range.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod error;
mod par;

pub mod energy;
pub mod evolution;
pub mod hypergeom;
pub mod kernel1d;
pub mod model;
pub mod quad;
pub mod riesz;
pub mod stationary;

pub use error::{Error, Result};
pub use model::{LineDensity, LineGrid, ModelParams, RadialDensity, RadialGrid, Regime};
