//! Gauss hypergeometric function ₂F₁(a, b; c; z) on `0 ≤ z < 1`.
//!
//! Evaluation:
//! - `z ≤ 0.5`: the Gauss series Σ (a)ⱼ(b)ⱼ / ((c)ⱼ j!) zʲ.
//! - `z > 0.5`: the linear transformation to `w = 1 − z`, which turns
//!   F into two series in `w ≤ 0.5`. When `d = c − a − b` is an integer
//!   the two branches merge into the logarithmic forms (A&S 15.3.10–12).
//!
//! [`Gauss2F1`] precomputes the gamma-function coefficients for a fixed
//! parameter triple and accepts `1 − z` directly, which matters for the
//! Riesz kernel where `1 − z` is a square of a small quantity.

mod gamma;

pub use gamma::{beta, digamma, gamma, ln_gamma, rgamma};

use crate::error::{Error, Result};
use libm::{log, pow, round};

const SERIES_Z_MAX: f64 = 0.5;
const SERIES_EPS: f64 = 1e-17;
const SERIES_CAP: usize = 100_000;
/// Distance below which `c − a − b` is treated as an integer.
const INTEGER_GAP_TOL: f64 = 1e-10;
/// Inside this distance of an integer (but not at it) the two connection
/// branches cancel catastrophically; the Euler integral is used instead.
const NEAR_INTEGER_WINDOW: f64 = 0.05;

/// Plain Gauss series. Used for `|z| ≤ 0.5` where it converges at least
/// like 2^{-j}.
fn gauss_series(a: f64, b: f64, c: f64, z: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 0..SERIES_CAP {
        let jf = j as f64;
        term *= (a + jf) * (b + jf) / ((c + jf) * (jf + 1.0)) * z;
        sum += term;
        if term == 0.0 || (term.abs() <= SERIES_EPS * sum.abs() && j > 2) {
            break;
        }
    }
    sum
}

#[derive(Debug, Clone, Copy)]
enum NearOne {
    /// Non-integer gap `d`: F = A·F(a,b;1−d;w) + B·w^d·F(c−a,c−b;1+d;w).
    Generic {
        d: f64,
        coef_regular: f64,
        coef_singular: f64,
    },
    /// `d = 0`.
    LogZero { prefactor: f64 },
    /// `d = m ≥ 1`.
    LogPositive {
        m: usize,
        finite_prefactor: f64,
        log_prefactor: f64,
    },
    /// `d = −m ≤ −1`.
    LogNegative {
        m: usize,
        finite_prefactor: f64,
        log_prefactor: f64,
    },
    /// `d` close to an integer: graded quadrature of the Euler integral.
    EulerIntegral { inv_beta: f64 },
}

/// ₂F₁ with a fixed parameter triple, evaluated on `[0, 1)`.
#[derive(Debug, Clone, Copy)]
pub struct Gauss2F1 {
    a: f64,
    b: f64,
    c: f64,
    near_one: NearOne,
}

impl Gauss2F1 {
    /// Parameters must satisfy `a ≥ 0`, `b > 0`, `c > b` (the integral
    /// representation converges), checked here.
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        check_params(a, b, c)?;
        Ok(Self::unchecked(a, b, c))
    }

    /// No admissibility checks; `c` must not be a non-positive integer.
    pub(crate) fn unchecked(a: f64, b: f64, c: f64) -> Self {
        let d = c - a - b;
        let nearest = round(d);
        let near_one = if (d - nearest).abs() < INTEGER_GAP_TOL {
            let m = nearest.abs() as usize;
            let gc = gamma(c);
            if m == 0 {
                NearOne::LogZero {
                    prefactor: gc * rgamma(a) * rgamma(b),
                }
            } else if nearest > 0.0 {
                let mf = m as f64;
                NearOne::LogPositive {
                    m,
                    finite_prefactor: gamma(mf) * gc * rgamma(a + mf) * rgamma(b + mf),
                    log_prefactor: gc * rgamma(a) * rgamma(b),
                }
            } else {
                let mf = m as f64;
                NearOne::LogNegative {
                    m,
                    finite_prefactor: gamma(mf) * gc * rgamma(a) * rgamma(b),
                    log_prefactor: gc * rgamma(a - mf) * rgamma(b - mf),
                }
            }
        } else if (d - nearest).abs() < NEAR_INTEGER_WINDOW && b > 0.0 && c - b > 0.0 {
            NearOne::EulerIntegral {
                inv_beta: 1.0 / beta(b, c - b),
            }
        } else {
            let gc = gamma(c);
            NearOne::Generic {
                d,
                coef_regular: gc * gamma(d) * rgamma(c - a) * rgamma(c - b),
                coef_singular: gc * gamma(-d) * rgamma(a) * rgamma(b),
            }
        };
        Self { a, b, c, near_one }
    }

    pub fn params(&self) -> (f64, f64, f64) {
        (self.a, self.b, self.c)
    }

    /// F(z) for `0 ≤ z < 1`.
    pub fn eval(&self, z: f64) -> f64 {
        self.eval_complement(z, 1.0 - z)
    }

    /// F(z) with `w = 1 − z` supplied by the caller at full relative
    /// precision. Only `w` is used on the `z > 0.5` branch.
    pub fn eval_complement(&self, z: f64, w: f64) -> f64 {
        if z <= SERIES_Z_MAX {
            return gauss_series(self.a, self.b, self.c, z);
        }
        let (a, b, c) = (self.a, self.b, self.c);
        match self.near_one {
            NearOne::Generic {
                d,
                coef_regular,
                coef_singular,
            } => {
                let regular = if coef_regular == 0.0 {
                    0.0
                } else {
                    coef_regular * gauss_series(a, b, 1.0 - d, w)
                };
                let singular = if coef_singular == 0.0 {
                    0.0
                } else {
                    coef_singular * pow(w, d) * gauss_series(c - a, c - b, 1.0 + d, w)
                };
                regular + singular
            }
            NearOne::LogZero { prefactor } => prefactor * log_series(a, b, 0, w, |n| (a + n, b + n)),
            NearOne::LogPositive {
                m,
                finite_prefactor,
                log_prefactor,
            } => {
                let mf = m as f64;
                let finite = finite_sum(a, b, m, w) * finite_prefactor;
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                let tail = log_series(a + mf, b + mf, m, w, |n| (a + n + mf, b + n + mf));
                finite - sign * pow(w, mf) * log_prefactor * tail
            }
            NearOne::LogNegative {
                m,
                finite_prefactor,
                log_prefactor,
            } => {
                let mf = m as f64;
                let finite = finite_sum(a - mf, b - mf, m, w) * finite_prefactor * pow(w, -mf);
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                let tail = log_series(a, b, m, w, |n| (a + n, b + n));
                finite - sign * log_prefactor * tail
            }
            NearOne::EulerIntegral { inv_beta } => inv_beta * euler_integral(a, b, c, z, w),
        }
    }
}

/// ∫₀¹ (1−zt)^{−a} (1−t)^{c−b−1} t^{b−1} dt for `b > 0`, `c > b`.
///
/// Near t = 1 the factor `1 − zt = w + z(1−t)` varies on the scale `w`, so
/// the upper half is split geometrically from `u = 1 − t = w` outwards.
fn euler_integral(a: f64, b: f64, c: f64, z: f64, w: f64) -> f64 {
    use crate::quad::{GaussLegendre, TanhSinh};
    let de = TanhSinh::new(1.0 / 16.0);
    let gl = GaussLegendre::new(16);
    let e_tail = c - b - 1.0;
    let e_head = b - 1.0;
    let lower = de.integrate(0.0, 0.5, |p| {
        pow(1.0 - z * p.x, -a) * pow(p.from_a, e_head) * pow(1.0 - p.x, e_tail)
    });
    let upper_integrand = |u: f64| pow(w + z * u, -a) * pow(u, e_tail) * pow(1.0 - u, e_head);
    let first = w.min(0.5);
    let mut upper = de.integrate(0.0, first, |p| {
        pow(w + z * p.x, -a) * pow(p.from_a, e_tail) * pow(1.0 - p.x, e_head)
    });
    let mut left = first;
    while left < 0.5 {
        let right = (4.0 * left).min(0.5);
        upper += gl.integrate(left, right, upper_integrand);
        left = right;
    }
    lower + upper
}

/// Σ_{n<m} (p)ₙ(q)ₙ / (n! (1−m)ₙ) wⁿ.
fn finite_sum(p: f64, q: f64, m: usize, w: f64) -> f64 {
    let mf = m as f64;
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..m.saturating_sub(1) {
        let nf = n as f64;
        term *= (p + nf) * (q + nf) / ((nf + 1.0) * (1.0 - mf + nf)) * w;
        sum += term;
    }
    sum
}

/// Logarithmic series shared by the integer-gap forms:
///
/// Σₙ (p)ₙ(q)ₙ / (n! (n+m)!) wⁿ · [ψ(n+1) + ψ(n+m+1) − ψ(α) − ψ(β) − ln w]·s
///
/// where (α, β) = `digamma_args(n)` and the bracket sign `s` is chosen so
/// that the `m = 0` case reads directly as A&S 15.3.10 and the `m ≥ 1`
/// cases need the leading minus applied by the caller.
fn log_series(p: f64, q: f64, m: usize, w: f64, digamma_args: impl Fn(f64) -> (f64, f64)) -> f64 {
    let ln_w = log(w);
    let mut coef = 1.0 / factorial(m);
    let (mut psi_n1, mut psi_nm1) = (digamma(1.0), digamma(m as f64 + 1.0));
    let (alpha0, beta0) = digamma_args(0.0);
    let (mut psi_alpha, mut psi_beta) = (digamma(alpha0), digamma(beta0));
    let mut sum = 0.0;
    for n in 0..SERIES_CAP {
        let nf = n as f64;
        let bracket = psi_n1 + psi_nm1 - psi_alpha - psi_beta - ln_w;
        let term = coef * bracket;
        // m = 0 form: F = pref Σ coef (2ψ(n+1) − ψ(a+n) − ψ(b+n) − ln w) wⁿ;
        // m ≥ 1 forms use [ln w − ψ(n+1) − ψ(n+m+1) + ψ(α) + ψ(β)] = −bracket.
        sum += if m == 0 { term } else { -term };
        if n > 2 && term.abs() <= SERIES_EPS * sum.abs() {
            break;
        }
        let (alpha, beta) = digamma_args(nf);
        coef *= (p + nf) * (q + nf) / ((nf + 1.0) * (nf + m as f64 + 1.0)) * w;
        psi_n1 += 1.0 / (nf + 1.0);
        psi_nm1 += 1.0 / (nf + m as f64 + 1.0);
        psi_alpha += 1.0 / alpha;
        psi_beta += 1.0 / beta;
    }
    sum
}

fn factorial(m: usize) -> f64 {
    (1..=m).fold(1.0, |acc, i| acc * i as f64)
}

fn check_params(a: f64, b: f64, c: f64) -> Result<()> {
    if !(a >= 0.0 && a.is_finite()) {
        return Err(Error::param("a", "must be finite and nonnegative"));
    }
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::param("b", "must be finite and positive"));
    }
    if !(c - b > 0.0 && c.is_finite()) {
        return Err(Error::param("c", "must satisfy c − b > 0"));
    }
    Ok(())
}

fn check_z(z: f64) -> Result<()> {
    if !(0.0..1.0).contains(&z) {
        return Err(Error::param("z", "must lie in [0, 1); use f21_limit for z = 1"));
    }
    Ok(())
}

/// ₂F₁(a, b; c; z) for `a ≥ 0`, `b > 0`, `c > b`, `0 ≤ z < 1`.
pub fn f21(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    check_z(z)?;
    if z == 0.0 || a == 0.0 {
        check_params(a, b, c)?;
        return Ok(1.0);
    }
    Ok(Gauss2F1::new(a, b, c)?.eval(z))
}

/// lim_{z↑1} F(a, b; c; z) = Γ(c)Γ(c−a−b) / (Γ(c−a)Γ(c−b)).
///
/// Requires `c > a + b` (finite limit) and positive gamma arguments. This
/// is weaker than `b > 1, c > 1`, which is not needed for the formula.
pub fn f21_limit(a: f64, b: f64, c: f64) -> Result<f64> {
    check_params(a, b, c)?;
    let gap = c - a - b;
    if gap <= 0.0 {
        return Err(Error::param("c", "must exceed a + b for a finite limit at z = 1"));
    }
    if a == 0.0 {
        return Ok(1.0);
    }
    Ok(gamma(c) * gamma(gap) * rgamma(c - a) * rgamma(c - b))
}

/// Right-hand side of F(a,b;c;z) = (1−z)^{c−a−b} F(c−a, c−b; c; z).
pub fn f21_transformed(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    check_z(z)?;
    check_params(a, b, c)?;
    if c - a <= 0.0 {
        return Err(Error::param("a", "must satisfy c − a > 0"));
    }
    let inner = f21(c - a, c - b, c, z)?;
    Ok(pow(1.0 - z, c - a - b) * inner)
}

/// dF/dz = (ab/c)(1−z)^{c−a−b−1} F(c−a, c−b; c+1; z).
pub fn f21_derivative(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    check_z(z)?;
    check_params(a, b, c)?;
    if c - a <= 0.0 {
        return Err(Error::param("a", "must satisfy c − a > 0"));
    }
    let inner = Gauss2F1::unchecked(c - a, c - b, c + 1.0).eval(z);
    Ok(a * b / c * pow(1.0 - z, c - a - b - 1.0) * inner)
}

/// H(a,b;c;z) = ∫₀¹ (1−zt)^{−a} (1−t)^{c−b−1} t^{b−1} dt = B(b, c−b)·F(a,b;c;z).
pub fn h_integral(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    Ok(beta(b, c - b) * f21(a, b, c, z)?)
}
