//! Gamma, reciprocal gamma, log-gamma and digamma for real arguments.
//!
//! Lanczos approximation with g = 7 and nine coefficients; relative error is
//! below 1e-14 on the positive axis. Negative arguments go through the
//! reflection formula.

use core::f64::consts::PI;
use libm::{exp, floor, log, pow, sin, sqrt, tan};

const LANCZOS_G: f64 = 7.0;
// published digits, kept verbatim
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum(x: f64) -> f64 {
    // x is the shifted argument (Γ(x + 1) form)
    let mut sum = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        sum += c / (x + i as f64);
    }
    sum
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == floor(x)
}

/// Γ(x). Returns `f64::INFINITY` at the poles `x = 0, −1, −2, …`.
pub fn gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return f64::INFINITY;
    }
    if x < 0.5 {
        return PI / (sin(PI * x) * gamma(1.0 - x));
    }
    if x == floor(x) && x <= 23.0 {
        // exact for small integers
        let mut acc = 1.0;
        let mut k = 2.0;
        while k < x {
            acc *= k;
            k += 1.0;
        }
        return acc;
    }
    let xm = x - 1.0;
    let t = xm + LANCZOS_G + 0.5;
    // split the power to delay overflow
    let half = pow(t, 0.5 * (xm + 0.5));
    sqrt(2.0 * PI) * half * (half * exp(-t)) * lanczos_sum(xm)
}

/// 1/Γ(x), which is zero at the poles of Γ.
pub fn rgamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    if x < 0.5 {
        return sin(PI * x) * gamma(1.0 - x) / PI;
    }
    1.0 / gamma(x)
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x < 0.5 {
        return log(PI / sin(PI * x)) - ln_gamma(1.0 - x);
    }
    let xm = x - 1.0;
    let t = xm + LANCZOS_G + 0.5;
    0.5 * log(2.0 * PI) + (xm + 0.5) * log(t) - t + log(lanczos_sum(xm))
}

/// Beta function B(p, q) = Γ(p)Γ(q)/Γ(p+q) for p, q > 0.
pub fn beta(p: f64, q: f64) -> f64 {
    if p + q < 100.0 {
        gamma(p) * gamma(q) * rgamma(p + q)
    } else {
        exp(ln_gamma(p) + ln_gamma(q) - ln_gamma(p + q))
    }
}

/// Digamma ψ(x) = Γ'(x)/Γ(x). Infinite at the poles.
pub fn digamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return f64::NAN;
    }
    if x < 0.0 {
        return digamma(1.0 - x) - PI / tan(PI * x);
    }
    let mut acc = 0.0;
    let mut y = x;
    while y < 10.0 {
        acc -= 1.0 / y;
        y += 1.0;
    }
    // asymptotic series with Bernoulli numbers B2..B12
    let inv2 = 1.0 / (y * y);
    let tail = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * 691.0 / 32760.0)))));
    acc + log(y) - 0.5 / y - tail
}
