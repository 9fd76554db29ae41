//! Invariant families behind `aggdiff verify`. Each check is a cheap,
//! seeded instance of a property the library guarantees.

use std::f64::consts::PI;
use std::fmt::Write as _;

use aggdiff_core::energy::{free_energy, hls_ratio};
use aggdiff_core::evolution::{evolve, evolve_with, log_log_slope, EvolutionConfig, FlowParams};
use aggdiff_core::hypergeom::{f21, f21_derivative, f21_limit, f21_transformed, Gauss2F1};
use aggdiff_core::riesz::{c1, c2, cross_range_k, decay_envelope_check, raw_riesz_at, riesz_potential};
use aggdiff_core::stationary::{
    dilation_scan, minimality_check_1d, pointwise_inequality, solve_stationary, SolverConfig,
};
use aggdiff_core::{LineDensity, LineGrid, ModelParams, RadialDensity, RadialGrid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SUITES: &[&str] = &["hypergeom", "riesz", "energy", "stationary", "evolution"];

#[derive(Debug, Clone)]
pub struct Check {
    pub suite: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(suite: &'static str, name: &'static str, passed: bool, detail: String) -> Check {
    Check {
        suite,
        name,
        passed,
        detail,
    }
}

/// Runs one suite, or all of them for `"all"`.
pub fn run(suite: &str, seed: u64) -> anyhow::Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match suite {
        "hypergeom" => hypergeom(&mut rng),
        "riesz" => riesz(&mut rng),
        "energy" => energy(&mut rng),
        "stationary" => stationary(),
        "evolution" => evolution(),
        "all" => {
            let mut out = Vec::new();
            for s in SUITES {
                out.extend(run(s, seed)?);
            }
            Ok(out)
        }
        other => anyhow::bail!("unknown suite {other:?}; expected one of {} or all", SUITES.join(", ")),
    }
}

pub fn table(checks: &[Check]) -> String {
    let width = checks
        .iter()
        .map(|c| c.suite.len() + c.name.len() + 1)
        .max()
        .unwrap_or(0);
    let mut out = String::new();
    for c in checks {
        let label = format!("{}/{}", c.suite, c.name);
        let _ = writeln!(
            out,
            "{label:<width$}  {}  {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.detail
        );
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    let _ = writeln!(out, "{} checks, {} failed", checks.len(), failed);
    out
}

/// `F(1−ε) = L + Bε^g + Cε + Eε^{1+g} + O(ε²)` with `g = c−a−b`; the
/// points `ε, 2ε, 4ε, 8ε` eliminate `B`, `C` and `E`.
pub fn extrapolated_limit(a: f64, b: f64, c: f64, eps: f64) -> anyhow::Result<f64> {
    let g = c - a - b;
    let f = Gauss2F1::new(a, b, c)?;
    let mut m = [[0.0; 5]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        let e = eps * f64::from(1u32 << i);
        *row = [1.0, e.powf(g), e, e.powf(1.0 + g), f.eval_complement(1.0 - e, e)];
    }
    Ok(solve(m)[0])
}

fn solve<const N: usize, const M: usize>(mut m: [[f64; M]; N]) -> [f64; N] {
    for col in 0..N {
        let pivot = (col..N)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        m.swap(col, pivot);
        for row in col + 1..N {
            let f = m[row][col] / m[col][col];
            let pivot_row = m[col];
            for (dst, src) in m[row][col..].iter_mut().zip(&pivot_row[col..]) {
                *dst -= f * src;
            }
        }
    }
    let mut x = [0.0; N];
    for row in (0..N).rev() {
        let s: f64 = (row + 1..N).map(|k| m[row][k] * x[k]).sum();
        x[row] = (m[row][N] - s) / m[row][row];
    }
    x
}

fn hypergeom(rng: &mut ChaCha8Rng) -> anyhow::Result<Vec<Check>> {
    const S: &str = "hypergeom";
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let b: f64 = rng.random_range(0.05..3.0);
        let c = b + rng.random_range(0.05..3.0);
        let a = rng.random_range(0.0..(c - 0.01).min(3.0));
        let z = rng.random_range(0.0..0.999);
        let lhs = f21(a, b, c, z)?;
        worst = worst.max(((lhs - f21_transformed(a, b, c, z)?) / lhs).abs());
    }
    let mut out = vec![check(
        S,
        "transformation",
        worst < 1e-9,
        format!("max rel {worst:.2e} over 1000 points"),
    )];
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let b: f64 = rng.random_range(0.1..2.0);
        let c = b + rng.random_range(0.1..2.0);
        let a = rng.random_range(0.05..(c - 0.05).min(2.0));
        let z = rng.random_range(0.01..0.95);
        let h = 1e-5 * (1.0 - z);
        let fd = (f21(a, b, c, z + h)? - f21(a, b, c, z - h)?) / (2.0 * h);
        let d = f21_derivative(a, b, c, z)?;
        worst = worst.max(((fd - d) / d).abs());
    }
    out.push(check(
        S,
        "derivative",
        worst < 1e-6,
        format!("max rel {worst:.2e} vs central differences"),
    ));
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let b = rng.random_range(0.2..2.0);
        let a = rng.random_range(0.05..1.5);
        let c = a + b + rng.random_range(0.1..0.8);
        let exact = f21_limit(a, b, c)?;
        worst = worst.max(((extrapolated_limit(a, b, c, 1e-6)? - exact) / exact).abs());
    }
    out.push(check(
        S,
        "limit_at_one",
        worst < 1e-8,
        format!("max rel {worst:.2e} from z = 1 − 1e-6"),
    ));
    Ok(out)
}

fn decreasing_density(
    rng: &mut ChaCha8Rng,
    grid: &RadialGrid,
    dim: usize,
    support_cells: usize,
) -> anyhow::Result<RadialDensity> {
    let mut v: Vec<f64> = (0..support_cells).map(|_| rng.random_range(0.0..1.0)).collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v.resize(grid.len(), 0.0);
    Ok(RadialDensity::new(grid.clone(), dim, v)?.normalize()?)
}

fn riesz(rng: &mut ChaCha8Rng) -> anyhow::Result<Vec<Check>> {
    const S: &str = "riesz";
    let newton = ModelParams::new(3, -1.0, 2.0, 1.0)?;
    let ball = RadialDensity::uniform_ball(RadialGrid::new(1.0, 64)?, 3, 1.0)?;
    let radii = [1.5, 2.0, 4.0];
    let (raw, _) = raw_riesz_at(&ball, &newton, &radii)?;
    let err = radii
        .iter()
        .zip(&raw)
        .map(|(r, v)| (v * r - 1.0).abs())
        .fold(0.0, f64::max);
    let mut out = vec![check(
        S,
        "newton_ball",
        err < 1e-8,
        format!("max rel {err:.2e} vs M/|x|"),
    )];
    let c1v = c1(&newton)?;
    let c2v = c2(&ModelParams::new(3, -2.0, 2.0, 1.0)?)?;
    let err = ((c1v - 8.0 * PI).abs()).max((c2v - 8.0 * PI).abs()) / (8.0 * PI);
    out.push(check(
        S,
        "constants_8pi",
        err < 1e-12,
        format!("C1 = {c1v:.12}, C2 = {c2v:.12}"),
    ));
    let grid = RadialGrid::new(4.0, 64)?;
    let mut violations = 0;
    for &k in &[-1.0, -2.0, -2.5] {
        let params = ModelParams::new(3, k, 2.0, 1.0)?;
        for _ in 0..4 {
            let rho = decreasing_density(rng, &grid, 3, 16)?;
            let report = decay_envelope_check(&riesz_potential(&rho, &params)?, &rho, 1.0, &params)?;
            violations += report.upper_violations + report.lower_violations;
        }
    }
    out.push(check(
        S,
        "decay_envelope",
        violations == 0,
        format!("{violations} violations over 12 densities"),
    ));
    let params = ModelParams::new(3, -1.0, 2.0, 1.0)?;
    let (q, h) = (0.4, 10.0f64);
    let hand = h.powf(1.0 - q * 2.0) + h.powf(q);
    let err = (cross_range_k(h, &params, q)? - hand).abs() / hand;
    out.push(check(S, "cross_range_k", err < 1e-12, format!("rel {err:.2e}")));
    Ok(out)
}

fn random_line(rng: &mut ChaCha8Rng, n: usize) -> anyhow::Result<LineDensity> {
    let grid = LineGrid::new(3.0, 3 * n)?;
    let mut v = vec![0.0; 3 * n];
    for x in &mut v[n..2 * n] {
        *x = rng.random_range(0.0..1.0);
    }
    Ok(LineDensity::new(grid, v)?.normalize()?)
}

fn energy(rng: &mut ChaCha8Rng) -> anyhow::Result<Vec<Check>> {
    const S: &str = "energy";
    let mut worst = 0.0f64;
    let mut hls = 0.0f64;
    for i in 0..20 {
        let dim = 1 + i % 3;
        let params = ModelParams::new(dim, -0.5 * dim as f64, 2.2, 1.0)?;
        let grid = RadialGrid::new(2.0, 48)?;
        let rho = decreasing_density(rng, &grid, dim, 24)?;
        let e = free_energy(&rho, &params)?;
        let ratio = hls_ratio(&rho, &params)?;
        for &lambda in &[0.25, 0.5, 2.0, 4.0] {
            let dilated = rho.dilate(lambda)?;
            let d = free_energy(&dilated, &params)?;
            let law = lambda.powf(dim as f64 * (params.m() - 1.0)) * e.entropy
                + lambda.powf(-params.k()) * params.chi() * e.interaction;
            worst = worst.max((d.free_energy - law).abs() / (e.entropy.abs() + e.interaction.abs()));
            hls = hls.max((hls_ratio(&dilated, &params)? / ratio - 1.0).abs());
        }
    }
    let mut out = vec![
        check(S, "dilation_law", worst < 1e-8, format!("max scaled error {worst:.2e}")),
        check(S, "hls_invariance", hls < 1e-6, format!("max rel {hls:.2e}")),
    ];
    let params = ModelParams::new(1, -0.5, 1.8, 1.0)?;
    let mut bad = 0;
    for _ in 0..100 {
        let rho = random_line(rng, 24)?;
        let e = free_energy(&rho, &params)?;
        let s = free_energy(&rho.rearrange(), &params)?;
        if s.interaction > e.interaction + 1e-14 * e.interaction.abs()
            || (s.entropy - e.entropy).abs() > 1e-14 * e.entropy
        {
            bad += 1;
        }
    }
    out.push(check(
        S,
        "rearrangement",
        bad == 0,
        format!("{bad} of 100 densities violate"),
    ));
    Ok(out)
}

fn stationary() -> anyhow::Result<Vec<Check>> {
    const S: &str = "stationary";
    let params = ModelParams::new(1, -0.5, 1.8, 1.0)?;
    let init = RadialDensity::uniform_ball(RadialGrid::new(3.0, 128)?, 1, 1.0)?;
    let report = solve_stationary(&params, &SolverConfig::default(), &init)?;
    let ch = report.char_residual_1d.unwrap_or(f64::NAN);
    let mut out = vec![check(
        S,
        "solve_1d",
        report.el_residual < 1e-6 && ch < 1e-3 && report.monotone_defect < 1e-5,
        format!(
            "el {:.2e}, char {ch:.2e}, monotone {:.2e}",
            report.el_residual, report.monotone_defect
        ),
    )];
    let bar = report.profile.to_line()?;
    let mut candidates = Vec::new();
    for &lambda in &[0.8, 0.95, 1.05, 1.25] {
        candidates.push(bar.dilate(lambda)?.resample(bar.grid())?.normalize()?);
    }
    let support = report.support_radius;
    candidates.push(LineDensity::uniform(bar.grid().clone(), -support, support)?);
    let min = minimality_check_1d(&bar, &candidates, &params)?;
    out.push(check(
        S,
        "minimality",
        min.violations.is_empty(),
        format!(
            "min excess {:.2e}",
            min.excess.iter().cloned().fold(f64::INFINITY, f64::min)
        ),
    ));
    let lambdas: Vec<f64> = (0..=40).map(|i| 0.8 + 0.01 * i as f64).collect();
    let scan = dilation_scan(&bar, &params, &lambdas)?;
    let at = scan.argmin;
    out.push(check(
        S,
        "dilation_scan",
        (at - 1.0).abs() <= 0.01 + 1e-12,
        format!("argmin λ = {at:.2}"),
    ));
    let mut worst_gap = f64::INFINITY;
    let mut zero_away = 0;
    for i in 0..10_000 {
        let z = 10f64.powf(-3.0 + 6.0 * i as f64 / 9_999.0);
        let g = pointwise_inequality(z, params.m(), params.k())?;
        worst_gap = worst_gap.min(g.gap);
        if g.gap == 0.0 && (z - 1.0).abs() > 1e-12 {
            zero_away += 1;
        }
    }
    out.push(check(
        S,
        "pointwise_gap",
        worst_gap >= 0.0 && zero_away == 0,
        format!("min gap {worst_gap:.2e}"),
    ));
    Ok(out)
}

fn evolution() -> anyhow::Result<Vec<Check>> {
    const S: &str = "evolution";
    let params = ModelParams::new(1, -0.5, 1.8, 1.0)?;
    let flow = FlowParams::try_from(&params)?;
    let config = EvolutionConfig {
        t_end: 0.05,
        half_width: 1.5,
        n: 128,
        output_stride: 20,
        ..EvolutionConfig::default()
    };
    let init = LineDensity::uniform(config.grid()?, -1.0, 1.0)?;
    let trace = evolve(&init, &flow, &config)?;
    let drift = trace.mass_drift();
    let rise = trace.max_energy_increase();
    let mut out = vec![
        check(S, "mass", drift <= 1e-12, format!("max drift {drift:.2e}")),
        check(S, "dissipation", rise <= 1e-10, format!("max increase {rise:.2e}")),
    ];
    let m = 2.0;
    let (slope, expected) = porous_medium_slope(m, 256)?;
    out.push(check(
        S,
        "porous_medium",
        (slope / expected - 1.0).abs() < 0.1,
        format!("slope {slope:.4} vs {expected:.4}"),
    ));
    Ok(out)
}

/// Support growth exponent of the `χ = 0` flow from a Barenblatt profile
/// started at `t₀ = 0.01`, against `1/(m+1)`.
pub fn porous_medium_slope(m: f64, n: usize) -> anyhow::Result<(f64, f64)> {
    let flow = FlowParams::porous_medium(m)?;
    let config = EvolutionConfig {
        t_end: 1.0,
        half_width: 3.0,
        n,
        output_stride: 50,
        steady_tol: 0.0,
        ..EvolutionConfig::default()
    };
    let beta = 1.0 / (m + 1.0);
    let kappa = (m - 1.0) * beta / (2.0 * m);
    let t0 = 0.01f64;
    // unit-mass Barenblatt height for m = 2, used as a generic bump otherwise
    let height = (0.75 * kappa.sqrt()).powf(2.0 / 3.0);
    let init = LineDensity::from_fn(config.grid()?, |x| {
        let core = height - kappa * x * x * t0.powf(-2.0 * beta);
        t0.powf(-beta) * core.max(0.0).powf(1.0 / (m - 1.0))
    })?
    .normalize()?;
    let (mut times, mut fronts) = (Vec::new(), Vec::new());
    evolve_with(&init, &flow, &config, |_, t, rho| {
        let v = rho.values();
        let top = v.iter().cloned().fold(0.0, f64::max);
        if let Some(last) = v.iter().rposition(|x| *x > 1e-3 * top) {
            times.push(t + t0);
            fronts.push(rho.grid().edge(last + 1));
        }
    })?;
    Ok((log_log_slope(&times, &fronts)?, beta))
}
