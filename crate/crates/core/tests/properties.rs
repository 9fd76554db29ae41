use aggdiff_core::energy::{free_energy, hls_ratio};
use aggdiff_core::evolution::{stable_dt, step, FlowParams};
use aggdiff_core::hypergeom::{f21, f21_derivative, f21_transformed};
use aggdiff_core::model::MStar;
use aggdiff_core::stationary::pointwise_inequality;
use aggdiff_core::{LineDensity, LineGrid, ModelParams, RadialDensity, RadialGrid, Regime};
use proptest::prelude::*;

fn line_density(cells: &[f64]) -> LineDensity {
    // random block in the middle third of a grid three times as wide
    let n = cells.len();
    let grid = LineGrid::new(3.0, 3 * n).unwrap();
    let mut values = vec![0.0; 3 * n];
    values[n..2 * n].copy_from_slice(cells);
    LineDensity::new(grid, values).unwrap().normalize().unwrap()
}

fn radial_density(dim: usize, cells: &[f64]) -> RadialDensity {
    let n = cells.len();
    let grid = RadialGrid::new(2.0, 2 * n).unwrap();
    let mut values = vec![0.0; 2 * n];
    values[..n].copy_from_slice(cells);
    RadialDensity::new(grid, dim, values).unwrap().normalize().unwrap()
}

fn cells() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0..1.0f64, 8..40).prop_filter("nonzero", |v| v.iter().sum::<f64>() > 1e-3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn derived_exponents(dim in 1usize..5, kf in 0.01..0.99f64, m in 1.01..4.0f64, chi in 0.1..5.0f64) {
        let k = -kf * dim as f64;
        let p = ModelParams::new(dim, k, m, chi).unwrap();
        let n = dim as f64;
        prop_assert!((p.m_c() - (1.0 - k / n)).abs() < 1e-15);
        prop_assert!((p.s() - (k + n) / 2.0).abs() < 1e-15);
        let expected = if (m - p.m_c()).abs() <= 1e-12 * p.m_c() {
            Regime::FairCompetition
        } else if m > p.m_c() {
            Regime::DiffusionDominated
        } else {
            Regime::AttractionDominated
        };
        prop_assert_eq!(p.regime(), expected);
        match p.m_star() {
            MStar::Finite(v) => {
                prop_assert!(k < 1.0 - n);
                prop_assert!((v - (2.0 - k - n) / (1.0 - k - n)).abs() < 1e-12 * v.abs());
            }
            MStar::Unbounded => prop_assert!(k >= 1.0 - n),
        }
    }

    #[test]
    fn out_of_range_parameters_rejected(dim in 1usize..5, excess in 0.0..3.0f64) {
        let n = dim as f64;
        prop_assert!(ModelParams::new(dim, -n - excess, 2.0, 1.0).is_err());
        prop_assert!(ModelParams::new(dim, excess, 2.0, 1.0).is_err());
        prop_assert!(ModelParams::new(dim, -0.5 * n, 1.0 - excess, 1.0).is_err());
        prop_assert!(ModelParams::new(dim, -0.5 * n, 2.0, -excess).is_err());
    }

    #[test]
    fn transformation_identity(a in 0.0..3.0f64, b in 0.05..3.0f64, gap in 0.05..3.0f64, z in 0.0..0.999f64) {
        let c = b + gap;
        prop_assume!(c - a > 0.01);
        let lhs = f21(a, b, c, z).unwrap();
        let rhs = f21_transformed(a, b, c, z).unwrap();
        prop_assert!(((lhs - rhs) / lhs).abs() < 1e-9, "{} vs {}", lhs, rhs);
    }

    #[test]
    fn derivative_identity(a in 0.05..2.0f64, b in 0.1..2.0f64, gap in 0.1..2.0f64, z in 0.01..0.95f64) {
        let c = b + gap;
        prop_assume!(c - a > 0.05);
        let h = 1e-5 * (1.0 - z);
        let fd = (f21(a, b, c, z + h).unwrap() - f21(a, b, c, z - h).unwrap()) / (2.0 * h);
        let d = f21_derivative(a, b, c, z).unwrap();
        prop_assert!(((fd - d) / d).abs() < 1e-6, "{} vs {}", fd, d);
    }

    #[test]
    fn dilation_law_radial(values in cells(), dim in 2usize..4, lambda_pow in -2i32..3) {
        prop_assume!(lambda_pow != 0);
        let lambda = 2f64.powi(lambda_pow);
        let k = -0.6 * dim as f64;
        let params = ModelParams::new(dim, k, 2.5, 1.3).unwrap();
        let rho = radial_density(dim, &values);
        let e = free_energy(&rho, &params).unwrap();
        let d = free_energy(&rho.dilate(lambda).unwrap(), &params).unwrap();
        let n = dim as f64;
        let law = lambda.powf(n * (params.m() - 1.0)) * e.entropy + lambda.powf(-k) * params.chi() * e.interaction;
        prop_assert!((d.free_energy - law).abs() <= 1e-8 * (e.entropy.abs() + e.interaction.abs()));
    }

    #[test]
    fn dilation_law_line(values in cells(), lambda_pow in -2i32..3) {
        let lambda = 2f64.powi(lambda_pow);
        let params = ModelParams::new(1, -0.5, 1.8, 1.0).unwrap();
        let rho = line_density(&values);
        let e = free_energy(&rho, &params).unwrap();
        let d = free_energy(&rho.dilate(lambda).unwrap(), &params).unwrap();
        let law = lambda.powf(params.m() - 1.0) * e.entropy + lambda.powf(0.5) * e.interaction;
        prop_assert!((d.free_energy - law).abs() <= 1e-8 * (e.entropy.abs() + e.interaction.abs()));
    }

    #[test]
    fn rearrangement_lowers_interaction(values in cells()) {
        let params = ModelParams::new(1, -0.5, 1.8, 1.0).unwrap();
        let rho = line_density(&values);
        let sharp = rho.rearrange();
        let e = free_energy(&rho, &params).unwrap();
        let s = free_energy(&sharp, &params).unwrap();
        prop_assert!(s.interaction <= e.interaction + 1e-14 * e.interaction.abs());
        prop_assert!((s.entropy - e.entropy).abs() <= 1e-14 * e.entropy);
    }

    #[test]
    fn hls_ratio_is_dilation_invariant(values in cells(), lambda_pow in -2i32..3, dim in 1usize..4) {
        let lambda = 2f64.powi(lambda_pow);
        let params = ModelParams::new(dim, -0.4 * dim as f64, 2.0, 1.0).unwrap();
        let rho = radial_density(dim, &values);
        let a = hls_ratio(&rho, &params).unwrap();
        let b = hls_ratio(&rho.dilate(lambda).unwrap(), &params).unwrap();
        prop_assert!(((a - b) / a).abs() < 1e-6);
        let c = hls_ratio(&rho.scale(3.0).unwrap(), &params).unwrap();
        prop_assert!(((a - c) / a).abs() < 1e-6);
    }

    #[test]
    fn pointwise_gap_nonnegative(z in 1e-6..1e3f64, m in 1.6..4.0f64) {
        let g = pointwise_inequality(z, m, -0.5).unwrap();
        prop_assert!(g.gap >= 0.0);
    }

    #[test]
    fn evolution_step_conserves_mass(values in cells(), chi in 0.0..3.0f64) {
        let rho = line_density(&values);
        let flow = FlowParams::new(-0.5, 2.0, chi).unwrap();
        let dt = stable_dt(&rho, &flow, 0.4, 0.4);
        let next = step(&rho, &flow, dt).unwrap();
        prop_assert!((next.mass() - rho.mass()).abs() < 1e-13);
        prop_assert!(next.values().iter().all(|v| *v >= 0.0));
    }

    #[test]
    fn resampling_conserves_mass(values in cells(), factor in 0.6..1.7f64, n in 16usize..80) {
        let rho = radial_density(3, &values);
        let target = RadialGrid::new(2.0 * factor.max(1.0), n).unwrap();
        let moved = rho.resample(&target).unwrap();
        prop_assert!((moved.mass() - rho.mass()).abs() < 1e-13);
    }
}
