mod support;

use aggdiff_core::riesz::{raw_riesz_at, riesz_potential, theta};
use aggdiff_core::{ModelParams, RadialDensity, RadialGrid};

fn smooth(grid: &RadialGrid, dim: usize, shape: u8) -> RadialDensity {
    let f = move |r: f64| match shape {
        0 => (1.0 - r * r).max(0.0).powi(2),
        1 => (-4.0 * r * r).exp(),
        _ => (1.0 + (3.0 * r).cos()) * f64::from(r < std::f64::consts::PI / 3.0),
    };
    RadialDensity::from_fn(grid.clone(), dim, f)
        .unwrap()
        .normalize()
        .unwrap()
}

#[test]
fn grid_potential_matches_brute_force_quadrature() {
    let cases = [
        (2, -0.5, 0u8),
        (2, -1.0, 1),
        (2, -1.5, 2),
        (3, -1.0, 1),
        (3, -2.0, 0),
        (3, -2.5, 2),
    ];
    for &(dim, k, shape) in &cases {
        let params = ModelParams::new(dim, k, 3.0, 1.0).unwrap();
        let grid = RadialGrid::new(2.0, 48).unwrap();
        let rho = smooth(&grid, dim, shape);
        let profile = riesz_potential(&rho, &params).unwrap();
        let edges = grid.edges();
        for i in (1..48).step_by(5) {
            let r = grid.center(i);
            let exact = support::raw_potential(&edges, rho.values(), r, dim, k);
            let got = profile.raw()[i];
            let rel = ((got - exact) / exact).abs();
            assert!(rel < 1e-6, "N={dim} k={k} r={r}: {got} vs {exact} ({rel:e})");
        }
    }
}

#[test]
fn off_grid_radii_match_brute_force() {
    let params = ModelParams::new(3, -1.5, 2.0, 1.0).unwrap();
    let grid = RadialGrid::new(1.5, 30).unwrap();
    let rho = smooth(&grid, 3, 1);
    let radii = [0.013, 0.31, 0.777, 1.234, 2.5, 7.0];
    let (raw, warnings) = raw_riesz_at(&rho, &params, &radii).unwrap();
    assert!(warnings.is_empty());
    for (r, got) in radii.iter().zip(raw) {
        let exact = support::raw_potential(&grid.edges(), rho.values(), *r, 3, -1.5);
        assert!(((got - exact) / exact).abs() < 1e-7, "r={r}: {got} vs {exact}");
    }
}

#[test]
fn newton_potential_outside_uniform_ball() {
    let params = ModelParams::new(3, -1.0, 2.0, 1.0).unwrap();
    let grid = RadialGrid::new(1.0, 64).unwrap();
    let rho = RadialDensity::uniform_ball(grid, 3, 1.0).unwrap();
    let radii = [1.5, 2.0, 3.0, 10.0];
    let (raw, _) = raw_riesz_at(&rho, &params, &radii).unwrap();
    for (r, got) in radii.iter().zip(raw) {
        assert!((got - 1.0 / r).abs() < 1e-8 / r, "r={r}: {got}");
    }
}

#[test]
fn theta_matches_angular_quadrature() {
    for &(dim, k) in &[(2, -0.3), (2, -1.0), (3, -2.0), (3, -2.7), (4, -1.2)] {
        let params = ModelParams::new(dim, k, 3.0, 1.0).unwrap();
        for &(r, eta) in &[(1.0, 0.2), (1.0, 0.9), (0.5, 1.7), (2.0, 2.01)] {
            let got = theta(r, eta, &params).unwrap();
            let exact = support::angular(r, eta, dim, k);
            assert!(
                ((got - exact) / exact).abs() < 1e-9,
                "N={dim} k={k} ({r},{eta}): {got} vs {exact}"
            );
        }
    }
}
