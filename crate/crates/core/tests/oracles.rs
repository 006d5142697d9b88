//! Checks against closed forms written out independently of the library.

use soliton_spectra::derrick::derrick_instability;
use soliton_spectra::grid::Grid1D;
use soliton_spectra::nonlinearity::{NonlinearityModel, WaveNonlinearity};
use soliton_spectra::operators::jl_pair;
use soliton_spectra::profiles::{solve_dirac_profile_1d, solve_nls_profile, SolverOptions};
use soliton_spectra::spectra::hamiltonian_spectrum;
use soliton_spectra::stability::{charge_q, dq_domega_local};

fn sech(x: f64) -> f64 {
    1.0 / x.cosh()
}

#[test]
fn cubic_nls_profile_and_slope() {
    let opts = SolverOptions::default();
    let model = NonlinearityModel::soler_power(1, 1.0).unwrap();
    let grid = Grid1D::fourier(40.0, 512).unwrap();
    for omega in [0.2, 0.5, 0.8] {
        let p = solve_nls_profile(&model, omega, &grid, &opts).unwrap();
        let a = (2.0 * (1.0 - omega)).sqrt();
        for (x, phi) in grid.nodes().iter().zip(&p.components[0]) {
            assert!((phi - a * sech(a * x)).abs() < 1e-9);
        }
        // Q = 2√2·√(1 − ω)
        assert!((charge_q(&p) - 2.0 * (2.0 * (1.0 - omega)).sqrt()).abs() < 1e-9);
        let dq = dq_domega_local(&p, &model, None, &opts).unwrap();
        let exact = -(2.0f64).sqrt() / (1.0 - omega).sqrt();
        assert!((dq - exact).abs() < 1e-6 * exact.abs(), "{dq} vs {exact}");
    }
}

#[test]
fn soler_charge_slope() {
    let opts = SolverOptions::default();
    let model = NonlinearityModel::soler_power(1, 1.0).unwrap();
    let grid = Grid1D::fourier(30.0, 512).unwrap();
    for omega in [0.4, 0.6] {
        let p = solve_dirac_profile_1d(&model, omega, &grid, &opts).unwrap();
        let dq = dq_domega_local(&p, &model, None, &opts).unwrap();
        // d/dω of 2√(1 − ω²)/ω
        let exact = -2.0 / (omega * omega * (1.0 - omega * omega).sqrt());
        assert!((dq - exact).abs() < 1e-6 * exact.abs(), "{dq} vs {exact}");
    }
}

#[test]
fn soler_spectrum_contains_two_omega_pair() {
    let model = NonlinearityModel::soler_power(1, 1.0).unwrap();
    let omega = 0.3;
    let grid = Grid1D::fourier(30.0, 256).unwrap();
    let p = solve_dirac_profile_1d(&model, omega, &grid, &SolverOptions::default()).unwrap();
    let r = hamiltonian_spectrum(&jl_pair(&p).unwrap(), false, 4096).unwrap();
    for target in [2.0 * omega, -2.0 * omega] {
        let d = r.eigenvalues.iter().map(|z| z.re.hypot(z.im - target)).fold(f64::INFINITY, f64::min);
        assert!(d < 1e-8, "distance {d}");
    }
}

#[test]
fn cubic_nls_has_empty_gap() {
    let model = NonlinearityModel::soler_power(1, 1.0).unwrap();
    let omega = 0.5;
    let grid = Grid1D::fourier(20.0, 256).unwrap();
    let p = solve_nls_profile(&model, omega, &grid, &SolverOptions::default()).unwrap();
    let r = hamiltonian_spectrum(&jl_pair(&p).unwrap(), false, 4096).unwrap();
    let mut zeros = 0;
    for z in &r.eigenvalues {
        if z.norm() < 1e-4 {
            zeros += 1;
        } else {
            assert!(z.re.abs() < 1e-8 && z.im.abs() >= (1.0 - omega) - 1e-8, "{z}");
        }
    }
    assert_eq!(zeros, 4);
}

#[test]
fn poschl_teller_ground_state() {
    // θ = √2·sech x, 𝔏 = −∂² + 1 − 6·sech²x, ground state ∝ sech²x
    let grid = Grid1D::fourier(30.0, 384).unwrap();
    let r = derrick_instability(&WaveNonlinearity::default(), &grid, &SolverOptions::default()).unwrap();
    let s = std::f64::consts::SQRT_2;
    let x = grid.nodes();
    for (xi, t) in x.iter().zip(&r.theta.components[0]) {
        assert!((t - s * sech(*xi)).abs() < 1e-9);
    }
    let shape: Vec<f64> = x.iter().map(|xi| sech(*xi).powi(2)).collect();
    let norm = (shape.iter().map(|v| v * v).sum::<f64>() * grid.spacing()).sqrt();
    for (c, v) in r.chi.iter().zip(&shape) {
        assert!((c - v / norm).abs() < 1e-8);
    }
}
