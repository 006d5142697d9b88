//! Linear instability of a localized stationary solution of the nonlinear
//! wave equation `ψ̈ = ψ'' − f(ψ)`.

use faer::{c64, Mat, Side};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{matvec, Grid1D};
use crate::nonlinearity::WaveNonlinearity;
use crate::operators::{nlw_hessian_matrix, HamiltonianPair, OperatorMeta};
use crate::profiles::{solve_nlw_stationary, Equation, SolitaryWaveProfile, SolverOptions};
use crate::spectra::{hamiltonian_spectrum, residual_check, DEFAULT_MAX_SIZE};

#[derive(Clone, Debug, Serialize)]
pub struct DerrickReport {
    #[serde(skip)]
    pub theta: SolitaryWaveProfile,
    /// Smallest eigenvalue `−c²` of `𝔏 = −D₂ + f′(θ)`.
    pub lambda_min_l: f64,
    pub lambda_second_l: f64,
    pub growth_rate: f64,
    /// Real eigenvalues of `[[0, I], [−𝔏, 0]]`, decreasing.
    pub linearization_eigs: Vec<f64>,
    /// Residuals of `(χ, ±cχ)` as eigenvectors of the block operator.
    pub block_residuals: [f64; 2],
    /// `⟨χ, 𝔏χ⟩ / ‖χ‖²`.
    pub quadratic_form: f64,
    /// `∂²_τ E(θ + τχ)` at `τ = 0` by a second difference of the energy.
    pub energy_second_variation: f64,
    pub ground_state_sign_changes: usize,
    /// Ground state normalized to unit grid `L²` norm and positive at the center.
    pub chi: Vec<f64>,
}

/// Discrete energy `∫ ½θ'² + F(θ)` with `∫θ'² = −⟨θ, D₂θ⟩`.
pub fn nlw_energy(grid: &Grid1D, model: &WaveNonlinearity, d2: &Mat<f64>, theta: &[f64]) -> f64 {
    let d2t = matvec(d2, theta);
    let h = grid.spacing();
    theta.iter().zip(&d2t).map(|(t, dd)| -0.5 * t * dd + model.potential(*t)).sum::<f64>() * h
}

/// Sign changes ignoring entries below `1e-10·max|v|`.
pub fn sign_changes(v: &[f64]) -> usize {
    let floor = 1e-10 * v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut last = 0.0f64;
    let mut count = 0;
    for &x in v {
        if x.abs() <= floor {
            continue;
        }
        if last != 0.0 && x.signum() != last {
            count += 1;
        }
        last = x.signum();
    }
    count
}

pub fn derrick_instability(model: &WaveNonlinearity, grid: &Grid1D, opts: &SolverOptions) -> Result<DerrickReport> {
    let theta = solve_nlw_stationary(model, grid, opts)?;
    let n = grid.n_points;
    let l = nlw_hessian_matrix(grid, model, &theta.components[0]);
    let evd = l.self_adjoint_eigen(Side::Lower).map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
    let s = evd.S().column_vector();
    let (lambda_min, lambda_second) = (s[0], s[1]);
    if lambda_min >= 0.0 {
        return Err(Error::NoInstability(lambda_min));
    }
    let h = grid.spacing();
    let mut chi: Vec<f64> = (0..n).map(|i| evd.U()[(i, 0)]).collect();
    let norm = (chi.iter().map(|x| x * x).sum::<f64>() * h).sqrt();
    let sign = if chi[n / 2] < 0.0 { -1.0 } else { 1.0 };
    chi.iter_mut().for_each(|x| *x *= sign / norm);
    let c = (-lambda_min).sqrt();

    let pair = HamiltonianPair {
        upper: Mat::identity(n, n),
        lower: l.clone(),
        signs: vec![1.0],
        essential_bands: Vec::new(),
        meta: OperatorMeta {
            label: "nlw_block".into(),
            equation: Some(Equation::Nlw),
            omega: 0.0,
            mass: model.f_prime(0.0),
            grid: *grid,
            blocks: 2,
        },
    };
    let spec = hamiltonian_spectrum(&pair, false, DEFAULT_MAX_SIZE)?;
    let mut reals: Vec<f64> =
        spec.eigenvalues.iter().filter(|z| z.im.abs() <= 1e-8 && z.re.abs() > 1e-6).map(|z| z.re).collect();
    reals.sort_by(|a, b| b.total_cmp(a));

    let zeros = vec![0.0; 2 * n];
    let mut block_residuals = [0.0; 2];
    for (k, sgn) in [1.0, -1.0].into_iter().enumerate() {
        let mut v = chi.clone();
        v.extend(chi.iter().map(|x| sgn * c * x));
        block_residuals[k] = residual_check(&pair, &v, &zeros, c64::new(sgn * c, 0.0));
    }

    let lchi = matvec(&l, &chi);
    let quadratic_form = chi.iter().zip(&lchi).map(|(a, b)| a * b).sum::<f64>() * h;

    let d2 = grid.second_derivative_matrix();
    let tau = 1e-3;
    let shifted = |t: f64| -> Vec<f64> { theta.components[0].iter().zip(&chi).map(|(a, b)| a + t * b).collect() };
    let e0 = nlw_energy(grid, model, &d2, &theta.components[0]);
    let ep = nlw_energy(grid, model, &d2, &shifted(tau));
    let em = nlw_energy(grid, model, &d2, &shifted(-tau));
    let energy_second_variation = (ep - 2.0 * e0 + em) / (tau * tau);

    Ok(DerrickReport {
        ground_state_sign_changes: sign_changes(&chi),
        theta,
        lambda_min_l: lambda_min,
        lambda_second_l: lambda_second,
        growth_rate: c,
        linearization_eigs: reals,
        block_residuals,
        quadratic_form,
        energy_second_variation,
        chi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_demo_matches_poschl_teller() {
        let grid = Grid1D::fourier(30.0, 384).unwrap();
        let r = derrick_instability(&WaveNonlinearity::default(), &grid, &SolverOptions::default()).unwrap();
        assert!((r.lambda_min_l + 3.0).abs() < 1e-8);
        assert!(r.lambda_second_l.abs() < 1e-8);
        assert!((r.growth_rate - 3f64.sqrt()).abs() < 1e-8);
        assert_eq!(r.linearization_eigs.len(), 2);
        assert!((r.linearization_eigs[0] - 3f64.sqrt()).abs() < 1e-8);
        assert!((r.linearization_eigs[1] + 3f64.sqrt()).abs() < 1e-8);
        assert_eq!(r.ground_state_sign_changes, 0);
        assert!(r.block_residuals.iter().all(|&x| x < 1e-8));
        assert!((r.quadratic_form + 3.0).abs() < 1e-8);
        assert!(r.energy_second_variation < 0.0);
        assert!((r.energy_second_variation - r.quadratic_form).abs() < 1e-5);
    }

    #[test]
    fn sign_change_counter() {
        assert_eq!(sign_changes(&[1.0, 2.0, 1e-20, -1e-20, 3.0]), 0);
        assert_eq!(sign_changes(&[1.0, -2.0, 3.0]), 2);
    }
}
