//! Solitary-wave and stationary profiles.
//!
//! All three solvers share one pattern: an initial guess from a closed form
//! or from shooting outward from `x = 0`, followed by Newton iteration on the
//! collocation residual restricted to the even parity sector. Restricting to
//! the sector pins the center of the wave, so the Jacobian is nonsingular
//! without any extra phase or translation condition.

use faer::linalg::solvers::Solve;
use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{matvec, Grid1D};
use crate::nonlinearity::{NonlinearityModel, WaveNonlinearity};
use crate::operators::{dirac_l_minus_matrix, dirac_l_plus_matrix, nls_l_plus_matrix, nlw_hessian_matrix};
use crate::symmetry::SectorBasis;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Equation {
    Nls,
    Dirac1d,
    Nlw,
}

impl Equation {
    pub fn components(self) -> usize {
        match self {
            Equation::Dirac1d => 2,
            Equation::Nls | Equation::Nlw => 1,
        }
    }

    /// Parity signs of the components of the wave itself.
    pub fn even_signs(self) -> &'static [f64] {
        match self {
            Equation::Dirac1d => &[1.0, -1.0],
            Equation::Nls | Equation::Nlw => &[1.0],
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Equation::Nls => "nls",
            Equation::Dirac1d => "dirac1d",
            Equation::Nlw => "nlw",
        }
    }
}

#[derive(Clone, Debug)]
pub enum ProfileModel {
    Scalar(NonlinearityModel),
    Wave(WaveNonlinearity),
}

/// Newton controls shared by the profile solvers.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverOptions {
    pub max_iter: usize,
    /// Residual at which Newton stops early.
    pub target_residual: f64,
    /// Largest residual accepted as converged.
    pub accept_residual: f64,
    /// Minimum half-width in decay lengths.
    pub min_decay_lengths: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { max_iter: 40, target_residual: 1e-12, accept_residual: 1e-8, min_decay_lengths: 12.0 }
    }
}

#[derive(Clone, Debug)]
pub struct SolitaryWaveProfile {
    pub equation: Equation,
    /// Frequency; zero and unused for NLW.
    pub omega: f64,
    pub model: ProfileModel,
    pub grid: Grid1D,
    /// `[φ]` for NLS, `[θ]` for NLW, `[v, u]` for the Dirac spinor.
    pub components: Vec<Vec<f64>>,
    pub decay_rate: f64,
    /// Max-norm of the stationary residual on the grid.
    pub residual: f64,
    /// `max(|f(±L)|) / max|f|` over components.
    pub tail_ratio: f64,
    pub newton_iterations: usize,
}

impl SolitaryWaveProfile {
    pub fn nodes(&self) -> Vec<f64> {
        self.grid.nodes()
    }

    /// Component-major concatenation; the real part Φ of the real form.
    pub fn flat(&self) -> Vec<f64> {
        self.components.concat()
    }

    pub fn mass(&self) -> f64 {
        match &self.model {
            ProfileModel::Scalar(m) => m.mass(),
            ProfileModel::Wave(_) => 0.0,
        }
    }

    pub fn scalar_model(&self) -> Result<&NonlinearityModel> {
        match &self.model {
            ProfileModel::Scalar(m) => Ok(m),
            ProfileModel::Wave(_) => Err(Error::Unsupported("profile has no scalar nonlinearity".into())),
        }
    }

    pub fn wave_model(&self) -> Result<&WaveNonlinearity> {
        match &self.model {
            ProfileModel::Wave(w) => Ok(w),
            ProfileModel::Scalar(_) => Err(Error::Unsupported("profile is not an NLW profile".into())),
        }
    }

    pub fn family_label(&self) -> String {
        match &self.model {
            ProfileModel::Scalar(m) => m.label(),
            ProfileModel::Wave(w) => format!("wave_polynomial{:?}", w.coefficients),
        }
    }

    /// Largest reflection defect: `v` even, `u` odd.
    pub fn parity_defect(&self) -> f64 {
        let signs = self.equation.even_signs();
        let mut defect = 0.0f64;
        for (c, comp) in self.components.iter().enumerate() {
            for j in 0..comp.len() {
                defect = defect.max((comp[j] - signs[c] * comp[self.grid.reflect(j)]).abs());
            }
        }
        defect
    }

    /// Stationary residual recomputed from the components.
    pub fn stationary_residual(&self) -> Result<f64> {
        let r = match self.equation {
            Equation::Nls => nls_residual(&self.grid, self.scalar_model()?, self.omega, &self.components[0]),
            Equation::Dirac1d => dirac_residual(&self.grid, self.scalar_model()?, self.omega, &self.flat()),
            Equation::Nlw => nlw_residual(&self.grid, self.wave_model()?, &self.components[0]),
        };
        Ok(max_abs(&r))
    }
}

pub fn nls_decay_rate(m: f64, omega: f64) -> f64 {
    (2.0 * (m - omega)).sqrt()
}

pub fn dirac_decay_rate(m: f64, omega: f64) -> f64 {
    (m * m - omega * omega).sqrt()
}

/// Spatial decay rate of the wave at frequency `omega`; `None` for NLW.
pub fn decay_rate(equation: Equation, m: f64, omega: f64) -> Option<f64> {
    match equation {
        Equation::Nls => Some(nls_decay_rate(m, omega)),
        Equation::Dirac1d => Some(dirac_decay_rate(m, omega)),
        Equation::Nlw => None,
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn check_domain(grid: &Grid1D, rate: f64, opts: &SolverOptions) -> Result<()> {
    let required = opts.min_decay_lengths / rate;
    if grid.half_width < required {
        return Err(Error::DomainTooSmall { half_width: grid.half_width, required });
    }
    Ok(())
}

fn tail_ratio(components: &[Vec<f64>]) -> f64 {
    let peak = components.iter().map(|c| max_abs(c)).fold(0.0, f64::max);
    let edge = components.iter().map(|c| c[0].abs()).fold(0.0, f64::max);
    if peak > 0.0 {
        edge / peak
    } else {
        0.0
    }
}

pub(crate) fn nls_residual(grid: &Grid1D, model: &NonlinearityModel, omega: f64, phi: &[f64]) -> Vec<f64> {
    let d2 = grid.second_derivative_matrix();
    let d2phi = matvec(&d2, phi);
    phi.iter().zip(&d2phi).map(|(&p, &dd)| -0.5 * dd + (model.g(p * p) - omega) * p).collect()
}

pub(crate) fn dirac_residual(grid: &Grid1D, model: &NonlinearityModel, omega: f64, z: &[f64]) -> Vec<f64> {
    let lm = dirac_l_minus_matrix(grid, model, omega, z);
    matvec(&lm, z)
}

pub(crate) fn nlw_residual(grid: &Grid1D, model: &WaveNonlinearity, theta: &[f64]) -> Vec<f64> {
    let d2 = grid.second_derivative_matrix();
    let d2t = matvec(&d2, theta);
    theta.iter().zip(&d2t).map(|(&t, &dd)| -dd + model.f(t)).collect()
}

/// Newton on `F(z) = 0` restricted to the sector spanned by `basis`.
fn newton_in_sector(
    basis: &SectorBasis,
    z0: Vec<f64>,
    residual: impl Fn(&[f64]) -> Vec<f64>,
    jacobian: impl Fn(&[f64]) -> Mat<f64>,
    opts: &SolverOptions,
) -> Result<(Vec<f64>, f64, usize)> {
    let mut y = basis.restrict(&z0);
    let mut z = basis.lift(&y);
    let mut f = residual(&z);
    let mut norm = max_abs(&f);
    let mut iterations = 0;
    while iterations < opts.max_iter && norm > opts.target_residual {
        iterations += 1;
        let j = basis.reduce(&jacobian(&z));
        let rhs_vec = basis.restrict(&f);
        let rhs = Mat::from_fn(rhs_vec.len(), 1, |i, _| -rhs_vec[i]);
        let step = j.partial_piv_lu().solve(&rhs);
        // backtrack on growth; the initial guesses sit inside the basin so this
        // rarely triggers
        let mut t = 1.0;
        loop {
            let trial_y: Vec<f64> = y.iter().enumerate().map(|(i, v)| v + t * step[(i, 0)]).collect();
            let trial_z = basis.lift(&trial_y);
            let trial_f = residual(&trial_z);
            let trial_norm = max_abs(&trial_f);
            if trial_norm.is_finite() && (trial_norm < norm || t < 1.0 / 64.0) {
                let stalled = trial_norm >= 0.5 * norm;
                y = trial_y;
                z = trial_z;
                f = trial_f;
                norm = trial_norm;
                if stalled && norm <= opts.accept_residual {
                    return Ok((z, norm, iterations));
                }
                break;
            }
            t *= 0.5;
        }
    }
    if norm <= opts.accept_residual {
        Ok((z, norm, iterations))
    } else {
        Err(Error::NewtonDiverged { iterations, residual: norm })
    }
}

/// Smallest positive root of `H(s) = G(s) − ω·s`, the value of `|φ(0)|²`
/// singled out by the conserved quantity of the stationary ODE.
fn first_integral_amplitude(model: &NonlinearityModel, omega: f64) -> Result<f64> {
    let h = |s: f64| model.big_g(s) / s - omega;
    let mut lo = 1e-8;
    if h(lo) <= 0.0 {
        return Err(Error::NoShootingBracket(format!("H(s)/s = {:.3e} ≤ 0 near s = 0", h(lo))));
    }
    let mut hi = lo;
    loop {
        let next = hi * 1.05 + 1e-6;
        if next > 1e8 {
            return Err(Error::NoShootingBracket("H(s) has no positive root below s = 1e8".into()));
        }
        if h(next) <= 0.0 {
            hi = next;
            break;
        }
        lo = next;
        hi = next;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn rk4_step<const D: usize>(f: &impl Fn(&[f64; D]) -> [f64; D], y: &[f64; D], h: f64) -> [f64; D] {
    let add = |a: &[f64; D], b: &[f64; D], s: f64| {
        let mut out = *a;
        for i in 0..D {
            out[i] += s * b[i];
        }
        out
    };
    let k1 = f(y);
    let k2 = f(&add(y, &k1, 0.5 * h));
    let k3 = f(&add(y, &k2, 0.5 * h));
    let k4 = f(&add(y, &k3, h));
    let mut out = *y;
    for i in 0..D {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// Integrates the half-line ODE from `x = 0` and samples it on the grid
/// nodes `x ≥ 0`. Integration stops once the decaying component drops below
/// `1e-7` of its initial value or the trajectory leaves the separatrix; past
/// that point the tail is continued as `e^{−rate·x}`. Returns per-component
/// samples for the nodes `j = N/2 ..= N-1` plus the node at `x = L`.
fn shoot_half_line<const D: usize>(
    grid: &Grid1D,
    y0: [f64; D],
    rhs: impl Fn(&[f64; D]) -> [f64; D],
    decaying: impl Fn(&[f64; D]) -> f64,
    left_separatrix: impl Fn(&[f64; D], &[f64; D]) -> bool,
    rate: f64,
) -> Vec<[f64; D]> {
    let n = grid.n_points;
    let h = grid.spacing();
    let substeps = ((h * 40.0).ceil() as usize).max(8);
    let dt = h / substeps as f64;
    let scale = decaying(&y0).abs();
    let mut samples = Vec::with_capacity(n / 2 + 1);
    samples.push(y0);
    let mut y = y0;
    let mut frozen: Option<([f64; D], usize)> = None;
    for k in 1..=n / 2 {
        if let Some((yf, kf)) = frozen {
            let damp = (-rate * (k - kf) as f64 * h).exp();
            let mut s = yf;
            s.iter_mut().for_each(|c| *c *= damp);
            samples.push(s);
            continue;
        }
        let mut next = y;
        let mut broke = false;
        for _ in 0..substeps {
            let trial = rk4_step(&rhs, &next, dt);
            if left_separatrix(&next, &trial) {
                broke = true;
                break;
            }
            next = trial;
        }
        if broke || decaying(&next).abs() < 1e-7 * scale {
            frozen = Some((y, k - 1));
            let damp = (-rate * h).exp();
            let mut s = y;
            s.iter_mut().for_each(|c| *c *= damp);
            samples.push(s);
            continue;
        }
        y = next;
        samples.push(y);
    }
    samples
}

/// Places half-line samples onto the full symmetric grid with the given
/// component parities.
fn mirror(grid: &Grid1D, half: &[Vec<f64>], signs: &[f64]) -> Vec<Vec<f64>> {
    let n = grid.n_points;
    half.iter()
        .zip(signs)
        .map(|(h, &s)| {
            (0..n)
                .map(|j| {
                    if j >= n / 2 {
                        h[j - n / 2]
                    } else {
                        let r = grid.reflect(j);
                        if r == j {
                            // x = −L ≡ L
                            h[n / 2]
                        } else {
                            s * h[r - n / 2]
                        }
                    }
                })
                .collect()
        })
        .collect()
}

/// `ωφ = −½φ'' + g(φ²)φ`, positive and even.
pub fn solve_nls_profile(
    model: &NonlinearityModel,
    omega: f64,
    grid: &Grid1D,
    opts: &SolverOptions,
) -> Result<SolitaryWaveProfile> {
    let m = model.mass();
    if !(omega.is_finite() && omega < m) {
        return Err(Error::OmegaOutOfRange { omega, reason: format!("NLS waves need ω < m = {m}") });
    }
    let rate = nls_decay_rate(m, omega);
    check_domain(grid, rate, opts)?;
    let x = grid.nodes();

    let guess: Vec<f64> = match model.family() {
        crate::nonlinearity::Family::SolerPower { k } => {
            // φ = [(k+1)(m−ω)]^{1/2k} sech^{1/k}(kκx), exact for g = m − s^k
            let kf = *k as f64;
            let amp = ((kf + 1.0) * (m - omega)).powf(0.5 / kf);
            x.iter().map(|&x| amp * (1.0 / (kf * rate * x).cosh()).powf(1.0 / kf)).collect()
        }
        _ => {
            let s0 = first_integral_amplitude(model, omega)?;
            let rhs = |y: &[f64; 2]| [y[1], 2.0 * (model.g(y[0] * y[0]) - omega) * y[0]];
            let half = shoot_half_line(grid, [s0.sqrt(), 0.0], rhs, |y| y[0], |_, t| t[0] <= 0.0 || t[1] >= 0.0, rate);
            let comp: Vec<f64> = half.iter().map(|y| y[0]).collect();
            mirror(grid, &[comp], &[1.0]).remove(0)
        }
    };

    let basis = SectorBasis::new(grid, &[1.0]);
    let (phi, residual, iterations) = newton_in_sector(
        &basis,
        guess,
        |p| nls_residual(grid, model, omega, p),
        |p| nls_l_plus_matrix(grid, model, omega, p),
        opts,
    )?;
    let components = vec![phi];
    Ok(SolitaryWaveProfile {
        equation: Equation::Nls,
        omega,
        model: ProfileModel::Scalar(model.clone()),
        grid: *grid,
        tail_ratio: tail_ratio(&components),
        components,
        decay_rate: rate,
        residual,
        newton_iterations: iterations,
    })
}

/// Real spinor `(v, u)` with `u' + (g(ρ) − ω)v = 0`, `v' + (g(ρ) + ω)u = 0`,
/// `ρ = v² − u²`; `v` even and positive at the origin, `u` odd.
pub fn solve_dirac_profile_1d(
    model: &NonlinearityModel,
    omega: f64,
    grid: &Grid1D,
    opts: &SolverOptions,
) -> Result<SolitaryWaveProfile> {
    let m = model.mass();
    if !(omega.is_finite() && omega > 0.0 && omega < m) {
        return Err(Error::OmegaOutOfRange { omega, reason: format!("Dirac waves need 0 < ω < m = {m}") });
    }
    let rate = dirac_decay_rate(m, omega);
    check_domain(grid, rate, opts)?;

    // Shooting on v(0): along the decaying trajectory the conserved quantity
    // G(v² − u²) − ω(v² + u²) vanishes, so at x = 0 (u = 0) v(0)² is a root of
    // G(s) − ωs.
    let s0 = first_integral_amplitude(model, omega)?;
    let rhs = |y: &[f64; 2]| {
        let rho = y[0] * y[0] - y[1] * y[1];
        let g = model.g(rho);
        [-(g + omega) * y[1], -(g - omega) * y[0]]
    };
    let half = shoot_half_line(grid, [s0.sqrt(), 0.0], rhs, |y| y[0], |prev, t| t[0] <= 0.0 || t[0] > prev[0], rate);
    let v: Vec<f64> = half.iter().map(|y| y[0]).collect();
    let u: Vec<f64> = half.iter().map(|y| y[1]).collect();
    let guess = mirror(grid, &[v, u], &[1.0, -1.0]).concat();

    let basis = SectorBasis::new(grid, &[1.0, -1.0]);
    let (z, residual, iterations) = newton_in_sector(
        &basis,
        guess,
        |z| dirac_residual(grid, model, omega, z),
        |z| dirac_l_plus_matrix(grid, model, omega, z),
        opts,
    )?;
    let n = grid.n_points;
    let mut components = vec![z[..n].to_vec(), z[n..].to_vec()];
    if components[0][n / 2] < 0.0 {
        components.iter_mut().for_each(|c| c.iter_mut().for_each(|x| *x = -*x));
    }
    Ok(SolitaryWaveProfile {
        equation: Equation::Dirac1d,
        omega,
        model: ProfileModel::Scalar(model.clone()),
        grid: *grid,
        tail_ratio: tail_ratio(&components),
        components,
        decay_rate: rate,
        residual,
        newton_iterations: iterations,
    })
}

/// Localized even solution of `−θ'' + f(θ) = 0`.
pub fn solve_nlw_stationary(
    model: &WaveNonlinearity,
    grid: &Grid1D,
    opts: &SolverOptions,
) -> Result<SolitaryWaveProfile> {
    let slope = model.f_prime(0.0);
    if slope <= 0.0 {
        return Err(Error::NoShootingBracket(format!("f'(0) = {slope} ≤ 0: no exponentially localized solution")));
    }
    let rate = slope.sqrt();
    check_domain(grid, rate, opts)?;
    // θ'² = 2F(θ); the turning point θ(0) is the first positive root of F.
    let ratio = |t: f64| model.potential(t) / (t * t);
    let mut lo = 1e-6;
    let mut hi = lo;
    loop {
        let next = hi * 1.05 + 1e-6;
        if next > 1e6 {
            return Err(Error::NoShootingBracket("potential F(θ) has no positive root: no localized solution".into()));
        }
        if ratio(next) <= 0.0 {
            hi = next;
            break;
        }
        lo = next;
        hi = next;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ratio(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let theta0 = 0.5 * (lo + hi);
    let rhs = |y: &[f64; 2]| [y[1], model.f(y[0])];
    let half = shoot_half_line(grid, [theta0, 0.0], rhs, |y| y[0], |_, t| t[0] <= 0.0 || t[1] >= 0.0, rate);
    let comp: Vec<f64> = half.iter().map(|y| y[0]).collect();
    let guess = mirror(grid, &[comp], &[1.0]).remove(0);
    let basis = SectorBasis::new(grid, &[1.0]);
    let (theta, residual, iterations) = newton_in_sector(
        &basis,
        guess,
        |t| nlw_residual(grid, model, t),
        |t| nlw_hessian_matrix(grid, model, t),
        opts,
    )?;
    let components = vec![theta];
    Ok(SolitaryWaveProfile {
        equation: Equation::Nlw,
        omega: 0.0,
        model: ProfileModel::Wave(model.clone()),
        grid: *grid,
        tail_ratio: tail_ratio(&components),
        components,
        decay_rate: rate,
        residual,
        newton_iterations: iterations,
    })
}

/// Dispatches to the NLS or Dirac solver.
pub fn solve_profile(
    equation: Equation,
    model: &NonlinearityModel,
    omega: f64,
    grid: &Grid1D,
    opts: &SolverOptions,
) -> Result<SolitaryWaveProfile> {
    match equation {
        Equation::Nls => solve_nls_profile(model, omega, grid, opts),
        Equation::Dirac1d => solve_dirac_profile_1d(model, omega, grid, opts),
        Equation::Nlw => Err(Error::Unsupported("NLW profiles have no frequency".into())),
    }
}

pub fn default_domega_step(m: f64, omega: f64) -> f64 {
    1e-4 * (m - omega)
}

/// Central ω-difference of the profile, flattened component-major.
pub fn domega_profile(
    equation: Equation,
    model: &NonlinearityModel,
    omega: f64,
    grid: &Grid1D,
    h_omega: Option<f64>,
    opts: &SolverOptions,
) -> Result<Vec<f64>> {
    let h = h_omega.unwrap_or_else(|| default_domega_step(model.mass(), omega));
    let plus = solve_profile(equation, model, omega + h, grid, opts)?.flat();
    let minus = solve_profile(equation, model, omega - h, grid, opts)?.flat();
    Ok(plus.iter().zip(&minus).map(|(p, m)| (p - m) / (2.0 * h)).collect())
}

/// `∂_ωΦ` from the linear system `L₊·y = Φ` in the even sector; the
/// cross-check for [`domega_profile`].
pub fn domega_profile_linear(profile: &SolitaryWaveProfile) -> Result<Vec<f64>> {
    let model = profile.scalar_model()?;
    let z = profile.flat();
    let lplus = match profile.equation {
        Equation::Nls => nls_l_plus_matrix(&profile.grid, model, profile.omega, &z),
        Equation::Dirac1d => dirac_l_plus_matrix(&profile.grid, model, profile.omega, &z),
        Equation::Nlw => return Err(Error::Unsupported("NLW profiles have no frequency".into())),
    };
    let basis = SectorBasis::new(&profile.grid, profile.equation.even_signs());
    let a = basis.reduce(&lplus);
    let rhs_vec = basis.restrict(&z);
    let rhs = Mat::from_fn(rhs_vec.len(), 1, |i, _| rhs_vec[i]);
    let y = a.partial_piv_lu().solve(&rhs);
    let y: Vec<f64> = (0..y.nrows()).map(|i| y[(i, 0)]).collect();
    Ok(basis.lift(&y))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> SolverOptions {
        SolverOptions::default()
    }

    fn dot(grid: &Grid1D, a: &[f64], b: &[f64]) -> f64 {
        grid.spacing() * a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>()
    }

    #[test]
    fn nls_cubic_matches_sech() {
        let model = NonlinearityModel::soler_power(1, 1.0).unwrap();
        let grid = Grid1D::fourier(20.0, 256).unwrap();
        let p = solve_nls_profile(&model, 0.5, &grid, &opts()).unwrap();
        assert!(p.residual <= 1e-8);
        let peak = p.components[0].iter().cloned().fold(0.0, f64::max);
        assert!((peak - 1.0).abs() < 1e-10);
        // quadrature oracle for ∫ sech² = 2
        let q = dot(&grid, &p.components[0], &p.components[0]);
        assert!((q - 2.0).abs() < 1e-9, "Q = {q}");
        assert!(p.parity_defect() <= 1e-10);
    }

    #[test]
    fn nls_shooting_path_agrees_with_closed_form() {
        // the polynomial family takes the shooting path
        let a = NonlinearityModel::soler_power(2, 1.0).unwrap();
        let b = NonlinearityModel::polynomial(vec![1.0, 0.0, -1.0]).unwrap();
        let grid = Grid1D::fourier(20.0, 256).unwrap();
        let pa = solve_nls_profile(&a, 0.4, &grid, &opts()).unwrap();
        let pb = solve_nls_profile(&b, 0.4, &grid, &opts()).unwrap();
        let diff = pa.components[0].iter().zip(&pb.components[0]).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        assert!(diff < 1e-10);
    }

    #[test]
    fn nls_omega_at_mass_rejected() {
        let model = NonlinearityModel::soler_power(1, 1.0).unwrap();
        let grid = Grid1D::fourier(20.0, 128).unwrap();
        assert!(matches!(solve_nls_profile(&model, 1.0, &grid, &opts()), Err(Error::OmegaOutOfRange { .. })));
    }

    #[test]
    fn domain_too_small_is_reported() {
        let model = NonlinearityModel::soler_power(1, 1.0).unwrap();
        let grid = Grid1D::fourier(5.0, 128).unwrap();
        assert!(matches!(solve_dirac_profile_1d(&model, 0.9, &grid, &opts()), Err(Error::DomainTooSmall { .. })));
    }

    #[test]
    fn dirac_profile_parity_and_charge() {
        let model = NonlinearityModel::soler_power(1, 1.0).unwrap();
        let grid = Grid1D::fourier(30.0, 512).unwrap();
        let p = solve_dirac_profile_1d(&model, 0.6, &grid, &opts()).unwrap();
        assert!(p.residual <= 1e-8);
        assert!(p.parity_defect() <= 1e-10);
        assert!(p.components[0][256] > 0.0);
        let q = dot(&grid, &p.components[0], &p.components[0]) + dot(&grid, &p.components[1], &p.components[1]);
        assert!((q - 8.0 / 3.0).abs() < 1e-8, "Q = {q}");
        // v(0)² = 2(1 − ω) from the conserved quantity
        assert!((p.components[0][256].powi(2) - 0.8).abs() < 1e-10);
    }

    #[test]
    fn dirac_rejects_out_of_window() {
        let model = NonlinearityModel::soler_power(1, 1.0).unwrap();
        let grid = Grid1D::fourier(30.0, 128).unwrap();
        assert!(solve_dirac_profile_1d(&model, 1.0, &grid, &opts()).is_err());
        assert!(solve_dirac_profile_1d(&model, 0.0, &grid, &opts()).is_err());
    }

    #[test]
    fn nlw_default_demo() {
        let w = WaveNonlinearity::default();
        let grid = Grid1D::fourier(30.0, 384).unwrap();
        let p = solve_nlw_stationary(&w, &grid, &opts()).unwrap();
        assert!((p.components[0][192] - 2f64.sqrt()).abs() < 1e-10);
        assert!(p.parity_defect() < 1e-12);
        let x = grid.nodes();
        for (j, t) in p.components[0].iter().enumerate() {
            assert!((t - 2f64.sqrt() / x[j].cosh()).abs() < 1e-9);
        }
    }

    #[test]
    fn nlw_linear_has_no_soliton() {
        let w = WaveNonlinearity::new(vec![0.0, 1.0]).unwrap();
        let grid = Grid1D::fourier(20.0, 128).unwrap();
        assert!(matches!(solve_nlw_stationary(&w, &grid, &opts()), Err(Error::NoShootingBracket(_))));
    }

    #[test]
    fn domega_paths_agree() {
        let model = NonlinearityModel::soler_power(1, 1.0).unwrap();
        let grid = Grid1D::fourier(20.0, 256).unwrap();
        let p = solve_nls_profile(&model, 0.5, &grid, &opts()).unwrap();
        let fd = domega_profile(Equation::Nls, &model, 0.5, &grid, None, &opts()).unwrap();
        let lin = domega_profile_linear(&p).unwrap();
        // ⟨φ, ∂_ωφ⟩ = ½ dQ/dω = −1
        assert!((dot(&grid, &p.components[0], &fd) + 1.0).abs() < 1e-6);
        assert!((dot(&grid, &p.components[0], &lin) + 1.0).abs() < 1e-9);
        let diff = fd.iter().zip(&lin).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(diff < 1e-6);
    }
}
