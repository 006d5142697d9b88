//! Charge curves, Vakhitov–Kolokolov verdicts, virial identities and
//! frequency scans.

use faer::c64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{matvec, GridSpec};
use crate::nonlinearity::{Family, NonlinearityModel};
use crate::operators::{alpha0_eigenvector, assemble_dirac_blocks, dirac_vectors, jl_pair, nls_pair};
use crate::profiles::{decay_rate, domega_profile, solve_profile, Equation, SolitaryWaveProfile, SolverOptions};
use crate::spectra::{
    classify, detect_real_pairs, hamiltonian_spectrum, projector_rank_with_retry, ClassifyOptions, SpectrumReport,
    DEFAULT_MAX_SIZE,
};

/// `Q = ∫|ψ|²` by the uniform rule.
pub fn charge_q(profile: &SolitaryWaveProfile) -> f64 {
    let h = profile.grid.spacing();
    profile.components.iter().flatten().map(|x| x * x).sum::<f64>() * h
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyParts {
    /// Kinetic part `∫ψ*(−iα₁∂ₓ)ψ`.
    pub kinetic: f64,
    /// `∫G(ψ*βψ)`.
    pub potential: f64,
}

/// Kinetic and potential energy of a Dirac profile. The kinetic integral is
/// evaluated in complex arithmetic and its imaginary part must vanish.
pub fn energy_parts(profile: &SolitaryWaveProfile) -> Result<EnergyParts> {
    if profile.equation != Equation::Dirac1d {
        return Err(Error::Unsupported("energy splitting is implemented for dirac1d".into()));
    }
    let model = profile.scalar_model()?;
    let (v, u) = (&profile.components[0], &profile.components[1]);
    let d1 = profile.grid.first_derivative_matrix();
    let dv = matvec(&d1, v);
    let du = matvec(&d1, u);
    let h = profile.grid.spacing();
    // −iα₁ = [[0, 1], [−1, 0]] with α₁ = −σ₂; ψ = (v, u) real
    let mut t = c64::new(0.0, 0.0);
    let mut pot = 0.0;
    for j in 0..v.len() {
        let psi = [c64::new(v[j], 0.0), c64::new(u[j], 0.0)];
        let dpsi = [c64::new(dv[j], 0.0), c64::new(du[j], 0.0)];
        t += psi[0].conj() * dpsi[1] - psi[1].conj() * dpsi[0];
        pot += model.big_g(v[j] * v[j] - u[j] * u[j]);
    }
    t *= h;
    if t.im.abs() > 1e-8 {
        return Err(Error::ImaginaryKinetic(t.im));
    }
    Ok(EnergyParts { kinetic: t.re, potential: pot * h })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VirialResiduals {
    /// `|(n−1)/n·T + V − ωQ| / (|ωQ| + 1)`.
    pub identity: f64,
    /// `|T/n − ∫(G(ρ) − ρg(ρ))| / (|T| + 1)`.
    pub kinetic: f64,
}

pub fn virial_check(profile: &SolitaryWaveProfile) -> Result<VirialResiduals> {
    let parts = energy_parts(profile)?;
    let model = profile.scalar_model()?;
    let n = 1.0;
    let q = charge_q(profile);
    let w = profile.omega;
    let (v, u) = (&profile.components[0], &profile.components[1]);
    let h = profile.grid.spacing();
    let defect: f64 = v
        .iter()
        .zip(u)
        .map(|(a, b)| {
            let rho = a * a - b * b;
            model.big_g(rho) - rho * model.g(rho)
        })
        .sum::<f64>()
        * h;
    Ok(VirialResiduals {
        identity: ((n - 1.0) / n * parts.kinetic + parts.potential - w * q).abs() / ((w * q).abs() + 1.0),
        kinetic: (parts.kinetic / n - defect).abs() / (parts.kinetic.abs() + 1.0),
    })
}

/// `⟨𝐀₁Φ − 2ωx𝐉Φ, 𝐉∂ₓΦ⟩`, which equals `T + ωQ`.
pub fn virial_pairing(profile: &SolitaryWaveProfile) -> Result<f64> {
    let vecs = dirac_vectors(profile)?;
    let w = profile.omega;
    let h = profile.grid.spacing();
    Ok(vecs
        .a1_phi
        .iter()
        .zip(&vecs.x_j_phi)
        .zip(&vecs.j_dx_phi)
        .map(|((a, xj), jd)| (a - 2.0 * w * xj) * jd)
        .sum::<f64>()
        * h)
}

/// Copy of `profile` with `amplitude·e^{−x²}` added to the first component.
pub fn perturb_profile(profile: &SolitaryWaveProfile, amplitude: f64) -> SolitaryWaveProfile {
    let mut p = profile.clone();
    for (c, x) in p.components[0].iter_mut().zip(profile.grid.nodes()) {
        *c += amplitude * (-x * x).exp();
    }
    p
}

/// Residuals of the kernel and chain relations of the Dirac `𝐋`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainResiduals {
    /// `‖𝐋𝐉Φ‖∞`.
    pub l_j_phi: f64,
    /// `‖𝐋∂ₓΦ‖∞`.
    pub l_dx_phi: f64,
    /// `‖𝐋∂_ωΦ − Φ‖∞`.
    pub l_domega_phi: f64,
    /// `‖𝐋(𝐀₁Φ − 2ωx𝐉Φ) − 2𝐉∂ₓΦ‖∞`.
    pub l_virial: f64,
    /// `⟨∂_ωΦ, Φ⟩`, half of `dQ/dω`.
    pub domega_dot_phi: f64,
    /// `⟨∂_ωΦ, 𝐉∂ₓΦ⟩`.
    pub domega_dot_j_dx_phi: f64,
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Applies the block-diagonal `𝐋 = L₊ ⊕ L₋` to a `4N` real-form vector.
fn apply_dirac_l(lp: &faer::Mat<f64>, lm: &faer::Mat<f64>, x: &[f64]) -> Vec<f64> {
    let h = x.len() / 2;
    let mut out = matvec(lp, &x[..h]);
    out.extend(matvec(lm, &x[h..]));
    out
}

/// `domega` is `∂_ωφ` flattened as `(v, u)`.
pub fn dirac_chain_residuals(profile: &SolitaryWaveProfile, domega: &[f64]) -> Result<ChainResiduals> {
    let (lp, lm) = assemble_dirac_blocks(profile)?;
    let vecs = dirac_vectors(profile)?;
    let n4 = vecs.phi.len();
    let w = profile.omega;
    let h = profile.grid.spacing();
    let mut dw = domega.to_vec();
    dw.resize(n4, 0.0);
    let l_dw = apply_dirac_l(&lp, &lm, &dw);
    let chain: Vec<f64> = vecs.a1_phi.iter().zip(&vecs.x_j_phi).map(|(a, x)| a - 2.0 * w * x).collect();
    let l_chain = apply_dirac_l(&lp, &lm, &chain);
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() * h;
    Ok(ChainResiduals {
        l_j_phi: max_abs(&apply_dirac_l(&lp, &lm, &vecs.j_phi)),
        l_dx_phi: max_abs(&apply_dirac_l(&lp, &lm, &vecs.dx_phi)),
        l_domega_phi: max_abs(&l_dw.iter().zip(&vecs.phi).map(|(a, b)| a - b).collect::<Vec<_>>()),
        l_virial: max_abs(&l_chain.iter().zip(&vecs.j_dx_phi).map(|(a, b)| a - 2.0 * b).collect::<Vec<_>>()),
        domega_dot_phi: dot(&dw, &vecs.phi),
        domega_dot_j_dx_phi: dot(&dw, &vecs.j_dx_phi),
    })
}

/// `‖JL(−∂_ωφ, 0) − (0, φ)‖∞` for NLS.
pub fn nls_chain_residual(profile: &SolitaryWaveProfile, domega: &[f64]) -> Result<f64> {
    let pair = nls_pair(profile)?;
    let n = profile.grid.n_points;
    let mut x: Vec<f64> = domega.iter().map(|v| -v).collect();
    x.resize(2 * n, 0.0);
    let y = pair.apply(&x);
    let mut target = vec![0.0; n];
    target.extend_from_slice(&profile.components[0]);
    Ok(max_abs(&y.iter().zip(&target).map(|(a, b)| a - b).collect::<Vec<_>>()))
}

/// Residual of `𝐋w = −2ωw` over the two vectors `α₀Φ`, `𝐉α₀Φ`.
pub fn alpha0_residual(profile: &SolitaryWaveProfile) -> Result<f64> {
    let (lp, lm) = assemble_dirac_blocks(profile)?;
    let (a, b) = alpha0_eigenvector(profile)?;
    let w = profile.omega;
    let res = |v: &[f64]| {
        let lv = apply_dirac_l(&lp, &lm, v);
        max_abs(&lv.iter().zip(v).map(|(x, y)| x + 2.0 * w * y).collect::<Vec<_>>())
    };
    Ok(res(&a).max(res(&b)))
}

/// Exact charge of the pure-power families where it is known in closed form:
/// Dirac `k = 1` and NLS `k ≤ 3`.
pub fn charge_closed_form(equation: Equation, model: &NonlinearityModel, omega: f64) -> Option<f64> {
    let Family::SolerPower { k } = *model.family() else {
        return None;
    };
    let m = model.mass();
    if omega.is_nan() || omega.abs() >= m {
        return None;
    }
    match (equation, k) {
        (Equation::Dirac1d, 1) if omega > 0.0 => Some(2.0 * (m * m - omega * omega).sqrt() / omega),
        (Equation::Nls, 1..=3) => {
            // ∫sech^{2/k} = √π Γ(1/k) / Γ(1/k + 1/2)
            let beta = match k {
                1 => 2.0,
                2 => std::f64::consts::PI,
                _ => std::f64::consts::PI.sqrt() * 2.678_938_534_707_747 / 1.128_787_029_908_126,
            };
            let kappa = (2.0 * (m - omega)).sqrt();
            let kf = k as f64;
            Some(((kf + 1.0) * (m - omega)).powf(1.0 / kf) * beta / (kf * kappa))
        }
        _ => None,
    }
}

#[derive(Clone, Debug)]
pub struct CurvePoint {
    pub omega: f64,
    pub q: Option<f64>,
    pub profile: Option<SolitaryWaveProfile>,
    pub error: Option<String>,
}

/// Resolves the grid for `omega` and solves the profile on it.
pub fn solve_on_spec(
    equation: Equation,
    model: &NonlinearityModel,
    omega: f64,
    grid: &GridSpec,
    opts: &SolverOptions,
) -> Result<SolitaryWaveProfile> {
    let rate = decay_rate(equation, model.mass(), omega)
        .ok_or_else(|| Error::Unsupported("frequency scans need nls or dirac1d".into()))?;
    if !(rate.is_finite() && rate > 0.0) {
        return Err(Error::OmegaOutOfRange { omega, reason: format!("no decaying wave for m = {}", model.mass()) });
    }
    let g = grid.resolve(rate)?;
    solve_profile(equation, model, omega, &g, opts)
}

/// `Q(ω)` over `omegas`; failures are recorded per point and the curve
/// continues. Points come back in input order.
pub fn charge_curve(
    equation: Equation,
    model: &NonlinearityModel,
    omegas: &[f64],
    grid: &GridSpec,
    opts: &SolverOptions,
) -> Vec<CurvePoint> {
    omegas
        .par_iter()
        .map(|&omega| match solve_on_spec(equation, model, omega, grid, opts) {
            Ok(p) => CurvePoint { omega, q: Some(charge_q(&p)), profile: Some(p), error: None },
            Err(e) => CurvePoint { omega, q: None, profile: None, error: Some(e.to_string()) },
        })
        .collect()
}

/// Derivative of the sampled curve at `omega` from the three nearest
/// successful samples (the central difference on a uniform grid).
pub fn dq_domega(curve: &[CurvePoint], omega: f64) -> Result<f64> {
    let pts: Vec<(f64, f64)> = curve.iter().filter_map(|c| c.q.map(|q| (c.omega, q))).collect();
    if pts.len() < 3 {
        return Err(Error::EdgeOmega(omega));
    }
    let (lo, hi) = (pts[0].0, pts[pts.len() - 1].0);
    let scale = 1e-12 * (hi - lo).abs().max(1.0);
    if !(omega > lo + scale && omega < hi - scale) {
        return Err(Error::EdgeOmega(omega));
    }
    // centre index: nearest interior sample
    let mut c = 1;
    for i in 1..pts.len() - 1 {
        if (pts[i].0 - omega).abs() < (pts[c].0 - omega).abs() {
            c = i;
        }
    }
    let (x0, y0) = pts[c - 1];
    let (x1, y1) = pts[c];
    let (x2, y2) = pts[c + 1];
    // derivative of the interpolating parabola
    let d01 = (y1 - y0) / (x1 - x0);
    let d12 = (y2 - y1) / (x2 - x1);
    let curv = (d12 - d01) / (x2 - x0);
    Ok(d01 + curv * (2.0 * omega - x0 - x1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VkVerdict {
    VkStableSign,
    VkUnstableSign,
    Critical,
}

impl VkVerdict {
    pub fn from_slope(dq: f64, q: f64, eps_rel: f64) -> Self {
        let eps = eps_rel * q.abs();
        if dq < -eps {
            VkVerdict::VkStableSign
        } else if dq > eps {
            VkVerdict::VkUnstableSign
        } else {
            VkVerdict::Critical
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            VkVerdict::VkStableSign => "vk_stable_sign",
            VkVerdict::VkUnstableSign => "vk_unstable_sign",
            VkVerdict::Critical => "critical",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScanOptions {
    /// Disk radius for counting eigenvalues at zero; `None` means
    /// `zero_radius_factor·(m − ω)`.
    pub zero_radius: Option<f64>,
    pub zero_radius_factor: f64,
    pub re_tol: f64,
    pub im_tol: f64,
    /// Relative dead band of the VK verdict.
    pub eps_q_rel: f64,
    /// Step of the ω-difference; `None` means `1e-4·(m − ω)`.
    pub domega_step: Option<f64>,
    pub classify: ClassifyOptions,
    pub solver: SolverOptions,
    pub max_size: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            zero_radius: None,
            zero_radius_factor: 0.25,
            re_tol: 1e-3,
            im_tol: 1e-4,
            eps_q_rel: 1e-6,
            domega_step: None,
            classify: ClassifyOptions::default(),
            solver: SolverOptions::default(),
            max_size: DEFAULT_MAX_SIZE,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityScanRecord {
    pub omega: f64,
    pub q: f64,
    pub dq_domega: f64,
    pub real_pair_count: usize,
    /// Largest real eigenvalue found, zero when none.
    pub max_real: f64,
    pub nullspace_dim: usize,
    pub projector_radius: f64,
    pub virial_residuals: Option<VirialResiduals>,
    pub vk_verdict: Option<VkVerdict>,
    pub half_width: f64,
    pub n_points: usize,
    pub notes: Vec<String>,
    pub error: Option<String>,
}

impl StabilityScanRecord {
    fn failed(omega: f64, err: &Error) -> Self {
        Self {
            omega,
            q: f64::NAN,
            dq_domega: f64::NAN,
            real_pair_count: 0,
            max_real: 0.0,
            nullspace_dim: 0,
            projector_radius: f64::NAN,
            virial_residuals: None,
            vk_verdict: None,
            half_width: f64::NAN,
            n_points: 0,
            notes: Vec::new(),
            error: Some(err.to_string()),
        }
    }

    pub fn ok(&self) -> bool {
        self.error.is_none()
    }
}

/// Spectrum of `JL` at a profile, classified.
pub fn jl_spectrum(profile: &SolitaryWaveProfile, opts: &ScanOptions) -> Result<SpectrumReport> {
    let pair = jl_pair(profile)?;
    let report = hamiltonian_spectrum(&pair, true, opts.max_size)?;
    classify(report, &pair.essential_bands, &opts.classify)
}

/// `dQ/dω = 2⟨Φ, ∂_ωΦ⟩` with the ω-difference of the profile.
pub fn dq_domega_local(
    profile: &SolitaryWaveProfile,
    model: &NonlinearityModel,
    step: Option<f64>,
    solver: &SolverOptions,
) -> Result<f64> {
    let d = domega_profile(profile.equation, model, profile.omega, &profile.grid, step, solver)?;
    let phi = profile.flat();
    Ok(2.0 * profile.grid.spacing() * phi.iter().zip(&d).map(|(a, b)| a * b).sum::<f64>())
}

/// One scan row at `omega`.
pub fn scan_row(
    equation: Equation,
    model: &NonlinearityModel,
    omega: f64,
    grid: &GridSpec,
    opts: &ScanOptions,
) -> StabilityScanRecord {
    match scan_row_inner(equation, model, omega, grid, opts) {
        Ok(r) => r,
        Err(e) => StabilityScanRecord::failed(omega, &e),
    }
}

fn scan_row_inner(
    equation: Equation,
    model: &NonlinearityModel,
    omega: f64,
    grid: &GridSpec,
    opts: &ScanOptions,
) -> Result<StabilityScanRecord> {
    let profile = solve_on_spec(equation, model, omega, grid, &opts.solver)?;
    let q = charge_q(&profile);
    let dq = dq_domega_local(&profile, model, opts.domega_step, &opts.solver)?;
    let report = jl_spectrum(&profile, opts)?;
    let reals = detect_real_pairs(&report, opts.re_tol, opts.im_tol);
    let radius = opts.zero_radius.unwrap_or(opts.zero_radius_factor * (model.mass() - omega));
    let (rank, used) = projector_rank_with_retry(&report, c64::new(0.0, 0.0), radius)?;
    let virial = if equation == Equation::Dirac1d { Some(virial_check(&profile)?) } else { None };
    let mut notes = Vec::new();
    if rank > 6 {
        notes.push("non-generic degeneracy".to_string());
    }
    let quartets = report
        .eigenvalues
        .iter()
        .zip(&report.classifications)
        .filter(|(z, c)| {
            **c == crate::spectra::Classification::IsolatedPoint && z.re.abs() > opts.re_tol && z.im.abs() > opts.im_tol
        })
        .count();
    if quartets > 0 {
        notes.push(format!("{quartets} off-axis isolated eigenvalues"));
    }
    Ok(StabilityScanRecord {
        omega,
        q,
        dq_domega: dq,
        real_pair_count: reals.len(),
        max_real: reals.first().copied().unwrap_or(0.0).max(0.0),
        nullspace_dim: rank,
        projector_radius: used,
        virial_residuals: virial,
        vk_verdict: Some(VkVerdict::from_slope(dq, q, opts.eps_q_rel)),
        half_width: profile.grid.half_width,
        n_points: profile.grid.n_points,
        notes,
        error: None,
    })
}

/// Rows for every ω, computed in parallel and returned in input order.
pub fn bifurcation_scan(
    equation: Equation,
    model: &NonlinearityModel,
    omegas: &[f64],
    grid: &GridSpec,
    opts: &ScanOptions,
) -> Vec<StabilityScanRecord> {
    omegas.par_iter().map(|&w| scan_row(equation, model, w, grid, opts)).collect()
}

/// `count` evenly spaced values from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..count).map(|i| start + (stop - start) * i as f64 / (count - 1) as f64).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OmegaStar {
    pub omega: f64,
    pub bracket: (f64, f64),
    pub dq_at_bracket: (f64, f64),
}

/// Bisection on the sign of `dQ/dω` between two rows of opposite verdict.
pub fn locate_omega_star(
    equation: Equation,
    model: &NonlinearityModel,
    bracket: (f64, f64),
    grid: &GridSpec,
    opts: &ScanOptions,
    tol: f64,
) -> Result<OmegaStar> {
    let slope = |w: f64| -> Result<f64> {
        let p = solve_on_spec(equation, model, w, grid, &opts.solver)?;
        dq_domega_local(&p, model, opts.domega_step, &opts.solver)
    };
    let (mut a, mut b) = bracket;
    let (mut fa, mut fb) = (slope(a)?, slope(b)?);
    if fa.signum() == fb.signum() {
        return Err(Error::NoShootingBracket(format!("dQ/dω has the same sign at {a} and {b}")));
    }
    while b - a > tol {
        let mid = 0.5 * (a + b);
        let fm = slope(mid)?;
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
            fb = fm;
        }
    }
    Ok(OmegaStar { omega: 0.5 * (a + b), bracket: (a, b), dq_at_bracket: (fa, fb) })
}

/// Adjacent successful rows whose `dQ/dω` signs differ.
pub fn sign_change_brackets(rows: &[StabilityScanRecord]) -> Vec<(f64, f64)> {
    let ok: Vec<&StabilityScanRecord> = rows.iter().filter(|r| r.ok()).collect();
    ok.windows(2)
        .filter(|w| w[0].dq_domega.signum() != w[1].dq_domega.signum())
        .map(|w| (w[0].omega, w[1].omega))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SidedCheck {
    pub omega_star: OmegaStar,
    pub offset: f64,
    pub below: StabilityScanRecord,
    pub above: StabilityScanRecord,
    /// Rank at the bracket endpoint nearest `ω*`.
    pub bracket_rank: usize,
    pub bracket_omega: f64,
    /// Pairs appear on the `dQ/dω > 0` side only.
    pub sided: bool,
}

/// Eigensolves at `ω* ± offset` and at the nearest bracket endpoint.
pub fn sided_check(
    equation: Equation,
    model: &NonlinearityModel,
    star: OmegaStar,
    offset: f64,
    grid: &GridSpec,
    opts: &ScanOptions,
) -> Result<SidedCheck> {
    let below = scan_row(equation, model, star.omega - offset, grid, opts);
    let above = scan_row(equation, model, star.omega + offset, grid, opts);
    if let Some(e) = below.error.as_ref().or(above.error.as_ref()) {
        return Err(Error::Unsupported(format!("sided check failed: {e}")));
    }
    let (a, b) = star.bracket;
    let nearest = if (star.omega - a).abs() <= (b - star.omega).abs() { a } else { b };
    let row = scan_row(equation, model, nearest, grid, opts);
    if let Some(e) = &row.error {
        return Err(Error::Unsupported(format!("bracket row failed: {e}")));
    }
    let side_ok = |r: &StabilityScanRecord| {
        if r.dq_domega > 0.0 {
            r.real_pair_count == 2
        } else {
            r.real_pair_count == 0
        }
    };
    let sided = side_ok(&below) && side_ok(&above) && (below.dq_domega.signum() != above.dq_domega.signum());
    Ok(SidedCheck {
        omega_star: star,
        offset,
        bracket_rank: row.nullspace_dim,
        bracket_omega: nearest,
        below,
        above,
        sided,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Grid1D, Scheme};
    use crate::profiles::{solve_dirac_profile_1d, solve_nls_profile};

    fn dirac(omega: f64) -> SolitaryWaveProfile {
        let model = NonlinearityModel::soler_power(1, 1.0).unwrap();
        let grid = Grid1D::fourier(40.0, 384).unwrap();
        solve_dirac_profile_1d(&model, omega, &grid, &SolverOptions::default()).unwrap()
    }

    #[test]
    fn dirac_energy_and_virial() {
        let p = dirac(0.8);
        let e = energy_parts(&p).unwrap();
        assert!(e.kinetic > 0.0);
        // k = 1: T = ∫ρ²/2
        let t2: f64 =
            p.components[0].iter().zip(&p.components[1]).map(|(v, u)| (v * v - u * u).powi(2) / 2.0).sum::<f64>()
                * p.grid.spacing();
        assert!((e.kinetic - t2).abs() < 1e-8);
        let r = virial_check(&p).unwrap();
        assert!(r.identity <= 1e-6 && r.kinetic <= 1e-6, "{r:?}");
        let pairing = virial_pairing(&p).unwrap();
        assert!((pairing - (e.kinetic + 0.8 * charge_q(&p))).abs() < 1e-5);
        assert!(pairing > 0.0);
    }

    #[test]
    fn zero_profile_energy() {
        let mut p = dirac(0.8);
        p.components.iter_mut().for_each(|c| c.iter_mut().for_each(|x| *x = 0.0));
        assert_eq!(charge_q(&p), 0.0);
        let e = energy_parts(&p).unwrap();
        assert_eq!((e.kinetic, e.potential), (0.0, 0.0));
    }

    #[test]
    fn perturbed_profile_breaks_identity() {
        let p = perturb_profile(&dirac(0.8), 0.01);
        let r = virial_check(&p).unwrap();
        assert!(r.identity > 1e-3, "{r:?}");
    }

    #[test]
    fn chain_relations() {
        let model = NonlinearityModel::soler_power(1, 1.0).unwrap();
        let p = dirac(0.8);
        let d = domega_profile(Equation::Dirac1d, &model, 0.8, &p.grid, None, &SolverOptions::default()).unwrap();
        let c = dirac_chain_residuals(&p, &d).unwrap();
        assert!(c.l_j_phi <= 1e-6 && c.l_dx_phi <= 1e-6, "{c:?}");
        assert!(c.l_domega_phi <= 1e-5 && c.l_virial <= 1e-5, "{c:?}");
        // ½ dQ/dω = −1/(ω²√(1−ω²))
        assert!((c.domega_dot_phi + 1.0 / (0.64 * 0.6)).abs() < 1e-5);
        assert!(c.domega_dot_j_dx_phi.abs() < 1e-6);
    }

    #[test]
    fn nls_chain() {
        let model = NonlinearityModel::soler_power(1, 1.0).unwrap();
        let grid = Grid1D::fourier(20.0, 256).unwrap();
        let opts = SolverOptions::default();
        let p = solve_nls_profile(&model, 0.5, &grid, &opts).unwrap();
        let d = domega_profile(Equation::Nls, &model, 0.5, &grid, None, &opts).unwrap();
        assert!(nls_chain_residual(&p, &d).unwrap() <= 1e-5);
    }

    #[test]
    fn curve_derivative() {
        let model = NonlinearityModel::soler_power(1, 1.0).unwrap();
        let spec = GridSpec::new(Some(30.0), 256, Scheme::FourierPeriodic);
        let omegas = linspace(0.79, 0.81, 5);
        let curve = charge_curve(Equation::Dirac1d, &model, &omegas, &spec, &SolverOptions::default());
        for c in &curve {
            let w = c.omega;
            assert!((c.q.unwrap() - 2.0 * (1.0 - w * w).sqrt() / w).abs() < 1e-6);
        }
        let d = dq_domega(&curve, 0.8).unwrap();
        assert!((d + 2.0 / (0.64 * 0.6)).abs() < 1e-3, "{d}");
        assert!(matches!(dq_domega(&curve, 0.79), Err(Error::EdgeOmega(_))));
    }

    #[test]
    fn verdict_dead_band() {
        assert_eq!(VkVerdict::from_slope(-1.0, 2.0, 1e-6), VkVerdict::VkStableSign);
        assert_eq!(VkVerdict::from_slope(1e-7, 2.0, 1e-6), VkVerdict::Critical);
        assert_eq!(VkVerdict::from_slope(1e-3, 2.0, 1e-6), VkVerdict::VkUnstableSign);
    }

    #[test]
    fn nls_rows() {
        let spec = GridSpec::new(None, 256, Scheme::FourierPeriodic);
        let opts = ScanOptions::default();
        let k1 = NonlinearityModel::soler_power(1, 1.0).unwrap();
        let k3 = NonlinearityModel::soler_power(3, 1.0).unwrap();
        let a = scan_row(Equation::Nls, &k1, 0.5, &spec, &opts);
        assert!(a.ok(), "{:?}", a.error);
        assert_eq!((a.real_pair_count, a.nullspace_dim), (0, 4));
        assert_eq!(a.vk_verdict, Some(VkVerdict::VkStableSign));
        let b = scan_row(Equation::Nls, &k3, 0.5, &spec, &opts);
        assert_eq!(b.real_pair_count, 2);
        assert_eq!(b.vk_verdict, Some(VkVerdict::VkUnstableSign));
        let bad = scan_row(Equation::Nls, &k1, 1.5, &spec, &opts);
        assert!(!bad.ok());
    }

    #[test]
    fn closed_form_charges() {
        let opts = SolverOptions::default();
        for k in 1..=3u32 {
            let model = NonlinearityModel::soler_power(k, 1.0).unwrap();
            let grid = Grid1D::fourier(30.0, 512).unwrap();
            let p = solve_nls_profile(&model, 0.4, &grid, &opts).unwrap();
            let q = charge_closed_form(Equation::Nls, &model, 0.4).unwrap();
            assert!((charge_q(&p) - q).abs() < 1e-7, "k={k}");
        }
        let model = NonlinearityModel::soler_power(1, 2.0).unwrap();
        let grid = Grid1D::fourier(20.0, 384).unwrap();
        let p = solve_dirac_profile_1d(&model, 1.5, &grid, &opts).unwrap();
        let q = charge_closed_form(Equation::Dirac1d, &model, 1.5).unwrap();
        assert!((charge_q(&p) - q).abs() < 1e-8);
        assert!(alpha0_residual(&p).unwrap() < 1e-8);
        let k2 = NonlinearityModel::soler_power(2, 1.0).unwrap();
        assert!(charge_closed_form(Equation::Dirac1d, &k2, 0.5).is_none());
    }
}
