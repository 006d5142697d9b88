//! Linearization operators as dense real matrices.
//!
//! Layouts are component-major. For the Dirac real form a vector of length
//! `4N` is `(Re v, Re u, Im v, Im u)`; for NLS a `JL` vector of length `2N`
//! is `(Re ρ, Im ρ)`.

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{matvec, Grid1D, Scheme};
use crate::nonlinearity::{NonlinearityModel, WaveNonlinearity};
use crate::profiles::{Equation, SolitaryWaveProfile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Structure {
    Selfadjoint,
    JTimesSelfadjoint,
    General,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BandAxis {
    Real,
    Imaginary,
}

/// Closed interval `[lo, hi]` on one axis; ends may be infinite.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub axis: BandAxis,
    pub lo: f64,
    pub hi: f64,
}

impl Band {
    pub fn real(lo: f64, hi: f64) -> Self {
        Self { axis: BandAxis::Real, lo, hi }
    }

    pub fn imaginary(lo: f64, hi: f64) -> Self {
        Self { axis: BandAxis::Imaginary, lo, hi }
    }

    /// Euclidean distance from `(re, im)` to the band.
    pub fn distance(&self, re: f64, im: f64) -> f64 {
        let (along, across) = match self.axis {
            BandAxis::Real => (re, im),
            BandAxis::Imaginary => (im, re),
        };
        let gap = if along < self.lo {
            self.lo - along
        } else if along > self.hi {
            along - self.hi
        } else {
            0.0
        };
        gap.hypot(across)
    }

    /// Whether `(re, im)` lies on the band itself, not just near it.
    pub fn contains(&self, re: f64, im: f64, tol: f64) -> bool {
        let (along, across) = match self.axis {
            BandAxis::Real => (re, im),
            BandAxis::Imaginary => (im, re),
        };
        across.abs() <= tol && along >= self.lo - tol && along <= self.hi + tol
    }
}

/// Bands `i·(ℝ \ (−gap, gap))`.
pub fn imaginary_gap_bands(gap: f64) -> Vec<Band> {
    vec![Band::imaginary(f64::NEG_INFINITY, -gap), Band::imaginary(gap, f64::INFINITY)]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorMeta {
    pub label: String,
    pub equation: Option<Equation>,
    pub omega: f64,
    pub mass: f64,
    pub grid: Grid1D,
    /// Number of length-`N` blocks in a vector; node of index `i` is `i % N`.
    pub blocks: usize,
}

#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    pub entries: Mat<f64>,
    pub structure: Structure,
    pub essential_bands: Vec<Band>,
    pub meta: OperatorMeta,
}

impl OperatorMatrix {
    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        matvec(&self.entries, x)
    }

    pub fn apply_transpose(&self, x: &[f64]) -> Vec<f64> {
        let col = faer::ColRef::from_slice(x);
        let y = self.entries.transpose() * col;
        y.iter().copied().collect()
    }

    pub fn symmetry_defect(&self) -> f64 {
        symmetry_defect(&self.entries)
    }

    /// `max|JᵀA − (JᵀA)ᵀ|` with the canonical `J` on two equal halves.
    pub fn hamiltonian_defect(&self) -> f64 {
        let n = self.size();
        if !n.is_multiple_of(2) {
            return f64::INFINITY;
        }
        let h = n / 2;
        // Jᵀ = [[0, −I], [I, 0]]
        let jt_a = |i: usize, j: usize| if i < h { -self.entries[(i + h, j)] } else { self.entries[(i - h, j)] };
        let mut defect = 0.0f64;
        for i in 0..n {
            for j in 0..i {
                defect = defect.max((jt_a(i, j) - jt_a(j, i)).abs());
            }
        }
        defect
    }

    /// Checks the structural invariant named by `structure`.
    pub fn structure_defect(&self) -> f64 {
        match self.structure {
            Structure::Selfadjoint => self.symmetry_defect(),
            Structure::JTimesSelfadjoint => self.hamiltonian_defect(),
            Structure::General => 0.0,
        }
    }
}

pub(crate) fn symmetry_defect(a: &Mat<f64>) -> f64 {
    let mut defect = 0.0f64;
    for i in 0..a.nrows() {
        for j in 0..i {
            defect = defect.max((a[(i, j)] - a[(j, i)]).abs());
        }
    }
    defect
}

/// `JL = [[0, A], [−B, 0]]` kept as its two blocks.
///
/// `signs` are the parity signs of one block; `A` and `B` commute with the
/// corresponding reflection, so the spectrum splits by parity sector.
#[derive(Clone, Debug)]
pub struct HamiltonianPair {
    pub upper: Mat<f64>,
    pub lower: Mat<f64>,
    pub signs: Vec<f64>,
    pub essential_bands: Vec<Band>,
    pub meta: OperatorMeta,
}

impl HamiltonianPair {
    pub fn half_size(&self) -> usize {
        self.upper.nrows()
    }

    pub fn to_operator(&self) -> OperatorMatrix {
        let h = self.half_size();
        let entries = Mat::from_fn(2 * h, 2 * h, |i, j| match (i < h, j < h) {
            (true, false) => self.upper[(i, j - h)],
            (false, true) => -self.lower[(i - h, j)],
            _ => 0.0,
        });
        OperatorMatrix {
            entries,
            structure: Structure::JTimesSelfadjoint,
            essential_bands: self.essential_bands.clone(),
            meta: self.meta.clone(),
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let h = self.half_size();
        let top = matvec(&self.upper, &x[h..]);
        let bottom = matvec(&self.lower, &x[..h]);
        top.into_iter().chain(bottom.into_iter().map(|v| -v)).collect()
    }
}

fn diag_add(a: &mut Mat<f64>, offset: usize, values: &[f64]) {
    for (j, v) in values.iter().enumerate() {
        a[(offset + j, offset + j)] += v;
    }
}

fn wilson_matrix(grid: &Grid1D) -> Option<Mat<f64>> {
    match grid.scheme {
        Scheme::Fd2Wilson { r } if r != 0.0 => {
            let w = -0.5 * r * grid.spacing();
            Some(grid.second_derivative_matrix() * faer::Scale(w))
        }
        _ => None,
    }
}

pub(crate) fn nls_l_minus_matrix(grid: &Grid1D, model: &NonlinearityModel, omega: f64, phi: &[f64]) -> Mat<f64> {
    let mut a = grid.second_derivative_matrix() * faer::Scale(-0.5);
    let pot: Vec<f64> = phi.iter().map(|p| model.g(p * p) - omega).collect();
    diag_add(&mut a, 0, &pot);
    a
}

pub(crate) fn nls_l_plus_matrix(grid: &Grid1D, model: &NonlinearityModel, omega: f64, phi: &[f64]) -> Mat<f64> {
    let mut a = nls_l_minus_matrix(grid, model, omega, phi);
    let extra: Vec<f64> = phi.iter().map(|p| 2.0 * model.g_prime(p * p) * p * p).collect();
    diag_add(&mut a, 0, &extra);
    a
}

/// `L₋` on `(v, u)`: `(D₁u + (g − ω)v, −D₁v − (g + ω)u)`, plus `W·β` for the
/// Wilson scheme.
pub(crate) fn dirac_l_minus_matrix(grid: &Grid1D, model: &NonlinearityModel, omega: f64, z: &[f64]) -> Mat<f64> {
    let n = grid.n_points;
    let d1 = grid.first_derivative_matrix();
    let mut a = Mat::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            a[(i, n + j)] = d1[(i, j)];
            a[(n + i, j)] = -d1[(i, j)];
        }
    }
    if let Some(w) = wilson_matrix(grid) {
        for i in 0..n {
            for j in 0..n {
                a[(i, j)] += w[(i, j)];
                a[(n + i, n + j)] -= w[(i, j)];
            }
        }
    }
    for j in 0..n {
        let (v, u) = (z[j], z[n + j]);
        let g = model.g(v * v - u * u);
        a[(j, j)] += g - omega;
        a[(n + j, n + j)] += -g - omega;
    }
    a
}

pub(crate) fn dirac_l_plus_matrix(grid: &Grid1D, model: &NonlinearityModel, omega: f64, z: &[f64]) -> Mat<f64> {
    let n = grid.n_points;
    let mut a = dirac_l_minus_matrix(grid, model, omega, z);
    for j in 0..n {
        let (v, u) = (z[j], z[n + j]);
        let c = 2.0 * model.g_prime(v * v - u * u);
        a[(j, j)] += c * v * v;
        a[(j, n + j)] -= c * u * v;
        a[(n + j, j)] -= c * u * v;
        a[(n + j, n + j)] += c * u * u;
    }
    a
}

/// `𝔏 = −D₂ + f′(θ)`.
pub(crate) fn nlw_hessian_matrix(grid: &Grid1D, model: &WaveNonlinearity, theta: &[f64]) -> Mat<f64> {
    let mut a = grid.second_derivative_matrix() * faer::Scale(-1.0);
    let pot: Vec<f64> = theta.iter().map(|t| model.f_prime(*t)).collect();
    diag_add(&mut a, 0, &pot);
    a
}

fn check_equation(profile: &SolitaryWaveProfile, eq: Equation) -> Result<()> {
    if profile.equation != eq {
        return Err(Error::Unsupported(format!(
            "expected a {} profile, got {}",
            eq.as_str(),
            profile.equation.as_str()
        )));
    }
    if profile.components.iter().any(|c| c.len() != profile.grid.n_points) {
        return Err(Error::SizeMismatch("profile length differs from grid size".into()));
    }
    Ok(())
}

fn meta(profile: &SolitaryWaveProfile, label: &str, blocks: usize) -> OperatorMeta {
    OperatorMeta {
        label: label.to_string(),
        equation: Some(profile.equation),
        omega: profile.omega,
        mass: profile.mass(),
        grid: profile.grid,
        blocks,
    }
}

/// `(L₋, L₊)` for an NLS profile.
pub fn assemble_nls_l(profile: &SolitaryWaveProfile) -> Result<(OperatorMatrix, OperatorMatrix)> {
    check_equation(profile, Equation::Nls)?;
    let model = profile.scalar_model()?;
    let phi = &profile.components[0];
    let band = vec![Band::real(profile.mass() - profile.omega, f64::INFINITY)];
    let lm = nls_l_minus_matrix(&profile.grid, model, profile.omega, phi);
    let lp = nls_l_plus_matrix(&profile.grid, model, profile.omega, phi);
    Ok((
        OperatorMatrix {
            entries: lm,
            structure: Structure::Selfadjoint,
            essential_bands: band.clone(),
            meta: meta(profile, "nls_l_minus", 1),
        },
        OperatorMatrix {
            entries: lp,
            structure: Structure::Selfadjoint,
            essential_bands: band,
            meta: meta(profile, "nls_l_plus", 1),
        },
    ))
}

fn jl_meta(lminus: &OperatorMatrix, label: &str) -> OperatorMeta {
    let mut m = lminus.meta.clone();
    m.label = label.to_string();
    m.blocks *= 2;
    m
}

/// `[[0, L₋], [−L₊, 0]]` as a block pair.
pub fn nls_jl_pair(lminus: &OperatorMatrix, lplus: &OperatorMatrix) -> Result<HamiltonianPair> {
    if lminus.size() != lplus.size() {
        return Err(Error::SizeMismatch(format!("L₋ is {}, L₊ is {}", lminus.size(), lplus.size())));
    }
    let gap = lminus.meta.mass - lminus.meta.omega;
    Ok(HamiltonianPair {
        upper: lminus.entries.clone(),
        lower: lplus.entries.clone(),
        signs: vec![1.0],
        essential_bands: imaginary_gap_bands(gap),
        meta: jl_meta(lminus, "nls_jl"),
    })
}

pub fn assemble_nls_jl(lminus: &OperatorMatrix, lplus: &OperatorMatrix) -> Result<OperatorMatrix> {
    Ok(nls_jl_pair(lminus, lplus)?.to_operator())
}

/// Real form `[[Re M, −Im M], [Im M, Re M]]` of a complex 2×2 matrix given
/// as `(re, im)`.
fn real_form(re: [[f64; 2]; 2], im: [[f64; 2]; 2]) -> [[f64; 4]; 4] {
    let mut out = [[0.0; 4]; 4];
    for a in 0..2 {
        for b in 0..2 {
            out[a][b] = re[a][b];
            out[a][b + 2] = -im[a][b];
            out[a + 2][b] = im[a][b];
            out[a + 2][b + 2] = re[a][b];
        }
    }
    out
}

fn mul4(a: &[[f64; 4]; 4], b: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub type Mat4 = [[f64; 4]; 4];

/// `(𝐉, 𝐀₁, 𝐁)` for `α₁ = −σ₂`, `β = σ₃`; `𝐉` is the real form of `−i`.
pub fn dirac_real_matrices() -> (Mat4, Mat4, Mat4) {
    let zero = [[0.0; 2]; 2];
    let j = real_form(zero, [[-1.0, 0.0], [0.0, -1.0]]);
    // −σ₂ = [[0, i], [−i, 0]]
    let a1 = real_form(zero, [[0.0, 1.0], [-1.0, 0.0]]);
    let b = real_form([[1.0, 0.0], [0.0, -1.0]], zero);
    (j, a1, b)
}

/// `𝐋 = 𝐉𝐀₁D₁ − ω + g𝐁 + 2g′𝐁Φ⟨𝐁Φ, ·⟩` assembled node by node on the
/// interleaved layout `4j + c`, `c ∈ (Re v, Re u, Im v, Im u)`. `phi_im` is
/// the imaginary part of the spinor; zero for the real profiles produced by
/// the solver.
pub fn assemble_dirac_real_form_interleaved(
    grid: &Grid1D,
    model: &NonlinearityModel,
    omega: f64,
    phi_re: (&[f64], &[f64]),
    phi_im: (&[f64], &[f64]),
) -> Mat<f64> {
    let n = grid.n_points;
    let (jm, a1, bm) = dirac_real_matrices();
    let ja1 = mul4(&jm, &a1);
    let d1 = grid.first_derivative_matrix();
    let wilson = wilson_matrix(grid);
    let mut a = Mat::<f64>::zeros(4 * n, 4 * n);
    for i in 0..n {
        for j in 0..n {
            let d = d1[(i, j)];
            let w = wilson.as_ref().map_or(0.0, |w| w[(i, j)]);
            if d == 0.0 && w == 0.0 {
                continue;
            }
            for r in 0..4 {
                for c in 0..4 {
                    a[(4 * i + r, 4 * j + c)] += ja1[r][c] * d + bm[r][c] * w;
                }
            }
        }
    }
    for j in 0..n {
        let phi = [phi_re.0[j], phi_re.1[j], phi_im.0[j], phi_im.1[j]];
        let bphi: Vec<f64> = (0..4).map(|r| (0..4).map(|c| bm[r][c] * phi[c]).sum()).collect();
        let rho: f64 = phi.iter().zip(&bphi).map(|(p, q)| p * q).sum();
        let g = model.g(rho);
        let gp = model.g_prime(rho);
        for r in 0..4 {
            for c in 0..4 {
                let mut v = g * bm[r][c] + 2.0 * gp * bphi[r] * bphi[c];
                if r == c {
                    v -= omega;
                }
                a[(4 * j + r, 4 * j + c)] += v;
            }
        }
    }
    a
}

/// Permutation taking the interleaved index `4j + c` to `c·N + j`.
pub fn interleaved_to_blocks(n: usize) -> Vec<usize> {
    (0..4 * n).map(|i| (i % 4) * n + i / 4).collect()
}

fn permute(a: &Mat<f64>, perm: &[usize]) -> Mat<f64> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(inv[i], inv[j])])
}

fn dirac_fields(profile: &SolitaryWaveProfile) -> Result<(&NonlinearityModel, Vec<f64>)> {
    check_equation(profile, Equation::Dirac1d)?;
    Ok((profile.scalar_model()?, profile.flat()))
}

/// The `4N` real-form operator on `(Re v, Re u, Im v, Im u)`.
pub fn assemble_dirac_l(profile: &SolitaryWaveProfile) -> Result<OperatorMatrix> {
    let (model, _) = dirac_fields(profile)?;
    let n = profile.grid.n_points;
    let zeros = vec![0.0; n];
    let inter = assemble_dirac_real_form_interleaved(
        &profile.grid,
        model,
        profile.omega,
        (&profile.components[0], &profile.components[1]),
        (&zeros, &zeros),
    );
    let entries = permute(&inter, &interleaved_to_blocks(n));
    let (m, w) = (profile.mass(), profile.omega);
    Ok(OperatorMatrix {
        entries,
        structure: Structure::Selfadjoint,
        essential_bands: vec![Band::real(f64::NEG_INFINITY, -m - w), Band::real(m - w, f64::INFINITY)],
        meta: meta(profile, "dirac_l", 4),
    })
}

/// `(L₊, L₋)` on `(v, u)` from the block formulas.
pub fn assemble_dirac_blocks(profile: &SolitaryWaveProfile) -> Result<(Mat<f64>, Mat<f64>)> {
    let (model, z) = dirac_fields(profile)?;
    Ok((
        dirac_l_plus_matrix(&profile.grid, model, profile.omega, &z),
        dirac_l_minus_matrix(&profile.grid, model, profile.omega, &z),
    ))
}

/// `𝐉𝐋` on the same layout.
pub fn assemble_dirac_jl(l: &OperatorMatrix) -> OperatorMatrix {
    let size = l.size();
    let h = size / 2;
    let entries = Mat::from_fn(size, size, |i, j| if i < h { l.entries[(i + h, j)] } else { -l.entries[(i - h, j)] });
    let mut meta = l.meta.clone();
    meta.label = "dirac_jl".into();
    OperatorMatrix {
        entries,
        structure: Structure::JTimesSelfadjoint,
        essential_bands: imaginary_gap_bands(l.meta.mass - l.meta.omega),
        meta,
    }
}

/// `𝐉𝐋 = [[0, L₋], [−L₊, 0]]` as a block pair with the spinor parity.
pub fn dirac_jl_pair(profile: &SolitaryWaveProfile) -> Result<HamiltonianPair> {
    let (lp, lm) = assemble_dirac_blocks(profile)?;
    Ok(HamiltonianPair {
        upper: lm,
        lower: lp,
        signs: vec![1.0, -1.0],
        essential_bands: imaginary_gap_bands(profile.mass() - profile.omega),
        meta: meta(profile, "dirac_jl", 4),
    })
}

/// NLS `JL` block pair from a profile.
pub fn nls_pair(profile: &SolitaryWaveProfile) -> Result<HamiltonianPair> {
    let (lm, lp) = assemble_nls_l(profile)?;
    nls_jl_pair(&lm, &lp)
}

/// Block pair for the equation of `profile`.
pub fn jl_pair(profile: &SolitaryWaveProfile) -> Result<HamiltonianPair> {
    match profile.equation {
        Equation::Nls => nls_pair(profile),
        Equation::Dirac1d => dirac_jl_pair(profile),
        Equation::Nlw => Err(Error::Unsupported("use the derrick module for NLW".into())),
    }
}

/// Real-form vectors of length `4N` built from the profile.
#[derive(Clone, Debug)]
pub struct DiracVectors {
    /// `Φ = (v, u, 0, 0)`.
    pub phi: Vec<f64>,
    /// `𝐉Φ`.
    pub j_phi: Vec<f64>,
    /// `∂ₓΦ`.
    pub dx_phi: Vec<f64>,
    /// `𝐉∂ₓΦ`.
    pub j_dx_phi: Vec<f64>,
    /// `𝐀₁Φ`.
    pub a1_phi: Vec<f64>,
    /// `x·𝐉Φ`.
    pub x_j_phi: Vec<f64>,
}

pub(crate) fn apply_block4(m: &[[f64; 4]; 4], x: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; 4 * n];
    for r in 0..4 {
        for c in 0..4 {
            let w = m[r][c];
            if w != 0.0 {
                for j in 0..n {
                    out[r * n + j] += w * x[c * n + j];
                }
            }
        }
    }
    out
}

pub fn dirac_vectors(profile: &SolitaryWaveProfile) -> Result<DiracVectors> {
    check_equation(profile, Equation::Dirac1d)?;
    let n = profile.grid.n_points;
    let (jm, a1, _) = dirac_real_matrices();
    let d1 = profile.grid.first_derivative_matrix();
    let mut phi = profile.flat();
    phi.resize(4 * n, 0.0);
    let mut dx_phi = matvec(&d1, &profile.components[0]);
    dx_phi.extend(matvec(&d1, &profile.components[1]));
    dx_phi.resize(4 * n, 0.0);
    let j_phi = apply_block4(&jm, &phi, n);
    let j_dx_phi = apply_block4(&jm, &dx_phi, n);
    let a1_phi = apply_block4(&a1, &phi, n);
    let x = profile.grid.nodes();
    let x_j_phi = j_phi.iter().enumerate().map(|(i, v)| x[i % n] * v).collect();
    Ok(DiracVectors { phi, j_phi, dx_phi, j_dx_phi, a1_phi, x_j_phi })
}

/// `α₀Φ` with `α₀ = σ₁`, i.e. `(u, v)` in the real part, and its partner
/// `𝐉α₀Φ` in the imaginary part; together they span the real invariant
/// plane of `𝐉𝐋` carrying `±2ωi`.
pub fn alpha0_eigenvector(profile: &SolitaryWaveProfile) -> Result<(Vec<f64>, Vec<f64>)> {
    check_equation(profile, Equation::Dirac1d)?;
    let n = profile.grid.n_points;
    let mut a = Vec::with_capacity(4 * n);
    a.extend_from_slice(&profile.components[1]);
    a.extend_from_slice(&profile.components[0]);
    a.resize(4 * n, 0.0);
    let (jm, _, _) = dirac_real_matrices();
    let b = apply_block4(&jm, &a, n);
    Ok((a, b))
}

/// `{Φ, 𝐉∂ₓΦ}`, spanning the kernel of `(𝐉𝐋)ᵀ = −𝐋𝐉`.
pub fn adjoint_null_vectors(profile: &SolitaryWaveProfile) -> Result<Vec<Vec<f64>>> {
    let v = dirac_vectors(profile)?;
    Ok(vec![v.phi, v.j_dx_phi])
}

/// Whether `±2ωi` lies inside the essential bands `|Im λ| ≥ m − ω`.
pub fn alpha0_embedded(m: f64, omega: f64) -> bool {
    2.0 * omega.abs() > m - omega.abs()
}

/// `(φ, ∂ₓφ)` embedded as `(0, φ)` and `(∂ₓφ, 0)` in the NLS `JL` layout.
pub fn nls_kernel_vectors(profile: &SolitaryWaveProfile) -> Result<(Vec<f64>, Vec<f64>)> {
    check_equation(profile, Equation::Nls)?;
    let n = profile.grid.n_points;
    let phi = &profile.components[0];
    let dphi = matvec(&profile.grid.first_derivative_matrix(), phi);
    let mut a = vec![0.0; n];
    a.extend_from_slice(phi);
    let mut b = dphi;
    b.resize(2 * n, 0.0);
    Ok((a, b))
}

/// Row-major text dump: a header line then one row per line.
pub fn write_matrix_text(op: &OperatorMatrix, out: &mut impl std::io::Write) -> std::io::Result<()> {
    let n = op.size();
    writeln!(
        out,
        "# size {n} structure {} omega {:.15e} m {:.15e} label {}",
        serde_json::to_string(&op.structure).unwrap_or_default().trim_matches('"'),
        op.meta.omega,
        op.meta.mass,
        op.meta.label
    )?;
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| format!("{:.17e}", op.entries[(i, j)])).collect();
        writeln!(out, "{}", row.join(" "))?;
    }
    Ok(())
}
