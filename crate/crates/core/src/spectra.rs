//! Dense eigensolving, classification against essential bands, residuals and
//! eigenvalue counting.
//!
//! Two paths produce a [`SpectrumReport`]. [`eigen_decompose`] runs a dense
//! real nonsymmetric eigensolver on any operator. [`hamiltonian_spectrum`]
//! exploits `JL = [[0, A], [−B, 0]]`: `λ²` are the eigenvalues of `−AB`
//! and the eigenvector is `(p, −Bp/λ)`, so pairs `±λ` and `(λ, λ̄)` come out
//! exactly paired. Each parity sector is solved separately.

use std::collections::BTreeMap;

use faer::{c64, Mat, MatRef};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::matvec;
use crate::operators::{Band, HamiltonianPair, OperatorMatrix, OperatorMeta};
use crate::symmetry::SectorBasis;

pub const DEFAULT_MAX_SIZE: usize = 4096;

/// Operators that can be applied to real vectors.
pub trait LinearOperator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64]) -> Vec<f64>;
}

impl LinearOperator for OperatorMatrix {
    fn dim(&self) -> usize {
        self.size()
    }
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        OperatorMatrix::apply(self, x)
    }
}

impl LinearOperator for HamiltonianPair {
    fn dim(&self) -> usize {
        2 * self.half_size()
    }
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        HamiltonianPair::apply(self, x)
    }
}

impl LinearOperator for Mat<f64> {
    fn dim(&self) -> usize {
        self.nrows()
    }
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        matvec(self, x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    EssentialArtifact,
    IsolatedPoint,
    EmbeddedCandidate,
    NearZero,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::EssentialArtifact => "essential_artifact",
            Classification::IsolatedPoint => "isolated_point",
            Classification::EmbeddedCandidate => "embedded_candidate",
            Classification::NearZero => "near_zero",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ClassifyOptions {
    /// Distance to a band under which a delocalized eigenvalue is an artifact;
    /// `None` means `10/L`.
    pub band_distance: Option<f64>,
    /// `None` means `1e-4·m`.
    pub zero_tol: Option<f64>,
    /// Central-half mass at or above which an eigenvector counts as localized.
    pub localization_threshold: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self { band_distance: None, zero_tol: None, localization_threshold: 0.6 }
    }
}

#[derive(Clone, Debug)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<c64>,
    /// Eigenvectors kept by index; all of them for small problems, otherwise
    /// those that are localized or close to zero.
    pub eigenvectors: BTreeMap<usize, Vec<c64>>,
    /// Central-half mass of each eigenvector, when vectors were computed.
    pub localization: Option<Vec<f64>>,
    pub classifications: Vec<Classification>,
    pub residuals: Vec<Option<f64>>,
    /// Parity sector index per eigenvalue for the structured path.
    pub sectors: Option<Vec<u8>>,
    pub essential_bands: Vec<Band>,
    pub meta: OperatorMeta,
    /// Splitting scale of a four-fold Jordan block at zero; eigenvalues below
    /// it are not resolved from zero.
    pub zero_resolution: f64,
}

fn inf_norm(m: MatRef<'_, f64>) -> f64 {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)].abs()).sum::<f64>()).fold(0.0, f64::max)
}

fn jordan_floor(scale: f64) -> f64 {
    (f64::EPSILON * scale).powf(0.25)
}

impl SpectrumReport {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn count(&self, class: Classification) -> usize {
        self.classifications.iter().filter(|&&c| c == class).count()
    }

    /// Largest distance from an eigenvalue to the nearest conjugate partner.
    pub fn conjugation_defect(&self) -> f64 {
        pairing_defect(&self.eigenvalues, |z| z.conj())
    }

    /// Largest distance from an eigenvalue to the nearest `−λ` partner.
    pub fn reflection_defect(&self) -> f64 {
        pairing_defect(&self.eigenvalues, |z| -z)
    }
}

/// Matches every eigenvalue with a distinct image under `map` greedily by
/// distance and returns the worst match.
pub fn pairing_defect(values: &[c64], map: impl Fn(c64) -> c64) -> f64 {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].re.total_cmp(&values[b].re).then(values[a].im.total_cmp(&values[b].im)));
    let sorted: Vec<c64> = order.iter().map(|&i| values[i]).collect();
    let mut used = vec![false; n];
    let mut worst = 0.0f64;
    for i in 0..n {
        let target = map(sorted[i]);
        // candidates lie near target.re in the sorted order
        let start = sorted.partition_point(|z| z.re < target.re - 1e-6 * (1.0 + target.re.abs()));
        let mut best: Option<(usize, f64)> = None;
        let mut k = start;
        while k < n && sorted[k].re <= target.re + 1e-6 * (1.0 + target.re.abs()) {
            if !used[k] {
                let d = (sorted[k] - target).norm();
                if best.is_none_or(|(_, bd)| d < bd) {
                    best = Some((k, d));
                }
            }
            k += 1;
        }
        let (k, d) = match best {
            Some(b) => b,
            None => {
                // fall back to a full search
                let mut b = (usize::MAX, f64::INFINITY);
                for (k, z) in sorted.iter().enumerate() {
                    if !used[k] {
                        let d = (*z - target).norm();
                        if d < b.1 {
                            b = (k, d);
                        }
                    }
                }
                b
            }
        };
        if k != usize::MAX && d <= 1e-6 {
            // consume the partner only when it is a genuine match
            used[k] = true;
        }
        worst = worst.max(d);
    }
    worst
}

fn sequential() {
    static ONCE: std::sync::Once = std::sync::Once::new();
    ONCE.call_once(|| faer::set_global_parallelism(faer::Par::Seq));
}

/// Central-half mass of a complex vector with `blocks` length-`N` blocks.
pub fn central_mass(v: &[c64], meta: &OperatorMeta) -> f64 {
    let n = meta.grid.n_points;
    let half = 0.5 * meta.grid.half_width;
    let mut inner = 0.0;
    let mut total = 0.0;
    for (i, z) in v.iter().enumerate() {
        let w = z.norm_sqr();
        total += w;
        if meta.grid.node(i % n).abs() <= half {
            inner += w;
        }
    }
    if total > 0.0 {
        inner / total
    } else {
        0.0
    }
}

fn normalize(v: &mut [c64]) {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|z| *z /= norm);
    }
}

fn keep_all(size: usize) -> bool {
    size <= 2048
}

fn keep_vector(size: usize, lambda: c64, loc: f64) -> bool {
    keep_all(size) || loc >= 0.3 || lambda.norm() < 1e-2
}

/// Full spectrum of a dense real matrix.
pub fn eigen_decompose(a: &OperatorMatrix, want_vectors: bool, max_size: usize) -> Result<SpectrumReport> {
    sequential();
    let n = a.size();
    if n > max_size {
        return Err(Error::TooLarge { size: n, max: max_size });
    }
    if a.entries.ncols() != n {
        return Err(Error::SizeMismatch("operator is not square".into()));
    }
    for j in 0..n {
        for i in 0..n {
            if !a.entries[(i, j)].is_finite() {
                return Err(Error::Eigensolver(format!("non-finite entry at ({i}, {j})")));
            }
        }
    }
    let (eigenvalues, eigenvectors, localization) = if want_vectors {
        let evd = a.entries.eigen().map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
        let s = evd.S();
        let u = evd.U();
        let values: Vec<c64> = s.column_vector().iter().copied().collect();
        let mut kept = BTreeMap::new();
        let mut loc = Vec::with_capacity(n);
        for k in 0..n {
            let mut v: Vec<c64> = (0..n).map(|i| u[(i, k)]).collect();
            normalize(&mut v);
            let l = central_mass(&v, &a.meta);
            loc.push(l);
            if keep_vector(n, values[k], l) {
                kept.insert(k, v);
            }
        }
        (values, kept, Some(loc))
    } else {
        let values = a.entries.eigenvalues().map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
        (values, BTreeMap::new(), None)
    };
    let len = eigenvalues.len();
    Ok(SpectrumReport {
        eigenvalues,
        eigenvectors,
        localization,
        classifications: Vec::new(),
        residuals: vec![None; len],
        sectors: None,
        essential_bands: a.essential_bands.clone(),
        meta: a.meta.clone(),
        zero_resolution: jordan_floor(inf_norm(a.entries.as_ref()).powi(2)),
    })
}

/// Spectrum of `[[0, A], [−B, 0]]` through `−AB`, sector by sector.
pub fn hamiltonian_spectrum(pair: &HamiltonianPair, want_vectors: bool, max_size: usize) -> Result<SpectrumReport> {
    sequential();
    let h = pair.half_size();
    let grid = &pair.meta.grid;
    let sectors = SectorBasis::pair(grid, &pair.signs);
    if sectors[0].full_len() != h {
        return Err(Error::SizeMismatch(format!(
            "block size {h} does not match {} components on {} nodes",
            pair.signs.len(),
            grid.n_points
        )));
    }
    let mut eigenvalues = Vec::with_capacity(2 * h);
    let mut vectors: Vec<Option<Vec<c64>>> = Vec::with_capacity(2 * h);
    let mut locs = Vec::with_capacity(2 * h);
    let mut sector_ids = Vec::with_capacity(2 * h);
    let mut floor_scale = 0.0f64;
    for (sid, basis) in sectors.iter().enumerate() {
        let d = basis.dim();
        if d > max_size {
            return Err(Error::TooLarge { size: d, max: max_size });
        }
        let a = basis.reduce(&pair.upper);
        let b = basis.reduce(&pair.lower);
        floor_scale = floor_scale.max(inf_norm(a.as_ref()) * inf_norm(b.as_ref()));
        let m = -(&a * &b);
        if want_vectors {
            let evd = m.eigen().map_err(|e| Error::Eigensolver(format!("sector {sid}: {e:?}")))?;
            let s = evd.S();
            let u = evd.U();
            let u_re = Mat::from_fn(d, d, |i, k| u[(i, k)].re);
            let u_im = Mat::from_fn(d, d, |i, k| u[(i, k)].im);
            let bu_re = &b * &u_re;
            let bu_im = &b * &u_im;
            let lift = |re: &[f64], im: &[f64]| -> Vec<c64> {
                basis.lift(re).into_iter().zip(basis.lift(im)).map(|(r, i)| c64::new(r, i)).collect()
            };
            for k in 0..d {
                let mu = s.column_vector()[k];
                let lam = mu.sqrt();
                let p_re: Vec<f64> = u_re.col(k).iter().copied().collect();
                let p_im: Vec<f64> = u_im.col(k).iter().copied().collect();
                let p_full = lift(&p_re, &p_im);
                for sign in [1.0, -1.0] {
                    let l = lam * sign;
                    let (q_re, q_im): (Vec<f64>, Vec<f64>) = if l.norm() > 0.0 {
                        (0..d)
                            .map(|i| {
                                let q = -c64::new(bu_re[(i, k)], bu_im[(i, k)]) / l;
                                (q.re, q.im)
                            })
                            .unzip()
                    } else {
                        (vec![0.0; d], vec![0.0; d])
                    };
                    let mut v = p_full.clone();
                    v.extend(lift(&q_re, &q_im));
                    normalize(&mut v);
                    let loc = central_mass(&v, &pair.meta);
                    locs.push(loc);
                    vectors.push(if keep_vector(2 * h, l, loc) { Some(v) } else { None });
                    eigenvalues.push(l);
                    sector_ids.push(sid as u8);
                }
            }
        } else {
            let values = m.eigenvalues().map_err(|e| Error::Eigensolver(format!("sector {sid}: {e:?}")))?;
            for mu in values {
                let lam = mu.sqrt();
                eigenvalues.push(lam);
                eigenvalues.push(-lam);
                sector_ids.push(sid as u8);
                sector_ids.push(sid as u8);
            }
        }
    }
    let len = eigenvalues.len();
    let eigenvectors = vectors.into_iter().enumerate().filter_map(|(i, v)| v.map(|v| (i, v))).collect();
    Ok(SpectrumReport {
        eigenvalues,
        eigenvectors,
        localization: if want_vectors { Some(locs) } else { None },
        classifications: Vec::new(),
        residuals: vec![None; len],
        sectors: Some(sector_ids),
        essential_bands: pair.essential_bands.clone(),
        meta: pair.meta.clone(),
        zero_resolution: jordan_floor(floor_scale),
    })
}

/// Assigns a [`Classification`] to every eigenvalue.
pub fn classify(mut report: SpectrumReport, bands: &[Band], opts: &ClassifyOptions) -> Result<SpectrumReport> {
    let loc = report.localization.clone().ok_or(Error::MissingEigenvectors)?;
    let delta = opts.band_distance.unwrap_or(10.0 / report.meta.grid.half_width);
    let zero_tol = opts.zero_tol.unwrap_or(1e-4 * report.meta.mass.max(f64::MIN_POSITIVE));
    let near_zero = zero_tol.max(report.zero_resolution);
    report.classifications = report
        .eigenvalues
        .iter()
        .zip(&loc)
        .map(|(z, &l)| {
            if z.norm() < near_zero {
                return Classification::NearZero;
            }
            let d = bands.iter().map(|b| b.distance(z.re, z.im)).fold(f64::INFINITY, f64::min);
            let localized = l >= opts.localization_threshold;
            if !localized && d <= delta {
                Classification::EssentialArtifact
            } else if localized && bands.iter().any(|b| b.contains(z.re, z.im, zero_tol)) {
                Classification::EmbeddedCandidate
            } else {
                Classification::IsolatedPoint
            }
        })
        .collect();
    report.essential_bands = bands.to_vec();
    Ok(report)
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `‖Av − λv‖/‖v‖` for `v = v_re + i·v_im`.
pub fn residual_check(a: &impl LinearOperator, v_re: &[f64], v_im: &[f64], lambda: c64) -> f64 {
    let ar = a.apply(v_re);
    let ai = a.apply(v_im);
    let mut acc = 0.0;
    for i in 0..ar.len() {
        let rr = ar[i] - (lambda.re * v_re[i] - lambda.im * v_im[i]);
        let ri = ai[i] - (lambda.re * v_im[i] + lambda.im * v_re[i]);
        acc += rr * rr + ri * ri;
    }
    let vn = (norm(v_re).powi(2) + norm(v_im).powi(2)).sqrt();
    acc.sqrt() / vn
}

/// `‖A[x y] − [x y]·M‖ / ‖[x y]‖` with `M = [[a, b], [−b, a]]`; the real-form
/// counterpart of an eigenpair `a ± ib`.
pub fn invariant_subspace_residual(op: &impl LinearOperator, x: &[f64], y: &[f64], a: f64, b: f64) -> f64 {
    let ax = op.apply(x);
    let ay = op.apply(y);
    let mut acc = 0.0;
    for i in 0..x.len() {
        let r1 = ax[i] - (a * x[i] - b * y[i]);
        let r2 = ay[i] - (b * x[i] + a * y[i]);
        acc += r1 * r1 + r2 * r2;
    }
    acc.sqrt() / (norm(x).powi(2) + norm(y).powi(2)).sqrt()
}

/// Fills `report.residuals` for every retained eigenvector.
pub fn verify_pairs(report: &mut SpectrumReport, op: &impl LinearOperator) {
    for (&k, v) in &report.eigenvectors {
        let re: Vec<f64> = v.iter().map(|z| z.re).collect();
        let im: Vec<f64> = v.iter().map(|z| z.im).collect();
        report.residuals[k] = Some(residual_check(op, &re, &im, report.eigenvalues[k]));
    }
}

/// Number of eigenvalues strictly inside `|λ − center| < radius`.
pub fn projector_rank(report: &SpectrumReport, center: c64, radius: f64) -> Result<usize> {
    let mut count = 0;
    for z in &report.eigenvalues {
        let d = (*z - center).norm();
        let gap = (d - radius).abs();
        if gap < 0.1 * radius {
            return Err(Error::ContourGrazesSpectrum { distance: gap, radius });
        }
        if d < radius {
            count += 1;
        }
    }
    Ok(count)
}

/// Tries `radius`, then `radius·1.2` and `radius·0.8` if the circle grazes
/// an eigenvalue. Returns the rank and the radius used.
pub fn projector_rank_with_retry(report: &SpectrumReport, center: c64, radius: f64) -> Result<(usize, f64)> {
    let mut last = None;
    for r in [radius, 1.2 * radius, 0.8 * radius] {
        match projector_rank(report, center, r) {
            Ok(k) => return Ok((k, r)),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// Real eigenvalues with `|Re λ|` above both `re_tol` and the zero resolution, `|Im λ| ≤ im_tol` and a localized
/// eigenvector, sorted decreasing; a real pair appears as `λ` and `−λ`.
pub fn detect_real_pairs(report: &SpectrumReport, re_tol: f64, im_tol: f64) -> Vec<f64> {
    let mut out: Vec<f64> = report
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(i, z)| {
            let class = report.classifications.get(*i).copied();
            z.im.abs() <= im_tol
                && z.re.abs() >= re_tol.max(report.zero_resolution)
                && class != Some(Classification::EssentialArtifact)
        })
        .map(|(_, z)| z.re)
        .collect();
    out.sort_by(|a, b| b.total_cmp(a));
    out
}

/// Largest `|Re λ · Im λ| / (|λ|² + 1)` over isolated eigenvalues.
pub fn axis_dichotomy_defect(report: &SpectrumReport) -> f64 {
    report
        .eigenvalues
        .iter()
        .zip(&report.classifications)
        .filter(|(_, c)| **c == Classification::IsolatedPoint)
        .map(|(z, _)| (z.re * z.im).abs() / (z.norm_sqr() + 1.0))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid1D;
    use crate::nonlinearity::NonlinearityModel;
    use crate::operators::{nls_pair, Structure};
    use crate::profiles::{solve_nls_profile, SolverOptions};

    fn meta(n: usize) -> OperatorMeta {
        OperatorMeta {
            label: "test".into(),
            equation: None,
            omega: 0.0,
            mass: 1.0,
            grid: Grid1D::fourier(1.0, n.max(4) + n.max(4) % 2).unwrap(),
            blocks: 1,
        }
    }

    fn op(entries: Mat<f64>) -> OperatorMatrix {
        let n = entries.nrows();
        OperatorMatrix { entries, structure: Structure::General, essential_bands: vec![], meta: meta(n) }
    }

    #[test]
    fn zero_matrix() {
        let r = eigen_decompose(&op(Mat::zeros(6, 6)), false, DEFAULT_MAX_SIZE).unwrap();
        assert!(r.eigenvalues.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn canonical_j() {
        let j = Mat::from_fn(4, 4, |i, k| match (i, k) {
            (0, 2) | (1, 3) => 1.0,
            (2, 0) | (3, 1) => -1.0,
            _ => 0.0,
        });
        let r = eigen_decompose(&op(j), true, DEFAULT_MAX_SIZE).unwrap();
        for z in &r.eigenvalues {
            assert!(z.re.abs() < 1e-14 && (z.im.abs() - 1.0).abs() < 1e-14);
        }
        assert!(r.conjugation_defect() < 1e-14);
    }

    #[test]
    fn fourier_laplacian_symbol() {
        let g = Grid1D::fourier(std::f64::consts::PI, 8).unwrap();
        let a = g.second_derivative_matrix() * faer::Scale(-1.0);
        let r = eigen_decompose(&op(a), false, DEFAULT_MAX_SIZE).unwrap();
        let mut re: Vec<f64> = r.eigenvalues.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        for (got, want) in re.iter().zip([0.0, 1.0, 1.0, 4.0, 4.0, 9.0, 9.0, 16.0]) {
            assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        }
    }

    #[test]
    fn size_cap() {
        assert!(matches!(eigen_decompose(&op(Mat::zeros(8, 8)), false, 4), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn residual_of_random_pair_is_large() {
        let a = Mat::from_fn(5, 5, |i, j| ((i * 3 + j * 7) % 5) as f64);
        let x: Vec<f64> = (0..5).map(|i| i as f64 + 0.5).collect();
        let zero = vec![0.0; 5];
        assert!(residual_check(&a, &x, &zero, c64::new(0.3, 0.2)) > 0.1);
    }

    #[test]
    fn projector_rank_counts_and_grazes() {
        let mut r = eigen_decompose(&op(Mat::zeros(2, 2)), false, DEFAULT_MAX_SIZE).unwrap();
        r.eigenvalues = vec![c64::new(0.0, 0.0), c64::new(0.5, 0.0), c64::new(-0.01, 0.0)];
        assert_eq!(projector_rank(&r, c64::new(0.0, 0.0), 0.1).unwrap(), 2);
        assert_eq!(projector_rank(&r, c64::new(10.0, 0.0), 0.1).unwrap(), 0);
        assert!(projector_rank(&r, c64::new(0.0, 0.0), 0.49).is_err());
        let (k, used) = projector_rank_with_retry(&r, c64::new(0.0, 0.0), 0.49).unwrap();
        // 1.2·r is tried first and clears 0.5 by more than 10%
        assert_eq!(k, 3);
        assert!((used - 0.588).abs() < 1e-12);
    }

    #[test]
    fn structured_matches_dense() {
        let model = NonlinearityModel::soler_power(3, 1.0).unwrap();
        let grid = Grid1D::fourier(20.0, 64).unwrap();
        let p = solve_nls_profile(&model, 0.5, &grid, &SolverOptions::default()).unwrap();
        let pair = nls_pair(&p).unwrap();
        let s = hamiltonian_spectrum(&pair, true, DEFAULT_MAX_SIZE).unwrap();
        let d = eigen_decompose(&pair.to_operator(), false, DEFAULT_MAX_SIZE).unwrap();
        assert_eq!(s.len(), d.len());
        let mut all = s.eigenvalues.clone();
        all.extend(d.eigenvalues.iter().map(|z| -*z));
        // every structured eigenvalue has a dense counterpart: λ paired with −(−λ)
        assert!(pairing_defect(&all, |z| -z) < 1e-3);
        assert!(s.conjugation_defect() < 1e-10);
        assert!(s.reflection_defect() < 1e-12);
        let mut s = classify(s, &pair.essential_bands, &ClassifyOptions::default()).unwrap();
        verify_pairs(&mut s, &pair);
        let real = detect_real_pairs(&s, 1e-3, 1e-4);
        assert_eq!(real.len(), 2);
        assert!((real[0] + real[1]).abs() < 1e-12);
        let k = real.iter().position(|&x| x > 0.0).unwrap();
        let idx = s.eigenvalues.iter().position(|z| (z.re - real[k]).abs() < 1e-14 && z.im.abs() < 1e-4).unwrap();
        assert!(s.residuals[idx].unwrap() < 1e-6);
    }

    #[test]
    fn critical_kernel_splitting_stays_below_floor() {
        let model = NonlinearityModel::soler_power(2, 1.0).unwrap();
        let grid = Grid1D::fourier(30.0, 512).unwrap();
        let p = solve_nls_profile(&model, 0.25, &grid, &SolverOptions::default()).unwrap();
        let pair = nls_pair(&p).unwrap();
        let s = hamiltonian_spectrum(&pair, true, DEFAULT_MAX_SIZE).unwrap();
        assert!(s.zero_resolution > 0.0 && s.zero_resolution < 1e-2);
        let s = classify(s, &pair.essential_bands, &ClassifyOptions::default()).unwrap();
        assert!(detect_real_pairs(&s, 1e-3, 1e-4).is_empty());
        assert!(s.count(Classification::NearZero) >= 4);
        assert_eq!(axis_dichotomy_defect(&s), 0.0);
    }
}
