//! C ABI over `soliton-spectra`.
//!
//! Handles are opaque and owned by the caller, who releases them with the
//! matching `*_free`. Every fallible call returns an [`SsStatus`]; on failure
//! the message is available from [`ss_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use soliton_spectra::config::Command;
use soliton_spectra::derrick::derrick_instability;
use soliton_spectra::error::Error;
use soliton_spectra::grid::{Grid1D, GridSpec, Scheme};
use soliton_spectra::nonlinearity::{NonlinearityModel, WaveNonlinearity};
use soliton_spectra::profiles::{Equation, SolitaryWaveProfile, SolverOptions};
use soliton_spectra::spectra::{detect_real_pairs, SpectrumReport};
use soliton_spectra::stability::{
    charge_q, dq_domega_local, jl_spectrum, scan_row, solve_on_spec, ScanOptions, VkVerdict,
};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SsStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidArgument = 2,
    DomainTooSmall = 3,
    NotConverged = 4,
    Eigensolver = 5,
    Numerical = 6,
    Io = 7,
    BufferTooSmall = 8,
    ChecksFailed = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SsEquation {
    Nls = 0,
    Dirac1d = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SsVerdict {
    StableSign = 0,
    UnstableSign = 1,
    Critical = 2,
}

/// One stability row; fields are NaN or zero when the row failed.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct SsScanRow {
    pub omega: f64,
    pub charge: f64,
    pub dq_domega: f64,
    pub real_pair_count: usize,
    pub max_real: f64,
    pub nullspace_dim: usize,
    pub half_width: f64,
    pub verdict: SsVerdict,
}

pub struct SsModel(NonlinearityModel);

pub struct SsProfile {
    profile: SolitaryWaveProfile,
    model: NonlinearityModel,
}

pub struct SsSpectrum {
    report: SpectrumReport,
    real: Vec<f64>,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(err: &Error) -> SsStatus {
    match err {
        Error::DomainTooSmall { .. } => SsStatus::DomainTooSmall,
        Error::NoShootingBracket(_) | Error::NewtonDiverged { .. } => SsStatus::NotConverged,
        Error::Eigensolver(_)
        | Error::TooLarge { .. }
        | Error::MissingEigenvectors
        | Error::ContourGrazesSpectrum { .. } => SsStatus::Eigensolver,
        Error::ImaginaryKinetic(_) | Error::NoInstability(_) => SsStatus::Numerical,
        Error::Io(_) => SsStatus::Io,
        _ => SsStatus::InvalidArgument,
    }
}

fn fail(status: SsStatus, msg: impl Into<String>) -> SsStatus {
    set_error(msg.into());
    status
}

fn guard(f: impl FnOnce() -> Result<(), SsStatus>) -> SsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SsStatus::Ok,
        Ok(Err(s)) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(SsStatus::Panic, msg)
        }
    }
}

trait Lift<T> {
    fn lift(self) -> Result<T, SsStatus>;
}

impl<T> Lift<T> for soliton_spectra::error::Result<T> {
    fn lift(self) -> Result<T, SsStatus> {
        self.map_err(|e| fail(status_of(&e), e.to_string()))
    }
}

unsafe fn deref<'a, T>(p: *const T, name: &str) -> Result<&'a T, SsStatus> {
    unsafe { p.as_ref() }.ok_or_else(|| fail(SsStatus::NullArgument, format!("{name} is null")))
}

unsafe fn out_ptr<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, SsStatus> {
    unsafe { p.as_mut() }.ok_or_else(|| fail(SsStatus::NullArgument, format!("{name} is null")))
}

unsafe fn c_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, SsStatus> {
    if p.is_null() {
        return Err(fail(SsStatus::NullArgument, format!("{name} is null")));
    }
    unsafe { CStr::from_ptr(p) }.to_str().map_err(|_| fail(SsStatus::InvalidArgument, format!("{name} is not UTF-8")))
}

unsafe fn slice<'a>(p: *const f64, len: usize, name: &str) -> Result<&'a [f64], SsStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(fail(SsStatus::NullArgument, format!("{name} is null")));
    }
    Ok(unsafe { std::slice::from_raw_parts(p, len) })
}

unsafe fn copy_out(src: &[f64], dst: *mut f64, len: usize) -> Result<(), SsStatus> {
    if len < src.len() {
        return Err(fail(SsStatus::BufferTooSmall, format!("need {} values, buffer holds {len}", src.len())));
    }
    if dst.is_null() {
        return Err(fail(SsStatus::NullArgument, "output buffer is null"));
    }
    unsafe { ptr::copy_nonoverlapping(src.as_ptr(), dst, src.len()) };
    Ok(())
}

fn equation(e: SsEquation) -> Equation {
    match e {
        SsEquation::Nls => Equation::Nls,
        SsEquation::Dirac1d => Equation::Dirac1d,
    }
}

fn grid_spec(half_width: f64, n_points: usize) -> GridSpec {
    let l = if half_width > 0.0 { Some(half_width) } else { None };
    GridSpec::new(l, n_points, Scheme::FourierPeriodic)
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ss_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the last error of this thread into `buf` (NUL-terminated, truncated
/// to `len`) and returns the full message length without the terminator.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn ss_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            unsafe {
                ptr::copy_nonoverlapping(msg.as_ptr().cast(), buf, n);
                *buf.add(n) = 0;
            }
        }
        msg.len()
    })
}

/// `g(s) = m − s^k`.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn ss_model_soler_power(k: u32, m: f64, out: *mut *mut SsModel) -> SsStatus {
    guard(|| {
        let out = unsafe { out_ptr(out, "out") }?;
        let model = NonlinearityModel::soler_power(k, m).lift()?;
        *out = Box::into_raw(Box::new(SsModel(model)));
        Ok(())
    })
}

/// `g(s) = c₀ + c₁s + …` with `c₀` the mass.
///
/// # Safety
/// `coefficients` must be valid for `len` reads and `out` for a write.
#[no_mangle]
pub unsafe extern "C" fn ss_model_polynomial(coefficients: *const f64, len: usize, out: *mut *mut SsModel) -> SsStatus {
    guard(|| {
        let out = unsafe { out_ptr(out, "out") }?;
        let c = unsafe { slice(coefficients, len, "coefficients") }?;
        let model = NonlinearityModel::polynomial(c.to_vec()).lift()?;
        *out = Box::into_raw(Box::new(SsModel(model)));
        Ok(())
    })
}

/// # Safety
/// `model` must be null or come from an `ss_model_*` constructor.
#[no_mangle]
pub unsafe extern "C" fn ss_model_free(model: *mut SsModel) {
    if !model.is_null() {
        drop(unsafe { Box::from_raw(model) });
    }
}

/// # Safety
/// `model` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn ss_model_g(model: *const SsModel, s: f64, out: *mut f64) -> SsStatus {
    guard(|| {
        let m = unsafe { deref(model, "model") }?;
        *unsafe { out_ptr(out, "out") }? = m.0.g(s);
        Ok(())
    })
}

/// Solves the profile at `omega`. `half_width <= 0` picks the domain from
/// the decay rate.
///
/// # Safety
/// `model` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn ss_profile_solve(
    model: *const SsModel,
    eq: SsEquation,
    omega: f64,
    half_width: f64,
    n_points: usize,
    out: *mut *mut SsProfile,
) -> SsStatus {
    guard(|| {
        let m = unsafe { deref(model, "model") }?;
        let out = unsafe { out_ptr(out, "out") }?;
        let spec = grid_spec(half_width, n_points);
        let profile = solve_on_spec(equation(eq), &m.0, omega, &spec, &SolverOptions::default()).lift()?;
        *out = Box::into_raw(Box::new(SsProfile { profile, model: m.0.clone() }));
        Ok(())
    })
}

/// # Safety
/// `profile` must be null or come from [`ss_profile_solve`].
#[no_mangle]
pub unsafe extern "C" fn ss_profile_free(profile: *mut SsProfile) {
    if !profile.is_null() {
        drop(unsafe { Box::from_raw(profile) });
    }
}

/// Grid size and component count.
///
/// # Safety
/// `profile` must be a live handle; null outputs are skipped.
#[no_mangle]
pub unsafe extern "C" fn ss_profile_shape(
    profile: *const SsProfile,
    n_points: *mut usize,
    components: *mut usize,
    half_width: *mut f64,
) -> SsStatus {
    guard(|| {
        let p = &unsafe { deref(profile, "profile") }?.profile;
        if let Some(o) = unsafe { n_points.as_mut() } {
            *o = p.grid.n_points;
        }
        if let Some(o) = unsafe { components.as_mut() } {
            *o = p.components.len();
        }
        if let Some(o) = unsafe { half_width.as_mut() } {
            *o = p.grid.half_width;
        }
        Ok(())
    })
}

/// # Safety
/// `profile` must be a live handle and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn ss_profile_nodes(profile: *const SsProfile, buf: *mut f64, len: usize) -> SsStatus {
    guard(|| {
        let p = &unsafe { deref(profile, "profile") }?.profile;
        unsafe { copy_out(&p.nodes(), buf, len) }
    })
}

/// # Safety
/// `profile` must be a live handle and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn ss_profile_component(
    profile: *const SsProfile,
    index: usize,
    buf: *mut f64,
    len: usize,
) -> SsStatus {
    guard(|| {
        let p = &unsafe { deref(profile, "profile") }?.profile;
        let c = p
            .components
            .get(index)
            .ok_or_else(|| fail(SsStatus::InvalidArgument, format!("component {index} out of range")))?;
        unsafe { copy_out(c, buf, len) }
    })
}

/// Charge `Q` and its slope `dQ/dω` at the profile frequency.
///
/// # Safety
/// `profile` must be a live handle; null outputs are skipped.
#[no_mangle]
pub unsafe extern "C" fn ss_profile_charge(
    profile: *const SsProfile,
    charge: *mut f64,
    dq_domega: *mut f64,
) -> SsStatus {
    guard(|| {
        let h = unsafe { deref(profile, "profile") }?;
        if let Some(o) = unsafe { charge.as_mut() } {
            *o = charge_q(&h.profile);
        }
        if let Some(o) = unsafe { dq_domega.as_mut() } {
            *o = dq_domega_local(&h.profile, &h.model, None, &SolverOptions::default()).lift()?;
        }
        Ok(())
    })
}

/// Classified spectrum of the linearization at `profile`.
///
/// # Safety
/// `profile` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn ss_spectrum_compute(profile: *const SsProfile, out: *mut *mut SsSpectrum) -> SsStatus {
    guard(|| {
        let h = unsafe { deref(profile, "profile") }?;
        let out = unsafe { out_ptr(out, "out") }?;
        let opts = ScanOptions::default();
        let report = jl_spectrum(&h.profile, &opts).lift()?;
        let real = detect_real_pairs(&report, opts.re_tol, opts.im_tol);
        *out = Box::into_raw(Box::new(SsSpectrum { report, real }));
        Ok(())
    })
}

/// # Safety
/// `spectrum` must be null or come from [`ss_spectrum_compute`].
#[no_mangle]
pub unsafe extern "C" fn ss_spectrum_free(spectrum: *mut SsSpectrum) {
    if !spectrum.is_null() {
        drop(unsafe { Box::from_raw(spectrum) });
    }
}

/// # Safety
/// `spectrum` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn ss_spectrum_len(spectrum: *const SsSpectrum, out: *mut usize) -> SsStatus {
    guard(|| {
        let s = unsafe { deref(spectrum, "spectrum") }?;
        *unsafe { out_ptr(out, "out") }? = s.report.len();
        Ok(())
    })
}

/// Real and imaginary parts into two buffers of at least `len` values.
///
/// # Safety
/// `spectrum` must be a live handle; `re` and `im` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn ss_spectrum_eigenvalues(
    spectrum: *const SsSpectrum,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> SsStatus {
    guard(|| {
        let s = unsafe { deref(spectrum, "spectrum") }?;
        let r: Vec<f64> = s.report.eigenvalues.iter().map(|z| z.re).collect();
        let i: Vec<f64> = s.report.eigenvalues.iter().map(|z| z.im).collect();
        unsafe { copy_out(&r, re, len) }?;
        unsafe { copy_out(&i, im, len) }
    })
}

/// Count of localized real eigenvalues (both signs) and the largest one.
///
/// # Safety
/// `spectrum` must be a live handle; null outputs are skipped.
#[no_mangle]
pub unsafe extern "C" fn ss_spectrum_real_pairs(
    spectrum: *const SsSpectrum,
    count: *mut usize,
    max_real: *mut f64,
) -> SsStatus {
    guard(|| {
        let s = unsafe { deref(spectrum, "spectrum") }?;
        if let Some(o) = unsafe { count.as_mut() } {
            *o = s.real.len();
        }
        if let Some(o) = unsafe { max_real.as_mut() } {
            *o = s.real.first().copied().unwrap_or(0.0).max(0.0);
        }
        Ok(())
    })
}

/// Full stability row at `omega`. A failed row still fills `out` and returns
/// the failure status.
///
/// # Safety
/// `model` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn ss_stability_row(
    model: *const SsModel,
    eq: SsEquation,
    omega: f64,
    half_width: f64,
    n_points: usize,
    out: *mut SsScanRow,
) -> SsStatus {
    guard(|| {
        let m = unsafe { deref(model, "model") }?;
        let out = unsafe { out_ptr(out, "out") }?;
        let r = scan_row(equation(eq), &m.0, omega, &grid_spec(half_width, n_points), &ScanOptions::default());
        *out = SsScanRow {
            omega: r.omega,
            charge: r.q,
            dq_domega: r.dq_domega,
            real_pair_count: r.real_pair_count,
            max_real: r.max_real,
            nullspace_dim: r.nullspace_dim,
            half_width: r.half_width,
            verdict: match r.vk_verdict {
                Some(VkVerdict::VkStableSign) => SsVerdict::StableSign,
                Some(VkVerdict::VkUnstableSign) => SsVerdict::UnstableSign,
                _ => SsVerdict::Critical,
            },
        };
        match r.error {
            Some(e) => Err(fail(SsStatus::NotConverged, e)),
            None => Ok(()),
        }
    })
}

/// Smallest eigenvalue of the static Hessian for `f(ψ) = Σ cᵢψⁱ` (with
/// `c₀ = 0`) on `[−half_width, half_width)`.
///
/// # Safety
/// `coefficients` must be valid for `len` reads and `out` for a write.
#[no_mangle]
pub unsafe extern "C" fn ss_derrick_lambda_min(
    coefficients: *const f64,
    len: usize,
    half_width: f64,
    n_points: usize,
    out: *mut f64,
) -> SsStatus {
    guard(|| {
        let c = unsafe { slice(coefficients, len, "coefficients") }?;
        let out = unsafe { out_ptr(out, "out") }?;
        let model = WaveNonlinearity::new(c.to_vec()).lift()?;
        let grid = Grid1D::fourier(half_width, n_points).lift()?;
        *out = derrick_instability(&model, &grid, &SolverOptions::default()).lift()?.lambda_min_l;
        Ok(())
    })
}

/// Runs a CLI command (`profile`, `spectrum`, `scan`, `virial`, `derrick`,
/// `verify`) on a config file. `output_dir` may be null.
///
/// # Safety
/// String arguments must be null or NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn ss_run_command(
    command: *const c_char,
    config_path: *const c_char,
    output_dir: *const c_char,
) -> SsStatus {
    guard(|| {
        let name = unsafe { c_str(command, "command") }?;
        let cmd = match name {
            "profile" => Command::Profile,
            "spectrum" => Command::Spectrum,
            "scan" => Command::Scan,
            "virial" => Command::Virial,
            "derrick" => Command::Derrick,
            "verify" => Command::Verify,
            other => return Err(fail(SsStatus::InvalidArgument, format!("unknown command {other:?}"))),
        };
        let config = unsafe { c_str(config_path, "config_path") }?;
        let dir = if output_dir.is_null() { None } else { Some(unsafe { c_str(output_dir, "output_dir") }?) };
        let outcome = soliton_spectra::app::run_file(cmd, Path::new(config), dir.map(Path::new)).lift()?;
        if outcome.failures > 0 {
            return Err(fail(SsStatus::ChecksFailed, format!("{} failed item(s)", outcome.failures)));
        }
        Ok(())
    })
}
