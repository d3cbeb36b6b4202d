//! C ABI for `psiparam`.
//!
//! Objects cross the boundary as opaque handles created by `*_new`-style
//! functions and released with the matching `*_free`. Every fallible call
//! returns a [`PsiStatus`]; on failure a message is available from
//! [`psi_last_error`] on the same thread. Outcome indices are 1-based, as in
//! the Rust API; a witness of 0 means "none".

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use psiparam::density::{collapse, pure_density, DensityMatrix};
use psiparam::transform::{apply_to_wavefunction, clock_rotation, is_deterministic, OrthogonalTransform};
use psiparam::{
    angles_to_wavefunction, born_decode, encode, enumerate_paths, gleason_pure_search, marginal_at, marginal_born,
    sqrt_encode, Error, EulerAngles, ProbDist, Quaternion, ScalarAlgebra, ScalarMatrix, WalkSpec, WaveFunction,
};

/// Status code returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsiStatus {
    Ok = 0,
    NullPointer = 1,
    Range = 2,
    Dimension = 3,
    Normalization = 4,
    InvalidDistribution = 5,
    Validity = 6,
    DegenerateConditional = 7,
    Algebra = 8,
    Consistency = 9,
    BufferTooSmall = 10,
    Panic = 99,
}

/// Probability distribution handle.
pub struct PsiProbDist(ProbDist);

/// Wave-function handle (real, complex or quaternionic).
pub struct PsiWaveFunction(WaveFunction);

/// Density matrix handle.
pub struct PsiDensity(DensityMatrix);

/// Orthogonal or unitary transform handle.
pub struct PsiTransform(OrthogonalTransform);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: PsiStatus, msg: impl Into<String>) -> PsiStatus {
    set_error(msg.into());
    status
}

fn status_of(e: &Error) -> PsiStatus {
    match e {
        Error::Range { .. } => PsiStatus::Range,
        Error::Dimension { .. } => PsiStatus::Dimension,
        Error::Normalization { .. } => PsiStatus::Normalization,
        Error::InvalidDistribution(_) => PsiStatus::InvalidDistribution,
        Error::Validity(_) => PsiStatus::Validity,
        Error::DegenerateConditional { .. } => PsiStatus::DegenerateConditional,
        Error::Algebra(_) => PsiStatus::Algebra,
        Error::Consistency { .. } => PsiStatus::Consistency,
    }
}

/// Runs `f`, converting library errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), PsiStatus>) -> PsiStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PsiStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(PsiStatus::Panic, "internal panic"),
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, PsiStatus>;
}

impl<T> OrStatus<T> for psiparam::Result<T> {
    fn or_status(self) -> Result<T, PsiStatus> {
        self.map_err(|e| fail(status_of(&e), e.to_string()))
    }
}

unsafe fn borrow<'a, T>(p: *const T, name: &str) -> Result<&'a T, PsiStatus> {
    p.as_ref().ok_or_else(|| fail(PsiStatus::NullPointer, format!("{name} is null")))
}

unsafe fn input<'a>(data: *const f64, len: usize, name: &str) -> Result<&'a [f64], PsiStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(fail(PsiStatus::NullPointer, format!("{name} is null")));
    }
    Ok(slice::from_raw_parts(data, len))
}

unsafe fn copy_out(values: &[f64], out: *mut f64, capacity: usize) -> Result<(), PsiStatus> {
    if capacity < values.len() {
        return Err(fail(PsiStatus::BufferTooSmall, format!("need {} values, buffer holds {capacity}", values.len())));
    }
    if values.is_empty() {
        return Ok(());
    }
    if out.is_null() {
        return Err(fail(PsiStatus::NullPointer, "output buffer is null"));
    }
    ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
    Ok(())
}

unsafe fn emit<T>(value: T, out: *mut *mut T) -> Result<(), PsiStatus> {
    if out.is_null() {
        return Err(fail(PsiStatus::NullPointer, "output handle pointer is null"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

fn algebra_of(block_dim: u32) -> Result<ScalarAlgebra, PsiStatus> {
    match block_dim {
        1 => Ok(ScalarAlgebra::Real),
        2 => Ok(ScalarAlgebra::Complex),
        4 => Ok(ScalarAlgebra::Quaternion),
        b => Err(fail(PsiStatus::Algebra, format!("block dimension {b} is not 1, 2 or 4"))),
    }
}

/// Message for the last failure on this thread, or null. The pointer stays
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn psi_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Validates `p[0..n]` as a distribution.
///
/// # Safety
/// `p` must point to `n` readable doubles and `out` to a writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn psi_probdist_new(p: *const f64, n: usize, out: *mut *mut PsiProbDist) -> PsiStatus {
    guard(|| {
        let dist = ProbDist::new(input(p, n, "p")?.to_vec()).or_status()?;
        emit(PsiProbDist(dist), out)
    })
}

/// # Safety
/// `dist` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn psi_probdist_free(dist: *mut PsiProbDist) {
    if !dist.is_null() {
        drop(Box::from_raw(dist));
    }
}

/// Number of outcomes, 0 for a null handle.
///
/// # Safety
/// `dist` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn psi_probdist_len(dist: *const PsiProbDist) -> usize {
    dist.as_ref().map_or(0, |d| d.0.len())
}

/// Copies the probabilities into `out[0..capacity]`.
///
/// # Safety
/// `dist` must be a live handle and `out` must hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn psi_probdist_values(dist: *const PsiProbDist, out: *mut f64, capacity: usize) -> PsiStatus {
    guard(|| copy_out(borrow(dist, "dist")?.0.as_slice(), out, capacity))
}

/// Canonical Euler angles, `len(dist) − 1` values, written to `theta`.
///
/// # Safety
/// `dist` must be a live handle and `theta` must hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn psi_encode(dist: *const PsiProbDist, theta: *mut f64, capacity: usize) -> PsiStatus {
    guard(|| copy_out(encode(&borrow(dist, "dist")?.0).as_slice(), theta, capacity))
}

/// Real wave-function of the angles `theta[0..n]` (dimension `n + 1`).
///
/// # Safety
/// `theta` must point to `n` doubles and `out` to a writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn psi_angles_to_wavefunction(
    theta: *const f64,
    n: usize,
    out: *mut *mut PsiWaveFunction,
) -> PsiStatus {
    guard(|| {
        let angles = EulerAngles::new(input(theta, n, "theta")?.to_vec()).or_status()?;
        emit(PsiWaveFunction(angles_to_wavefunction(&angles)), out)
    })
}

/// `ψ_n = √p_n`.
///
/// # Safety
/// `dist` must be a live handle and `out` a writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn psi_sqrt_encode(dist: *const PsiProbDist, out: *mut *mut PsiWaveFunction) -> PsiStatus {
    guard(|| emit(PsiWaveFunction(sqrt_encode(&borrow(dist, "dist")?.0)), out))
}

/// Wave-function from flat real coordinates, `block_dim` (1, 2 or 4) per
/// amplitude.
///
/// # Safety
/// `coords` must point to `n_coords` doubles and `out` to a writable slot.
#[no_mangle]
pub unsafe extern "C" fn psi_wavefunction_new(
    block_dim: u32,
    coords: *const f64,
    n_coords: usize,
    out: *mut *mut PsiWaveFunction,
) -> PsiStatus {
    guard(|| {
        let algebra = algebra_of(block_dim)?;
        let psi = WaveFunction::new(algebra, input(coords, n_coords, "coords")?.to_vec()).or_status()?;
        emit(PsiWaveFunction(psi), out)
    })
}

/// # Safety
/// `psi` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn psi_wavefunction_free(psi: *mut PsiWaveFunction) {
    if !psi.is_null() {
        drop(Box::from_raw(psi));
    }
}

/// Number of amplitudes, 0 for a null handle.
///
/// # Safety
/// `psi` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn psi_wavefunction_len(psi: *const PsiWaveFunction) -> usize {
    psi.as_ref().map_or(0, |p| p.0.len())
}

/// Number of real coordinates, `len × block_dim`.
///
/// # Safety
/// `psi` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn psi_wavefunction_coord_count(psi: *const PsiWaveFunction) -> usize {
    psi.as_ref().map_or(0, |p| p.0.coords().len())
}

/// Copies the flat real coordinates into `out`.
///
/// # Safety
/// `psi` must be a live handle and `out` must hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn psi_wavefunction_coords(psi: *const PsiWaveFunction, out: *mut f64, capacity: usize) -> PsiStatus {
    guard(|| copy_out(borrow(psi, "psi")?.0.coords(), out, capacity))
}

/// Born rule `p_n = |ψ_n|²` for any of the three algebras.
///
/// # Safety
/// `psi` must be a live handle and `out` a writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn psi_born_decode(psi: *const PsiWaveFunction, out: *mut *mut PsiProbDist) -> PsiStatus {
    guard(|| {
        let psi = &borrow(psi, "psi")?.0;
        let dist = match psi.algebra() {
            ScalarAlgebra::Real => born_decode(psi),
            _ => marginal_born(psi),
        }
        .or_status()?;
        emit(PsiProbDist(dist), out)
    })
}

/// `ρ = ψψ†`.
///
/// # Safety
/// `psi` must be a live handle and `out` a writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn psi_pure_density(psi: *const PsiWaveFunction, out: *mut *mut PsiDensity) -> PsiStatus {
    guard(|| emit(PsiDensity(pure_density(&borrow(psi, "psi")?.0).or_status()?), out))
}

/// Diagonal part of `rho`.
///
/// # Safety
/// `rho` must be a live handle and `out` a writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn psi_collapse(rho: *const PsiDensity, out: *mut *mut PsiDensity) -> PsiStatus {
    guard(|| emit(PsiDensity(collapse(&borrow(rho, "rho")?.0)), out))
}

/// # Safety
/// `rho` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn psi_density_free(rho: *mut PsiDensity) {
    if !rho.is_null() {
        drop(Box::from_raw(rho));
    }
}

/// Matrix dimension, 0 for a null handle.
///
/// # Safety
/// `rho` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn psi_density_dim(rho: *const PsiDensity) -> usize {
    rho.as_ref().map_or(0, |r| r.0.dim())
}

/// Real parts of the diagonal entries.
///
/// # Safety
/// `rho` must be a live handle and `out` must hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn psi_density_diagonal(rho: *const PsiDensity, out: *mut f64, capacity: usize) -> PsiStatus {
    guard(|| copy_out(&borrow(rho, "rho")?.0.diagonal(), out, capacity))
}

/// Real orthogonal transform from a row-major `n × n` matrix.
///
/// # Safety
/// `matrix` must point to `n * n` doubles and `out` to a writable slot.
#[no_mangle]
pub unsafe extern "C" fn psi_transform_new_real(matrix: *const f64, n: usize, out: *mut *mut PsiTransform) -> PsiStatus {
    guard(|| {
        let len = n.checked_mul(n).ok_or_else(|| fail(PsiStatus::Dimension, "matrix size overflows"))?;
        let data = input(matrix, len, "matrix")?.iter().map(|&x| Quaternion::real(x)).collect();
        let m = ScalarMatrix::from_entries(ScalarAlgebra::Real, n, n, data).or_status()?;
        emit(PsiTransform(OrthogonalTransform::new(m).or_status()?), out)
    })
}

/// The 2-D rotation taking `(1, 0)` to `(cos a, sin a)`.
///
/// # Safety
/// `out` must be a writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn psi_clock_rotation(a: f64, out: *mut *mut PsiTransform) -> PsiStatus {
    guard(|| {
        if !a.is_finite() {
            return Err(fail(PsiStatus::Validity, "angle must be finite"));
        }
        emit(PsiTransform(clock_rotation(a)), out)
    })
}

/// Unitary discrete Fourier transform of dimension `n`.
///
/// # Safety
/// `out` must be a writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn psi_transform_fourier(n: usize, out: *mut *mut PsiTransform) -> PsiStatus {
    guard(|| emit(PsiTransform(OrthogonalTransform::fourier(n).or_status()?), out))
}

/// # Safety
/// `u` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn psi_transform_free(u: *mut PsiTransform) {
    if !u.is_null() {
        drop(Box::from_raw(u));
    }
}

/// Whether `u` maps events to events. `witness` receives the 1-based
/// elementary event that fails, or 0.
///
/// # Safety
/// `u` must be a live handle; `deterministic` and `witness` writable.
#[no_mangle]
pub unsafe extern "C" fn psi_is_deterministic(u: *const PsiTransform, deterministic: *mut bool, witness: *mut usize) -> PsiStatus {
    guard(|| {
        if deterministic.is_null() || witness.is_null() {
            return Err(fail(PsiStatus::NullPointer, "output pointer is null"));
        }
        let verdict = is_deterministic(&borrow(u, "u")?.0);
        *deterministic = verdict.deterministic;
        *witness = verdict.witness.unwrap_or(0);
        Ok(())
    })
}

/// `U·ψ`.
///
/// # Safety
/// `u` and `psi` must be live handles and `out` a writable slot.
#[no_mangle]
pub unsafe extern "C" fn psi_transform_apply(
    u: *const PsiTransform,
    psi: *const PsiWaveFunction,
    out: *mut *mut PsiWaveFunction,
) -> PsiStatus {
    guard(|| {
        let image = apply_to_wavefunction(&borrow(u, "u")?.0, &borrow(psi, "psi")?.0).or_status()?;
        emit(PsiWaveFunction(image), out)
    })
}

/// Best pure 2-D state on a grid of `grid` angles for the two targets.
///
/// # Safety
/// `theta_best` and `residual` must be writable.
#[no_mangle]
pub unsafe extern "C" fn psi_gleason_pure_search(
    target_a: f64,
    target_b: f64,
    grid: usize,
    theta_best: *mut f64,
    residual: *mut f64,
) -> PsiStatus {
    guard(|| {
        if theta_best.is_null() || residual.is_null() {
            return Err(fail(PsiStatus::NullPointer, "output pointer is null"));
        }
        let report = gleason_pure_search(target_a, target_b, grid).or_status()?;
        *theta_best = report.theta_best;
        *residual = report.residual;
        Ok(())
    })
}

/// Distribution over the `2^steps` paths (first step most significant,
/// down = 0). `q` holds one up-probability or one per step.
///
/// # Safety
/// `q` must point to `n_q` doubles and `out` to a writable slot.
#[no_mangle]
pub unsafe extern "C" fn psi_walk_paths(steps: usize, q: *const f64, n_q: usize, out: *mut *mut PsiProbDist) -> PsiStatus {
    guard(|| {
        let spec = WalkSpec::new(steps, input(q, n_q, "q")?.to_vec()).or_status()?;
        emit(PsiProbDist(enumerate_paths(&spec).or_status()?.dist), out)
    })
}

/// Position distribution after `t` steps, over `−t, −t+2, …, t`.
///
/// # Safety
/// `q` must point to `n_q` doubles and `out` to a writable slot.
#[no_mangle]
pub unsafe extern "C" fn psi_walk_marginal(
    steps: usize,
    q: *const f64,
    n_q: usize,
    t: usize,
    out: *mut *mut PsiProbDist,
) -> PsiStatus {
    guard(|| {
        let spec = WalkSpec::new(steps, input(q, n_q, "q")?.to_vec()).or_status()?;
        emit(PsiProbDist(marginal_at(&spec, t).or_status()?.dist), out)
    })
}
