//! C ABI for the distframe library.
//!
//! Conventions:
//! - every constructor returns a status code and writes an opaque handle
//!   through an out-pointer; handles are freed with the matching
//!   `df_*_free`
//! - reports cross the boundary as JSON strings allocated by this library
//!   and released with `df_string_free`
//! - on any failure the thread-local message from
//!   `df_last_error_message` describes what went wrong
//!
//! The generated header lives at `include/distframe.h`.

use distframe::distmap::{
    auto_grid, builtin_map, transform_map, BuiltinKind, DistributionMap, MapError,
};
use distframe::frameops::{
    canonical_dual, classify, frame_bounds, reconstruction_residual, unboundedness_sweep,
    ClassifyTolerances, FrameError,
};
use distframe::numerics::ComplexMatrix;
use distframe::opcalc::OperatorMatrix;
use distframe::pairs::{compatibility_report, PairTolerances};
use distframe::quadrature::{make_grid, GridKind, QuadratureGrid};
use distframe::scenario::{oracle_check, run_scenario};
use distframe::testspace::{hermite_space, TestSpace};
use num_complex::Complex64;
use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DfStatus {
    DfOk = 0,
    DfNullArgument = 1,
    DfInvalidArgument = 2,
    DfBadDomain = 3,
    DfDimensionMismatch = 4,
    DfInadequateGrid = 5,
    DfNotAFrame = 6,
    DfNotGelfand = 7,
    DfNumericError = 8,
    DfIoError = 9,
    DfParseError = 10,
    DfUtf8Error = 11,
    DfPanic = 12,
}

/// Opaque quadrature grid handle.
pub struct DfGrid(QuadratureGrid);
/// Opaque test space handle.
pub struct DfSpace(TestSpace);
/// Opaque distribution map handle.
pub struct DfMap(DistributionMap);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn fail(status: DfStatus, message: impl AsRef<str>) -> DfStatus {
    set_error(message.as_ref());
    status
}

fn map_error_status(e: &MapError) -> DfStatus {
    match e {
        MapError::DimensionMismatch(_) => DfStatus::DfDimensionMismatch,
        MapError::NonFinite => DfStatus::DfInvalidArgument,
        MapError::SpaceMismatch | MapError::GridMismatch => DfStatus::DfDimensionMismatch,
        MapError::InadequateGrid { .. } => DfStatus::DfInadequateGrid,
        MapError::CsvFormat(_) => DfStatus::DfParseError,
        MapError::Quadrature(_) => DfStatus::DfBadDomain,
    }
}

fn frame_error_status(e: &FrameError) -> DfStatus {
    match e {
        FrameError::InadequateGrid { .. } => DfStatus::DfInadequateGrid,
        FrameError::NotAFrame { .. } => DfStatus::DfNotAFrame,
        FrameError::Mismatch | FrameError::BadSweepSizes => DfStatus::DfDimensionMismatch,
        FrameError::Numerics(_) => DfStatus::DfNumericError,
        FrameError::Quadrature(_) => DfStatus::DfBadDomain,
    }
}

/// Runs a closure, converting panics into `DfPanic`.
fn guarded(f: impl FnOnce() -> DfStatus) -> DfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(DfStatus::DfPanic, "internal panic crossed the C boundary"),
    }
}

unsafe fn write_out<T>(out: *mut *mut T, value: T) -> DfStatus {
    if out.is_null() {
        return fail(DfStatus::DfNullArgument, "null out-pointer");
    }
    *out = Box::into_raw(Box::new(value));
    DfStatus::DfOk
}

unsafe fn cstr_arg<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, DfStatus> {
    if ptr.is_null() {
        return Err(fail(DfStatus::DfNullArgument, format!("null {what}")));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| fail(DfStatus::DfUtf8Error, format!("{what} is not valid UTF-8")))
}

unsafe fn json_out(out: *mut *mut c_char, json: String) -> DfStatus {
    if out.is_null() {
        return fail(DfStatus::DfNullArgument, "null out-pointer");
    }
    match CString::new(json) {
        Ok(s) => {
            *out = s.into_raw();
            DfStatus::DfOk
        }
        Err(_) => fail(DfStatus::DfInvalidArgument, "report contained a NUL byte"),
    }
}

fn builtin_from_int(kind: c_int) -> Result<BuiltinKind, DfStatus> {
    match kind {
        0 => Ok(BuiltinKind::Fourier),
        1 => Ok(BuiltinKind::Delta),
        2 => Ok(BuiltinKind::WeightedFourier),
        other => Err(fail(
            DfStatus::DfInvalidArgument,
            format!("unknown builtin kind {other} (0=fourier, 1=delta, 2=weighted_fourier)"),
        )),
    }
}

fn grid_kind_from_int(kind: c_int) -> Result<GridKind, DfStatus> {
    match kind {
        0 => Ok(GridKind::GaussLegendre),
        1 => Ok(GridKind::Trapezoid),
        2 => Ok(GridKind::GaussHermiteLebesgue),
        other => Err(fail(
            DfStatus::DfInvalidArgument,
            format!(
                "unknown grid kind {other} (0=gauss_legendre, 1=trapezoid, 2=gauss_hermite_lebesgue)"
            ),
        )),
    }
}

/// Message for the most recent failure on this thread. Valid until the
/// next failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn df_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Frees a string returned by this library.
///
/// # Safety
/// `s` must be a pointer previously returned through a `char**` out
/// parameter of this library, not yet freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn df_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Creates an N-dimensional Hermite test space.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn df_space_new(n: usize, out: *mut *mut DfSpace) -> DfStatus {
    guarded(|| match hermite_space(n) {
        Ok(space) => write_out(out, DfSpace(space)),
        Err(e) => fail(DfStatus::DfInvalidArgument, e.to_string()),
    })
}

/// # Safety
/// `space` must come from `df_space_new` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn df_space_free(space: *mut DfSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// Builds a quadrature grid. `a` and `b` are ignored by the
/// gauss_hermite_lebesgue kind.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn df_grid_new(
    kind: c_int,
    m: usize,
    a: f64,
    b: f64,
    out: *mut *mut DfGrid,
) -> DfStatus {
    guarded(|| {
        let kind = match grid_kind_from_int(kind) {
            Ok(k) => k,
            Err(status) => return status,
        };
        match make_grid(kind, m, a, b) {
            Ok(grid) => write_out(out, DfGrid(grid)),
            Err(e) => fail(DfStatus::DfBadDomain, e.to_string()),
        }
    })
}

/// The default (square Gauss-Hermite) grid for a builtin kernel on the
/// given space.
///
/// # Safety
/// `space` must be a live handle; `out` valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn df_grid_auto(
    space: *const DfSpace,
    builtin_kind: c_int,
    out: *mut *mut DfGrid,
) -> DfStatus {
    guarded(|| {
        if space.is_null() {
            return fail(DfStatus::DfNullArgument, "null space");
        }
        let kind = match builtin_from_int(builtin_kind) {
            Ok(k) => k,
            Err(status) => return status,
        };
        match auto_grid(&(*space).0, kind) {
            Ok(grid) => write_out(out, DfGrid(grid)),
            Err(e) => fail(DfStatus::DfBadDomain, e.to_string()),
        }
    })
}

/// Number of grid nodes; 0 for a null handle.
///
/// # Safety
/// `grid` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn df_grid_len(grid: *const DfGrid) -> usize {
    if grid.is_null() {
        0
    } else {
        (*grid).0.len()
    }
}

/// # Safety
/// `grid` must come from a grid constructor and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn df_grid_free(grid: *mut DfGrid) {
    if !grid.is_null() {
        drop(Box::from_raw(grid));
    }
}

/// Builds one of the built-in kernels (0=fourier, 1=delta,
/// 2=weighted_fourier) on the given space and grid.
///
/// # Safety
/// `space` and `grid` must be live handles; `out` valid for one pointer.
#[no_mangle]
pub unsafe extern "C" fn df_map_builtin(
    kind: c_int,
    space: *const DfSpace,
    grid: *const DfGrid,
    out: *mut *mut DfMap,
) -> DfStatus {
    guarded(|| {
        if space.is_null() || grid.is_null() {
            return fail(DfStatus::DfNullArgument, "null space or grid");
        }
        let kind = match builtin_from_int(kind) {
            Ok(k) => k,
            Err(status) => return status,
        };
        match builtin_map(kind, &(*space).0, &(*grid).0) {
            Ok(map) => write_out(out, DfMap(map)),
            Err(e) => {
                let status = map_error_status(&e);
                fail(status, e.to_string())
            }
        }
    })
}

/// Reads a pairing CSV file into a map over the given space and grid.
///
/// # Safety
/// `path` must be a NUL-terminated string; handles live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn df_map_from_csv_file(
    path: *const c_char,
    space: *const DfSpace,
    grid: *const DfGrid,
    out: *mut *mut DfMap,
) -> DfStatus {
    guarded(|| {
        if space.is_null() || grid.is_null() {
            return fail(DfStatus::DfNullArgument, "null space or grid");
        }
        let path = match cstr_arg(path, "path") {
            Ok(p) => p,
            Err(status) => return status,
        };
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => return fail(DfStatus::DfIoError, format!("cannot read {path}: {e}")),
        };
        match DistributionMap::from_csv(&(*space).0, &(*grid).0, &text) {
            Ok(map) => write_out(out, DfMap(map)),
            Err(e) => {
                let status = map_error_status(&e);
                fail(status, e.to_string())
            }
        }
    })
}

/// Writes a map's pairing matrix to a CSV file.
///
/// # Safety
/// `map` must be a live handle; `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn df_map_to_csv_file(map: *const DfMap, path: *const c_char) -> DfStatus {
    guarded(|| {
        if map.is_null() {
            return fail(DfStatus::DfNullArgument, "null map");
        }
        let path = match cstr_arg(path, "path") {
            Ok(p) => p,
            Err(status) => return status,
        };
        match std::fs::write(path, (*map).0.to_csv()) {
            Ok(()) => DfStatus::DfOk,
            Err(e) => fail(DfStatus::DfIoError, format!("cannot write {path}: {e}")),
        }
    })
}

/// Transforms a map through an operator given by its adjoint's matrix in
/// row-major split real/imaginary arrays of length n*n (n = space dim).
///
/// # Safety
/// `map` live; `entries_re`/`entries_im` must point to n*n doubles each;
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn df_map_transform(
    map: *const DfMap,
    entries_re: *const f64,
    entries_im: *const f64,
    n: usize,
    out: *mut *mut DfMap,
) -> DfStatus {
    guarded(|| {
        if map.is_null() || entries_re.is_null() || entries_im.is_null() {
            return fail(DfStatus::DfNullArgument, "null map or entry array");
        }
        let map_ref = &(*map).0;
        if n != map_ref.dim() {
            return fail(
                DfStatus::DfDimensionMismatch,
                format!("operator is {n}x{n}, map dimension is {}", map_ref.dim()),
            );
        }
        let re = std::slice::from_raw_parts(entries_re, n * n);
        let im = std::slice::from_raw_parts(entries_im, n * n);
        let entries =
            ComplexMatrix::from_fn(n, n, |i, j| Complex64::new(re[i * n + j], im[i * n + j]));
        if entries.check_finite().is_err() {
            return fail(DfStatus::DfInvalidArgument, "non-finite operator entry");
        }
        let op = match OperatorMatrix::new(map_ref.space(), entries) {
            Ok(op) => op,
            Err(e) => return fail(DfStatus::DfDimensionMismatch, e.to_string()),
        };
        match transform_map(map_ref, &op) {
            Ok(result) => write_out(out, DfMap(result)),
            Err(e) => {
                let status = map_error_status(&e);
                fail(status, e.to_string())
            }
        }
    })
}

/// Copy of the map with one pairing row zeroed.
///
/// # Safety
/// `map` live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn df_map_zero_row(
    map: *const DfMap,
    row: usize,
    out: *mut *mut DfMap,
) -> DfStatus {
    guarded(|| {
        if map.is_null() {
            return fail(DfStatus::DfNullArgument, "null map");
        }
        match (*map).0.with_zeroed_row(row) {
            Ok(result) => write_out(out, DfMap(result)),
            Err(e) => fail(DfStatus::DfDimensionMismatch, e.to_string()),
        }
    })
}

/// # Safety
/// `map` must come from a map constructor and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn df_map_free(map: *mut DfMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// Lower and upper frame bounds (spectral extremes of the frame operator).
///
/// # Safety
/// `map` live; `lower` and `upper` must be writable doubles.
#[no_mangle]
pub unsafe extern "C" fn df_frame_bounds(
    map: *const DfMap,
    lower: *mut f64,
    upper: *mut f64,
) -> DfStatus {
    guarded(|| {
        if map.is_null() || lower.is_null() || upper.is_null() {
            return fail(DfStatus::DfNullArgument, "null argument");
        }
        let bounds = frame_bounds(&(*map).0);
        *lower = bounds.lower;
        *upper = bounds.upper;
        DfStatus::DfOk
    })
}

/// Classification report as JSON (default tolerances). Free the string
/// with `df_string_free`.
///
/// # Safety
/// `map` live; `out_json` valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn df_classify_json(
    map: *const DfMap,
    out_json: *mut *mut c_char,
) -> DfStatus {
    guarded(|| {
        if map.is_null() {
            return fail(DfStatus::DfNullArgument, "null map");
        }
        match classify(&(*map).0, &ClassifyTolerances::default()) {
            Ok(report) => json_out(out_json, report.to_json().render()),
            Err(e) => {
                let status = frame_error_status(&e);
                fail(status, e.to_string())
            }
        }
    })
}

/// Canonical dual map; fails with DfNotAFrame when the lower bound sits
/// under the frame floor.
///
/// # Safety
/// `map` live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn df_canonical_dual(map: *const DfMap, out: *mut *mut DfMap) -> DfStatus {
    guarded(|| {
        if map.is_null() {
            return fail(DfStatus::DfNullArgument, "null map");
        }
        match canonical_dual(&(*map).0) {
            Ok(dual) => write_out(out, DfMap(dual)),
            Err(e) => {
                let status = frame_error_status(&e);
                fail(status, e.to_string())
            }
        }
    })
}

/// Spectral distance of the mixed Gram of (omega, theta) from the
/// identity.
///
/// # Safety
/// Both maps live; `out` a writable double.
#[no_mangle]
pub unsafe extern "C" fn df_reconstruction_residual(
    omega: *const DfMap,
    theta: *const DfMap,
    out: *mut f64,
) -> DfStatus {
    guarded(|| {
        if omega.is_null() || theta.is_null() || out.is_null() {
            return fail(DfStatus::DfNullArgument, "null argument");
        }
        match reconstruction_residual(&(*omega).0, &(*theta).0) {
            Ok(r) => {
                *out = r;
                DfStatus::DfOk
            }
            Err(e) => {
                let status = frame_error_status(&e);
                fail(status, e.to_string())
            }
        }
    })
}

/// Compatibility report for the pair (theta, omega) as JSON.
///
/// # Safety
/// Both maps live; `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn df_pair_report_json(
    theta: *const DfMap,
    omega: *const DfMap,
    out_json: *mut *mut c_char,
) -> DfStatus {
    guarded(|| {
        if theta.is_null() || omega.is_null() {
            return fail(DfStatus::DfNullArgument, "null map");
        }
        match compatibility_report(&(*theta).0, &(*omega).0, &PairTolerances::default()) {
            Ok(report) => json_out(out_json, report.to_json().render()),
            Err(e) => fail(DfStatus::DfDimensionMismatch, e.to_string()),
        }
    })
}

/// Frame-bound sweep of a builtin kernel over ascending sizes, as JSON.
///
/// # Safety
/// `sizes` must point to `n_sizes` usize values; `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn df_sweep_json(
    builtin_kind: c_int,
    sizes: *const usize,
    n_sizes: usize,
    out_json: *mut *mut c_char,
) -> DfStatus {
    guarded(|| {
        if sizes.is_null() {
            return fail(DfStatus::DfNullArgument, "null sizes");
        }
        let kind = match builtin_from_int(builtin_kind) {
            Ok(k) => k,
            Err(status) => return status,
        };
        let sizes = std::slice::from_raw_parts(sizes, n_sizes);
        match unboundedness_sweep(kind, sizes) {
            Ok(report) => json_out(out_json, report.to_json().render()),
            Err(e) => {
                let status = frame_error_status(&e);
                fail(status, e.to_string())
            }
        }
    })
}

/// Random-map oracle cross-check; writes the worst deviations observed.
///
/// # Safety
/// `frame_deviation` and `adjoint_deviation` must be writable doubles.
#[no_mangle]
pub unsafe extern "C" fn df_oracle_check(
    count: usize,
    seed: u64,
    max_dim: usize,
    frame_deviation: *mut f64,
    adjoint_deviation: *mut f64,
) -> DfStatus {
    guarded(|| {
        if frame_deviation.is_null() || adjoint_deviation.is_null() {
            return fail(DfStatus::DfNullArgument, "null out-pointer");
        }
        match oracle_check(count, seed, max_dim) {
            Ok((frame_dev, adjoint_dev)) => {
                *frame_deviation = frame_dev;
                *adjoint_deviation = adjoint_dev;
                DfStatus::DfOk
            }
            Err(e) => fail(DfStatus::DfNumericError, e),
        }
    })
}

/// Runs a scenario file, writing its report and side files into
/// `out_dir`, and returns the run report as JSON.
///
/// # Safety
/// `path` and `out_dir` NUL-terminated strings; `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn df_run_scenario(
    path: *const c_char,
    out_dir: *const c_char,
    out_json: *mut *mut c_char,
) -> DfStatus {
    guarded(|| {
        let path = match cstr_arg(path, "scenario path") {
            Ok(p) => p,
            Err(status) => return status,
        };
        let out_dir = match cstr_arg(out_dir, "output directory") {
            Ok(p) => p,
            Err(status) => return status,
        };
        match run_scenario(Path::new(path), Path::new(out_dir)) {
            Ok(report) => json_out(out_json, report.to_json().render()),
            Err(e) => {
                use distframe::scenario::ScenarioError as SE;
                let status = match &e {
                    SE::Io { .. } => DfStatus::DfIoError,
                    SE::Parse { .. } => DfStatus::DfParseError,
                    SE::Validation(_) | SE::UnknownMapLabel { .. } => DfStatus::DfInvalidArgument,
                    SE::TaskFailure { .. } => DfStatus::DfNumericError,
                };
                fail(status, e.to_string())
            }
        }
    })
}

/// Builds the atomic map of the operator whose adjoint matrix is supplied
/// (split real/imaginary, row-major n*n), certifying that the base map is
/// a Gel'fand basis.
///
/// # Safety
/// Same contracts as `df_map_transform`.
#[no_mangle]
pub unsafe extern "C" fn df_atomic_map(
    zeta: *const DfMap,
    a_re: *const f64,
    a_im: *const f64,
    n: usize,
    out: *mut *mut DfMap,
) -> DfStatus {
    guarded(|| {
        if zeta.is_null() || a_re.is_null() || a_im.is_null() {
            return fail(DfStatus::DfNullArgument, "null argument");
        }
        let zeta_ref = &(*zeta).0;
        if n != zeta_ref.dim() {
            return fail(
                DfStatus::DfDimensionMismatch,
                format!("operator is {n}x{n}, map dimension is {}", zeta_ref.dim()),
            );
        }
        let re = std::slice::from_raw_parts(a_re, n * n);
        let im = std::slice::from_raw_parts(a_im, n * n);
        let entries =
            ComplexMatrix::from_fn(n, n, |i, j| Complex64::new(re[i * n + j], im[i * n + j]));
        let op = match OperatorMatrix::new(zeta_ref.space(), entries) {
            Ok(op) => op,
            Err(e) => return fail(DfStatus::DfDimensionMismatch, e.to_string()),
        };
        match distframe::opcalc::atomic_map(zeta_ref, &op) {
            Ok(map) => write_out(out, DfMap(map)),
            Err(distframe::opcalc::OperatorError::NotGelfand) => {
                fail(DfStatus::DfNotGelfand, "base map is not a Gel'fand basis")
            }
            Err(e) => fail(DfStatus::DfNumericError, e.to_string()),
        }
    })
}
