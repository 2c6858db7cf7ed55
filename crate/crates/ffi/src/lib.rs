//! C ABI for the vorint toolkit: the stretch-margin solver, the integral
//! estimators over the canonical window, and Voronoi tessellation queries.
//!
//! Conventions: opaque handles are created and destroyed by paired
//! constructor/`*_free` calls; every fallible function returns a
//! `VorintStatus` and writes results through out-pointers; scalar queries
//! return NaN (or a negative sentinel) on bad input.

use std::ffi::{c_char, c_void, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use vorint::bench::make_function;
use vorint::estimators::{
    estimate_cvor, estimate_fvor, estimate_mc, estimate_vor, EstimateReport, EstimatorError,
    Integrand,
};
use vorint::geom2d::{build_tessellation, clip_cell, Point2, Tessellation, Window};
use vorint::pointproc::{
    bound_reject_prob, solve_epsilon, strip_count, CountMode, RngStream, SpppParams,
};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VorintStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    RejectionExhausted = 3,
    EstimationFailed = 4,
    GeometryError = 5,
    InternalPanic = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VorintMethod {
    Mc = 0,
    Vor = 1,
    Fvor = 2,
    Cvor = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VorintCountMode {
    Fixed = 0,
    Poisson = 1,
}

/// One integral estimate and its sampling statistics.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct VorintEstimate {
    pub value: f64,
    pub n_interior: u64,
    pub n_strip: u64,
    pub retries: u32,
    pub wall_time_ms: f64,
}

/// Opaque integrand handle.
pub struct VorintIntegrand {
    inner: Integrand,
}

/// Opaque tessellation handle.
pub struct VorintTessellation {
    inner: Tessellation,
}

/// User evaluation callback: f(x, y, user_data) → value. Nullable.
///
/// The callback must be safe to call from the thread invoking
/// `vorint_estimate` and must not unwind across the boundary.
pub type VorintEvalFn = Option<unsafe extern "C" fn(x: f64, y: f64, user: *mut c_void) -> f64>;

struct Callback {
    eval: unsafe extern "C" fn(x: f64, y: f64, user: *mut c_void) -> f64,
    user: *mut c_void,
}

impl Callback {
    fn call(&self, p: Point2) -> f64 {
        unsafe { (self.eval)(p.x, p.y, self.user) }
    }
}

// The C caller guarantees the callback (and its user data) tolerate being
// called from the estimating thread.
unsafe impl Send for Callback {}
unsafe impl Sync for Callback {}

/// Human-readable name of a status code (static storage).
#[no_mangle]
pub extern "C" fn vorint_status_message(status: VorintStatus) -> *const c_char {
    let msg: &'static [u8] = match status {
        VorintStatus::Ok => b"ok\0",
        VorintStatus::NullPointer => b"null pointer argument\0",
        VorintStatus::InvalidArgument => b"invalid argument\0",
        VorintStatus::RejectionExhausted => b"rejection sampling exhausted\0",
        VorintStatus::EstimationFailed => b"estimation failed\0",
        VorintStatus::GeometryError => b"geometry error\0",
        VorintStatus::InternalPanic => b"internal panic\0",
    };
    msg.as_ptr() as *const c_char
}

/// Upper bound on the rejection probability at intensity `n` and margin
/// `epsilon`. NaN on invalid input.
#[no_mangle]
pub extern "C" fn vorint_reject_bound(n: f64, epsilon: f64) -> f64 {
    if n.is_nan() || n <= 0.0 || epsilon.is_nan() || epsilon <= 0.0 {
        return f64::NAN;
    }
    bound_reject_prob(n, epsilon)
}

/// Smallest margin on the decreasing branch meeting the confidence `delta`.
///
/// # Safety
/// `out_epsilon` must be NULL or point to writable memory.
#[no_mangle]
pub unsafe extern "C" fn vorint_solve_epsilon(
    n: f64,
    delta: f64,
    out_epsilon: *mut f64,
) -> VorintStatus {
    if out_epsilon.is_null() {
        return VorintStatus::NullPointer;
    }
    if !(n.is_finite() && n > 0.0) || !(delta > 0.0 && delta < 1.0) {
        return VorintStatus::InvalidArgument;
    }
    let eps = solve_epsilon(n, delta);
    unsafe { *out_epsilon = eps };
    VorintStatus::Ok
}

/// Strip point count ⌊n(4ε + 4ε²)⌋.
#[no_mangle]
pub extern "C" fn vorint_strip_count(n: f64, epsilon: f64) -> u64 {
    if n.is_nan() || n <= 0.0 || epsilon.is_nan() || epsilon < 0.0 {
        return 0;
    }
    strip_count(n, epsilon)
}

/// Builds one of the built-in benchmark integrands ("holder" with its
/// exponent passed as `alpha`, "not_holder", "discontinuity"). Pass NaN for
/// `alpha` when it is not applicable. NULL on unknown name or bad exponent.
///
/// # Safety
/// `name` must be NULL or point to a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn vorint_integrand_builtin(
    name: *const c_char,
    alpha: f64,
) -> *mut VorintIntegrand {
    if name.is_null() {
        return std::ptr::null_mut();
    }
    let name = match unsafe { CStr::from_ptr(name) }.to_str() {
        Ok(s) => s,
        Err(_) => return std::ptr::null_mut(),
    };
    let alpha = alpha.is_finite().then_some(alpha);
    match make_function(name, alpha) {
        Ok(f) => Box::into_raw(Box::new(VorintIntegrand { inner: f })),
        Err(_) => std::ptr::null_mut(),
    }
}

/// Wraps a user callback as an integrand on the canonical window
/// [−1/2, 1/2]². `user` is passed through untouched.
#[no_mangle]
pub extern "C" fn vorint_integrand_callback(
    eval: VorintEvalFn,
    user: *mut c_void,
) -> *mut VorintIntegrand {
    let Some(eval) = eval else {
        return std::ptr::null_mut();
    };
    let cb = Callback { eval, user };
    let inner = Integrand::new("callback", Window::canonical(), move |p: Point2| cb.call(p));
    Box::into_raw(Box::new(VorintIntegrand { inner }))
}

/// # Safety
/// `f` must be a pointer previously returned by one of the
/// `vorint_integrand_*` constructors and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn vorint_integrand_free(f: *mut VorintIntegrand) {
    if !f.is_null() {
        drop(unsafe { Box::from_raw(f) });
    }
}

/// Runs one estimate over the canonical window.
///
/// `n` is the sample count (intensity); `mode` picks fixed or Poisson
/// counts for the stretched-window methods; `delta` is the rejection
/// confidence (pass 0 for the 1/1000 default).
///
/// # Safety
/// `f` must be a live integrand handle; `out` must point to writable memory.
#[no_mangle]
pub unsafe extern "C" fn vorint_estimate(
    f: *const VorintIntegrand,
    method: VorintMethod,
    n: u64,
    seed: u64,
    mode: VorintCountMode,
    delta: f64,
    out: *mut VorintEstimate,
) -> VorintStatus {
    if f.is_null() || out.is_null() {
        return VorintStatus::NullPointer;
    }
    if n == 0 || !(0.0..1.0).contains(&delta) {
        return VorintStatus::InvalidArgument;
    }
    let integrand = unsafe { &(*f).inner };
    let delta = if delta == 0.0 {
        SpppParams::DEFAULT_DELTA
    } else {
        delta
    };
    let mode = match mode {
        VorintCountMode::Fixed => CountMode::Fixed,
        VorintCountMode::Poisson => CountMode::Poisson,
    };

    let result = catch_unwind(AssertUnwindSafe(|| {
        let w = Window::canonical();
        let mut rng = RngStream::new(seed);
        let params = SpppParams::new(n as f64, delta).with_mode(mode);
        match method {
            VorintMethod::Mc => estimate_mc(&mut rng, integrand, n, &w),
            VorintMethod::Vor => estimate_vor(&mut rng, integrand, &params, &w),
            VorintMethod::Fvor => estimate_fvor(&mut rng, integrand, &params, &w),
            VorintMethod::Cvor => estimate_cvor(&mut rng, integrand, n, &w),
        }
    }));

    match result {
        Ok(Ok(report)) => {
            unsafe { *out = convert(&report) };
            VorintStatus::Ok
        }
        Ok(Err(EstimatorError::RejectionExhausted { .. })) => VorintStatus::RejectionExhausted,
        Ok(Err(EstimatorError::Geometry(_))) => VorintStatus::GeometryError,
        Ok(Err(_)) => VorintStatus::EstimationFailed,
        Err(_) => VorintStatus::InternalPanic,
    }
}

fn convert(r: &EstimateReport) -> VorintEstimate {
    VorintEstimate {
        value: r.value,
        n_interior: r.n_interior,
        n_strip: r.n_strip,
        retries: r.retries,
        wall_time_ms: r.wall_time.as_secs_f64() * 1e3,
    }
}

/// Voronoi tessellation of `len` points given as parallel coordinate
/// arrays. NULL on degenerate input (empty set, exact duplicates,
/// non-finite coordinates).
///
/// # Safety
/// `xs` and `ys` must point to `len` readable doubles.
#[no_mangle]
pub unsafe extern "C" fn vorint_tessellate(
    xs: *const f64,
    ys: *const f64,
    len: usize,
) -> *mut VorintTessellation {
    if xs.is_null() || ys.is_null() || len == 0 {
        return std::ptr::null_mut();
    }
    let xs = unsafe { std::slice::from_raw_parts(xs, len) };
    let ys = unsafe { std::slice::from_raw_parts(ys, len) };
    let points: Vec<Point2> = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| Point2::new(x, y))
        .collect();
    let result = catch_unwind(AssertUnwindSafe(|| build_tessellation(&points)));
    match result {
        Ok(Ok(t)) => Box::into_raw(Box::new(VorintTessellation { inner: t })),
        _ => std::ptr::null_mut(),
    }
}

/// # Safety
/// `t` must be a pointer previously returned by `vorint_tessellate` and not
/// yet freed.
#[no_mangle]
pub unsafe extern "C" fn vorint_tessellation_free(t: *mut VorintTessellation) {
    if !t.is_null() {
        drop(unsafe { Box::from_raw(t) });
    }
}

/// # Safety
/// `t` must be a live tessellation handle (or NULL, which yields 0).
#[no_mangle]
pub unsafe extern "C" fn vorint_cell_count(t: *const VorintTessellation) -> usize {
    if t.is_null() {
        return 0;
    }
    unsafe { &(*t).inner }.len()
}

/// 1 if cell `i` is bounded, 0 if unbounded, −1 on a bad index.
///
/// # Safety
/// `t` must be a live tessellation handle.
#[no_mangle]
pub unsafe extern "C" fn vorint_cell_bounded(t: *const VorintTessellation, i: usize) -> i32 {
    match unsafe { cell_at(t, i) } {
        Some(cell) => cell.bounded as i32,
        None => -1,
    }
}

/// Cell area (+∞ for unbounded cells, NaN on a bad index).
///
/// # Safety
/// `t` must be a live tessellation handle.
#[no_mangle]
pub unsafe extern "C" fn vorint_cell_area(t: *const VorintTessellation, i: usize) -> f64 {
    unsafe { cell_at(t, i) }.map_or(f64::NAN, |c| c.area)
}

/// Circumscribed radius (+∞ for unbounded cells, NaN on a bad index).
///
/// # Safety
/// `t` must be a live tessellation handle.
#[no_mangle]
pub unsafe extern "C" fn vorint_cell_circ_radius(t: *const VorintTessellation, i: usize) -> f64 {
    unsafe { cell_at(t, i) }.map_or(f64::NAN, |c| c.circ_radius)
}

/// Area of cell `i` clipped to the square window centred at (cx, cy) with
/// the given half extent. NaN on bad input.
///
/// # Safety
/// `t` must be a live tessellation handle.
#[no_mangle]
pub unsafe extern "C" fn vorint_clip_cell_area(
    t: *const VorintTessellation,
    i: usize,
    cx: f64,
    cy: f64,
    half_extent: f64,
) -> f64 {
    if half_extent.is_nan() || half_extent <= 0.0 || !cx.is_finite() || !cy.is_finite() {
        return f64::NAN;
    }
    let Some(cell) = (unsafe { cell_at(t, i) }) else {
        return f64::NAN;
    };
    let w = Window::new(Point2::new(cx, cy), half_extent);
    clip_cell(cell, &w).1
}

unsafe fn cell_at<'a>(
    t: *const VorintTessellation,
    i: usize,
) -> Option<&'a vorint::geom2d::VoronoiCell> {
    if t.is_null() {
        return None;
    }
    let tess = unsafe { &(*t).inner };
    (i < tess.len()).then(|| tess.cell(i))
}
