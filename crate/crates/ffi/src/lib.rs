//! C ABI for the sghdg solvers.
//!
//! Every fallible function returns an [`SghdgStatus`] and writes its result
//! through an out-pointer. On failure a description is kept per thread and
//! can be read with [`sghdg_last_error_message`]. Solutions are opaque
//! handles owned by the caller and released with the matching `_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sghdg::metrics::error_report;
use sghdg::stabilization::{resolve_tau, TauSpec};
use sghdg::{Error, HdgSolution, ProblemSpec, SgSolution};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SghdgStatus {
    Ok = 0,
    /// An argument was out of range; nothing was computed.
    InvalidArgument = 1,
    /// The computation itself failed (singular system, no convergence).
    Numerical = 2,
    NullPointer = 3,
    /// The caller's buffer is shorter than the data.
    BufferTooSmall = 4,
    /// A Rust panic was caught at the boundary.
    Panic = 5,
}

/// Constant-coefficient problem `(beta u - alpha u')' = f` on
/// `[domain_left, domain_right]` with Dirichlet data.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SghdgProblem {
    pub alpha: f64,
    pub beta: f64,
    pub f: f64,
    pub u_left: f64,
    pub u_right: f64,
    pub domain_left: f64,
    pub domain_right: f64,
}

impl From<SghdgProblem> for ProblemSpec {
    fn from(p: SghdgProblem) -> Self {
        ProblemSpec {
            alpha: p.alpha,
            beta: p.beta,
            f: p.f,
            u_left: p.u_left,
            u_right: p.u_right,
            domain: (p.domain_left, p.domain_right),
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SghdgErrorReport {
    pub trace_linf: f64,
    pub u_l2: f64,
    pub midpoint_linf: f64,
    pub flux_l2: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SghdgCoefficients {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub r: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SghdgTau {
    pub peclet: f64,
    pub delta: f64,
    pub tau: f64,
    pub ill_conditioned: bool,
}

/// Opaque HDG solution.
pub struct SghdgHdgSolution {
    inner: HdgSolution,
}

/// Opaque SG finite-volume solution.
pub struct SghdgSgSolution {
    inner: SgSolution,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

enum Failure {
    Status(SghdgStatus, String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn null() -> Failure {
    Failure::Status(SghdgStatus::NullPointer, "null pointer argument".into())
}

/// Runs `body`, translating errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> SghdgStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => SghdgStatus::Ok,
        Ok(Err(Failure::Status(s, msg))) => {
            set_last_error(msg);
            s
        }
        Ok(Err(Failure::Core(e))) => {
            set_last_error(e.to_string());
            if e.is_validation() {
                SghdgStatus::InvalidArgument
            } else {
                SghdgStatus::Numerical
            }
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            SghdgStatus::Panic
        }
    }
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

unsafe fn copy_out(src: &[f64], buf: *mut f64, len: usize) -> Result<(), Failure> {
    if buf.is_null() {
        return Err(null());
    }
    if len < src.len() {
        return Err(Failure::Status(
            SghdgStatus::BufferTooSmall,
            format!("buffer holds {len} values, {} needed", src.len()),
        ));
    }
    ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len());
    Ok(())
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn sghdg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sghdg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// `B(x) = x / (e^x - 1)`.
///
/// # Safety
/// `out` must be valid for a write of one `double`.
#[no_mangle]
pub unsafe extern "C" fn sghdg_bernoulli(x: f64, out: *mut f64) -> SghdgStatus {
    guard(|| write(out, sghdg::numerics::bernoulli(x)))
}

/// Dimensionless stabilization `delta_k(P)` for any degree.
///
/// # Safety
/// `out` must be valid for a write of one `double`.
#[no_mangle]
pub unsafe extern "C" fn sghdg_delta(k: usize, peclet: f64, out: *mut f64) -> SghdgStatus {
    guard(|| write(out, sghdg::delta_numeric(k, peclet)?))
}

/// Closed form of `delta_k(P)`, `k <= 4`.
///
/// # Safety
/// `out` must be valid for a write of one `double`.
#[no_mangle]
pub unsafe extern "C" fn sghdg_delta_closed_form(
    k: usize,
    peclet: f64,
    out: *mut f64,
) -> SghdgStatus {
    guard(|| write(out, sghdg::delta_closed_form(k, peclet)?))
}

/// Coefficients of an interior row of the condensed trace system on the
/// reference cell (`alpha = h = 1`).
///
/// # Safety
/// `out` must be valid for a write of one `SghdgCoefficients`.
#[no_mangle]
pub unsafe extern "C" fn sghdg_coefficients(
    k: usize,
    delta: f64,
    peclet: f64,
    out: *mut SghdgCoefficients,
) -> SghdgStatus {
    guard(|| {
        let c = sghdg::extract_coeffs(k, delta, peclet)?;
        write(
            out,
            SghdgCoefficients {
                c1: c.c1,
                c2: c.c2,
                c3: c.c3,
                r: c.r,
            },
        )
    })
}

/// `tau_k = (alpha/h) delta_k(beta h / alpha)`.
///
/// # Safety
/// `out` must be valid for a write of one `SghdgTau`.
#[no_mangle]
pub unsafe extern "C" fn sghdg_sg_tau(
    k: usize,
    h: f64,
    alpha: f64,
    beta: f64,
    out: *mut SghdgTau,
) -> SghdgStatus {
    guard(|| {
        let c = resolve_tau(TauSpec::SG, k, h, alpha, beta)?;
        write(
            out,
            SghdgTau {
                peclet: c.peclet.value,
                delta: c.delta,
                tau: c.tau,
                ill_conditioned: c.ill_conditioned,
            },
        )
    })
}

/// Exact solution at `x`.
///
/// # Safety
/// `problem` must point to a valid `SghdgProblem`; `out` must be valid for
/// a write of one `double`.
#[no_mangle]
pub unsafe extern "C" fn sghdg_exact_u(
    problem: *const SghdgProblem,
    x: f64,
    out: *mut f64,
) -> SghdgStatus {
    guard(|| {
        let p = problem.as_ref().ok_or_else(null)?;
        write(out, sghdg::exact_u(&(*p).into(), x)?)
    })
}

/// Solves HDG(k) on a uniform mesh. A non-positive or NaN `tau` selects
/// the SG value `tau_k`.
///
/// # Safety
/// `problem` must point to a valid `SghdgProblem`; `out` must be valid for
/// a write of one pointer. On success `*out` owns a handle to be released
/// with `sghdg_hdg_free`.
#[no_mangle]
pub unsafe extern "C" fn sghdg_hdg_solve(
    problem: *const SghdgProblem,
    cells: usize,
    k: usize,
    tau: f64,
    out: *mut *mut SghdgHdgSolution,
) -> SghdgStatus {
    guard(|| {
        let p: ProblemSpec = (*problem.as_ref().ok_or_else(null)?).into();
        if out.is_null() {
            return Err(null());
        }
        p.validate()?;
        let mesh = sghdg::uniform_mesh(p.domain, cells)?;
        let tau = if tau > 0.0 {
            tau
        } else {
            resolve_tau(TauSpec::SG, k, mesh.h(), p.alpha, p.beta)?.tau
        };
        let inner = sghdg::solve_hdg(&p, &mesh, k, tau)?;
        write(out, Box::into_raw(Box::new(SghdgHdgSolution { inner })))
    })
}

/// # Safety
/// `sol` must be NULL or a handle from `sghdg_hdg_solve` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sghdg_hdg_free(sol: *mut SghdgHdgSolution) {
    if !sol.is_null() {
        drop(Box::from_raw(sol));
    }
}

/// Number of trace values (`cells + 1`); 0 for NULL.
///
/// # Safety
/// `sol` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sghdg_hdg_trace_len(sol: *const SghdgHdgSolution) -> usize {
    sol.as_ref().map_or(0, |s| s.inner.trace.len())
}

/// Copies the trace values into `buf`.
///
/// # Safety
/// `sol` must be a live handle and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn sghdg_hdg_trace(
    sol: *const SghdgHdgSolution,
    buf: *mut f64,
    len: usize,
) -> SghdgStatus {
    guard(|| copy_out(&sol.as_ref().ok_or_else(null)?.inner.trace, buf, len))
}

/// The stabilization parameter the solution was computed with.
///
/// # Safety
/// `sol` must be a live handle; `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn sghdg_hdg_tau(sol: *const SghdgHdgSolution, out: *mut f64) -> SghdgStatus {
    guard(|| write(out, sol.as_ref().ok_or_else(null)?.inner.tau))
}

/// `u^h(x)`; the left limit at interior nodes.
///
/// # Safety
/// `sol` must be a live handle; `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn sghdg_hdg_evaluate_u(
    sol: *const SghdgHdgSolution,
    x: f64,
    out: *mut f64,
) -> SghdgStatus {
    guard(|| write(out, sol.as_ref().ok_or_else(null)?.inner.evaluate_uh(x)?))
}

/// `J^h(x)`; the left limit at interior nodes.
///
/// # Safety
/// `sol` must be a live handle; `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn sghdg_hdg_evaluate_j(
    sol: *const SghdgHdgSolution,
    x: f64,
    out: *mut f64,
) -> SghdgStatus {
    guard(|| write(out, sol.as_ref().ok_or_else(null)?.inner.evaluate_jh(x)?))
}

/// Errors against the exact solution.
///
/// # Safety
/// `sol` must be a live handle; `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn sghdg_hdg_error_report(
    sol: *const SghdgHdgSolution,
    out: *mut SghdgErrorReport,
) -> SghdgStatus {
    guard(|| {
        let s = &sol.as_ref().ok_or_else(null)?.inner;
        let p = s.problem;
        let r = error_report(
            s,
            |x| sghdg::exact_u(&p, x).unwrap_or(f64::NAN),
            Some(&|x| sghdg::exact_flux(&p, x).unwrap_or(f64::NAN)),
        );
        write(
            out,
            SghdgErrorReport {
                trace_linf: r.trace_linf,
                u_l2: r.u_l2,
                midpoint_linf: r.midpoint_linf,
                flux_l2: r.flux_l2.unwrap_or(f64::NAN),
            },
        )
    })
}

/// Solves the SG finite-volume scheme on the dual of a uniform mesh.
///
/// # Safety
/// As `sghdg_hdg_solve`; release with `sghdg_sg_free`.
#[no_mangle]
pub unsafe extern "C" fn sghdg_sg_solve(
    problem: *const SghdgProblem,
    cells: usize,
    out: *mut *mut SghdgSgSolution,
) -> SghdgStatus {
    guard(|| {
        let p: ProblemSpec = (*problem.as_ref().ok_or_else(null)?).into();
        if out.is_null() {
            return Err(null());
        }
        let mesh = sghdg::uniform_mesh(p.domain, cells)?;
        let inner = sghdg::solve_sg(&p, &sghdg::build_dual(&mesh))?;
        write(out, Box::into_raw(Box::new(SghdgSgSolution { inner })))
    })
}

/// # Safety
/// `sol` must be NULL or a handle from `sghdg_sg_solve` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sghdg_sg_free(sol: *mut SghdgSgSolution) {
    if !sol.is_null() {
        drop(Box::from_raw(sol));
    }
}

/// Number of nodal values (`cells + 1`); 0 for NULL.
///
/// # Safety
/// `sol` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sghdg_sg_len(sol: *const SghdgSgSolution) -> usize {
    sol.as_ref().map_or(0, |s| s.inner.values.len())
}

/// Copies the nodal values into `buf`.
///
/// # Safety
/// `sol` must be a live handle and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn sghdg_sg_values(
    sol: *const SghdgSgSolution,
    buf: *mut f64,
    len: usize,
) -> SghdgStatus {
    guard(|| copy_out(&sol.as_ref().ok_or_else(null)?.inner.values, buf, len))
}
