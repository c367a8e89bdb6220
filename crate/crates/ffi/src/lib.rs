//! C ABI over `cswen-core`.
//!
//! Every function returns a [`CswenStatus`]; on failure the message is kept per thread and
//! can be read with [`cswen_last_error_message`]. Solvers are opaque heap handles created by
//! [`cswen_solver_new`] and released with [`cswen_solver_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cswen_core::harness::{problem, setup, Cells, ProblemSpec, RunConfig, Simulation};
use cswen_core::limiter::{LimiterVariant, ReconstructionOperator};
use cswen_core::Error;

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CswenStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Config = 3,
    Unsupported = 4,
    NonPhysicalState = 5,
    Io = 6,
    Internal = 7,
    Panic = 8,
}

/// Limiter applied to troubled cells.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CswenLimiter {
    None = 0,
    Cswen = 1,
    Weno = 2,
}

/// Opaque solver handle.
pub struct CswenSolver {
    spec: ProblemSpec,
    sim: Simulation,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn status_of(e: &Error) -> CswenStatus {
    match e.root() {
        Error::InvalidArgument(_) => CswenStatus::InvalidArgument,
        Error::Config(_) => CswenStatus::Config,
        Error::Unsupported(_) => CswenStatus::Unsupported,
        Error::State { .. } => CswenStatus::NonPhysicalState,
        Error::Io(_) => CswenStatus::Io,
        _ => CswenStatus::Internal,
    }
}

/// Run `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (CswenStatus, String)>) -> CswenStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            CswenStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside cswen");
            CswenStatus::Panic
        }
    }
}

fn core<T>(r: cswen_core::Result<T>) -> Result<T, (CswenStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (CswenStatus, String) {
    (CswenStatus::NullPointer, format!("{what} is null"))
}

fn invalid(msg: impl Into<String>) -> (CswenStatus, String) {
    (CswenStatus::InvalidArgument, msg.into())
}

/// Copy the calling thread's last error message into `buf` (NUL-terminated, truncated to
/// `len`). Returns the full message length in bytes, excluding the terminator.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn cswen_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Create a solver for a registered problem at its initial time. `cells_x`/`cells_y` of 0
/// take the problem's default mesh (`cells_y` is ignored in 1D).
///
/// # Safety
/// `problem_id` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cswen_solver_new(
    problem_id: *const c_char,
    order: u32,
    cells_x: u32,
    cells_y: u32,
    limiter: CswenLimiter,
    out: *mut *mut CswenSolver,
) -> CswenStatus {
    guard(|| {
        if problem_id.is_null() {
            return Err(null("problem id"));
        }
        if out.is_null() {
            return Err(null("output handle"));
        }
        *out = ptr::null_mut();
        let id = CStr::from_ptr(problem_id).to_str().map_err(|_| invalid("problem id is not UTF-8"))?;
        let spec = core(problem(id))?;
        let cells = match (cells_x, cells_y) {
            (0, _) => None,
            (nx, 0) => Some(Cells::square(nx as usize)),
            (nx, ny) => Some(Cells { nx: nx as usize, ny: ny as usize }),
        };
        let cfg = RunConfig {
            degree: order as usize,
            cells,
            limiter: match limiter {
                CswenLimiter::None => None,
                CswenLimiter::Cswen => Some(LimiterVariant::Cswen),
                CswenLimiter::Weno => Some(LimiterVariant::Weno),
            },
            ..RunConfig::default()
        };
        let sim = core(setup(&spec, &cfg))?;
        *out = Box::into_raw(Box::new(CswenSolver { spec, sim }));
        Ok(())
    })
}

/// Release a solver. Null is accepted.
///
/// # Safety
/// `solver` must come from [`cswen_solver_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cswen_solver_free(solver: *mut CswenSolver) {
    if !solver.is_null() {
        drop(Box::from_raw(solver));
    }
}

unsafe fn handle<'a>(solver: *mut CswenSolver) -> Result<&'a mut CswenSolver, (CswenStatus, String)> {
    solver.as_mut().ok_or_else(|| null("solver"))
}

/// Advance one step without passing `t_end`; writes the new time to `time` if non-null.
///
/// # Safety
/// `solver` must be a live handle; `time` null or writable.
#[no_mangle]
pub unsafe extern "C" fn cswen_solver_step(solver: *mut CswenSolver, t_end: f64, time: *mut f64) -> CswenStatus {
    guard(|| {
        let s = handle(solver)?;
        if !(t_end.is_finite() && t_end >= s.sim.time()) {
            return Err(invalid(format!("t_end {t_end} is before the current time")));
        }
        if s.sim.time() < t_end {
            core(s.sim.step(t_end))?;
        }
        if !time.is_null() {
            *time = s.sim.time();
        }
        Ok(())
    })
}

/// Step until `t_end`; a negative `t_end` means the problem's own final time.
///
/// # Safety
/// `solver` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn cswen_solver_run(solver: *mut CswenSolver, t_end: f64) -> CswenStatus {
    guard(|| {
        let s = handle(solver)?;
        let t_end = if t_end < 0.0 { s.spec.t_end } else { t_end };
        if !(t_end.is_finite() && t_end >= s.sim.time()) {
            return Err(invalid(format!("t_end {t_end} is before the current time")));
        }
        while s.sim.time() < t_end {
            core(s.sim.step(t_end))?;
        }
        Ok(())
    })
}

/// # Safety
/// `solver` must be a live handle; `time` writable.
#[no_mangle]
pub unsafe extern "C" fn cswen_solver_time(solver: *mut CswenSolver, time: *mut f64) -> CswenStatus {
    guard(|| {
        let s = handle(solver)?;
        if time.is_null() {
            return Err(null("time"));
        }
        *time = s.sim.time();
        Ok(())
    })
}

/// Number of cells and of conserved variables.
///
/// # Safety
/// `solver` must be a live handle; the outputs null or writable.
#[no_mangle]
pub unsafe extern "C" fn cswen_solver_size(
    solver: *mut CswenSolver,
    num_cells: *mut usize,
    num_vars: *mut usize,
) -> CswenStatus {
    guard(|| {
        let s = handle(solver)?;
        let (cells, vars) = match &s.sim {
            Simulation::OneD(x) => (x.sol.num_cells(), x.sol.nvars()),
            Simulation::TwoD(x) => (x.sol.num_cells(), x.sol.nvars()),
        };
        if !num_cells.is_null() {
            *num_cells = cells;
        }
        if !num_vars.is_null() {
            *num_vars = vars;
        }
        Ok(())
    })
}

/// Cell averages of variable `var` into `out[0..len]`, cell order row by row in 2D.
/// `len` must equal the number of cells.
///
/// # Safety
/// `solver` must be a live handle; `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn cswen_solver_cell_averages(
    solver: *mut CswenSolver,
    var: usize,
    out: *mut f64,
    len: usize,
) -> CswenStatus {
    guard(|| {
        let s = handle(solver)?;
        if out.is_null() {
            return Err(null("output buffer"));
        }
        let out = std::slice::from_raw_parts_mut(out, len);
        match &s.sim {
            Simulation::OneD(x) => {
                check_shape(x.sol.num_cells(), x.sol.nvars(), var, len)?;
                for (k, o) in out.iter_mut().enumerate() {
                    *o = x.sol.cell_average(k, var);
                }
            }
            Simulation::TwoD(x) => {
                check_shape(x.sol.num_cells(), x.sol.nvars(), var, len)?;
                let nx = x.sol.mesh.nx();
                for (k, o) in out.iter_mut().enumerate() {
                    *o = x.sol.cell_average(k % nx, k / nx, var);
                }
            }
        }
        Ok(())
    })
}

fn check_shape(cells: usize, vars: usize, var: usize, len: usize) -> Result<(), (CswenStatus, String)> {
    if var >= vars {
        return Err(invalid(format!("variable {var} out of range ({vars} variables)")));
    }
    if len != cells {
        return Err(invalid(format!("buffer holds {len} values, mesh has {cells} cells")));
    }
    Ok(())
}

/// WENO point value at reference point `r` of the middle cell of a `2N+1`-cell stencil.
/// `widths` are relative to the middle cell; `averages` are the stencil cell averages.
///
/// # Safety
/// `widths` and `averages` must point to `2 * degree + 1` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cswen_weno_point_value(
    degree: u32,
    widths: *const f64,
    averages: *const f64,
    r: f64,
    epsilon: f64,
    out: *mut f64,
) -> CswenStatus {
    guard(|| {
        if widths.is_null() || averages.is_null() || out.is_null() {
            return Err(null("argument"));
        }
        if !(1..=3).contains(&degree) {
            return Err(invalid(format!("degree must be 1 to 3, got {degree}")));
        }
        if !(-1.0..=1.0).contains(&r) || !(epsilon > 0.0) {
            return Err(invalid("r must lie in [-1, 1] and epsilon be positive"));
        }
        let n = 2 * degree as usize + 1;
        let widths = std::slice::from_raw_parts(widths, n);
        let averages = std::slice::from_raw_parts(averages, n);
        let op = core(ReconstructionOperator::new(widths, degree as usize, &[r]))?;
        *out = op.point_value(0, averages, epsilon);
        Ok(())
    })
}
