//! C ABI over `torus-stab`.
//!
//! Configurations live behind opaque `TsConfig` handles that the caller
//! frees with `ts_config_free`. Every fallible call returns a `TsStatus`
//! and writes results through out-pointers; panics never cross the
//! boundary. Rules are passed as thresholds 1 to 5, where 3 is Majority.

use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use torus_stab::generators::{gen_hard_majority, gen_hard_thr2};
use torus_stab::stabilizer::{stabilize, StabilizerParams};
use torus_stab::structure::{majority_structure_check, thr2_structure_check};
use torus_stab::tester::{run_tester, QueryOracle, TesterParams};
use torus_stab::torus::{apply_rule, format_grid, is_stable, parse_grid, Cell, Rule, TorusConfig};
use torus_stab::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Infeasible = 4,
    BufferTooSmall = 5,
    Internal = 6,
}

impl From<&Error> for TsStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Parse { .. } => TsStatus::Parse,
            Error::InfeasibleSpec(_) | Error::BadN { .. } | Error::TooLarge { .. } => TsStatus::Infeasible,
            Error::BudgetExhausted(_) => TsStatus::Internal,
            _ => TsStatus::InvalidArgument,
        }
    }
}

/// Opaque configuration handle.
pub struct TsConfig(TorusConfig);

/// Decision of the stability tester.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TsTestResult {
    /// 1 if the configuration was accepted, 0 if rejected.
    pub accepted: i32,
    /// Distinct cells read.
    pub queries: u64,
    /// 1 if the torus was too small to sample and was read in full.
    pub fallback: i32,
    /// A cell of the witness when rejected, otherwise zero.
    pub witness_row: usize,
    pub witness_col: usize,
}

fn guard(f: impl FnOnce() -> TsStatus) -> TsStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(TsStatus::Internal)
}

fn rule_of(threshold: u8) -> Result<Rule, TsStatus> {
    Rule::new(threshold).map_err(|_| TsStatus::InvalidArgument)
}

fn emit(out: *mut *mut TsConfig, sigma: TorusConfig) -> TsStatus {
    // SAFETY: callers check `out` for null before computing `sigma`.
    unsafe { *out = Box::into_raw(Box::new(TsConfig(sigma))) };
    TsStatus::Ok
}

/// Borrows a handle, or reports a null pointer.
///
/// # Safety
/// `h` must be null or a live handle from this library.
unsafe fn config<'a>(h: *const TsConfig) -> Result<&'a TorusConfig, TsStatus> {
    h.as_ref().map(|c| &c.0).ok_or(TsStatus::NullPointer)
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

fn lib(r: torus_stab::Result<TorusConfig>) -> Result<TorusConfig, TsStatus> {
    r.map_err(|e| TsStatus::from(&e))
}

/// A static description of a status code; unknown codes get a generic one.
#[no_mangle]
pub extern "C" fn ts_status_message(status: i32) -> *const c_char {
    let s: &'static CStr = match status {
        0 => c"ok",
        1 => c"null pointer argument",
        2 => c"invalid argument",
        3 => c"malformed grid text",
        4 => c"no instance exists for these parameters",
        5 => c"output buffer too small",
        6 => c"internal error",
        _ => c"unknown status",
    };
    s.as_ptr()
}

/// Creates an all-zero `m×n` configuration.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn ts_config_new(m: usize, n: usize, out: *mut *mut TsConfig) -> TsStatus {
    guard(|| {
        if out.is_null() {
            return TsStatus::NullPointer;
        }
        emit(out, tri!(lib(TorusConfig::zeros(m, n))))
    })
}

/// Parses the text grid format: a `"m n"` header line, then `m` lines of
/// `n` characters `0`/`1`, each ending in LF.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ts_config_parse(text: *const c_char, out: *mut *mut TsConfig) -> TsStatus {
    guard(|| {
        if text.is_null() || out.is_null() {
            return TsStatus::NullPointer;
        }
        let Ok(s) = CStr::from_ptr(text).to_str() else {
            return TsStatus::Parse;
        };
        emit(out, tri!(lib(parse_grid(s))))
    })
}

/// Releases a handle. Null is accepted and ignored.
///
/// # Safety
/// `h` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ts_config_free(h: *mut TsConfig) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` must be a live handle; `m` and `n` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ts_config_dims(h: *const TsConfig, m: *mut usize, n: *mut usize) -> TsStatus {
    guard(|| {
        let s = tri!(config(h));
        if m.is_null() || n.is_null() {
            return TsStatus::NullPointer;
        }
        *m = s.m();
        *n = s.n();
        TsStatus::Ok
    })
}

/// # Safety
/// `h` must be a live handle; `value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ts_config_get(h: *const TsConfig, row: usize, col: usize, value: *mut i32) -> TsStatus {
    guard(|| {
        let s = tri!(config(h));
        if value.is_null() {
            return TsStatus::NullPointer;
        }
        if row >= s.m() || col >= s.n() {
            return TsStatus::InvalidArgument;
        }
        *value = i32::from(s.get(Cell::new(row, col)));
        TsStatus::Ok
    })
}

/// Sets a cell to 1 if `value` is non-zero, else to 0.
///
/// # Safety
/// `h` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ts_config_set(h: *mut TsConfig, row: usize, col: usize, value: i32) -> TsStatus {
    guard(|| {
        let Some(s) = h.as_mut() else {
            return TsStatus::NullPointer;
        };
        if row >= s.0.m() || col >= s.0.n() {
            return TsStatus::InvalidArgument;
        }
        s.0.set(Cell::new(row, col), value != 0);
        TsStatus::Ok
    })
}

/// Writes the grid text, NUL-terminated, into `buf`. `needed` receives the
/// required size including the terminator, also when the buffer is too
/// small; `buf` may then be null.
///
/// # Safety
/// `h` must be a live handle; `buf` must hold `len` bytes or be null;
/// `needed` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ts_config_format(h: *const TsConfig, buf: *mut c_char, len: usize, needed: *mut usize) -> TsStatus {
    guard(|| {
        let s = tri!(config(h));
        if needed.is_null() {
            return TsStatus::NullPointer;
        }
        let text = format_grid(s);
        *needed = text.len() + 1;
        if buf.is_null() || len < text.len() + 1 {
            return TsStatus::BufferTooSmall;
        }
        ptr::copy_nonoverlapping(text.as_ptr(), buf.cast::<u8>(), text.len());
        *buf.add(text.len()) = 0;
        TsStatus::Ok
    })
}

/// One synchronous step of the rule; the result is a new handle.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ts_step(h: *const TsConfig, threshold: u8, out: *mut *mut TsConfig) -> TsStatus {
    guard(|| {
        let s = tri!(config(h));
        let rule = tri!(rule_of(threshold));
        if out.is_null() {
            return TsStatus::NullPointer;
        }
        emit(out, apply_rule(s, rule))
    })
}

/// Writes 1 if two steps of the rule return the configuration, else 0.
///
/// # Safety
/// `h` must be a live handle; `stable` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ts_is_stable(h: *const TsConfig, threshold: u8, stable: *mut i32) -> TsStatus {
    guard(|| {
        let s = tri!(config(h));
        let rule = tri!(rule_of(threshold));
        if stable.is_null() {
            return TsStatus::NullPointer;
        }
        *stable = i32::from(is_stable(s, rule));
        TsStatus::Ok
    })
}

/// Structural characterisation for thresholds 2 and 3; writes 1 if the
/// configuration has the structure of a stable one.
///
/// # Safety
/// `h` must be a live handle; `ok` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ts_structure_check(h: *const TsConfig, threshold: u8, ok: *mut i32) -> TsStatus {
    guard(|| {
        let s = tri!(config(h));
        if ok.is_null() {
            return TsStatus::NullPointer;
        }
        *ok = match threshold {
            2 => i32::from(thr2_structure_check(s).is_ok()),
            3 => i32::from(majority_structure_check(s)),
            _ => return TsStatus::InvalidArgument,
        };
        TsStatus::Ok
    })
}

/// Runs the Threshold-2 stability tester with accuracy `eps` in (0, 1].
///
/// # Safety
/// `h` must be a live handle; `result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ts_test(h: *const TsConfig, eps: f64, seed: u64, result: *mut TsTestResult) -> TsStatus {
    guard(|| {
        let s = tri!(config(h));
        if result.is_null() {
            return TsStatus::NullPointer;
        }
        let params = tri!(TesterParams::new(eps, seed).map_err(|e| TsStatus::from(&e)));
        let mut oracle = QueryOracle::new(s);
        let out = tri!(run_tester(&mut oracle, &params).map_err(|e| TsStatus::from(&e)));
        let witness = match &out.decision {
            torus_stab::tester::Decision::Accept => None,
            torus_stab::tester::Decision::Reject(r) => r.cells.first().copied(),
        };
        *result = TsTestResult {
            accepted: i32::from(out.decision.is_accept()),
            queries: out.queries,
            fallback: i32::from(out.fallback),
            witness_row: witness.map_or(0, |c| c.row),
            witness_col: witness.map_or(0, |c| c.col),
        };
        TsStatus::Ok
    })
}

/// Moves the configuration to a nearby Threshold-2 stable one. `changed`
/// receives the number of modified cells and may be null.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ts_stabilize(h: *const TsConfig, eps: f64, out: *mut *mut TsConfig, changed: *mut usize) -> TsStatus {
    guard(|| {
        let s = tri!(config(h));
        if out.is_null() {
            return TsStatus::NullPointer;
        }
        let params = tri!(StabilizerParams::new(eps).map_err(|e| TsStatus::from(&e)));
        let (fixed, report) = tri!(stabilize(s, &params).map_err(|e| TsStatus::from(&e)));
        if !changed.is_null() {
            *changed = report.total();
        }
        emit(out, fixed)
    })
}

/// The `n×n` instance with exactly `2n` unstable Threshold-2 cells.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ts_gen_hard_thr2(n: usize, out: *mut *mut TsConfig) -> TsStatus {
    guard(|| {
        if out.is_null() {
            return TsStatus::NullPointer;
        }
        emit(out, tri!(lib(gen_hard_thr2(n))))
    })
}

/// The `n×n` Majority instance with few unstable cells.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ts_gen_hard_majority(n: usize, out: *mut *mut TsConfig) -> TsStatus {
    guard(|| {
        if out.is_null() {
            return TsStatus::NullPointer;
        }
        emit(out, tri!(lib(gen_hard_majority(n))))
    })
}
