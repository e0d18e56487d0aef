// Copyright 2026 The tpic Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


//! C ABI over `tpic`.
//!
//! Objects cross the boundary as opaque handles created by `*_from_json` or
//! derived from other handles, and released with the matching `*_free`.
//! Every fallible call returns a [`TpicStatus`]; on failure the message is
//! available from [`tpic_last_error`] on the same thread. Strings returned
//! through out-parameters are owned by the caller and released with
//! [`tpic_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tpic::determination::{count_classes, decide, Status, TaskPremise};
use tpic::observables::{annihilator, observable_from_annihilator, statistics, validate, Observable, OperatorSubspace};
use tpic::weyl::{covariant_observable, fiducial_with_zero_set, PhasePoint, ZeroSet};
use tpic::{io, Error};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TpicStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// A JSON document could not be parsed.
    Format = 3,
    /// The input was well formed but mathematically invalid.
    Domain = 4,
    /// An internal panic was caught at the boundary.
    Panic = 5,
}

/// Outcome of [`tpic_decide`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TpicVerdict {
    CertifiedYes = 0,
    CertifiedNo = 1,
    Unresolved = 2,
}

/// Opaque observable handle.
pub struct TpicObservable(Observable);

/// Opaque subspace handle (traceless Hermitian operators).
pub struct TpicSubspace(OperatorSubspace);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Fail(TpicStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = if matches!(e, Error::Format(_)) { TpicStatus::Format } else { TpicStatus::Domain };
        Fail(status, e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(TpicStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> TpicStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            TpicStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(&format!("panic: {msg}"));
            TpicStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|e| Fail(TpicStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("JSON has no interior NULs").into_raw()
}

/// Message describing the last failure on this thread, or an empty string
/// after a successful call. Valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn tpic_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tpic_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tpic_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Number of inequivalent (t, p) classes in dimension `d`; 0 if `d < 2`.
#[no_mangle]
pub extern "C" fn tpic_count_classes(d: usize) -> usize {
    if d < 2 { 0 } else { count_classes(d) }
}

/// Parses an observable document.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tpic_observable_from_json(json: *const c_char, out: *mut *mut TpicObservable) -> TpicStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        let obs = io::parse_observable(text)?;
        put(out, Box::into_raw(Box::new(TpicObservable(obs))), "out")
    })
}

/// # Safety
/// `obs` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tpic_observable_free(obs: *mut TpicObservable) {
    if !obs.is_null() {
        drop(Box::from_raw(obs));
    }
}

/// Serializes an observable; free the result with [`tpic_string_free`].
///
/// # Safety
/// `obs` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tpic_observable_to_json(obs: *const TpicObservable, out: *mut *mut c_char) -> TpicStatus {
    guard(|| {
        let obs = handle(obs, "obs")?;
        put(out, into_c_string(io::observable_to_json(&obs.0)), "out")
    })
}

/// # Safety
/// `obs` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tpic_observable_dim(obs: *const TpicObservable, out: *mut usize) -> TpicStatus {
    guard(|| put(out, handle(obs, "obs")?.0.dim(), "out"))
}

/// # Safety
/// `obs` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tpic_observable_num_outcomes(obs: *const TpicObservable, out: *mut usize) -> TpicStatus {
    guard(|| put(out, handle(obs, "obs")?.0.num_outcomes(), "out"))
}

/// Checks positivity and completeness. Returns `Domain` with a report in
/// [`tpic_last_error`] if the effects do not form an observable.
///
/// # Safety
/// `obs` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn tpic_observable_validate(obs: *const TpicObservable) -> TpicStatus {
    guard(|| {
        let report = validate(&handle(obs, "obs")?.0);
        if report.is_valid() { Ok(()) } else { Err(Fail(TpicStatus::Domain, report.to_string())) }
    })
}

/// Outcome probabilities of the state `rho_json` (a matrix document).
/// `probs` must hold `len` doubles, and `len` must equal the number of
/// outcomes.
///
/// # Safety
/// `obs` must be a live handle, `rho_json` NUL-terminated and `probs`
/// writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn tpic_observable_statistics(
    obs: *const TpicObservable,
    rho_json: *const c_char,
    probs: *mut f64,
    len: usize,
) -> TpicStatus {
    guard(|| {
        let obs = &handle(obs, "obs")?.0;
        let rho = io::parse_hermitian(read_str(rho_json, "rho_json")?)?;
        if probs.is_null() {
            return Err(null("probs"));
        }
        if len != obs.num_outcomes() {
            return Err(Fail(TpicStatus::Domain, format!("buffer holds {len}, need {}", obs.num_outcomes())));
        }
        let p = statistics(obs, &rho)?;
        std::slice::from_raw_parts_mut(probs, len).copy_from_slice(p.entries());
        Ok(())
    })
}

/// Annihilator of the observable's real operator system.
///
/// # Safety
/// `obs` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tpic_observable_annihilator(obs: *const TpicObservable, out: *mut *mut TpicSubspace) -> TpicStatus {
    guard(|| {
        let x = annihilator(&handle(obs, "obs")?.0);
        put(out, Box::into_raw(Box::new(TpicSubspace(x))), "out")
    })
}

/// Observable whose annihilator is the given subspace.
///
/// # Safety
/// `sub` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tpic_observable_from_annihilator(
    sub: *const TpicSubspace,
    out: *mut *mut TpicObservable,
) -> TpicStatus {
    guard(|| {
        let obs = observable_from_annihilator(&handle(sub, "sub")?.0)?;
        put(out, Box::into_raw(Box::new(TpicObservable(obs))), "out")
    })
}

/// Covariant phase-space observable whose fiducial vanishes exactly on the
/// points `(xs[k], xis[k])`, `k < n`. The set must be closed under negation
/// and avoid the origin.
///
/// # Safety
/// `xs` and `xis` must be readable for `n` elements (they may be null when
/// `n == 0`) and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tpic_covariant_from_zero_set(
    d: usize,
    xs: *const usize,
    xis: *const usize,
    n: usize,
    alpha: f64,
    out: *mut *mut TpicObservable,
) -> TpicStatus {
    guard(|| {
        let points: Vec<PhasePoint> = if n == 0 {
            Vec::new()
        } else {
            if xs.is_null() || xis.is_null() {
                return Err(null("xs/xis"));
            }
            let xs = std::slice::from_raw_parts(xs, n);
            let xis = std::slice::from_raw_parts(xis, n);
            if xs.iter().chain(xis).any(|&v| v >= d) {
                return Err(Fail(TpicStatus::Domain, format!("coordinates must lie in 0..{d}")));
            }
            xs.iter().zip(xis).map(|(&x, &xi)| PhasePoint { x, xi }).collect()
        };
        let zs = ZeroSet::new(d, points)?;
        let tau = fiducial_with_zero_set(d, &zs, alpha)?;
        put(out, Box::into_raw(Box::new(TpicObservable(covariant_observable(&tau)))), "out")
    })
}

/// Parses a subspace document.
///
/// # Safety
/// `json` must be NUL-terminated and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tpic_subspace_from_json(json: *const c_char, out: *mut *mut TpicSubspace) -> TpicStatus {
    guard(|| {
        let x = io::parse_subspace(read_str(json, "json")?)?;
        put(out, Box::into_raw(Box::new(TpicSubspace(x))), "out")
    })
}

/// # Safety
/// `sub` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tpic_subspace_to_json(sub: *const TpicSubspace, out: *mut *mut c_char) -> TpicStatus {
    guard(|| {
        let x = handle(sub, "sub")?;
        put(out, into_c_string(io::subspace_to_json(&x.0, None)), "out")
    })
}

/// Real dimension of the subspace.
///
/// # Safety
/// `sub` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tpic_subspace_dim(sub: *const TpicSubspace, out: *mut usize) -> TpicStatus {
    guard(|| put(out, handle(sub, "sub")?.0.dim(), "out"))
}

/// # Safety
/// `sub` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tpic_subspace_free(sub: *mut TpicSubspace) {
    if !sub.is_null() {
        drop(Box::from_raw(sub));
    }
}

/// Decides whether no nonzero element of `sub` has `rank_down <= t` and
/// `rank_up <= p`, i.e. (t, p)-informational completeness of any
/// observable with this annihilator. On `CertifiedNo` the witness operator
/// is written to `witness_json` as a matrix document if that pointer is
/// non-null; otherwise `*witness_json` is set to null.
///
/// # Safety
/// `sub` must be a live handle, `verdict` a valid pointer and
/// `witness_json` null or a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tpic_decide(
    sub: *const TpicSubspace,
    t: usize,
    p: usize,
    trials: usize,
    seed: u64,
    verdict: *mut TpicVerdict,
    witness_json: *mut *mut c_char,
) -> TpicStatus {
    guard(|| {
        let x = &handle(sub, "sub")?.0;
        if verdict.is_null() {
            return Err(null("verdict"));
        }
        let tp = TaskPremise::new(t, p, x.dim_space())?;
        let v = decide(x, tp, trials, seed)?;
        verdict.write(match v.status {
            Status::CertifiedYes => TpicVerdict::CertifiedYes,
            Status::CertifiedNo => TpicVerdict::CertifiedNo,
            Status::Unresolved => TpicVerdict::Unresolved,
        });
        if !witness_json.is_null() {
            let w = v.witness.map_or(ptr::null_mut(), |w| into_c_string(io::matrix_to_json(w.matrix())));
            witness_json.write(w);
        }
        Ok(())
    })
}
