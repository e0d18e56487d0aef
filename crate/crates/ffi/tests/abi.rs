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


//! Exercises the C ABI through its Rust symbols.

use std::ffi::{CStr, CString};
use std::ptr;

use tpic::constructions::{minimal_d4_observable, MinimalD4Kind};
use tpic_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(tpic_last_error()) }.to_str().unwrap().to_owned()
}

fn take_string(p: *mut std::ffi::c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { tpic_string_free(p) };
    s
}

fn load(json: &str) -> *mut TpicObservable {
    let c = CString::new(json).unwrap();
    let mut obs = ptr::null_mut();
    assert_eq!(unsafe { tpic_observable_from_json(c.as_ptr(), &mut obs) }, TpicStatus::Ok, "{}", last_error());
    obs
}

fn minimal_d4() -> *mut TpicObservable {
    load(&tpic::io::observable_to_json(&minimal_d4_observable(MinimalD4Kind::PureVsAll)))
}

#[test]
fn observable_handle_lifecycle() {
    let obs = minimal_d4();
    let (mut d, mut n) = (0usize, 0usize);
    unsafe {
        assert_eq!(tpic_observable_dim(obs, &mut d), TpicStatus::Ok);
        assert_eq!(tpic_observable_num_outcomes(obs, &mut n), TpicStatus::Ok);
        assert_eq!(tpic_observable_validate(obs), TpicStatus::Ok);
    }
    assert_eq!((d, n), (4, 11));

    let mut json = ptr::null_mut();
    assert_eq!(unsafe { tpic_observable_to_json(obs, &mut json) }, TpicStatus::Ok);
    let text = take_string(json);
    let again = load(&text);
    let mut json2 = ptr::null_mut();
    assert_eq!(unsafe { tpic_observable_to_json(again, &mut json2) }, TpicStatus::Ok);
    assert_eq!(take_string(json2), text);
    unsafe {
        tpic_observable_free(obs);
        tpic_observable_free(again);
        tpic_observable_free(ptr::null_mut());
        tpic_string_free(ptr::null_mut());
    }
}

#[test]
fn decide_through_annihilator() {
    let obs = minimal_d4();
    let mut sub = ptr::null_mut();
    assert_eq!(unsafe { tpic_observable_annihilator(obs, &mut sub) }, TpicStatus::Ok);
    let mut dim = 0;
    assert_eq!(unsafe { tpic_subspace_dim(sub, &mut dim) }, TpicStatus::Ok);
    assert_eq!(dim, 5);

    let mut verdict = TpicVerdict::Unresolved;
    let mut witness = ptr::null_mut();
    let s = unsafe { tpic_decide(sub, 1, 4, 1000, 7, &mut verdict, &mut witness) };
    assert_eq!(s, TpicStatus::Ok);
    assert_eq!(verdict, TpicVerdict::CertifiedYes);
    assert!(witness.is_null());

    let s = unsafe { tpic_decide(sub, 2, 2, 1000, 7, &mut verdict, &mut witness) };
    assert_eq!(s, TpicStatus::Ok);
    assert_eq!(verdict, TpicVerdict::CertifiedNo);
    let w = tpic::io::parse_hermitian(&take_string(witness)).unwrap();
    assert!(w.rank_signature().rank_up <= 2);

    // Witness pointer is optional.
    let s = unsafe { tpic_decide(sub, 2, 2, 1000, 7, &mut verdict, ptr::null_mut()) };
    assert_eq!(s, TpicStatus::Ok);

    let s = unsafe { tpic_decide(sub, 3, 2, 1000, 7, &mut verdict, ptr::null_mut()) };
    assert_eq!(s, TpicStatus::Domain);
    assert!(last_error().contains("t=3"), "{}", last_error());

    let mut back = ptr::null_mut();
    assert_eq!(unsafe { tpic_observable_from_annihilator(sub, &mut back) }, TpicStatus::Ok);
    let mut n = 0;
    assert_eq!(unsafe { tpic_observable_num_outcomes(back, &mut n) }, TpicStatus::Ok);
    assert_eq!(n, 11);
    unsafe {
        tpic_observable_free(back);
        tpic_subspace_free(sub);
        tpic_observable_free(obs);
    }
}

#[test]
fn subspace_json_round_trip() {
    let x = tpic::constructions::n_prime_subspace().subspace;
    let c = CString::new(tpic::io::subspace_to_json(&x, None)).unwrap();
    let mut sub = ptr::null_mut();
    assert_eq!(unsafe { tpic_subspace_from_json(c.as_ptr(), &mut sub) }, TpicStatus::Ok);
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { tpic_subspace_to_json(sub, &mut json) }, TpicStatus::Ok);
    let back = tpic::io::parse_subspace(&take_string(json)).unwrap();
    assert!(back.mutual_residual(&x) < 1e-12);
    unsafe { tpic_subspace_free(sub) };
}

#[test]
fn statistics_fill_caller_buffer() {
    let obs = minimal_d4();
    let rho = tpic::herm::HermitianOperator::identity(4).scaled(0.25);
    let c = CString::new(tpic::io::matrix_to_json(rho.matrix())).unwrap();
    let mut probs = vec![0.0; 11];
    let s = unsafe { tpic_observable_statistics(obs, c.as_ptr(), probs.as_mut_ptr(), probs.len()) };
    assert_eq!(s, TpicStatus::Ok, "{}", last_error());
    assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    let s = unsafe { tpic_observable_statistics(obs, c.as_ptr(), probs.as_mut_ptr(), 3) };
    assert_eq!(s, TpicStatus::Domain);
    unsafe { tpic_observable_free(obs) };
}

#[test]
fn covariant_zero_set_gives_annihilator() {
    let xs = [0usize, 0];
    let xis = [1usize, 3];
    let mut obs = ptr::null_mut();
    let s = unsafe { tpic_covariant_from_zero_set(4, xs.as_ptr(), xis.as_ptr(), 2, 0.5, &mut obs) };
    assert_eq!(s, TpicStatus::Ok, "{}", last_error());
    let mut sub = ptr::null_mut();
    let mut dim = 0;
    unsafe {
        assert_eq!(tpic_observable_annihilator(obs, &mut sub), TpicStatus::Ok);
        assert_eq!(tpic_subspace_dim(sub, &mut dim), TpicStatus::Ok);
        tpic_subspace_free(sub);
        tpic_observable_free(obs);
    }
    assert_eq!(dim, 2);

    let mut obs = ptr::null_mut();
    let s = unsafe { tpic_covariant_from_zero_set(5, xs.as_ptr(), xis.as_ptr(), 1, 0.5, &mut obs) };
    assert_eq!(s, TpicStatus::Domain);
    assert!(obs.is_null());
    let s = unsafe { tpic_covariant_from_zero_set(3, ptr::null(), ptr::null(), 0, 0.5, &mut obs) };
    assert_eq!(s, TpicStatus::Ok);
    unsafe { tpic_observable_free(obs) };
}

#[test]
fn error_codes() {
    let mut obs = ptr::null_mut();
    assert_eq!(unsafe { tpic_observable_from_json(ptr::null(), &mut obs) }, TpicStatus::NullPointer);
    let bad = CString::new("{\"dim\": 2").unwrap();
    assert_eq!(unsafe { tpic_observable_from_json(bad.as_ptr(), &mut obs) }, TpicStatus::Format);
    assert!(!last_error().is_empty());
    let latin1 = [0xffu8, 0x00];
    let s = unsafe { tpic_observable_from_json(latin1.as_ptr().cast(), &mut obs) };
    assert_eq!(s, TpicStatus::InvalidUtf8);
    let mut n = 0;
    assert_eq!(unsafe { tpic_observable_num_outcomes(ptr::null(), &mut n) }, TpicStatus::NullPointer);

    let good = minimal_d4();
    assert_eq!(unsafe { tpic_observable_dim(good, ptr::null_mut()) }, TpicStatus::NullPointer);
    assert_eq!(unsafe { tpic_observable_dim(good, &mut n) }, TpicStatus::Ok);
    assert_eq!(last_error(), "");
    unsafe { tpic_observable_free(good) };
}

#[test]
fn class_count_and_version() {
    assert_eq!(tpic_count_classes(1), 0);
    assert_eq!(tpic_count_classes(4), 5);
    let v = unsafe { CStr::from_ptr(tpic_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
