use std::ffi::{CStr, CString};
use std::ptr;

use tridist_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn parse(json: &str, diag: bool) -> (TdStatus, *mut TdConfig) {
    let mut cfg = ptr::null_mut();
    let st = unsafe { td_config_parse(c(json).as_ptr(), diag, &mut cfg) };
    (st, cfg)
}

fn last_error() -> String {
    let p = td_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

const FOUR: &str = r#"{"p3": [0, 1], "points": [[0, 0], [1, 1], [-1, 1], [2, 0]]}"#;

#[test]
fn census_round_trip() {
    let (st, cfg) = parse(FOUR, false);
    assert_eq!(st, TdStatus::Ok);
    let mut n = 0;
    assert_eq!(unsafe { td_config_len(cfg, &mut n) }, TdStatus::Ok);
    assert_eq!(n, 4);
    let mut census = ptr::null_mut();
    assert_eq!(unsafe { td_census_build(cfg, &mut census) }, TdStatus::Ok);
    let mut kappa = 0;
    assert_eq!(unsafe { td_census_kappa(census, &mut kappa) }, TdStatus::Ok);
    assert_eq!(kappa, 3);
    let (mut q, mut holds) = (0u64, false);
    assert_eq!(unsafe { td_census_pair_count(census, &mut q, &mut holds) }, TdStatus::Ok);
    assert_eq!((q, holds), (3, true));
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { td_analyze_json(cfg, &mut json) }, TdStatus::Ok);
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    assert!(text.contains("\"kappa\":3"));
    unsafe {
        td_string_free(json);
        td_census_free(census);
        td_config_free(cfg);
    }
}

#[test]
fn incidence_and_cap() {
    let (_, cfg) = parse(r#"{"p3": [0, 1], "points": [[1, 1], [-1, 1]]}"#, false);
    let mut i = 0;
    assert_eq!(unsafe { td_incidence_count(cfg, 25, &mut i) }, TdStatus::Ok);
    assert_eq!(i, 16);
    assert_eq!(unsafe { td_incidence_count(cfg, 1, &mut i) }, TdStatus::KappaCap);
    assert!(last_error().contains("cap"));
    unsafe { td_config_free(cfg) };
}

#[test]
fn error_codes() {
    let (st, cfg) = parse("{not json", false);
    assert_eq!(st, TdStatus::Parse);
    assert!(cfg.is_null());
    assert!(!last_error().is_empty());
    let (st, _) = parse(r#"{"p3": [0, 0], "points": [[0, 1]]}"#, false);
    assert_eq!(st, TdStatus::CollinearFrame);
    let (st, cfg) = parse(r#"{"p3": [0, 0], "points": [[0, 1]]}"#, true);
    assert_eq!(st, TdStatus::Ok);
    unsafe { td_config_free(cfg) };
    let (st, _) = parse(r#"{"p3": [0, 1], "points": [[1, 0]]}"#, false);
    assert_eq!(st, TdStatus::InvalidConfiguration);
    assert_eq!(unsafe { td_config_parse(ptr::null(), false, ptr::null_mut()) }, TdStatus::NullPointer);
    let mut n = 0;
    assert_eq!(unsafe { td_config_len(ptr::null(), &mut n) }, TdStatus::NullPointer);
    let bad = [0xffu8, 0];
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { td_config_parse(bad.as_ptr().cast(), false, &mut out) }, TdStatus::InvalidUtf8);
    unsafe {
        td_config_free(ptr::null_mut());
        td_census_free(ptr::null_mut());
        td_string_free(ptr::null_mut());
    }
}

#[test]
fn membership_matches_real_pair() {
    // q1 = (1,1), q2 = (-1,1) in frame (0,1): (X,Y,U,V) = (1,5,5,1)
    let args = ["0", "1", "1", "5", "5", "1"].map(c);
    let (mut m, mut d) = (false, false);
    let st = unsafe {
        td_membership(
            args[0].as_ptr(), args[1].as_ptr(), args[2].as_ptr(),
            args[3].as_ptr(), args[4].as_ptr(), args[5].as_ptr(), &mut m, &mut d,
        )
    };
    assert_eq!(st, TdStatus::Ok);
    assert!(m && d);
    let bad = c("1/0");
    let st = unsafe {
        td_membership(
            bad.as_ptr(), args[1].as_ptr(), args[2].as_ptr(),
            args[3].as_ptr(), args[4].as_ptr(), args[5].as_ptr(), &mut m, ptr::null_mut(),
        )
    };
    assert_eq!(st, TdStatus::Parse);
}

#[test]
fn header_lists_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/tridist.h")).unwrap();
    let src = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 12);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(!td_version().is_null());
}
