//! C ABI over the `tridist` core.
//!
//! Handles are opaque and owned by the caller; free them with the matching
//! `*_free`. Every fallible call returns a [`TdStatus`] and, on failure,
//! stores a message readable through [`td_last_error`] on the same thread.
//! Rationals cross the boundary as strings such as `"3/2"` or `"-4"`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tridist::census::{analyze, build_census, pair_count_q, DistanceCensus, Quadruple};
use tridist::curvefam::{dual_membership, membership_closed};
use tridist::exactmath::rational::{parse_rational, Rational};
use tridist::frame::{parse_configuration, AnchorFrame, Configuration};
use tridist::incidence::build_and_count_capped;
use tridist::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidInput = 4,
    CollinearFrame = 5,
    InvalidConfiguration = 6,
    KappaCap = 7,
    Internal = 8,
    Panic = 9,
}

/// A validated point configuration together with its input scale.
pub struct TdConfig {
    config: Configuration,
    scale: Rational,
}

/// Distance census of a configuration.
pub struct TdCensus {
    census: DistanceCensus,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> TdStatus {
    match e {
        Error::Parse(_) => TdStatus::Parse,
        Error::InvalidInput(_) | Error::NotAMember | Error::ZeroPolynomial(_) => TdStatus::InvalidInput,
        Error::CollinearFrame => TdStatus::CollinearFrame,
        Error::AnchorCollision { .. } | Error::DuplicatePoint(_) | Error::DegenerateAnchors | Error::MixedFrames => {
            TdStatus::InvalidConfiguration
        }
        Error::KappaCap { .. } => TdStatus::KappaCap,
        Error::Invariant(_) | Error::Io(_) => TdStatus::Internal,
    }
}

enum Fail {
    Status(TdStatus, String),
    Core(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> TdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TdStatus::Ok,
        Ok(Err(Fail::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Ok(Err(Fail::Core(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("panic inside tridist".into());
            TdStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail::Status(TdStatus::NullPointer, format!("{what} is null"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail::Status(TdStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn rational(p: *const c_char, what: &str) -> Result<Rational, Fail> {
    Ok(parse_rational(text(p, what)?.trim())?)
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn td_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn td_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a configuration document. Collinear frames are rejected unless
/// `collinear_diagnostics` is set.
///
/// # Safety
/// `json` must be a nul-terminated string and `out_config` writable.
#[no_mangle]
pub unsafe extern "C" fn td_config_parse(
    json: *const c_char,
    collinear_diagnostics: bool,
    out_config: *mut *mut TdConfig,
) -> TdStatus {
    guard(|| {
        let slot = out(out_config, "out_config")?;
        let (config, scale) = parse_configuration(text(json, "json")?)?;
        config.frame().require_noncollinear(collinear_diagnostics)?;
        *slot = Box::into_raw(Box::new(TdConfig { config, scale }));
        Ok(())
    })
}

/// # Safety
/// `config` must come from [`td_config_parse`] or be null.
#[no_mangle]
pub unsafe extern "C" fn td_config_free(config: *mut TdConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// # Safety
/// `config` must be a live handle and `out_n` writable.
#[no_mangle]
pub unsafe extern "C" fn td_config_len(config: *const TdConfig, out_n: *mut usize) -> TdStatus {
    guard(|| {
        *out(out_n, "out_n")? = handle(config, "config")?.config.len();
        Ok(())
    })
}

/// # Safety
/// `config` must be a live handle and `out_census` writable.
#[no_mangle]
pub unsafe extern "C" fn td_census_build(config: *const TdConfig, out_census: *mut *mut TdCensus) -> TdStatus {
    guard(|| {
        let slot = out(out_census, "out_census")?;
        let census = build_census(&handle(config, "config")?.config);
        *slot = Box::into_raw(Box::new(TdCensus { census }));
        Ok(())
    })
}

/// # Safety
/// `census` must come from [`td_census_build`] or be null.
#[no_mangle]
pub unsafe extern "C" fn td_census_free(census: *mut TdCensus) {
    if !census.is_null() {
        drop(Box::from_raw(census));
    }
}

/// Number of distinct squared distances.
///
/// # Safety
/// `census` must be a live handle and `out_kappa` writable.
#[no_mangle]
pub unsafe extern "C" fn td_census_kappa(census: *const TdCensus, out_kappa: *mut usize) -> TdStatus {
    guard(|| {
        *out(out_kappa, "out_kappa")? = handle(census, "census")?.census.kappa();
        Ok(())
    })
}

/// Unordered pairs at equal distance from `p3`, and whether
/// `Q >= n^2/(2 kappa) - n/2` holds.
///
/// # Safety
/// `census` must be a live handle; both outputs writable.
#[no_mangle]
pub unsafe extern "C" fn td_census_pair_count(
    census: *const TdCensus,
    out_q: *mut u64,
    out_bound_holds: *mut bool,
) -> TdStatus {
    guard(|| {
        let pc = pair_count_q(&handle(census, "census")?.census);
        *out(out_q, "out_q")? = pc.q;
        *out(out_bound_holds, "out_bound_holds")? = pc.bound_holds();
        Ok(())
    })
}

/// Incidence count `I` over `D^4`; fails with `KappaCap` above `max_kappa`.
///
/// # Safety
/// `config` must be a live handle and `out_i` writable.
#[no_mangle]
pub unsafe extern "C" fn td_incidence_count(
    config: *const TdConfig,
    max_kappa: usize,
    out_i: *mut usize,
) -> TdStatus {
    guard(|| {
        let slot = out(out_i, "out_i")?;
        let cfg = &handle(config, "config")?.config;
        let diag = cfg.frame().is_collinear();
        *slot = build_and_count_capped(cfg, diag, max_kappa)?.incidences();
        Ok(())
    })
}

/// JSON analysis report; release with [`td_string_free`].
///
/// # Safety
/// `config` must be a live handle and `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn td_analyze_json(config: *const TdConfig, out_json: *mut *mut c_char) -> TdStatus {
    guard(|| {
        let slot = out(out_json, "out_json")?;
        let h = handle(config, "config")?;
        let text = serde_json::to_string(&analyze(&h.config, &h.scale)).map_err(Error::from)?;
        *slot = CString::new(text).expect("json has no nul").into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn td_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Exact test of `(Y, U)` on `gamma_{X,V}` in frame `p3 = (a, b)`, with
/// `A >= 0` and `B >= 0`. `out_dual` receives the dual-curve answer.
///
/// # Safety
/// All string arguments must be nul-terminated; outputs writable.
#[no_mangle]
pub unsafe extern "C" fn td_membership(
    a: *const c_char,
    b: *const c_char,
    x: *const c_char,
    y: *const c_char,
    u: *const c_char,
    v: *const c_char,
    out_member: *mut bool,
    out_dual: *mut bool,
) -> TdStatus {
    guard(|| {
        let frame = AnchorFrame::new(rational(a, "a")?, rational(b, "b")?);
        let q = Quadruple::new(rational(x, "X")?, rational(y, "Y")?, rational(u, "U")?, rational(v, "V")?);
        let member = membership_closed(&frame, &q);
        let dual = dual_membership(&frame, &q.y, &q.u, &q.x, &q.v);
        *out(out_member, "out_member")? = member;
        if !out_dual.is_null() {
            *out_dual = dual;
        }
        Ok(())
    })
}
