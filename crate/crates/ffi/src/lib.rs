//! C ABI over `qcs-core`.
//!
//! Functions return a `QcsStatus`. Strings handed out by the library are
//! owned by the caller and released with `qcs_string_free`; handles are
//! released with their `*_free` function. After a failure,
//! `qcs_last_error_message` describes it (per thread).

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use qcs_core::cli::{self, CliError, Options};
use qcs_core::dictionary::kernel_structure;
use qcs_core::etale::EtaleGroupModel;
use qcs_core::qcsheaf::{is_isomorphic, QCSheafModel};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QcsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    DomainError = 4,
    UsageError = 5,
    Panic = 6,
}

/// Finite étale group model `(A, F)`.
pub struct QcsModel {
    inner: EtaleGroupModel,
}

/// Quasicharacter sheaf as a pair of cocycle tables.
pub struct QcsSheaf {
    inner: QCSheafModel,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(s));
}

fn fail(status: QcsStatus, msg: impl Into<String>) -> QcsStatus {
    set_error(msg);
    status
}

/// Runs `f`, turning panics into `QcsStatus::Panic`.
fn guard(f: impl FnOnce() -> QcsStatus) -> QcsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(QcsStatus::Panic, msg)
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, QcsStatus> {
    if p.is_null() {
        return Err(fail(QcsStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| fail(QcsStatus::InvalidUtf8, e.to_string()))
}

fn to_c(s: String) -> *mut c_char {
    CString::new(s).expect("JSON has no nul bytes").into_raw()
}

/// Version string; static, do not free.
#[no_mangle]
pub extern "C" fn qcs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copy of the last error message on this thread, or null. Free with
/// `qcs_string_free`.
#[no_mangle]
pub extern "C" fn qcs_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| match &*e.borrow() {
        Some(s) => s.clone().into_raw(),
        None => std::ptr::null_mut(),
    })
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn qcs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Runs a CLI command such as `"coh total"` on JSON input. `bound < 0`
/// keeps the command's default limit. On `Ok` and on a `DomainError` whose
/// report records a failed check, `*out` receives the report; otherwise it
/// is set to null.
///
/// # Safety
/// `command` and `input` must be nul-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qcs_run_json(
    command: *const c_char,
    input: *const c_char,
    seed: u64,
    bound: i64,
    out: *mut *mut c_char,
) -> QcsStatus {
    guard(|| {
        if out.is_null() {
            return fail(QcsStatus::NullPointer, "null output pointer");
        }
        *out = std::ptr::null_mut();
        let (command, input) = match (read_str(command), read_str(input)) {
            (Ok(c), Ok(i)) => (c, i),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let opts = Options {
            seed,
            bound: u64::try_from(bound).ok(),
        };
        match cli::execute(command, input, &opts) {
            Ok(r) => {
                *out = to_c(serde_json::to_string(&r.value).expect("json"));
                if r.ok {
                    QcsStatus::Ok
                } else {
                    fail(QcsStatus::DomainError, "report records a failed check")
                }
            }
            Err(e @ CliError::Usage(_)) => {
                let status = if cli::COMMANDS.contains(&command) {
                    QcsStatus::ParseError
                } else {
                    QcsStatus::UsageError
                };
                fail(status, e.to_string())
            }
            Err(e @ CliError::Domain(_)) => fail(QcsStatus::DomainError, e.to_string()),
        }
    })
}

unsafe fn parse_into<T, H>(
    json: *const c_char,
    out: *mut *mut H,
    wrap: impl FnOnce(T) -> Result<H, String>,
) -> QcsStatus
where
    T: serde::de::DeserializeOwned,
{
    guard(|| {
        if out.is_null() {
            return fail(QcsStatus::NullPointer, "null output pointer");
        }
        *out = std::ptr::null_mut();
        let s = match read_str(json) {
            Ok(s) => s,
            Err(st) => return st,
        };
        let v: T = match serde_json::from_str(s) {
            Ok(v) => v,
            Err(e) => return fail(QcsStatus::ParseError, e.to_string()),
        };
        match wrap(v) {
            Ok(h) => {
                *out = Box::into_raw(Box::new(h));
                QcsStatus::Ok
            }
            Err(m) => fail(QcsStatus::DomainError, m),
        }
    })
}

/// Parses `{"factors": [...], "frob": [[...]]}`.
///
/// # Safety
/// `json` must be nul-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qcs_model_from_json(json: *const c_char, out: *mut *mut QcsModel) -> QcsStatus {
    parse_into(json, out, |inner: EtaleGroupModel| Ok(QcsModel { inner }))
}

/// # Safety
/// `m` must come from `qcs_model_from_json` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn qcs_model_free(m: *mut QcsModel) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// `|A|`.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qcs_model_order(m: *const QcsModel, out: *mut usize) -> QcsStatus {
    guard(|| match (m.as_ref(), out.is_null()) {
        (Some(m), false) => {
            *out = m.inner.order();
            QcsStatus::Ok
        }
        _ => fail(QcsStatus::NullPointer, "null argument"),
    })
}

/// Number of isomorphism classes of sheaves on the model.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qcs_model_class_count(m: *const QcsModel, out: *mut u64) -> QcsStatus {
    guard(|| match (m.as_ref(), out.is_null()) {
        (Some(m), false) => {
            let k = kernel_structure(m.inner.module()).order().expect("finite model");
            let f = m.inner.fixed_points().0.order().expect("finite model");
            *out = k * f;
            QcsStatus::Ok
        }
        _ => fail(QcsStatus::NullPointer, "null argument"),
    })
}

/// Parses `{"base": model, "a": {"x,y": "n/d", ...}, "b": {...}}`. The
/// tables are not validated; see `qcs_sheaf_is_valid`.
///
/// # Safety
/// `json` must be nul-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qcs_sheaf_from_json(json: *const c_char, out: *mut *mut QcsSheaf) -> QcsStatus {
    parse_into(json, out, |inner: QCSheafModel| Ok(QcsSheaf { inner }))
}

/// # Safety
/// `s` must come from `qcs_sheaf_from_json` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn qcs_sheaf_free(s: *mut QcsSheaf) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qcs_sheaf_is_valid(s: *const QcsSheaf, out: *mut bool) -> QcsStatus {
    guard(|| match (s.as_ref(), out.is_null()) {
        (Some(s), false) => {
            *out = s.inner.is_valid();
            QcsStatus::Ok
        }
        _ => fail(QcsStatus::NullPointer, "null argument"),
    })
}

/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qcs_sheaf_is_isomorphic(
    a: *const QcsSheaf,
    b: *const QcsSheaf,
    out: *mut bool,
) -> QcsStatus {
    guard(|| match (a.as_ref(), b.as_ref(), out.is_null()) {
        (Some(a), Some(b), false) => match is_isomorphic(&a.inner, &b.inner) {
            Ok(r) => {
                *out = r.is_isomorphic();
                QcsStatus::Ok
            }
            Err(e) => fail(QcsStatus::DomainError, e.to_string()),
        },
        _ => fail(QcsStatus::NullPointer, "null argument"),
    })
}

/// Full tables as JSON. Free with `qcs_string_free`.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qcs_sheaf_to_json(s: *const QcsSheaf, out: *mut *mut c_char) -> QcsStatus {
    guard(|| match (s.as_ref(), out.is_null()) {
        (Some(s), false) => {
            *out = to_c(serde_json::to_string(&s.inner).expect("json"));
            QcsStatus::Ok
        }
        _ => fail(QcsStatus::NullPointer, "null argument"),
    })
}
