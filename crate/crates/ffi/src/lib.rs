//! C ABI for the cartan-weyl toolkit.
//!
//! Instances are opaque handles created from the text format; every other
//! entry point returns an error code and hands results back as JSON
//! strings, so bindings never need the internal data layout. Strings
//! returned through out-parameters are owned by the caller and must be
//! released with `cw_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

use cartan_weyl::io::{
    emit_instance, instance_reports, lattice_from_rows, parse_instance, parse_lattice_rows,
    rotation_report, Instance, RotationSpec,
};
use cartan_weyl::rotation::Theta;

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CwStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    CheckError = 4,
    NoSubgroupoid = 5,
}

/// An opaque parsed-and-validated instance.
pub struct CwInstance {
    inner: Instance,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl Into<Vec<u8>>) {
    let message = CString::new(message).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = message);
}

fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, CwStatus> {
    if ptr.is_null() {
        set_error("null string argument");
        return Err(CwStatus::NullArgument);
    }
    unsafe { CStr::from_ptr(ptr) }.to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        CwStatus::InvalidUtf8
    })
}

fn write_string(out: *mut *mut c_char, s: String) -> CwStatus {
    if out.is_null() {
        set_error("null out-parameter");
        return CwStatus::NullArgument;
    }
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            CwStatus::Ok
        }
        Err(_) => {
            set_error("result contained an interior NUL byte");
            CwStatus::CheckError
        }
    }
}

/// Message describing the most recent error on this thread. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cw_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn cw_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}

/// Parses instance text into a validated handle.
///
/// # Safety
/// `name` and `text` must be NUL-terminated strings; `out` must be a valid
/// pointer. On success `*out` owns the instance and must be released with
/// `cw_instance_free`.
#[no_mangle]
pub unsafe extern "C" fn cw_instance_parse(
    name: *const c_char,
    text: *const c_char,
    out: *mut *mut CwInstance,
) -> CwStatus {
    if out.is_null() {
        set_error("null out-parameter");
        return CwStatus::NullArgument;
    }
    let name = match read_str(name) {
        Ok(s) => s,
        Err(e) => return e,
    };
    let text = match read_str(text) {
        Ok(s) => s,
        Err(e) => return e,
    };
    match parse_instance(name, text) {
        Ok(inner) => {
            unsafe { *out = Box::into_raw(Box::new(CwInstance { inner })) };
            CwStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            CwStatus::ParseError
        }
    }
}

/// Releases an instance handle. A null pointer is a no-op.
///
/// # Safety
/// `ptr` must come from `cw_instance_parse` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn cw_instance_free(ptr: *mut CwInstance) {
    if !ptr.is_null() {
        drop(unsafe { Box::from_raw(ptr) });
    }
}

/// Re-emits an instance in the text format (round-trippable).
///
/// # Safety
/// `inst` must be a live handle; `out` must be valid. The returned string
/// must be released with `cw_string_free`.
#[no_mangle]
pub unsafe extern "C" fn cw_instance_emit(
    inst: *const CwInstance,
    out: *mut *mut c_char,
) -> CwStatus {
    let Some(inst) = (unsafe { inst.as_ref() }) else {
        set_error("null instance handle");
        return CwStatus::NullArgument;
    };
    write_string(out, emit_instance(&inst.inner))
}

/// Runs the full check battery and returns the JSON report array
/// (one report per subgroupoid, plus one for a rotation block).
/// `subgroupoid` may be null to check every declared subgroupoid.
///
/// # Safety
/// `inst` must be a live handle; `out` must be valid. The returned string
/// must be released with `cw_string_free`.
#[no_mangle]
pub unsafe extern "C" fn cw_instance_check_json(
    inst: *const CwInstance,
    subgroupoid: *const c_char,
    out: *mut *mut c_char,
) -> CwStatus {
    let Some(inst) = (unsafe { inst.as_ref() }) else {
        set_error("null instance handle");
        return CwStatus::NullArgument;
    };
    let sub = if subgroupoid.is_null() {
        None
    } else {
        match read_str(subgroupoid) {
            Ok(s) => Some(s),
            Err(e) => return e,
        }
    };
    match instance_reports(&inst.inner, sub) {
        Ok(reports) => match serde_json::to_string_pretty(&reports) {
            Ok(json) => write_string(out, json),
            Err(e) => {
                set_error(e.to_string());
                CwStatus::CheckError
            }
        },
        Err(message) => {
            let code = if message.contains("subgroupoid") {
                CwStatus::NoSubgroupoid
            } else {
                CwStatus::CheckError
            };
            set_error(message);
            code
        }
    }
}

/// Rotation-engine report for θ ("p/q" or "irrational") and a lattice
/// ("a b" for one generator, or "a b ; c d" for matrix rows whose columns
/// generate the subgroup). Returns the JSON report.
///
/// # Safety
/// `theta` and `lattice` must be NUL-terminated strings; `out` must be
/// valid. The returned string must be released with `cw_string_free`.
#[no_mangle]
pub unsafe extern "C" fn cw_rotation_check_json(
    theta: *const c_char,
    lattice: *const c_char,
    out: *mut *mut c_char,
) -> CwStatus {
    let theta = match read_str(theta) {
        Ok(s) => s,
        Err(e) => return e,
    };
    let lattice = match read_str(lattice) {
        Ok(s) => s,
        Err(e) => return e,
    };
    let theta = match Theta::parse(theta) {
        Ok(t) => t,
        Err(e) => {
            set_error(e.to_string());
            return CwStatus::ParseError;
        }
    };
    let rows = match parse_lattice_rows(lattice) {
        Ok(r) => r,
        Err(e) => {
            set_error(e.to_string());
            return CwStatus::ParseError;
        }
    };
    let spec = RotationSpec {
        theta,
        lattice: lattice_from_rows(&rows),
        rows,
    };
    let report = rotation_report(&spec);
    match serde_json::to_string_pretty(&report) {
        Ok(json) => write_string(out, json),
        Err(e) => {
            set_error(e.to_string());
            CwStatus::CheckError
        }
    }
}

/// Releases a string returned by this library. A null pointer is a no-op.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn cw_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    fn c(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    const HEISENBERG: &str = "GROUPOID\ngrid 2 2\nCOCYCLE\nmodulus 2\nbilinear 0 0 1 0\nSUBGROUPOID s\nmembers 0 1\n";

    #[test]
    fn parse_check_and_free_through_the_abi() {
        let name = c("heisenberg");
        let text = c(HEISENBERG);
        let mut handle: *mut CwInstance = ptr::null_mut();
        let status = unsafe { cw_instance_parse(name.as_ptr(), text.as_ptr(), &mut handle) };
        assert_eq!(status, CwStatus::Ok);
        assert!(!handle.is_null());

        let mut json: *mut c_char = ptr::null_mut();
        let status = unsafe { cw_instance_check_json(handle, ptr::null(), &mut json) };
        assert_eq!(status, CwStatus::Ok);
        let text_out = unsafe { CStr::from_ptr(json) }.to_str().unwrap();
        assert!(text_out.contains("\"cartan\": true"));
        assert!(text_out.contains("\"diag_S\": true"));
        unsafe { cw_string_free(json) };

        let mut emitted: *mut c_char = ptr::null_mut();
        assert_eq!(
            unsafe { cw_instance_emit(handle, &mut emitted) },
            CwStatus::Ok
        );
        let emitted_str = unsafe { CStr::from_ptr(emitted) }.to_str().unwrap().to_string();
        unsafe { cw_string_free(emitted) };
        assert!(emitted_str.contains("grid 2 2"));

        unsafe { cw_instance_free(handle) };
    }

    #[test]
    fn parse_errors_set_the_thread_message() {
        let name = c("bad");
        let text = c("GROUPOID\nelements 0\n");
        let mut handle: *mut CwInstance = ptr::null_mut();
        let status = unsafe { cw_instance_parse(name.as_ptr(), text.as_ptr(), &mut handle) };
        assert_eq!(status, CwStatus::ParseError);
        let msg = unsafe { CStr::from_ptr(cw_last_error()) }.to_str().unwrap();
        assert!(msg.contains("line"), "{msg}");
        assert!(handle.is_null());
    }

    #[test]
    fn rotation_reports_through_the_abi() {
        let theta = c("irrational");
        let lattice = c("2 0; 4 0");
        let mut json: *mut c_char = ptr::null_mut();
        let status =
            unsafe { cw_rotation_check_json(theta.as_ptr(), lattice.as_ptr(), &mut json) };
        assert_eq!(status, CwStatus::Ok);
        let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap();
        assert!(text.contains("\"cartan\": false"));
        unsafe { cw_string_free(json) };

        let lattice = c("2 3");
        let mut json: *mut c_char = ptr::null_mut();
        let status =
            unsafe { cw_rotation_check_json(theta.as_ptr(), lattice.as_ptr(), &mut json) };
        assert_eq!(status, CwStatus::Ok);
        let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap();
        assert!(text.contains("\"cartan\": true"));
        assert!(text.contains("\"trivializable\": true"));
        unsafe { cw_string_free(json) };
    }

    #[test]
    fn null_arguments_are_rejected() {
        let mut handle: *mut CwInstance = ptr::null_mut();
        assert_eq!(
            unsafe { cw_instance_parse(ptr::null(), ptr::null(), &mut handle) },
            CwStatus::NullArgument
        );
        let mut json: *mut c_char = ptr::null_mut();
        assert_eq!(
            unsafe { cw_instance_check_json(ptr::null(), ptr::null(), &mut json) },
            CwStatus::NullArgument
        );
        unsafe { cw_string_free(ptr::null_mut()) };
        unsafe { cw_instance_free(ptr::null_mut()) };
    }

    #[test]
    fn version_is_a_c_string() {
        let v = unsafe { CStr::from_ptr(cw_version()) };
        assert!(!v.to_str().unwrap().is_empty());
    }
}
