//! C ABI over the document interface: JSON documents in, JSON (or
//! table) reports out. Handles are opaque; every returned string is
//! owned by the caller and must be released with `ds_string_free`.
//!
//! Return codes mirror the command line: 0 all checks passed, 1 a
//! check failed, 2 the input was rejected. Negative codes are
//! interface errors (null pointer, bad UTF-8, bad options document).

use dirac_stab::cli::{run_document, RunOptions};
use dirac_stab::doc::InputDocument;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

pub const DS_PASS: i32 = 0;
pub const DS_FAIL: i32 = 1;
pub const DS_INVALID_INPUT: i32 = 2;
pub const DS_NULL_POINTER: i32 = -1;
pub const DS_BAD_UTF8: i32 = -2;
pub const DS_BAD_OPTIONS: i32 = -3;

/// A parsed input document plus the exact bytes it came from (reports
/// digest the bytes, so they are kept verbatim).
pub struct DsDocument {
    bytes: Vec<u8>,
    kind: CString,
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, i32> {
    if p.is_null() {
        return Err(DS_NULL_POINTER);
    }
    CStr::from_ptr(p).to_str().map_err(|_| DS_BAD_UTF8)
}

fn give_string(s: String, out: *mut *mut c_char) {
    if out.is_null() {
        return;
    }
    // interior NULs cannot appear in our reports; replace defensively
    let c = CString::new(s).unwrap_or_else(|e| {
        let mut v = e.into_vec();
        v.retain(|&b| b != 0);
        CString::new(v).unwrap()
    });
    unsafe { *out = c.into_raw() };
}

/// Parses a JSON input document. On success returns a handle and sets
/// `*err_out` to NULL; on failure returns NULL and sets `*err_out` to
/// the parse error (caller frees). `err_out` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn ds_document_parse(
    json: *const c_char,
    err_out: *mut *mut c_char,
) -> *mut DsDocument {
    if !err_out.is_null() {
        *err_out = ptr::null_mut();
    }
    let text = match read_str(json) {
        Ok(t) => t,
        Err(_) => {
            give_string("null or non-UTF-8 input".into(), err_out);
            return ptr::null_mut();
        }
    };
    match InputDocument::from_json(text) {
        Ok(doc) => Box::into_raw(Box::new(DsDocument {
            bytes: text.as_bytes().to_vec(),
            kind: CString::new(doc.kind_name()).unwrap(),
        })),
        Err(e) => {
            give_string(e.to_string(), err_out);
            ptr::null_mut()
        }
    }
}

/// The document's `kind` discriminator. The pointer is borrowed from
/// the handle and lives until `ds_document_free`.
#[no_mangle]
pub unsafe extern "C" fn ds_document_kind(doc: *const DsDocument) -> *const c_char {
    if doc.is_null() {
        return ptr::null();
    }
    (*doc).kind.as_ptr()
}

#[no_mangle]
pub unsafe extern "C" fn ds_document_free(doc: *mut DsDocument) {
    if !doc.is_null() {
        drop(Box::from_raw(doc));
    }
}

/// Runs one command ("verify", "cohomology", "stability", "flow",
/// "rectify") on a parsed document. `options_json` is an optional JSON
/// object mirroring the command-line flags (seed, tol, format, mc, xi,
/// t, step, q, qprime, subalgebra, degree, point, max_iter); NULL
/// means defaults. `*report_out` receives the report on codes 0 and 1
/// and the error message on code 2.
#[no_mangle]
pub unsafe extern "C" fn ds_document_run(
    doc: *const DsDocument,
    command: *const c_char,
    options_json: *const c_char,
    report_out: *mut *mut c_char,
) -> i32 {
    if !report_out.is_null() {
        *report_out = ptr::null_mut();
    }
    if doc.is_null() {
        return DS_NULL_POINTER;
    }
    let command = match read_str(command) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let opts = if options_json.is_null() {
        RunOptions::default()
    } else {
        let text = match read_str(options_json) {
            Ok(t) => t,
            Err(code) => return code,
        };
        match serde_json::from_str(text) {
            Ok(o) => o,
            Err(e) => {
                give_string(format!("bad options: {e}"), report_out);
                return DS_BAD_OPTIONS;
            }
        }
    };
    let (code, out, err) = run_document(command, &(*doc).bytes, &opts);
    give_string(if code == 2 { err } else { out }, report_out);
    code
}

/// One-shot parse + run for callers that do not need a handle.
#[no_mangle]
pub unsafe extern "C" fn ds_run(
    command: *const c_char,
    input_json: *const c_char,
    options_json: *const c_char,
    report_out: *mut *mut c_char,
) -> i32 {
    if !report_out.is_null() {
        *report_out = ptr::null_mut();
    }
    let mut err = ptr::null_mut();
    let doc = ds_document_parse(input_json, &mut err);
    if doc.is_null() {
        if !report_out.is_null() {
            *report_out = err;
        } else {
            ds_string_free(err);
        }
        return DS_INVALID_INPUT;
    }
    let code = ds_document_run(doc, command, options_json, report_out);
    ds_document_free(doc);
    code
}

/// Frees a string returned by this library. NULL is a no-op.
#[no_mangle]
pub unsafe extern "C" fn ds_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn ds_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cstr(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    unsafe fn take(p: *mut c_char) -> String {
        assert!(!p.is_null());
        let s = CStr::from_ptr(p).to_str().unwrap().to_owned();
        ds_string_free(p);
        s
    }

    const SU2: &str = r#"{"kind":"quadratic_lie","dim":3,
        "bracket":[[1,2,3,"1"],[2,3,1,"1"],[1,3,2,"-1"]]}"#;

    #[test]
    fn handle_roundtrip_and_verify() {
        unsafe {
            let mut err = ptr::null_mut();
            let doc = ds_document_parse(cstr(SU2).as_ptr(), &mut err);
            assert!(!doc.is_null());
            assert!(err.is_null());
            assert_eq!(
                CStr::from_ptr(ds_document_kind(doc)).to_str().unwrap(),
                "quadratic_lie"
            );
            let mut rep = ptr::null_mut();
            let code = ds_document_run(doc, cstr("verify").as_ptr(), ptr::null(), &mut rep);
            assert_eq!(code, DS_PASS);
            assert!(take(rep).contains("jacobi"));
            ds_document_free(doc);
        }
    }

    #[test]
    fn one_shot_json_report_with_options() {
        unsafe {
            let mut rep = ptr::null_mut();
            let code = ds_run(
                cstr("cohomology").as_ptr(),
                cstr(SU2).as_ptr(),
                cstr(r#"{"format":"json","seed":3}"#).as_ptr(),
                &mut rep,
            );
            assert_eq!(code, DS_PASS);
            let text = take(rep);
            let v: serde_json::Value = serde_json::from_str(&text).unwrap();
            assert_eq!(v["seed"], 3);
            assert_eq!(v["status"], "pass");
        }
    }

    #[test]
    fn parse_errors_and_null_handling() {
        unsafe {
            let mut rep = ptr::null_mut();
            let code = ds_run(
                cstr("verify").as_ptr(),
                cstr(r#"{"kind":"nope"}"#).as_ptr(),
                ptr::null(),
                &mut rep,
            );
            assert_eq!(code, DS_INVALID_INPUT);
            assert!(!take(rep).is_empty());

            assert_eq!(
                ds_run(cstr("verify").as_ptr(), ptr::null(), ptr::null(), &mut rep),
                DS_INVALID_INPUT
            );
            let mut err = ptr::null_mut();
            assert!(ds_document_parse(ptr::null(), &mut err).is_null());
            ds_string_free(err);
            ds_document_run(ptr::null(), cstr("verify").as_ptr(), ptr::null(), &mut rep);
        }
    }

    #[test]
    fn bad_options_are_rejected() {
        unsafe {
            let mut rep = ptr::null_mut();
            let code = ds_run(
                cstr("verify").as_ptr(),
                cstr(SU2).as_ptr(),
                cstr(r#"{"frmat":"json"}"#).as_ptr(),
                &mut rep,
            );
            assert_eq!(code, DS_BAD_OPTIONS);
            assert!(take(rep).contains("bad options"));
        }
    }

    #[test]
    fn semantic_failure_propagates() {
        unsafe {
            // tangent model of R^3 with a non-Poisson bivector
            let broken = r#"{"kind":"poly_algebroid","base_dim":3,"rank":3,
                "anchor":[[[[[0,0,0],"1"]],[],[]],
                          [[],[[[0,0,0],"1"]],[]],
                          [[],[],[[[0,0,0],"1"]]]],
                "pi":[[[1,2],[[[0,0,1],"1"]]],[[1,3],[[[1,0,1],"1"]]]],
                "twist":[]}"#;
            let mut rep = ptr::null_mut();
            let code = ds_run(
                cstr("verify").as_ptr(),
                cstr(broken).as_ptr(),
                ptr::null(),
                &mut rep,
            );
            assert_eq!(code, DS_FAIL);
            assert!(take(rep).contains("fail"));
        }
    }

    #[test]
    fn version_is_static() {
        unsafe {
            let v = CStr::from_ptr(ds_version()).to_str().unwrap();
            assert_eq!(v, env!("CARGO_PKG_VERSION"));
        }
    }
}
