//! C ABI over the diagram compiler.
//!
//! Handles are opaque and owned by the caller once returned; free them with
//! the matching `*_free` function. Strings returned by accessors are
//! NUL-terminated UTF-8 owned by the result handle and stay valid until the
//! handle is freed. No function unwinds across the boundary.

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bluefish::{Diagnostic, Registry};

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BfStatus {
    Ok = 0,
    /// The document produced error diagnostics; the result holds them.
    Diagnostics = 1,
    NullArgument = 2,
    IndexOutOfRange = 3,
    /// An internal failure was caught at the boundary.
    Panic = 4,
}

/// Compiler state: the kind registry.
pub struct BfEngine {
    registry: Registry,
}

/// Outcome of one render: SVG and dump on success, plus diagnostics.
pub struct BfResult {
    svg: Option<CString>,
    dump: Option<CString>,
    diagnostics: Vec<(CString, CString)>,
}

fn c_string(s: String) -> CString {
    // interior NULs cannot occur in generated SVG or JSON, but stay total
    CString::new(s).unwrap_or_else(|e| {
        let mut bytes = e.into_vec();
        bytes.retain(|b| *b != 0);
        CString::new(bytes).expect("NULs removed")
    })
}

fn diagnostic_pair(d: &Diagnostic) -> (CString, CString) {
    (c_string(d.code.as_str().to_owned()), c_string(d.to_string()))
}

/// Create an engine with the standard kinds. Returns NULL only on an
/// internal failure.
#[no_mangle]
pub extern "C" fn bf_engine_new() -> *mut BfEngine {
    catch_unwind(|| {
        Box::into_raw(Box::new(BfEngine {
            registry: Registry::standard(),
        }))
    })
    .unwrap_or(ptr::null_mut())
}

/// # Safety
/// `engine` must be NULL or a pointer from [`bf_engine_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bf_engine_free(engine: *mut BfEngine) {
    if !engine.is_null() {
        drop(Box::from_raw(engine));
    }
}

/// Compile `len` bytes of document text. On `Ok` and `Diagnostics`,
/// `*out` receives a result handle; otherwise it is set to NULL.
///
/// # Safety
/// `engine` must come from [`bf_engine_new`]; `doc` must point to `len`
/// readable bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bf_render(
    engine: *const BfEngine,
    doc: *const u8,
    len: usize,
    out: *mut *mut BfResult,
) -> BfStatus {
    if out.is_null() {
        return BfStatus::NullArgument;
    }
    *out = ptr::null_mut();
    if engine.is_null() || (doc.is_null() && len > 0) {
        return BfStatus::NullArgument;
    }
    let bytes: &[u8] = if len == 0 {
        &[]
    } else {
        std::slice::from_raw_parts(doc, len)
    };
    let registry = &(*engine).registry;
    let outcome = catch_unwind(AssertUnwindSafe(|| bluefish::render(bytes, registry)));
    let (status, result) = match outcome {
        Err(_) => return BfStatus::Panic,
        Ok(Ok(r)) => (
            BfStatus::Ok,
            BfResult {
                svg: Some(c_string(r.svg)),
                dump: Some(c_string(r.dump)),
                diagnostics: r.compiled.warnings.iter().map(diagnostic_pair).collect(),
            },
        ),
        Ok(Err(diags)) => (
            BfStatus::Diagnostics,
            BfResult {
                svg: None,
                dump: None,
                diagnostics: diags.iter().map(diagnostic_pair).collect(),
            },
        ),
    };
    *out = Box::into_raw(Box::new(result));
    status
}

/// SVG text, or NULL if the render failed.
///
/// # Safety
/// `result` must be NULL or a live handle from [`bf_render`].
#[no_mangle]
pub unsafe extern "C" fn bf_result_svg(result: *const BfResult) -> *const c_char {
    match result.as_ref().and_then(|r| r.svg.as_ref()) {
        Some(s) => s.as_ptr(),
        None => ptr::null(),
    }
}

/// Canonical scene dump, or NULL if the render failed.
///
/// # Safety
/// `result` must be NULL or a live handle from [`bf_render`].
#[no_mangle]
pub unsafe extern "C" fn bf_result_dump(result: *const BfResult) -> *const c_char {
    match result.as_ref().and_then(|r| r.dump.as_ref()) {
        Some(s) => s.as_ptr(),
        None => ptr::null(),
    }
}

/// Number of diagnostics (errors, or warnings on success).
///
/// # Safety
/// `result` must be NULL or a live handle from [`bf_render`].
#[no_mangle]
pub unsafe extern "C" fn bf_result_diagnostic_count(result: *const BfResult) -> usize {
    result.as_ref().map_or(0, |r| r.diagnostics.len())
}

/// Stable code (e.g. `BF001`) and full text of diagnostic `index`.
/// Either output pointer may be NULL.
///
/// # Safety
/// `result` must be a live handle from [`bf_render`]; non-NULL outputs
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn bf_result_diagnostic(
    result: *const BfResult,
    index: usize,
    code: *mut *const c_char,
    message: *mut *const c_char,
) -> BfStatus {
    let Some(r) = result.as_ref() else {
        return BfStatus::NullArgument;
    };
    let Some((c, m)) = r.diagnostics.get(index) else {
        return BfStatus::IndexOutOfRange;
    };
    if !code.is_null() {
        *code = c.as_ptr();
    }
    if !message.is_null() {
        *message = m.as_ptr();
    }
    BfStatus::Ok
}

/// # Safety
/// `result` must be NULL or a handle from [`bf_render`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bf_result_free(result: *mut BfResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn bf_status_str(status: BfStatus) -> *const c_char {
    let s: &'static CStr = match status {
        BfStatus::Ok => c"ok",
        BfStatus::Diagnostics => c"document has error diagnostics",
        BfStatus::NullArgument => c"required pointer argument was NULL",
        BfStatus::IndexOutOfRange => c"index out of range",
        BfStatus::Panic => c"internal failure",
    };
    s.as_ptr()
}
