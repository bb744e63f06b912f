//! The C entry points driven from Rust through raw pointers.

use std::ffi::{c_char, CStr};
use std::ptr;

use bluefish_ffi::*;

const DOC: &[u8] = br#"{"bluefish":1,"root":{"kind":"stackV","props":{"spacing":30},"children":[
    {"kind":"rect","name":"a","props":{"width":10,"height":20}},
    {"kind":"rect","name":"b","props":{"width":30,"height":10}}]}}"#;

unsafe fn text<'a>(p: *const c_char) -> &'a str {
    assert!(!p.is_null());
    CStr::from_ptr(p).to_str().unwrap()
}

unsafe fn render(engine: *const BfEngine, doc: &[u8]) -> (BfStatus, *mut BfResult) {
    let mut out = ptr::null_mut();
    let status = bf_render(engine, doc.as_ptr(), doc.len(), &mut out);
    (status, out)
}

#[test]
fn renders_svg_and_dump() {
    unsafe {
        let engine = bf_engine_new();
        assert!(!engine.is_null());
        let (status, result) = render(engine, DOC);
        assert_eq!(status, BfStatus::Ok);
        assert!(text(bf_result_svg(result)).starts_with("<svg"));
        assert!(text(bf_result_dump(result)).contains(r#""name": "b", "x": -15.00, "y": 50.00"#));
        assert_eq!(bf_result_diagnostic_count(result), 0);
        bf_result_free(result);
        bf_engine_free(engine);
    }
}

#[test]
fn errors_come_back_as_diagnostics() {
    unsafe {
        let engine = bf_engine_new();
        let doc = br#"{"bluefish":1,"root":{"kind":"stackV","children":[{"kind":"ref","select":"nope"}]}}"#;
        let (status, result) = render(engine, doc);
        assert_eq!(status, BfStatus::Diagnostics);
        assert!(bf_result_svg(result).is_null() && bf_result_dump(result).is_null());
        assert_eq!(bf_result_diagnostic_count(result), 1);
        let (mut code, mut message) = (ptr::null(), ptr::null());
        assert_eq!(bf_result_diagnostic(result, 0, &mut code, &mut message), BfStatus::Ok);
        assert_eq!(text(code), "BF002");
        assert!(text(message).starts_with("error[BF002]: "));
        assert_eq!(
            bf_result_diagnostic(result, 1, &mut code, ptr::null_mut()),
            BfStatus::IndexOutOfRange
        );
        bf_result_free(result);
        bf_engine_free(engine);
    }
}

#[test]
fn syntax_errors_and_empty_input_are_diagnostics() {
    unsafe {
        let engine = bf_engine_new();
        for doc in [&b"{"[..], &b""[..]] {
            let (status, result) = render(engine, doc);
            assert_eq!(status, BfStatus::Diagnostics);
            let mut code = ptr::null();
            bf_result_diagnostic(result, 0, &mut code, ptr::null_mut());
            assert_eq!(text(code), "BF006");
            bf_result_free(result);
        }
        bf_engine_free(engine);
    }
}

#[test]
fn null_arguments_are_rejected() {
    unsafe {
        let engine = bf_engine_new();
        let mut out = ptr::null_mut();
        assert_eq!(
            bf_render(ptr::null(), DOC.as_ptr(), DOC.len(), &mut out),
            BfStatus::NullArgument
        );
        assert!(out.is_null());
        assert_eq!(bf_render(engine, ptr::null(), 4, &mut out), BfStatus::NullArgument);
        assert_eq!(
            bf_render(engine, DOC.as_ptr(), DOC.len(), ptr::null_mut()),
            BfStatus::NullArgument
        );
        assert_eq!(
            bf_result_diagnostic(ptr::null(), 0, ptr::null_mut(), ptr::null_mut()),
            BfStatus::NullArgument
        );
        assert!(bf_result_svg(ptr::null()).is_null());
        assert_eq!(bf_result_diagnostic_count(ptr::null()), 0);
        bf_result_free(ptr::null_mut());
        bf_engine_free(ptr::null_mut());
        bf_engine_free(engine);
    }
}

#[test]
fn every_status_has_a_description() {
    for s in [
        BfStatus::Ok,
        BfStatus::Diagnostics,
        BfStatus::NullArgument,
        BfStatus::IndexOutOfRange,
        BfStatus::Panic,
    ] {
        assert!(!unsafe { text(bf_status_str(s)) }.is_empty());
    }
}

#[test]
fn one_engine_serves_many_renders() {
    unsafe {
        let engine = bf_engine_new();
        let first = render(engine, DOC).1;
        let second = render(engine, DOC).1;
        assert_eq!(text(bf_result_svg(first)), text(bf_result_svg(second)));
        bf_result_free(first);
        bf_result_free(second);
        bf_engine_free(engine);
    }
}
