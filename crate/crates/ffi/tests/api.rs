use std::ffi::{c_char, CStr, CString};
use std::ptr;

use xray_ffi::*;

const OVERLOAD: &str = include_str!("../../core/fixtures/Overload.java");
const BINOMIAL: &str = include_str!("../../core/fixtures/Binomial.java");

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    xray_string_free(s);
    out
}

unsafe fn last_error() -> String {
    let p = xray_last_error_message();
    assert!(!p.is_null(), "no error recorded");
    CStr::from_ptr(p).to_string_lossy().into_owned()
}

unsafe fn analyse(path: &str, text: &str, options: Option<&XrayOptions>) -> (XrayStatus, *mut XrayAnalysis) {
    let (p, t) = (cstr(path), cstr(text));
    let mut out = ptr::null_mut();
    let opts = options.map_or(ptr::null(), |o| o as *const _);
    let status = xray_analyze_source(p.as_ptr(), t.as_ptr(), opts, &mut out);
    (status, out)
}

#[test]
fn overload_round_trip() {
    unsafe {
        let (status, a) = analyse("Overload.java", OVERLOAD, None);
        assert_eq!(status, XrayStatus::Ok);
        assert!(xray_last_error_message().is_null());

        let mut s = ptr::null_mut();
        assert_eq!(xray_analysis_class(a, &mut s), XrayStatus::Ok);
        assert_eq!(take(s), "Overload");
        assert_eq!(xray_analysis_proper_concept_count(a), 2);
        assert_eq!(xray_analysis_dependency_count(a), 2);

        assert_eq!(xray_analysis_to_json(a, &mut s), XrayStatus::Ok);
        let json = take(s);
        assert!(json.contains("\"class\": \"Overload\""));
        assert_eq!(xray_analysis_to_json(a, &mut s), XrayStatus::Ok);
        assert_eq!(take(s), json);

        assert_eq!(xray_analysis_to_dot(a, false, &mut s), XrayStatus::Ok);
        let dot = take(s);
        assert!(dot.starts_with("digraph \"Overload concept lattice\""));
        assert_eq!(dot.matches(" -> ").count(), 1);

        assert_eq!(xray_analysis_to_text(a, &mut s), XrayStatus::Ok);
        assert!(take(s).contains("test(int,int)"));

        let mut ctx = ptr::null_mut();
        assert_eq!(xray_analysis_context(a, &mut ctx), XrayStatus::Ok);
        assert_eq!(xray_context_object_count(ctx), 2);
        assert_eq!(xray_context_property_count(ctx), 2);
        assert_eq!(xray_context_concept_count(ctx), xray_analysis_concept_count(a));
        assert_eq!(xray_context_to_cxt(ctx, &mut s), XrayStatus::Ok);
        let cxt = take(s);

        let mut back = ptr::null_mut();
        let text = cstr(&cxt);
        assert_eq!(xray_context_from_cxt(text.as_ptr(), &mut back), XrayStatus::Ok);
        assert_eq!(xray_context_to_cxt(back, &mut s), XrayStatus::Ok);
        assert_eq!(take(s), cxt);
        let name = cstr("Overload");
        assert_eq!(xray_context_to_dot(back, name.as_ptr(), false, &mut s), XrayStatus::Ok);
        assert_eq!(take(s), dot);

        xray_context_free(back);
        xray_context_free(ctx);
        xray_analysis_free(a);
    }
}

#[test]
fn options_are_honoured() {
    unsafe {
        let mut o = xray_options_default();
        assert_eq!(o.mode, XrayMode::Uses);
        assert_eq!(o.core_threshold, 1.0);
        o.mode = XrayMode::Calls;
        let (status, a) = analyse("Binomial.java", BINOMIAL, Some(&o));
        assert_eq!(status, XrayStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(xray_analysis_to_json(a, &mut s), XrayStatus::Ok);
        assert!(take(s).contains("\"context_mode\": \"calls\""));
        xray_analysis_free(a);

        let focus = cstr("Nope");
        o.focus = focus.as_ptr();
        let (status, a) = analyse("Binomial.java", BINOMIAL, Some(&o));
        assert_eq!(status, XrayStatus::UnknownClass);
        assert!(a.is_null());
        assert!(last_error().contains("Nope"));

        let mut o = xray_options_default();
        o.core_threshold = 1.5;
        let (status, _) = analyse("Binomial.java", BINOMIAL, Some(&o));
        assert_eq!(status, XrayStatus::InvalidArgument);
    }
}

#[test]
fn error_codes() {
    let cases = [
        ("class A { int @ x; }", XrayStatus::LexError),
        ("class A { int x }", XrayStatus::ParseError),
        ("class A extends B {} class B extends A {}", XrayStatus::ResolveError),
        ("class A extends Missing {}", XrayStatus::ResolveError),
        ("class P {} class Q {}", XrayStatus::NoFocus),
    ];
    for (src, expected) in cases {
        unsafe {
            let (status, a) = analyse("E.java", src, None);
            assert_eq!(status, expected, "{src}");
            assert!(a.is_null());
            assert!(!last_error().is_empty());
        }
    }
}

#[test]
fn located_messages() {
    unsafe {
        let (status, _) = analyse("Bad.java", "class A {\n  int @ x;\n}", None);
        assert_eq!(status, XrayStatus::LexError);
        assert!(last_error().starts_with("Bad.java:2:7"), "{}", last_error());
    }
}

#[test]
fn null_and_bad_arguments() {
    unsafe {
        let mut out = ptr::null_mut();
        let t = cstr("class A {}");
        assert_eq!(xray_analyze_source(ptr::null(), t.as_ptr(), ptr::null(), &mut out), XrayStatus::NullArgument);
        assert_eq!(xray_analyze_source(t.as_ptr(), t.as_ptr(), ptr::null(), ptr::null_mut()), XrayStatus::NullArgument);

        let bad = [0x63u8, 0xff, 0];
        let status = xray_analyze_source(t.as_ptr(), bad.as_ptr().cast(), ptr::null(), &mut out);
        assert_eq!(status, XrayStatus::InvalidUtf8);

        let mut s = ptr::null_mut();
        assert_eq!(xray_analysis_to_json(ptr::null(), &mut s), XrayStatus::NullArgument);
        assert_eq!(xray_analysis_concept_count(ptr::null()), 0);
        assert_eq!(xray_context_concept_count(ptr::null()), 0);

        let mut ctx = ptr::null_mut();
        let junk = cstr("B\n\nx\n");
        assert_eq!(xray_context_from_cxt(junk.as_ptr(), &mut ctx), XrayStatus::CxtError);
        assert!(ctx.is_null());

        xray_analysis_free(ptr::null_mut());
        xray_context_free(ptr::null_mut());
        xray_string_free(ptr::null_mut());
    }
}

#[test]
fn zero_sources_means_no_focus() {
    unsafe {
        let mut out = ptr::null_mut();
        let status = xray_analyze(ptr::null(), ptr::null(), 0, ptr::null(), &mut out);
        assert_eq!(status, XrayStatus::NoFocus);
    }
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(xray_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
