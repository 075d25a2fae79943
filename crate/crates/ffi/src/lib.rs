//! C ABI over `xray_core`.
//!
//! Every fallible function returns an [`XrayStatus`]. On failure a message is
//! available from [`xray_last_error_message`] on the same thread. Objects are
//! opaque handles released with their `_free` function; strings handed out by
//! the library are released with [`xray_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use xray_core::extract::ContextMode;
use xray_core::fca::{concept_lattice, cxt, FormalContext};
use xray_core::java::FrontendError;
use xray_core::report::{emit_dot, emit_json, emit_text, DotOptions, TextOptions};
use xray_core::views::XRayReport;
use xray_core::{analyze, AnalysisError, AnalysisOptions, SourceFile};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XrayStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    LexError = 3,
    ParseError = 4,
    ResolveError = 5,
    UnknownClass = 6,
    NoFocus = 7,
    CxtError = 8,
    InvalidArgument = 9,
    Internal = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XrayMode {
    Uses = 0,
    Calls = 1,
    Combined = 2,
}

impl From<XrayMode> for ContextMode {
    fn from(m: XrayMode) -> Self {
        match m {
            XrayMode::Uses => ContextMode::Uses,
            XrayMode::Calls => ContextMode::Calls,
            XrayMode::Combined => ContextMode::Combined,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct XrayOptions {
    /// Class to analyse, or NULL to pick the most-derived one.
    pub focus: *const c_char,
    pub mode: XrayMode,
    pub include_dead: bool,
    pub allow_external_super: bool,
    /// Fraction of the attributes a method must reach to count as core, in [0, 1].
    pub core_threshold: f64,
}

/// An analysed class.
pub struct XrayAnalysis {
    report: XRayReport,
}

/// A formal context and its lattice.
pub struct XrayContext {
    context: FormalContext,
    lattice: xray_core::fca::Lattice,
}

impl XrayContext {
    fn new(context: FormalContext) -> Self {
        let lattice = concept_lattice(&context);
        XrayContext { context, lattice }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn c_string(s: String) -> CString {
    CString::new(s.replace('\0', "\u{fffd}")).expect("NULs were replaced")
}

struct Failure(XrayStatus, String);

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        let status = match &e {
            AnalysisError::Frontend { error, .. } => match error {
                FrontendError::Lex { .. } => XrayStatus::LexError,
                FrontendError::Parse { .. }
                | FrontendError::DuplicateMember { .. }
                | FrontendError::DuplicateClass { .. } => XrayStatus::ParseError,
                FrontendError::Cycle { .. } | FrontendError::UnknownSuperclass { .. } => XrayStatus::ResolveError,
            },
            AnalysisError::NoFocus | AnalysisError::AmbiguousFocus(_) => XrayStatus::NoFocus,
            AnalysisError::Extract(_) => XrayStatus::UnknownClass,
            AnalysisError::Report(_) => XrayStatus::Internal,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(XrayStatus::NullArgument, format!("`{what}` is NULL"))
}

/// Runs `f`, recording its error message and turning panics into `Internal`.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> XrayStatus {
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|payload| {
        let msg = payload
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| payload.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "unknown panic".to_string());
        Err(Failure(XrayStatus::Internal, format!("internal error: {msg}")))
    });
    match outcome {
        Ok(()) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            XrayStatus::Ok
        }
        Err(Failure(status, msg)) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = Some(c_string(msg)));
            status
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Failure(XrayStatus::InvalidUtf8, format!("`{what}` is not UTF-8: {e}")))
}

unsafe fn write_out<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

unsafe fn write_string(out: *mut *mut c_char, s: String) {
    *out = c_string(s).into_raw();
}

/// Options with the library defaults: no focus, uses mode, threshold 1.0.
#[no_mangle]
pub extern "C" fn xray_options_default() -> XrayOptions {
    let d = AnalysisOptions::default();
    XrayOptions {
        focus: ptr::null(),
        mode: XrayMode::Uses,
        include_dead: d.include_dead,
        allow_external_super: d.allow_external_super,
        core_threshold: d.core_threshold,
    }
}

/// Analyses `count` Java sources.
///
/// `paths[i]` names `texts[i]` in error messages. `options` may be NULL for
/// the defaults. On success `*out` receives a handle to free with
/// `xray_analysis_free`.
///
/// # Safety
/// `paths` and `texts` must point to `count` valid NUL-terminated strings,
/// and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn xray_analyze(
    paths: *const *const c_char,
    texts: *const *const c_char,
    count: usize,
    options: *const XrayOptions,
    out: *mut *mut XrayAnalysis,
) -> XrayStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        if count > 0 && (paths.is_null() || texts.is_null()) {
            return Err(null(if paths.is_null() { "paths" } else { "texts" }));
        }
        let mut sources = Vec::with_capacity(count);
        for i in 0..count {
            let path = str_arg(*paths.add(i), "paths[i]")?;
            let text = str_arg(*texts.add(i), "texts[i]")?;
            sources.push(SourceFile::new(path, text));
        }
        let o = if options.is_null() { xray_options_default() } else { *options };
        if !(0.0..=1.0).contains(&o.core_threshold) {
            return Err(Failure(
                XrayStatus::InvalidArgument,
                format!("core_threshold {} is outside [0, 1]", o.core_threshold),
            ));
        }
        let focus = if o.focus.is_null() { None } else { Some(str_arg(o.focus, "focus")?.to_string()) };
        let opts = AnalysisOptions {
            focus,
            mode: o.mode.into(),
            include_dead: o.include_dead,
            allow_external_super: o.allow_external_super,
            core_threshold: o.core_threshold,
        };
        let report = analyze(&sources, &opts)?;
        write_out(out, XrayAnalysis { report });
        Ok(())
    })
}

/// Analyses a single source; shorthand for `xray_analyze` with one file.
///
/// # Safety
/// `path` and `text` must be valid NUL-terminated strings, `options` NULL or
/// valid, and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn xray_analyze_source(
    path: *const c_char,
    text: *const c_char,
    options: *const XrayOptions,
    out: *mut *mut XrayAnalysis,
) -> XrayStatus {
    xray_analyze(&path, &text, 1, options, out)
}

/// # Safety
/// `analysis` must be NULL or a handle from `xray_analyze` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn xray_analysis_free(analysis: *mut XrayAnalysis) {
    if !analysis.is_null() {
        drop(Box::from_raw(analysis));
    }
}

unsafe fn analysis_ref<'a>(a: *const XrayAnalysis) -> Result<&'a XRayReport, Failure> {
    a.as_ref().map(|a| &a.report).ok_or_else(|| null("analysis"))
}

/// Name of the analysed class.
///
/// # Safety
/// `analysis` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn xray_analysis_class(analysis: *const XrayAnalysis, out: *mut *mut c_char) -> XrayStatus {
    guard(|| {
        let report = analysis_ref(analysis)?;
        if out.is_null() {
            return Err(null("out"));
        }
        write_string(out, report.class.clone());
        Ok(())
    })
}

/// The full report as pretty-printed JSON.
///
/// # Safety
/// `analysis` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn xray_analysis_to_json(analysis: *const XrayAnalysis, out: *mut *mut c_char) -> XrayStatus {
    guard(|| {
        let report = analysis_ref(analysis)?;
        if out.is_null() {
            return Err(null("out"));
        }
        write_string(out, emit_json(report));
        Ok(())
    })
}

/// The report as plain text without colour.
///
/// # Safety
/// `analysis` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn xray_analysis_to_text(analysis: *const XrayAnalysis, out: *mut *mut c_char) -> XrayStatus {
    guard(|| {
        let report = analysis_ref(analysis)?;
        if out.is_null() {
            return Err(null("out"));
        }
        write_string(out, emit_text(report, &TextOptions::default()));
        Ok(())
    })
}

/// The concept lattice as Graphviz DOT.
///
/// # Safety
/// `analysis` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn xray_analysis_to_dot(
    analysis: *const XrayAnalysis,
    reduced_labels: bool,
    out: *mut *mut c_char,
) -> XrayStatus {
    guard(|| {
        let report = analysis_ref(analysis)?;
        if out.is_null() {
            return Err(null("out"));
        }
        write_string(out, emit_dot(&report.lattice, &report.class, DotOptions { reduced_labels }));
        Ok(())
    })
}

/// Number of concepts in the lattice, including top and bottom. 0 for NULL.
///
/// # Safety
/// `analysis` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn xray_analysis_concept_count(analysis: *const XrayAnalysis) -> usize {
    analysis.as_ref().map_or(0, |a| a.report.lattice.concepts.len())
}

/// Number of concepts with nonempty extent and intent. 0 for NULL.
///
/// # Safety
/// `analysis` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn xray_analysis_proper_concept_count(analysis: *const XrayAnalysis) -> usize {
    analysis.as_ref().map_or(0, |a| a.report.lattice.proper_count())
}

/// Number of classified dependency edges. 0 for NULL.
///
/// # Safety
/// `analysis` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn xray_analysis_dependency_count(analysis: *const XrayAnalysis) -> usize {
    analysis.as_ref().map_or(0, |a| a.report.dependencies.len())
}

/// A copy of the analysis' formal context, to free with `xray_context_free`.
///
/// # Safety
/// `analysis` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn xray_analysis_context(
    analysis: *const XrayAnalysis,
    out: *mut *mut XrayContext,
) -> XrayStatus {
    guard(|| {
        let report = analysis_ref(analysis)?;
        if out.is_null() {
            return Err(null("out"));
        }
        write_out(out, XrayContext { context: report.context.clone(), lattice: report.lattice.clone() });
        Ok(())
    })
}

/// Parses a Burmeister `.cxt` document.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn xray_context_from_cxt(text: *const c_char, out: *mut *mut XrayContext) -> XrayStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let text = str_arg(text, "text")?;
        let context = cxt::from_cxt(text).map_err(|e| Failure(XrayStatus::CxtError, e.to_string()))?;
        write_out(out, XrayContext::new(context));
        Ok(())
    })
}

/// Serializes a context as Burmeister `.cxt`.
///
/// # Safety
/// `context` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn xray_context_to_cxt(context: *const XrayContext, out: *mut *mut c_char) -> XrayStatus {
    guard(|| {
        let ctx = context.as_ref().ok_or_else(|| null("context"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        write_string(out, cxt::to_cxt(&ctx.context));
        Ok(())
    })
}

/// Lattice of a context as Graphviz DOT, titled with `name`.
///
/// # Safety
/// `context` must be a live handle, `name` a valid string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn xray_context_to_dot(
    context: *const XrayContext,
    name: *const c_char,
    reduced_labels: bool,
    out: *mut *mut c_char,
) -> XrayStatus {
    guard(|| {
        let ctx = context.as_ref().ok_or_else(|| null("context"))?;
        let name = str_arg(name, "name")?;
        if out.is_null() {
            return Err(null("out"));
        }
        write_string(out, emit_dot(&ctx.lattice, name, DotOptions { reduced_labels }));
        Ok(())
    })
}

/// # Safety
/// `context` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn xray_context_object_count(context: *const XrayContext) -> usize {
    context.as_ref().map_or(0, |c| c.context.objects().len())
}

/// # Safety
/// `context` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn xray_context_property_count(context: *const XrayContext) -> usize {
    context.as_ref().map_or(0, |c| c.context.properties().len())
}

/// # Safety
/// `context` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn xray_context_concept_count(context: *const XrayContext) -> usize {
    context.as_ref().map_or(0, |c| c.lattice.concepts.len())
}

/// # Safety
/// `context` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn xray_context_free(context: *mut XrayContext) {
    if !context.is_null() {
        drop(Box::from_raw(context));
    }
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must be NULL or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn xray_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failed call on this thread, or NULL after a success.
/// The pointer stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn xray_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version, statically allocated.
#[no_mangle]
pub extern "C" fn xray_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
