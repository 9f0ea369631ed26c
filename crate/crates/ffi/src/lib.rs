//! C ABI for `sepal`.
//!
//! Graphs are opaque [`SepalGraph`] handles. Every entry point returns a
//! [`SepalStatus`]; results come back through out-pointers, and strings
//! returned through them belong to the caller, who releases them with
//! [`sepal_string_free`]. After an error, [`sepal_last_error`] describes it.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sepal::cli::{self, MapKind, Status};
use sepal::constructions::build_emn;
use sepal::graphs::{fingerprint, text, GraphDoc};
use sepal::monoids::grothendieck;

/// Result codes. `0..=3` mirror the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SepalStatus {
    Ok = 0,
    /// The check ran and the answer is negative.
    Failure = 1,
    /// A search budget ran out before an answer.
    Unknown = 2,
    /// The computation rejected its input.
    Error = 3,
    NullArgument = 10,
    InvalidUtf8 = 11,
    ParseError = 12,
    WrongGraphKind = 13,
    Panic = 14,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SepalGraphKind {
    Weighted = 0,
    Separated = 1,
    Bipartite = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SepalMap {
    /// `L(E,ω) → L(E(ω),C(ω))`, vertex weighted input.
    Phi = 0,
    /// `L₁(E,ω) → L(E(ω)₁,C(ω)¹)`.
    Phi1 = 1,
    /// `L(E,C) → L(E₁,C¹)`.
    Phi0 = 2,
    /// Corner generators into `L(E,C)`.
    RhoTau = 3,
}

/// A parsed and validated graph.
pub struct SepalGraph {
    doc: GraphDoc,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).expect("nul bytes removed"));
}

fn fail(status: SepalStatus, msg: impl Into<String>) -> SepalStatus {
    set_error(msg);
    status
}

/// Runs `f`, turning a panic into [`SepalStatus::Panic`].
fn guard(f: impl FnOnce() -> SepalStatus) -> SepalStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(SepalStatus::Panic, msg)
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, SepalStatus> {
    if p.is_null() {
        return Err(fail(SepalStatus::NullArgument, "null string argument"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| fail(SepalStatus::InvalidUtf8, e.to_string()))
}

unsafe fn graph_ref<'a>(g: *const SepalGraph) -> Result<&'a SepalGraph, SepalStatus> {
    g.as_ref().ok_or_else(|| fail(SepalStatus::NullArgument, "null graph handle"))
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> SepalStatus {
    if out.is_null() {
        return fail(SepalStatus::NullArgument, "null output pointer");
    }
    let s = CString::new(s.replace('\0', " ")).expect("nul bytes removed");
    *out = s.into_raw();
    SepalStatus::Ok
}

unsafe fn put_graph(out: *mut *mut SepalGraph, doc: GraphDoc) -> SepalStatus {
    if out.is_null() {
        return fail(SepalStatus::NullArgument, "null output pointer");
    }
    *out = Box::into_raw(Box::new(SepalGraph { doc }));
    SepalStatus::Ok
}

fn status_of(s: Status) -> SepalStatus {
    match s {
        Status::Ok => SepalStatus::Ok,
        Status::Failure => SepalStatus::Failure,
        Status::Unknown => SepalStatus::Unknown,
        Status::Error => SepalStatus::Error,
    }
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn sepal_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread; empty if none. Valid
/// until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn sepal_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sepal_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a graph in the text format.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sepal_graph_parse(text: *const c_char, out: *mut *mut SepalGraph) -> SepalStatus {
    guard(|| {
        let t = tri!(read_str(text));
        match text::parse(t) {
            Ok(doc) => put_graph(out, doc),
            Err(e) => fail(SepalStatus::ParseError, e.to_string()),
        }
    })
}

/// Builds `E(m,n)` for `1 ≤ m ≤ n`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sepal_graph_emn(m: usize, n: usize, out: *mut *mut SepalGraph) -> SepalStatus {
    guard(|| match build_emn(m, n) {
        Ok(g) => put_graph(out, GraphDoc::Bipartite(g)),
        Err(e) => fail(SepalStatus::Error, e.to_string()),
    })
}

/// Releases a graph. Null is ignored.
///
/// # Safety
/// `g` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sepal_graph_free(g: *mut SepalGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Kind, vertex count and edge count; any out-pointer may be null.
///
/// # Safety
/// `g` must be a live handle; non-null out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn sepal_graph_info(
    g: *const SepalGraph,
    kind: *mut SepalGraphKind,
    vertices: *mut usize,
    edges: *mut usize,
) -> SepalStatus {
    guard(|| {
        let g = tri!(graph_ref(g));
        let d = g.doc.directed();
        if !kind.is_null() {
            *kind = match &g.doc {
                GraphDoc::Weighted(_) => SepalGraphKind::Weighted,
                GraphDoc::Separated(_) => SepalGraphKind::Separated,
                GraphDoc::Bipartite(_) => SepalGraphKind::Bipartite,
            };
        }
        if !vertices.is_null() {
            *vertices = d.vertex_count();
        }
        if !edges.is_null() {
            *edges = d.edge_count();
        }
        SepalStatus::Ok
    })
}

/// Canonical text form of the graph.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sepal_graph_print(g: *const SepalGraph, out: *mut *mut c_char) -> SepalStatus {
    guard(|| {
        let g = tri!(graph_ref(g));
        put_string(out, text::print_doc(&g.doc))
    })
}

/// SHA-256 of the canonical text, as 64 hex digits.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sepal_graph_hash(g: *const SepalGraph, out: *mut *mut c_char) -> SepalStatus {
    guard(|| {
        let g = tri!(graph_ref(g));
        put_string(out, fingerprint(&g.doc.to_raw()))
    })
}

/// Normal form of an expression such as `e1 e1* + 2 v`, printed.
///
/// # Safety
/// `g` must be a live handle, `expr` a nul-terminated string and `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn sepal_normal_form(
    g: *const SepalGraph,
    expr: *const c_char,
    out: *mut *mut c_char,
) -> SepalStatus {
    guard(|| {
        let g = tri!(graph_ref(g));
        let e = tri!(read_str(expr));
        match cli::nf_report(&g.doc, e) {
            Ok(r) => put_string(out, r.text),
            Err(err) => fail(SepalStatus::Error, err.to_string()),
        }
    })
}

/// Checks that the map sends every relation to 0. Returns
/// [`SepalStatus::Failure`] when some relation survives; `checked` (may be
/// null) receives the number of relations.
///
/// # Safety
/// `g` must be a live handle; a non-null `checked` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sepal_verify(g: *const SepalGraph, map: SepalMap, checked: *mut usize) -> SepalStatus {
    guard(|| {
        let g = tri!(graph_ref(g));
        let kind = match map {
            SepalMap::Phi => MapKind::Phi,
            SepalMap::Phi1 => MapKind::Phi1,
            SepalMap::Phi0 => MapKind::Phi0,
            SepalMap::RhoTau => MapKind::RhoTau,
        };
        let reports = match cli::verify_doc(kind, &g.doc) {
            Ok(r) => r,
            Err(e) if e.code() == "input" => return fail(SepalStatus::WrongGraphKind, e.to_string()),
            Err(e) => return fail(SepalStatus::Error, e.to_string()),
        };
        if !checked.is_null() {
            *checked = reports.iter().map(|r| r.checked).sum();
        }
        let first = reports.iter().flat_map(|r| r.failures()).next().map(|f| f.label.clone());
        match first {
            None => SepalStatus::Ok,
            Some(label) => fail(SepalStatus::Failure, format!("{label} does not vanish")),
        }
    })
}

/// Grothendieck group of the graph monoid, e.g. `Z/2` or `Z^2 + Z/3`.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sepal_grothendieck(g: *const SepalGraph, out: *mut *mut c_char) -> SepalStatus {
    guard(|| {
        let g = tri!(graph_ref(g));
        put_string(out, grothendieck(&cli::presentation(&g.doc)).to_string())
    })
}

/// Runs a command-line invocation (without the program name) and returns
/// its JSON report. The status is the report's status; usage errors give
/// [`SepalStatus::Error`] and no report.
///
/// # Safety
/// `argv` must point to `argc` nul-terminated strings; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn sepal_run_json(argc: usize, argv: *const *const c_char, out: *mut *mut c_char) -> SepalStatus {
    guard(|| {
        if argv.is_null() && argc > 0 {
            return fail(SepalStatus::NullArgument, "null argv");
        }
        let mut args = vec!["sepal".to_string()];
        for k in 0..argc {
            args.push(tri!(read_str(*argv.add(k))).to_string());
        }
        match cli::report_for_args(args) {
            Ok(r) => {
                let status = status_of(r.status);
                if status == SepalStatus::Error {
                    set_error(r.text.clone());
                }
                let s = put_string(out, r.to_json());
                if s != SepalStatus::Ok {
                    return s;
                }
                status
            }
            Err(msg) => {
                if !out.is_null() {
                    *out = ptr::null_mut();
                }
                fail(SepalStatus::Error, msg)
            }
        }
    })
}
