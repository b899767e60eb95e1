//! C ABI over the caracol library.
//!
//! Graphs are opaque handles. Exact results are returned as NUL-terminated
//! decimal strings owned by the caller and released with `cr_string_free`.
//! Every call returns a `CrStatus`; on failure `cr_last_error_message` holds
//! a description for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use caracol::combinat::{k_parking_number, rational_catalan};
use caracol::graph::{caracol_k, multicaracol, DirectedMultigraph};
use caracol::kostant::kostant;
use caracol::lidskii::{lattice_points_binomial, volume, volume_unit_flow};

/// Opaque graph handle.
pub struct CrGraph {
    inner: DirectedMultigraph,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidGraph = 3,
    ParseError = 4,
    Panic = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<Vec<u8>>) {
    let mut bytes = msg.into();
    bytes.retain(|&b| b != 0);
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(bytes).expect("NUL bytes removed"));
}

fn fail(status: CrStatus, msg: impl ToString) -> CrStatus {
    set_error(msg.to_string());
    status
}

fn guard(f: impl FnOnce() -> CrStatus) -> CrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(CrStatus::Panic, msg)
        }
    }
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> CrStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            set_error("");
            CrStatus::Ok
        }
        Err(e) => fail(CrStatus::Panic, e),
    }
}

unsafe fn write_graph(out: *mut *mut CrGraph, g: DirectedMultigraph) -> CrStatus {
    *out = Box::into_raw(Box::new(CrGraph { inner: g }));
    set_error("");
    CrStatus::Ok
}

unsafe fn vector<'a>(g: &CrGraph, data: *const i64, len: usize) -> Result<&'a [i64], CrStatus> {
    if data.is_null() && len > 0 {
        return Err(fail(CrStatus::NullPointer, "vector pointer is null"));
    }
    if len != g.inner.num_vertices() {
        return Err(fail(
            CrStatus::InvalidArgument,
            format!(
                "vector has {len} entries, graph has {} vertices",
                g.inner.num_vertices()
            ),
        ));
    }
    Ok(if len == 0 {
        &[]
    } else {
        std::slice::from_raw_parts(data, len)
    })
}

/// Builds a graph from a spec string such as `caracol:n=5,k=2`.
///
/// # Safety
/// `spec` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cr_graph_from_spec(
    spec: *const c_char,
    out: *mut *mut CrGraph,
) -> CrStatus {
    guard(|| {
        if spec.is_null() || out.is_null() {
            return fail(CrStatus::NullPointer, "null argument");
        }
        let Ok(s) = CStr::from_ptr(spec).to_str() else {
            return fail(CrStatus::ParseError, "spec is not UTF-8");
        };
        match caracol::cli::parse_graph(s) {
            Ok(g) => write_graph(out, g),
            Err(caracol::cli::CliError::Invalid(m)) => fail(CrStatus::InvalidGraph, m),
            Err(e) => fail(CrStatus::ParseError, e),
        }
    })
}

/// k-caracol graph on n+1 vertices.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cr_graph_caracol(n: u32, k: u32, out: *mut *mut CrGraph) -> CrStatus {
    guard(|| {
        if out.is_null() {
            return fail(CrStatus::NullPointer, "null argument");
        }
        match caracol_k(n as usize, k as usize) {
            Ok(g) => write_graph(out, g),
            Err(e) => fail(CrStatus::InvalidArgument, e),
        }
    })
}

/// k-multicaracol graph on a+2 vertices.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cr_graph_multicaracol(a: u32, k: u32, out: *mut *mut CrGraph) -> CrStatus {
    guard(|| {
        if out.is_null() {
            return fail(CrStatus::NullPointer, "null argument");
        }
        match multicaracol(a as usize, k as usize) {
            Ok(g) => write_graph(out, g),
            Err(e) => fail(CrStatus::InvalidArgument, e),
        }
    })
}

/// # Safety
/// `g` must come from one of the constructors and not be freed already. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn cr_graph_free(g: *mut CrGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Number of vertices, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cr_graph_num_vertices(g: *const CrGraph) -> usize {
    g.as_ref().map_or(0, |g| g.inner.num_vertices())
}

/// Number of edges, counted with multiplicity, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cr_graph_num_edges(g: *const CrGraph) -> usize {
    g.as_ref().map_or(0, |g| g.inner.m())
}

unsafe fn with_vector(
    g: *const CrGraph,
    data: *const i64,
    len: usize,
    out: *mut *mut c_char,
    f: impl FnOnce(&DirectedMultigraph, &[i64]) -> Result<String, String>,
) -> CrStatus {
    guard(|| {
        let Some(g) = g.as_ref() else {
            return fail(CrStatus::NullPointer, "null graph");
        };
        if out.is_null() {
            return fail(CrStatus::NullPointer, "null output pointer");
        }
        let v = match vector(g, data, len) {
            Ok(v) => v,
            Err(s) => return s,
        };
        match f(&g.inner, v) {
            Ok(s) => write_string(out, s),
            Err(m) => fail(CrStatus::InvalidArgument, m),
        }
    })
}

/// Normalized volume of the flow polytope at net flow `netflow`.
///
/// # Safety
/// `g` must be a live handle, `netflow` must point to `len` values and `out`
/// must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cr_volume(
    g: *const CrGraph,
    netflow: *const i64,
    len: usize,
    out: *mut *mut c_char,
) -> CrStatus {
    with_vector(g, netflow, len, out, |g, a| {
        volume(g, a)
            .map(|v| v.to_string())
            .map_err(|e| e.to_string())
    })
}

/// Kostant partition function at `v`.
///
/// # Safety
/// As for [`cr_volume`].
#[no_mangle]
pub unsafe extern "C" fn cr_kostant(
    g: *const CrGraph,
    v: *const i64,
    len: usize,
    out: *mut *mut c_char,
) -> CrStatus {
    with_vector(g, v, len, out, |g, v| {
        kostant(g, v)
            .map(|k| k.to_string())
            .map_err(|e| e.to_string())
    })
}

/// Lattice points of the flow polytope at net flow `netflow`.
///
/// # Safety
/// As for [`cr_volume`].
#[no_mangle]
pub unsafe extern "C" fn cr_lattice_points(
    g: *const CrGraph,
    netflow: *const i64,
    len: usize,
    out: *mut *mut c_char,
) -> CrStatus {
    with_vector(g, netflow, len, out, |g, a| {
        lattice_points_binomial(g, a)
            .map(|v| v.to_string())
            .map_err(|e| e.to_string())
    })
}

/// Volume at the unit flow, evaluated as K_G(v_out) = K_G(v_in).
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cr_volume_unit_flow(g: *const CrGraph, out: *mut *mut c_char) -> CrStatus {
    guard(|| {
        let Some(g) = g.as_ref() else {
            return fail(CrStatus::NullPointer, "null graph");
        };
        if out.is_null() {
            return fail(CrStatus::NullPointer, "null output pointer");
        }
        match volume_unit_flow(&g.inner) {
            Ok(v) => write_string(out, v.to_string()),
            Err(e) => fail(CrStatus::InvalidArgument, e),
        }
    })
}

/// T_k(r, i).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cr_k_parking_number(
    k: u64,
    r: u64,
    i: u64,
    out: *mut *mut c_char,
) -> CrStatus {
    guard(|| {
        if out.is_null() {
            return fail(CrStatus::NullPointer, "null output pointer");
        }
        if i > r {
            return fail(CrStatus::InvalidArgument, "need i <= r");
        }
        write_string(out, k_parking_number(k, r, i).to_string())
    })
}

/// Rational Catalan number Cat(a, b).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cr_rational_catalan(a: u64, b: u64, out: *mut *mut c_char) -> CrStatus {
    guard(|| {
        if out.is_null() {
            return fail(CrStatus::NullPointer, "null output pointer");
        }
        match rational_catalan(a, b) {
            Ok(c) => write_string(out, c.to_string()),
            Err(e) => fail(CrStatus::InvalidArgument, e),
        }
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call into the library.
#[no_mangle]
pub extern "C" fn cr_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
