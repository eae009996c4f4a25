//! C ABI for the star-factor solver.
//!
//! Handles are opaque pointers created and destroyed by this library; every
//! fallible call returns an [`SfStatus`] code and records a human-readable
//! message retrievable through [`sf_last_error`]. Strings returned by the
//! library are owned by the caller and must be released with
//! [`sf_string_free`].

// every entry point null-checks its pointer arguments before dereferencing
#![allow(clippy::not_unsafe_ptr_arg_deref)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::ptr;

use star_factor::cover::Mode;
use star_factor::graph::{Graph, VertexSet};
use star_factor::packing::{verify, StarPacking};
use star_factor::solver::{solve, solve_regular, SolverConfig};
use star_factor::{construct, io, oracle, Error};

/// Status codes mirrored by the CLI exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SfStatus {
    SfOk = 0,
    /// The packing failed verification.
    SfInvalid = 1,
    /// Bad input: precondition or parse failure.
    SfInputError = 2,
    /// A faithful-mode solver stage failed.
    SfSolverFailure = 3,
    /// A required pointer argument was null.
    SfNullPointer = 4,
}

/// Opaque graph handle.
pub struct SfGraph(Graph);

/// Opaque packing handle.
pub struct SfPacking(StarPacking);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &Error) -> SfStatus {
    match err {
        Error::SolverFailure { .. } => SfStatus::SfSolverFailure,
        _ => SfStatus::SfInputError,
    }
}

fn fail(err: &Error) -> SfStatus {
    set_error(&err.to_string());
    status_of(err)
}

/// Most recent error message on this thread; empty when the last call
/// succeeded. The pointer stays valid until the next failing call.
#[no_mangle]
pub extern "C" fn sf_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Frees a string returned by this library. Null is ignored.
#[no_mangle]
pub extern "C" fn sf_string_free(s: *mut c_char) {
    if !s.is_null() {
        unsafe {
            drop(CString::from_raw(s));
        }
    }
}

unsafe fn path_arg<'a>(ptr: *const c_char) -> Result<&'a Path, SfStatus> {
    if ptr.is_null() {
        set_error("null path");
        return Err(SfStatus::SfNullPointer);
    }
    match unsafe { CStr::from_ptr(ptr) }.to_str() {
        Ok(s) => Ok(Path::new(s)),
        Err(_) => {
            set_error("path is not valid UTF-8");
            Err(SfStatus::SfInputError)
        }
    }
}

/// Builds a graph from an edge array (`2*edge_count` vertex indices,
/// endpoint pairs). Returns null on invalid input.
#[no_mangle]
pub extern "C" fn sf_graph_from_edges(
    vertex_count: usize,
    endpoints: *const usize,
    edge_count: usize,
) -> *mut SfGraph {
    if endpoints.is_null() && edge_count > 0 {
        set_error("null endpoint array");
        return ptr::null_mut();
    }
    let pairs: Vec<(usize, usize)> = if edge_count == 0 {
        Vec::new()
    } else {
        let flat = unsafe { std::slice::from_raw_parts(endpoints, 2 * edge_count) };
        flat.chunks_exact(2).map(|c| (c[0], c[1])).collect()
    };
    match Graph::from_edges(vertex_count, &pairs) {
        Ok(g) => Box::into_raw(Box::new(SfGraph(g))),
        Err(e) => {
            set_error(&e.to_string());
            ptr::null_mut()
        }
    }
}

/// Reads a graph file (text format, `graph <n>` header plus `e <u> <v>`
/// lines). Returns null on parse failure.
#[no_mangle]
pub extern "C" fn sf_graph_read_file(path: *const c_char) -> *mut SfGraph {
    let path = match unsafe { path_arg(path) } {
        Ok(p) => p,
        Err(_) => return ptr::null_mut(),
    };
    match io::read_graph(path) {
        Ok(g) => Box::into_raw(Box::new(SfGraph(g))),
        Err(e) => {
            set_error(&e.to_string());
            ptr::null_mut()
        }
    }
}

#[no_mangle]
pub extern "C" fn sf_graph_write_file(g: *const SfGraph, path: *const c_char) -> SfStatus {
    let Some(g) = (unsafe { g.as_ref() }) else {
        set_error("null graph");
        return SfStatus::SfNullPointer;
    };
    let path = match unsafe { path_arg(path) } {
        Ok(p) => p,
        Err(code) => return code,
    };
    match io::write_graph(path, &g.0) {
        Ok(()) => SfStatus::SfOk,
        Err(e) => fail(&e),
    }
}

#[no_mangle]
pub extern "C" fn sf_graph_free(g: *mut SfGraph) {
    if !g.is_null() {
        unsafe {
            drop(Box::from_raw(g));
        }
    }
}

#[no_mangle]
pub extern "C" fn sf_graph_vertex_count(g: *const SfGraph) -> usize {
    unsafe { g.as_ref() }.map_or(0, |g| g.0.vertex_count())
}

#[no_mangle]
pub extern "C" fn sf_graph_edge_count(g: *const SfGraph) -> usize {
    unsafe { g.as_ref() }.map_or(0, |g| g.0.edge_count())
}

#[no_mangle]
pub extern "C" fn sf_graph_min_degree(g: *const SfGraph) -> usize {
    unsafe { g.as_ref() }.map_or(0, |g| g.0.min_degree())
}

/// Random graph with minimum degree at least `d`. Returns null on bad
/// parameters.
#[no_mangle]
pub extern "C" fn sf_graph_random_min_degree(n: usize, d: usize, seed: u64) -> *mut SfGraph {
    match construct::random_min_degree_graph(n, d, seed) {
        Ok(g) => Box::into_raw(Box::new(SfGraph(g))),
        Err(e) => {
            set_error(&e.to_string());
            ptr::null_mut()
        }
    }
}

/// Random simple `d`-regular graph (`n*d` even). Returns null on bad
/// parameters.
#[no_mangle]
pub extern "C" fn sf_graph_random_regular(n: usize, d: usize, seed: u64) -> *mut SfGraph {
    match construct::random_regular_graph(n, d, seed) {
        Ok(g) => Box::into_raw(Box::new(SfGraph(g))),
        Err(e) => {
            set_error(&e.to_string());
            ptr::null_mut()
        }
    }
}

/// The three-layer extremal instance on `n(1+ceil(sqrt(d)))+d` vertices.
#[no_mangle]
pub extern "C" fn sf_graph_lower_bound(d: usize, n: usize, seed: u64) -> *mut SfGraph {
    match construct::lower_bound_graph(d, n, seed) {
        Ok(g) => Box::into_raw(Box::new(SfGraph(g))),
        Err(e) => {
            set_error(&e.to_string());
            ptr::null_mut()
        }
    }
}

/// Smallest `n` at which the extremal family certifies its star-size
/// ceiling.
#[no_mangle]
pub extern "C" fn sf_lower_bound_threshold(d: usize) -> usize {
    construct::lower_bound_threshold(d)
}

fn solver_config(seed: u64, faithful: bool) -> SolverConfig {
    let mode = if faithful {
        Mode::Faithful
    } else {
        Mode::BestEffort
    };
    SolverConfig::default().with_seed(seed).with_mode(mode)
}

fn run_solver(
    g: *const SfGraph,
    d: usize,
    seed: u64,
    faithful: bool,
    regular: bool,
    out_packing: *mut *mut SfPacking,
    out_report_json: *mut *mut c_char,
) -> SfStatus {
    let Some(g) = (unsafe { g.as_ref() }) else {
        set_error("null graph");
        return SfStatus::SfNullPointer;
    };
    if out_packing.is_null() {
        set_error("null packing out-parameter");
        return SfStatus::SfNullPointer;
    }
    let cfg = solver_config(seed, faithful);
    let result = if regular {
        solve_regular(&g.0, d, &cfg)
    } else {
        solve(&g.0, d, &cfg)
    };
    match result {
        Ok((packing, report)) => {
            unsafe {
                *out_packing = Box::into_raw(Box::new(SfPacking(packing)));
                if !out_report_json.is_null() {
                    let json = serde_json::to_string(&report).unwrap_or_default();
                    *out_report_json = CString::new(json).unwrap_or_default().into_raw();
                }
            }
            SfStatus::SfOk
        }
        Err(e) => fail(&e),
    }
}

/// Computes a star factor of a graph with minimum degree at least `d`.
/// On success `*out_packing` owns the factor and, when `out_report_json` is
/// non-null, `*out_report_json` owns a JSON report string.
#[no_mangle]
pub extern "C" fn sf_solve(
    g: *const SfGraph,
    d: usize,
    seed: u64,
    faithful: bool,
    out_packing: *mut *mut SfPacking,
    out_report_json: *mut *mut c_char,
) -> SfStatus {
    run_solver(g, d, seed, faithful, false, out_packing, out_report_json)
}

/// Star factor of a `d`-regular graph through the warm-up pipeline.
#[no_mangle]
pub extern "C" fn sf_solve_regular(
    g: *const SfGraph,
    d: usize,
    seed: u64,
    faithful: bool,
    out_packing: *mut *mut SfPacking,
    out_report_json: *mut *mut c_char,
) -> SfStatus {
    run_solver(g, d, seed, faithful, true, out_packing, out_report_json)
}

#[no_mangle]
pub extern "C" fn sf_packing_free(p: *mut SfPacking) {
    if !p.is_null() {
        unsafe {
            drop(Box::from_raw(p));
        }
    }
}

#[no_mangle]
pub extern "C" fn sf_packing_star_count(p: *const SfPacking) -> usize {
    unsafe { p.as_ref() }.map_or(0, |p| p.0.star_count())
}

/// True minimum star size; 0 for an empty packing or null handle.
#[no_mangle]
pub extern "C" fn sf_packing_min_star_size(p: *const SfPacking) -> usize {
    unsafe { p.as_ref() }
        .and_then(|p| p.0.min_star_size())
        .unwrap_or(0)
}

#[no_mangle]
pub extern "C" fn sf_packing_star_center(p: *const SfPacking, star: usize) -> usize {
    unsafe { p.as_ref() }
        .and_then(|p| p.0.stars().get(star))
        .map_or(usize::MAX, |s| s.center)
}

#[no_mangle]
pub extern "C" fn sf_packing_star_size(p: *const SfPacking, star: usize) -> usize {
    unsafe { p.as_ref() }
        .and_then(|p| p.0.stars().get(star))
        .map_or(0, |s| s.size())
}

/// Copies the leaves of one star into `buf` (capacity `cap`); returns the
/// number of leaves written.
#[no_mangle]
pub extern "C" fn sf_packing_star_leaves(
    p: *const SfPacking,
    star: usize,
    buf: *mut usize,
    cap: usize,
) -> usize {
    let Some(star) = (unsafe { p.as_ref() }).and_then(|p| p.0.stars().get(star)) else {
        return 0;
    };
    if buf.is_null() {
        return 0;
    }
    let out = unsafe { std::slice::from_raw_parts_mut(buf, cap) };
    let mut written = 0;
    for leaf in star.leaves.iter().take(cap) {
        out[written] = leaf;
        written += 1;
    }
    written
}

#[no_mangle]
pub extern "C" fn sf_packing_read_file(path: *const c_char) -> *mut SfPacking {
    let path = match unsafe { path_arg(path) } {
        Ok(p) => p,
        Err(_) => return ptr::null_mut(),
    };
    match io::read_packing(path) {
        Ok(p) => Box::into_raw(Box::new(SfPacking(p))),
        Err(e) => {
            set_error(&e.to_string());
            ptr::null_mut()
        }
    }
}

#[no_mangle]
pub extern "C" fn sf_packing_write_file(p: *const SfPacking, path: *const c_char) -> SfStatus {
    let Some(p) = (unsafe { p.as_ref() }) else {
        set_error("null packing");
        return SfStatus::SfNullPointer;
    };
    let path = match unsafe { path_arg(path) } {
        Ok(p) => p,
        Err(code) => return code,
    };
    match io::write_packing(path, &p.0) {
        Ok(()) => SfStatus::SfOk,
        Err(e) => fail(&e),
    }
}

/// Verifies `p` against `g` at minimum star size `ell`. `cover_all` demands
/// that every vertex is covered (an `S_ell`-factor). Returns `SfOk` when
/// valid, `SfInvalid` with the violation list in [`sf_last_error`] otherwise.
#[no_mangle]
pub extern "C" fn sf_verify(
    g: *const SfGraph,
    p: *const SfPacking,
    ell: usize,
    cover_all: bool,
) -> SfStatus {
    let (Some(g), Some(p)) = (unsafe { g.as_ref() }, unsafe { p.as_ref() }) else {
        set_error("null graph or packing");
        return SfStatus::SfNullPointer;
    };
    let cover = if cover_all {
        VertexSet::full(g.0.vertex_count())
    } else {
        VertexSet::new()
    };
    let report = verify(&g.0, &p.0, ell, &cover);
    if report.is_valid() {
        SfStatus::SfOk
    } else {
        let msgs: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
        set_error(&msgs.join("\n"));
        SfStatus::SfInvalid
    }
}

/// Exact maximum `ell` admitting a star factor, for graphs of at most
/// `limit` vertices. `*out_isolated` is set when an isolated vertex makes
/// every factor impossible.
#[no_mangle]
pub extern "C" fn sf_oracle_max_factor_size(
    g: *const SfGraph,
    limit: usize,
    out_ell: *mut usize,
    out_isolated: *mut bool,
) -> SfStatus {
    let Some(g) = (unsafe { g.as_ref() }) else {
        set_error("null graph");
        return SfStatus::SfNullPointer;
    };
    if out_ell.is_null() {
        set_error("null out_ell");
        return SfStatus::SfNullPointer;
    }
    match oracle::max_factor_size(&g.0, limit) {
        Ok(result) => {
            unsafe {
                *out_ell = result.ell;
                if !out_isolated.is_null() {
                    *out_isolated = result.isolated_vertex;
                }
            }
            SfStatus::SfOk
        }
        Err(e) => fail(&e),
    }
}
