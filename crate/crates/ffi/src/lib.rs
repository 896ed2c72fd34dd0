//! C ABI over `capforge`.
//!
//! Objects are opaque handles released with their `*_free` function. Fallible
//! calls return a [`CfStatus`] and write results through out-pointers; on
//! failure `cf_last_error()` describes the error for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;
use std::time::Duration;

use capforge::analysis::{first_moment_log_bound, BoundVariant};
use capforge::constructions::{
    explicit_power_set_size, sample_jump_graph, sample_simple_jump_graph, ConstructedGraph,
    JumpParams,
};
use capforge::graph::{self, is_independent_tuples, power_view, strong_power};
use capforge::solver::{max_independent_set, MisResult, MisStatus, SolverBudget};
use capforge::{Error, Graph, MaterializationCap, TupleVertex};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OutOfRange = 3,
    CapExceeded = 4,
    Io = 5,
    Parse = 6,
    Unsupported = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfMisStatus {
    /// The returned set is maximum.
    Exact = 0,
    /// Budget ran out or the target was reached; the set is a lower bound.
    LowerBound = 1,
    /// No set of the target size exists; see `cf_mis_result_upper`.
    UpperBoundCertified = 2,
}

/// A graph together with the construction record that produced it.
pub struct CfGraph(ConstructedGraph);

/// Outcome of an independent set search.
pub struct CfMisResult(MisResult);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> CfStatus {
    match e {
        Error::VertexOutOfRange { .. } => CfStatus::OutOfRange,
        Error::CapExceeded { .. } => CfStatus::CapExceeded,
        Error::Io { .. } => CfStatus::Io,
        Error::Parse { .. } | Error::Metadata(_) | Error::Json(_) => CfStatus::Parse,
        Error::KindMismatch { .. } | Error::TooLargeForBruteForce { .. } => CfStatus::Unsupported,
        _ => CfStatus::InvalidArgument,
    }
}

struct Fail(CfStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> CfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CfStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            CfStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(CfStatus::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn path_arg<'a>(p: *const c_char) -> Result<&'a Path, Fail> {
    if p.is_null() {
        return Err(null("path"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map(Path::new)
        .map_err(|_| Fail(CfStatus::InvalidArgument, "path is not UTF-8".into()))
}

fn cap_arg(cap: usize) -> MaterializationCap {
    if cap == 0 {
        MaterializationCap::from_env()
    } else {
        MaterializationCap(cap)
    }
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Graph on `n` vertices with `edge_count` edges given as `2 * edge_count`
/// 0-based endpoints.
///
/// # Safety
/// `edges` must point to `2 * edge_count` readable values (or be NULL when
/// `edge_count` is 0); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_graph_from_edges(
    n: usize,
    edges: *const usize,
    edge_count: usize,
    out: *mut *mut CfGraph,
) -> CfStatus {
    guard(|| {
        let flat: &[usize] = if edge_count == 0 {
            &[]
        } else if edges.is_null() {
            return Err(null("edges"));
        } else {
            let len = edge_count
                .checked_mul(2)
                .ok_or_else(|| Fail(CfStatus::InvalidArgument, "edge count overflows".into()))?;
            std::slice::from_raw_parts(edges, len)
        };
        let pairs: Vec<(usize, usize)> = flat.chunks_exact(2).map(|c| (c[0], c[1])).collect();
        let g = Graph::from_edges(n, &pairs)?;
        write(out, boxed(CfGraph(ConstructedGraph::plain(g))))
    })
}

/// Canonical jump graph on `nu * n` vertices.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_jump_graph_sample(
    nu: usize,
    n: usize,
    seed: u64,
    out: *mut *mut CfGraph,
) -> CfStatus {
    guard(|| {
        let p = JumpParams::new(nu, n, seed)?;
        write(out, boxed(CfGraph(sample_jump_graph(&p))))
    })
}

/// Row/column jump graph on `nu * n` vertices.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_simple_jump_graph_sample(
    nu: usize,
    n: usize,
    seed: u64,
    out: *mut *mut CfGraph,
) -> CfStatus {
    guard(|| {
        let p = JumpParams::new(nu, n, seed)?;
        write(out, boxed(CfGraph(sample_simple_jump_graph(&p))))
    })
}

/// # Safety
/// `g` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cf_graph_free(g: *mut CfGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Vertex count, or 0 for NULL.
///
/// # Safety
/// `g` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cf_graph_vertex_count(g: *const CfGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.graph.vertex_count())
}

/// Edge count, or 0 for NULL.
///
/// # Safety
/// `g` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cf_graph_edge_count(g: *const CfGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.graph.edge_count())
}

/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cf_graph_has_edge(
    g: *const CfGraph,
    u: usize,
    v: usize,
    out: *mut bool,
) -> CfStatus {
    guard(|| {
        let g = &deref(g, "graph")?.0.graph;
        let n = g.vertex_count();
        if u >= n || v >= n {
            return Err(Error::VertexOutOfRange {
                vertex: u.max(v),
                vertex_count: n,
            }
            .into());
        }
        write(out, g.has_edge(u, v))
    })
}

/// Materialized strong power `G^k`. A `cap` of 0 uses the default cap (or
/// `CAPFORGE_CAP`).
///
/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cf_graph_strong_power(
    g: *const CfGraph,
    k: usize,
    cap: usize,
    out: *mut *mut CfGraph,
) -> CfStatus {
    guard(|| {
        let g = &deref(g, "graph")?.0.graph;
        let p = strong_power(g, k, cap_arg(cap))?;
        write(out, boxed(CfGraph(ConstructedGraph::plain(p))))
    })
}

/// Writes the graph file and its `.meta.json` sidecar.
///
/// # Safety
/// `g` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn cf_graph_save(g: *const CfGraph, path: *const c_char) -> CfStatus {
    guard(|| {
        let g = &deref(g, "graph")?.0;
        let path = path_arg(path)?;
        graph::serialize(path, &g.graph, Some(&g.meta()))?;
        Ok(())
    })
}

/// Reads a graph file, with its sidecar when present.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cf_graph_load(path: *const c_char, out: *mut *mut CfGraph) -> CfStatus {
    guard(|| {
        let (g, meta) = graph::deserialize(path_arg(path)?)?;
        let cg = match meta {
            Some(m) => ConstructedGraph::from_meta(g, &m)?,
            None => ConstructedGraph::plain(g),
        };
        write(out, boxed(CfGraph(cg)))
    })
}

/// Size of the construction's explicit independent set in `G^k`; 0 when the
/// construction has none at this `k`.
///
/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cf_graph_certificate_size(
    g: *const CfGraph,
    k: usize,
    out: *mut u64,
) -> CfStatus {
    guard(|| {
        let g = &deref(g, "graph")?.0;
        let size = g.certificate_size(k).unwrap_or(0);
        write(out, u64::try_from(size).unwrap_or(u64::MAX))
    })
}

/// `N^floor(k / nu)` for canonical parameters `(nu, n)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_explicit_power_set_size(
    nu: usize,
    n: usize,
    k: usize,
    out: *mut u64,
) -> CfStatus {
    guard(|| {
        let p = JumpParams::new(nu, n, 0)?;
        write(
            out,
            u64::try_from(explicit_power_set_size(&p, k)).unwrap_or(u64::MAX),
        )
    })
}

/// Whether `count` tuples of length `k` (row-major in `coords`) are pairwise
/// non-adjacent in `G^k`.
///
/// # Safety
/// `g` must be a live handle, `coords` must hold `count * k` values and `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_tuples_independent(
    g: *const CfGraph,
    k: usize,
    coords: *const usize,
    count: usize,
    out: *mut bool,
) -> CfStatus {
    guard(|| {
        let g = &deref(g, "graph")?.0.graph;
        let view = power_view(g, k)?;
        let len = count
            .checked_mul(k)
            .ok_or_else(|| Fail(CfStatus::InvalidArgument, "tuple buffer overflows".into()))?;
        let flat: &[usize] = if len == 0 {
            &[]
        } else if coords.is_null() {
            return Err(null("coords"));
        } else {
            std::slice::from_raw_parts(coords, len)
        };
        let tuples: Vec<TupleVertex> = flat
            .chunks_exact(k)
            .map(|c| TupleVertex::new(c.to_vec()))
            .collect();
        write(out, is_independent_tuples(&view, &tuples)?)
    })
}

/// Maximum independent set search. Zero `max_nodes`, non-positive `max_secs`
/// and zero `target` mean "no limit".
///
/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cf_mis_solve(
    g: *const CfGraph,
    max_nodes: u64,
    max_secs: f64,
    target: usize,
    out: *mut *mut CfMisResult,
) -> CfStatus {
    guard(|| {
        let g = &deref(g, "graph")?.0.graph;
        let mut budget = SolverBudget::unlimited();
        if max_nodes > 0 {
            budget = budget.with_nodes(max_nodes);
        }
        if max_secs.is_finite() && max_secs > 0.0 {
            budget = budget.with_time(Duration::from_secs_f64(max_secs));
        }
        if target > 0 {
            budget = budget.with_target(target);
        }
        write(out, boxed(CfMisResult(max_independent_set(g, &budget))))
    })
}

/// # Safety
/// `r` must be NULL or a result not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cf_mis_result_free(r: *mut CfMisResult) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Size of the best set found, or 0 for NULL.
///
/// # Safety
/// `r` must be NULL or a live result.
#[no_mangle]
pub unsafe extern "C" fn cf_mis_result_size(r: *const CfMisResult) -> usize {
    r.as_ref().map_or(0, |r| r.0.size)
}

/// # Safety
/// `r` must be a live result and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cf_mis_result_status(
    r: *const CfMisResult,
    out: *mut CfMisStatus,
) -> CfStatus {
    guard(|| {
        let status = match deref(r, "result")?.0.status {
            MisStatus::Exact => CfMisStatus::Exact,
            MisStatus::LowerBound => CfMisStatus::LowerBound,
            MisStatus::UpperBoundCertified => CfMisStatus::UpperBoundCertified,
        };
        write(out, status)
    })
}

/// Proven upper bound on alpha; `*has_upper` is false when none was proven.
///
/// # Safety
/// `r` must be a live result; `has_upper` and `upper` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_mis_result_upper(
    r: *const CfMisResult,
    has_upper: *mut bool,
    upper: *mut usize,
) -> CfStatus {
    guard(|| {
        let u = deref(r, "result")?.0.certified_upper;
        write(has_upper, u.is_some())?;
        write(upper, u.unwrap_or(0))
    })
}

/// Copies up to `capacity` members (ascending) into `buf` and returns the
/// total member count. Pass `buf = NULL` to query the count.
///
/// # Safety
/// `r` must be NULL or a live result; `buf` must hold `capacity` values.
#[no_mangle]
pub unsafe extern "C" fn cf_mis_result_members(
    r: *const CfMisResult,
    buf: *mut usize,
    capacity: usize,
) -> usize {
    let Some(r) = r.as_ref() else { return 0 };
    let members = &r.0.members;
    if !buf.is_null() {
        let n = members.len().min(capacity);
        ptr::copy_nonoverlapping(members.as_ptr(), buf, n);
    }
    members.len()
}

/// `log10` of the union bound on `Pr[alpha(G) >= s]` for a canonical jump
/// graph on `vertex_count` vertices.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_first_moment_log10_bound(
    nu: usize,
    vertex_count: usize,
    s: usize,
    out: *mut f64,
) -> CfStatus {
    guard(|| {
        let ln = first_moment_log_bound(nu, vertex_count, s, BoundVariant::Base)?;
        write(out, ln / std::f64::consts::LN_10)
    })
}
