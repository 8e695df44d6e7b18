//! C ABI for `topodsp`.
//!
//! Objects are opaque handles returned through an out-pointer and released
//! with the matching `td_*_free`. Every fallible call returns a
//! [`TdStatus`]; on failure a description is available from
//! [`td_last_error_message`] on the same thread. Panics never cross the
//! boundary and are reported as [`TdStatus::Internal`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use topodsp::acoustics::{waveguide_recurrence_period, BoundaryCondition};
use topodsp::complex::{parse_cplx, SimplicialComplex};
use topodsp::homology::{betti_all, DemoComplex};
use topodsp::persistence::{alive_at, persistence_pairs, vietoris_rips, Barcode, PointCloud};
use topodsp::sheaf_filter::{fm_filter, lti_filter, TopologicalFilter};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    OutOfRange = 4,
    BufferTooSmall = 5,
    Internal = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TdBoundary {
    /// Fixed end, reflection -1.
    Dirichlet = 0,
    /// Free end, reflection +1.
    Neumann = 1,
}

/// One persistence interval. `death` is `INFINITY` for bars that never die.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TdBar {
    pub dim: usize,
    pub birth: f64,
    pub death: f64,
}

/// A face-closed simplicial complex.
pub struct TdComplex(SimplicialComplex);

/// A persistence barcode.
pub struct TdBarcode(Barcode);

/// A topological filter together with its running edge state.
pub struct TdFilter {
    filter: TopologicalFilter,
    state: Vec<f64>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = s);
}

fn fail(status: TdStatus, msg: impl Into<String>) -> TdStatus {
    set_error(msg);
    status
}

/// Runs `f`, turning a panic into [`TdStatus::Internal`].
fn guard(f: impl FnOnce() -> TdStatus) -> TdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => {
            if status == TdStatus::Ok {
                set_error("");
            }
            status
        }
        Err(_) => fail(TdStatus::Internal, "internal panic"),
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, TdStatus> {
    if s.is_null() {
        return Err(fail(TdStatus::NullPointer, "string argument is null"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(TdStatus::InvalidArgument, "string is not UTF-8"))
}

unsafe fn read_slice<'a>(p: *const f64, len: usize) -> Result<&'a [f64], TdStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(fail(TdStatus::NullPointer, "array argument is null"));
    }
    Ok(slice::from_raw_parts(p, len))
}

/// Message for the last failed call on this thread, or an empty string.
/// The pointer stays valid until the next `td_*` call on the same thread.
#[no_mangle]
pub extern "C" fn td_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses `.cplx` text (one simplex per line, space-separated labels).
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn td_complex_parse(text: *const c_char, out: *mut *mut TdComplex) -> TdStatus {
    guard(|| {
        if out.is_null() {
            return fail(TdStatus::NullPointer, "out is null");
        }
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_cplx(text) {
            Ok(c) => {
                *out = Box::into_raw(Box::new(TdComplex(c)));
                TdStatus::Ok
            }
            Err(e) => fail(TdStatus::Parse, e.to_string()),
        }
    })
}

/// Built-in complex by name: triangle, triangle-filled, tetra, tetra-hollow, torus, sphere.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn td_complex_demo(name: *const c_char, out: *mut *mut TdComplex) -> TdStatus {
    guard(|| {
        if out.is_null() {
            return fail(TdStatus::NullPointer, "out is null");
        }
        let name = match read_str(name) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match name.parse::<DemoComplex>() {
            Ok(d) => {
                *out = Box::into_raw(Box::new(TdComplex(d.build())));
                TdStatus::Ok
            }
            Err(e) => fail(TdStatus::InvalidArgument, e),
        }
    })
}

/// Writes Betti numbers `b_0..` into `betti`. `*len` receives the number
/// of dimensions; if it exceeds `capacity`, nothing is written and
/// `BufferTooSmall` is returned.
///
/// # Safety
/// `complex` must come from a `td_complex_*` constructor, `betti` must hold
/// `capacity` values and `len` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn td_complex_betti(
    complex: *const TdComplex,
    betti: *mut usize,
    capacity: usize,
    len: *mut usize,
) -> TdStatus {
    guard(|| {
        if complex.is_null() || len.is_null() {
            return fail(TdStatus::NullPointer, "complex or len is null");
        }
        let b = betti_all(&(*complex).0);
        let values = b.as_slice();
        *len = values.len();
        if values.len() > capacity {
            return fail(TdStatus::BufferTooSmall, format!("need room for {} values", values.len()));
        }
        if betti.is_null() {
            return fail(TdStatus::NullPointer, "betti is null");
        }
        ptr::copy_nonoverlapping(values.as_ptr(), betti, values.len());
        TdStatus::Ok
    })
}

/// # Safety
/// `complex` must be null or come from a `td_complex_*` constructor, and is
/// not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn td_complex_free(complex: *mut TdComplex) {
    if !complex.is_null() {
        drop(Box::from_raw(complex));
    }
}

/// Vietoris-Rips barcode of `n_points` points of dimension `dim`, stored
/// row-major in `coords`. Simplices up to `max_dim` and pairwise distance
/// `max_scale` are built; bars are reported below `max_dim`.
///
/// # Safety
/// `coords` must hold `n_points * dim` values and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn td_persistence(
    coords: *const f64,
    n_points: usize,
    dim: usize,
    max_dim: usize,
    max_scale: f64,
    out: *mut *mut TdBarcode,
) -> TdStatus {
    guard(|| {
        if out.is_null() {
            return fail(TdStatus::NullPointer, "out is null");
        }
        let Some(total) = n_points.checked_mul(dim) else {
            return fail(TdStatus::InvalidArgument, "point array too large");
        };
        let coords = match read_slice(coords, total) {
            Ok(c) => c,
            Err(s) => return s,
        };
        let result = PointCloud::from_flat(dim, coords.to_vec())
            .and_then(|pc| vietoris_rips(&pc, max_dim, max_scale))
            .and_then(|f| persistence_pairs(&f));
        match result {
            Ok(b) => {
                *out = Box::into_raw(Box::new(TdBarcode(b)));
                TdStatus::Ok
            }
            Err(e) => fail(TdStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Number of bars, 0 for a null handle.
///
/// # Safety
/// `barcode` must be null or come from [`td_persistence`].
#[no_mangle]
pub unsafe extern "C" fn td_barcode_len(barcode: *const TdBarcode) -> usize {
    if barcode.is_null() {
        0
    } else {
        (*barcode).0.bars().len()
    }
}

/// Bar `index`, in (dim, birth, death) order.
///
/// # Safety
/// `barcode` must come from [`td_persistence`] and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn td_barcode_get(barcode: *const TdBarcode, index: usize, out: *mut TdBar) -> TdStatus {
    guard(|| {
        if barcode.is_null() || out.is_null() {
            return fail(TdStatus::NullPointer, "barcode or out is null");
        }
        match (*barcode).0.bars().get(index) {
            Some(b) => {
                *out = TdBar { dim: b.dim, birth: b.birth, death: b.death };
                TdStatus::Ok
            }
            None => fail(TdStatus::OutOfRange, format!("bar {index} does not exist")),
        }
    })
}

/// Number of dimension-`dim` bars alive at scale `t`.
///
/// # Safety
/// `barcode` must come from [`td_persistence`] and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn td_barcode_alive_at(
    barcode: *const TdBarcode,
    dim: usize,
    t: f64,
    out: *mut usize,
) -> TdStatus {
    guard(|| {
        if barcode.is_null() || out.is_null() {
            return fail(TdStatus::NullPointer, "barcode or out is null");
        }
        *out = alive_at(&(*barcode).0, dim, t);
        TdStatus::Ok
    })
}

/// # Safety
/// `barcode` must be null or come from [`td_persistence`], and is not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn td_barcode_free(barcode: *mut TdBarcode) {
    if !barcode.is_null() {
        drop(Box::from_raw(barcode));
    }
}

fn new_filter(result: Result<TopologicalFilter, impl ToString>, out: *mut *mut TdFilter) -> TdStatus {
    match result {
        Ok(filter) => {
            let state = filter.zero_state();
            // SAFETY: callers check `out` before building the filter.
            unsafe { *out = Box::into_raw(Box::new(TdFilter { filter, state })) };
            TdStatus::Ok
        }
        Err(e) => fail(TdStatus::InvalidArgument, e.to_string()),
    }
}

/// Direct-form-II filter with feedback `a[0..n_a]` (a_1..a_N) and feedforward
/// `b[0..n_b]` (b_0..b_N, so `n_b = n_a + 1`). The state starts at zero.
///
/// # Safety
/// `a` and `b` must hold `n_a` and `n_b` values; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn td_filter_lti(
    a: *const f64,
    n_a: usize,
    b: *const f64,
    n_b: usize,
    out: *mut *mut TdFilter,
) -> TdStatus {
    guard(|| {
        if out.is_null() {
            return fail(TdStatus::NullPointer, "out is null");
        }
        let (a, b) = match (read_slice(a, n_a), read_slice(b, n_b)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        new_filter(lti_filter(a, b), out)
    })
}

/// FM voice: carrier increment `omega` and modulator increment `mod_omega`
/// in turns per sample, modulation index `index`, output phase in radians.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn td_filter_fm(
    omega: f64,
    index: f64,
    mod_omega: f64,
    phase: f64,
    out: *mut *mut TdFilter,
) -> TdStatus {
    guard(|| {
        if out.is_null() {
            return fail(TdStatus::NullPointer, "out is null");
        }
        new_filter(fm_filter(omega, index, mod_omega, phase), out)
    })
}

/// Filters `len` samples from `input` into `output`, continuing from the
/// state left by the previous call.
///
/// # Safety
/// `filter` must come from a `td_filter_*` constructor; `input` and `output`
/// must each hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn td_filter_process(
    filter: *mut TdFilter,
    input: *const f64,
    output: *mut f64,
    len: usize,
) -> TdStatus {
    guard(|| {
        if filter.is_null() || (len > 0 && output.is_null()) {
            return fail(TdStatus::NullPointer, "filter or output is null");
        }
        let input = match read_slice(input, len) {
            Ok(x) => x,
            Err(s) => return s,
        };
        if input.iter().any(|v| !v.is_finite()) {
            return fail(TdStatus::InvalidArgument, "input samples must be finite");
        }
        let f = &mut *filter;
        match f.filter.process_from(input, &mut f.state) {
            Ok(y) => {
                ptr::copy_nonoverlapping(y.as_ptr(), output, len);
                TdStatus::Ok
            }
            Err(e) => fail(TdStatus::Internal, e.to_string()),
        }
    })
}

/// Returns the filter to its zero state.
///
/// # Safety
/// `filter` must come from a `td_filter_*` constructor.
#[no_mangle]
pub unsafe extern "C" fn td_filter_reset(filter: *mut TdFilter) -> TdStatus {
    guard(|| {
        if filter.is_null() {
            return fail(TdStatus::NullPointer, "filter is null");
        }
        let f = &mut *filter;
        f.state = f.filter.zero_state();
        TdStatus::Ok
    })
}

/// # Safety
/// `filter` must be null or come from a `td_filter_*` constructor, and is not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn td_filter_free(filter: *mut TdFilter) {
    if !filter.is_null() {
        drop(Box::from_raw(filter));
    }
}

fn boundary(code: u32) -> Option<BoundaryCondition> {
    match code {
        c if c == TdBoundary::Dirichlet as u32 => Some(BoundaryCondition::Dirichlet),
        c if c == TdBoundary::Neumann as u32 => Some(BoundaryCondition::Neumann),
        _ => None,
    }
}

/// Exact recurrence period of a unit impulse on a two-rail waveguide of
/// `len` cells per rail. `left` and `right` are [`TdBoundary`] values.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn td_waveguide_period(len: usize, left: u32, right: u32, out: *mut usize) -> TdStatus {
    guard(|| {
        if out.is_null() {
            return fail(TdStatus::NullPointer, "out is null");
        }
        let (Some(l), Some(r)) = (boundary(left), boundary(right)) else {
            return fail(TdStatus::InvalidArgument, "boundary must be TD_BOUNDARY_DIRICHLET or TD_BOUNDARY_NEUMANN");
        };
        match waveguide_recurrence_period(len, l, r) {
            Ok(p) => {
                *out = p;
                TdStatus::Ok
            }
            Err(e) => fail(TdStatus::InvalidArgument, e.to_string()),
        }
    })
}
