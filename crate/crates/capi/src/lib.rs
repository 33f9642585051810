//! C ABI for the skein computation engine.
//!
//! Conventions, mirrored in the generated `include/skein.h`:
//!
//! * Every fallible call returns a [`SkeinStatus`]; `SKEIN_STATUS_OK` is zero.
//!   Output parameters are written only on success.
//! * Strings handed back through `char **` are heap-allocated copies owned by
//!   the caller; release them with [`skein_string_free`].
//! * Handles (`SkeinDiagram`, `SkeinEvaluator`, `SkeinModuli`) are opaque;
//!   release them with the matching `*_free` function.  Passing `NULL` to a
//!   `*_free` function is a no-op.
//! * A description of the most recent failure on the current thread is
//!   available from [`skein_last_error_message`].
//! * Panics never cross the boundary: they are caught and reported as
//!   `SKEIN_STATUS_INTERNAL`, and the touched handle should then be freed.
//!
//! Handles are not synchronized; do not share one handle between threads
//! without external locking.  Distinct handles are independent.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use skein_core::curvecount::{moduli_from_json, wall_event_from_json, ModuliSet};
use skein_core::diagram::{parse_diagram, FramedDiagram};
use skein_core::index::{
    dbar_index, dbar_index_numeric, formal_dim_closed, formal_dim_open, BoundaryType, DimInput,
    IndexError, NumericParams, WeightPair,
};
use skein_core::skein::{evaluate_s3, Evaluator};

/// Status code returned by every fallible function in this interface.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkeinStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was null.
    NullArg = 1,
    /// The input text could not be parsed.
    Parse = 2,
    /// The computation rejected a structurally valid input, or could not
    /// certify its answer.
    Invariant = 3,
    /// A numeric argument was out of range (for example a weight on a wall).
    BadParameter = 4,
    /// An unexpected internal failure; free the handles involved.
    Internal = 5,
}

/// A parsed framed link diagram.
pub struct SkeinDiagram(FramedDiagram);

/// A skein evaluator that memoizes across calls; reuse one handle when
/// evaluating many related diagrams.
pub struct SkeinEvaluator(Evaluator);

/// A set of curve records over a fixed brane list.
pub struct SkeinModuli(ModuliSet);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn fail(status: SkeinStatus, message: impl Into<String>) -> SkeinStatus {
    let text = CString::new(message.into())
        .unwrap_or_else(|_| CString::new("error text contained a NUL byte").unwrap());
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
    status
}

/// Runs a closure, converting any panic into `SKEIN_STATUS_INTERNAL`.
fn guarded(f: impl FnOnce() -> SkeinStatus) -> SkeinStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(SkeinStatus::Internal, "internal panic"),
    }
}

/// # Safety
/// `text` must be null or a valid NUL-terminated string.
unsafe fn text_in<'a>(text: *const c_char) -> Result<&'a str, SkeinStatus> {
    if text.is_null() {
        return Err(fail(SkeinStatus::NullArg, "text argument is null"));
    }
    CStr::from_ptr(text)
        .to_str()
        .map_err(|_| fail(SkeinStatus::Parse, "text argument is not valid UTF-8"))
}

/// # Safety
/// `out` must be a valid location for a `char *`.
unsafe fn text_out(rendered: String, out: *mut *mut c_char) -> SkeinStatus {
    match CString::new(rendered) {
        Ok(text) => {
            *out = text.into_raw();
            SkeinStatus::Ok
        }
        Err(_) => fail(SkeinStatus::Internal, "rendered text contained a NUL byte"),
    }
}

fn index_status(e: &IndexError) -> SkeinStatus {
    match e {
        IndexError::OnWall(_) | IndexError::BadParameter(_) => SkeinStatus::BadParameter,
        IndexError::Inconclusive { .. } => SkeinStatus::Invariant,
    }
}

/// Returns the library version as a static string; do not free it.
#[no_mangle]
pub extern "C" fn skein_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Returns a copy of the most recent error message on this thread, or null
/// if no call has failed yet.  Free the copy with [`skein_string_free`].
#[no_mangle]
pub extern "C" fn skein_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| match &*e.borrow() {
        Some(text) => text.clone().into_raw(),
        None => std::ptr::null_mut(),
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `text` must be null or a pointer previously returned through a `char **`
/// output of this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn skein_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}

/// Parses a braid-closure (`BR[n, [i, ...]]`) or planar-diagram (`PD[...]`)
/// description into a diagram handle.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid location
/// for a pointer.
#[no_mangle]
pub unsafe extern "C" fn skein_diagram_parse(
    text: *const c_char,
    out: *mut *mut SkeinDiagram,
) -> SkeinStatus {
    guarded(|| {
        if out.is_null() {
            return fail(SkeinStatus::NullArg, "output argument is null");
        }
        let text = match text_in(text) {
            Ok(t) => t,
            Err(status) => return status,
        };
        match parse_diagram(text) {
            Ok(d) => {
                *out = Box::into_raw(Box::new(SkeinDiagram(d)));
                SkeinStatus::Ok
            }
            Err(e) => fail(SkeinStatus::Parse, e.to_string()),
        }
    })
}

/// Releases a diagram handle.
///
/// # Safety
/// `diagram` must be null or an unfreed handle from [`skein_diagram_parse`].
#[no_mangle]
pub unsafe extern "C" fn skein_diagram_free(diagram: *mut SkeinDiagram) {
    if !diagram.is_null() {
        drop(Box::from_raw(diagram));
    }
}

/// Writes the number of link components of the diagram.
///
/// # Safety
/// `diagram` must be a live handle and `out` a valid location for a `size_t`.
#[no_mangle]
pub unsafe extern "C" fn skein_diagram_components(
    diagram: *const SkeinDiagram,
    out: *mut usize,
) -> SkeinStatus {
    guarded(|| {
        if diagram.is_null() || out.is_null() {
            return fail(SkeinStatus::NullArg, "argument is null");
        }
        *out = (*diagram).0.components().len();
        SkeinStatus::Ok
    })
}

/// Writes the number of crossings of the diagram.
///
/// # Safety
/// `diagram` must be a live handle and `out` a valid location for a `size_t`.
#[no_mangle]
pub unsafe extern "C" fn skein_diagram_crossings(
    diagram: *const SkeinDiagram,
    out: *mut usize,
) -> SkeinStatus {
    guarded(|| {
        if diagram.is_null() || out.is_null() {
            return fail(SkeinStatus::NullArg, "argument is null");
        }
        *out = (*diagram).0.crossing_count();
        SkeinStatus::Ok
    })
}

/// Writes the writhe (signed crossing sum) of the diagram.
///
/// # Safety
/// `diagram` must be a live handle and `out` a valid location for an
/// `int64_t`.
#[no_mangle]
pub unsafe extern "C" fn skein_diagram_writhe(
    diagram: *const SkeinDiagram,
    out: *mut i64,
) -> SkeinStatus {
    guarded(|| {
        if diagram.is_null() || out.is_null() {
            return fail(SkeinStatus::NullArg, "argument is null");
        }
        *out = (*diagram).0.writhe();
        SkeinStatus::Ok
    })
}

/// Parses a diagram and writes its framed skein invariant as a Laurent
/// polynomial in `a` and `z`, for example `"a*z^-1 - a^-1*z^-1"`.
///
/// One-shot convenience around [`skein_diagram_parse`] and
/// [`skein_evaluator_homfly`]; no state is retained.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid location
/// for a `char *`.
#[no_mangle]
pub unsafe extern "C" fn skein_homfly(text: *const c_char, out: *mut *mut c_char) -> SkeinStatus {
    guarded(|| {
        if out.is_null() {
            return fail(SkeinStatus::NullArg, "output argument is null");
        }
        let text = match text_in(text) {
            Ok(t) => t,
            Err(status) => return status,
        };
        let diagram = match parse_diagram(text) {
            Ok(d) => d,
            Err(e) => return fail(SkeinStatus::Parse, e.to_string()),
        };
        match evaluate_s3(&diagram) {
            Ok(v) => text_out(v.to_string(), out),
            Err(e) => fail(SkeinStatus::Invariant, e.to_string()),
        }
    })
}

/// Creates a memoizing evaluator.
///
/// # Safety
/// `out` must be a valid location for a pointer.
#[no_mangle]
pub unsafe extern "C" fn skein_evaluator_new(out: *mut *mut SkeinEvaluator) -> SkeinStatus {
    guarded(|| {
        if out.is_null() {
            return fail(SkeinStatus::NullArg, "output argument is null");
        }
        *out = Box::into_raw(Box::new(SkeinEvaluator(Evaluator::new())));
        SkeinStatus::Ok
    })
}

/// Releases an evaluator handle.
///
/// # Safety
/// `evaluator` must be null or an unfreed handle from
/// [`skein_evaluator_new`].
#[no_mangle]
pub unsafe extern "C" fn skein_evaluator_free(evaluator: *mut SkeinEvaluator) {
    if !evaluator.is_null() {
        drop(Box::from_raw(evaluator));
    }
}

/// Writes the framed skein invariant of `diagram`, reusing everything the
/// evaluator has already resolved.
///
/// # Safety
/// `evaluator` and `diagram` must be live handles and `out` a valid location
/// for a `char *`.
#[no_mangle]
pub unsafe extern "C" fn skein_evaluator_homfly(
    evaluator: *mut SkeinEvaluator,
    diagram: *const SkeinDiagram,
    out: *mut *mut c_char,
) -> SkeinStatus {
    guarded(|| {
        if evaluator.is_null() || diagram.is_null() || out.is_null() {
            return fail(SkeinStatus::NullArg, "argument is null");
        }
        match (*evaluator).0.evaluate(&(*diagram).0) {
            Ok(v) => text_out(v.to_string(), out),
            Err(e) => fail(SkeinStatus::Invariant, e.to_string()),
        }
    })
}

/// Parses a JSON moduli description (branes, truncation, curve records) into
/// a handle.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid location
/// for a pointer.
#[no_mangle]
pub unsafe extern "C" fn skein_moduli_parse_json(
    text: *const c_char,
    out: *mut *mut SkeinModuli,
) -> SkeinStatus {
    guarded(|| {
        if out.is_null() {
            return fail(SkeinStatus::NullArg, "output argument is null");
        }
        let text = match text_in(text) {
            Ok(t) => t,
            Err(status) => return status,
        };
        match moduli_from_json(text) {
            Ok(m) => {
                *out = Box::into_raw(Box::new(SkeinModuli(m)));
                SkeinStatus::Ok
            }
            Err(e) => fail(SkeinStatus::Parse, e.to_string()),
        }
    })
}

/// Releases a moduli handle.
///
/// # Safety
/// `moduli` must be null or an unfreed handle from
/// [`skein_moduli_parse_json`].
#[no_mangle]
pub unsafe extern "C" fn skein_moduli_free(moduli: *mut SkeinModuli) {
    if !moduli.is_null() {
        drop(Box::from_raw(moduli));
    }
}

/// Writes the partition function of the moduli set as a truncated series in
/// the class variables, with boundary factors kept symbolic.
///
/// # Safety
/// `moduli` must be a live handle and `out` a valid location for a `char *`.
#[no_mangle]
pub unsafe extern "C" fn skein_moduli_partition(
    moduli: *const SkeinModuli,
    out: *mut *mut c_char,
) -> SkeinStatus {
    guarded(|| {
        if moduli.is_null() || out.is_null() {
            return fail(SkeinStatus::NullArg, "argument is null");
        }
        match (*moduli).0.partition_function() {
            Ok(series) => text_out(series.to_string(), out),
            Err(e) => fail(SkeinStatus::Invariant, e.to_string()),
        }
    })
}

/// Writes the total assembled invariant with every S3 boundary factor
/// replaced by its skein value.
///
/// # Safety
/// `moduli` must be a live handle and `out` a valid location for a `char *`.
#[no_mangle]
pub unsafe extern "C" fn skein_moduli_collapse_s3(
    moduli: *const SkeinModuli,
    out: *mut *mut c_char,
) -> SkeinStatus {
    guarded(|| {
        if moduli.is_null() || out.is_null() {
            return fail(SkeinStatus::NullArg, "argument is null");
        }
        let total = match (*moduli).0.assemble_total() {
            Ok(t) => t,
            Err(e) => return fail(SkeinStatus::Invariant, e.to_string()),
        };
        match total.collapse_s3_factor() {
            Ok(v) => text_out(v.to_string(), out),
            Err(e) => fail(SkeinStatus::Invariant, e.to_string()),
        }
    })
}

/// Applies one wall move, described as JSON, to the moduli set in place.
/// The collapsed invariant is unchanged by a valid move.
///
/// # Safety
/// `moduli` must be a live handle and `event_json` a valid NUL-terminated
/// string.
#[no_mangle]
pub unsafe extern "C" fn skein_moduli_apply_wall_event(
    moduli: *mut SkeinModuli,
    event_json: *const c_char,
) -> SkeinStatus {
    guarded(|| {
        if moduli.is_null() {
            return fail(SkeinStatus::NullArg, "moduli argument is null");
        }
        let text = match text_in(event_json) {
            Ok(t) => t,
            Err(status) => return status,
        };
        let event = match wall_event_from_json(text) {
            Ok(e) => e,
            Err(e) => return fail(SkeinStatus::Parse, e.to_string()),
        };
        match (*moduli).0.apply_wall_event(&event) {
            Ok(next) => {
                (*moduli).0 = next;
                SkeinStatus::Ok
            }
            Err(e) => fail(SkeinStatus::Invariant, e.to_string()),
        }
    })
}

/// Formal dimension of a closed-curve problem in a space of complex
/// dimension `ambient_dim`: `(ambient_dim - 3) * euler + 2 * chern_pairing`.
#[no_mangle]
pub extern "C" fn skein_formal_dim_closed(ambient_dim: i64, euler: i64, chern_pairing: i64) -> i64 {
    formal_dim_closed(&DimInput {
        ambient_dim,
        euler,
        chern_pairing,
        maslov: 0,
    })
}

/// Formal dimension of a bordered-curve problem in a space of complex
/// dimension `ambient_dim`: `(ambient_dim - 3) * euler + maslov`.
#[no_mangle]
pub extern "C" fn skein_formal_dim_open(ambient_dim: i64, euler: i64, maslov: i64) -> i64 {
    formal_dim_open(&DimInput {
        ambient_dim,
        euler,
        chern_pairing: 0,
        maslov,
    })
}

fn boundary_of(strip: bool) -> BoundaryType {
    if strip {
        BoundaryType::Strip
    } else {
        BoundaryType::Cylinder
    }
}

/// Writes the index of the weighted dbar operator on the cylinder
/// (`strip == false`) or strip (`strip == true`) with exponential weights
/// `delta_minus`, `delta_plus` at the ends.  Weights within 1e-9 of a wall
/// `2*pi*k` are rejected with `SKEIN_STATUS_BAD_PARAMETER`.
///
/// # Safety
/// `out` must be a valid location for an `int64_t`.
#[no_mangle]
pub unsafe extern "C" fn skein_dbar_index(
    delta_minus: f64,
    delta_plus: f64,
    strip: bool,
    out: *mut i64,
) -> SkeinStatus {
    guarded(|| {
        if out.is_null() {
            return fail(SkeinStatus::NullArg, "output argument is null");
        }
        let pair = match WeightPair::new(delta_minus, delta_plus, boundary_of(strip)) {
            Ok(p) => p,
            Err(e) => return fail(index_status(&e), e.to_string()),
        };
        match dbar_index(&pair) {
            Ok(v) => {
                *out = v;
                SkeinStatus::Ok
            }
            Err(e) => fail(index_status(&e), e.to_string()),
        }
    })
}

/// Writes the dbar index computed from a finite-difference spectral
/// discretization rather than the counting formula.  Pass `modes <= 0`,
/// `length <= 0`, or `grid == 0` to use the defaults (automatic mode range,
/// length 10, 2000 grid cells).  Returns `SKEIN_STATUS_INVARIANT` when the
/// discretization cannot certify a mode, and `SKEIN_STATUS_BAD_PARAMETER`
/// for weights on a wall or an inadequate grid.
///
/// # Safety
/// `out` must be a valid location for an `int64_t`.
#[no_mangle]
pub unsafe extern "C" fn skein_dbar_index_numeric(
    delta_minus: f64,
    delta_plus: f64,
    strip: bool,
    modes: i64,
    length: f64,
    grid: usize,
    out: *mut i64,
) -> SkeinStatus {
    guarded(|| {
        if out.is_null() {
            return fail(SkeinStatus::NullArg, "output argument is null");
        }
        let pair = match WeightPair::new(delta_minus, delta_plus, boundary_of(strip)) {
            Ok(p) => p,
            Err(e) => return fail(index_status(&e), e.to_string()),
        };
        let defaults = NumericParams::default();
        let params = NumericParams {
            modes: if modes > 0 { Some(modes) } else { None },
            length: if length > 0.0 {
                length
            } else {
                defaults.length
            },
            grid: if grid > 0 { grid } else { defaults.grid },
        };
        match dbar_index_numeric(&pair, &params) {
            Ok(v) => {
                *out = v;
                SkeinStatus::Ok
            }
            Err(e) => fail(index_status(&e), e.to_string()),
        }
    })
}
