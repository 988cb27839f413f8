//! C ABI for the heightscout library.
//!
//! Conventions: functions return an `i32` status code (`HS_OK` on
//! success) and write results through out-pointers. Lattices live behind
//! an opaque handle; everything else crosses the boundary as JSON in the
//! same interchange formats the CLI uses, with arbitrary-precision values
//! as decimal strings. Returned strings are heap-allocated and must be
//! released with `hs_string_free`; the last error message is available
//! per thread via `hs_last_error_message`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use heightscout::avoidance::{find_point_outside, linear_forms_point, AvoidanceInstance};
use heightscout::counting::{
    count_box_image, count_length_ball, cube_count_envelope, BoxRegion, CubeRegion, RatMatrix,
};
use heightscout::error::Error;
use heightscout::interchange::{parse_bigint, parse_ratio};
use heightscout::lattice::{duality_certificate, Lattice, LinearForm};
use heightscout::plank::{minimal_cover_search, verify_cover, CoverInstance};
use heightscout::polysearch::{
    find_nonvanishing_grid, find_small_height_point, find_small_length_point, MultiPoly,
};
use num_bigint::BigInt;

pub const HS_OK: i32 = 0;
pub const HS_ERR_NULL_POINTER: i32 = 1;
pub const HS_ERR_PARSE: i32 = 2;
pub const HS_ERR_DIMENSION: i32 = 3;
pub const HS_ERR_RANK: i32 = 4;
pub const HS_ERR_DOMAIN: i32 = 5;
pub const HS_ERR_BUDGET: i32 = 6;
pub const HS_ERR_NO_RESULT: i32 = 7;
pub const HS_ERR_INTERNAL: i32 = 8;

/// Opaque lattice handle.
pub struct HsLattice(Lattice);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let cstring = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(cstring));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn code_of(err: &Error) -> i32 {
    match err {
        Error::Json(_) | Error::Io(_) | Error::Usage(_) => HS_ERR_PARSE,
        Error::Dimension(_) | Error::NotSquare { .. } | Error::UnsupportedDimension(_) => {
            HS_ERR_DIMENSION
        }
        Error::RankDeficient(_) | Error::Singular | Error::EmptyKernel => HS_ERR_RANK,
        Error::ZeroPolynomial
        | Error::DegreeZero
        | Error::NotHomogeneous
        | Error::EmptyGrid
        | Error::NonPositiveDiagonal(_)
        | Error::InvalidRegion(_)
        | Error::InvalidInstance(_)
        | Error::InvalidParameter(_) => HS_ERR_DOMAIN,
        Error::BudgetExceeded { .. } => HS_ERR_BUDGET,
        Error::NoPointWithinBound { .. } | Error::NotACover { .. } | Error::NoCover(_) => {
            HS_ERR_NO_RESULT
        }
        Error::Internal(_) => HS_ERR_INTERNAL,
    }
}

fn fail(err: &Error) -> i32 {
    set_error(&err.to_string());
    code_of(err)
}

/// Runs a fallible body with panic isolation.
fn guarded(body: impl FnOnce() -> i32) -> i32 {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(code) => code,
        Err(_) => {
            set_error("internal panic");
            HS_ERR_INTERNAL
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, i32> {
    if s.is_null() {
        set_error("null string argument");
        return Err(HS_ERR_NULL_POINTER);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        HS_ERR_PARSE
    })
}

fn write_string(out: *mut *mut c_char, value: String) -> i32 {
    if out.is_null() {
        set_error("null output pointer");
        return HS_ERR_NULL_POINTER;
    }
    match CString::new(value) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            HS_OK
        }
        Err(_) => {
            set_error("output contained an interior NUL byte");
            HS_ERR_INTERNAL
        }
    }
}

fn write_json<T: serde::Serialize>(out: *mut *mut c_char, value: &T) -> i32 {
    match serde_json::to_string(value) {
        Ok(s) => write_string(out, s),
        Err(e) => {
            set_error(&format!("serialization failed: {e}"));
            HS_ERR_INTERNAL
        }
    }
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, i32> {
    serde_json::from_str(text).map_err(|e| {
        set_error(&format!("json error: {e}"));
        HS_ERR_PARSE
    })
}

fn parse_point(raw: &[String]) -> Result<Vec<BigInt>, i32> {
    raw.iter()
        .map(|s| parse_bigint(s).map_err(|e| fail(&e)))
        .collect()
}

/// Last error message for this thread as a fresh string (never null;
/// empty when no error is recorded). Free with `hs_string_free`.
#[no_mangle]
pub extern "C" fn hs_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| {
        let msg = e
            .borrow()
            .as_ref()
            .map(|c| c.as_bytes().to_vec())
            .unwrap_or_default();
        CString::new(msg).unwrap_or_default().into_raw()
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must have been returned by a heightscout function and not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn hs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a lattice from its JSON interchange form
/// `{"ambient": N, "basis": {"rows":, "cols":, "data": [["..."]]}}`.
///
/// # Safety
/// `json` must be a valid NUL-terminated string; `out` must be a valid
/// pointer to receive the handle.
#[no_mangle]
pub unsafe extern "C" fn hs_lattice_parse(json: *const c_char, out: *mut *mut HsLattice) -> i32 {
    guarded(|| {
        clear_error();
        if out.is_null() {
            set_error("null output pointer");
            return HS_ERR_NULL_POINTER;
        }
        let text = match read_str(json) {
            Ok(t) => t,
            Err(code) => return code,
        };
        match parse_json::<Lattice>(text) {
            Ok(lat) => {
                *out = Box::into_raw(Box::new(HsLattice(lat)));
                HS_OK
            }
            Err(code) => code,
        }
    })
}

/// Releases a lattice handle. Null is ignored.
///
/// # Safety
/// `lat` must have come from `hs_lattice_parse` and not yet be freed.
#[no_mangle]
pub unsafe extern "C" fn hs_lattice_free(lat: *mut HsLattice) {
    if !lat.is_null() {
        drop(Box::from_raw(lat));
    }
}

unsafe fn deref_lattice<'a>(lat: *const HsLattice) -> Result<&'a Lattice, i32> {
    if lat.is_null() {
        set_error("null lattice handle");
        return Err(HS_ERR_NULL_POINTER);
    }
    Ok(&(*lat).0)
}

/// Ambient dimension of the lattice; zero for a null handle.
///
/// # Safety
/// `lat` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn hs_lattice_ambient_dim(lat: *const HsLattice) -> usize {
    deref_lattice(lat).map_or(0, Lattice::ambient_dim)
}

/// Rank of the lattice; zero for a null handle.
///
/// # Safety
/// `lat` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn hs_lattice_rank(lat: *const HsLattice) -> usize {
    deref_lattice(lat).map_or(0, Lattice::rank)
}

/// Height of the lattice as a decimal string.
///
/// # Safety
/// `lat` must be a live handle; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn hs_lattice_height(lat: *const HsLattice, out: *mut *mut c_char) -> i32 {
    guarded(|| {
        clear_error();
        match deref_lattice(lat) {
            Ok(l) => write_string(out, l.height().to_string()),
            Err(code) => code,
        }
    })
}

/// Grassmann coordinates as a JSON array of decimal strings, in
/// lexicographic order of the row subsets.
///
/// # Safety
/// `lat` must be a live handle; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn hs_lattice_grassmann(
    lat: *const HsLattice,
    out: *mut *mut c_char,
) -> i32 {
    guarded(|| {
        clear_error();
        match deref_lattice(lat) {
            Ok(l) => {
                let coords: Vec<String> = l.grassmann().iter().map(|v| v.to_string()).collect();
                write_json(out, &coords)
            }
            Err(code) => code,
        }
    })
}

/// Exact membership test; `point_json` is a JSON array of decimal strings.
/// Writes 1 or 0 through `contains_out`.
///
/// # Safety
/// `lat` must be a live handle; `point_json` a valid string;
/// `contains_out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn hs_lattice_contains(
    lat: *const HsLattice,
    point_json: *const c_char,
    contains_out: *mut i32,
) -> i32 {
    guarded(|| {
        clear_error();
        if contains_out.is_null() {
            set_error("null output pointer");
            return HS_ERR_NULL_POINTER;
        }
        let l = match deref_lattice(lat) {
            Ok(l) => l,
            Err(code) => return code,
        };
        let raw: Vec<String> = match read_str(point_json).and_then(parse_json) {
            Ok(v) => v,
            Err(code) => return code,
        };
        let point = match parse_point(&raw) {
            Ok(p) => p,
            Err(code) => return code,
        };
        match l.contains(&point) {
            Ok(b) => {
                *contains_out = i32::from(b);
                HS_OK
            }
            Err(e) => fail(&e),
        }
    })
}

/// Minor-duality certificate of the lattice as JSON.
///
/// # Safety
/// `lat` must be a live handle; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn hs_lattice_duality(lat: *const HsLattice, out: *mut *mut c_char) -> i32 {
    guarded(|| {
        clear_error();
        let l = match deref_lattice(lat) {
            Ok(l) => l,
            Err(code) => return code,
        };
        match duality_certificate(l) {
            Ok(cert) => write_json(out, &cert),
            Err(e) => fail(&e),
        }
    })
}

/// Cube-count envelope: lattice and cube as interchange JSON, result as
/// envelope JSON (`exact` omitted when the budget is exceeded).
///
/// # Safety
/// All pointers must be valid as described at the top of this module.
#[no_mangle]
pub unsafe extern "C" fn hs_count_cube(
    lattice_json: *const c_char,
    cube_json: *const c_char,
    budget: u64,
    out: *mut *mut c_char,
) -> i32 {
    guarded(|| {
        clear_error();
        let lat: Lattice = match read_str(lattice_json).and_then(parse_json) {
            Ok(v) => v,
            Err(code) => return code,
        };
        let cube: CubeRegion = match read_str(cube_json).and_then(parse_json) {
            Ok(v) => v,
            Err(code) => return code,
        };
        match cube_count_envelope(&lat, &cube, budget) {
            Ok(env) => write_json(out, &env),
            Err(e) => fail(&e),
        }
    })
}

/// Box-count envelope for an upper-triangular rational transform.
///
/// # Safety
/// All pointers must be valid as described at the top of this module.
#[no_mangle]
pub unsafe extern "C" fn hs_count_box(
    matrix_json: *const c_char,
    box_json: *const c_char,
    budget: u64,
    out: *mut *mut c_char,
) -> i32 {
    guarded(|| {
        clear_error();
        let matrix: RatMatrix = match read_str(matrix_json).and_then(parse_json) {
            Ok(v) => v,
            Err(code) => return code,
        };
        let region: BoxRegion = match read_str(box_json).and_then(parse_json) {
            Ok(v) => v,
            Err(code) => return code,
        };
        match count_box_image(&matrix, &region, budget) {
            Ok(env) => write_json(out, &env),
            Err(e) => fail(&e),
        }
    })
}

/// Taxicab-ball point count: `r` is a rational string, the count comes
/// back as a decimal string.
///
/// # Safety
/// All pointers must be valid as described at the top of this module.
#[no_mangle]
pub unsafe extern "C" fn hs_count_length_ball(
    n: usize,
    r: *const c_char,
    out: *mut *mut c_char,
) -> i32 {
    guarded(|| {
        clear_error();
        if n == 0 {
            set_error("dimension must be positive");
            return HS_ERR_DIMENSION;
        }
        let text = match read_str(r) {
            Ok(t) => t,
            Err(code) => return code,
        };
        let radius = match parse_ratio(text) {
            Ok(v) => v,
            Err(e) => return fail(&e),
        };
        write_string(out, count_length_ball(n, &radius).to_string())
    })
}

/// Small-height nonvanishing point of a polynomial, as certificate JSON.
///
/// # Safety
/// All pointers must be valid as described at the top of this module.
#[no_mangle]
pub unsafe extern "C" fn hs_poly_height_point(
    poly_json: *const c_char,
    out: *mut *mut c_char,
) -> i32 {
    guarded(|| {
        clear_error();
        let poly: MultiPoly = match read_str(poly_json).and_then(parse_json) {
            Ok(v) => v,
            Err(code) => return code,
        };
        match find_small_height_point(&poly) {
            Ok(cert) => write_json(out, &cert),
            Err(e) => fail(&e),
        }
    })
}

/// Small-length nonvanishing point of a homogeneous polynomial.
///
/// # Safety
/// All pointers must be valid as described at the top of this module.
#[no_mangle]
pub unsafe extern "C" fn hs_poly_length_point(
    poly_json: *const c_char,
    out: *mut *mut c_char,
) -> i32 {
    guarded(|| {
        clear_error();
        let poly: MultiPoly = match read_str(poly_json).and_then(parse_json) {
            Ok(v) => v,
            Err(code) => return code,
        };
        match find_small_length_point(&poly) {
            Ok(cert) => write_json(out, &cert),
            Err(e) => fail(&e),
        }
    })
}

/// First nonvanishing point on a finite grid (JSON array of decimal
/// strings); writes a JSON array, or `null` when the grid is fully
/// vanishing.
///
/// # Safety
/// All pointers must be valid as described at the top of this module.
#[no_mangle]
pub unsafe extern "C" fn hs_poly_grid_point(
    poly_json: *const c_char,
    grid_json: *const c_char,
    out: *mut *mut c_char,
) -> i32 {
    guarded(|| {
        clear_error();
        let poly: MultiPoly = match read_str(poly_json).and_then(parse_json) {
            Ok(v) => v,
            Err(code) => return code,
        };
        let raw: Vec<String> = match read_str(grid_json).and_then(parse_json) {
            Ok(v) => v,
            Err(code) => return code,
        };
        let grid = match parse_point(&raw) {
            Ok(g) => g,
            Err(code) => return code,
        };
        match find_nonvanishing_grid(&poly, &grid) {
            Ok(Some(p)) => {
                write_json(out, &p.iter().map(|v| v.to_string()).collect::<Vec<_>>())
            }
            Ok(None) => write_json(out, &serde_json::Value::Null),
            Err(e) => fail(&e),
        }
    })
}

/// Small point of a lattice outside a union of proper sublattices, as
/// certificate JSON. Input is `{"omega": <lattice>, "obstacles": [...]}`.
///
/// # Safety
/// All pointers must be valid as described at the top of this module.
#[no_mangle]
pub unsafe extern "C" fn hs_avoid_point(
    instance_json: *const c_char,
    budget: u64,
    out: *mut *mut c_char,
) -> i32 {
    guarded(|| {
        clear_error();
        let inst: AvoidanceInstance = match read_str(instance_json).and_then(parse_json) {
            Ok(v) => v,
            Err(code) => return code,
        };
        match find_point_outside(&inst, budget) {
            Ok(cert) => write_json(out, &cert),
            Err(e) => fail(&e),
        }
    })
}

/// Point where none of the given primitive forms vanish, as certificate
/// JSON. Input is a JSON array of `{"coeffs": [...]}` objects.
///
/// # Safety
/// All pointers must be valid as described at the top of this module.
#[no_mangle]
pub unsafe extern "C" fn hs_forms_avoid_point(
    forms_json: *const c_char,
    budget: u64,
    out: *mut *mut c_char,
) -> i32 {
    guarded(|| {
        clear_error();
        let forms: Vec<LinearForm> = match read_str(forms_json).and_then(parse_json) {
            Ok(v) => v,
            Err(code) => return code,
        };
        match linear_forms_point(&forms, budget) {
            Ok(cert) => write_json(out, &cert),
            Err(e) => fail(&e),
        }
    })
}

/// Verifies a plank cover `{"N":, "R":, "forms": [...]}`; the result JSON
/// carries `covered` and, on failure, the first uncovered `witness`.
///
/// # Safety
/// All pointers must be valid as described at the top of this module.
#[no_mangle]
pub unsafe extern "C" fn hs_plank_verify(
    cover_json: *const c_char,
    budget: u64,
    out: *mut *mut c_char,
) -> i32 {
    guarded(|| {
        clear_error();
        let cover: CoverInstance = match read_str(cover_json).and_then(parse_json) {
            Ok(v) => v,
            Err(code) => return code,
        };
        match verify_cover(&cover, budget) {
            Ok(check) => write_json(out, &check),
            Err(e) => fail(&e),
        }
    })
}

/// Exhaustive minimal cover of the radius-`radius` cube by hyperplanes of
/// height at most `height_cap`; writes the cover instance JSON.
///
/// # Safety
/// All pointers must be valid as described at the top of this module.
#[no_mangle]
pub unsafe extern "C" fn hs_plank_min_cover(
    dim: usize,
    radius: u64,
    height_cap: u64,
    budget: u64,
    out: *mut *mut c_char,
) -> i32 {
    guarded(|| {
        clear_error();
        match minimal_cover_search(dim, radius, height_cap, budget) {
            Ok(min) => write_json(out, &min.instance),
            Err(e) => fail(&e),
        }
    })
}
