//! C ABI over `tvq_core`.
//!
//! Every fallible function returns a [`TvqStatus`]; on failure a message is
//! available from [`tvq_last_error_message`] on the same thread. Handles are
//! opaque and owned by the caller, who releases them with the matching
//! `*_free` function. Strings returned through `char **` out-parameters
//! must be released with [`tvq_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tvq_core::catalog;
use tvq_core::cyclotomic::FieldError;
use tvq_core::statesum::{self, InvariantReport, QSpec, Quantity, StateSumError};
use tvq_core::triangulation::{GluingSpec, Triangulation, TriangulationError};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TvqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed gluing text: syntax, index range or pairing errors.
    ParseError = 3,
    /// Parsed, but not a closed 3-manifold triangulation.
    InvalidTriangulation = 4,
    NotInCatalog = 5,
    InvalidR = 6,
    /// The value has no polynomial form in `q`.
    NotInSubfield = 7,
    /// Internal consistency failure, e.g. a vanishing denominator.
    Internal = 8,
    Panic = 9,
}

/// Evaluation point: the standard `q` or its negative.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TvqEvaluation {
    Standard = 0,
    Mirror = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TvqInvariant {
    Tv0 = 0,
    Tv1 = 1,
    Tv2 = 2,
    Tv = 3,
    TvStar0 = 4,
    TvStar1 = 5,
    TvStarE = 6,
    TvStar = 7,
}

/// A validated closed triangulation.
pub struct TvqTriangulation(Triangulation);

/// Invariants of one triangulation at one `r` and evaluation point.
pub struct TvqReport(InvariantReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(TvqStatus, String);

impl From<TriangulationError> for Failure {
    fn from(e: TriangulationError) -> Self {
        let status = match e {
            TriangulationError::Syntax { .. }
            | TriangulationError::OutOfRange { .. }
            | TriangulationError::Involution { .. } => TvqStatus::ParseError,
            TriangulationError::NotInCatalog(_) => TvqStatus::NotInCatalog,
            _ => TvqStatus::InvalidTriangulation,
        };
        Failure(status, e.to_string())
    }
}

impl From<StateSumError> for Failure {
    fn from(e: StateSumError) -> Self {
        let status = match e {
            StateSumError::Field(FieldError::InvalidOrder(_)) => TvqStatus::InvalidR,
            _ => TvqStatus::Internal,
        };
        Failure(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> TvqStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TvqStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(msg);
            TvqStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(TvqStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(TvqStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("no interior nul").into_raw()
}

fn check_r(r: u32) -> Result<(), Failure> {
    if r < 3 {
        return Err(Failure(TvqStatus::InvalidR, format!("r must be at least 3, got {r}")));
    }
    Ok(())
}

/// Parses gluing text and validates it.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tvq_triangulation_from_text(
    text: *const c_char,
    out: *mut *mut TvqTriangulation,
) -> TvqStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = read_str(text, "text")?;
        let tri = Triangulation::build(&GluingSpec::parse(text)?)?;
        write(out, Box::into_raw(Box::new(TvqTriangulation(tri))), "out")
    })
}

/// Looks up a builtin manifold by name, e.g. `"L(3,1)"` or `"L31"`.
///
/// # Safety
/// `name` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tvq_triangulation_from_catalog(
    name: *const c_char,
    out: *mut *mut TvqTriangulation,
) -> TvqStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let name = read_str(name, "name")?;
        let tri = catalog::lookup(name)?.triangulation()?;
        write(out, Box::into_raw(Box::new(TvqTriangulation(tri))), "out")
    })
}

/// # Safety
/// `tri` must come from this library and not have been freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn tvq_triangulation_free(tri: *mut TvqTriangulation) {
    if !tri.is_null() {
        drop(Box::from_raw(tri));
    }
}

/// Cell counts of the quotient complex. Any out-pointer may be null.
///
/// # Safety
/// `tri` must be a live handle; non-null out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tvq_triangulation_counts(
    tri: *const TvqTriangulation,
    vertices: *mut usize,
    edges: *mut usize,
    faces: *mut usize,
    tetrahedra: *mut usize,
) -> TvqStatus {
    guard(|| {
        let t = &tri.as_ref().ok_or_else(|| null("tri"))?.0;
        for (p, v) in [
            (vertices, t.num_vertices()),
            (edges, t.num_edges()),
            (faces, t.num_faces()),
            (tetrahedra, t.num_tetrahedra()),
        ] {
            if !p.is_null() {
                p.write(v);
            }
        }
        Ok(())
    })
}

/// First homology as text, e.g. `"Z/3"` or `"0"`.
///
/// # Safety
/// `tri` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tvq_triangulation_homology(tri: *const TvqTriangulation, out: *mut *mut c_char) -> TvqStatus {
    guard(|| {
        let t = &tri.as_ref().ok_or_else(|| null("tri"))?.0;
        write(out, to_c_string(t.homology_h1().to_string()), "out")
    })
}

/// Computes every invariant at `r`. `workers = 0` picks the default.
///
/// # Safety
/// `tri` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tvq_compute(
    tri: *const TvqTriangulation,
    r: u32,
    evaluation: TvqEvaluation,
    workers: usize,
    out: *mut *mut TvqReport,
) -> TvqStatus {
    guard(|| {
        let t = &tri.as_ref().ok_or_else(|| null("tri"))?.0;
        if out.is_null() {
            return Err(null("out"));
        }
        check_r(r)?;
        let qspec = match evaluation {
            TvqEvaluation::Standard => QSpec::standard(r)?,
            TvqEvaluation::Mirror => QSpec::mirror(r)?,
        };
        let workers = if workers == 0 {
            statesum::default_workers()
        } else {
            workers
        };
        let report = statesum::compute(t, &qspec, workers)?;
        write(out, Box::into_raw(Box::new(TvqReport(report))), "out")
    })
}

/// Checks the exact identities between the two evaluation points at `r`.
///
/// # Safety
/// `tri` must be a live handle and `all_hold` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tvq_verify_identities(
    tri: *const TvqTriangulation,
    r: u32,
    workers: usize,
    all_hold: *mut bool,
) -> TvqStatus {
    guard(|| {
        let t = &tri.as_ref().ok_or_else(|| null("tri"))?.0;
        if all_hold.is_null() {
            return Err(null("all_hold"));
        }
        check_r(r)?;
        let workers = if workers == 0 {
            statesum::default_workers()
        } else {
            workers
        };
        let rep = statesum::verify_identities(t, r, workers)?;
        if !rep.all_hold() {
            let failed: Vec<&str> = rep
                .checks
                .iter()
                .filter(|c| !c.holds)
                .map(|c| c.name.as_str())
                .collect();
            set_error(format!("failed: {}", failed.join(", ")));
        }
        write(all_hold, rep.all_hold(), "all_hold")
    })
}

/// # Safety
/// `report` must come from this library and not have been freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn tvq_report_free(report: *mut TvqReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

fn quantity(report: &InvariantReport, which: TvqInvariant) -> &Quantity {
    match which {
        TvqInvariant::Tv0 => &report.tv0,
        TvqInvariant::Tv1 => &report.tv1,
        TvqInvariant::Tv2 => &report.tv2,
        TvqInvariant::Tv => &report.tv,
        TvqInvariant::TvStar0 => &report.tvstar0,
        TvqInvariant::TvStar1 => &report.tvstar1,
        TvqInvariant::TvStarE => &report.tvstar_e,
        TvqInvariant::TvStar => &report.tvstar,
    }
}

/// Complex value of one invariant.
///
/// # Safety
/// `report` must be a live handle; `re` and `im` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn tvq_report_value(
    report: *const TvqReport,
    which: TvqInvariant,
    re: *mut f64,
    im: *mut f64,
) -> TvqStatus {
    guard(|| {
        let rep = &report.as_ref().ok_or_else(|| null("report"))?.0;
        if re.is_null() || im.is_null() {
            return Err(null("re/im"));
        }
        let v = quantity(rep, which).value;
        re.write(v.re);
        im.write(v.im);
        Ok(())
    })
}

/// Exact value as a polynomial in `q`, e.g. `"2q^3-4q"`.
///
/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tvq_report_polynomial(
    report: *const TvqReport,
    which: TvqInvariant,
    out: *mut *mut c_char,
) -> TvqStatus {
    guard(|| {
        let rep = &report.as_ref().ok_or_else(|| null("report"))?.0;
        if out.is_null() {
            return Err(null("out"));
        }
        match &quantity(rep, which).poly {
            Ok(p) => write(out, to_c_string(p.to_string()), "out"),
            Err(e) => Err(Failure(TvqStatus::NotInSubfield, e.to_string())),
        }
    })
}

/// Admissible coloring counts; `adm_e` includes the all-even colorings.
///
/// # Safety
/// `report` must be a live handle; non-null out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tvq_report_colorings(
    report: *const TvqReport,
    adm0: *mut u64,
    adm1: *mut u64,
    adm_e: *mut u64,
) -> TvqStatus {
    guard(|| {
        let s = &report.as_ref().ok_or_else(|| null("report"))?.0.sums;
        for (p, v) in [(adm0, s.adm0), (adm1, s.adm1), (adm_e, s.adm_e)] {
            if !p.is_null() {
                p.write(v);
            }
        }
        Ok(())
    })
}

/// Whether every internal consistency check of the report holds.
///
/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tvq_report_checks_pass(report: *const TvqReport, out: *mut bool) -> TvqStatus {
    guard(|| {
        let rep = &report.as_ref().ok_or_else(|| null("report"))?.0;
        write(out, rep.all_checks_pass(), "out")
    })
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn tvq_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must come from this library and not have been freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn tvq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn tvq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
