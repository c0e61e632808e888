//! C ABI over `latdeg`.
//!
//! Groups are opaque `LatdegGroup` handles owned by the caller and released
//! with `latdeg_group_free`. Every fallible call returns a `LatdegStatus`;
//! on failure `latdeg_last_error_message` describes the most recent error on
//! the calling thread. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;
use std::sync::OnceLock;

use latdeg::closed_forms::sd_schmidt_formula;
use latdeg::degrees::{sd_of_lattice, sd_star};
use latdeg::lattice::{enumerate_subgroups, is_modular_lattice, is_nilpotent, is_schmidt, is_solvable};
use latdeg::scan::ingest::{ingest_str, resolve_group};
use latdeg::{Error, ExactRational, Group, SubgroupLattice};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatdegStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotAGroup = 3,
    OrderCapExceeded = 4,
    ParseError = 5,
    ConstructionFailure = 6,
    /// An exact value does not fit the 64-bit output.
    Overflow = 7,
    Io = 8,
    Panic = 9,
}

/// `num / den` in lowest terms.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LatdegFraction {
    pub num: u64,
    pub den: u64,
}

/// Opaque group handle.
pub struct LatdegGroup {
    group: Group,
    lattice: OnceLock<Result<SubgroupLattice, Error>>,
}

impl LatdegGroup {
    fn new(group: Group) -> Self {
        LatdegGroup { group, lattice: OnceLock::new() }
    }

    fn lattice(&self) -> Result<&SubgroupLattice, Failure> {
        self.lattice.get_or_init(|| enumerate_subgroups(&self.group)).as_ref().map_err(|e| Failure::from(e.clone()))
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(LatdegStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::NotAGroup { .. } => LatdegStatus::NotAGroup,
            Error::OrderCapExceeded { .. } => LatdegStatus::OrderCapExceeded,
            Error::IngestParseError { .. } => LatdegStatus::ParseError,
            Error::ConstructionFailure(_)
            | Error::NotMinimalSchmidt(_)
            | Error::NotSchmidt
            | Error::SylowStructureUnexpected(_)
            | Error::DecompositionMismatch(_) => LatdegStatus::ConstructionFailure,
            Error::Io(_) | Error::CacheCorrupt(_) => LatdegStatus::Io,
            _ => LatdegStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(LatdegStatus::NullPointer, format!("{what} is null"))
}

fn set_error(msg: Option<String>) {
    let c = msg.map(|m| CString::new(m.replace('\0', " ")).expect("interior nuls removed"));
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> LatdegStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(None);
            LatdegStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(Some(msg));
            status
        }
        Err(_) => {
            set_error(Some("internal panic".into()));
            LatdegStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| Failure(LatdegStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn group_arg<'a>(g: *const LatdegGroup) -> Result<&'a LatdegGroup, Failure> {
    g.as_ref().ok_or_else(|| null("group"))
}

unsafe fn write_out<T>(out: *mut T, v: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(v);
    Ok(())
}

fn fraction(r: &ExactRational) -> Result<LatdegFraction, Failure> {
    let overflow = || Failure(LatdegStatus::Overflow, format!("{r} does not fit in 64 bits"));
    Ok(LatdegFraction {
        num: u64::try_from(r.numer()).map_err(|_| overflow())?,
        den: u64::try_from(r.denom()).map_err(|_| overflow())?,
    })
}

unsafe fn emit_group(out: *mut *mut LatdegGroup, g: Group) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(Box::into_raw(Box::new(LatdegGroup::new(g))));
    Ok(())
}

/// Builds a group from a spec such as `dihedral:8`, `schmidt:2:7`, or the
/// path of a group file holding one group.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn latdeg_group_from_spec(spec: *const c_char, out: *mut *mut LatdegGroup) -> LatdegStatus {
    guard(|| emit_group(out, resolve_group(str_arg(spec, "spec")?)?))
}

/// Builds a group from a row-major `n x n` multiplication table on
/// `0..n`; the table is checked to define a group.
///
/// # Safety
/// `table` must point to `n * n` values; `label` may be null.
#[no_mangle]
pub unsafe extern "C" fn latdeg_group_from_table(
    table: *const u32,
    n: usize,
    label: *const c_char,
    out: *mut *mut LatdegGroup,
) -> LatdegStatus {
    guard(|| {
        if table.is_null() {
            return Err(null("table"));
        }
        let cells =
            n.checked_mul(n).ok_or_else(|| Failure(LatdegStatus::InvalidArgument, "table size overflows".into()))?;
        let flat = std::slice::from_raw_parts(table, cells);
        let rows: Vec<Vec<usize>> = flat.chunks(n.max(1)).map(|r| r.iter().map(|&x| x as usize).collect()).collect();
        let label = if label.is_null() { "G" } else { str_arg(label, "label")? };
        emit_group(out, Group::from_table(&rows, label)?)
    })
}

/// Builds a group from the JSON text of a group file holding one group.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn latdeg_group_from_json(json: *const c_char, out: *mut *mut LatdegGroup) -> LatdegStatus {
    guard(|| {
        let mut gs = ingest_str(str_arg(json, "json")?, Path::new("<json>"))?;
        if gs.len() != 1 {
            return Err(Failure(LatdegStatus::InvalidArgument, format!("expected one group, got {}", gs.len())));
        }
        emit_group(out, gs.remove(0))
    })
}

/// # Safety
/// `g` must come from a `latdeg_group_from_*` call and not be used again.
#[no_mangle]
pub unsafe extern "C" fn latdeg_group_free(g: *mut LatdegGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn latdeg_group_order(g: *const LatdegGroup, out: *mut usize) -> LatdegStatus {
    guard(|| write_out(out, group_arg(g)?.group.order()))
}

/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn latdeg_subgroup_count(g: *const LatdegGroup, out: *mut usize) -> LatdegStatus {
    guard(|| write_out(out, group_arg(g)?.lattice()?.len()))
}

/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn latdeg_sd(g: *const LatdegGroup, out: *mut LatdegFraction) -> LatdegStatus {
    guard(|| write_out(out, fraction(&sd_of_lattice(group_arg(g)?.lattice()?))?))
}

/// `sd*` and the orders of a section `H/N` attaining it.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable; `host_order` and
/// `kernel_order` may be null.
#[no_mangle]
pub unsafe extern "C" fn latdeg_sd_star(
    g: *const LatdegGroup,
    out: *mut LatdegFraction,
    host_order: *mut usize,
    kernel_order: *mut usize,
) -> LatdegStatus {
    guard(|| {
        let s = sd_star(&group_arg(g)?.group)?;
        write_out(out, fraction(&s.value)?)?;
        if !host_order.is_null() {
            host_order.write(s.host.order());
        }
        if !kernel_order.is_null() {
            kernel_order.write(s.kernel.order());
        }
        Ok(())
    })
}

/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn latdeg_is_iwasawa(g: *const LatdegGroup, out: *mut bool) -> LatdegStatus {
    guard(|| {
        let h = group_arg(g)?;
        let v = is_nilpotent(&h.group) && is_modular_lattice(h.lattice()?).is_modular();
        write_out(out, v)
    })
}

/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn latdeg_is_schmidt(g: *const LatdegGroup, out: *mut bool) -> LatdegStatus {
    guard(|| write_out(out, is_schmidt(group_arg(g)?.lattice()?)))
}

/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn latdeg_is_nilpotent(g: *const LatdegGroup, out: *mut bool) -> LatdegStatus {
    guard(|| write_out(out, is_nilpotent(&group_arg(g)?.group)))
}

/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn latdeg_is_solvable(g: *const LatdegGroup, out: *mut bool) -> LatdegStatus {
    guard(|| write_out(out, is_solvable(&group_arg(g)?.group)))
}

/// Closed-form `sd` of the minimal Schmidt group of order `p^r q`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn latdeg_schmidt_formula(p: u64, q: u64, out: *mut LatdegFraction) -> LatdegStatus {
    guard(|| write_out(out, fraction(&sd_schmidt_formula(p, q)?.sd_value)?))
}

/// Message for the last failed call on this thread, or null after a
/// successful call. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn latdeg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn latdeg_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version contains a nul"),
    };
    VERSION.as_ptr()
}
