//! C ABI over `rookmonoid`.
//!
//! Posets live behind an opaque `RmPoset` handle. Every fallible function
//! returns an `RmStatus`; on failure `rm_last_error_message` describes the
//! most recent error on the calling thread. Elements are addressed by their
//! index in canonical order, and entries travel as `uint8_t` one-line
//! sequences.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{self, AssertUnwindSafe};
use std::ptr;

use rookmonoid::instances::RookPoset;
use rookmonoid::verify::{self, CampaignConfig, Scope};
use rookmonoid::{Error, InstanceSpec, RookElement};

/// Largest `n` the handle constructors accept.
const BUILD_BOUND: usize = rookmonoid::instances::DEFAULT_BOUND;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    IndexOutOfRange = 3,
    BufferTooSmall = 4,
    Incomparable = 5,
    BoundExceeded = 6,
    Ungraded = 7,
    Failed = 8,
    Panic = 9,
}

/// Edge label `(first, second)`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RmLabel {
    pub first: u8,
    pub second: u8,
}

/// Opaque poset handle. Free with `rm_poset_free`.
pub struct RmPoset {
    inner: RookPoset,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: RmStatus, msg: impl Into<String>) -> RmStatus {
    set_error(msg);
    status
}

fn status_of(e: &Error) -> RmStatus {
    match e {
        Error::Incomparable { .. } => RmStatus::Incomparable,
        Error::BoundExceeded { .. } | Error::ScopeTooLarge { .. } | Error::CutoffExceeded { .. } => {
            RmStatus::BoundExceeded
        }
        Error::Ungraded | Error::Unlabeled { .. } => RmStatus::Ungraded,
        Error::UnknownIndex(_) => RmStatus::IndexOutOfRange,
        _ => RmStatus::InvalidArgument,
    }
}

/// Runs `body`, turning errors and panics into status codes.
fn guard<F>(body: F) -> RmStatus
where
    F: FnOnce() -> Result<(), RmStatus>,
{
    match panic::catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => RmStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(RmStatus::Panic, "internal panic"),
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, RmStatus>;
}

impl<T> OrStatus<T> for Result<T, Error> {
    fn or_status(self) -> Result<T, RmStatus> {
        self.map_err(|e| fail(status_of(&e), e.to_string()))
    }
}

unsafe fn poset_ref<'a>(p: *const RmPoset) -> Result<&'a RookPoset, RmStatus> {
    p.as_ref()
        .map(|h| &h.inner)
        .ok_or_else(|| fail(RmStatus::NullPointer, "null poset handle"))
}

unsafe fn out_ref<'a, T>(p: *mut T) -> Result<&'a mut T, RmStatus> {
    p.as_mut().ok_or_else(|| fail(RmStatus::NullPointer, "null output pointer"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, RmStatus> {
    if p.is_null() {
        return Err(fail(RmStatus::NullPointer, format!("null {what}")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(RmStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

fn check_index(poset: &RookPoset, i: usize) -> Result<(), RmStatus> {
    if i < poset.len() {
        Ok(())
    } else {
        Err(fail(
            RmStatus::IndexOutOfRange,
            format!("index {i} out of range for {} elements", poset.len()),
        ))
    }
}

/// Message for the last failure on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn rm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Builds `rook:n`, `sym:n` or `rook:n:k` (n at most 6).
///
/// # Safety
/// `instance` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rm_poset_build(instance: *const c_char, out: *mut *mut RmPoset) -> RmStatus {
    guard(|| {
        let out = out_ref(out)?;
        *out = ptr::null_mut();
        let spec: InstanceSpec = str_arg(instance, "instance")?.parse().or_status()?;
        let inner = spec.build(BUILD_BOUND).or_status()?;
        *out = Box::into_raw(Box::new(RmPoset { inner }));
        Ok(())
    })
}

/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rm_poset_build_rook(n: usize, out: *mut *mut RmPoset) -> RmStatus {
    build_spec(InstanceSpec::rook(n), out)
}

/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rm_poset_build_symmetric(n: usize, out: *mut *mut RmPoset) -> RmStatus {
    build_spec(InstanceSpec::symmetric(n), out)
}

/// The subposet of `R_n` with exactly `k` rooks.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rm_poset_build_rank_level(n: usize, k: usize, out: *mut *mut RmPoset) -> RmStatus {
    build_spec(InstanceSpec::rook_rank_level(n, k), out)
}

unsafe fn build_spec(spec: rookmonoid::Result<InstanceSpec>, out: *mut *mut RmPoset) -> RmStatus {
    guard(|| {
        let out = out_ref(out)?;
        *out = ptr::null_mut();
        let inner = spec.or_status()?.build(BUILD_BOUND).or_status()?;
        *out = Box::into_raw(Box::new(RmPoset { inner }));
        Ok(())
    })
}

/// Releases a handle. NULL is ignored.
///
/// # Safety
/// `poset` must come from a build function and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn rm_poset_free(poset: *mut RmPoset) {
    if !poset.is_null() {
        drop(Box::from_raw(poset));
    }
}

/// Number of elements.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rm_poset_len(poset: *const RmPoset, out: *mut usize) -> RmStatus {
    guard(|| {
        *out_ref(out)? = poset_ref(poset)?.len();
        Ok(())
    })
}

/// Matrix dimension `n`, which is the length of every element.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rm_poset_dimension(poset: *const RmPoset, out: *mut usize) -> RmStatus {
    guard(|| {
        let p = poset_ref(poset)?;
        *out_ref(out)? = p.elements().first().map_or(0, RookElement::n);
        Ok(())
    })
}

/// Copies the one-line entries of element `index` into `buf`.
///
/// # Safety
/// `buf` must hold `cap` bytes.
#[no_mangle]
pub unsafe extern "C" fn rm_poset_element(
    poset: *const RmPoset,
    index: usize,
    buf: *mut u8,
    cap: usize,
) -> RmStatus {
    guard(|| {
        let p = poset_ref(poset)?;
        check_index(p, index)?;
        let entries = p.element(index).entries();
        if cap < entries.len() {
            return Err(fail(RmStatus::BufferTooSmall, format!("need {} bytes", entries.len())));
        }
        if buf.is_null() {
            return Err(fail(RmStatus::NullPointer, "null buffer"));
        }
        ptr::copy_nonoverlapping(entries.as_ptr(), buf, entries.len());
        Ok(())
    })
}

/// Finds the index of the element with the given entries.
///
/// # Safety
/// `entries` must hold `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn rm_poset_index_of(
    poset: *const RmPoset,
    entries: *const u8,
    len: usize,
    out: *mut usize,
) -> RmStatus {
    guard(|| {
        let p = poset_ref(poset)?;
        let out = out_ref(out)?;
        if entries.is_null() {
            return Err(fail(RmStatus::NullPointer, "null entries"));
        }
        let x = RookElement::new(std::slice::from_raw_parts(entries, len).to_vec()).or_status()?;
        *out = p
            .index_of(&x)
            .ok_or_else(|| fail(RmStatus::InvalidArgument, format!("{x} is not in this poset")))?;
        Ok(())
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rm_poset_rank(poset: *const RmPoset, index: usize, out: *mut u32) -> RmStatus {
    guard(|| {
        let p = poset_ref(poset)?;
        check_index(p, index)?;
        *out_ref(out)? = p.rank(index);
        Ok(())
    })
}

/// Number of upper covers of `index`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rm_poset_cover_count(poset: *const RmPoset, index: usize, out: *mut usize) -> RmStatus {
    guard(|| {
        let p = poset_ref(poset)?;
        check_index(p, index)?;
        *out_ref(out)? = p.up_covers(index).len();
        Ok(())
    })
}

/// Upper cover number `slot` of `index`, ordered by label. Unlabeled edges
/// report the label `(0,0)`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rm_poset_cover(
    poset: *const RmPoset,
    index: usize,
    slot: usize,
    target: *mut usize,
    label: *mut RmLabel,
) -> RmStatus {
    guard(|| {
        let p = poset_ref(poset)?;
        check_index(p, index)?;
        let edge = p
            .up_covers(index)
            .get(slot)
            .ok_or_else(|| fail(RmStatus::IndexOutOfRange, format!("no cover slot {slot}")))?;
        *out_ref(target)? = edge.target;
        *out_ref(label)? = edge.label.map_or(RmLabel::default(), |l| RmLabel {
            first: l.first(),
            second: l.second(),
        });
        Ok(())
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rm_poset_leq(poset: *const RmPoset, x: usize, y: usize, out: *mut bool) -> RmStatus {
    guard(|| {
        let p = poset_ref(poset)?;
        check_index(p, x)?;
        check_index(p, y)?;
        *out_ref(out)? = p.leq(x, y);
        Ok(())
    })
}

/// Möbius value; 0 when `x` is not below `y`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rm_poset_mobius(poset: *const RmPoset, x: usize, y: usize, out: *mut i64) -> RmStatus {
    guard(|| {
        let p = poset_ref(poset)?;
        check_index(p, x)?;
        check_index(p, y)?;
        let out = out_ref(out)?;
        *out = if p.leq(x, y) { p.mobius(x, y).or_status()? } else { 0 };
        Ok(())
    })
}

/// Lexicographically first maximal chain of `[x, y]`. Writes `len + 1`
/// vertex indices and `len` labels, where `len` is the interval length,
/// and stores `len` in `out_len`. With `cap` too small, only `out_len` is
/// written and the status is `BufferTooSmall`.
///
/// # Safety
/// `vertices` must hold `cap + 1` entries and `labels` `cap` entries.
#[no_mangle]
pub unsafe extern "C" fn rm_poset_lex_first_chain(
    poset: *const RmPoset,
    x: usize,
    y: usize,
    vertices: *mut usize,
    labels: *mut RmLabel,
    cap: usize,
    out_len: *mut usize,
) -> RmStatus {
    guard(|| {
        let p = poset_ref(poset)?;
        check_index(p, x)?;
        check_index(p, y)?;
        let out_len = out_ref(out_len)?;
        let chain = p.lex_first_chain(&p.interval(x, y).or_status()?).or_status()?;
        *out_len = chain.labels.len();
        if cap < chain.labels.len() {
            return Err(fail(RmStatus::BufferTooSmall, format!("need capacity {}", chain.labels.len())));
        }
        if vertices.is_null() || (labels.is_null() && !chain.labels.is_empty()) {
            return Err(fail(RmStatus::NullPointer, "null chain buffer"));
        }
        for (i, &v) in chain.vertices.iter().enumerate() {
            *vertices.add(i) = v;
        }
        for (i, l) in chain.labels.iter().enumerate() {
            *labels.add(i) = RmLabel {
                first: l.first(),
                second: l.second(),
            };
        }
        Ok(())
    })
}

/// Number of maximal chains of `[x, y]` with weakly increasing labels,
/// saturating at `UINT64_MAX`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rm_poset_count_increasing_chains(
    poset: *const RmPoset,
    x: usize,
    y: usize,
    out: *mut u64,
) -> RmStatus {
    guard(|| {
        let p = poset_ref(poset)?;
        check_index(p, x)?;
        check_index(p, y)?;
        let count = p.count_increasing_chains(&p.interval(x, y).or_status()?).or_status()?;
        *out_ref(out)? = u64::try_from(count).unwrap_or(u64::MAX);
        Ok(())
    })
}

/// Runs a verification campaign and returns its JSON report through
/// `json_out` (free it with `rm_string_free`). `checks` and `scope` may be
/// NULL for the defaults. The status is `Failed` when a check fails; the
/// report is still written.
///
/// # Safety
/// String arguments must be NUL-terminated or NULL; out pointers valid.
#[no_mangle]
pub unsafe extern "C" fn rm_verify(
    instance: *const c_char,
    checks: *const c_char,
    scope: *const c_char,
    threads: usize,
    json_out: *mut *mut c_char,
) -> RmStatus {
    guard(|| {
        let json_out = out_ref(json_out)?;
        *json_out = ptr::null_mut();
        let spec: InstanceSpec = str_arg(instance, "instance")?.parse().or_status()?;
        let mut config = CampaignConfig::new(spec).with_threads(threads);
        if !checks.is_null() {
            config = config.with_checks(verify::parse_checks(str_arg(checks, "checks")?).or_status()?);
        }
        if !scope.is_null() {
            config = config.with_scope(str_arg(scope, "scope")?.parse::<Scope>().or_status()?);
        }
        let report = verify::run_campaign(&config).or_status()?;
        let json = CString::new(report.to_json().or_status()?)
            .map_err(|_| fail(RmStatus::InvalidArgument, "report contains NUL"))?;
        *json_out = json.into_raw();
        if report.passed {
            Ok(())
        } else {
            Err(fail(RmStatus::Failed, "verification failed"))
        }
    })
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn rm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
