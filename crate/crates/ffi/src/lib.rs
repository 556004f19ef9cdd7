//! C ABI for boxlogic.
//!
//! Every fallible function returns a [`BoxlogicStatus`]; on failure the
//! message is available from [`boxlogic_last_error`] on the same thread.
//! Strings handed out by the library are owned by the caller and must be
//! released with [`boxlogic_string_free`]. Worlds are opaque handles created
//! by [`boxlogic_world_new`] and released with [`boxlogic_world_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, UnwindSafe};
use std::ptr;

use boxlogic::box_world::BuiltWorld;
use boxlogic::cli::{
    json_text, parse_event, parse_spec_str, verification_document, DEFAULT_MAX_DIMENSION,
};
use boxlogic::logic::DEFAULT_BUDGET;
use boxlogic::states::{chsh_value, pr_box_state, Behavior};
use boxlogic::Error;

/// Result codes of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoxlogicStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Input = 3,
    Spec = 4,
    Budget = 5,
    InvalidBehavior = 6,
    NotAMember = 7,
    Json = 8,
    /// A check ran and failed; the output argument is still filled in.
    CheckFailed = 9,
    Internal = 10,
}

/// Which of the three logics of a world a query refers to.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoxlogicSide {
    Left = 0,
    Right = 1,
    Composite = 2,
}

/// A built box world: both single-box logics, the composite logic and the
/// product witness.
pub struct BoxlogicWorld {
    built: BuiltWorld,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("nul bytes replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> BoxlogicStatus {
    match e {
        Error::Input(_) | Error::Precondition(_) => BoxlogicStatus::Input,
        Error::Spec { .. } => BoxlogicStatus::Spec,
        Error::Budget(_) => BoxlogicStatus::Budget,
        Error::Normalization { .. }
        | Error::Range { .. }
        | Error::Signaling { .. }
        | Error::NotAState(_) => BoxlogicStatus::InvalidBehavior,
        Error::NotAMember(_) => BoxlogicStatus::NotAMember,
        Error::Json(_) => BoxlogicStatus::Json,
        Error::Io(_) | Error::Invariant(_) => BoxlogicStatus::Internal,
    }
}

struct Failure(BoxlogicStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<BoxlogicStatus, Failure> + UnwindSafe) -> BoxlogicStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(f) {
        Ok(Ok(status)) => status,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            BoxlogicStatus::Internal
        }
    }
}

unsafe fn text<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(
            BoxlogicStatus::NullArgument,
            format!("{name} is null"),
        ));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        Failure(
            BoxlogicStatus::InvalidUtf8,
            format!("{name} is not valid UTF-8"),
        )
    })
}

unsafe fn world<'a>(p: *const BoxlogicWorld) -> Result<&'a BoxlogicWorld, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure(BoxlogicStatus::NullArgument, "world is null".into()))
}

fn out_ptr<T>(p: *mut T, name: &str) -> Result<(), Failure> {
    if p.is_null() {
        return Err(Failure(
            BoxlogicStatus::NullArgument,
            format!("{name} is null"),
        ));
    }
    Ok(())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s)
        .expect("library output has no nul bytes")
        .into_raw()
}

unsafe fn behavior(w: &BoxlogicWorld, json: *const c_char) -> Result<Behavior, Failure> {
    if json.is_null() {
        let b = pr_box_state();
        if !b.fits(&w.built.world) {
            return Err(Failure(
                BoxlogicStatus::Input,
                "the PR box lives in the (2,2) x (2,2) world".into(),
            ));
        }
        return Ok(b);
    }
    let v: serde_json::Value =
        serde_json::from_str(text(json, "behavior")?).map_err(Error::from)?;
    Ok(Behavior::from_json(&w.built.world, &v)?)
}

/// Builds the world described by `spec` (JSON or `side.field = value`
/// lines). A `budget` of 0 selects the default element budget.
///
/// # Safety
/// `spec` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn boxlogic_world_new(
    spec: *const c_char,
    budget: usize,
    out: *mut *mut BoxlogicWorld,
) -> BoxlogicStatus {
    guard(|| {
        out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let world = parse_spec_str(text(spec, "spec")?)?;
        let budget = if budget == 0 { DEFAULT_BUDGET } else { budget };
        let built = BuiltWorld::build(world, budget)?;
        *out = Box::into_raw(Box::new(BoxlogicWorld { built }));
        Ok(BoxlogicStatus::Ok)
    })
}

/// # Safety
/// `world` must come from [`boxlogic_world_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn boxlogic_world_free(world: *mut BoxlogicWorld) {
    if !world.is_null() {
        drop(Box::from_raw(world));
    }
}

/// Number of elements of one of the world's logics.
///
/// # Safety
/// `world` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn boxlogic_world_element_count(
    world: *const BoxlogicWorld,
    side: BoxlogicSide,
    out: *mut usize,
) -> BoxlogicStatus {
    guard(|| {
        out_ptr(out, "out")?;
        let w = self::world(world)?;
        *out = logic_of(w, side).len();
        Ok(BoxlogicStatus::Ok)
    })
}

/// Number of atoms of one of the world's logics.
///
/// # Safety
/// `world` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn boxlogic_world_atom_count(
    world: *const BoxlogicWorld,
    side: BoxlogicSide,
    out: *mut usize,
) -> BoxlogicStatus {
    guard(|| {
        out_ptr(out, "out")?;
        let w = self::world(world)?;
        *out = logic_of(w, side).atoms().len();
        Ok(BoxlogicStatus::Ok)
    })
}

fn logic_of(w: &BoxlogicWorld, side: BoxlogicSide) -> &boxlogic::logic::ConcreteLogic {
    match side {
        BoxlogicSide::Left => w.built.left.logic(),
        BoxlogicSide::Right => w.built.right.logic(),
        BoxlogicSide::Composite => w.built.composite.logic(),
    }
}

/// Runs the full product verification and writes the same JSON document as
/// `boxlogic verify` to `*json_out`. Returns `CHECK_FAILED` (with the
/// document still written) when some check fails. A `max_dimension` of 0
/// selects the default vertex-enumeration cap.
///
/// # Safety
/// `world` must be a live handle and `json_out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn boxlogic_world_verify(
    world: *const BoxlogicWorld,
    max_dimension: usize,
    json_out: *mut *mut c_char,
) -> BoxlogicStatus {
    guard(|| {
        out_ptr(json_out, "json_out")?;
        *json_out = ptr::null_mut();
        let w = self::world(world)?;
        let cap = if max_dimension == 0 {
            DEFAULT_MAX_DIMENSION
        } else {
            max_dimension
        };
        let (doc, passed) = verification_document(&w.built, cap)?;
        *json_out = into_c_string(json_text(&doc));
        if passed {
            Ok(BoxlogicStatus::Ok)
        } else {
            Err(Failure(
                BoxlogicStatus::CheckFailed,
                "some verification check failed".into(),
            ))
        }
    })
}

/// Exact value of a behavior on an event expression such as `[1:{0}, *]`,
/// written as a rational string like `1/2`. A null `behavior_json` selects
/// the PR box.
///
/// # Safety
/// `world` must be a live handle, the strings nul-terminated or null where
/// allowed, and `value_out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn boxlogic_world_evaluate(
    world: *const BoxlogicWorld,
    behavior_json: *const c_char,
    expression: *const c_char,
    value_out: *mut *mut c_char,
) -> BoxlogicStatus {
    guard(|| {
        out_ptr(value_out, "value_out")?;
        *value_out = ptr::null_mut();
        let w = self::world(world)?;
        let b = behavior(w, behavior_json)?;
        let event = parse_event(&w.built.world, text(expression, "expression")?)?;
        w.built.composite.logic().require(&event)?;
        *value_out = into_c_string(b.evaluate(&w.built.composite, &event)?.to_string());
        Ok(BoxlogicStatus::Ok)
    })
}

/// CHSH value of a behavior in a world with two binary inputs per side, as a
/// rational string. A null `behavior_json` selects the PR box.
///
/// # Safety
/// As for [`boxlogic_world_evaluate`].
#[no_mangle]
pub unsafe extern "C" fn boxlogic_world_chsh(
    world: *const BoxlogicWorld,
    behavior_json: *const c_char,
    value_out: *mut *mut c_char,
) -> BoxlogicStatus {
    guard(|| {
        out_ptr(value_out, "value_out")?;
        *value_out = ptr::null_mut();
        let w = self::world(world)?;
        let b = behavior(w, behavior_json)?;
        *value_out = into_c_string(chsh_value(&b)?.to_string());
        Ok(BoxlogicStatus::Ok)
    })
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn boxlogic_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn boxlogic_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn boxlogic_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
