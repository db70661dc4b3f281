//! C ABI over the `inner-dynamics` library.
//!
//! Every object crosses the boundary as an opaque handle created by an
//! `id_*_new` function and released by the matching `id_*_free`. Every
//! fallible call returns an [`IdStatus`]; on failure the message is
//! available from [`id_last_error`] until the next failing call on the same
//! thread. Panics are caught and reported as [`IdStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use inner_dynamics::blaschke::{lambda_of_tau, tau_of_lambda, FiniteBlaschke};
use inner_dynamics::correspondence::{
    verify_exp_pairing, verify_fatou_pairing, verify_lambda0, verify_parabolic_tan, verify_sine_pairing_with,
    verify_topfer, verify_unisingular_forms, PairingReport, SineOptions,
};
use inner_dynamics::entire::EntireFamily;
use inner_dynamics::halfplane::{classify_tan_family, FixedPointClass, TanFamily};
use inner_dynamics::inner_factor::AtomicInnerFunction;
use inner_dynamics::{CPoint, Error};

/// A complex number, layout-compatible with C99 `double _Complex`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdComplex {
    pub re: f64,
    pub im: f64,
}

impl From<IdComplex> for CPoint {
    fn from(z: IdComplex) -> Self {
        CPoint::new(z.re, z.im)
    }
}

impl From<CPoint> for IdComplex {
    fn from(z: CPoint) -> Self {
        IdComplex { re: z.re, im: z.im }
    }
}

/// Result of a call. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// Evaluation point too close to a pole or an atom.
    Singularity = 3,
    NoConvergence = 4,
    /// Any other numerical failure.
    Numeric = 5,
    Panic = 6,
}

/// Fixed-point type codes returned by [`id_tan_classify`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdFixedPointClass {
    AttractingInterior = 0,
    AttractingBoundary = 1,
    Parabolic = 2,
    Repelling = 3,
}

/// Opaque handle to an entire family member.
pub struct IdFamily(EntireFamily);
/// Opaque handle to a finite Blaschke product.
pub struct IdBlaschke(FiniteBlaschke);
/// Opaque handle to an inner function with an atomic singular factor.
pub struct IdInner(AtomicInnerFunction);
/// Opaque handle to a member of `a·tan z + b`.
pub struct IdTan(TanFamily);
/// Opaque handle to a pairing report.
pub struct IdReport(PairingReport);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> IdStatus {
    match e {
        Error::InvalidConfig(_) | Error::Domain(_) => IdStatus::InvalidArgument,
        Error::PoleProximity { .. } | Error::PoleHit { .. } | Error::AtomProximity { .. } => IdStatus::Singularity,
        Error::NoConvergence { .. } => IdStatus::NoConvergence,
        _ => IdStatus::Numeric,
    }
}

/// Runs `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), (IdStatus, String)>) -> IdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => IdStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("panic inside inner-dynamics");
            IdStatus::Panic
        }
    }
}

trait IntoFfi<T> {
    fn ffi(self) -> Result<T, (IdStatus, String)>;
}

impl<T> IntoFfi<T> for inner_dynamics::Result<T> {
    fn ffi(self) -> Result<T, (IdStatus, String)> {
        self.map_err(|e| (status_of(&e), e.to_string()))
    }
}

fn null(what: &str) -> (IdStatus, String) {
    (IdStatus::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (IdStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), (IdStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_handle<T>(out: *mut *mut T, value: T) -> Result<(), (IdStatus, String)> {
    put(out, Box::into_raw(Box::new(value)), "out")
}

unsafe fn free_handle<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Message of the last failing call on this thread. The pointer stays valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn id_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn id_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn id_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a family member from its JSON description, for example
/// `{"family": "sine-lambda", "lambda": 0.5}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn id_family_from_json(json: *const c_char, out: *mut *mut IdFamily) -> IdStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|_| (IdStatus::InvalidArgument, "json is not UTF-8".to_string()))?;
        let fam: EntireFamily =
            serde_json::from_str(text).map_err(|e| (IdStatus::InvalidArgument, e.to_string()))?;
        fam.validate().ffi()?;
        put_handle(out, IdFamily(fam))
    })
}

/// `f_λ(z) = λ·e^z`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn id_family_new_exp(lambda: IdComplex, out: *mut *mut IdFamily) -> IdStatus {
    guard(|| {
        let fam = EntireFamily::ExpLambda { lambda: lambda.into() };
        fam.validate().ffi()?;
        put_handle(out, IdFamily(fam))
    })
}

/// `f_λ(z) = λ·sin z` for real `0 < λ < 1`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn id_family_new_sine(lambda: f64, out: *mut *mut IdFamily) -> IdStatus {
    guard(|| {
        let fam = EntireFamily::SineLambda { lambda };
        fam.validate().ffi()?;
        put_handle(out, IdFamily(fam))
    })
}

/// Value and derivative at `z`. Either output may be null.
///
/// # Safety
/// `h` must be a live handle; non-null outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn id_family_eval(
    h: *const IdFamily,
    z: IdComplex,
    value: *mut IdComplex,
    derivative: *mut IdComplex,
) -> IdStatus {
    guard(|| {
        let (v, d) = deref(h, "handle")?.0.eval(z.into()).ffi()?;
        if !value.is_null() {
            value.write(v.into());
        }
        if !derivative.is_null() {
            derivative.write(d.into());
        }
        Ok(())
    })
}

/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn id_family_free(h: *mut IdFamily) {
    free_handle(h)
}

/// `e^{iφ}·∏ (z − a_k)/(1 − conj(a_k)·z)` over `n` zeros inside the disc.
///
/// # Safety
/// `zeros` must point to `n` values (or be null when `n == 0`); `out` must
/// be writable.
#[no_mangle]
pub unsafe extern "C" fn id_blaschke_new(
    phase: f64,
    zeros: *const IdComplex,
    n: usize,
    out: *mut *mut IdBlaschke,
) -> IdStatus {
    guard(|| {
        let zs: Vec<CPoint> = if n == 0 {
            Vec::new()
        } else {
            if zeros.is_null() {
                return Err(null("zeros"));
            }
            std::slice::from_raw_parts(zeros, n).iter().map(|&z| z.into()).collect()
        };
        let b = FiniteBlaschke::new(phase, zs).ffi()?;
        put_handle(out, IdBlaschke(b))
    })
}

/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn id_blaschke_eval(h: *const IdBlaschke, z: IdComplex, out: *mut IdComplex) -> IdStatus {
    guard(|| {
        let v = deref(h, "handle")?.0.eval(z.into());
        put(out, v.into(), "out")
    })
}

/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn id_blaschke_derivative(
    h: *const IdBlaschke,
    z: IdComplex,
    out: *mut IdComplex,
) -> IdStatus {
    guard(|| {
        let v = deref(h, "handle")?.0.derivative(z.into());
        put(out, v.into(), "out")
    })
}

/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn id_blaschke_free(h: *mut IdBlaschke) {
    free_handle(h)
}

/// `e^{iσ}·exp(m·(z − 1)/(z + 1))`: one atom of mass `m` at −1.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn id_inner_exponential_form(mass: f64, sigma: f64, out: *mut *mut IdInner) -> IdStatus {
    guard(|| {
        let g = AtomicInnerFunction::exponential_form(mass, sigma).ffi()?;
        put_handle(out, IdInner(g))
    })
}

/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn id_inner_eval(h: *const IdInner, z: IdComplex, out: *mut IdComplex) -> IdStatus {
    guard(|| {
        let v = deref(h, "handle")?.0.eval(z.into()).ffi()?;
        put(out, v.into(), "out")
    })
}

/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn id_inner_free(h: *mut IdInner) {
    free_handle(h)
}

/// `a·tan z + b` with `a > 0` and `b` in `[−π/2, π/2]`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn id_tan_new(a: f64, b: f64, out: *mut *mut IdTan) -> IdStatus {
    guard(|| {
        let g = TanFamily::new(a, b).ffi()?;
        put_handle(out, IdTan(g))
    })
}

/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn id_tan_eval(h: *const IdTan, z: IdComplex, out: *mut IdComplex) -> IdStatus {
    guard(|| {
        let v = deref(h, "handle")?.0.eval(z.into()).ffi()?;
        put(out, v.into(), "out")
    })
}

/// Locates and classifies the fixed point that governs the dynamics.
///
/// # Safety
/// `h` must be a live handle; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn id_tan_classify(
    h: *const IdTan,
    class: *mut IdFixedPointClass,
    location: *mut IdComplex,
    multiplier: *mut IdComplex,
) -> IdStatus {
    guard(|| {
        let rec = classify_tan_family(&deref(h, "handle")?.0).ffi()?;
        let code = match rec.class {
            FixedPointClass::AttractingInterior => IdFixedPointClass::AttractingInterior,
            FixedPointClass::AttractingBoundary => IdFixedPointClass::AttractingBoundary,
            FixedPointClass::Parabolic { .. } => IdFixedPointClass::Parabolic,
            FixedPointClass::Repelling => IdFixedPointClass::Repelling,
        };
        put(class, code, "class")?;
        put(location, rec.location.into(), "location")?;
        put(multiplier, rec.multiplier.into(), "multiplier")
    })
}

/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn id_tan_free(h: *mut IdTan) {
    free_handle(h)
}

/// Multiplier `λ(τ)` at 0 of the sine-family Blaschke product with zero
/// spacing parameter `τ > 1`; it equals the `λ` of the matching `λ·sin z`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn id_sine_lambda_of_tau(tau: f64, out: *mut f64) -> IdStatus {
    guard(|| put(out, lambda_of_tau(tau).ffi()?, "out"))
}

/// Inverse of [`id_sine_lambda_of_tau`].
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn id_sine_tau_of_lambda(lambda: f64, out: *mut f64) -> IdStatus {
    guard(|| put(out, tau_of_lambda(lambda).ffi()?, "out"))
}

/// Runs a named check. `param` is `τ` for `exp`, `λ` for `sine` and
/// `fatou`, `d` for `lambda0` and ignored otherwise; NaN selects the
/// default. The tract raster of `sine` is skipped.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn id_verify(name: *const c_char, param: f64, out: *mut *mut IdReport) -> IdStatus {
    guard(|| {
        if name.is_null() {
            return Err(null("name"));
        }
        let name = CStr::from_ptr(name).to_str().unwrap_or("");
        let or = |d: f64| if param.is_nan() { d } else { param };
        let report = match name {
            "exp" => verify_exp_pairing(CPoint::new(or(0.5), 0.0)),
            "parabolic-tan" => verify_parabolic_tan(),
            "sine" => verify_sine_pairing_with(
                or(0.5),
                &SineOptions {
                    tract_resolution: 0,
                    ..SineOptions::default()
                },
            ),
            "fatou" => verify_fatou_pairing(or(1.0)),
            "topfer" => verify_topfer(),
            "lambda0" => {
                let d = or(2.0);
                if d.fract() != 0.0 || !(2.0..=1e6).contains(&d) {
                    return Err((IdStatus::InvalidArgument, format!("degree must be an integer ≥ 2, got {d}")));
                }
                verify_lambda0(d as u32)
            }
            "unisingular-forms" => verify_unisingular_forms(),
            other => return Err((IdStatus::InvalidArgument, format!("unknown check {other:?}"))),
        }
        .ffi()?;
        put_handle(out, IdReport(report))
    })
}

/// 1 when every row passed, 0 otherwise (also for a null handle).
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn id_report_all_pass(h: *const IdReport) -> i32 {
    h.as_ref().map_or(0, |r| i32::from(r.0.all_pass()))
}

/// Number of rows (0 for a null handle).
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn id_report_row_count(h: *const IdReport) -> usize {
    h.as_ref().map_or(0, |r| r.0.rows.len())
}

/// The report as JSON; release with [`id_string_free`]. Null on failure.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn id_report_json(h: *const IdReport) -> *mut c_char {
    match h.as_ref() {
        Some(r) => CString::new(r.0.to_json()).map_or(ptr::null_mut(), CString::into_raw),
        None => {
            set_error("handle is null");
            ptr::null_mut()
        }
    }
}

/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn id_report_free(h: *mut IdReport) {
    free_handle(h)
}
