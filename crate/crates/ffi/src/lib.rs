//! C ABI over `gjms-core`.
//!
//! Exact expressions cross the boundary as an opaque `GjmsExpr` handle.
//! Every fallible function returns a `GjmsStatus`; on failure a message is
//! kept per thread and read back with `gjms_last_error_message`. Strings
//! handed out are owned by the caller and released with `gjms_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use gjms_core::central::central_t;
use gjms_core::closed_form::{f_value, logdet_gjms};
use gjms_core::error::GjmsError;
use gjms_core::expr::ZetaExpr;
use gjms_core::norlund::d_norlund;
use gjms_core::precision::{evaluate, PrecisionContext};
use gjms_core::product_rules::logdet_via_product;
use gjms_core::quadrature::{
    logdet_factor_quadrature, logdet_quadrature, QuadResult, QuadratureConfig, Scheme,
};

/// Opaque exact expression: rational combination of `1`, `log 2` and
/// `zeta(odd)` with integer powers of `pi`.
pub struct GjmsExpr {
    inner: ZetaExpr,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GjmsStatus {
    Ok = 0,
    /// Even dimension, `k < 1`, bad tolerance or similar.
    InvalidArgument = 1,
    /// `2k > d`: the determinant integral diverges.
    Divergent = 2,
    /// Quadrature ran out of evaluations.
    NotConverged = 3,
    NullPointer = 4,
    /// Malformed JSON or UTF-8.
    Parse = 5,
    /// Internal panic caught at the boundary.
    Panic = 6,
}

pub const GJMS_SCHEME_GAUSS_KRONROD: i32 = 0;
pub const GJMS_SCHEME_TANH_SINH: i32 = 1;

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &GjmsError) -> GjmsStatus {
    match e {
        GjmsError::Divergent { .. } | GjmsError::DivergentFactor { .. } => GjmsStatus::Divergent,
        GjmsError::NotConverged { .. } => GjmsStatus::NotConverged,
        GjmsError::Parse(_) => GjmsStatus::Parse,
        _ => GjmsStatus::InvalidArgument,
    }
}

/// Run `f`, translating errors and panics into a status.
fn guard<F>(f: F) -> GjmsStatus
where
    F: FnOnce() -> Result<(), (GjmsStatus, String)>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            GjmsStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            GjmsStatus::Panic
        }
    }
}

fn core_err(e: GjmsError) -> (GjmsStatus, String) {
    (status_of(&e), e.to_string())
}

fn null_err(name: &str) -> (GjmsStatus, String) {
    (GjmsStatus::NullPointer, format!("{name} is null"))
}

fn into_c_string(s: String) -> Result<*mut c_char, (GjmsStatus, String)> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| (GjmsStatus::Parse, "string contains NUL".to_string()))
}

unsafe fn put_expr(out: *mut *mut GjmsExpr, e: ZetaExpr) -> Result<(), (GjmsStatus, String)> {
    if out.is_null() {
        return Err(null_err("out"));
    }
    *out = Box::into_raw(Box::new(GjmsExpr { inner: e }));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), (GjmsStatus, String)> {
    if out.is_null() {
        return Err(null_err("out"));
    }
    *out = into_c_string(s)?;
    Ok(())
}

unsafe fn expr_ref<'a>(e: *const GjmsExpr) -> Result<&'a ZetaExpr, (GjmsStatus, String)> {
    e.as_ref().map(|e| &e.inner).ok_or_else(|| null_err("expr"))
}

/// Exact `log det P_{2k}(d)` from the closed form.
///
/// # Safety
/// `out` must be a valid pointer to writable `GjmsExpr *` storage.
#[no_mangle]
pub unsafe extern "C" fn gjms_logdet_closed_form(
    d: i64,
    k: i64,
    out: *mut *mut GjmsExpr,
) -> GjmsStatus {
    guard(|| put_expr(out, logdet_gjms(d, k).map_err(core_err)?))
}

/// Exact `log det P_{2k}(d)` assembled from the product rule.
///
/// # Safety
/// `out` must be a valid pointer to writable `GjmsExpr *` storage.
#[no_mangle]
pub unsafe extern "C" fn gjms_logdet_via_product(
    d: i64,
    k: i64,
    out: *mut *mut GjmsExpr,
) -> GjmsStatus {
    guard(|| put_expr(out, logdet_via_product(d, k).map_err(core_err)?))
}

/// `f_m = int_0^inf dx / ((x^2 + pi^2) cosh^m(x/2))` as an exact expression.
///
/// # Safety
/// `out` must be a valid pointer to writable `GjmsExpr *` storage.
#[no_mangle]
pub unsafe extern "C" fn gjms_f_value(m: u32, out: *mut *mut GjmsExpr) -> GjmsStatus {
    guard(|| put_expr(out, f_value(m)))
}

/// Parse the JSON form produced by `gjms_expr_to_json`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` as for the constructors.
#[no_mangle]
pub unsafe extern "C" fn gjms_expr_from_json(
    json: *const c_char,
    out: *mut *mut GjmsExpr,
) -> GjmsStatus {
    guard(|| {
        if json.is_null() {
            return Err(null_err("json"));
        }
        let s = CStr::from_ptr(json)
            .to_str()
            .map_err(|_| (GjmsStatus::Parse, "json is not UTF-8".to_string()))?;
        put_expr(out, ZetaExpr::from_json(s).map_err(core_err)?)
    })
}

/// Release an expression. Null is ignored.
///
/// # Safety
/// `expr` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn gjms_expr_free(expr: *mut GjmsExpr) {
    if !expr.is_null() {
        drop(Box::from_raw(expr));
    }
}

/// 1 when equal, 0 when not, -1 if either pointer is null.
///
/// # Safety
/// Non-null arguments must be live handles.
#[no_mangle]
pub unsafe extern "C" fn gjms_expr_equal(a: *const GjmsExpr, b: *const GjmsExpr) -> i32 {
    match (a.as_ref(), b.as_ref()) {
        (Some(a), Some(b)) => i32::from(a.inner == b.inner),
        _ => -1,
    }
}

/// Number of terms after normalisation.
///
/// # Safety
/// `expr` must be a live handle or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn gjms_expr_term_count(expr: *const GjmsExpr) -> usize {
    expr.as_ref().map_or(0, |e| e.inner.len())
}

/// Evaluate to a double, working at `digits` decimal digits (0 selects the
/// default, honouring `GJMS_DIGITS`).
///
/// # Safety
/// `expr` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gjms_expr_evaluate(
    expr: *const GjmsExpr,
    digits: u32,
    out: *mut f64,
) -> GjmsStatus {
    guard(|| {
        let e = expr_ref(expr)?;
        if out.is_null() {
            return Err(null_err("out"));
        }
        *out = evaluate(e, &context(digits)?).to_f64();
        Ok(())
    })
}

/// Decimal string of the value with `significant` digits.
///
/// # Safety
/// `expr` must be a live handle; `out` must be writable. Free the result
/// with `gjms_string_free`.
#[no_mangle]
pub unsafe extern "C" fn gjms_expr_to_decimal(
    expr: *const GjmsExpr,
    significant: u32,
    out: *mut *mut c_char,
) -> GjmsStatus {
    guard(|| {
        let e = expr_ref(expr)?;
        if significant == 0 {
            return Err((
                GjmsStatus::InvalidArgument,
                "significant must be positive".into(),
            ));
        }
        let ctx = context(significant + 10)?;
        put_string(out, evaluate(e, &ctx).to_significant(significant))
    })
}

fn context(digits: u32) -> Result<PrecisionContext, (GjmsStatus, String)> {
    let base = PrecisionContext::from_env().map_err(core_err)?;
    if digits <= base.decimal_digits() {
        Ok(base)
    } else {
        PrecisionContext::new(digits).map_err(core_err)
    }
}

/// `[{"atom": ..., "pi_pow": ..., "coeff": "p/q"}, ...]`.
///
/// # Safety
/// As `gjms_expr_to_decimal`.
#[no_mangle]
pub unsafe extern "C" fn gjms_expr_to_json(
    expr: *const GjmsExpr,
    out: *mut *mut c_char,
) -> GjmsStatus {
    guard(|| put_string(out, expr_ref(expr)?.to_json()))
}

/// # Safety
/// As `gjms_expr_to_decimal`.
#[no_mangle]
pub unsafe extern "C" fn gjms_expr_to_latex(
    expr: *const GjmsExpr,
    out: *mut *mut c_char,
) -> GjmsStatus {
    guard(|| put_string(out, expr_ref(expr)?.to_latex()))
}

/// Plain text form, e.g. `1/4*log(2) - 3/8*zeta(3)/pi^2`.
///
/// # Safety
/// As `gjms_expr_to_decimal`.
#[no_mangle]
pub unsafe extern "C" fn gjms_expr_to_string(
    expr: *const GjmsExpr,
    out: *mut *mut c_char,
) -> GjmsStatus {
    guard(|| put_string(out, expr_ref(expr)?.to_string()))
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn gjms_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

fn quad_config(abs_tol: f64, scheme: i32) -> Result<QuadratureConfig, (GjmsStatus, String)> {
    let scheme = match scheme {
        GJMS_SCHEME_GAUSS_KRONROD => Scheme::GaussKronrod,
        GJMS_SCHEME_TANH_SINH => Scheme::TanhSinh,
        other => {
            return Err((
                GjmsStatus::InvalidArgument,
                format!("unknown scheme {other}"),
            ))
        }
    };
    let cfg = QuadratureConfig {
        abs_tol,
        scheme,
        ..QuadratureConfig::default()
    };
    cfg.validate().map_err(core_err)?;
    Ok(cfg)
}

unsafe fn put_quad(
    r: QuadResult,
    value: *mut f64,
    error_estimate: *mut f64,
) -> Result<(), (GjmsStatus, String)> {
    if value.is_null() {
        return Err(null_err("value"));
    }
    *value = r.value;
    if !error_estimate.is_null() {
        *error_estimate = r.error_estimate;
    }
    Ok(())
}

/// Numeric `log det P_{2k}(d)` by quadrature. `error_estimate` may be null.
///
/// # Safety
/// `value` must be writable; `error_estimate` writable or null.
#[no_mangle]
pub unsafe extern "C" fn gjms_logdet_quadrature(
    d: i64,
    k: i64,
    abs_tol: f64,
    scheme: i32,
    value: *mut f64,
    error_estimate: *mut f64,
) -> GjmsStatus {
    guard(|| {
        let cfg = quad_config(abs_tol, scheme)?;
        put_quad(
            logdet_quadrature(d, k, &cfg).map_err(core_err)?,
            value,
            error_estimate,
        )
    })
}

/// Numeric `log det(B^2 - (j + 1/2)^2)` on the `d`-sphere.
///
/// # Safety
/// As `gjms_logdet_quadrature`.
#[no_mangle]
pub unsafe extern "C" fn gjms_logdet_factor_quadrature(
    d: i64,
    j: i64,
    abs_tol: f64,
    scheme: i32,
    value: *mut f64,
    error_estimate: *mut f64,
) -> GjmsStatus {
    guard(|| {
        let cfg = quad_config(abs_tol, scheme)?;
        put_quad(
            logdet_factor_quadrature(d, j, &cfg).map_err(core_err)?,
            value,
            error_estimate,
        )
    })
}

/// Nörlund number `D^{(m)}_{2n}` as `"p/q"` or `"p"`.
///
/// # Safety
/// `out` must be writable; free the result with `gjms_string_free`.
#[no_mangle]
pub unsafe extern "C" fn gjms_norlund(m: u32, n: u32, out: *mut *mut c_char) -> GjmsStatus {
    guard(|| {
        if m == 0 {
            return Err((GjmsStatus::InvalidArgument, "m must be at least 1".into()));
        }
        put_string(out, d_norlund(m, n as usize).to_string())
    })
}

/// Central factorial coefficient `t(n, k)` as `"p/q"` or `"p"`.
///
/// # Safety
/// As `gjms_norlund`.
#[no_mangle]
pub unsafe extern "C" fn gjms_central_t(n: u32, k: u32, out: *mut *mut c_char) -> GjmsStatus {
    guard(|| {
        if n == 0 {
            return Err((GjmsStatus::InvalidArgument, "n must be at least 1".into()));
        }
        put_string(out, central_t(n, k).to_string())
    })
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn gjms_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn gjms_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}
