//! Direct numerical evaluation of the determinant integrals
//!
//! ```text
//! log det P_{2k}(d) = (-1)^{(d-1)/2+k} / 2^{d-1}
//!     int_0^inf pi/(x^2+pi^2) sinh(x/2) sinh(kx) / cosh^{d+1}(x/2) dx
//! ```
//!
//! and of the single factors `log det(B^2 - alpha_j^2)`, `alpha_j = j + 1/2`.
//!
//! Every integrand is written as `pi/(x^2+pi^2) * g(x)` with `|g(x)| <= e^{-a x}`
//! and `g` evaluated in terms of `q = e^{-x}`, so nothing overflows for any
//! `x`. The semi-infinite range is cut at `X` where the analytic tail bound
//! `pi e^{-aX} / (a (X^2 + pi^2))` drops below a tenth of the tolerance.

mod gauss_kronrod;
mod tanh_sinh;

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{validate_sphere, GjmsError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    #[default]
    GaussKronrod,
    TanhSinh,
}

impl std::str::FromStr for Scheme {
    type Err = GjmsError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gk" | "gauss-kronrod" => Ok(Scheme::GaussKronrod),
            "ts" | "tanh-sinh" => Ok(Scheme::TanhSinh),
            other => Err(GjmsError::InvalidArgument(format!(
                "unknown scheme {other:?}"
            ))),
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Scheme::GaussKronrod => "gauss-kronrod",
            Scheme::TanhSinh => "tanh-sinh",
        })
    }
}

/// Smallest accepted absolute tolerance.
pub const MIN_ABS_TOL: f64 = 1e-14;

/// Width of the initial panels on `[0, X]`; comparable to the distance of
/// the nearest complex singularity (`x = i pi`).
const PANEL_WIDTH: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub scheme: Scheme,
    pub max_evals: usize,
    /// Upper cut-off; `None` picks it from the tail bound.
    pub truncation_x: Option<f64>,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            scheme: Scheme::GaussKronrod,
            max_evals: 500_000,
            truncation_x: None,
        }
    }
}

impl QuadratureConfig {
    pub fn with_scheme(scheme: Scheme) -> Self {
        Self {
            scheme,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.abs_tol.is_nan() || self.abs_tol < MIN_ABS_TOL || self.abs_tol.is_infinite() {
            return Err(GjmsError::InvalidArgument(format!(
                "abs_tol must be a finite value >= {MIN_ABS_TOL:e}, got {}",
                self.abs_tol
            )));
        }
        if self.max_evals == 0 {
            return Err(GjmsError::InvalidArgument(
                "max_evals must be positive".into(),
            ));
        }
        if let Some(x) = self.truncation_x {
            if x.is_nan() || x <= 0.0 || x.is_infinite() {
                return Err(GjmsError::InvalidArgument(format!(
                    "truncation_x must be positive, got {x}"
                )));
            }
        }
        Ok(())
    }
}

/// Sphere dimension `d`, operator order `k` and optional factor index `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SphereOperatorSpec {
    pub d: i64,
    pub k: i64,
    pub j: Option<i64>,
}

impl SphereOperatorSpec {
    pub fn operator(d: i64, k: i64) -> Result<Self> {
        validate_sphere(d, k)?;
        Ok(Self { d, k, j: None })
    }

    /// Factor `B^2 - alpha_j^2` on the `d`-sphere; convergent when `2(j+1) <= d`.
    pub fn factor(d: i64, j: i64) -> Result<Self> {
        validate_sphere(d, 1)?;
        if j < 0 || 2 * (j + 1) > d {
            return Err(GjmsError::DivergentFactor { d, j });
        }
        Ok(Self {
            d,
            k: j + 1,
            j: Some(j),
        })
    }

    pub fn alpha(&self) -> Option<f64> {
        self.j.map(|j| j as f64 + 0.5)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// Result of a determinant quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    /// Quadrature error estimate plus the truncated tail bound.
    pub error_estimate: f64,
    pub evaluations: usize,
    pub truncation_x: f64,
}

fn cauchy_weight(x: f64) -> f64 {
    PI / (x * x + PI * PI)
}

/// `1 - e^{-x}` and friends without cancellation near zero.
fn one_minus_exp_neg(x: f64) -> f64 {
    -(-x).exp_m1()
}

/// `sinh(x/2) sinh(kx) / cosh^{d+1}(x/2) = 2^{d-1} * main_scaled(x)`.
fn main_scaled(x: f64, d: i64, k: i64) -> f64 {
    let q = (-x).exp();
    let rate = k as f64 - d as f64 / 2.0;
    (rate * x).exp() * one_minus_exp_neg(x) * one_minus_exp_neg(2.0 * k as f64 * x)
        / (1.0 + q).powi(d as i32 + 1)
}

/// `sinh(x/2) sinh(alpha_j x) / cosh^d(x/2) = 2^{d-2} * factor_scaled(x)`.
fn factor_scaled(x: f64, d: i64, j: i64) -> f64 {
    let q = (-x).exp();
    let rate = (j + 1) as f64 - d as f64 / 2.0;
    (rate * x).exp() * one_minus_exp_neg(x) * one_minus_exp_neg((2 * j + 1) as f64 * x)
        / (1.0 + q).powi(d as i32)
}

/// `sech(x/2)` as `2 e^{-x/2} / (1 + e^{-x})`.
fn sech_half(x: f64) -> f64 {
    2.0 * (-0.5 * x).exp() / (1.0 + (-x).exp())
}

/// `tanh^2(x/2) U_{2k-1}(cosh(x/2)) sech^{2k-1}(x/2) sech^{d-2k}(x/2)`, with
/// `U_n(c) / c^n` run through `V_{n+1} = 2 V_n - sech^2 V_{n-1}`.
fn chebyshev_scaled(x: f64, d: i64, k: i64) -> f64 {
    let y = sech_half(x);
    let y2 = y * y;
    let (mut prev, mut cur) = (1.0, 2.0);
    for _ in 1..(2 * k - 1) {
        let next = 2.0 * cur - y2 * prev;
        prev = cur;
        cur = next;
    }
    let t = (0.5 * x).tanh();
    t * t * cur * y.powi((d - 2 * k) as i32)
}

/// `pi/(x^2+pi^2) * sinh(x/2) sinh(kx) / cosh^{d+1}(x/2)`, overflow-safe.
pub fn integrand_main(x: f64, d: i64, k: i64) -> f64 {
    cauchy_weight(x) * 2f64.powi(d as i32 - 1) * main_scaled(x, d, k)
}

/// The same integrand through `sinh(kx)/sinh(x/2) = U_{2k-1}(cosh(x/2))`:
/// `pi/(x^2+pi^2) * sinh^2(x/2) U_{2k-1}(cosh(x/2)) / cosh^{d+1}(x/2)`.
pub fn integrand_chebyshev(x: f64, d: i64, k: i64) -> f64 {
    cauchy_weight(x) * chebyshev_scaled(x, d, k)
}

/// `(-1)^j pi/(x^2+pi^2) * sinh(x/2) sinh(alpha_j x) / cosh^d(x/2)`.
pub fn integrand_factor(x: f64, d: i64, j: i64) -> f64 {
    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
    sign * cauchy_weight(x) * 2f64.powi(d as i32 - 2) * factor_scaled(x, d, j)
}

/// Smallest `X` (on a 1/8 grid) with `pi e^{-aX} / (a (X^2+pi^2)) < target`.
pub fn auto_truncation(decay: f64, target: f64) -> f64 {
    let tail = |x: f64| PI * (-decay * x).exp() / (decay * (x * x + PI * PI));
    let mut hi = 1.0;
    while tail(hi) >= target {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    while hi - lo > 0.125 {
        let mid = 0.5 * (lo + hi);
        if tail(mid) >= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

fn run_scheme<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    panels: usize,
    tol: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    match cfg.scheme {
        Scheme::GaussKronrod => gauss_kronrod::integrate(f, a, b, panels, tol, cfg.max_evals),
        Scheme::TanhSinh => tanh_sinh::integrate(f, a, b, panels, tol, cfg.max_evals),
    }
}

/// `int_0^inf pi/(x^2+pi^2) g(x) dx` for `|g(x)| <= e^{-decay x}`.
///
/// With `decay <= 0` only `|g| <= 1` is assumed and the integrand decays like
/// `1/x^2`; the substitution `x = pi tan(theta)` then maps the whole range to
/// `[0, pi/2)` exactly.
fn integrate_weighted<G: Fn(f64) -> f64>(
    g: G,
    decay: f64,
    cfg: &QuadratureConfig,
) -> Result<QuadResult> {
    cfg.validate()?;
    if decay <= 0.0 {
        let h = |theta: f64| g(PI * theta.tan());
        let est = run_scheme(&h, 0.0, FRAC_PI_2, 4, cfg.abs_tol, cfg)?;
        return Ok(QuadResult {
            value: est.value,
            error_estimate: est.error,
            evaluations: est.evaluations,
            truncation_x: f64::INFINITY,
        });
    }
    let (x_max, tail) = match cfg.truncation_x {
        Some(x) => (x, PI * (-decay * x).exp() / (decay * (x * x + PI * PI))),
        None => {
            let x = auto_truncation(decay, cfg.abs_tol / 10.0);
            (x, PI * (-decay * x).exp() / (decay * (x * x + PI * PI)))
        }
    };
    let panels = (x_max / PANEL_WIDTH).ceil().max(1.0) as usize;
    let budget = (cfg.abs_tol - tail).max(cfg.abs_tol / 10.0);
    let f = |x: f64| cauchy_weight(x) * g(x);
    let est = run_scheme(&f, 0.0, x_max, panels, budget, cfg)?;
    Ok(QuadResult {
        value: est.value,
        error_estimate: est.error + tail,
        evaluations: est.evaluations,
        truncation_x: x_max,
    })
}

fn sign_of(e: i64) -> f64 {
    if e.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Numeric `log det P_{2k}(d)`.
pub fn logdet_quadrature(d: i64, k: i64, cfg: &QuadratureConfig) -> Result<QuadResult> {
    let spec = SphereOperatorSpec::operator(d, k)?;
    let decay = spec.d as f64 / 2.0 - spec.k as f64;
    let sign = sign_of((d - 1) / 2 + k);
    let mut r = integrate_weighted(|x| main_scaled(x, d, k), decay, cfg)?;
    r.value *= sign;
    Ok(r)
}

/// Numeric `log det P_{2k}(d)` through the Chebyshev form of the integrand.
pub fn logdet_quadrature_chebyshev(d: i64, k: i64, cfg: &QuadratureConfig) -> Result<QuadResult> {
    let spec = SphereOperatorSpec::operator(d, k)?;
    let decay = spec.d as f64 / 2.0 - spec.k as f64;
    let sign = sign_of((d - 1) / 2 + k);
    let scale = 2f64.powi(1 - d as i32);
    let mut r = integrate_weighted(|x| scale * chebyshev_scaled(x, d, k), decay, cfg)?;
    r.value *= sign;
    Ok(r)
}

/// Numeric `log det(B^2 - alpha_j^2)` on the `d`-sphere.
pub fn logdet_factor_quadrature(d: i64, j: i64, cfg: &QuadratureConfig) -> Result<QuadResult> {
    let spec = SphereOperatorSpec::factor(d, j)?;
    let decay = spec.d as f64 / 2.0 - (j + 1) as f64;
    let sign = sign_of((d + 1) / 2 + j);
    let mut r = integrate_weighted(|x| factor_scaled(x, d, j), decay, cfg)?;
    r.value *= sign;
    Ok(r)
}

/// Sum of the `k` factor quadratures.
pub fn logdet_factor_sum(d: i64, k: i64, cfg: &QuadratureConfig) -> Result<QuadResult> {
    validate_sphere(d, k)?;
    let mut total = QuadResult {
        value: 0.0,
        error_estimate: 0.0,
        evaluations: 0,
        truncation_x: 0.0,
    };
    for j in 0..k {
        let r = logdet_factor_quadrature(d, j, cfg)?;
        total.value += r.value;
        total.error_estimate += r.error_estimate;
        total.evaluations += r.evaluations;
        total.truncation_x = total.truncation_x.max(r.truncation_x);
    }
    Ok(total)
}

/// `f_m = int_0^inf dx / ((x^2+pi^2) cosh^m(x/2))`. `m = 0` exercises the
/// algebraically decaying path.
pub fn f_quadrature(m: u32, cfg: &QuadratureConfig) -> Result<QuadResult> {
    let decay = f64::from(m) / 2.0;
    let mut r = integrate_weighted(|x| sech_half(x).powi(m as i32), decay, cfg)?;
    r.value /= PI;
    r.error_estimate /= PI;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_main(x: f64, d: i64, k: i64) -> f64 {
        PI / (x * x + PI * PI) * (x / 2.0).sinh() * (k as f64 * x).sinh()
            / (x / 2.0).cosh().powi(d as i32 + 1)
    }

    #[test]
    fn integrand_at_one() {
        // Naive hyperbolic evaluation is exact enough at x = 1.
        let oracle = naive_main(1.0, 3, 1);
        assert!((oracle - 0.109_472_553_601_367_41).abs() < 1e-15);
        assert!((integrand_main(1.0, 3, 1) - oracle).abs() < 1e-15);
    }

    #[test]
    fn integrand_matches_naive_form_where_naive_is_safe() {
        for d in (3..=13).step_by(2) {
            for k in 1..=(d - 1) / 2 {
                for &x in &[1e-3, 0.1, 0.7, 2.0, 5.0, 20.0, 60.0] {
                    let a = integrand_main(x, d, k);
                    let b = naive_main(x, d, k);
                    assert!((a - b).abs() <= 1e-13 * b.abs(), "d={d} k={k} x={x}");
                }
            }
        }
    }

    #[test]
    fn integrand_small_x_is_quadratic() {
        let x = 1e-6;
        let expected = (1.0 / PI) * (x / 2.0) * (2.0 * x);
        assert!((integrand_main(x, 5, 2) / expected - 1.0).abs() < 1e-6);
    }

    #[test]
    fn integrand_survives_huge_x() {
        for &x in &[700.0, 800.0, 5_000.0, 10_000.0] {
            for (d, k) in [(3, 1), (13, 6), (35, 17)] {
                let v = integrand_main(x, d, k);
                assert!(v.is_finite() && v >= 0.0);
                let bound = 2f64.powi(d as i32 - 1) * ((k as f64 - d as f64 / 2.0) * x).exp();
                assert!(v <= bound);
                assert!(integrand_chebyshev(x, d, k).is_finite());
                assert!(integrand_factor(x, d, 0).is_finite());
            }
        }
    }

    #[test]
    fn chebyshev_form_agrees_pointwise() {
        for d in (3..=21).step_by(2) {
            for k in 1..=(d - 1) / 2 {
                let mut x = 1e-3;
                while x <= 50.0 {
                    let a = integrand_main(x, d, k);
                    let b = integrand_chebyshev(x, d, k);
                    assert!(
                        (a - b).abs() <= 1e-13 * a.abs(),
                        "d={d} k={k} x={x}: {a} {b}"
                    );
                    x *= 1.37;
                }
            }
        }
    }

    #[test]
    fn factor_integrand_matches_naive() {
        for (d, j) in [(3, 0), (7, 1), (9, 3), (13, 5)] {
            let alpha = j as f64 + 0.5;
            for &x in &[0.01, 0.5, 3.0, 30.0] {
                let naive =
                    sign_of(j) * PI / (x * x + PI * PI) * (x / 2.0).sinh() * (alpha * x).sinh()
                        / (x / 2.0).cosh().powi(d as i32);
                let v = integrand_factor(x, d, j);
                assert!((v - naive).abs() <= 1e-13 * naive.abs());
            }
        }
    }

    #[test]
    fn truncation_meets_target() {
        for &(a, t) in &[(0.5, 1e-13), (1.5, 1e-13), (6.0, 1e-10)] {
            let x = auto_truncation(a, t);
            let tail = PI * (-a * x).exp() / (a * (x * x + PI * PI));
            assert!(tail < t);
        }
    }

    #[test]
    fn config_validation() {
        let mut cfg = QuadratureConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.abs_tol = 1e-15;
        assert!(cfg.validate().is_err());
        cfg.abs_tol = 1e-10;
        cfg.truncation_x = Some(-1.0);
        assert!(cfg.validate().is_err());
        assert_eq!("tanh-sinh".parse::<Scheme>().unwrap(), Scheme::TanhSinh);
        assert!("simpson".parse::<Scheme>().is_err());
    }

    #[test]
    fn worked_values() {
        let cfg = QuadratureConfig::default();
        let p = logdet_quadrature(3, 1, &cfg).unwrap();
        assert!((p.value - 0.127_614_109_552_396_4).abs() < 1e-11);
        let p = logdet_quadrature(7, 2, &cfg).unwrap();
        assert!((p.value - -0.008_296_659_616_355_105).abs() < 1e-11);
        let p = logdet_quadrature(9, 3, &cfg).unwrap();
        assert!((p.value - -0.005_894_056_953_609_009).abs() < 1e-11);
    }

    #[test]
    fn factor_values() {
        let cfg = QuadratureConfig::default();
        let single = logdet_factor_quadrature(3, 0, &cfg).unwrap().value;
        assert!((single - logdet_quadrature(3, 1, &cfg).unwrap().value).abs() < 1e-12);
        let sum = logdet_factor_sum(5, 2, &cfg).unwrap().value;
        assert!((sum - 0.104_642_144_105_807_92).abs() < 1e-11);
    }

    #[test]
    fn f_integrals() {
        let cfg = QuadratureConfig::default();
        assert!((f_quadrature(0, &cfg).unwrap().value - 0.5).abs() < 1e-12);
        assert!((f_quadrature(1, &cfg).unwrap().value - 2f64.ln() / PI).abs() < 1e-12);
        assert!((f_quadrature(4, &cfg).unwrap().value - 11.0 / 90.0).abs() < 1e-12);
        let ts = QuadratureConfig::with_scheme(Scheme::TanhSinh);
        assert!((f_quadrature(0, &ts).unwrap().value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn divergent_and_invalid_inputs() {
        let cfg = QuadratureConfig::default();
        assert_eq!(
            logdet_quadrature(5, 3, &cfg).unwrap_err(),
            GjmsError::Divergent { d: 5, k: 3 }
        );
        assert_eq!(
            logdet_quadrature(6, 1, &cfg).unwrap_err(),
            GjmsError::EvenDimension { d: 6 }
        );
        assert_eq!(
            logdet_factor_quadrature(5, 2, &cfg).unwrap_err(),
            GjmsError::DivergentFactor { d: 5, j: 2 }
        );
        assert!(logdet_factor_quadrature(5, -1, &cfg).is_err());
    }
}
