//! Grid computations shared by the CLI and the test suites: the three-way
//! cross-check matrix and the logdet sweeps over `k` or `d`.
//!
//! Cells are independent and evaluated with rayon; results always come back
//! ordered by `(d, k)`.

use rayon::prelude::*;

use crate::closed_form::logdet_gjms;
use crate::error::{validate_sphere, GjmsError, Result};
use crate::precision::{evaluate, HighPrecision, PrecisionContext};
use crate::product_rules::logdet_via_product;
use crate::quadrature::{logdet_factor_sum, logdet_quadrature, QuadratureConfig};

/// Default pass bar for the cross-check.
pub const CROSSCHECK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct CrossCheckRow {
    pub d: i64,
    pub k: i64,
    pub closed_form: f64,
    pub quadrature: f64,
    pub product_rule: f64,
    pub factor_sum: f64,
    /// Whether the product-rule expression equals the closed form exactly.
    pub exact_match: bool,
}

impl CrossCheckRow {
    pub fn max_deviation(&self) -> f64 {
        let v = [
            self.closed_form,
            self.quadrature,
            self.product_rule,
            self.factor_sum,
        ];
        let mut worst = 0f64;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                worst = worst.max((v[i] - v[j]).abs());
            }
        }
        worst
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.exact_match && self.max_deviation() <= tol
    }
}

/// All valid `(d, k)` with odd `3 <= d <= d_max`, in `(d, k)` order.
pub fn valid_cells(d_max: i64) -> Vec<(i64, i64)> {
    (3..=d_max)
        .step_by(2)
        .flat_map(|d| (1..=(d - 1) / 2).map(move |k| (d, k)))
        .collect()
}

pub fn crosscheck_row(
    d: i64,
    k: i64,
    cfg: &QuadratureConfig,
    ctx: &PrecisionContext,
) -> Result<CrossCheckRow> {
    let closed = logdet_gjms(d, k)?;
    let product = logdet_via_product(d, k)?;
    Ok(CrossCheckRow {
        d,
        k,
        closed_form: evaluate(&closed, ctx).to_f64(),
        quadrature: logdet_quadrature(d, k, cfg)?.value,
        product_rule: evaluate(&product, ctx).to_f64(),
        factor_sum: logdet_factor_sum(d, k, cfg)?.value,
        exact_match: closed == product,
    })
}

/// Cross-check every valid cell with `d <= d_max`.
pub fn crosscheck(
    d_max: i64,
    cfg: &QuadratureConfig,
    ctx: &PrecisionContext,
) -> Result<Vec<CrossCheckRow>> {
    if d_max < 3 || d_max % 2 == 0 {
        return Err(GjmsError::InvalidArgument(format!(
            "d_max must be odd and at least 3, got {d_max}"
        )));
    }
    valid_cells(d_max)
        .into_par_iter()
        .map(|(d, k)| crosscheck_row(d, k, cfg, ctx))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub d: i64,
    pub k: i64,
    pub logdet: HighPrecision,
}

fn sweep_cells(cells: Vec<(i64, i64)>, ctx: &PrecisionContext) -> Result<Vec<SweepPoint>> {
    for &(d, k) in &cells {
        validate_sphere(d, k)?;
    }
    cells
        .into_par_iter()
        .map(|(d, k)| {
            Ok(SweepPoint {
                d,
                k,
                logdet: evaluate(&logdet_gjms(d, k)?, ctx),
            })
        })
        .collect()
}

/// `log det P_{2k}(d)` for fixed `d` and `k_min <= k <= k_max`.
pub fn sweep_fixed_d(
    d: i64,
    k_min: i64,
    k_max: i64,
    ctx: &PrecisionContext,
) -> Result<Vec<SweepPoint>> {
    if k_min > k_max {
        return Err(GjmsError::InvalidArgument(format!(
            "empty k range {k_min}..{k_max}"
        )));
    }
    sweep_cells((k_min..=k_max).map(|k| (d, k)).collect(), ctx)
}

/// `log det P_{2k}(d)` for fixed `k` and odd `d` in `[d_min, d_max]`.
pub fn sweep_fixed_k(
    k: i64,
    d_min: i64,
    d_max: i64,
    ctx: &PrecisionContext,
) -> Result<Vec<SweepPoint>> {
    if d_min % 2 == 0 {
        return Err(GjmsError::EvenDimension { d: d_min });
    }
    if d_min > d_max {
        return Err(GjmsError::InvalidArgument(format!(
            "empty d range {d_min}..{d_max}"
        )));
    }
    sweep_cells((d_min..=d_max).step_by(2).map(|d| (d, k)).collect(), ctx)
}
