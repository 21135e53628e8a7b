//! Exact closed form of `log det P_{2k}` on the odd `d`-sphere.
//!
//! Everything reduces to the integrals
//!
//! ```text
//! f_m = int_0^inf dx / ((x^2 + pi^2) cosh^m(x/2))
//! ```
//!
//! evaluated by residues at `z = (2s+1) pi i`. Even `m` give rationals, odd
//! `m` give `log 2 / pi` plus `zeta(odd) / pi^odd` terms. The eta function
//! here uses the alternating sign convention `eta(s) = sum (-1)^n / n^s`, so
//! `eta(1) = -log 2` and every `eta(l)` is negative.

use num_traits::{One, Zero};

use crate::error::{validate_sphere, Result};
use crate::exact::{binomial, factorial, int, neg_one_pow, pow2, ratio, BigRational};
use crate::expr::{Atom, ZetaExpr};
use crate::norlund::d_norlund;

/// `eta(l)` together with its argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaValue {
    pub argument: u32,
    pub value: ZetaExpr,
}

impl EtaValue {
    pub fn new(argument: u32) -> Self {
        Self {
            argument,
            value: eta_expr(argument),
        }
    }
}

/// `eta(1) = -log 2`, `eta(l) = (2^{1-l} - 1) zeta(l)` for `l > 1`.
///
/// Only odd `l` are representable in the atom basis; even `l > 1` panics.
pub fn eta_expr(l: u32) -> ZetaExpr {
    assert!(l >= 1, "eta argument must be positive");
    if l == 1 {
        return ZetaExpr::term(Atom::Log2, 0, -BigRational::one());
    }
    let atom = Atom::zeta(l).expect("eta is only represented at odd arguments");
    ZetaExpr::term(atom, 0, pow2(1 - i64::from(l)) - BigRational::one())
}

/// `f_{2m} = (1/2) (-1)^m D^{(2m)}_{2m} / (2m)!`, with `f_0 = 1/2`.
pub fn f_even(m: u32) -> BigRational {
    if m == 0 {
        return ratio(1, 2);
    }
    let d = d_norlund(2 * m, m as usize);
    neg_one_pow(i64::from(m)) * d / int(factorial(2 * u64::from(m)) * 2)
}

/// `f_{2m+1} = -sum_{n=0}^{m} (-1)^n D^{(2m+1)}_{2n} / (2n)! * eta(2m-2n+1) / pi^{2m-2n+1}`.
pub fn f_odd(m: u32) -> ZetaExpr {
    let upper = 2 * m + 1;
    (0..=m)
        .map(|n| {
            let c = -neg_one_pow(i64::from(n)) * d_norlund(upper, n as usize)
                / int(factorial(2 * u64::from(n)));
            let l = 2 * (m - n) + 1;
            eta_expr(l).mul_pi_pow(-(l as i32)).scale(&c)
        })
        .sum()
}

/// `f_index` for either parity.
pub fn f_value(index: u32) -> ZetaExpr {
    if index.is_multiple_of(2) {
        ZetaExpr::rational(f_even(index / 2))
    } else {
        f_odd(index / 2)
    }
}

/// Exact `log det P_{2k}(d)` for odd `d >= 3` and `1 <= k`, `2k <= d`:
///
/// ```text
/// (-1)^{(d-1)/2+k} pi / 2^{d-2k} * sum_{j=0}^{k-1} C(2k-1-j, j) (-1/4)^j
///     (f_{d+2j-2k} - f_{d+2+2j-2k})
/// ```
pub fn logdet_gjms(d: i64, k: i64) -> Result<ZetaExpr> {
    validate_sphere(d, k)?;
    let prefactor = neg_one_pow((d - 1) / 2 + k) * pow2(2 * k - d);
    let mut sum = ZetaExpr::zero();
    for j in 0..k {
        let c = int(binomial((2 * k - 1 - j) as u64, j)) * neg_one_pow(j) * pow2(-2 * j);
        if c.is_zero() {
            continue;
        }
        let lo = (d + 2 * j - 2 * k) as u32;
        sum += (f_value(lo) - f_value(lo + 2)).scale(&c);
    }
    Ok(sum.scale(&prefactor).mul_pi_pow(1))
}
