//! Central factorial coefficients of the first kind.
//!
//! `x^{[n]} = x * prod_{i=1}^{n-1} (x + n/2 - i) = sum_k t(n, k) x^k`.
//!
//! The odd-odd coefficients are Nörlund numbers in disguise:
//! `t(2m+1, 2n+1) = 2^{2(n-m)} C(2m, 2n) D^{(2m+1)}_{2m-2n}`. This module
//! checks that identity and uses it to rebuild `f_{2m+1}` from central
//! differences of zero, independently of the residue derivation.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_traits::{One, Zero};

use crate::exact::{binomial, factorial, int, neg_one_pow, pow2, ratio, BigRational};
use crate::expr::{Atom, ZetaExpr};
use crate::norlund::d_norlund;

/// Coefficients of `x^{[n]}`, indexed by power of `x`.
#[derive(Debug, Default, Clone)]
pub struct CentralCoeffTable {
    polys: HashMap<u32, Vec<BigRational>>,
}

impl CentralCoeffTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Monomial coefficients of `x^{[n]}` (length `n + 1`).
    pub fn polynomial(&mut self, n: u32) -> &[BigRational] {
        assert!(n >= 1, "central factorial degree must be positive");
        self.polys.entry(n).or_insert_with(|| expand(n))
    }

    pub fn get(&mut self, n: u32, k: u32) -> BigRational {
        if k > n {
            return BigRational::zero();
        }
        self.polynomial(n)[k as usize].clone()
    }
}

/// Direct expansion of `x * prod_{i=1}^{n-1} (x + n/2 - i)`.
fn expand(n: u32) -> Vec<BigRational> {
    let mut poly = vec![BigRational::zero(), BigRational::one()];
    for i in 1..n {
        let shift = ratio(i64::from(n), 2) - int(i64::from(i));
        let mut next = vec![BigRational::zero(); poly.len() + 1];
        for (p, c) in poly.iter().enumerate() {
            next[p + 1] += c;
            next[p] += c * &shift;
        }
        poly = next;
    }
    poly
}

fn shared_table() -> &'static RwLock<CentralCoeffTable> {
    static TABLE: OnceLock<RwLock<CentralCoeffTable>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(CentralCoeffTable::new()))
}

/// `t(n, k)`: coefficient of `x^k` in `x^{[n]}`; zero for `k > n`.
pub fn central_t(n: u32, k: u32) -> BigRational {
    {
        let table = shared_table().read().expect("central table poisoned");
        if let Some(p) = table.polys.get(&n) {
            return p.get(k as usize).cloned().unwrap_or_else(BigRational::zero);
        }
    }
    shared_table()
        .write()
        .expect("central table poisoned")
        .get(n, k)
}

/// Central difference of zero `D^k 0^{[n]} = k! t(n, k)`.
pub fn central_difference_of_zero(n: u32, k: u32) -> BigRational {
    int(factorial(u64::from(k))) * central_t(n, k)
}

/// Which upper index the Nörlund side of the identity uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NorlundUpperIndex {
    /// `D^{(2m+1)}_{2m-2n}`: the identity that holds.
    Odd,
    /// `D^{(m)}_{2m-2n}`: a variant that fails already at `(m, n) = (1, 0)`.
    Half,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    pub m: u32,
    pub n: u32,
    pub central: BigRational,
    pub norlund_side: BigRational,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub upper_index: NorlundUpperIndex,
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.checks.iter().filter(|c| !c.holds)
    }
}

/// Check `t(2m+1, 2n+1) = 2^{2(n-m)} C(2m, 2n) D^{(.)}_{2m-2n}` exactly for
/// all `0 <= n <= m <= m_max`. Failures are reported, not raised.
pub fn verify_norlund_identity(m_max: u32, upper_index: NorlundUpperIndex) -> IdentityReport {
    let mut checks = Vec::new();
    for m in 0..=m_max {
        for n in 0..=m {
            let central = central_t(2 * m + 1, 2 * n + 1);
            let upper = match upper_index {
                NorlundUpperIndex::Odd => 2 * m + 1,
                NorlundUpperIndex::Half => m,
            };
            // D^{(0)} is the constant series 1.
            let d = if upper == 0 {
                if m == n {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            } else {
                d_norlund(upper, (m - n) as usize)
            };
            let norlund_side = pow2(2 * (i64::from(n) - i64::from(m)))
                * int(binomial(2 * u64::from(m), 2 * i64::from(n)))
                * d;
            let holds = central == norlund_side;
            checks.push(IdentityCheck {
                m,
                n,
                central,
                norlund_side,
                holds,
            });
        }
    }
    IdentityReport {
        upper_index,
        checks,
    }
}

/// `f_{2m+1}` from central differences of zero:
///
/// ```text
/// (-1)^m sum_{n=0}^{m} (-1)^n 2^{2(m-n)} D^{2n+1} 0^{[2m+1]}
///         / ((2m)! (2n+1) pi^{2n+1}) * c_n
/// ```
///
/// with `c_0 = log 2` and `c_n = (1 - 2^{-2n}) zeta(2n+1)` for `n >= 1`.
/// The `log 2` term carries the same prefactor as the zeta terms, which is the
/// normalisation that agrees with the residue form at `m = 0` and `m = 1`.
pub fn f_odd_central(m: u32) -> ZetaExpr {
    let order = 2 * m + 1;
    let two_m_fact = int(factorial(2 * u64::from(m)));
    let mut out = ZetaExpr::zero();
    for n in 0..=m {
        let diff = central_difference_of_zero(order, 2 * n + 1);
        let c = neg_one_pow(i64::from(m + n)) * pow2(2 * (i64::from(m) - i64::from(n))) * diff
            / (&two_m_fact * int(i64::from(2 * n + 1)));
        let pi_pow = -(2 * n as i32 + 1);
        if n == 0 {
            out.add_term(Atom::Log2, pi_pow, c);
        } else {
            let weight = BigRational::one() - pow2(-2 * i64::from(n));
            out.add_term(Atom::Zeta(2 * n + 1), pi_pow, c * weight);
        }
    }
    out
}
