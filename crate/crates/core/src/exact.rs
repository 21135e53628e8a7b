//! Exact integer and rational arithmetic shared by every other module.
//!
//! `BigRational` is always held in lowest terms with a positive denominator;
//! that normalisation is what `num-rational` guarantees for every constructor
//! except `new_raw`, which is never used here.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub use num_rational::BigRational;

use crate::error::{GjmsError, Result};

/// Binomial coefficient `C(n, k)`; zero when `k < 0` or `k > n`.
pub fn binomial(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// `p / q` as a rational; `q` must be nonzero.
pub fn ratio(p: i64, q: i64) -> BigRational {
    assert!(q != 0, "zero denominator");
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Exact division that reports a zero divisor instead of panicking.
pub fn checked_div(a: &BigRational, b: &BigRational) -> Result<BigRational> {
    if b.is_zero() {
        return Err(GjmsError::DivisionByZero);
    }
    Ok(a / b)
}

/// Parse `"p/q"` or `"p"` into a normalised rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || GjmsError::Parse(format!("not a rational: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(GjmsError::DivisionByZero);
    }
    Ok(BigRational::new(num, den))
}

/// `"p/q"` with an explicit denominator, `"p/1"` for integers.
pub fn format_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Signed power of two as an exact rational.
pub fn pow2(e: i64) -> BigRational {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        int(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

pub fn neg_one_pow(e: i64) -> BigRational {
    if e.is_even() {
        BigRational::one()
    } else {
        -BigRational::one()
    }
}

/// Row state of the Akiyama–Tanigawa triangle, kept so the table can be
/// extended without recomputing earlier rows.
#[derive(Default)]
struct BernoulliMemo {
    values: Vec<BigRational>,
    row: Vec<BigRational>,
}

impl BernoulliMemo {
    fn extend_to(&mut self, n: usize) {
        while self.values.len() <= n {
            let m = self.values.len();
            self.row
                .push(BigRational::new(BigInt::one(), BigInt::from(m + 1)));
            for j in (1..=m).rev() {
                let diff = &self.row[j - 1] - &self.row[j];
                self.row[j - 1] = diff * BigInt::from(j);
            }
            // The triangle yields B_1 = +1/2; flip to the B_1 = -1/2 convention.
            let b = if m == 1 {
                -self.row[0].clone()
            } else {
                self.row[0].clone()
            };
            self.values.push(b);
        }
    }
}

fn bernoulli_memo() -> &'static RwLock<BernoulliMemo> {
    static MEMO: OnceLock<RwLock<BernoulliMemo>> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(BernoulliMemo::default()))
}

/// Bernoulli number `B_n` with `B_1 = -1/2`.
pub fn bernoulli(n: usize) -> BigRational {
    if n > 1 && n % 2 == 1 {
        return BigRational::zero();
    }
    {
        let memo = bernoulli_memo().read().expect("bernoulli memo poisoned");
        if let Some(b) = memo.values.get(n) {
            return b.clone();
        }
    }
    let mut memo = bernoulli_memo().write().expect("bernoulli memo poisoned");
    memo.extend_to(n);
    memo.values[n].clone()
}

/// Sign of a rational as -1, 0 or 1.
pub fn signum(q: &BigRational) -> i32 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Defining recursion `sum_{j=0}^{n} C(n+1, j) B_j = 0`, solved for `B_n`.
    fn bernoulli_by_definition(n_max: usize) -> Vec<BigRational> {
        let mut b: Vec<BigRational> = vec![BigRational::one()];
        for n in 1..=n_max {
            let s: BigRational = (0..n)
                .map(|j| int(binomial(n as u64 + 1, j as i64)) * &b[j])
                .sum();
            b.push(-s / int(n as i64 + 1));
        }
        b
    }

    #[test]
    fn bernoulli_examples() {
        assert_eq!(bernoulli(0), BigRational::one());
        assert_eq!(bernoulli(1), ratio(-1, 2));
        assert_eq!(bernoulli(2), ratio(1, 6));
        assert_eq!(bernoulli(3), BigRational::zero());
        assert_eq!(bernoulli(12), ratio(-691, 2730));
    }

    #[test]
    fn bernoulli_matches_defining_recursion() {
        let oracle = bernoulli_by_definition(40);
        for (n, b) in oracle.iter().enumerate() {
            assert_eq!(&bernoulli(n), b, "B_{n}");
        }
    }

    #[test]
    fn bernoulli_recursion_sum_vanishes() {
        for n in 1..=40usize {
            let s: BigRational = (0..=n)
                .map(|j| int(binomial(n as u64 + 1, j as i64)) * bernoulli(j))
                .sum();
            assert!(s.is_zero(), "n = {n}");
        }
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(7, 0), BigInt::from(1));
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(4, 7), BigInt::zero());
        assert_eq!(binomial(4, -1), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
    }

    #[test]
    fn pascal_identity() {
        for n in 1..=64u64 {
            for k in 1..=n as i64 {
                assert_eq!(
                    binomial(n, k),
                    binomial(n - 1, k - 1) + binomial(n - 1, k),
                    "C({n},{k})"
                );
            }
        }
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(matches!(
            checked_div(&ratio(1, 2), &BigRational::zero()),
            Err(GjmsError::DivisionByZero)
        ));
        assert!(parse_rational("3/0").is_err());
        assert_eq!(parse_rational("-6/4").unwrap(), ratio(-3, 2));
        assert_eq!(parse_rational("5").unwrap(), int(5));
    }

    proptest! {
        #[test]
        fn add_then_subtract_round_trips(a in -10_000i64..10_000, b in 1i64..10_000,
                                         c in -10_000i64..10_000, d in 1i64..10_000) {
            let x = ratio(a, b);
            let y = ratio(c, d);
            prop_assert_eq!(&(&x + &y) - &y, x.clone());
            prop_assert!(x.denom().is_positive());
            prop_assert_eq!(parse_rational(&format_rational(&x)).unwrap(), x);
        }
    }
}
