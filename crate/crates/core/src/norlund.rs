//! Nörlund numbers `D^{(m)}_{2n} = 2^{2n} B^{(m)}_{2n}(m/2)`.
//!
//! They are the scaled Taylor coefficients of `(t cosec t)^m`:
//!
//! ```text
//! (t / sin t)^m = sum_{n>=0} (-1)^n D^{(m)}_{2n} t^{2n} / (2n)!
//! ```
//!
//! The production path is the composition recursion against the `m = 1`
//! series, whose coefficients are `(2 - 4^j) B_{2j}`. The series-powering
//! route in [`d_norlund_series_oracle`] is a second, independent computation.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exact::{bernoulli, binomial, factorial, int, neg_one_pow, BigRational};

/// Lazily filled table of `D^{(m)}_{2n}`, one row per `m`.
#[derive(Debug, Default, Clone)]
pub struct DTable {
    rows: HashMap<u32, Vec<BigRational>>,
}

impl DTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// `D^{(m)}_{2n}`, computing any missing prefix of row `m`.
    pub fn get(&mut self, m: u32, n: usize) -> BigRational {
        assert!(m >= 1, "Nörlund upper index must be positive");
        let row = self
            .rows
            .entry(m)
            .or_insert_with(|| vec![BigRational::one()]);
        extend_row(row, m, n);
        row[n].clone()
    }

    /// Cached value, if already computed.
    pub fn cached(&self, m: u32, n: usize) -> Option<&BigRational> {
        self.rows.get(&m).and_then(|r| r.get(n))
    }

    /// Row `m` from `n = 0` to `n_max` inclusive.
    pub fn row(&mut self, m: u32, n_max: usize) -> Vec<BigRational> {
        self.get(m, n_max);
        self.rows[&m][..=n_max].to_vec()
    }
}

/// `(2 - 4^j) B_{2j}`, the `m = 1` coefficients.
fn unit_coefficient(j: usize) -> BigRational {
    let four_j = BigInt::one() << (2 * j);
    int(BigInt::from(2) - four_j) * bernoulli(2 * j)
}

fn extend_row(row: &mut Vec<BigRational>, m: u32, n_max: usize) {
    let m1 = i64::from(m) + 1;
    while row.len() <= n_max {
        let n = row.len();
        let mut acc = BigRational::zero();
        for j in 1..=n {
            let weight = m1 * j as i64 - n as i64;
            if weight == 0 {
                continue;
            }
            let c = binomial(2 * n as u64, 2 * j as i64) * weight;
            acc += int(c) * unit_coefficient(j) * &row[n - j];
        }
        row.push(acc / int(n as i64));
    }
}

fn shared_table() -> &'static RwLock<DTable> {
    static TABLE: OnceLock<RwLock<DTable>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(DTable::new()))
}

/// `D^{(m)}_{2n}` from the shared memo table.
pub fn d_norlund(m: u32, n: usize) -> BigRational {
    {
        let table = shared_table().read().expect("norlund table poisoned");
        if let Some(v) = table.cached(m, n) {
            return v.clone();
        }
    }
    shared_table()
        .write()
        .expect("norlund table poisoned")
        .get(m, n)
}

/// Truncated power series in `u = t^2`.
#[derive(Debug, Clone, PartialEq)]
struct EvenSeries(Vec<BigRational>);

impl EvenSeries {
    fn one(len: usize) -> Self {
        let mut c = vec![BigRational::zero(); len];
        c[0] = BigRational::one();
        EvenSeries(c)
    }

    fn mul(&self, other: &Self) -> Self {
        let len = self.0.len();
        let mut out = vec![BigRational::zero(); len];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().take(len - i).enumerate() {
                out[i + j] += a * b;
            }
        }
        EvenSeries(out)
    }
}

/// `t / sin t` through `t^{2 n_max}`, built from Bernoulli numbers:
/// the coefficient of `t^{2n}` is `(-1)^{n+1} (4^n - 2) B_{2n} / (2n)!`.
fn t_over_sin_t(n_max: usize) -> EvenSeries {
    EvenSeries(
        (0..=n_max)
            .map(|n| {
                let four_n = BigInt::one() << (2 * n);
                neg_one_pow(n as i64 + 1) * int(four_n - 2) * bernoulli(2 * n)
                    / int(factorial(2 * n as u64))
            })
            .collect(),
    )
}

/// `D^{(m)}_{2k}` for `k = 0..=n_max` by raising `t / sin t` to the `m`-th
/// power through repeated exact series multiplication.
pub fn d_norlund_series_oracle(m: u32, n_max: usize) -> Vec<BigRational> {
    assert!(m >= 1, "Nörlund upper index must be positive");
    let base = t_over_sin_t(n_max);
    let mut power = EvenSeries::one(n_max + 1);
    for _ in 0..m {
        power = power.mul(&base);
    }
    power
        .0
        .into_iter()
        .enumerate()
        .map(|(n, c)| neg_one_pow(n as i64) * int(factorial(2 * n as u64)) * c)
        .collect()
}
