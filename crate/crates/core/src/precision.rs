//! Arbitrary-precision numeric evaluation of [`ZetaExpr`] values.
//!
//! Numbers are binary fixed point: an integer mantissa scaled by `2^-bits`.
//! `pi` comes from Machin's formula, `log 2` from `2 atanh(1/3)` and odd zeta
//! values from Borwein's accelerated alternating series for the conventional
//! (positive) eta function `sum_{n>=1} (-1)^{n-1} n^{-s}`, whose truncation
//! error after `n` terms is at most `3 / (3 + sqrt 8)^n`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{GjmsError, Result};
use crate::exact::BigRational;
use crate::expr::{Atom, ZetaExpr};

/// Environment variable that overrides the default number of decimal digits.
pub const DIGITS_ENV: &str = "GJMS_DIGITS";

pub const DEFAULT_DIGITS: u32 = 50;
pub const MIN_DIGITS: u32 = 15;

const GUARD_BITS: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionContext {
    decimal_digits: u32,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self {
            decimal_digits: DEFAULT_DIGITS,
        }
    }
}

impl PrecisionContext {
    pub fn new(decimal_digits: u32) -> Result<Self> {
        if decimal_digits < MIN_DIGITS {
            return Err(GjmsError::InvalidArgument(format!(
                "precision must be at least {MIN_DIGITS} digits, got {decimal_digits}"
            )));
        }
        Ok(Self { decimal_digits })
    }

    /// Default precision, overridden by `GJMS_DIGITS` when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(DIGITS_ENV) {
            Ok(s) => {
                let d = s.trim().parse().map_err(|_| {
                    GjmsError::InvalidArgument(format!("{DIGITS_ENV}={s:?} is not an integer"))
                })?;
                Self::new(d)
            }
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn decimal_digits(&self) -> u32 {
        self.decimal_digits
    }

    /// Working binary precision: the requested digits plus guard bits.
    pub fn working_bits(&self) -> u32 {
        (f64::from(self.decimal_digits) * std::f64::consts::LOG2_10).ceil() as u32 + GUARD_BITS
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    Nearest,
    TowardZero,
}

/// Fixed-point real `mantissa * 2^-bits`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HighPrecision {
    mantissa: BigInt,
    bits: u32,
}

/// `a / b` rounded to nearest, ties away from zero.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    if (r.abs() << 1u32) >= b.abs() {
        if (a.sign() == Sign::Minus) ^ (b.sign() == Sign::Minus) {
            q - 1
        } else {
            q + 1
        }
    } else {
        q
    }
}

impl HighPrecision {
    pub fn zero(bits: u32) -> Self {
        Self {
            mantissa: BigInt::zero(),
            bits,
        }
    }

    pub fn from_rational(q: &BigRational, bits: u32) -> Self {
        Self {
            mantissa: div_round(&(q.numer() << bits), q.denom()),
            bits,
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn signum(&self) -> i32 {
        match self.mantissa.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Self {
            mantissa: self.mantissa.abs(),
            bits: self.bits,
        }
    }

    /// Exact rational value of the fixed-point number.
    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.mantissa.clone(), BigInt::one() << self.bits)
    }

    pub fn to_f64(&self) -> f64 {
        // Drop low bits first so the conversion never sees huge integers.
        let excess = self.bits.saturating_sub(120);
        let m = &self.mantissa >> excess;
        let bits = self.bits - excess;
        m.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-(bits as i32))
    }

    fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.bits, other.bits);
        Self {
            mantissa: (&self.mantissa * &other.mantissa) >> self.bits,
            bits: self.bits,
        }
    }

    fn recip(&self) -> Self {
        Self {
            mantissa: div_round(&(BigInt::one() << (2 * self.bits)), &self.mantissa),
            bits: self.bits,
        }
    }

    fn scale_rational(&self, q: &BigRational) -> Self {
        Self {
            mantissa: div_round(&(&self.mantissa * q.numer()), q.denom()),
            bits: self.bits,
        }
    }

    fn powi(&self, e: u32) -> Self {
        let mut acc = Self {
            mantissa: BigInt::one() << self.bits,
            bits: self.bits,
        };
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Decimal exponent `e` with `10^e <= |x| < 10^{e+1}`; `None` for zero.
    pub fn decimal_exponent(&self) -> Option<i32> {
        if self.is_zero() {
            return None;
        }
        let a = self.mantissa.abs();
        let ge = |e: i32| -> bool {
            // |x| >= 10^e  <=>  a * 10^{-e} >= 2^bits
            let one = BigInt::one() << self.bits;
            if e >= 0 {
                a >= one * BigInt::from(10u32).pow(e as u32)
            } else {
                &a * BigInt::from(10u32).pow((-e) as u32) >= one
            }
        };
        let approx = self.abs().to_f64();
        let mut e = if approx.is_finite() && approx > 0.0 {
            approx.log10().floor() as i32
        } else {
            0
        };
        while !ge(e) {
            e -= 1;
        }
        while ge(e + 1) {
            e += 1;
        }
        Some(e)
    }

    /// Plain decimal string with `places` digits after the point.
    pub fn to_decimal_places(&self, places: u32, rounding: Rounding) -> String {
        let scaled = self.mantissa.abs() * BigInt::from(10u32).pow(places);
        let denom = BigInt::one() << self.bits;
        let digits = match rounding {
            Rounding::Nearest => div_round(&scaled, &denom),
            Rounding::TowardZero => scaled / denom,
        };
        let mut s = digits.to_string();
        if places > 0 {
            let places = places as usize;
            if s.len() <= places {
                s = format!("{}{}", "0".repeat(places + 1 - s.len()), s);
            }
            s.insert(s.len() - places, '.');
        }
        if self.is_negative() && digits.sign() != Sign::NoSign {
            s.insert(0, '-');
        }
        s
    }

    /// Plain decimal string with `sig` significant digits (rounded).
    pub fn to_significant(&self, sig: u32) -> String {
        match self.decimal_exponent() {
            None => "0".to_string(),
            Some(e) => {
                let places = i64::from(sig) - 1 - i64::from(e);
                if places >= 0 {
                    self.to_decimal_places(places as u32, Rounding::Nearest)
                } else {
                    let unit = BigInt::from(10u32).pow((-places) as u32);
                    let q = div_round(&self.mantissa, &(unit.clone() << self.bits));
                    (q * unit).to_string()
                }
            }
        }
    }
}

impl Add for &HighPrecision {
    type Output = HighPrecision;
    fn add(self, rhs: &HighPrecision) -> HighPrecision {
        assert_eq!(self.bits, rhs.bits, "mixed fixed-point precisions");
        HighPrecision {
            mantissa: &self.mantissa + &rhs.mantissa,
            bits: self.bits,
        }
    }
}

impl Sub for &HighPrecision {
    type Output = HighPrecision;
    fn sub(self, rhs: &HighPrecision) -> HighPrecision {
        self + &(-rhs.clone())
    }
}

impl Neg for HighPrecision {
    type Output = HighPrecision;
    fn neg(self) -> HighPrecision {
        HighPrecision {
            mantissa: -self.mantissa,
            bits: self.bits,
        }
    }
}

impl PartialOrd for HighPrecision {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        (self.bits == other.bits).then(|| self.mantissa.cmp(&other.mantissa))
    }
}

impl fmt::Display for HighPrecision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = f.precision().unwrap_or(20) as u32;
        f.write_str(&self.to_significant(sig.max(1)))
    }
}

/// Value together with a rigorous absolute error bound.
#[derive(Debug, Clone)]
pub struct Approximation {
    pub value: HighPrecision,
    pub abs_error: f64,
}

/// `sum_{k>=0} (-1)^k / ((2k+1) x^{2k+1})` with `bits` fractional bits,
/// error below `terms` ulps.
fn atan_inverse(x: u64, bits: u32) -> BigInt {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut power = (BigInt::one() << bits) / &x;
    let mut acc = BigInt::zero();
    let mut k: u64 = 0;
    while !power.is_zero() {
        let term = &power / (2 * k + 1);
        if k.is_multiple_of(2) {
            acc += term;
        } else {
            acc -= term;
        }
        power /= &x2;
        k += 1;
    }
    acc
}

pub fn pi(bits: u32) -> HighPrecision {
    let b = bits + 32;
    let m = atan_inverse(5, b) * 16 - atan_inverse(239, b) * 4;
    HighPrecision {
        mantissa: div_round(&m, &(BigInt::one() << 32u32)),
        bits,
    }
}

/// `log 2 = 2 sum_{k>=0} 1 / ((2k+1) 3^{2k+1})`.
pub fn ln2(bits: u32) -> HighPrecision {
    let b = bits + 32;
    let m = atan_h_inverse(3, b) * 2;
    HighPrecision {
        mantissa: div_round(&m, &(BigInt::one() << 32u32)),
        bits,
    }
}

fn atan_h_inverse(x: u64, bits: u32) -> BigInt {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut power = (BigInt::one() << bits) / &x;
    let mut acc = BigInt::zero();
    let mut k: u64 = 0;
    while !power.is_zero() {
        acc += &power / (2 * k + 1);
        power /= &x2;
        k += 1;
    }
    acc
}

/// Number of Borwein terms so that `3 / (3 + sqrt 8)^n < 2^-(bits + 2)`.
fn borwein_terms(bits: u32) -> u64 {
    let rate = (3.0 + 8f64.sqrt()).ln();
    ((f64::from(bits + 4) * std::f64::consts::LN_2 + 3f64.ln()) / rate).ceil() as u64 + 1
}

/// Borwein's `d_k = n sum_{i=0}^{k} (n+i-1)! 4^i / ((n-i)! (2i)!)`, `k = 0..=n`.
fn borwein_weights(n: u64) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut term = BigInt::one();
    let mut acc = BigInt::zero();
    for i in 0..=n {
        acc += &term;
        out.push(acc.clone());
        if i < n {
            term = term * 4u32 * (n + i) * (n - i) / ((2 * i + 1) * (2 * i + 2));
        }
    }
    out
}

/// `zeta(s)` for odd `s >= 3` with its absolute error bound.
pub fn zeta_odd_with_bound(s: u32, ctx: &PrecisionContext) -> Result<Approximation> {
    if s < 3 || s.is_multiple_of(2) {
        return Err(GjmsError::InvalidArgument(format!(
            "zeta_odd needs an odd argument >= 3, got {s}"
        )));
    }
    let bits = ctx.working_bits();
    let b = bits + 32;
    let n = borwein_terms(bits);
    let d = borwein_weights(n);
    let d_n = &d[n as usize];
    let one = BigInt::one() << b;
    let mut acc = BigInt::zero();
    for k in 0..n {
        let denom = BigInt::from(k + 1).pow(s);
        let term = (&d[k as usize] - d_n) * &one / denom;
        if k % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    // Conventional eta(s) = -acc / d_n.
    let eta = -div_round(&acc, d_n);
    // zeta = eta / (1 - 2^{1-s}) = eta * 2^{s-1} / (2^{s-1} - 1)
    let p = BigInt::one() << (s - 1);
    let zeta = div_round(&(eta * &p), &(&p - 1u32));
    let value = HighPrecision {
        mantissa: div_round(&zeta, &(BigInt::one() << 32u32)),
        bits,
    };
    // Series truncation (doubled by the 1/(1 - 2^{1-s}) factor) plus rounding.
    let truncation = 6.0 * (3.0 + 8f64.sqrt()).powf(-(n as f64));
    let rounding = 4.0 * 2f64.powi(-(bits as i32));
    Ok(Approximation {
        value,
        abs_error: truncation + rounding,
    })
}

/// `zeta(s)` for odd `s >= 3`, relative error at most `10^-digits`.
pub fn zeta_odd(s: u32, ctx: &PrecisionContext) -> Result<HighPrecision> {
    Ok(zeta_odd_with_bound(s, ctx)?.value)
}

/// Cache of atom values at one working precision.
struct AtomValues {
    bits: u32,
    pi: HighPrecision,
    log2: HighPrecision,
    zeta: Vec<(u32, HighPrecision)>,
    zeta_error: f64,
}

impl AtomValues {
    fn new(ctx: &PrecisionContext) -> Self {
        let bits = ctx.working_bits();
        Self {
            bits,
            pi: pi(bits),
            log2: ln2(bits),
            zeta: Vec::new(),
            zeta_error: 0.0,
        }
    }

    fn atom(&mut self, atom: Atom, ctx: &PrecisionContext) -> HighPrecision {
        match atom {
            Atom::One => HighPrecision {
                mantissa: BigInt::one() << self.bits,
                bits: self.bits,
            },
            Atom::Log2 => self.log2.clone(),
            Atom::Zeta(s) => {
                if let Some((_, v)) = self.zeta.iter().find(|(t, _)| *t == s) {
                    return v.clone();
                }
                let approx = zeta_odd_with_bound(s, ctx).expect("atoms hold valid zeta arguments");
                self.zeta_error = self.zeta_error.max(approx.abs_error);
                self.zeta.push((s, approx.value.clone()));
                approx.value
            }
        }
    }

    fn pi_pow(&self, e: i32) -> HighPrecision {
        let p = self.pi.powi(e.unsigned_abs());
        if e < 0 {
            p.recip()
        } else {
            p
        }
    }
}

/// Numeric value of `expr` with a rigorous absolute error bound.
pub fn evaluate_with_bound(expr: &ZetaExpr, ctx: &PrecisionContext) -> Approximation {
    let mut atoms = AtomValues::new(ctx);
    let bits = atoms.bits;
    let mut total = HighPrecision::zero(bits);
    let mut magnitude = 0f64;
    let mut count = 0usize;
    for (atom, pi_pow, c) in expr.terms() {
        let v = atoms.atom(atom, ctx).mul(&atoms.pi_pow(pi_pow));
        let term = v.scale_rational(c);
        magnitude += term.abs().to_f64();
        total = &total + &term;
        count += 1;
    }
    let ulp = 2f64.powi(-(bits as i32));
    // Each term: a few roundings per pi-power multiplication, relative to its size.
    let relative = 2f64.powi(-((bits - 16) as i32)) + atoms.zeta_error;
    let abs_error = magnitude * relative + (count as f64) * 4.0 * ulp;
    Approximation {
        value: total,
        abs_error,
    }
}

pub fn evaluate(expr: &ZetaExpr, ctx: &PrecisionContext) -> HighPrecision {
    evaluate_with_bound(expr, ctx).value
}

/// Sum of absolute term values, the scale used for the evaluation error bound.
pub fn term_magnitude(expr: &ZetaExpr, ctx: &PrecisionContext) -> f64 {
    let mut atoms = AtomValues::new(ctx);
    expr.terms()
        .map(|(a, p, c)| {
            atoms
                .atom(a, ctx)
                .mul(&atoms.pi_pow(p))
                .scale_rational(c)
                .abs()
                .to_f64()
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{bernoulli, factorial, int, ratio};

    const ZETA3_40: &str = "1.202056903159594285399738161511449990765";
    const ZETA9_40: &str = "1.002008392826082214417852769232412060486";
    const PI_40: &str = "3.141592653589793238462643383279502884197";
    const LN2_40: &str = "0.6931471805599453094172321214581765680755";

    /// `sum_{n<N} n^-s` plus the Euler–Maclaurin tail, entirely in rationals.
    fn zeta_euler_maclaurin(s: u32) -> BigRational {
        let n_cut: u64 = 40;
        let mut acc: BigRational = (1..n_cut)
            .map(|n| BigRational::new(BigInt::one(), BigInt::from(n).pow(s)))
            .sum();
        let pow = |e: i64| -> BigRational {
            if e >= 0 {
                int(BigInt::from(n_cut).pow(e as u32))
            } else {
                BigRational::new(BigInt::one(), BigInt::from(n_cut).pow((-e) as u32))
            }
        };
        acc += pow(1 - i64::from(s)) / int(i64::from(s) - 1);
        acc += pow(-i64::from(s)) / int(2);
        // sum_j B_{2j}/(2j)! * s(s+1)...(s+2j-2) * N^{-s-2j+1}
        let mut rising = int(i64::from(s));
        for j in 1..=18i64 {
            let b = bernoulli(2 * j as usize) / int(factorial(2 * j as u64));
            acc += b * &rising * pow(-i64::from(s) - 2 * j + 1);
            rising *= int(i64::from(s) + 2 * j - 1) * int(i64::from(s) + 2 * j);
        }
        acc
    }

    fn digits_agree(a: &str, b: &str, n: usize) -> bool {
        a.chars().take(n).eq(b.chars().take(n))
    }

    #[test]
    fn context_limits() {
        assert!(PrecisionContext::new(14).is_err());
        assert_eq!(PrecisionContext::new(15).unwrap().decimal_digits(), 15);
        assert_eq!(PrecisionContext::default().decimal_digits(), 50);
    }

    #[test]
    fn constants_to_forty_digits() {
        let ctx = PrecisionContext::new(45).unwrap();
        let bits = ctx.working_bits();
        assert_eq!(pi(bits).to_decimal_places(39, Rounding::Nearest), PI_40);
        assert_eq!(ln2(bits).to_decimal_places(40, Rounding::Nearest), LN2_40);
    }

    #[test]
    fn zeta_matches_published_digits() {
        let ctx = PrecisionContext::new(45).unwrap();
        let z3 = zeta_odd(3, &ctx).unwrap();
        assert_eq!(z3.to_decimal_places(39, Rounding::Nearest), ZETA3_40);
        let z9 = zeta_odd(9, &ctx).unwrap();
        assert_eq!(z9.to_decimal_places(39, Rounding::Nearest), ZETA9_40);
        let ctx15 = PrecisionContext::new(15).unwrap();
        let z9 = zeta_odd(9, &ctx15).unwrap();
        assert_eq!(
            z9.to_decimal_places(14, Rounding::Nearest),
            "1.00200839282608"
        );
    }

    #[test]
    fn zeta_matches_euler_maclaurin_oracle() {
        let ctx = PrecisionContext::new(30).unwrap();
        for s in (3..=25).step_by(2) {
            let ours = zeta_odd(s, &ctx).unwrap();
            let oracle = HighPrecision::from_rational(&zeta_euler_maclaurin(s), ctx.working_bits());
            let a = ours.to_decimal_places(31, Rounding::Nearest);
            let b = oracle.to_decimal_places(31, Rounding::Nearest);
            assert!(digits_agree(&a, &b, 31), "zeta({s}): {a} vs {b}");
        }
    }

    #[test]
    fn zeta_decreases_towards_one() {
        let ctx = PrecisionContext::default();
        let one = HighPrecision::from_rational(&int(1), ctx.working_bits());
        let mut prev = zeta_odd(3, &ctx).unwrap();
        for s in (5..=61).step_by(2) {
            let z = zeta_odd(s, &ctx).unwrap();
            assert!(z < prev && z > one, "s = {s}");
            prev = z;
        }
    }

    #[test]
    fn zeta_rejects_bad_arguments() {
        let ctx = PrecisionContext::default();
        assert!(zeta_odd(1, &ctx).is_err());
        assert!(zeta_odd(4, &ctx).is_err());
    }

    #[test]
    fn error_bound_is_tight_enough() {
        let ctx = PrecisionContext::default();
        let a = zeta_odd_with_bound(3, &ctx).unwrap();
        assert!(a.abs_error < 1e-50);
        let e = ZetaExpr::term(Atom::Zeta(5), -4, ratio(15, 64))
            + ZetaExpr::term(Atom::Log2, 0, ratio(7, 32));
        let r = evaluate_with_bound(&e, &ctx);
        assert!(r.abs_error <= 1e-48 * term_magnitude(&e, &ctx));
    }

    #[test]
    fn formatting() {
        let bits = 128;
        let x = HighPrecision::from_rational(&ratio(-1, 3), bits);
        assert_eq!(x.to_decimal_places(4, Rounding::Nearest), "-0.3333");
        assert_eq!(x.to_significant(3), "-0.333");
        let y = HighPrecision::from_rational(&ratio(2920638544173, 100_000_000_000_000_000), bits);
        assert_eq!(y.to_significant(10), "0.00002920638544");
        assert_eq!(
            y.to_decimal_places(14, Rounding::TowardZero),
            "0.00002920638544"
        );
        let z = HighPrecision::from_rational(&ratio(123456, 1), bits);
        assert_eq!(z.to_significant(3), "123000");
        assert_eq!(z.decimal_exponent(), Some(5));
        assert_eq!(HighPrecision::zero(bits).to_significant(5), "0");
        let w = HighPrecision::from_rational(&ratio(-1, 1_000_000), bits);
        assert_eq!(w.to_decimal_places(3, Rounding::Nearest), "0.000");
        assert!((x.to_f64() + 1.0 / 3.0).abs() < 1e-16);
    }
}
