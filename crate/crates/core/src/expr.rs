//! Exact rational linear combinations of `1`, `log 2` and `zeta(s)` (odd
//! `s >= 3`), each carrying an explicit integer power of `pi`.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{GjmsError, Result};
use crate::exact::{format_rational, parse_rational, BigRational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Atom {
    One,
    Log2,
    /// `zeta(s)` for odd `s >= 3`.
    Zeta(u32),
}

impl Atom {
    pub fn zeta(s: u32) -> Result<Self> {
        if s < 3 || s.is_multiple_of(2) {
            return Err(GjmsError::InvalidArgument(format!(
                "zeta atom needs an odd argument >= 3, got {s}"
            )));
        }
        Ok(Atom::Zeta(s))
    }

    fn validate(self) -> Result<Self> {
        match self {
            Atom::Zeta(s) => Atom::zeta(s),
            a => Ok(a),
        }
    }
}

/// Normalised expression: at most one coefficient per `(atom, pi_pow)` and
/// no zero coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ZetaExpr {
    terms: BTreeMap<(Atom, i32), BigRational>,
}

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    atom: Atom,
    pi_pow: i32,
    coeff: String,
}

impl ZetaExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn rational(q: BigRational) -> Self {
        Self::term(Atom::One, 0, q)
    }

    /// Single term `coeff * atom * pi^pi_pow`.
    pub fn term(atom: Atom, pi_pow: i32, coeff: BigRational) -> Self {
        let mut e = Self::zero();
        e.add_term(atom, pi_pow, coeff);
        e
    }

    pub fn add_term(&mut self, atom: Atom, pi_pow: i32, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let key = (atom, pi_pow);
        let sum = match self.terms.remove(&key) {
            Some(c) => c + coeff,
            None => coeff,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `atom * pi^pi_pow` (zero if absent).
    pub fn coeff(&self, atom: Atom, pi_pow: i32) -> BigRational {
        self.terms
            .get(&(atom, pi_pow))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Terms in canonical order: `1`, `log 2`, then `zeta(s)` by increasing `s`.
    pub fn terms(&self) -> impl Iterator<Item = (Atom, i32, &BigRational)> {
        self.terms.iter().map(|(&(a, p), c)| (a, p, c))
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(k, c)| (*k, c * q)).collect(),
        }
    }

    /// Multiply by `pi^e`.
    pub fn mul_pi_pow(&self, e: i32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&(a, p), c)| ((a, p + e), c.clone()))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let terms: Vec<JsonTerm> = self
            .terms()
            .map(|(atom, pi_pow, c)| JsonTerm {
                atom,
                pi_pow,
                coeff: format_rational(c),
            })
            .collect();
        serde_json::to_string(&terms).expect("serialising plain data cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let terms: Vec<JsonTerm> =
            serde_json::from_str(s).map_err(|e| GjmsError::Parse(e.to_string()))?;
        let mut e = Self::zero();
        for t in terms {
            e.add_term(t.atom.validate()?, t.pi_pow, parse_rational(&t.coeff)?);
        }
        Ok(e)
    }

    pub fn to_latex(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (atom, pi_pow, c)) in self.terms().enumerate() {
            push_sign(&mut out, c, i == 0);
            let mag = c.abs();
            let body = match atom {
                Atom::One => None,
                Atom::Log2 => Some("\\log 2".to_string()),
                Atom::Zeta(s) => Some(format!("\\zeta({s})")),
            };
            let coeff_is_one = mag.is_one();
            if !coeff_is_one || (body.is_none() && pi_pow >= 0) {
                out.push_str(&latex_rational(&mag));
            }
            match (body, pi_pow) {
                (None, 0) => {}
                (None, p) if p > 0 => out.push_str(&latex_pi(p)),
                (None, p) => {
                    let _ = write!(out, "\\frac{{1}}{{{}}}", latex_pi(-p));
                }
                (Some(b), 0) => out.push_str(&b),
                (Some(b), p) if p > 0 => {
                    out.push_str(&b);
                    out.push_str(&latex_pi(p));
                }
                (Some(b), p) => {
                    let _ = write!(out, "\\frac{{{b}}}{{{}}}", latex_pi(-p));
                }
            }
        }
        out
    }
}

fn push_sign(out: &mut String, c: &BigRational, first: bool) {
    match (first, c.is_negative()) {
        (true, true) => out.push('-'),
        (true, false) => {}
        (false, true) => out.push_str(" - "),
        (false, false) => out.push_str(" + "),
    }
}

fn latex_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", q.numer(), q.denom())
    }
}

fn latex_pi(p: i32) -> String {
    if p == 1 {
        "\\pi".to_string()
    } else {
        format!("\\pi^{{{p}}}")
    }
}

fn plain_pi(p: i32) -> String {
    if p == 1 {
        "pi".to_string()
    } else {
        format!("pi^{p}")
    }
}

/// Plain-text rendering, e.g. `7/32*log(2) - 13/32*zeta(3)/pi^2`.
impl fmt::Display for ZetaExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (i, (atom, pi_pow, c)) in self.terms().enumerate() {
            push_sign(&mut out, c, i == 0);
            let mag = c.abs();
            let body = match atom {
                Atom::One => None,
                Atom::Log2 => Some("log(2)".to_string()),
                Atom::Zeta(s) => Some(format!("zeta({s})")),
            };
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || (body.is_none() && pi_pow >= 0) {
                factors.push(mag.to_string());
            }
            if let Some(b) = body {
                factors.push(b);
            }
            if pi_pow > 0 {
                factors.push(plain_pi(pi_pow));
            }
            if factors.is_empty() {
                factors.push("1".to_string());
            }
            out.push_str(&factors.join("*"));
            if pi_pow < 0 {
                out.push('/');
                out.push_str(&plain_pi(-pi_pow));
            }
        }
        f.write_str(&out)
    }
}

impl Add for ZetaExpr {
    type Output = ZetaExpr;
    fn add(mut self, rhs: ZetaExpr) -> ZetaExpr {
        self += rhs;
        self
    }
}

impl AddAssign for ZetaExpr {
    fn add_assign(&mut self, rhs: ZetaExpr) {
        for ((a, p), c) in rhs.terms {
            self.add_term(a, p, c);
        }
    }
}

impl Sub for ZetaExpr {
    type Output = ZetaExpr;
    fn sub(self, rhs: ZetaExpr) -> ZetaExpr {
        self + (-rhs)
    }
}

impl Neg for ZetaExpr {
    type Output = ZetaExpr;
    fn neg(self) -> ZetaExpr {
        Self {
            terms: self.terms.into_iter().map(|(k, c)| (k, -c)).collect(),
        }
    }
}

impl Mul<&BigRational> for &ZetaExpr {
    type Output = ZetaExpr;
    fn mul(self, q: &BigRational) -> ZetaExpr {
        self.scale(q)
    }
}

impl std::iter::Sum for ZetaExpr {
    fn sum<I: Iterator<Item = ZetaExpr>>(iter: I) -> ZetaExpr {
        iter.fold(ZetaExpr::zero(), |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, ratio};
    use proptest::prelude::*;

    fn sample() -> ZetaExpr {
        let mut e = ZetaExpr::zero();
        e.add_term(Atom::Log2, 0, ratio(7, 32));
        e.add_term(Atom::Zeta(3), -2, ratio(-13, 32));
        e.add_term(Atom::Zeta(5), -4, ratio(15, 64));
        e
    }

    #[test]
    fn normalisation_merges_and_drops_zeros() {
        let mut e = sample();
        e.add_term(Atom::Log2, 0, ratio(-7, 32));
        assert_eq!(e.len(), 2);
        assert!(e.coeff(Atom::Log2, 0).is_zero());
        e.add_term(Atom::Zeta(3), -2, ratio(1, 32));
        assert_eq!(e.coeff(Atom::Zeta(3), -2), ratio(-3, 8));
        assert!((sample() - sample()).is_zero());
        assert!(sample().scale(&int(0)).is_zero());
    }

    #[test]
    fn pi_power_shift() {
        let e = sample().mul_pi_pow(-1);
        assert_eq!(e.coeff(Atom::Zeta(5), -5), ratio(15, 64));
        assert_eq!(e.mul_pi_pow(1), sample());
    }

    #[test]
    fn renderings() {
        assert_eq!(
            sample().to_string(),
            "7/32*log(2) - 13/32*zeta(3)/pi^2 + 15/64*zeta(5)/pi^4"
        );
        assert_eq!(
            sample().to_latex(),
            "\\frac{7}{32}\\log 2 - \\frac{13}{32}\\frac{\\zeta(3)}{\\pi^{2}} + \\frac{15}{64}\\frac{\\zeta(5)}{\\pi^{4}}"
        );
        let f1 = ZetaExpr::term(Atom::Log2, -1, int(1));
        assert_eq!(f1.to_string(), "log(2)/pi");
        assert_eq!(f1.to_latex(), "\\frac{\\log 2}{\\pi}");
        assert_eq!(ZetaExpr::rational(ratio(1, 2)).to_string(), "1/2");
        assert_eq!(
            ZetaExpr::term(Atom::One, -2, int(-1)).to_string(),
            "-1/pi^2"
        );
        assert_eq!(ZetaExpr::zero().to_string(), "0");
    }

    #[test]
    fn json_layout() {
        let e = ZetaExpr::term(Atom::Log2, 0, ratio(1, 4))
            + ZetaExpr::term(Atom::Zeta(3), -2, ratio(-3, 8))
            + ZetaExpr::rational(int(2));
        assert_eq!(
            e.to_json(),
            r#"[{"atom":"one","pi_pow":0,"coeff":"2/1"},{"atom":"log2","pi_pow":0,"coeff":"1/4"},{"atom":{"zeta":3},"pi_pow":-2,"coeff":"-3/8"}]"#
        );
    }

    #[test]
    fn json_rejects_bad_atoms() {
        assert!(ZetaExpr::from_json(r#"[{"atom":{"zeta":4},"pi_pow":0,"coeff":"1/2"}]"#).is_err());
        assert!(ZetaExpr::from_json(r#"[{"atom":"log3","pi_pow":0,"coeff":"1/2"}]"#).is_err());
        assert!(ZetaExpr::from_json(r#"[{"atom":"one","pi_pow":0,"coeff":"1/0"}]"#).is_err());
    }

    fn arb_atom() -> impl Strategy<Value = Atom> {
        prop_oneof![
            Just(Atom::One),
            Just(Atom::Log2),
            (1u32..10).prop_map(|s| Atom::Zeta(2 * s + 1)),
        ]
    }

    fn arb_expr() -> impl Strategy<Value = ZetaExpr> {
        proptest::collection::vec((arb_atom(), -12i32..4, -500i64..500, 1i64..500), 0..8).prop_map(
            |ts| {
                let mut e = ZetaExpr::zero();
                for (a, p, n, d) in ts {
                    e.add_term(a, p, ratio(n, d));
                }
                e
            },
        )
    }

    proptest! {
        #[test]
        fn json_round_trips_bytewise(e in arb_expr()) {
            let json = e.to_json();
            let back = ZetaExpr::from_json(&json).unwrap();
            prop_assert_eq!(&back, &e);
            prop_assert_eq!(back.to_json(), json);
        }

        #[test]
        fn addition_is_commutative_and_normalised(a in arb_expr(), b in arb_expr()) {
            let ab = a.clone() + b.clone();
            prop_assert_eq!(&ab, &(b.clone() + a.clone()));
            prop_assert!(ab.terms().all(|(_, _, c)| !c.is_zero()));
            prop_assert_eq!(ab - b, a);
        }
    }
}
