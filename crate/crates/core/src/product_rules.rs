//! Determinant product rules: `det P_{2k}(d)` as a product of powers of
//! conformal-Laplacian determinants `det P_2(d')` for `d' = d, d-2, ..., d-2k+2`.
//!
//! The exponents come from the odd Chebyshev polynomial
//! `U_{2k-1}(x) = x (u_0 + u_1 x^2 + ... + u_{k-1} x^{2k-2})` via
//! `v_j = (-1)^{k-1+j} u_j / 2^{2j+1}`, and equivalently from the binomial
//! array read along anti-diagonals. Both constructions are computed and must
//! agree.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::closed_form::logdet_gjms;
use crate::error::{validate_sphere, GjmsError, Result};
use crate::exact::{binomial, int};
use crate::expr::ZetaExpr;

/// Monomial coefficients of `U_n`, indexed by power:
/// `U_n(x) = sum_j (-1)^j C(n-j, j) (2x)^{n-2j}`.
pub fn chebyshev_u_coeffs(n: u32) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n as usize + 1];
    for j in 0..=n / 2 {
        let c = binomial(u64::from(n - j), i64::from(j)) << (n - 2 * j);
        out[(n - 2 * j) as usize] = if j % 2 == 0 { c } else { -c };
    }
    out
}

/// `u_j(k)`, `j = 0..k`: coefficients of `x^{2j+1}` in `U_{2k-1}`.
pub fn odd_chebyshev_coeffs(k: u32) -> Vec<BigInt> {
    assert!(k >= 1, "k must be positive");
    let u = chebyshev_u_coeffs(2 * k - 1);
    (0..k).map(|j| u[(2 * j + 1) as usize].clone()).collect()
}

/// `v_j(k) = (-1)^{k-1+j} u_j(k) / 2^{2j+1}`; `v_j` sits on dimension `d - 2j`.
pub fn exponents_from_chebyshev(k: u32) -> Vec<BigInt> {
    odd_chebyshev_coeffs(k)
        .into_iter()
        .enumerate()
        .map(|(j, u)| {
            let (q, r) = u.div_rem(&(BigInt::one() << (2 * j + 1)));
            assert!(r.is_zero(), "u_{j}({k}) not divisible by 2^(2j+1)");
            if (k as usize - 1 + j).is_multiple_of(2) {
                q
            } else {
                -q
            }
        })
        .collect()
}

/// Exponents from the binomial array: the factor on dimension
/// `d - 2k + 2 + 2i` has exponent `C(2k-1-i, i)`. Returned in the same order
/// as [`exponents_from_chebyshev`] (dimension `d` first).
pub fn exponents_from_binomials(k: u32) -> Vec<BigInt> {
    assert!(k >= 1, "k must be positive");
    let k = u64::from(k);
    (0..k)
        .rev()
        .map(|i| binomial(2 * k - 1 - i, i as i64))
        .collect()
}

/// Exponents `v_0(k), ..., v_{k-1}(k)` for dimensions `d, d-2, ..., d-2k+2`,
/// after checking both constructions agree.
pub fn rule_exponents(k: u32) -> Result<Vec<BigInt>> {
    if k < 1 {
        return Err(GjmsError::InvalidOrder { k: i64::from(k) });
    }
    let from_u = exponents_from_chebyshev(k);
    let from_binom = exponents_from_binomials(k);
    if from_u != from_binom {
        return Err(GjmsError::InvalidArgument(format!(
            "exponent constructions disagree at k = {k}"
        )));
    }
    Ok(from_u)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleFactor {
    pub dimension: i64,
    pub exponent: BigInt,
}

/// `det P_{2k}(d) = prod det P_2(dimension)^exponent`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductRule {
    pub k: u32,
    pub factors: Vec<RuleFactor>,
}

pub fn product_rule(d: i64, k: i64) -> Result<ProductRule> {
    validate_sphere(d, k)?;
    if d - 2 * k + 2 <= 1 {
        return Err(GjmsError::DimensionOne { d, k });
    }
    let k = k as u32;
    let factors = rule_exponents(k)?
        .into_iter()
        .enumerate()
        .map(|(j, exponent)| RuleFactor {
            dimension: d - 2 * j as i64,
            exponent,
        })
        .collect();
    Ok(ProductRule { k, factors })
}

impl ProductRule {
    pub fn smallest_dimension(&self) -> i64 {
        self.factors.iter().map(|f| f.dimension).min().unwrap_or(0)
    }

    pub fn to_latex(&self) -> String {
        let d = self.factors[0].dimension;
        render_rule(self.k, &self.exponents(), Some(d), true)
    }

    fn exponents(&self) -> Vec<BigInt> {
        self.factors.iter().map(|f| f.exponent.clone()).collect()
    }
}

impl fmt::Display for ProductRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.factors[0].dimension;
        f.write_str(&render_rule(self.k, &self.exponents(), Some(d), false))
    }
}

/// Render `P_{2k}(d) ~ P_2^{v_0}(d) P_2^{v_1}(d-2) ...`, with a concrete or
/// symbolic dimension.
pub fn render_rule(k: u32, exponents: &[BigInt], d: Option<i64>, latex: bool) -> String {
    let dim = |j: usize| -> String {
        match d {
            Some(d) => (d - 2 * j as i64).to_string(),
            None if j == 0 => "d".to_string(),
            None => format!("d-{}", 2 * j),
        }
    };
    let lhs = if latex {
        format!("P_{{{}}}({})", 2 * k, dim(0))
    } else {
        format!("P_{}({})", 2 * k, dim(0))
    };
    let rhs: Vec<String> = exponents
        .iter()
        .enumerate()
        .map(|(j, e)| match (latex, e.is_one()) {
            (true, true) => format!("P_2({})", dim(j)),
            (true, false) => format!("P_2^{{{e}}}({})", dim(j)),
            (false, true) => format!("P_2({})", dim(j)),
            (false, false) => format!("P_2^{e}({})", dim(j)),
        })
        .collect();
    let sep = if latex { " \\sim " } else { " ~ " };
    format!("{lhs}{sep}{}", rhs.join(if latex { "" } else { " " }))
}

/// `sum_i exponent_i * log det P_2(dimension_i)`, exactly.
pub fn logdet_via_product(d: i64, k: i64) -> Result<ZetaExpr> {
    let rule = product_rule(d, k)?;
    let mut total = ZetaExpr::zero();
    for f in &rule.factors {
        total += logdet_gjms(f.dimension, 1)?.scale(&int(f.exponent.clone()));
    }
    Ok(total)
}

/// `true` when the `u_j(k)` strictly alternate in sign.
pub fn odd_coeffs_alternate(k: u32) -> bool {
    odd_chebyshev_coeffs(k)
        .windows(2)
        .all(|w| !w[0].is_zero() && w[0].signum() == -w[1].signum())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `U_0 = 1`, `U_1 = 2x`, `U_{n+1} = 2x U_n - U_{n-1}`.
    fn chebyshev_by_recurrence(n: u32) -> Vec<BigInt> {
        let mut prev = vec![BigInt::one()];
        let mut cur = vec![BigInt::zero(), BigInt::from(2)];
        if n == 0 {
            return prev;
        }
        for _ in 1..n {
            let mut next = vec![BigInt::zero(); cur.len() + 1];
            for (p, c) in cur.iter().enumerate() {
                next[p + 1] += c * 2;
            }
            for (p, c) in prev.iter().enumerate() {
                next[p] -= c;
            }
            prev = cur;
            cur = next;
        }
        cur
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn chebyshev_examples() {
        assert_eq!(chebyshev_u_coeffs(1), ints(&[0, 2]));
        assert_eq!(chebyshev_u_coeffs(3), ints(&[0, -4, 0, 8]));
        assert_eq!(
            chebyshev_u_coeffs(7),
            ints(&[0, -8, 0, 80, 0, -192, 0, 128])
        );
        assert_eq!(chebyshev_u_coeffs(0), ints(&[1]));
    }

    #[test]
    fn chebyshev_matches_recurrence() {
        for n in 0..=40 {
            assert_eq!(chebyshev_u_coeffs(n), chebyshev_by_recurrence(n), "U_{n}");
        }
    }

    #[test]
    fn exponent_tables() {
        assert_eq!(rule_exponents(1).unwrap(), ints(&[1]));
        assert_eq!(rule_exponents(2).unwrap(), ints(&[2, 1]));
        assert_eq!(rule_exponents(3).unwrap(), ints(&[3, 4, 1]));
        assert_eq!(rule_exponents(4).unwrap(), ints(&[4, 10, 6, 1]));
        assert_eq!(rule_exponents(5).unwrap(), ints(&[5, 20, 21, 8, 1]));
    }

    #[test]
    fn constructions_agree_and_coefficients_alternate() {
        for k in 1..=16 {
            assert_eq!(
                exponents_from_chebyshev(k),
                exponents_from_binomials(k),
                "k = {k}"
            );
            assert!(exponents_from_binomials(k).iter().all(|v| v.is_positive()));
            assert!(odd_coeffs_alternate(k), "k = {k}");
        }
    }

    #[test]
    fn rule_shape() {
        let r = product_rule(9, 4).unwrap();
        let dims: Vec<i64> = r.factors.iter().map(|f| f.dimension).collect();
        assert_eq!(dims, vec![9, 7, 5, 3]);
        assert_eq!(r.factors[0].exponent, BigInt::from(4));
        assert_eq!(r.factors.last().unwrap().exponent, BigInt::one());
        assert_eq!(r.smallest_dimension(), 3);
        assert_eq!(r.to_string(), "P_8(9) ~ P_2^4(9) P_2^10(7) P_2^6(5) P_2(3)");
        assert_eq!(
            render_rule(2, &rule_exponents(2).unwrap(), None, false),
            "P_4(d) ~ P_2^2(d) P_2(d-2)"
        );
        assert_eq!(
            render_rule(2, &rule_exponents(2).unwrap(), None, true),
            "P_{4}(d) \\sim P_2^{2}(d)P_2(d-2)"
        );
    }

    #[test]
    fn rule_rejections() {
        assert_eq!(product_rule(5, 3), Err(GjmsError::Divergent { d: 5, k: 3 }));
        assert_eq!(product_rule(6, 1), Err(GjmsError::EvenDimension { d: 6 }));
        assert!(rule_exponents(0).is_err());
    }

    #[test]
    fn product_matches_closed_form() {
        assert_eq!(
            logdet_via_product(3, 1).unwrap(),
            logdet_gjms(3, 1).unwrap()
        );
        let p52 = logdet_gjms(5, 1).unwrap().scale(&int(2)) + logdet_gjms(3, 1).unwrap();
        assert_eq!(logdet_via_product(5, 2).unwrap(), p52);
        assert_eq!(
            logdet_via_product(5, 2).unwrap(),
            logdet_gjms(5, 2).unwrap()
        );
        assert_eq!(
            logdet_via_product(13, 3).unwrap(),
            logdet_gjms(13, 3).unwrap()
        );
    }
}
