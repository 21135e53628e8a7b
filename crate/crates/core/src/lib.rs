//! Log-determinants of the GJMS operators `P_{2k}` on odd-dimensional round
//! spheres, computed three ways that check each other: direct quadrature,
//! products of conformal-Laplacian determinants, and an exact closed form in
//! `log 2` and `zeta(odd) / pi^even`.
//!
//! ```
//! use gjms_core::{logdet_gjms, evaluate, PrecisionContext};
//!
//! let e = logdet_gjms(5, 2).unwrap();
//! assert_eq!(e.to_string(), "7/32*log(2) - 13/32*zeta(3)/pi^2 + 15/64*zeta(5)/pi^4");
//! let v = evaluate(&e, &PrecisionContext::default());
//! assert_eq!(v.to_significant(6), "0.104642");
//! ```

pub mod central;
pub mod cli;
pub mod closed_form;
pub mod error;
pub mod exact;
pub mod expr;
pub mod norlund;
pub mod precision;
pub mod product_rules;
pub mod quadrature;
pub mod survey;

pub use central::{central_t, f_odd_central, verify_norlund_identity, NorlundUpperIndex};
pub use closed_form::{f_even, f_odd, f_value, logdet_gjms};
pub use error::{GjmsError, Result};
pub use exact::{bernoulli, binomial, BigRational};
pub use expr::{Atom, ZetaExpr};
pub use norlund::{d_norlund, d_norlund_series_oracle, DTable};
pub use precision::{evaluate, HighPrecision, PrecisionContext};
pub use product_rules::{logdet_via_product, product_rule, ProductRule};
pub use quadrature::{logdet_quadrature, QuadratureConfig, Scheme};
