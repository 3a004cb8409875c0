//! Exact arithmetic kernel: rationals, algebraic extension towers with
//! dynamic evaluation, univariate and bivariate polynomials, truncated
//! power series and resultants.

pub mod bipoly;
pub mod resultant;
pub mod series;
pub mod tower;
pub mod upoly;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use bipoly::BivariatePolynomial;
pub use resultant::{resultant, resultant_y, sylvester_matrix};
pub use series::TruncatedSeries;
pub use tower::{split_components, Alg, Split, Tower};
pub use upoly::UPoly;

pub type Rational = BigRational;

/// `n / d` as an exact rational.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d == BigInt::from(0) {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// Formats a rational as `p` or `p/q`.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}
