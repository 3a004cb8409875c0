//! Parametrized plane branches `x = λ·t^n`, `y = y(t)`.

use num_integer::Integer;

use crate::algebra::{Alg, Tower, TruncatedSeries};
use crate::error::{Error, Result};
use crate::semigroup::{semigroup_from_characteristic, NumericalSemigroup};

/// A branch through the origin, `x = x_coeff·t^n`, `y = Σ c_i t^i`, with
/// coefficients in `tower`. Normal forms have `x_coeff = 1`; expansions
/// produced by the Newton–Puiseux tree may carry another constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PuiseuxBranch {
    pub n: u32,
    pub x_coeff: Alg,
    pub y: TruncatedSeries,
    pub tower: Tower,
}

impl PuiseuxBranch {
    pub fn new(n: u32, y: TruncatedSeries, tower: Tower) -> Result<Self> {
        Self::with_x_coeff(n, Alg::one(), y, tower)
    }

    pub fn with_x_coeff(n: u32, x_coeff: Alg, y: TruncatedSeries, tower: Tower) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("multiplicity must be positive".into()));
        }
        if x_coeff.is_zero() {
            return Err(Error::InvalidInput("x coefficient must be nonzero".into()));
        }
        if !y.coeff(0).is_zero() {
            return Err(Error::InvalidInput("branch must pass through the origin".into()));
        }
        Ok(PuiseuxBranch {
            n,
            x_coeff,
            y,
            tower,
        })
    }

    /// Exact branch over the rationals from integer data.
    pub fn from_int_terms(n: u32, terms: &[(usize, i64)]) -> Self {
        let y = TruncatedSeries::from_terms(terms.iter().map(|&(e, c)| (e, Alg::from(c))), None);
        Self::new(n, y, Tower::rational()).expect("valid branch")
    }

    pub fn is_exact(&self) -> bool {
        self.y.is_exact()
    }

    pub fn truncation_order(&self) -> Option<usize> {
        self.y.precision()
    }

    /// `ord_t y`, if known.
    pub fn y_order(&self) -> Option<usize> {
        self.y.terms().next().map(|(e, _)| e)
    }

    /// Exponents of the nonzero `y` terms.
    pub fn support(&self) -> Vec<usize> {
        self.y.terms().map(|(e, _)| e).collect()
    }

    /// The series `x(t)`.
    pub fn x_series(&self) -> TruncatedSeries {
        TruncatedSeries::monomial(self.x_coeff.clone(), self.n as usize)
    }

    /// `β_0 = n, β_1, …`: the exponents at which the gcd with the previous
    /// ones drops.
    pub fn characteristic_exponents(&self) -> Result<Vec<u64>> {
        let n = self.n as u64;
        let mut beta = vec![n];
        let mut e = n;
        if e == 1 {
            return Ok(beta);
        }
        if let Some(m) = self.y_order() {
            if (m as u64) < n {
                return Err(Error::InvalidInput("y-order below multiplicity".into()));
            }
        }
        for (i, _) in self.y.terms() {
            let g = e.gcd(&(i as u64));
            if g < e {
                beta.push(i as u64);
                e = g;
                if e == 1 {
                    return Ok(beta);
                }
            }
        }
        match self.y.precision() {
            Some(p) => Err(Error::TruncationTooSmall(format!(
                "characteristic exponents not resolved below t^{p}"
            ))),
            None => Err(Error::InvalidInput("parametrization is not primitive".into())),
        }
    }
}

/// Semigroup of values of the branch.
pub fn semigroup_of_branch(b: &PuiseuxBranch) -> Result<NumericalSemigroup> {
    semigroup_from_characteristic(&b.characteristic_exponents()?)
}
