//! Sparse bivariate polynomials `Σ a_ij x^i y^j`.

use std::collections::BTreeMap;
use std::fmt;

use super::series::TruncatedSeries;
use super::tower::{Alg, Tower};
use super::upoly::UPoly;
use super::{int, Rational};

/// Support-indexed polynomial in `x` and `y`; keys are `(i, j)` for
/// `x^i y^j` and no stored coefficient is zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BivariatePolynomial {
    terms: BTreeMap<(u32, u32), Alg>,
}

impl BivariatePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), Alg)>) -> Self {
        let mut p = Self::zero();
        for (k, c) in terms {
            p.add_term(k, &c);
        }
        p
    }

    /// Convenience constructor from integer coefficients.
    pub fn from_int_terms(terms: &[((u32, u32), i64)]) -> Self {
        Self::from_terms(terms.iter().map(|&(k, c)| (k, Alg::from(c))))
    }

    pub fn monomial(i: u32, j: u32, c: Alg) -> Self {
        Self::from_terms([((i, j), c)])
    }

    pub fn x() -> Self {
        Self::monomial(1, 0, Alg::one())
    }

    pub fn y() -> Self {
        Self::monomial(0, 1, Alg::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Alg)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Alg {
        self.terms.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn support(&self) -> Vec<(u32, u32)> {
        self.terms.keys().copied().collect()
    }

    pub fn add_term(&mut self, key: (u32, u32), c: &Alg) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(key).or_default();
        *entry = entry.add(c);
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn deg_x(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.0).max()
    }

    pub fn deg_y(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.1).max()
    }

    /// Lowest total degree of a monomial (the multiplicity at the origin).
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.0 + k.1).min()
    }

    /// Lowest-degree homogeneous part.
    pub fn tangent_cone(&self) -> BivariatePolynomial {
        let Some(o) = self.order() else {
            return Self::zero();
        };
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(k, _)| k.0 + k.1 == o)
                .map(|(k, c)| (*k, c.clone())),
        )
    }

    /// Largest powers of `x` and `y` dividing the polynomial.
    pub fn axis_powers(&self) -> (u32, u32) {
        let px = self.terms.keys().map(|k| k.0).min().unwrap_or(0);
        let py = self.terms.keys().map(|k| k.1).min().unwrap_or(0);
        (px, py)
    }

    /// Divides by `x^a y^b`; the monomial must divide.
    pub fn div_monomial(&self, a: u32, b: u32) -> BivariatePolynomial {
        BivariatePolynomial {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| ((i - a, j - b), c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (k, c) in &o.terms {
            r.add_term(*k, c);
        }
        r
    }

    pub fn neg(&self) -> Self {
        BivariatePolynomial {
            terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Alg, t: &Tower) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, a)| (*k, t.mul(a, c))))
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, a)| (*k, a.scale(r))))
    }

    pub fn mul(&self, o: &Self, t: &Tower) -> Self {
        let mut r = Self::zero();
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &o.terms {
                r.add_term((i + k, j + l), &t.mul(a, b));
            }
        }
        r
    }

    pub fn pow(&self, e: u32, t: &Tower) -> Self {
        let mut acc = Self::monomial(0, 0, Alg::one());
        for _ in 0..e {
            acc = acc.mul(self, t);
        }
        acc
    }

    pub fn derivative_x(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(k, _)| k.0 > 0)
                .map(|(&(i, j), c)| ((i - 1, j), c.scale(&int(i as i64)))),
        )
    }

    pub fn derivative_y(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(k, _)| k.1 > 0)
                .map(|(&(i, j), c)| ((i, j - 1), c.scale(&int(j as i64)))),
        )
    }

    /// Re-normalizes coefficients in `t`.
    pub fn reduce(&self, t: &Tower) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, c)| (*k, t.reduce(c))))
    }

    /// Coefficients of `y^j` as polynomials in `x`, indexed by `j`.
    pub fn to_y_univariate(&self) -> Vec<UPoly> {
        let dy = self.deg_y().map_or(0, |d| d as usize + 1);
        let mut cols: Vec<Vec<Alg>> = vec![Vec::new(); dy];
        for (&(i, j), c) in &self.terms {
            let col = &mut cols[j as usize];
            if col.len() <= i as usize {
                col.resize(i as usize + 1, Alg::zero());
            }
            col[i as usize] = c.clone();
        }
        cols.into_iter().map(UPoly::new).collect()
    }

    pub fn from_y_univariate(cols: &[UPoly]) -> Self {
        let mut p = Self::zero();
        for (j, col) in cols.iter().enumerate() {
            for (i, c) in col.coeffs().iter().enumerate() {
                p.add_term((i as u32, j as u32), c);
            }
        }
        p
    }

    /// `f(x + ρy, y)`.
    pub fn shear_x(&self, rho: &Alg, t: &Tower) -> Self {
        let lin = Self::x().add(&Self::monomial(0, 1, rho.clone()));
        self.substitute(&lin, &Self::y(), t)
    }

    /// `f(x, y + ρx)`.
    pub fn shear_y(&self, rho: &Alg, t: &Tower) -> Self {
        let lin = Self::y().add(&Self::monomial(1, 0, rho.clone()));
        self.substitute(&Self::x(), &lin, t)
    }

    /// `f(X, Y)` for polynomials `X`, `Y`.
    pub fn substitute(&self, xs: &Self, ys: &Self, t: &Tower) -> Self {
        let dx = self.deg_x().unwrap_or(0);
        let dy = self.deg_y().unwrap_or(0);
        let mut xp = vec![Self::monomial(0, 0, Alg::one())];
        for k in 0..dx as usize {
            xp.push(xp[k].mul(xs, t));
        }
        let mut yp = vec![Self::monomial(0, 0, Alg::one())];
        for k in 0..dy as usize {
            yp.push(yp[k].mul(ys, t));
        }
        let mut r = Self::zero();
        for (&(i, j), c) in &self.terms {
            let m = xp[i as usize].mul(&yp[j as usize], t).scale(c, t);
            r = r.add(&m);
        }
        r
    }

    /// Evaluates `f(x(t), y(t))` on truncated series.
    pub fn compose_series(
        &self,
        xs: &TruncatedSeries,
        ys: &TruncatedSeries,
        t: &Tower,
    ) -> TruncatedSeries {
        let cols = self.to_y_univariate();
        // Horner in y, each coefficient a polynomial in x evaluated on xs.
        let mut acc = TruncatedSeries::exact_zero();
        for col in cols.iter().rev() {
            let cx = xs.eval_poly(col, t);
            acc = acc.mul(ys, t).add(&cx);
        }
        acc
    }

    pub fn display(&self, t: &Tower) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (&(i, j), c) in self.terms.iter() {
            let mut m = Vec::new();
            match i {
                0 => {}
                1 => m.push("x".to_string()),
                _ => m.push(format!("x^{i}")),
            }
            match j {
                0 => {}
                1 => m.push("y".to_string()),
                _ => m.push(format!("y^{j}")),
            }
            let cs = t.format(c);
            let term = if m.is_empty() {
                cs
            } else if c.is_one() {
                m.join("*")
            } else if c.neg().is_one() {
                format!("-{}", m.join("*"))
            } else {
                format!("{cs}*{}", m.join("*"))
            };
            parts.push(term);
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl fmt::Display for BivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display(&Tower::rational()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivatives_and_axis_powers() {
        let f = BivariatePolynomial::from_int_terms(&[((0, 3), 1), ((11, 0), -1), ((8, 1), 1)]);
        let fy = f.derivative_y();
        assert_eq!(fy, BivariatePolynomial::from_int_terms(&[((0, 2), 3), ((8, 0), 1)]));
        let fx = f.derivative_x();
        assert_eq!(fx, BivariatePolynomial::from_int_terms(&[((10, 0), -11), ((7, 1), 8)]));
        let g = BivariatePolynomial::from_int_terms(&[((1, 2), 1), ((3, 1), 2)]);
        assert_eq!(g.axis_powers(), (1, 1));
    }

    #[test]
    fn shear_preserves_order() {
        let t = Tower::rational();
        let f = BivariatePolynomial::from_int_terms(&[((0, 2), 1), ((3, 0), -1)]);
        let g = f.shear_x(&Alg::from(2), &t);
        assert_eq!(g.order(), Some(2));
        // (x + 2y)^3 contributes 8 y^3
        assert_eq!(g.coeff(0, 3), Alg::from(-8));
    }
}
