//! Truncated power series in `t` with precision tracking.

use super::tower::{Alg, Tower};
use super::upoly::UPoly;
use crate::error::{Error, Result};

/// `Σ c_i t^i`, correct modulo `t^precision`; `precision == None` means the
/// series is an exact polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<Alg>,
    precision: Option<usize>,
}

fn min_opt(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

fn add_opt(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    Some(a? + b?)
}

impl TruncatedSeries {
    fn build(mut coeffs: Vec<Alg>, precision: Option<usize>) -> Self {
        if let Some(p) = precision {
            coeffs.truncate(p);
        }
        while coeffs.last().is_some_and(Alg::is_zero) {
            coeffs.pop();
        }
        TruncatedSeries { coeffs, precision }
    }

    pub fn exact(coeffs: Vec<Alg>) -> Self {
        Self::build(coeffs, None)
    }

    pub fn exact_zero() -> Self {
        Self::exact(Vec::new())
    }

    pub fn with_precision(coeffs: Vec<Alg>, precision: usize) -> Self {
        Self::build(coeffs, Some(precision))
    }

    /// Exact `c·t^k`.
    pub fn monomial(c: Alg, k: usize) -> Self {
        let mut v = vec![Alg::zero(); k + 1];
        v[k] = c;
        Self::exact(v)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (usize, Alg)>, precision: Option<usize>) -> Self {
        let mut v: Vec<Alg> = Vec::new();
        for (k, c) in terms {
            if v.len() <= k {
                v.resize(k + 1, Alg::zero());
            }
            v[k] = v[k].add(&c);
        }
        Self::build(v, precision)
    }

    pub fn precision(&self) -> Option<usize> {
        self.precision
    }

    pub fn is_exact(&self) -> bool {
        self.precision.is_none()
    }

    pub fn coeffs(&self) -> &[Alg] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Alg {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// Nonzero terms `(exponent, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &Alg)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    /// True if every stored coefficient is zero (exactly zero, or zero
    /// modulo the precision).
    pub fn is_zero_known(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Index of the first nonzero coefficient, or the precision if none is
    /// known, or `None` for the exact zero series.
    fn valuation_bound(&self) -> Option<usize> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .or(self.precision)
    }

    /// `ord_t`: `Ok(None)` for the exact zero series, an error when the series
    /// vanishes modulo its precision.
    pub fn order(&self) -> Result<Option<usize>> {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(k) => Ok(Some(k)),
            None => match self.precision {
                None => Ok(None),
                Some(p) => Err(Error::Undetermined(p)),
            },
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n).map(|i| self.coeff(i).add(&o.coeff(i))).collect();
        Self::build(v, min_opt(self.precision, o.precision))
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(Alg::neg).collect(),
            precision: self.precision,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Alg, t: &Tower) -> Self {
        Self::build(self.coeffs.iter().map(|a| t.mul(a, c)).collect(), self.precision)
    }

    pub fn mul(&self, o: &Self, t: &Tower) -> Self {
        let prec = min_opt(
            add_opt(self.precision, o.valuation_bound()),
            add_opt(o.precision, self.valuation_bound()),
        );
        // the exact zero series annihilates without limiting precision
        let prec = match (self.valuation_bound(), o.valuation_bound()) {
            (None, _) | (_, None) => None,
            _ => prec,
        };
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return Self::build(Vec::new(), prec);
        }
        let cap = prec.unwrap_or(usize::MAX);
        let len = (self.coeffs.len() + o.coeffs.len() - 1).min(cap);
        let mut out = vec![Alg::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i >= len {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&t.mul(a, b));
            }
        }
        Self::build(out, prec)
    }

    pub fn pow(&self, e: u64, t: &Tower) -> Self {
        let mut acc = Self::monomial(Alg::one(), 0);
        for _ in 0..e {
            acc = acc.mul(self, t);
        }
        acc
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        let mut v = vec![Alg::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Self::build(v, self.precision.map(|p| p + k))
    }

    /// Forgets everything from `t^k` on.
    pub fn truncate(&self, k: usize) -> Self {
        Self::build(self.coeffs.clone(), Some(self.precision.map_or(k, |p| p.min(k))))
    }

    pub fn derivative(&self) -> Self {
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale(&super::int(i as i64)))
            .collect();
        Self::build(v, self.precision.map(|p| p.saturating_sub(1)))
    }

    /// `p(self)` for a polynomial `p`.
    pub fn eval_poly(&self, p: &UPoly, t: &Tower) -> Self {
        let mut acc = Self::exact_zero();
        for c in p.coeffs().iter().rev() {
            acc = acc.mul(self, t).add(&Self::monomial(c.clone(), 0));
        }
        acc
    }

    /// `s(λ t^n)`.
    pub fn substitute_monomial(&self, lambda: &Alg, n: usize, t: &Tower) -> Self {
        let mut v = vec![Alg::zero(); self.coeffs.len().saturating_sub(1) * n + 1];
        let mut lp = Alg::one();
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                v[i * n] = t.mul(c, &lp);
            }
            lp = t.mul(&lp, lambda);
        }
        Self::build(v, self.precision.map(|p| p * n))
    }

    /// Multiplicative inverse modulo `t^prec`; the constant term must be a
    /// unit.
    pub fn inverse(&self, prec: usize, t: &Tower) -> Result<Self> {
        let prec = self.precision.map_or(prec, |p| p.min(prec));
        let c0 = t.inv(&self.coeff(0))?;
        let mut out = vec![Alg::zero(); prec];
        if prec == 0 {
            return Ok(Self::build(out, Some(0)));
        }
        out[0] = c0.clone();
        for k in 1..prec {
            let mut acc = Alg::zero();
            for j in 1..=k.min(self.coeffs.len().saturating_sub(1)) {
                acc = acc.add(&t.mul(&self.coeffs[j], &out[k - j]));
            }
            out[k] = t.mul(&acc, &c0).neg();
        }
        Ok(Self::build(out, Some(prec)))
    }

    /// Brings coefficients into canonical form in `t`.
    pub fn reduce(&self, t: &Tower) -> Self {
        Self::build(self.coeffs.iter().map(|c| t.reduce(c)).collect(), self.precision)
    }

    pub fn display(&self, t: &Tower, var: &str) -> String {
        let mut parts = Vec::new();
        for (i, c) in self.terms() {
            let m = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let cs = t.format(c);
            parts.push(match (i, c.is_one()) {
                (0, _) => cs,
                (_, true) => m,
                _ => format!("{cs}*{m}"),
            });
        }
        let mut s = if parts.is_empty() { "0".to_string() } else { parts.join(" + ").replace("+ -", "- ") };
        if let Some(p) = self.precision {
            s.push_str(&format!(" + O({var}^{p})"));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(cs: &[i64], p: Option<usize>) -> TruncatedSeries {
        let v = cs.iter().map(|&c| Alg::from(c)).collect();
        match p {
            Some(p) => TruncatedSeries::with_precision(v, p),
            None => TruncatedSeries::exact(v),
        }
    }

    #[test]
    fn precision_of_products() {
        let t = Tower::rational();
        let a = s(&[0, 0, 1, 1], Some(6)); // t^2 + t^3 + O(t^6)
        let b = s(&[0, 1], None); // t
        let c = a.mul(&b, &t);
        assert_eq!(c.precision(), Some(7));
        assert_eq!(c.order().unwrap(), Some(3));
        let d = a.mul(&a, &t);
        assert_eq!(d.precision(), Some(8));
    }

    #[test]
    fn zero_mod_precision_is_undetermined() {
        let z = s(&[0, 0], Some(5));
        assert!(matches!(z.order(), Err(Error::Undetermined(5))));
        assert_eq!(TruncatedSeries::exact_zero().order().unwrap(), None);
    }

    #[test]
    fn inverse_of_one_minus_t() {
        let t = Tower::rational();
        let a = s(&[1, -1], None);
        let inv = a.inverse(6, &t).unwrap();
        assert_eq!(inv, s(&[1, 1, 1, 1, 1, 1], Some(6)));
    }

    #[test]
    fn monomial_substitution() {
        let t = Tower::rational();
        let a = s(&[1, 2], None);
        let b = a.substitute_monomial(&Alg::from(3), 2, &t);
        assert_eq!(b, s(&[1, 0, 6], None));
    }
}
