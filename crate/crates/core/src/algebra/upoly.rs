//! Dense univariate polynomials over a tower.

use super::tower::{split_components, Alg, Tower};
use crate::error::{Error, Result};

/// Coefficients low degree first, no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct UPoly {
    coeffs: Vec<Alg>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Alg>) -> Self {
        while coeffs.last().is_some_and(Alg::is_zero) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly::default()
    }

    pub fn constant(c: Alg) -> Self {
        UPoly::new(vec![c])
    }

    /// `c·z^k`.
    pub fn monomial(c: Alg, k: usize) -> Self {
        let mut v = vec![Alg::zero(); k + 1];
        v[k] = c;
        UPoly::new(v)
    }

    pub fn from_rationals(cs: &[i64]) -> Self {
        UPoly::new(cs.iter().map(|&c| Alg::from(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Alg] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Alg> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Alg {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn lc(&self) -> Alg {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    /// Index of the lowest nonzero coefficient.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::new((0..n).map(|i| self.coeff(i).add(&o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> UPoly {
        UPoly {
            coeffs: self.coeffs.iter().map(Alg::neg).collect(),
        }
    }

    pub fn mul(&self, o: &UPoly, t: &Tower) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Alg::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&t.mul(a, b));
            }
        }
        UPoly::new(out)
    }

    pub fn scale(&self, c: &Alg, t: &Tower) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|a| t.mul(a, c)).collect())
    }

    /// Multiplies by `z^k`.
    pub fn shift(&self, k: usize) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        let mut v = vec![Alg::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        UPoly { coeffs: v }
    }

    pub fn pow(&self, mut e: u64, t: &Tower) -> UPoly {
        let mut base = self.clone();
        let mut acc = UPoly::constant(Alg::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, t);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, t);
            }
        }
        acc
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.scale(&super::int(i as i64)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Alg, t: &Tower) -> Alg {
        let mut acc = Alg::zero();
        for c in self.coeffs.iter().rev() {
            acc = t.mul(&acc, x).add(c);
        }
        acc
    }

    /// Re-normalizes coefficients in `t` (after a split or when moving to a
    /// larger tower).
    pub fn reduce(&self, t: &Tower) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|c| t.reduce(c)).collect())
    }

    pub fn monic(&self, t: &Tower) -> Result<UPoly> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let inv = t.inv(&self.lc())?;
        Ok(self.scale(&inv, t))
    }

    /// Euclidean division; the leading coefficient of `b` must be invertible.
    pub fn divrem(&self, b: &UPoly, t: &Tower) -> Result<(UPoly, UPoly)> {
        let db = b.degree().ok_or(Error::DivisionByZero)?;
        let lc_inv = t.inv(&b.lc())?;
        let mut r = self.coeffs.clone();
        if r.len() <= db {
            return Ok((UPoly::zero(), self.clone()));
        }
        let mut q = vec![Alg::zero(); r.len() - db];
        for k in (db..r.len()).rev() {
            if r[k].is_zero() {
                continue;
            }
            let c = t.mul(&r[k], &lc_inv);
            for (i, bi) in b.coeffs.iter().enumerate() {
                r[k - db + i] = r[k - db + i].sub(&t.mul(&c, bi));
            }
            debug_assert!(r[k].is_zero());
            q[k - db] = c;
        }
        r.truncate(db);
        Ok((UPoly::new(q), UPoly::new(r)))
    }

    pub fn rem(&self, b: &UPoly, t: &Tower) -> Result<UPoly> {
        Ok(self.divrem(b, t)?.1)
    }

    /// Division that must be exact.
    pub fn exact_div(&self, b: &UPoly, t: &Tower) -> Result<UPoly> {
        let (q, r) = self.divrem(b, t)?;
        if !r.is_zero() {
            return Err(Error::InvalidInput("inexact polynomial division".into()));
        }
        Ok(q)
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(a: &UPoly, b: &UPoly, t: &Tower) -> Result<UPoly> {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        while !r1.is_zero() {
            let r = r0.rem(&r1, t)?;
            r0 = r1;
            r1 = r;
        }
        if r0.is_zero() {
            return Ok(r0);
        }
        r0.monic(t)
    }

    /// Returns `(g, s)` with `g` the monic gcd of `self` and `m` and
    /// `s·self ≡ g (mod m)`.
    pub fn half_gcdext(&self, m: &UPoly, t: &Tower) -> Result<(UPoly, UPoly)> {
        let (mut r0, mut r1) = (m.clone(), self.clone());
        let (mut s0, mut s1) = (UPoly::zero(), UPoly::constant(Alg::one()));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1, t)?;
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1, t));
            s0 = std::mem::replace(&mut s1, s);
        }
        let inv = t.inv(&r0.lc())?;
        Ok((r0.scale(&inv, t), s0.scale(&inv, t)))
    }

    /// Yun's squarefree decomposition: pairs `(q_k, k)` with `self = lc·Π q_k^k`,
    /// each `q_k` monic, squarefree and of positive degree.
    pub fn squarefree_decomposition(&self, t: &Tower) -> Result<Vec<(UPoly, usize)>> {
        if self.degree().unwrap_or(0) == 0 {
            return Ok(Vec::new());
        }
        let f = self.monic(t)?;
        let df = f.derivative();
        let a0 = UPoly::gcd(&f, &df, t)?;
        let mut b = f.exact_div(&a0, t)?;
        let mut c = df.exact_div(&a0, t)?;
        let mut d = c.sub(&b.derivative());
        let mut out = Vec::new();
        let mut k = 1;
        loop {
            let a = UPoly::gcd(&b, &d, t)?;
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), k));
            }
            b = b.exact_div(&a, t)?;
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            c = d.exact_div(&a, t)?;
            d = c.sub(&b.derivative());
            k += 1;
        }
        Ok(out)
    }

    /// Substitutes `z -> value` polynomially: returns `self(q(z))`.
    pub fn compose(&self, q: &UPoly, t: &Tower) -> UPoly {
        let mut acc = UPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(q, t).add(&UPoly::constant(c.clone()));
        }
        acc
    }

    pub fn display(&self, t: &Tower, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
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
        parts.join(" + ").replace("+ -", "- ")
    }
}

/// True iff `p` has no repeated root in any component of the tower.
pub fn is_squarefree(p: &UPoly, tower: &Tower) -> Result<bool> {
    if p.is_zero() {
        return Err(Error::InvalidInput("is_squarefree of the zero polynomial".into()));
    }
    let comps = split_components(tower, |t| {
        let p = p.reduce(t);
        let g = UPoly::gcd(&p, &p.derivative(), t)?;
        Ok(g.degree().unwrap_or(0) == 0)
    })?;
    Ok(comps.iter().all(|(_, ok)| *ok))
}

/// Adjoins a root of a squarefree polynomial; see [`Tower::adjoin`].
pub fn adjoin_root(tower: &Tower, name: &str, p: &UPoly) -> Result<(Tower, Alg)> {
    tower.adjoin(name, p)
}
