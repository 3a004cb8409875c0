//! Algebraic extension towers with dynamic evaluation.
//!
//! A tower is a chain `Q = R_0 ⊂ R_1 ⊂ … ⊂ R_k` where `R_l = R_{l-1}[z]/(p_l)`
//! and each `p_l` is monic and squarefree over `R_{l-1}`. The defining
//! polynomials need not be irreducible, so `R_k` is a product of fields.
//! Zero tests are exact. Inverting an element that vanishes on some but not
//! all components raises [`Error::ZeroDivisor`] carrying a proper factor of
//! the offending level's polynomial; [`split_components`] and the frames that
//! adjoin levels catch it, split the tower and re-run.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::upoly::UPoly;
use super::{format_rational, Rational};
use crate::error::{Error, Result};

/// An element of a tower.
///
/// `Ext { level, coeffs }` is the polynomial `Σ coeffs[i]·g^i` in the
/// generator `g` of `level`; every coefficient lives strictly below `level`,
/// there are at least two coefficients and the last one is nonzero. Elements
/// that do not involve a generator collapse to the lower level, so the
/// representation is canonical and structural equality is ring equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Alg {
    Rat(Rational),
    Ext { level: usize, coeffs: Vec<Alg> },
}

impl Default for Alg {
    fn default() -> Self {
        Alg::zero()
    }
}

impl From<Rational> for Alg {
    fn from(r: Rational) -> Self {
        Alg::Rat(r)
    }
}

impl From<i64> for Alg {
    fn from(n: i64) -> Self {
        Alg::Rat(super::int(n))
    }
}

fn from_coeffs(level: usize, mut coeffs: Vec<Alg>) -> Alg {
    while coeffs.last().is_some_and(Alg::is_zero) {
        coeffs.pop();
    }
    match coeffs.len() {
        0 => Alg::zero(),
        1 => coeffs.pop().unwrap(),
        _ => Alg::Ext { level, coeffs },
    }
}

impl Alg {
    pub fn zero() -> Self {
        Alg::Rat(Rational::zero())
    }

    pub fn one() -> Self {
        Alg::Rat(Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Alg::Rat(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Alg::Rat(r) if r.is_one())
    }

    /// The level of the outermost generator involved, `None` for rationals.
    pub fn level(&self) -> Option<usize> {
        match self {
            Alg::Rat(_) => None,
            Alg::Ext { level, .. } => Some(*level),
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Alg::Rat(r) => Some(r),
            Alg::Ext { .. } => None,
        }
    }

    pub fn neg(&self) -> Alg {
        match self {
            Alg::Rat(r) => Alg::Rat(-r),
            Alg::Ext { level, coeffs } => Alg::Ext {
                level: *level,
                coeffs: coeffs.iter().map(Alg::neg).collect(),
            },
        }
    }

    pub fn add(&self, other: &Alg) -> Alg {
        match (self, other) {
            (Alg::Rat(a), Alg::Rat(b)) => Alg::Rat(a + b),
            _ if self.level() > other.level() => self.add_below(other),
            _ if other.level() > self.level() => other.add_below(self),
            (Alg::Ext { level, coeffs: a }, Alg::Ext { coeffs: b, .. }) => {
                let n = a.len().max(b.len());
                let sum = (0..n)
                    .map(|i| match (a.get(i), b.get(i)) {
                        (Some(x), Some(y)) => x.add(y),
                        (Some(x), None) | (None, Some(x)) => x.clone(),
                        (None, None) => unreachable!(),
                    })
                    .collect();
                from_coeffs(*level, sum)
            }
            _ => unreachable!(),
        }
    }

    // `other` lives strictly below `self`'s level.
    fn add_below(&self, other: &Alg) -> Alg {
        let Alg::Ext { level, coeffs } = self else {
            unreachable!()
        };
        let mut c = coeffs.clone();
        c[0] = c[0].add(other);
        from_coeffs(*level, c)
    }

    pub fn sub(&self, other: &Alg) -> Alg {
        self.add(&other.neg())
    }

    /// Multiplies by a rational scalar.
    pub fn scale(&self, r: &Rational) -> Alg {
        if r.is_zero() {
            return Alg::zero();
        }
        match self {
            Alg::Rat(a) => Alg::Rat(a * r),
            Alg::Ext { level, coeffs } => Alg::Ext {
                level: *level,
                coeffs: coeffs.iter().map(|c| c.scale(r)).collect(),
            },
        }
    }

    /// Renumbers every generator at level `from` or above by adding `by`.
    pub fn shift_levels(&self, from: usize, by: usize) -> Alg {
        match self {
            Alg::Rat(_) => self.clone(),
            Alg::Ext { level, coeffs } => Alg::Ext {
                level: if *level >= from { level + by } else { *level },
                coeffs: coeffs.iter().map(|c| c.shift_levels(from, by)).collect(),
            },
        }
    }

    /// Replaces the generator of `level` by the generator of `target`, which
    /// must sit above every level occurring in the coefficients. The result
    /// still has to be reduced in the target tower.
    pub fn rename_level(&self, level: usize, target: usize) -> Alg {
        match self {
            Alg::Rat(_) => self.clone(),
            Alg::Ext { level: l, coeffs } => Alg::Ext {
                level: if *l == level { target } else { *l },
                coeffs: coeffs.iter().map(|c| c.rename_level(level, target)).collect(),
            },
        }
    }

    /// Applies `f` to every rational leaf.
    pub fn map_rationals(&self, f: &impl Fn(&Rational) -> Rational) -> Alg {
        match self {
            Alg::Rat(r) => Alg::Rat(f(r)),
            Alg::Ext { level, coeffs } => {
                from_coeffs(*level, coeffs.iter().map(|c| c.map_rationals(f)).collect())
            }
        }
    }
}

/// A proper monic factor of the defining polynomial of `level`, found while
/// inverting a zero divisor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    pub level: usize,
    pub factor: Vec<Alg>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Level {
    pub name: String,
    /// Monic, low degree first; coefficients live below this level.
    pub modulus: Vec<Alg>,
}

impl Level {
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }
}

/// A (possibly empty) tower of extensions over the rationals.
#[derive(Clone, Debug, Default)]
pub struct Tower {
    levels: Arc<Vec<Level>>,
}

impl PartialEq for Tower {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.levels, &other.levels) || self.levels == other.levels
    }
}

impl Eq for Tower {}

impl Tower {
    /// The rationals.
    pub fn rational() -> Self {
        Tower::default()
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    /// Product of the level degrees.
    pub fn degree(&self) -> usize {
        self.levels.iter().map(Level::degree).product()
    }

    /// Degree of the levels from `from` upwards.
    pub fn relative_degree(&self, from: usize) -> usize {
        self.levels[from.min(self.len())..].iter().map(Level::degree).product()
    }

    /// The tower made of the first `n` levels.
    pub fn prefix(&self, n: usize) -> Tower {
        if n >= self.len() {
            return self.clone();
        }
        Tower {
            levels: Arc::new(self.levels[..n].to_vec()),
        }
    }

    /// True if `self` is `other` with zero or more levels added on top.
    pub fn extends(&self, other: &Tower) -> bool {
        other.len() <= self.len() && self.levels[..other.len()] == other.levels[..]
    }

    /// The larger of two towers when one extends the other.
    pub fn common(a: &Tower, b: &Tower) -> Option<Tower> {
        if a.extends(b) {
            Some(a.clone())
        } else if b.extends(a) {
            Some(b.clone())
        } else {
            None
        }
    }

    /// Number of leading levels the two towers share.
    pub fn common_prefix_len(a: &Tower, b: &Tower) -> usize {
        a.levels
            .iter()
            .zip(b.levels.iter())
            .take_while(|(x, y)| x == y)
            .count()
    }

    /// `a` followed by the levels of `b` above their common prefix. Elements
    /// of `b` embed through `shift_levels(common, a.len() - common)`.
    pub fn compositum(a: &Tower, b: &Tower) -> (Tower, usize) {
        let common = Tower::common_prefix_len(a, b);
        let by = a.len() - common;
        let mut levels = (*a.levels).clone();
        for lev in &b.levels[common..] {
            levels.push(Level {
                name: lev.name.clone(),
                modulus: lev.modulus.iter().map(|c| c.shift_levels(common, by)).collect(),
            });
        }
        (
            Tower {
                levels: Arc::new(levels),
            },
            common,
        )
    }

    pub fn generator(&self, level: usize) -> Alg {
        let v = vec![Alg::zero(), Alg::one()];
        self.reduce(&Alg::Ext { level, coeffs: v })
    }

    pub fn mul(&self, a: &Alg, b: &Alg) -> Alg {
        match (a, b) {
            (Alg::Rat(x), _) => b.scale(x),
            (_, Alg::Rat(y)) => a.scale(y),
            _ if a.level() > b.level() => self.mul_below(a, b),
            _ if b.level() > a.level() => self.mul_below(b, a),
            (Alg::Ext { level, coeffs: x }, Alg::Ext { coeffs: y, .. }) => {
                let mut prod = vec![Alg::zero(); x.len() + y.len() - 1];
                for (i, xi) in x.iter().enumerate() {
                    if xi.is_zero() {
                        continue;
                    }
                    for (j, yj) in y.iter().enumerate() {
                        prod[i + j] = prod[i + j].add(&self.mul(xi, yj));
                    }
                }
                from_coeffs(*level, self.reduce_poly(*level, prod))
            }
        }
    }

    fn mul_below(&self, a: &Alg, b: &Alg) -> Alg {
        let Alg::Ext { level, coeffs } = a else {
            unreachable!()
        };
        from_coeffs(*level, coeffs.iter().map(|c| self.mul(c, b)).collect())
    }

    /// Reduces a coefficient vector in the generator of `level` modulo its
    /// defining polynomial.
    fn reduce_poly(&self, level: usize, mut v: Vec<Alg>) -> Vec<Alg> {
        let m = &self.levels[level].modulus;
        let d = m.len() - 1;
        for k in (d..v.len()).rev() {
            let c = std::mem::take(&mut v[k]);
            if c.is_zero() {
                continue;
            }
            for i in 0..d {
                let t = self.mul(&c, &m[i]);
                v[k - d + i] = v[k - d + i].sub(&t);
            }
        }
        v.truncate(d);
        v
    }

    /// Brings an element written over an ancestor of this tower (or over a
    /// tower this one was split from) into canonical form.
    pub fn reduce(&self, a: &Alg) -> Alg {
        match a {
            Alg::Rat(_) => a.clone(),
            Alg::Ext { level, coeffs } => {
                let cs = coeffs.iter().map(|c| self.reduce(c)).collect();
                from_coeffs(*level, self.reduce_poly(*level, cs))
            }
        }
    }

    pub fn pow(&self, a: &Alg, mut e: u64) -> Alg {
        let mut base = a.clone();
        let mut acc = Alg::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Inverse of `a`, or a zero-divisor split.
    pub fn inv(&self, a: &Alg) -> Result<Alg> {
        match a {
            Alg::Rat(r) => {
                if r.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(Alg::Rat(r.recip()))
                }
            }
            Alg::Ext { level, coeffs } => {
                let base = self.prefix(*level);
                let p = UPoly::new(self.levels[*level].modulus.clone());
                let (g, s) = UPoly::new(coeffs.clone()).half_gcdext(&p, &base)?;
                if g.degree().unwrap_or(0) > 0 {
                    return Err(Error::ZeroDivisor(Box::new(Split {
                        level: *level,
                        factor: g.into_coeffs(),
                    })));
                }
                Ok(from_coeffs(*level, self.reduce_poly(*level, s.into_coeffs())))
            }
        }
    }

    pub fn div(&self, a: &Alg, b: &Alg) -> Result<Alg> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Adjoins a root of `p`. Linear polynomials return their root without
    /// growing the tower.
    pub fn adjoin(&self, name: &str, p: &UPoly) -> Result<(Tower, Alg)> {
        let p = p.reduce(self);
        let deg = match p.degree() {
            Some(d) if d >= 1 => d,
            _ => return Err(Error::InvalidInput("adjoin_root needs degree >= 1".into())),
        };
        let p = p.monic(self)?;
        if deg == 1 {
            return Ok((self.clone(), p.coeff(0).neg()));
        }
        let g = UPoly::gcd(&p, &p.derivative(), self)?;
        if g.degree() != Some(0) {
            return Err(Error::NotSquarefree);
        }
        let mut levels = (*self.levels).clone();
        levels.push(Level {
            name: name.to_string(),
            modulus: p.into_coeffs(),
        });
        let tower = Tower {
            levels: Arc::new(levels),
        };
        let gen = tower.generator(self.len());
        Ok((tower, gen))
    }

    /// Splits the tower along a zero-divisor factor into two components whose
    /// defining polynomials at `split.level` multiply to the original one.
    pub fn split(&self, split: &Split) -> Result<(Tower, Tower)> {
        let l = split.level;
        let base = self.prefix(l);
        let p = UPoly::new(self.levels[l].modulus.clone());
        let g = UPoly::new(split.factor.clone());
        let (h, r) = p.divrem(&g, &base)?;
        if !r.is_zero() {
            return Err(Error::InvalidInput("split factor does not divide modulus".into()));
        }
        let build = |factor: UPoly| -> Tower {
            let mut t = base.clone();
            let mut levels = (*base.levels).clone();
            levels.push(Level {
                name: self.levels[l].name.clone(),
                modulus: factor.into_coeffs(),
            });
            t.levels = Arc::new(levels.clone());
            for lev in &self.levels[l + 1..] {
                let modulus = lev.modulus.iter().map(|c| t.reduce(c)).collect();
                levels.push(Level {
                    name: lev.name.clone(),
                    modulus,
                });
                t.levels = Arc::new(levels.clone());
            }
            t
        };
        Ok((build(g), build(h)))
    }

    pub fn name(&self, level: usize) -> &str {
        &self.levels[level].name
    }

    /// Human-readable form using generator names, parseable by the branch DSL.
    pub fn format(&self, a: &Alg) -> String {
        match a {
            Alg::Rat(r) => format_rational(r),
            Alg::Ext { level, coeffs } => {
                let name = self.levels.get(*level).map_or("?", |l| l.name.as_str());
                let mut parts: Vec<String> = Vec::new();
                for (i, c) in coeffs.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let gen = match i {
                        0 => String::new(),
                        1 => name.to_string(),
                        _ => format!("{name}^{i}"),
                    };
                    let coef = self.format(c);
                    let term = if i == 0 {
                        coef
                    } else if c.is_one() {
                        gen
                    } else if c.level().is_some() {
                        format!("({coef})*{gen}")
                    } else {
                        format!("{coef}*{gen}")
                    };
                    parts.push(term);
                }
                let mut out = String::from("(");
                for (k, p) in parts.iter().enumerate() {
                    if k > 0 {
                        if let Some(rest) = p.strip_prefix('-') {
                            out.push_str(" - ");
                            out.push_str(rest);
                            continue;
                        }
                        out.push_str(" + ");
                    }
                    out.push_str(p);
                }
                out.push(')');
                out
            }
        }
    }

    /// JSON form: rationals as `"p/q"` strings, tower elements as
    /// `{"gen": name, "coeffs": [...]}` coordinate vectors.
    pub fn to_json(&self, a: &Alg) -> Value {
        match a {
            Alg::Rat(r) => Value::String(format_rational(r)),
            Alg::Ext { level, coeffs } => json!({
                "gen": self.levels.get(*level).map_or("?", |l| l.name.as_str()),
                "coeffs": coeffs.iter().map(|c| self.to_json(c)).collect::<Vec<_>>(),
            }),
        }
    }

    /// Levels with their minimal polynomials, for reports.
    pub fn describe(&self) -> Value {
        Value::Array(
            self.levels
                .iter()
                .map(|l| {
                    json!({
                        "name": l.name,
                        "minpoly": l.modulus.iter().map(|c| self.to_json(c)).collect::<Vec<_>>(),
                    })
                })
                .collect(),
        )
    }

    /// Sign of a rational element; `None` for irrational ones.
    pub fn rational_sign(a: &Alg) -> Option<i8> {
        a.as_rational().map(|r| {
            if r.is_zero() {
                0
            } else if r.is_positive() {
                1
            } else {
                -1
            }
        })
    }
}

impl fmt::Display for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "Q");
        }
        let parts: Vec<String> = self
            .levels
            .iter()
            .map(|l| {
                let p = UPoly::new(l.modulus.clone());
                format!("{}: {}", l.name, p.display(self, "z"))
            })
            .collect();
        write!(f, "Q[{}]", parts.join(", "))
    }
}

/// Runs `f` on `tower`, splitting the tower whenever `f` meets a zero divisor
/// on one of its existing levels, and returns one result per component.
pub fn split_components<T>(
    tower: &Tower,
    f: impl Fn(&Tower) -> Result<T>,
) -> Result<Vec<(Tower, T)>> {
    let mut out = Vec::new();
    let mut stack = vec![tower.clone()];
    while let Some(t) = stack.pop() {
        match f(&t) {
            Ok(v) => out.push((t, v)),
            Err(Error::ZeroDivisor(s)) if s.level < t.len() => {
                let (a, b) = t.split(&s)?;
                stack.push(b);
                stack.push(a);
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Like [`split_components`] but insists every component gives the same
/// answer.
pub fn uniform<T: PartialEq + fmt::Debug>(
    tower: &Tower,
    f: impl Fn(&Tower) -> Result<T>,
) -> Result<T> {
    let mut comps = split_components(tower, f)?;
    let (_, first) = comps.remove(0);
    if let Some((_, other)) = comps.iter().find(|(_, v)| *v != first) {
        return Err(Error::AmbiguousEmbedding(format!("{first:?} vs {other:?}")));
    }
    Ok(first)
}
