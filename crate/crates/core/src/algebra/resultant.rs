//! Resultants over `R[x]` by the subresultant remainder sequence.

use super::bipoly::BivariatePolynomial;
use super::tower::{Alg, Tower};
use super::upoly::UPoly;
use crate::error::Result;

/// A polynomial in `y` whose coefficients are polynomials in `x`.
type YPoly = Vec<UPoly>;

fn trim(mut p: YPoly) -> YPoly {
    while p.last().is_some_and(UPoly::is_zero) {
        p.pop();
    }
    p
}

fn deg(p: &YPoly) -> usize {
    p.len() - 1
}

fn one() -> UPoly {
    UPoly::constant(Alg::one())
}

fn pow(p: &UPoly, e: usize, t: &Tower) -> UPoly {
    p.pow(e as u64, t)
}

/// `lc(b)^(deg a - deg b + 1) · a mod b`.
fn prem(a: &YPoly, b: &YPoly, t: &Tower) -> YPoly {
    let lb = b.last().unwrap().clone();
    let db = deg(b);
    let mut r = a.clone();
    let mut steps = 0usize;
    let total = deg(a) + 1 - db;
    while !r.is_empty() && deg(&r) >= db {
        let lr = r.last().unwrap().clone();
        let shift = deg(&r) - db;
        let mut next: YPoly = r.iter().map(|c| c.mul(&lb, t)).collect();
        for (i, c) in b.iter().enumerate() {
            next[i + shift] = next[i + shift].sub(&c.mul(&lr, t));
        }
        r = trim(next);
        steps += 1;
    }
    if steps < total {
        let f = pow(&lb, total - steps, t);
        r = r.iter().map(|c| c.mul(&f, t)).collect();
    }
    r
}

/// Resultant of `a` and `b`, both given by coefficient lists in `y`
/// (lowest degree first) over `R[x]`.
pub fn resultant(a: &[UPoly], b: &[UPoly], t: &Tower) -> Result<UPoly> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    if a.is_empty() || b.is_empty() {
        return Ok(UPoly::zero());
    }
    let mut sign = false;
    if deg(&a) < deg(&b) {
        if deg(&a) % 2 == 1 && deg(&b) % 2 == 1 {
            sign = !sign;
        }
        std::mem::swap(&mut a, &mut b);
    }
    if deg(&b) == 0 {
        let r = pow(&b[0], deg(&a), t);
        return Ok(if sign { r.neg() } else { r });
    }
    let mut g = one();
    let mut h = one();
    loop {
        let delta = deg(&a) - deg(&b);
        if deg(&a) % 2 == 1 && deg(&b) % 2 == 1 {
            sign = !sign;
        }
        let r = prem(&a, &b, t);
        if r.is_empty() {
            return Ok(UPoly::zero());
        }
        let div = g.mul(&pow(&h, delta, t), t);
        let mut nb = Vec::with_capacity(r.len());
        for c in &r {
            nb.push(c.exact_div(&div, t)?);
        }
        a = b;
        b = nb;
        g = a.last().unwrap().clone();
        h = if delta == 0 {
            h
        } else {
            pow(&g, delta, t).exact_div(&pow(&h, delta - 1, t), t)?
        };
        if deg(&b) == 0 {
            let da = deg(&a);
            let lb = b[0].clone();
            let r = if da == 0 {
                one()
            } else {
                pow(&lb, da, t).exact_div(&pow(&h, da - 1, t), t)?
            };
            return Ok(if sign { r.neg() } else { r });
        }
    }
}

/// `Res_y(f, g)` as a polynomial in `x`.
pub fn resultant_y(
    f: &BivariatePolynomial,
    g: &BivariatePolynomial,
    t: &Tower,
) -> Result<UPoly> {
    resultant(&f.to_y_univariate(), &g.to_y_univariate(), t)
}

/// Sylvester matrix of `f` and `g` with respect to `y`; rows hold
/// coefficients from the highest power of `y` down.
pub fn sylvester_matrix(f: &BivariatePolynomial, g: &BivariatePolynomial) -> Vec<Vec<UPoly>> {
    let fc = trim(f.to_y_univariate());
    let gc = trim(g.to_y_univariate());
    if fc.is_empty() || gc.is_empty() {
        return Vec::new();
    }
    let (m, n) = (deg(&fc), deg(&gc));
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for (src, count, d) in [(&fc, n, m), (&gc, m, n)] {
        for r in 0..count {
            let mut row = vec![UPoly::zero(); size];
            for k in 0..=d {
                row[r + k] = src[d - k].clone();
            }
            rows.push(row);
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bp(terms: &[((u32, u32), i64)]) -> BivariatePolynomial {
        BivariatePolynomial::from_int_terms(terms)
    }

    #[test]
    fn cusp_polars() {
        let t = Tower::rational();
        // f = y^2 - x^3: f_x = -3x^2, f_y = 2y
        let f = bp(&[((0, 2), 1), ((3, 0), -1)]);
        let r = resultant_y(&f.derivative_x(), &f.derivative_y(), &t).unwrap();
        assert_eq!(r.order(), Some(2));
    }

    #[test]
    fn linear_in_y() {
        let t = Tower::rational();
        // Res_y(y - x, y + x) = -2x up to sign convention: (-x) - (x)
        let a = bp(&[((0, 1), 1), ((1, 0), -1)]);
        let b = bp(&[((0, 1), 1), ((1, 0), 1)]);
        let r = resultant_y(&a, &b, &t).unwrap();
        assert_eq!(r, UPoly::new(vec![Alg::zero(), Alg::from(2)]));
    }

    #[test]
    fn common_factor_gives_zero() {
        let t = Tower::rational();
        let a = bp(&[((0, 2), 1), ((2, 0), -1)]);
        let b = bp(&[((0, 1), 1), ((1, 0), -1)]);
        assert!(resultant_y(&a, &b, &t).unwrap().is_zero());
    }
}
