//! Implicit equations of parametrized branches, polar curves and Milnor
//! numbers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::tower::uniform;
use crate::algebra::{int, resultant_y, Alg, BivariatePolynomial, Rational, Tower, UPoly};
use crate::branch::PuiseuxBranch;
use crate::error::{Error, Result};
use crate::sampling::random_rational;

type Matrix = Vec<Vec<UPoly>>;

fn mat_mul(a: &Matrix, b: &Matrix, t: &Tower) -> Matrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n).fold(UPoly::zero(), |acc, k| {
                        if a[i][k].is_zero() || b[k][j].is_zero() {
                            acc
                        } else {
                            acc.add(&a[i][k].mul(&b[k][j], t))
                        }
                    })
                })
                .collect()
        })
        .collect()
}

/// `det(y·I - M)` by Faddeev–LeVerrier, coefficients low degree first.
fn char_poly(m: &Matrix, t: &Tower) -> Vec<UPoly> {
    let n = m.len();
    let mut c = vec![UPoly::zero(); n + 1];
    c[n] = UPoly::constant(Alg::one());
    let mut mk: Matrix = vec![vec![UPoly::zero(); n]; n];
    for k in 1..=n {
        let mut next = mat_mul(m, &mk, t);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] = row[i].add(&c[n - k + 1]);
        }
        mk = next;
        let am = mat_mul(m, &mk, t);
        let tr = (0..n).fold(UPoly::zero(), |acc, i| acc.add(&am[i][i]));
        let s = Alg::Rat(-(Rational::from_integer(1.into()) / int(k as i64)));
        c[n - k] = tr.scale(&s, t);
    }
    c
}

/// Implicit equation of an exact branch: the characteristic polynomial of
/// multiplication by `y(t)` on `K[x][t]/(t^n - x/λ)`, which is monic of
/// degree `n` in `y` and equals `Res_t(λt^n - x, y - y(t))` up to sign.
pub fn implicitize(b: &PuiseuxBranch) -> Result<BivariatePolynomial> {
    if !b.is_exact() {
        return Err(Error::InvalidInput(
            "implicitize needs a finite parametrization".into(),
        ));
    }
    let n = b.n as usize;
    let mut g = n as u64;
    for e in b.support() {
        g = num_integer::gcd(g, e as u64);
    }
    if g != 1 {
        return Err(Error::InvalidInput("parametrization is not primitive".into()));
    }
    uniform(&b.tower, |t| {
        let mu = t.inv(&b.x_coeff)?;
        let mut m: Matrix = vec![vec![UPoly::zero(); n]; n];
        for (i, c) in b.y.terms() {
            let c = t.reduce(c);
            for j in 0..n {
                let k = i + j;
                let (row, q) = (k % n, k / n);
                let coef = t.mul(&c, &t.pow(&mu, q as u64));
                m[row][j] = m[row][j].add(&UPoly::monomial(coef, q));
            }
        }
        let f = BivariatePolynomial::from_y_univariate(&char_poly(&m, t));
        let check = f.compose_series(&b.x_series().reduce(t), &b.y.reduce(t), t);
        if !check.is_zero_known() {
            return Err(Error::InvalidInput("implicit equation does not vanish on the branch".into()));
        }
        Ok(f)
    })
}

/// `a·f_x + b·f_y`.
pub fn polar(f: &BivariatePolynomial, a: &Rational, b: &Rational) -> Result<BivariatePolynomial> {
    use num_traits::Zero;
    if a.is_zero() && b.is_zero() {
        return Err(Error::InvalidInput("polar direction (0:0)".into()));
    }
    Ok(f.derivative_x().scale_rational(a).add(&f.derivative_y().scale_rational(b)))
}

/// `f(0, y) = c·y^d` with `d = deg_y f` and `c ≠ 0`: every root of `f_y`
/// then tends to the origin with `x`.
fn weierstrass_like(f: &BivariatePolynomial, t: &Tower) -> bool {
    let cols = f.to_y_univariate();
    let Some((lead, rest)) = cols.split_last() else {
        return false;
    };
    t.inv(&lead.coeff(0)).is_ok()
        && rest.iter().all(|c| c.coeff(0).is_zero())
}

fn resultant_order(f: &BivariatePolynomial, t: &Tower) -> Result<Option<u64>> {
    let r = resultant_y(&f.derivative_x(), &f.derivative_y(), t)?;
    Ok(r.order().map(|o| o as u64))
}

/// Milnor number `ord_x Res_y(f_x, f_y)` at the origin. Unless `f` is
/// already in Weierstrass shape the coordinates are sheared by
/// `x -> x + ρy` for random `ρ`, and two shears must agree.
pub fn milnor_number(f: &BivariatePolynomial, tower: &Tower) -> Result<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6d75);
    milnor_number_with_rng(f, tower, &mut rng)
}

pub fn milnor_number_with_rng(
    f: &BivariatePolynomial,
    tower: &Tower,
    rng: &mut ChaCha8Rng,
) -> Result<u64> {
    if f.is_zero() {
        return Err(Error::NonIsolated);
    }
    let rhos: Vec<Rational> = (0..8).map(|_| random_rational(rng, 7)).collect();
    uniform(tower, |t| {
        let f = f.reduce(t);
        if !f.coeff(0, 0).is_zero() {
            return Ok(0);
        }
        if weierstrass_like(&f, t) {
            return resultant_order(&f, t)?.ok_or(Error::NonIsolated);
        }
        let mut seen: Vec<Option<u64>> = Vec::new();
        for rho in &rhos {
            let g = f.shear_x(&Alg::Rat(rho.clone()), t);
            let mu = resultant_order(&g, t)?;
            if let Some(prev) = seen.iter().find(|p| **p == mu) {
                return prev.ok_or(Error::NonIsolated);
            }
            seen.push(mu);
        }
        Err(Error::AmbiguousEmbedding(format!("sheared Milnor numbers disagree: {seen:?}")))
    })
}
