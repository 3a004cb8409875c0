//! Analytic equivalence of branches in normal form.

use crate::algebra::tower::uniform;
use crate::algebra::{Alg, Tower, UPoly};
use crate::branch::PuiseuxBranch;
use crate::error::{Error, Result};

/// Decides whether two normal forms `t^{v1} + t^λ + Σ c_i t^i` are
/// analytically equivalent: some `ζ` with `ζ^(λ - v1) = 1` must satisfy
/// `c_i = ζ^(i - v1)·c'_i` for every `i`. The admissible `ζ` are the common
/// roots of `z^(λ - v1) - 1` and the polynomials `c'_i z^(i - v1) - c_i`,
/// so the answer is whether their gcd has positive degree.
pub fn normal_form_equivalent(b1: &PuiseuxBranch, b2: &PuiseuxBranch, lambda: u64) -> Result<bool> {
    if b1.n != b2.n {
        return Err(Error::Incomparable("multiplicities differ".into()));
    }
    if !b1.x_coeff.is_one() || !b2.x_coeff.is_one() {
        return Err(Error::Incomparable("branches are not in normal form".into()));
    }
    if !b1.is_exact() || !b2.is_exact() {
        return Err(Error::Incomparable("normal forms must be finite".into()));
    }
    let support = b1.support();
    if support != b2.support() {
        return Err(Error::Incomparable("exponent supports differ".into()));
    }
    let Some(&v1) = support.first() else {
        return Err(Error::Incomparable("empty normal form".into()));
    };
    let v1 = v1 as u64;
    if lambda <= v1 || !support.contains(&(lambda as usize)) {
        return Err(Error::Incomparable(format!("λ = {lambda} is not a term of the normal form")));
    }
    let tower = Tower::common(&b1.tower, &b2.tower)
        .ok_or_else(|| Error::Incomparable("coefficients live in unrelated towers".into()))?;
    let e = (lambda - v1) as usize;
    uniform(&tower, |t| {
        let mut zeta_eq = vec![Alg::zero(); e + 1];
        zeta_eq[0] = Alg::from(-1);
        zeta_eq[e] = Alg::one();
        let mut g = UPoly::new(zeta_eq);
        for &i in &support {
            let c = t.reduce(&b1.y.coeff(i));
            let c2 = t.reduce(&b2.y.coeff(i));
            let k = (i - v1 as usize) % e;
            let mut p = vec![Alg::zero(); k + 1];
            p[k] = p[k].add(&c2);
            p[0] = p[0].sub(&c);
            let p = UPoly::new(p);
            if p.is_zero() {
                continue;
            }
            g = UPoly::gcd(&g, &p, t)?;
            if g.degree() == Some(0) {
                return Ok(false);
            }
        }
        Ok(g.degree().unwrap_or(0) >= 1)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::TruncatedSeries;

    fn nf(coeffs: &[(usize, Alg)], tower: &Tower) -> PuiseuxBranch {
        let y = TruncatedSeries::from_terms(coeffs.iter().cloned(), None);
        PuiseuxBranch::new(4, y, tower.clone()).unwrap()
    }

    #[test]
    fn cube_roots_of_unity_identify_coefficients() {
        // ζ^3 = 1 and c_21 = ζ^10 c'_21 = ζ c'_21
        let q = Tower::rational();
        let a = nf(&[(11, Alg::one()), (14, Alg::one()), (21, Alg::from(2))], &q);
        let b = nf(&[(11, Alg::one()), (14, Alg::one()), (21, Alg::from(2))], &q);
        assert!(normal_form_equivalent(&a, &b, 14).unwrap());
        let c = nf(&[(11, Alg::one()), (14, Alg::one()), (21, Alg::from(3))], &q);
        assert!(!normal_form_equivalent(&a, &c, 14).unwrap());
        let d = nf(&[(11, Alg::one()), (14, Alg::one()), (17, Alg::one())], &q);
        assert!(matches!(normal_form_equivalent(&a, &d, 14), Err(Error::Incomparable(_))));
    }
}
