//! Values of Kähler differentials on a branch and the Zariski invariant.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::tower::uniform;
use crate::algebra::{Alg, Tower, TruncatedSeries};
use crate::branch::{semigroup_of_branch, PuiseuxBranch};
use crate::error::{Error, Result};
use crate::semigroup::NumericalSemigroup;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DifferentialValues {
    pub gamma: NumericalSemigroup,
    /// `Λ \ Γ`, sorted.
    pub extra: Vec<u64>,
    pub lambda: Option<u64>,
}

/// `ν(A dx + B dy) = ord_t(A·x' + B·y') + 1`, collected over the module
/// generated by `dx` and `dy`, below the conductor.
pub fn differential_values(b: &PuiseuxBranch) -> Result<DifferentialValues> {
    differential_values_to(b, 0)
}

/// As [`differential_values`], with the working truncation raised to
/// `bound` when that exceeds the default `c + n`.
pub fn differential_values_to(b: &PuiseuxBranch, bound: usize) -> Result<DifferentialValues> {
    let gamma = semigroup_of_branch(b)?;
    let c = gamma.conductor() as usize;
    let n = b.n as usize;
    let bound = bound.max(c + n);
    let orders = uniform(&b.tower, |t| pivot_orders(b, t, bound, c))?;
    let extra: Vec<u64> = orders
        .into_iter()
        .map(|o| o as u64 + 1)
        .filter(|&v| v < c as u64 && !gamma.contains(v))
        .collect();
    let lambda = extra.first().map(|&m| m - gamma.multiplicity());
    Ok(DifferentialValues {
        gamma,
        extra,
        lambda,
    })
}

pub fn zariski_invariant(d: &DifferentialValues) -> Option<u64> {
    d.lambda
}

/// Leading orders of a valuation-echelon basis of the pullbacks of
/// `x^i y^j dx`, `x^i y^j dy` modulo `t^bound`. Orders below `needed - 1`
/// must be certified by the available precision.
fn pivot_orders(b: &PuiseuxBranch, t: &Tower, bound: usize, needed: usize) -> Result<Vec<usize>> {
    let x = b.x_series().reduce(t);
    let y = b.y.reduce(t).truncate(bound);
    let dx = x.derivative();
    let dy = y.derivative();
    let n = b.n as usize;
    let m = b.y_order().unwrap_or(bound);

    let mut candidates: Vec<TruncatedSeries> = Vec::new();
    let mut xi = TruncatedSeries::monomial(Alg::one(), 0);
    let mut i = 0;
    while i * n < bound {
        let mut mono = xi.clone();
        let mut j = 0;
        while i * n + j * m < bound {
            for d in [&dx, &dy] {
                let s = mono.mul(d, t).truncate(bound);
                if s.precision().unwrap_or(bound) + 1 < needed {
                    return Err(Error::TruncationTooSmall(format!(
                        "differential pullback known only below t^{}",
                        s.precision().unwrap_or(0)
                    )));
                }
                candidates.push(s);
            }
            mono = mono.mul(&y, t).truncate(bound);
            j += 1;
            if m == 0 {
                break;
            }
        }
        xi = xi.mul(&x, t).truncate(bound);
        i += 1;
    }

    let mut pivots: BTreeMap<usize, Vec<Alg>> = BTreeMap::new();
    for s in candidates {
        let mut v: Vec<Alg> = (0..bound).map(|k| s.coeff(k)).collect();
        let limit = s.precision().unwrap_or(bound).min(bound);
        while let Some(o) = (0..limit).find(|&k| !v[k].is_zero()) {
            match pivots.get(&o) {
                Some(p) => {
                    let c = v[o].clone();
                    for k in o..limit {
                        if !p[k].is_zero() {
                            v[k] = v[k].sub(&t.mul(&c, &p[k]));
                        }
                    }
                }
                None => {
                    let inv = t.inv(&v[o])?;
                    let p: Vec<Alg> = v.iter().map(|a| t.mul(a, &inv)).collect();
                    pivots.insert(o, p);
                    break;
                }
            }
        }
    }
    Ok(pivots.into_keys().collect())
}
