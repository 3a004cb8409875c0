//! Checks against computations that avoid the library's own code paths:
//! plain rational series, closed forms and published value tables.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use polar_core::algebra::{resultant_y, Alg, BivariatePolynomial};
use polar_core::branch::{semigroup_of_branch, PuiseuxBranch};
use polar_core::differentials::differential_values;
use polar_core::equisingularity::branch_intersection;
use polar_core::implicit::implicitize;
use proptest::prelude::*;

use common::family;

type Series = Vec<BigRational>;

fn rational_coeffs(b: &PuiseuxBranch, len: usize) -> Series {
    (0..len)
        .map(|i| b.y.coeff(i).as_rational().cloned().expect("rational branch"))
        .collect()
}

fn mul(a: &Series, b: &Series, len: usize) -> Series {
    let mut out = vec![BigRational::zero(); len];
    for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (j, y) in b.iter().enumerate().take(len.saturating_sub(i)) {
            out[i + j] += x * y;
        }
    }
    out
}

fn order(s: &Series) -> Option<usize> {
    s.iter().position(|c| !c.is_zero())
}

/// `Λ \ Γ` by reducing `x^i y^j x'` and `x^i y^j y'` to distinct leading
/// orders, one row at a time.
fn brute_lambda(b: &PuiseuxBranch) -> Vec<u64> {
    let n = b.n as usize;
    let gamma = semigroup_of_branch(b).unwrap();
    let c = gamma.conductor() as usize;
    let len = c + n + 1;
    let y = rational_coeffs(b, len);
    let m = order(&y).unwrap();
    let mut dx = vec![BigRational::zero(); len];
    dx[n - 1] = BigRational::from_integer(n.into());
    let dy: Series = (0..len)
        .map(|i| if i + 1 < len { &y[i + 1] * BigRational::from_integer((i + 1).into()) } else { BigRational::zero() })
        .collect();
    let mut rows: Vec<Series> = Vec::new();
    let mut ypow = vec![BigRational::zero(); len];
    ypow[0] = BigRational::one();
    for j in 0..=len / m {
        for i in 0..=len / n {
            if i * n + j * m >= len {
                break;
            }
            let mut mono = vec![BigRational::zero(); len];
            for (k, v) in ypow.iter().enumerate() {
                if k + i * n < len {
                    mono[k + i * n] = v.clone();
                }
            }
            rows.push(mul(&mono, &dx, len));
            rows.push(mul(&mono, &dy, len));
        }
        ypow = mul(&ypow, &y, len);
    }
    let mut basis: BTreeMap<usize, Series> = BTreeMap::new();
    for mut r in rows {
        while let Some(o) = order(&r) {
            match basis.get(&o) {
                Some(p) => {
                    let f = &r[o] / &p[o];
                    for k in o..len {
                        let d = &p[k] * &f;
                        r[k] -= d;
                    }
                }
                None => {
                    basis.insert(o, r);
                    break;
                }
            }
        }
    }
    basis
        .keys()
        .map(|&o| o as u64 + 1)
        .filter(|&v| v < c as u64 && !gamma.contains(v))
        .collect()
}

/// Equation of a multiplicity-two branch: with `y = E(t^2) + O(t)` split by
/// parity, `(y - E(x))^2 = O(t)^2`, a series in `x = t^2`.
fn double_cover_equation(b: &PuiseuxBranch) -> BivariatePolynomial {
    let top = b.y.coeffs().len();
    let y = rational_coeffs(b, top);
    let mut terms: BTreeMap<(u32, u32), BigRational> = BTreeMap::new();
    let mut add = |k: (u32, u32), v: BigRational| {
        *terms.entry(k).or_insert_with(BigRational::zero) += v;
    };
    add((0, 2), BigRational::one());
    let even: Vec<(u32, &BigRational)> =
        y.iter().enumerate().filter(|(e, c)| e % 2 == 0 && !c.is_zero()).map(|(e, c)| (e as u32 / 2, c)).collect();
    for &(e, c) in &even {
        add((e, 1), -c * BigRational::from_integer(2.into()));
        for &(e2, c2) in &even {
            add((e + e2, 0), c * c2);
        }
    }
    let odd: Vec<(usize, &BigRational)> =
        y.iter().enumerate().filter(|(e, c)| e % 2 == 1 && !c.is_zero()).collect();
    for &(e, c) in &odd {
        for &(e2, c2) in &odd {
            add(((e + e2) as u32 / 2, 0), -(c * c2));
        }
    }
    BivariatePolynomial::from_terms(terms.into_iter().map(|(k, v)| (k, Alg::Rat(v))))
}

fn branch_from(n: u32, terms: &[(usize, i64)]) -> PuiseuxBranch {
    PuiseuxBranch::from_int_terms(n, terms)
}

fn small_branch(max_n: u32) -> impl Strategy<Value = PuiseuxBranch> {
    (2u32..=max_n, 1usize..=7, prop::collection::btree_map(1usize..=8, -3i64..=3, 0..=2))
        .prop_map(|(n, off, tail)| {
            let m = n as usize + off;
            let mut terms = vec![(m, 1i64)];
            terms.extend(tail.into_iter().filter(|&(_, c)| c != 0).map(|(e, c)| (m + e, c)));
            (n, terms)
        })
        .prop_filter("primitive", |(n, terms)| terms.iter().fold(*n as usize, |g, (e, _)| g.gcd(e)) == 1)
        .prop_map(|(n, terms)| branch_from(n, &terms))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn double_cover_implicit_equation(b in small_branch(2)) {
        prop_assert_eq!(implicitize(&b).unwrap(), double_cover_equation(&b));
    }

    #[test]
    fn differential_values_by_elimination(b in small_branch(4)) {
        prop_assert_eq!(differential_values(&b).unwrap().extra, brute_lambda(&b));
    }

    #[test]
    fn intersection_from_resultant(b1 in small_branch(3), b2 in small_branch(3)) {
        prop_assume!(b1 != b2);
        let f1 = implicitize(&b1).unwrap();
        let f2 = implicitize(&b2).unwrap();
        let r = resultant_y(&f1, &f2, &b1.tower).unwrap();
        prop_assume!(!r.is_zero());
        let by_resultant = r.order().unwrap() as u64;
        prop_assert_eq!(branch_intersection(&b1, &b2).unwrap(), by_resultant);
    }
}

#[test]
fn monomial_curves() {
    for (n, m) in [(2u32, 3usize), (3, 7), (4, 9), (5, 12), (7, 10)] {
        let f = implicitize(&branch_from(n, &[(m, 1)])).unwrap();
        assert_eq!(f, BivariatePolynomial::from_int_terms(&[((0, n), 1), ((m as u32, 0), -1)]));
        assert_eq!(
            semigroup_of_branch(&branch_from(n, &[(m, 1)])).unwrap().conductor(),
            (n as u64 - 1) * (m as u64 - 1)
        );
    }
}

#[test]
fn strata_lambda_by_elimination() {
    for row in 1..=18 {
        let b = family(&format!("gamma-5-12/{row}")).sample(21, 0, false).unwrap().branch;
        assert_eq!(differential_values(&b).unwrap().extra, brute_lambda(&b), "row {row}");
    }
}

fn set(v: impl IntoIterator<Item = u64>) -> Vec<u64> {
    v.into_iter().collect::<BTreeSet<_>>().into_iter().collect()
}

#[test]
fn genus_one_multiplicity_four_lambda() {
    for m in [9u64, 11, 13, 15, 17, 19, 21] {
        let q = m / 4;
        for j in 2..=m / 2 {
            let b = family(&format!("mult4-g1/2/{m}/{j}")).sample(4, 0, false).unwrap().branch;
            let want = set((1..j).map(|s| 3 * m - 4 * s));
            assert_eq!(differential_values(&b).unwrap().extra, want, "form 2, m={m}, j={j}");
        }
        for j in 2..=q {
            for k in 1..=q.saturating_sub(j) {
                let b = family(&format!("mult4-g1/3/{m}/{j}/{k}")).sample(4, 0, false).unwrap().branch;
                let want = set((1..j).map(|s| 2 * m - 4 * s).chain((1..=q + 1 - k).map(|s| 3 * m - 4 * s)));
                assert_eq!(differential_values(&b).unwrap().extra, want, "form 3, m={m}, j={j}, k={k}");
            }
            let b = family(&format!("mult4-g1/4/{m}/{j}")).sample(4, 0, false).unwrap().branch;
            let want = set((1..j).map(|s| 2 * m - 4 * s).chain((1..=j).map(|s| 3 * m - 4 * s)));
            assert_eq!(differential_values(&b).unwrap().extra, want, "form 4, m={m}, j={j}");
            let b = family(&format!("mult4-g1/5/{m}/{j}")).sample(4, 0, false).unwrap().branch;
            let want = set((1..j).map(|s| 2 * m - 4 * s).chain((1..j).map(|s| 3 * m - 4 * s)));
            assert_eq!(differential_values(&b).unwrap().extra, want, "form 5, m={m}, j={j}");
        }
    }
}

#[test]
fn genus_two_multiplicity_four_lambda() {
    for (v1, v2) in [(6u64, 13u64), (6, 17), (10, 21), (10, 23), (14, 29)] {
        let b = family(&format!("mult4-g2/{v1}/{v2}")).sample(4, 0, false).unwrap().branch;
        // s stops at v1/2 - 1; two more steps would reach values below v1 + 4
        let want = set((1..v1 / 2).map(|s| v2 + v1 - 4 * s));
        let got = differential_values(&b).unwrap().extra;
        assert_eq!(got, brute_lambda(&b), "({v1},{v2})");
        assert_eq!(got, want, "({v1},{v2})");
    }
}
