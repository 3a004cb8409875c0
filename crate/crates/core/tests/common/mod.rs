#![allow(dead_code)]

use std::collections::BTreeMap;

use polar_core::algebra::{rat, Alg, Tower, UPoly};
use polar_core::branch::PuiseuxBranch;
use polar_core::equisingularity::EquisingularityType;
use polar_core::families::Family;
use polar_core::semigroup::NumericalSemigroup;
use proptest::prelude::*;

/// Type with the given branch semigroups and the upper triangle of the
/// intersection matrix listed row by row.
pub fn ty(branches: &[&[u64]], upper: &[u64]) -> EquisingularityType {
    let k = branches.len();
    let gs = branches
        .iter()
        .map(|g| NumericalSemigroup::from_generators(g).unwrap())
        .collect();
    let mut m = vec![vec![0; k]; k];
    let mut it = upper.iter();
    for i in 0..k {
        for j in i + 1..k {
            let v = *it.next().expect("upper triangle too short");
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    assert!(it.next().is_none(), "upper triangle too long");
    EquisingularityType::new(gs, m).unwrap()
}

pub fn q(n: i64, d: i64) -> Alg {
    Alg::Rat(rat(n, d))
}

pub fn family(name: &str) -> Family {
    Family::parse(name, &BTreeMap::new()).unwrap()
}

/// `Q[s]/(s^2 - 6)` and `s`.
pub fn sqrt6() -> (Tower, Alg) {
    Tower::rational().adjoin("s", &UPoly::from_rationals(&[-6, 0, 1])).unwrap()
}

pub struct Table32Case {
    pub label: &'static str,
    pub family: String,
    pub given: Vec<(&'static str, Alg)>,
    pub expected: EquisingularityType,
}

/// Second normal form of multiplicity four, one or two instances per row of
/// the polar table; `a1 = 4s/9` is the wall value with `α = 0`.
pub fn table32() -> (Tower, Vec<Table32Case>) {
    let (t, s) = sqrt6();
    let wall = t.mul(&s, &q(4, 9));
    let second = t.mul(&s, &q(-4, 81));
    let case = |label, m: u32, j: u32, given: Vec<(&'static str, Alg)>, expected| Table32Case {
        label,
        family: format!("mult4-g1/2/{m}/{j}"),
        given,
        expected,
    };
    let cases = vec![
        // all a_i = 0
        case("I.i", 11, 2, vec![], ty(&[&[3, 10]], &[])),
        case("I.i", 13, 2, vec![], ty(&[&[1], &[1], &[1]], &[4, 4, 4])),
        case("I.ii", 9, 4, vec![], ty(&[&[1], &[2, 5]], &[5])),
        case("I.ii", 11, 5, vec![], ty(&[&[1], &[1], &[1]], &[3, 3, 3])),
        case("I.iii", 7, 3, vec![], ty(&[&[1], &[1], &[1]], &[2, 2, 2])),
        case("I.iii", 13, 5, vec![], ty(&[&[1], &[1], &[1]], &[4, 4, 4])),
        // first nonzero a_k
        case("II.i", 21, 8, vec![("a1", q(3, 2))], ty(&[&[3, 19]], &[])),
        case("II.i", 23, 8, vec![("a1", q(3, 2))], ty(&[&[1], &[1], &[1]], &[7, 7, 7])),
        case(
            "II.ii",
            21,
            10,
            vec![("a1", q(2, 1)), ("a2", q(0, 1)), ("a3", q(0, 1))],
            ty(&[&[1], &[2, 11]], &[11]),
        ),
        case(
            "II.ii",
            19,
            9,
            vec![("a1", q(0, 1)), ("a2", q(5, 3)), ("a3", q(1, 1))],
            ty(&[&[1], &[1], &[1]], &[5, 5, 5]),
        ),
        case("II.iii", 11, 5, vec![("a1", q(1, 1))], ty(&[&[1], &[1], &[1]], &[3, 3, 3])),
        case("II.iii a", 11, 5, vec![("a1", wall.clone())], ty(&[&[1], &[2, 7]], &[6])),
        case(
            "II.iii b.1.1",
            21,
            9,
            vec![("a1", wall.clone()), ("a2", q(3, 1))],
            ty(&[&[1], &[2, 13]], &[12]),
        ),
        case(
            "II.iii b.1.2",
            25,
            11,
            vec![("a1", wall.clone()), ("a2", q(0, 1)), ("a3", q(2, 1))],
            ty(&[&[1], &[1], &[1]], &[7, 7, 8]),
        ),
        case(
            "II.iii b.2",
            19,
            9,
            vec![("a1", wall.clone()), ("a2", q(0, 1)), ("a3", q(2, 1))],
            ty(&[&[1], &[2, 11]], &[10]),
        ),
        case(
            "II.iii b.3.1",
            15,
            7,
            vec![("a1", wall.clone()), ("a2", q(1, 1))],
            ty(&[&[1], &[2, 9]], &[8]),
        ),
        case(
            "II.iii b.3.2",
            15,
            7,
            vec![("a1", wall.clone()), ("a2", second)],
            ty(&[&[1], &[1], &[1]], &[4, 4, 5]),
        ),
    ];
    (t, cases)
}

pub fn table32_branch(tower: &Tower, c: &Table32Case) -> PuiseuxBranch {
    let fam = family(&c.family);
    let given: BTreeMap<String, Alg> = c.given.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
    fam.sample_with(&given, tower, 1, 0).unwrap().branch
}

/// `(β, k)` for every multiplicity-three normal form with `β` in the test
/// range; `k = None` is the monomial curve.
pub fn mult3_cases() -> Vec<(u32, Option<u32>)> {
    let mut out = Vec::new();
    for beta in [7u32, 8, 10, 11, 13, 14] {
        out.push((beta, None));
        for k in 0..=(beta / 3 - 2) {
            out.push((beta, Some(k)));
        }
    }
    out
}

pub fn mult3_family(beta: u32, k: Option<u32>) -> Family {
    match k {
        Some(k) => family(&format!("mult3/{beta}/{k}")),
        None => family(&format!("mult3/{beta}")),
    }
}

/// Branches used by the cross-checks.
pub fn fixtures() -> Vec<(String, PuiseuxBranch)> {
    let mut out = Vec::new();
    for row in 1..=18 {
        let f = family(&format!("gamma-5-12/{row}"));
        out.push((format!("row {row}"), f.sample(3, 0, false).unwrap().branch));
    }
    for (beta, k) in mult3_cases() {
        let f = mult3_family(beta, k);
        out.push((f.to_string(), f.sample(1, 0, false).unwrap().branch));
    }
    let (t, cases) = table32();
    for c in &cases {
        out.push((format!("{} {}", c.label, c.family), table32_branch(&t, c)));
    }
    for (v1, v2) in [(6, 13), (6, 17), (10, 21)] {
        let f = family(&format!("mult4-g2/{v1}/{v2}"));
        out.push((f.to_string(), f.sample(1, 0, false).unwrap().branch));
    }
    out.push(("example 2".into(), PuiseuxBranch::from_int_terms(5, &[(12, 1), (21, 1)])));
    out.push(("<3,11>".into(), PuiseuxBranch::from_int_terms(3, &[(11, 1)])));
    out
}

fn coefficient() -> impl Strategy<Value = String> {
    prop_oneof![
        Just(String::new()),
        (-9i64..=9, 1i64..=9)
            .prop_filter("nonzero", |(n, _)| *n != 0)
            .prop_map(|(n, d)| format!("{n}/{d} ")),
        (-20i64..=20).prop_filter("nonzero", |n| *n != 0).prop_map(|n| format!("{n}*")),
        Just("c ".to_string()),
        (1i64..=5, -5i64..=5).prop_map(|(a, b)| format!("({a}/3 + {b}*s) ")),
    ]
}

/// Random DSL text for a valid branch: multiplicity, increasing exponents
/// above it, assorted coefficient syntax, an optional `O(t^N)` and bindings.
pub fn spec_text() -> impl Strategy<Value = String> {
    (2u32..=7, prop::collection::btree_set(1u32..=40, 1..=5))
        .prop_flat_map(|(n, offs)| {
            let exps: Vec<u32> = offs.into_iter().map(|o| n + o).collect();
            let k = exps.len();
            (
                Just(n),
                Just(exps),
                prop::collection::vec(coefficient(), k),
                prop::option::of(1u32..=6),
                (-9i64..=9).prop_filter("nonzero", |c| *c != 0),
                prop::sample::select(vec![2i64, 3, 5, 6, 7]),
            )
        })
        .prop_map(|(n, exps, coefs, big_o, c, d)| {
            let mut y = String::new();
            for (i, (e, coef)) in exps.iter().zip(&coefs).enumerate() {
                if i > 0 {
                    y.push_str(" + ");
                }
                y.push_str(&format!("{coef}t^{e}"));
            }
            if let Some(extra) = big_o {
                y.push_str(&format!(" + O(t^{})", exps.last().unwrap() + extra));
            }
            format!("x = t^{n}; y = {y} where c = {c}, s = root(z^2 - {d})")
        })
}
