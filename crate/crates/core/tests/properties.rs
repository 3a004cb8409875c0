mod common;

use num_integer::Integer;
use polar_core::algebra::{rat, Alg, BivariatePolynomial, Tower, TruncatedSeries, UPoly};
use polar_core::branch::{semigroup_of_branch, PuiseuxBranch};
use polar_core::dsl::{parse_branch_dsl, print_branch};
use polar_core::equisingularity::{equisingularity_type, intersection_multiplicity, EquisingularityType};
use polar_core::generic::{generic_polar_type, Parallelism};
use polar_core::implicit::{implicitize, milnor_number, polar};
use polar_core::normal_form::normal_form_equivalent;
use polar_core::semigroup::NumericalSemigroup;
use proptest::prelude::*;

use common::spec_text;

/// Membership up to `bound` by dynamic programming over the generators.
fn brute_members(gens: &[u64], bound: u64) -> Vec<bool> {
    let mut m = vec![false; bound as usize + 1];
    m[0] = true;
    for v in 1..=bound {
        m[v as usize] = gens.iter().any(|&g| g <= v && m[(v - g) as usize]);
    }
    m
}

fn small_branch() -> impl Strategy<Value = PuiseuxBranch> {
    (2u32..=4, 1usize..=8, prop::collection::btree_map(1usize..=10, -3i64..=3, 0..=2))
        .prop_map(|(n, off, tail)| {
            let m = n as usize + off;
            let mut terms = vec![(m, 1i64)];
            terms.extend(tail.into_iter().filter(|&(_, c)| c != 0).map(|(e, c)| (m + e, c)));
            (n, terms)
        })
        .prop_filter("primitive parametrization", |(n, terms)| {
            terms.iter().fold(*n as usize, |g, (e, _)| g.gcd(e)) == 1
        })
        .prop_map(|(n, terms)| PuiseuxBranch::from_int_terms(n, &terms))
}

fn small_poly() -> impl Strategy<Value = BivariatePolynomial> {
    prop::collection::btree_map((0u32..=6, 0u32..=3), -4i64..=4, 1..=5)
        .prop_map(|m| {
            let terms: Vec<((u32, u32), i64)> = m.into_iter().filter(|&(k, _)| k != (0, 0)).collect();
            BivariatePolynomial::from_int_terms(&terms)
        })
        .prop_filter("nonzero", |p| !p.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn semigroup_matches_brute_force(gens in prop::collection::vec(2u64..=20, 2..=3)) {
        let g = gens.iter().fold(0, |a, &b| a.gcd(&b));
        prop_assume!(g == 1);
        let s = NumericalSemigroup::from_generators(&gens).unwrap();
        let bound = gens.iter().product::<u64>() + 1;
        let members = brute_members(&gens, bound);
        let c = (0..=bound).rev().find(|&v| !members[v as usize]).map_or(0, |v| v + 1);
        prop_assert_eq!(s.conductor(), c);
        let gaps: Vec<u64> = (0..c).filter(|&v| !members[v as usize]).collect();
        prop_assert_eq!(s.gaps(), &gaps[..]);
        for v in 0..=bound {
            prop_assert_eq!(s.contains(v), members[v as usize]);
        }
    }

    #[test]
    fn two_generator_conductor(a in 2u64..=30, b in 2u64..=30) {
        prop_assume!(a.gcd(&b) == 1);
        let s = NumericalSemigroup::from_generators(&[a, b]).unwrap();
        prop_assert_eq!(s.conductor(), (a - 1) * (b - 1));
        prop_assert_eq!(s.conductor(), 2 * s.gaps().len() as u64);
    }

    #[test]
    fn implicit_equation_vanishes(b in small_branch()) {
        let f = implicitize(&b).unwrap();
        prop_assert_eq!(f.deg_y(), Some(b.n));
        let s = f.compose_series(&b.x_series(), &b.y, &b.tower);
        prop_assert!(s.is_zero_known());
    }

    #[test]
    fn values_lie_in_semigroup(b in small_branch(), g in small_poly()) {
        let gamma = semigroup_of_branch(&b).unwrap();
        if let Ok(v) = intersection_multiplicity(&b, &g) {
            prop_assert!(gamma.contains(v), "{} not in {}", v, gamma);
        }
    }

    #[test]
    fn milnor_is_conductor_and_teissier_holds(b in small_branch()) {
        let f = implicitize(&b).unwrap();
        let mu = milnor_number(&f, &b.tower).unwrap();
        prop_assert_eq!(mu, semigroup_of_branch(&b).unwrap().conductor());
        let rep = generic_polar_type(&b, 2, 5, Parallelism::Sequential).unwrap();
        let t = rep.teissier.unwrap();
        prop_assert!(t.holds());
        prop_assert_eq!(t.intersection, mu + b.n as u64 - 1);
    }

    #[test]
    fn type_milnor_agrees_with_resultant(b in small_branch(), a in 1i64..=9, c in 1i64..=9) {
        let f = implicitize(&b).unwrap();
        let p = polar(&f, &rat(a, 1), &rat(-c, 7)).unwrap();
        if let Ok(ty) = equisingularity_type(&p, &b.tower) {
            prop_assert_eq!(ty.milnor(), milnor_number(&p, &b.tower).unwrap());
        }
    }

    #[test]
    fn type_ignores_branch_order(perm in Just(vec![0usize, 1, 2]).prop_shuffle()) {
        let gs = [vec![2u64, 5], vec![1], vec![1]];
        let m = [[0u64, 5, 5], [5, 0, 3], [5, 3, 0]];
        let base = EquisingularityType::new(
            gs.iter().map(|g| NumericalSemigroup::from_generators(g).unwrap()).collect(),
            m.iter().map(|r| r.to_vec()).collect(),
        ).unwrap();
        let shuffled = EquisingularityType::new(
            perm.iter().map(|&i| NumericalSemigroup::from_generators(&gs[i]).unwrap()).collect(),
            perm.iter().map(|&i| perm.iter().map(|&j| m[i][j]).collect()).collect(),
        ).unwrap();
        prop_assert_eq!(base, shuffled);
    }

    #[test]
    fn quadratic_field_inverse(a in -20i64..=20, b in -20i64..=20, d in prop::sample::select(vec![2i64, 3, 5, 6])) {
        prop_assume!(a != 0 || b != 0);
        let (t, s) = Tower::rational().adjoin("s", &UPoly::from_rationals(&[-d, 0, 1])).unwrap();
        let x = Alg::from(a).add(&t.mul(&s, &Alg::from(b)));
        let inv = t.inv(&x).unwrap();
        prop_assert!(t.mul(&x, &inv).is_one());
    }

    #[test]
    fn normal_form_equivalence_is_reflexive_and_symmetric(c1 in 1i64..=6, c2 in -6i64..=-1) {
        let c2 = if c2 == -6 { c1 } else { -c2 };
        let q0 = Tower::rational();
        let nf = |c: i64| {
            let y = TruncatedSeries::from_terms([(11, Alg::one()), (14, Alg::one()), (21, Alg::from(c))], None);
            PuiseuxBranch::new(4, y, q0.clone()).unwrap()
        };
        let (a, b) = (nf(c1), nf(c2));
        prop_assert!(normal_form_equivalent(&a, &a, 14).unwrap());
        prop_assert_eq!(
            normal_form_equivalent(&a, &b, 14).unwrap(),
            normal_form_equivalent(&b, &a, 14).unwrap()
        );
        prop_assert_eq!(normal_form_equivalent(&a, &b, 14).unwrap(), c1 == c2);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn dsl_round_trip(text in spec_text()) {
        let a = parse_branch_dsl(&text).unwrap();
        let printed = print_branch(&a.branch);
        let b = parse_branch_dsl(&printed).unwrap();
        prop_assert_eq!(&a.branch, &b.branch);
        prop_assert_eq!(print_branch(&b.branch), printed);
    }
}
