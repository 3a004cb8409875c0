//! Equisingularity types, intersection multiplicities and the type of a
//! germ.

use std::cmp::Ordering;
use std::fmt;

use serde_json::{json, Value};

use crate::algebra::tower::uniform;
use crate::algebra::{Alg, BivariatePolynomial, Tower, TruncatedSeries, UPoly};
use crate::branch::PuiseuxBranch;
use crate::error::{Error, Result};
use crate::implicit::implicitize;
use crate::newton::{newton_polygon, nondegenerate_type, polygon_nondegenerate};
use crate::puiseux::PuiseuxTree;
use crate::semigroup::NumericalSemigroup;

/// Semigroups of the branches and their pairwise intersection numbers, kept
/// in a canonical order so that equal types compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EquisingularityType {
    branches: Vec<NumericalSemigroup>,
    intersections: Vec<Vec<u64>>,
}

impl EquisingularityType {
    pub fn new(branches: Vec<NumericalSemigroup>, intersections: Vec<Vec<u64>>) -> Result<Self> {
        let k = branches.len();
        if intersections.len() != k || intersections.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidInput("intersection matrix has the wrong shape".into()));
        }
        for i in 0..k {
            for j in 0..k {
                if i != j && (intersections[i][j] == 0 || intersections[i][j] != intersections[j][i]) {
                    return Err(Error::InvalidInput(
                        "intersections must be positive and symmetric".into(),
                    ));
                }
            }
        }
        Ok(canonical(branches, intersections))
    }

    pub fn branches(&self) -> &[NumericalSemigroup] {
        &self.branches
    }

    pub fn intersections(&self) -> &[Vec<u64>] {
        &self.intersections
    }

    pub fn intersection(&self, i: usize, j: usize) -> u64 {
        self.intersections[i][j]
    }

    pub fn branch_count(&self) -> usize {
        self.branches.len()
    }

    /// `μ = Σ c_i + 2·Σ I_ij - r + 1`.
    pub fn milnor(&self) -> u64 {
        let r = self.branches.len() as u64;
        if r == 0 {
            return 0;
        }
        let c: u64 = self.branches.iter().map(NumericalSemigroup::conductor).sum();
        let mut i2 = 0;
        for i in 0..self.branches.len() {
            for j in i + 1..self.branches.len() {
                i2 += 2 * self.intersections[i][j];
            }
        }
        c + i2 + 1 - r
    }

    pub fn to_json(&self) -> Value {
        let pairs: Vec<Value> = (0..self.branches.len())
            .flat_map(|i| (i + 1..self.branches.len()).map(move |j| (i, j)))
            .map(|(i, j)| json!({"pair": [i, j], "value": self.intersections[i][j]}))
            .collect();
        json!({
            "branches": self.branches.iter().map(|s| json!({
                "semigroup": s.generators(),
                "conductor": s.conductor(),
            })).collect::<Vec<_>>(),
            "intersections": pairs,
            "summary": self.to_string(),
        })
    }
}

impl fmt::Display for EquisingularityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.branches.is_empty() {
            return write!(f, "empty");
        }
        let b: Vec<String> = self.branches.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", b.join(" + "))?;
        for i in 0..self.branches.len() {
            for j in i + 1..self.branches.len() {
                write!(f, "; I({},{})={}", i + 1, j + 1, self.intersections[i][j])?;
            }
        }
        Ok(())
    }
}

/// Sorts by semigroup, then permutes equal semigroups to the
/// lexicographically least lower triangle.
fn canonical(branches: Vec<NumericalSemigroup>, inter: Vec<Vec<u64>>) -> EquisingularityType {
    let k = branches.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| branches[a].cmp(&branches[b]));
    let group: Vec<usize> = {
        let mut g = vec![0; k];
        for p in 1..k {
            g[p] = g[p - 1] + usize::from(branches[order[p]] != branches[order[p - 1]]);
        }
        g
    };
    let mut best: Option<Vec<usize>> = None;
    let mut perm = Vec::with_capacity(k);
    let mut used = vec![false; k];
    search(&order, &group, &inter, &mut perm, &mut used, true, &mut best);
    let perm = best.unwrap_or_default();
    EquisingularityType {
        branches: perm.iter().map(|&i| branches[i].clone()).collect(),
        intersections: perm
            .iter()
            .map(|&i| perm.iter().map(|&j| if i == j { 0 } else { inter[i][j] }).collect())
            .collect(),
    }
}

/// Depth-first search over permutations respecting the semigroup groups.
/// `tied` says the placed prefix equals the best prefix found so far.
/// Returns whether `best` was replaced.
fn search(
    order: &[usize],
    group: &[usize],
    inter: &[Vec<u64>],
    perm: &mut Vec<usize>,
    used: &mut [bool],
    tied: bool,
    best: &mut Option<Vec<usize>>,
) -> bool {
    let p = perm.len();
    if p == order.len() {
        if best.is_none() || !tied {
            *best = Some(perm.clone());
            return true;
        }
        return false;
    }
    let mut tied = tied;
    let mut improved = false;
    for (slot, &cand) in order.iter().enumerate() {
        if used[slot] || group[slot] != group[p] {
            continue;
        }
        let row: Vec<u64> = perm.iter().map(|&q| inter[cand][q]).collect();
        let next_tied = match best {
            Some(b) if tied => {
                let brow: Vec<u64> = b[..p].iter().map(|&q| inter[b[p]][q]).collect();
                match row.cmp(&brow) {
                    Ordering::Greater => continue,
                    Ordering::Equal => true,
                    Ordering::Less => false,
                }
            }
            _ => best.is_some() && tied,
        };
        used[slot] = true;
        perm.push(cand);
        if search(order, group, inter, perm, used, next_tied, best) {
            improved = true;
            tied = true;
        }
        perm.pop();
        used[slot] = false;
    }
    improved
}

/// `ord_t g(x(t), y(t))`.
pub fn intersection_multiplicity(b: &PuiseuxBranch, g: &BivariatePolynomial) -> Result<u64> {
    uniform(&b.tower, |t| {
        let s = g
            .reduce(t)
            .compose_series(&b.x_series().reduce(t), &b.y.reduce(t), t);
        match s.order()? {
            Some(k) => Ok(k as u64),
            None => Err(Error::InvalidInput("the curve contains the branch".into())),
        }
    })
}

/// `I(b1, b2)` as the order of the implicit equation of `b2`, cut to its
/// known terms, along `b1`. Cutting `b2` at `t^T2` cannot change the answer
/// `I` while `I·N2 < T2·N1`.
pub fn branch_intersection(b1: &PuiseuxBranch, b2: &PuiseuxBranch) -> Result<u64> {
    let (tower, common) = Tower::compositum(&b1.tower, &b2.tower);
    let by = b1.tower.len() - common;
    let lift = |a: &Alg| a.shift_levels(common, by);
    let y2: Vec<(usize, Alg)> = b2.y.terms().map(|(e, c)| (e, lift(c))).collect();
    let poly2 = PuiseuxBranch::with_x_coeff(
        b2.n,
        lift(&b2.x_coeff),
        TruncatedSeries::from_terms(y2, None),
        tower.clone(),
    )?;
    let h2 = implicitize(&poly2).map_err(|e| match (e, b2.truncation_order()) {
        (Error::InvalidInput(_), Some(p)) => Error::TruncationTooSmall(format!(
            "second branch cut at t^{p} is not primitive"
        )),
        (e, _) => e,
    })?;
    let b1l = PuiseuxBranch::with_x_coeff(b1.n, b1.x_coeff.clone(), b1.y.clone(), tower)?;
    let i = intersection_multiplicity(&b1l, &h2)?;
    if let Some(t2) = b2.truncation_order() {
        if i * b2.n as u64 >= t2 as u64 * b1.n as u64 {
            return Err(Error::Undetermined(t2));
        }
    }
    Ok(i)
}

/// The branch obtained by replacing the generator `α` of the top level of
/// `b`'s tower with another root `β` of its defining polynomial `q`.
pub fn conjugate_branch(b: &PuiseuxBranch) -> Result<PuiseuxBranch> {
    let top = b
        .tower
        .len()
        .checked_sub(1)
        .ok_or_else(|| Error::InvalidInput("branch over the rationals has no conjugates".into()))?;
    let t = &b.tower;
    let q = UPoly::new(t.levels()[top].modulus.clone());
    let alpha = t.generator(top);
    // q(z) / (z - α) over the full tower
    let lin = UPoly::new(vec![alpha.neg(), Alg::one()]);
    let cof = q.exact_div(&lin, t)?;
    let (t2, _) = t.adjoin(&format!("{}'", t.name(top)), &cof)?;
    let target = t.len();
    let map = |a: &Alg| t2.reduce(&a.rename_level(top, target));
    let y: Vec<(usize, Alg)> = b.y.terms().map(|(e, c)| (e, map(c))).collect();
    let y = TruncatedSeries::from_terms(y, b.y.precision());
    PuiseuxBranch::with_x_coeff(b.n, map(&b.x_coeff), y, t2)
}

/// Type of a reduced germ: from the Newton polygon when it is
/// non-degenerate, from the Newton–Puiseux tree otherwise.
pub fn equisingularity_type(f: &BivariatePolynomial, tower: &Tower) -> Result<EquisingularityType> {
    uniform(tower, |t| {
        let f = f.reduce(t);
        if f.is_zero() {
            return Err(Error::NotReduced);
        }
        if t.inv(&f.coeff(0, 0)).is_ok() {
            return EquisingularityType::new(Vec::new(), Vec::new());
        }
        match polygon_type(&f, t)? {
            Some(ty) => Ok(ty),
            None => tree_type(&f, t),
        }
    })
}

/// The polygon path, or `None` for a degenerate germ.
pub fn polygon_type(f: &BivariatePolynomial, t: &Tower) -> Result<Option<EquisingularityType>> {
    let np = newton_polygon(f);
    if np.x_power > 1 || np.y_power > 1 {
        return Err(Error::NotReduced);
    }
    for &(i, j) in &np.vertices {
        t.inv(&f.coeff(i, j))?;
    }
    if !polygon_nondegenerate(&np, t)? {
        return Ok(None);
    }
    nondegenerate_type(&np).map(Some)
}

/// The Newton–Puiseux path.
pub fn tree_type(f: &BivariatePolynomial, t: &Tower) -> Result<EquisingularityType> {
    let tree = PuiseuxTree::build(f, t, true)?;
    type_from_tree(&tree)
}

pub fn type_from_tree(tree: &PuiseuxTree) -> Result<EquisingularityType> {
    let geo = tree.geometric_branches();
    let branches = geo.iter().map(|g| g.semigroup()).collect::<Result<Vec<_>>>()?;
    let k = geo.len();
    let mut inter = vec![vec![0u64; k]; k];
    for i in 0..k {
        for j in i + 1..k {
            let v = geo[i].intersection(&geo[j])?;
            inter[i][j] = v;
            inter[j][i] = v;
        }
    }
    EquisingularityType::new(branches, inter)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::implicit::polar;

    fn sg(g: &[u64]) -> NumericalSemigroup {
        NumericalSemigroup::from_generators(g).unwrap()
    }

    fn bp(terms: &[((u32, u32), i64)]) -> BivariatePolynomial {
        BivariatePolynomial::from_int_terms(terms)
    }

    #[test]
    fn canonical_form_is_permutation_invariant() {
        let s = NumericalSemigroup::smooth();
        let a = EquisingularityType::new(
            vec![s.clone(), sg(&[2, 5]), s.clone()],
            vec![vec![0, 5, 3], vec![5, 0, 5], vec![3, 5, 0]],
        )
        .unwrap();
        let b = EquisingularityType::new(
            vec![sg(&[2, 5]), s.clone(), s.clone()],
            vec![vec![0, 5, 5], vec![5, 0, 3], vec![5, 3, 0]],
        )
        .unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "<1> + <1> + <2,5>; I(1,2)=3; I(1,3)=5; I(2,3)=5");
        let c = EquisingularityType::new(
            vec![s.clone(), s.clone(), s.clone()],
            vec![vec![0, 2, 1], vec![2, 0, 1], vec![1, 1, 0]],
        )
        .unwrap();
        assert_eq!(c.intersections()[1][0], 1);
        assert_eq!(c.intersections()[2][0], 1);
    }

    #[test]
    fn intro_counterexample() {
        let q = Tower::rational();
        let f = bp(&[((0, 3), 1), ((11, 0), -1)]);
        let g = bp(&[((0, 3), 1), ((11, 0), -1), ((8, 1), 1)]);
        let pf = polar(&f, &rat(1, 1), &rat(1, 1)).unwrap();
        let pg = polar(&g, &rat(1, 1), &rat(1, 1)).unwrap();
        let tf = equisingularity_type(&pf, &q).unwrap();
        let tg = equisingularity_type(&pg, &q).unwrap();
        assert_eq!(tf.intersection(0, 1), 5);
        assert_eq!(tg.intersection(0, 1), 4);
        assert_eq!(tree_type(&pf, &q).unwrap(), tf);
        assert_eq!(tree_type(&pg, &q).unwrap(), tg);
    }

    #[test]
    fn degenerate_polar_of_row_one_shape() {
        // (y^2 - x^3)^2 - x^5 y: the A-branch ⟨4,6,13⟩
        let f = implicitize(&PuiseuxBranch::from_int_terms(4, &[(6, 1), (7, 1)])).unwrap();
        let ty = equisingularity_type(&f, &Tower::rational()).unwrap();
        assert_eq!(ty.branches(), &[sg(&[4, 6, 13])]);
        assert_eq!(ty.milnor(), 16);
    }

    #[test]
    fn branch_pairs() {
        let a = PuiseuxBranch::from_int_terms(1, &[(2, 1)]);
        let b = PuiseuxBranch::from_int_terms(1, &[(2, -1)]);
        assert_eq!(branch_intersection(&a, &b).unwrap(), 2);
        let c = PuiseuxBranch::from_int_terms(2, &[(3, 1)]);
        assert_eq!(intersection_multiplicity(&c, &BivariatePolynomial::y()).unwrap(), 3);
    }
}
