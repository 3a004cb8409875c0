//! Rational Newton–Puiseux expansion over D5 towers.
//!
//! Each node holds a polynomial `f(x, y)` with `f(0, 0) = 0`. For a side of
//! its Newton polygon with reduced slope `(n, m)` and a squarefree factor `q`
//! of the characteristic polynomial `φ`, a root `w` of `q` is adjoined and
//! `x = λ·t^n`, `y = t^m·(w^α + y₁)` with `λ = w^β`, `αn - βm = 1`. Factors
//! occurring once in `φ` end in a leaf whose `y₁` is found by Newton
//! iteration; repeated factors recurse. A leaf stands for as many geometric
//! branches as the product of the degrees adjoined along its path.

use num_bigint::BigInt;

use crate::algebra::{resultant_y, Alg, BivariatePolynomial, Rational, Tower, TruncatedSeries, UPoly};
use crate::branch::PuiseuxBranch;
use crate::error::{Error, Result};
use crate::newton::{newton_polygon, Side};
use crate::semigroup::{semigroup_from_characteristic, NumericalSemigroup};

#[derive(Clone, Debug)]
pub struct Node {
    pub tower: Tower,
    pub f: BivariatePolynomial,
    pub edges: Vec<Edge>,
}

#[derive(Clone, Debug)]
pub enum Child {
    /// `y = 0` at this node.
    Axis,
    /// Simple root: `f(0, 0) = 0` and `f_y(0, 0)` is a unit.
    Leaf { tower: Tower, f: BivariatePolynomial },
    Node(Box<Node>),
}

#[derive(Clone, Debug)]
pub struct Edge {
    /// Reduced slope `(n, m)`; the axis edge uses `(1, 0)`.
    pub n: u32,
    pub m: u32,
    /// Number of conjugate roots adjoined on this edge.
    pub degree: usize,
    pub lambda: Alg,
    pub coeff: Alg,
    pub child: Child,
}

impl Edge {
    pub fn is_axis(&self) -> bool {
        matches!(self.child, Child::Axis)
    }
}

/// Expansion tree of `f`, possibly after the shear `x -> x + ρy`.
#[derive(Clone, Debug)]
pub struct PuiseuxTree {
    pub shear: u32,
    pub root: Node,
}

/// A branch found by the expansion; it represents `conjugates` geometric
/// branches.
#[derive(Clone, Debug)]
pub struct ExpandedBranch {
    pub branch: PuiseuxBranch,
    pub conjugates: usize,
}

fn is_unit(t: &Tower, a: &Alg) -> Result<bool> {
    match t.inv(a) {
        Ok(_) => Ok(true),
        Err(Error::DivisionByZero) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Smallest `ρ >= 0` such that `x` does not divide the tangent cone of
/// `f(x + ρy, y)`.
pub fn tangent_shear(f: &BivariatePolynomial, t: &Tower) -> Result<u32> {
    let Some(k) = f.order() else {
        return Err(Error::InvalidInput("zero polynomial".into()));
    };
    let cone = f.tangent_cone();
    for rho in 0u32.. {
        let r = Alg::from(rho as i64);
        let mut v = Alg::zero();
        for (&(i, _), c) in cone.terms() {
            v = v.add(&t.mul(c, &t.pow(&r, i as u64)));
        }
        if is_unit(t, &v)? {
            return Ok(rho);
        }
        if rho as usize > k as usize + 1 {
            break;
        }
    }
    Err(Error::InvalidInput("tangent cone vanishes identically".into()))
}

impl PuiseuxTree {
    /// Builds the tree of a reduced `f` with `f(0, 0) = 0`, shearing first
    /// when `shear` is set and `x` divides the tangent cone.
    pub fn build(f: &BivariatePolynomial, tower: &Tower, shear: bool) -> Result<Self> {
        let f = f.reduce(tower);
        if f.is_zero() {
            return Err(Error::NotReduced);
        }
        if is_unit(tower, &f.coeff(0, 0))? {
            return Err(Error::InvalidInput("f does not vanish at the origin".into()));
        }
        let rho = if shear { tangent_shear(&f, tower)? } else { 0 };
        let f = if rho > 0 {
            f.shear_x(&Alg::from(rho as i64), tower)
        } else {
            f
        };
        if f.axis_powers().0 > 0 {
            return Err(Error::AxisFactor("x divides f"));
        }
        let mut budget = 12;
        for _ in 0..6 {
            match expand_node(&f, tower, 0, budget) {
                Ok(root) => return Ok(PuiseuxTree { shear: rho, root }),
                Err(Error::TruncationExhausted) => {
                    let disc = resultant_y(&f, &f.derivative_y(), tower)?;
                    if disc.is_zero() {
                        return Err(Error::NotReduced);
                    }
                    budget *= 2;
                }
                Err(e) => return Err(e),
            }
        }
        Err(Error::TruncationExhausted)
    }

    /// Geometric branches with their paths through the tree.
    pub fn geometric_branches(&self) -> Vec<GeometricBranch> {
        let mut out = Vec::new();
        walk(&self.root, &mut Vec::new(), &mut out);
        out
    }
}

fn expand_node(f: &BivariatePolynomial, tower: &Tower, depth: usize, budget: usize) -> Result<Node> {
    if depth > budget {
        return Err(Error::TruncationExhausted);
    }
    let f = f.reduce(tower);
    let (xp, yp) = f.axis_powers();
    if xp > 0 {
        return Err(Error::InvalidInput("x divides a node polynomial".into()));
    }
    if yp >= 2 {
        return Err(Error::NotReduced);
    }
    let mut edges = Vec::new();
    let g = if yp == 1 {
        edges.push(Edge {
            n: 1,
            m: 0,
            degree: 1,
            lambda: Alg::one(),
            coeff: Alg::zero(),
            child: Child::Axis,
        });
        f.div_monomial(0, 1)
    } else {
        f.clone()
    };
    let np = newton_polygon(&g);
    for &(i, j) in &np.vertices {
        tower.inv(&g.coeff(i, j))?;
    }
    for side in &np.sides {
        let (n, _, r) = side.reduced();
        let phi = UPoly::new((0..=r).map(|k| side.polynomial.coeff((k * n) as usize)).collect());
        for (q, mult) in phi.squarefree_decomposition(tower)? {
            let mut queue = vec![q];
            while let Some(q) = queue.pop() {
                match expand_edge(&g, tower, side, &q, mult, depth, budget) {
                    Ok(e) => edges.push(e),
                    Err(Error::ZeroDivisor(s)) if s.level == tower.len() => {
                        let a = UPoly::new(s.factor);
                        let b = q.exact_div(&a, tower)?;
                        queue.push(b);
                        queue.push(a);
                    }
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok(Node {
        tower: tower.clone(),
        f,
        edges,
    })
}

/// `β` in `[0, n)` with `βm ≡ -1 (mod n)` and `α = (1 + βm)/n`.
fn bezout(n: u32, m: u32) -> (u64, u64) {
    let (n, m) = (n as u64, m as u64);
    if n == 1 {
        return (1, 0);
    }
    let beta = (0..n).find(|b| (b * m + 1) % n == 0).expect("coprime slope");
    ((1 + beta * m) / n, beta)
}

fn expand_edge(
    g: &BivariatePolynomial,
    tower: &Tower,
    side: &Side,
    q: &UPoly,
    mult: usize,
    depth: usize,
    budget: usize,
) -> Result<Edge> {
    let (n, m, _) = side.reduced();
    let (t2, w) = tower.adjoin(&format!("w{}", tower.len() + 1), q)?;
    let degree = q.degree().unwrap_or(1);
    let (alpha, beta) = bezout(n, m);
    let lambda = t2.pow(&w, beta);
    let coeff = t2.pow(&w, alpha);
    let v = n * side.end.0 + m * side.end.1;
    let f1 = substitute_edge(g, &t2, n, m, &lambda, &coeff, v);
    let child = if mult == 1 {
        Child::Leaf { tower: t2, f: f1 }
    } else {
        Child::Node(Box::new(expand_node(&f1, &t2, depth + 1, budget)?))
    };
    Ok(Edge {
        n,
        m,
        degree,
        lambda,
        coeff,
        child,
    })
}

/// `g(λt^n, t^m(c + y)) / t^v`.
fn substitute_edge(
    g: &BivariatePolynomial,
    t: &Tower,
    n: u32,
    m: u32,
    lambda: &Alg,
    c: &Alg,
    v: u32,
) -> BivariatePolynomial {
    let dx = g.deg_x().unwrap_or(0) as usize;
    let dy = g.deg_y().unwrap_or(0) as usize;
    let mut lp = vec![Alg::one()];
    for k in 0..dx {
        lp.push(t.mul(&lp[k], lambda));
    }
    // (c + y)^j, coefficients low degree first
    let mut cy: Vec<Vec<Alg>> = vec![vec![Alg::one()]];
    for j in 0..dy {
        let prev = &cy[j];
        let mut next = vec![Alg::zero(); j + 2];
        for (k, a) in prev.iter().enumerate() {
            next[k] = next[k].add(&t.mul(a, c));
            next[k + 1] = next[k + 1].add(a);
        }
        cy.push(next);
    }
    let mut out = BivariatePolynomial::zero();
    for (&(i, j), a) in g.terms() {
        let e = n * i + m * j - v;
        let al = t.mul(a, &lp[i as usize]);
        for (k, b) in cy[j as usize].iter().enumerate() {
            if !b.is_zero() {
                out.add_term((e, k as u32), &t.mul(&al, b));
            }
        }
    }
    out
}

/// One step of a path: the edge taken and which conjugate root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub edge: usize,
    pub root: usize,
    pub n: u32,
    pub m: u32,
    pub axis: bool,
}

#[derive(Clone, Debug)]
pub struct GeometricBranch {
    pub steps: Vec<Step>,
}

fn walk(node: &Node, prefix: &mut Vec<Step>, out: &mut Vec<GeometricBranch>) {
    for (ei, e) in node.edges.iter().enumerate() {
        for root in 0..e.degree {
            prefix.push(Step {
                edge: ei,
                root,
                n: e.n,
                m: e.m,
                axis: e.is_axis(),
            });
            match &e.child {
                Child::Node(c) => walk(c, prefix, out),
                _ => out.push(GeometricBranch {
                    steps: prefix.clone(),
                }),
            }
            prefix.pop();
        }
    }
}

impl GeometricBranch {
    /// Ramification `Π n` of the steps from `from` on.
    fn local_n(&self, from: usize) -> u64 {
        self.steps[from..].iter().map(|s| s.n as u64).product()
    }

    pub fn multiplicity(&self) -> u64 {
        self.local_n(0)
    }

    /// Characteristic exponents `(N, β_1, …)` in `x = t^N`.
    pub fn characteristic_exponents(&self) -> Vec<u64> {
        let n = self.multiplicity();
        let mut beta = vec![n];
        let mut acc = 0u64;
        let mut prod = 1u64;
        for s in self.steps.iter().filter(|s| !s.axis) {
            prod *= s.n as u64;
            acc += s.m as u64 * (n / prod);
            if s.n > 1 {
                beta.push(acc);
            }
        }
        beta
    }

    pub fn semigroup(&self) -> Result<NumericalSemigroup> {
        semigroup_from_characteristic(&self.characteristic_exponents())
    }

    /// Intersection multiplicity with another geometric branch of the same
    /// tree: `N₁N₂·d` for every shared step and `N₁N₂·min(d₁, d₂)` where the
    /// paths part, with `N` the ramification below the step.
    pub fn intersection(&self, other: &GeometricBranch) -> Result<u64> {
        let mut total = 0u64;
        for (k, (a, b)) in self.steps.iter().zip(&other.steps).enumerate() {
            let na = self.local_n(k);
            let nb = other.local_n(k);
            if a == b {
                if a.axis {
                    break;
                }
                total += (na / a.n as u64) * nb * a.m as u64;
                continue;
            }
            let v = match (a.axis, b.axis) {
                (true, true) => return Err(Error::NotReduced),
                (true, false) => (nb / b.n as u64) * na * b.m as u64,
                (false, true) => (na / a.n as u64) * nb * a.m as u64,
                (false, false) => {
                    let da = a.m as u64 * b.n as u64;
                    let db = b.m as u64 * a.n as u64;
                    if da <= db {
                        (na / a.n as u64) * nb * a.m as u64
                    } else {
                        (nb / b.n as u64) * na * b.m as u64
                    }
                }
            };
            return Ok(total + v);
        }
        Err(Error::InvalidInput("a branch intersected with itself".into()))
    }
}

/// `F(t, y)` modulo `t^prec` for an exact polynomial `y`.
fn eval_trunc(cols: &[UPoly], y: &TruncatedSeries, prec: usize, t: &Tower) -> TruncatedSeries {
    let mut acc = TruncatedSeries::exact_zero().truncate(prec);
    for col in cols.iter().rev() {
        let c = TruncatedSeries::exact(col.coeffs().to_vec());
        acc = acc.mul(y, t).add(&c).truncate(prec);
    }
    acc
}

/// The root `y(t)` with `y(0) = 0` of `F(t, y) = 0`, modulo `t^prec`.
pub fn simple_root_series(f: &BivariatePolynomial, t: &Tower, prec: usize) -> Result<TruncatedSeries> {
    let cols = f.to_y_univariate();
    let dcols = f.derivative_y().to_y_univariate();
    let mut y = TruncatedSeries::exact_zero();
    let mut p = 1usize;
    while p < prec {
        let p2 = (2 * p).min(prec);
        let val = eval_trunc(&cols, &y, p2, t);
        let der = eval_trunc(&dcols, &y, p2, t).inverse(p2, t)?;
        let next = y.sub(&val.mul(&der, t)).truncate(p2);
        y = TruncatedSeries::exact(next.coeffs().to_vec());
        p = p2;
    }
    Ok(TruncatedSeries::exact(y.coeffs().to_vec()).truncate(prec.max(1)))
}

/// Branches of `f` expanded modulo `t^k` with `k` at least `target_order`
/// and large enough to show every characteristic exponent and every
/// pairwise contact. No shear is applied, so `x` must not divide `f`.
pub fn puiseux_expand(
    f: &BivariatePolynomial,
    target_order: usize,
    tower: &Tower,
) -> Result<Vec<ExpandedBranch>> {
    let tree = PuiseuxTree::build(f, tower, false)?;
    let f = f.reduce(tower);
    let geo = tree.geometric_branches();
    let mut out = Vec::new();
    let mut seen_leaf: Vec<Vec<usize>> = Vec::new();
    for (gi, g) in geo.iter().enumerate() {
        let key: Vec<usize> = g.steps.iter().map(|s| s.edge).collect();
        if seen_leaf.contains(&key) {
            continue;
        }
        seen_leaf.push(key);
        let big_n = g.multiplicity();
        let mut need = g.characteristic_exponents().last().copied().unwrap_or(0) as usize + 1;
        for (gj, h) in geo.iter().enumerate() {
            if gj != gi {
                need = need.max(contact_exponent(g, h) as usize + 1);
            }
        }
        let prec = need.max(target_order);
        let (branch, conjugates) = extract(&tree, g, prec)?;
        debug_assert_eq!(branch.n as u64, big_n);
        let check = f.compose_series(&branch.x_series(), &branch.y, &branch.tower);
        if !check.is_zero_known() {
            return Err(Error::InvalidInput("expansion does not satisfy f".into()));
        }
        out.push(ExpandedBranch { branch, conjugates });
    }
    Ok(out)
}

/// Exponent, in the `t` of `g`, at which `g` and `h` part.
fn contact_exponent(g: &GeometricBranch, h: &GeometricBranch) -> u64 {
    let big_n = g.multiplicity();
    let mut acc = 0u64;
    let mut prod = 1u64;
    for (a, b) in g.steps.iter().zip(&h.steps) {
        if a.axis {
            break;
        }
        if a == b {
            prod *= a.n as u64;
            acc += a.m as u64 * (big_n / prod);
            continue;
        }
        // parting at slope min(d_a, d_b), measured in g's units
        let local = big_n / prod;
        let d = if b.axis {
            Rational::new(BigInt::from(a.m), BigInt::from(a.n))
        } else {
            Rational::new(BigInt::from(a.m), BigInt::from(a.n))
                .min(Rational::new(BigInt::from(b.m), BigInt::from(b.n)))
        };
        let v = (d * Rational::from_integer(BigInt::from(local))).ceil();
        return acc + v.to_integer().try_into().unwrap_or(0u64);
    }
    acc
}

/// Composes the substitutions along the path of `g` into `x = Λt^P`,
/// `y = Y(t) mod t^prec`.
fn extract(tree: &PuiseuxTree, g: &GeometricBranch, prec: usize) -> Result<(PuiseuxBranch, usize)> {
    let mut edges: Vec<&Edge> = Vec::new();
    let mut node = &tree.root;
    let mut conj = 1usize;
    for s in &g.steps {
        let e = &node.edges[s.edge];
        edges.push(e);
        conj *= e.degree;
        if let Child::Node(c) = &e.child {
            node = c;
        }
    }
    let last = edges.last().ok_or_else(|| Error::InvalidInput("empty path".into()))?;
    let t = match &last.child {
        Child::Leaf { tower, .. } => tower.clone(),
        _ => node.tower.clone(),
    };
    let shift: usize = {
        let mut p = 1usize;
        let mut s = 0usize;
        for e in edges.iter().rev() {
            s += e.m as usize * p;
            p *= e.n as usize;
        }
        s
    };
    let mut y = match &last.child {
        Child::Axis => TruncatedSeries::exact_zero(),
        Child::Leaf { f, .. } => simple_root_series(f, &t, prec.saturating_sub(shift).max(1))?,
        Child::Node(_) => unreachable!("paths end at leaves"),
    };
    let mut big_l = Alg::one();
    let mut big_p = 1usize;
    for e in edges.iter().rev() {
        if e.is_axis() {
            continue;
        }
        // y_{i-1} = t_i^m (c + y_i) with t_i = Λ_i T^{P_i}
        let scale = t.pow(&big_l, e.m as u64);
        y = TruncatedSeries::monomial(t.reduce(&e.coeff), 0)
            .add(&y)
            .scale(&scale, &t)
            .shift(e.m as usize * big_p);
        big_l = t.mul(&t.reduce(&e.lambda), &t.pow(&big_l, e.n as u64));
        big_p *= e.n as usize;
    }
    let y = if y.precision().is_some_and(|p| p > prec) { y.truncate(prec) } else { y };
    let branch = PuiseuxBranch::with_x_coeff(big_p as u32, big_l, y, t)?;
    Ok((branch, conj))
}
