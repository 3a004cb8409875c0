//! Newton polygons, side polynomials and the type of non-degenerate germs.

use num_integer::Integer;
use num_bigint::BigInt;

use crate::algebra::tower::uniform;
use crate::algebra::upoly::is_squarefree;
use crate::algebra::{Alg, BivariatePolynomial, Rational, Tower, UPoly};
use crate::equisingularity::EquisingularityType;
use crate::error::{Error, Result};
use crate::semigroup::NumericalSemigroup;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Side {
    pub start: (u32, u32),
    pub end: (u32, u32),
    pub polynomial: UPoly,
}

impl Side {
    pub fn height(&self) -> u32 {
        self.start.1 - self.end.1
    }

    pub fn width(&self) -> u32 {
        self.end.0 - self.start.0
    }

    /// `d_L = width / height`.
    pub fn inclination(&self) -> Rational {
        Rational::new(BigInt::from(self.width()), BigInt::from(self.height()))
    }

    /// `(n', m')` and the number `r` of branches when non-degenerate.
    pub fn reduced(&self) -> (u32, u32, u32) {
        let (h, w) = (self.height(), self.width());
        let r = h.gcd(&w);
        (h / r, w / r, r)
    }

    fn contains(&self, (i, j): (u32, u32)) -> bool {
        let (h, w) = (self.height() as i64, self.width() as i64);
        h * (i as i64 - self.start.0 as i64) + w * (j as i64 - self.start.1 as i64) == 0
    }
}

/// Compact boundary of the Newton polygon. `x_power` and `y_power` are the
/// largest powers of `x` and `y` dividing `f`; a positive `y_power` is the
/// non-compact side of inclination `∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub vertices: Vec<(u32, u32)>,
    pub sides: Vec<Side>,
    pub x_power: u32,
    pub y_power: u32,
}

fn cross(o: (u32, u32), a: (u32, u32), b: (u32, u32)) -> i64 {
    let (ox, oy) = (o.0 as i64, o.1 as i64);
    (a.0 as i64 - ox) * (b.1 as i64 - oy) - (a.1 as i64 - oy) * (b.0 as i64 - ox)
}

pub fn newton_polygon(f: &BivariatePolynomial) -> NewtonPolygon {
    let (x_power, y_power) = f.axis_powers();
    let mut lowest: Vec<(u32, u32)> = Vec::new();
    for (i, j) in f.support() {
        match lowest.last_mut() {
            Some(p) if p.0 == i => p.1 = p.1.min(j),
            _ => lowest.push((i, j)),
        }
    }
    let Some(jmin) = lowest.iter().map(|p| p.1).min() else {
        return NewtonPolygon {
            vertices: Vec::new(),
            sides: Vec::new(),
            x_power,
            y_power,
        };
    };
    let stop = lowest.iter().position(|p| p.1 == jmin).unwrap();
    let mut hull: Vec<(u32, u32)> = Vec::new();
    for &p in &lowest[..=stop] {
        if hull.last().is_some_and(|q| q.1 <= p.1) {
            continue;
        }
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    let sides = hull
        .windows(2)
        .map(|w| {
            let mut side = Side {
                start: w[0],
                end: w[1],
                polynomial: UPoly::zero(),
            };
            let mut coeffs = vec![Alg::zero(); side.height() as usize + 1];
            for (&(i, j), c) in f.terms() {
                if side.contains((i, j)) {
                    coeffs[(j - side.end.1) as usize] = c.clone();
                }
            }
            side.polynomial = UPoly::new(coeffs);
            side
        })
        .collect();
    NewtonPolygon {
        vertices: hull,
        sides,
        x_power,
        y_power,
    }
}

/// Every side polynomial is squarefree. Axis factors must be removed first.
pub fn is_newton_nondegenerate(f: &BivariatePolynomial, tower: &Tower) -> Result<bool> {
    let np = newton_polygon(f);
    if np.x_power > 0 {
        return Err(Error::AxisFactor("x divides f"));
    }
    if np.y_power > 0 {
        return Err(Error::AxisFactor("y divides f"));
    }
    polygon_nondegenerate(&np, tower)
}

/// Side polynomials squarefree, ignoring axis factors.
pub fn polygon_nondegenerate(np: &NewtonPolygon, tower: &Tower) -> Result<bool> {
    uniform(tower, |t| {
        for s in &np.sides {
            if !is_squarefree(&s.polynomial.reduce(t), t)? {
                return Ok(false);
            }
        }
        Ok(true)
    })
}

/// Type of a non-degenerate germ from its polygon: `gcd(h, w)` branches per
/// side with Newton pair `(h, w)/gcd`, intersections `min(m1·n2, m2·n1)`,
/// and the axes as smooth branches.
pub fn nondegenerate_type(np: &NewtonPolygon) -> Result<EquisingularityType> {
    if np.x_power > 1 || np.y_power > 1 {
        return Err(Error::NotReduced);
    }
    // (n, m) per branch; the axes are (0, 1) for x = 0 and (1, 0) for y = 0
    let mut pairs: Vec<(u64, u64)> = Vec::new();
    if np.x_power == 1 {
        pairs.push((0, 1));
    }
    for s in &np.sides {
        if s.height() == 0 || s.width() == 0 {
            return Err(Error::InvalidInput("degenerate side".into()));
        }
        let (n, m, r) = s.reduced();
        for _ in 0..r {
            pairs.push((n as u64, m as u64));
        }
    }
    if np.y_power == 1 {
        pairs.push((1, 0));
    }
    let branches = pairs
        .iter()
        .map(|&(n, m)| match (n, m) {
            (0, _) | (_, 0) => Ok(NumericalSemigroup::smooth()),
            _ => NumericalSemigroup::from_generators(&[n, m]),
        })
        .collect::<Result<Vec<_>>>()?;
    let k = pairs.len();
    let mut inter = vec![vec![0u64; k]; k];
    for a in 0..k {
        for b in a + 1..k {
            let (n1, m1) = pairs[a];
            let (n2, m2) = pairs[b];
            let v = match ((n1, m1), (n2, m2)) {
                ((0, _), (_, 0)) | ((_, 0), (0, _)) => 1,
                ((0, _), (n, _)) | ((n, _), (0, _)) => n,
                ((_, 0), (_, m)) | ((_, m), (_, 0)) => m,
                _ => (m1 * n2).min(m2 * n1),
            };
            inter[a][b] = v;
            inter[b][a] = v;
        }
    }
    EquisingularityType::new(branches, inter)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bp(terms: &[((u32, u32), i64)]) -> BivariatePolynomial {
        BivariatePolynomial::from_int_terms(terms)
    }

    fn sg(g: &[u64]) -> NumericalSemigroup {
        NumericalSemigroup::from_generators(g).unwrap()
    }

    #[test]
    fn single_side() {
        let np = newton_polygon(&bp(&[((0, 4), 5), ((11, 0), -12), ((6, 3), 1)]));
        assert_eq!(np.vertices, vec![(0, 4), (11, 0)]);
        assert_eq!(np.sides.len(), 1);
        assert_eq!(np.sides[0].polynomial, UPoly::from_rationals(&[-12, 0, 0, 0, 5]));
        let ty = nondegenerate_type(&np).unwrap();
        assert_eq!(ty.branches(), &[sg(&[4, 11])]);
    }

    #[test]
    fn stratum_ten_shape() {
        let np = newton_polygon(&bp(&[((0, 4), 1), ((8, 1), 1), ((11, 0), 1), ((9, 1), 2)]));
        assert_eq!(np.vertices, vec![(0, 4), (8, 1), (11, 0)]);
        let ty = nondegenerate_type(&np).unwrap();
        assert_eq!(ty.branches(), &[NumericalSemigroup::smooth(), sg(&[3, 8])]);
        assert_eq!(ty.intersection(0, 1), 8);
    }

    #[test]
    fn collinear_points_join_the_side() {
        let np = newton_polygon(&bp(&[((0, 4), 1), ((5, 2), -2), ((10, 0), 1)]));
        assert_eq!(np.vertices, vec![(0, 4), (10, 0)]);
        assert_eq!(np.sides[0].polynomial, UPoly::from_rationals(&[1, 0, -2, 0, 1]));
        assert!(!polygon_nondegenerate(&np, &Tower::rational()).unwrap());
        let np = newton_polygon(&bp(&[((0, 4), 1), ((5, 2), 3), ((10, 0), 1)]));
        let ty = nondegenerate_type(&np).unwrap();
        assert_eq!(ty.branches(), &[sg(&[2, 5]), sg(&[2, 5])]);
        assert_eq!(ty.intersection(0, 1), 10);
    }

    #[test]
    fn axes() {
        let np = newton_polygon(&BivariatePolynomial::y());
        assert!(np.sides.is_empty());
        assert_eq!(np.y_power, 1);
        let f = bp(&[((0, 2), 1), ((3, 0), -1)]).mul(&BivariatePolynomial::y(), &Tower::rational());
        assert!(matches!(is_newton_nondegenerate(&f, &Tower::rational()), Err(Error::AxisFactor(_))));
        let ty = nondegenerate_type(&newton_polygon(&f)).unwrap();
        assert_eq!(ty.branches(), &[NumericalSemigroup::smooth(), sg(&[2, 3])]);
        assert_eq!(ty.intersection(0, 1), 3);
        let sq = f.mul(&BivariatePolynomial::y(), &Tower::rational());
        assert!(matches!(nondegenerate_type(&newton_polygon(&sq)), Err(Error::NotReduced)));
    }

    #[test]
    fn double_root_is_degenerate() {
        let f = bp(&[((0, 2), 1), ((1, 1), -2), ((2, 0), 1), ((3, 0), 1)]);
        assert!(!is_newton_nondegenerate(&f, &Tower::rational()).unwrap());
    }
}
