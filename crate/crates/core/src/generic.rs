//! General polar curves: seeded direction sampling with an agreement
//! certificate, and sweeps of a family over random parameter values.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::algebra::{format_rational, Alg, BivariatePolynomial, Rational, Tower};
use crate::branch::PuiseuxBranch;
use crate::equisingularity::{equisingularity_type, intersection_multiplicity, EquisingularityType};
use crate::error::{Error, Result};
use crate::families::Family;
use crate::implicit::{implicitize, milnor_number, polar};
use crate::newton::{newton_polygon, polygon_nondegenerate, NewtonPolygon};
use crate::sampling::random_rational;

pub const WORKERS_ENV: &str = "POLAR_WORKERS";
pub const RNG_NAME: &str = "ChaCha8 (rand_chacha 0.9), one stream per trial or direction";
const DIRECTION_HEIGHT: i64 = 100;

/// How independent jobs are scheduled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parallelism {
    Sequential,
    /// `workers = 0` lets rayon choose.
    Rayon { workers: usize },
}

impl Default for Parallelism {
    fn default() -> Self {
        Parallelism::Rayon { workers: 0 }
    }
}

impl Parallelism {
    /// From `POLAR_WORKERS`: `1` is sequential, `n > 1` a pool of `n`,
    /// unset or `0` the rayon default.
    pub fn from_env() -> Self {
        match std::env::var(WORKERS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
            Some(1) => Parallelism::Sequential,
            Some(n) => Parallelism::Rayon { workers: n },
            None => Parallelism::default(),
        }
    }

    pub fn workers(n: usize) -> Self {
        if n == 1 {
            Parallelism::Sequential
        } else {
            Parallelism::Rayon { workers: n }
        }
    }

    /// Order-preserving map. Without the `parallel` feature every variant
    /// runs sequentially.
    pub fn map<T, R, F>(&self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Sync + Send,
    {
        match *self {
            Parallelism::Sequential => items.into_iter().map(f).collect(),
            #[cfg(feature = "parallel")]
            Parallelism::Rayon { workers } => {
                use rayon::prelude::*;
                let run = || items.into_par_iter().map(&f).collect();
                if workers == 0 {
                    return run();
                }
                match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
                    Ok(pool) => pool.install(run),
                    Err(_) => run(),
                }
            }
            #[cfg(not(feature = "parallel"))]
            Parallelism::Rayon { .. } => items.into_iter().map(f).collect(),
        }
    }
}

/// A polar direction `(a : b)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Direction {
    pub a: Rational,
    pub b: Rational,
}

impl Direction {
    pub fn new(a: Rational, b: Rational) -> Self {
        Direction { a, b }
    }

    /// Direction number `index` of the sequence seeded by `seed`.
    pub fn sample(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        let a = random_rational(&mut rng, DIRECTION_HEIGHT);
        let b = random_rational(&mut rng, DIRECTION_HEIGHT);
        Direction { a, b }
    }

    pub fn to_json(&self) -> Value {
        json!([format_rational(&self.a), format_rational(&self.b)])
    }
}

/// `I(b, polar) = μ + n - 1`, checked along the first direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TeissierCheck {
    pub intersection: u64,
    pub expected: u64,
}

impl TeissierCheck {
    pub fn holds(&self) -> bool {
        self.intersection == self.expected
    }
}

#[derive(Clone, Debug)]
pub struct GenericPolarReport {
    pub tower: Tower,
    pub curve: BivariatePolynomial,
    pub polar_type: EquisingularityType,
    /// All sampled directions agreed.
    pub certified: bool,
    pub directions: Vec<Direction>,
    pub dissenting: Vec<(Direction, EquisingularityType)>,
    /// Directions whose polar was not reduced, replaced by fresh samples.
    pub resampled: Vec<Direction>,
    /// Milnor number of the curve.
    pub milnor: u64,
    /// Milnor number of the general polar, read from its type.
    pub polar_milnor: u64,
    pub polygon: NewtonPolygon,
    pub nondegenerate: bool,
    pub teissier: Option<TeissierCheck>,
}

impl GenericPolarReport {
    pub fn to_json(&self) -> Value {
        let t = &self.tower;
        let polygon = json!({
            "vertices": self.polygon.vertices,
            "x_power": self.polygon.x_power,
            "y_power": self.polygon.y_power,
            "sides": self.polygon.sides.iter().map(|s| json!({
                "start": s.start,
                "end": s.end,
                "inclination": format_rational(&s.inclination()),
                "polynomial": s.polynomial.coeffs().iter().map(|c| t.to_json(c)).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        });
        json!({
            "type": self.polar_type.to_json(),
            "certified": self.certified,
            "directions": self.directions.iter().map(Direction::to_json).collect::<Vec<_>>(),
            "dissenting": self.dissenting.iter().map(|(d, ty)| json!({
                "direction": d.to_json(),
                "type": ty.to_string(),
            })).collect::<Vec<_>>(),
            "resampled": self.resampled.iter().map(Direction::to_json).collect::<Vec<_>>(),
            "curve_milnor": self.milnor,
            "polar_milnor": self.polar_milnor,
            "newton_polygon": polygon,
            "newton_nondegenerate": self.nondegenerate,
            "teissier": self.teissier.as_ref().map(|c| json!({
                "intersection": c.intersection,
                "expected": c.expected,
                "holds": c.holds(),
            })),
        })
    }
}

/// Type of the polar at one direction; `None` when the polar is not reduced.
fn polar_at(f: &BivariatePolynomial, tower: &Tower, d: &Direction) -> Result<Option<EquisingularityType>> {
    let p = polar(f, &d.a, &d.b)?;
    match equisingularity_type(&p, tower) {
        Ok(ty) => Ok(Some(ty)),
        Err(Error::NotReduced) | Err(Error::NonIsolated) => Ok(None),
        Err(e) => Err(e),
    }
}

/// General polar of `b` from `samples` directions drawn from `seed`.
pub fn generic_polar_type(b: &PuiseuxBranch, samples: usize, seed: u64, par: Parallelism) -> Result<GenericPolarReport> {
    if samples == 0 {
        return Err(Error::InvalidInput("at least one direction is needed".into()));
    }
    let dirs = (0..samples as u64).map(|i| Direction::sample(seed, i)).collect();
    polar_type_at(b, dirs, Some(seed), par)
}

/// General polar from explicit directions. Non-reduced polars are replaced
/// by fresh directions from `reseed`, when given.
pub fn polar_type_at(
    b: &PuiseuxBranch,
    directions: Vec<Direction>,
    reseed: Option<u64>,
    par: Parallelism,
) -> Result<GenericPolarReport> {
    if directions.is_empty() {
        return Err(Error::InvalidInput("at least one direction is needed".into()));
    }
    let tower = b.tower.clone();
    let f = implicitize(b)?;
    let mut next = directions.len() as u64;
    let mut pending = directions;
    let mut used: Vec<(Direction, EquisingularityType)> = Vec::new();
    let mut resampled = Vec::new();
    while !pending.is_empty() {
        let results = par.map(pending.clone(), |d| polar_at(&f, &tower, &d));
        let mut again = Vec::new();
        for (d, r) in pending.into_iter().zip(results) {
            match r? {
                Some(ty) => used.push((d, ty)),
                None => {
                    resampled.push(d);
                    if let Some(seed) = reseed {
                        if resampled.len() > 16 {
                            return Err(Error::NotReduced);
                        }
                        again.push(Direction::sample(seed, next));
                        next += 1;
                    }
                }
            }
        }
        pending = again;
    }
    if used.is_empty() {
        return Err(Error::NotReduced);
    }
    let mut counts: BTreeMap<&EquisingularityType, usize> = BTreeMap::new();
    for (_, ty) in &used {
        *counts.entry(ty).or_default() += 1;
    }
    let best = counts.values().copied().max().unwrap_or(0);
    let majority = (*counts.iter().find(|(_, &c)| c == best).unwrap().0).clone();
    let dissenting: Vec<(Direction, EquisingularityType)> =
        used.iter().filter(|(_, ty)| *ty != majority).cloned().collect();
    let first = used.iter().find(|(_, ty)| *ty == majority).unwrap().0.clone();
    let p = polar(&f, &first.a, &first.b)?;
    let polygon = newton_polygon(&p);
    let nondegenerate = polygon.x_power == 0 && polygon.y_power == 0 && polygon_nondegenerate(&polygon, &tower)?;
    let milnor = milnor_number(&f, &tower)?;
    let teissier = match intersection_multiplicity(b, &p) {
        Ok(i) => Some(TeissierCheck {
            intersection: i,
            expected: milnor + b.n as u64 - 1,
        }),
        Err(_) => None,
    };
    Ok(GenericPolarReport {
        tower,
        curve: f,
        polar_milnor: majority.milnor(),
        polar_type: majority,
        certified: dissenting.is_empty(),
        directions: used.into_iter().map(|(d, _)| d).collect(),
        dissenting,
        resampled,
        milnor,
        polygon,
        nondegenerate,
        teissier,
    })
}

/// One polar type seen during a sweep.
#[derive(Clone, Debug)]
pub struct SweepGroup {
    pub polar_type: EquisingularityType,
    pub count: usize,
    pub nu: u64,
    pub trials: Vec<u64>,
    /// Parameter values of the first trial in the group.
    pub example: Vec<(String, Alg)>,
}

#[derive(Clone, Debug)]
pub struct SweepReport {
    pub family: Family,
    pub trials: u64,
    pub seed: u64,
    pub directions: usize,
    pub walls: bool,
    /// Most frequent first, ties by type.
    pub groups: Vec<SweepGroup>,
    pub uncertified: Vec<u64>,
}

impl SweepReport {
    pub fn dominant(&self) -> Option<&SweepGroup> {
        self.groups.first()
    }

    pub fn to_json(&self) -> Value {
        let q = Tower::rational();
        json!({
            "family": self.family.to_string(),
            "trials": self.trials,
            "seed": self.seed,
            "rng": RNG_NAME,
            "directions_per_trial": self.directions,
            "wall_injection": self.walls,
            "types": self.groups.iter().map(|g| json!({
                "type": g.polar_type.to_json(),
                "count": g.count,
                "nu": g.nu,
                "trials": g.trials,
                "example_params": g.example.iter()
                    .map(|(k, v)| (k.clone(), q.to_json(v)))
                    .collect::<serde_json::Map<_, _>>(),
            })).collect::<Vec<_>>(),
            "uncertified_trials": self.uncertified,
        })
    }
}

/// Direction seed used by trial `trial` of a sweep seeded by `seed`.
pub fn trial_direction_seed(seed: u64, trial: u64) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ trial.wrapping_add(1).wrapping_mul(0xbf58_476d_1ce4_e5b9)
}

/// Samples `trials` members of `family` (wall values injected when `walls`),
/// finds the general polar type of each and groups the trials by type.
pub fn stratum_sweep(
    family: &Family,
    trials: u64,
    seed: u64,
    directions: usize,
    walls: bool,
    par: Parallelism,
) -> Result<SweepReport> {
    if trials == 0 {
        return Err(Error::InvalidInput("a sweep needs at least one trial".into()));
    }
    let outcomes = par.map((0..trials).collect(), |i| -> Result<_> {
        let inst = family.sample(seed, i, walls)?;
        let rep = generic_polar_type(&inst.branch, directions, trial_direction_seed(seed, i), Parallelism::Sequential)?;
        Ok((i, inst.params, rep.polar_type, rep.certified))
    });
    let mut groups: BTreeMap<EquisingularityType, SweepGroup> = BTreeMap::new();
    let mut uncertified = Vec::new();
    for o in outcomes {
        let (i, params, ty, certified) = o?;
        if !certified {
            uncertified.push(i);
        }
        let g = groups.entry(ty.clone()).or_insert_with(|| SweepGroup {
            nu: ty.milnor(),
            polar_type: ty,
            count: 0,
            trials: Vec::new(),
            example: params,
        });
        g.count += 1;
        g.trials.push(i);
    }
    let mut groups: Vec<SweepGroup> = groups.into_values().collect();
    groups.sort_by(|x, y| y.count.cmp(&x.count).then_with(|| x.polar_type.cmp(&y.polar_type)));
    Ok(SweepReport {
        family: family.clone(),
        trials,
        seed,
        directions,
        walls,
        groups,
        uncertified,
    })
}
