//! Numerical semigroups of plane branches.

use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};

/// A numerical semigroup given by its minimal generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct NumericalSemigroup {
    generators: Vec<u64>,
    conductor: u64,
    gaps: Vec<u64>,
}

impl NumericalSemigroup {
    /// The semigroup `ℕ` of a smooth branch.
    pub fn smooth() -> Self {
        NumericalSemigroup {
            generators: vec![1],
            conductor: 0,
            gaps: Vec::new(),
        }
    }

    /// Builds the semigroup generated by `gens`, dropping redundant
    /// generators. The generators must be positive with gcd 1.
    pub fn from_generators(gens: &[u64]) -> Result<Self> {
        if gens.is_empty() || gens.contains(&0) {
            return Err(Error::InvalidInput("semigroup generators must be positive".into()));
        }
        if gens.iter().fold(0u64, |g, &v| g.gcd(&v)) != 1 {
            return Err(Error::InvalidInput(format!("generators {gens:?} have gcd > 1")));
        }
        let mut sorted = gens.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let v0 = sorted[0];
        // membership table until v0 consecutive members are seen
        let mut member = vec![true];
        let mut run = 1u64;
        let mut n = 0u64;
        while run < v0 {
            n += 1;
            let m = sorted.iter().any(|&g| g <= n && member[(n - g) as usize]);
            member.push(m);
            run = if m { run + 1 } else { 0 };
        }
        let conductor = if v0 == 1 { 0 } else { n + 1 - v0 };
        let gaps: Vec<u64> = (0..conductor).filter(|&k| !member[k as usize]).collect();
        // minimal generators: members not sums of two smaller nonzero members
        let mut minimal = Vec::new();
        for &g in &sorted {
            let redundant = (1..g).any(|a| {
                member_at(&member, a, conductor) && member_at(&member, g - a, conductor)
            });
            if !redundant {
                minimal.push(g);
            }
        }
        Ok(NumericalSemigroup {
            generators: minimal,
            conductor,
            gaps,
        })
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn multiplicity(&self) -> u64 {
        self.generators[0]
    }

    pub fn genus(&self) -> usize {
        self.generators.len() - 1
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn gaps(&self) -> &[u64] {
        &self.gaps
    }

    pub fn is_smooth(&self) -> bool {
        self.generators == [1]
    }

    pub fn contains(&self, v: u64) -> bool {
        v >= self.conductor || self.gaps.binary_search(&v).is_err()
    }

    /// Milnor number `2δ` of a branch with this semigroup.
    pub fn milnor(&self) -> u64 {
        self.conductor
    }
}

fn member_at(member: &[bool], k: u64, conductor: u64) -> bool {
    k >= conductor || member[k as usize]
}

impl fmt::Display for NumericalSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g: Vec<String> = self.generators.iter().map(u64::to_string).collect();
        write!(f, "<{}>", g.join(","))
    }
}

/// Minimal generators from the characteristic exponents `β_0 < β_1 < …`
/// (with `β_0` the multiplicity).
pub fn semigroup_from_characteristic(beta: &[u64]) -> Result<NumericalSemigroup> {
    let Some(&b0) = beta.first() else {
        return Err(Error::InvalidInput("no characteristic exponents".into()));
    };
    if b0 == 1 {
        return Ok(NumericalSemigroup::smooth());
    }
    let mut v = vec![b0];
    let mut e_prev = b0;
    let mut e = b0;
    for k in 1..beta.len() {
        let e_next = e.gcd(&beta[k]);
        if k == 1 {
            v.push(beta[1]);
        } else {
            let last = *v.last().unwrap();
            v.push((e_prev / e) * last + beta[k] - beta[k - 1]);
        }
        e_prev = e;
        e = e_next;
    }
    if e != 1 {
        return Err(Error::InvalidInput(format!(
            "characteristic sequence {beta:?} does not reach gcd 1"
        )));
    }
    NumericalSemigroup::from_generators(&v)
}
