//! Normal-form families: the eighteen strata of the `<5,12>` class, the
//! multiplicity-three forms, and the multiplicity-four forms of genus one and
//! two. Each family instantiates to an exact branch once its free
//! coefficients are fixed, either by the caller or by seeded sampling.

use std::collections::BTreeMap;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{format_rational, int, rat, Alg, Rational, Tower, TruncatedSeries};
use crate::branch::PuiseuxBranch;
use crate::error::{Error, Result};
use crate::sampling::random_rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    Gamma512 { row: u32 },
    /// `y = t^β` when `k` is absent, else `y = t^β + t^(β+ε+3k)`.
    Mult3 { beta: u32, k: Option<u32> },
    /// Forms 1 to 5; `k` is the index of the first free coefficient of form 3.
    Mult4G1 { form: u32, m: u32, j: u32, k: u32 },
    Mult4G2 { v1: u32, v2: u32 },
}

#[derive(Clone, Debug)]
enum Coef {
    Num(Rational),
    /// `Σ cs[i]·p^i`
    Poly(String, Vec<Rational>),
}

impl Coef {
    fn one() -> Coef {
        Coef::Num(int(1))
    }

    fn param(p: &str) -> Coef {
        Coef::Poly(p.to_string(), vec![int(0), int(1)])
    }

    fn eval(&self, vals: &BTreeMap<String, Alg>, t: &Tower) -> Alg {
        match self {
            Coef::Num(r) => Alg::Rat(r.clone()),
            Coef::Poly(p, cs) => {
                let v = &vals[p];
                let mut acc = Alg::zero();
                for c in cs.iter().rev() {
                    acc = t.mul(&acc, v).add(&Alg::Rat(c.clone()));
                }
                acc
            }
        }
    }
}

/// `param ≠ expr`.
#[derive(Clone, Debug)]
struct Condition {
    param: String,
    expr: Coef,
    text: String,
}

fn ne(param: &str, expr: Coef, text: &str) -> Condition {
    Condition {
        param: param.to_string(),
        expr,
        text: text.to_string(),
    }
}

struct Template {
    n: u32,
    terms: Vec<(usize, Coef)>,
    params: Vec<String>,
    conditions: Vec<Condition>,
}

/// A concrete member of a family.
#[derive(Clone, Debug)]
pub struct FamilyInstance {
    pub family: Family,
    pub params: Vec<(String, Alg)>,
    pub branch: PuiseuxBranch,
}

const STRUCTURAL: &[&str] = &["row", "beta", "k", "form", "m", "j", "v1", "v2"];

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

impl Family {
    /// Parses `gamma-5-12/<row>`, `mult3/<β>[/<k>]`, `mult4-g1/<form>/<m>/<j>[/<k>]`
    /// or `mult4-g2/<v1>/<v2>`. Segments may also be separated by commas, and
    /// missing ones are looked up by name (`beta`, `k`, `form`, `m`, `j`,
    /// `v1`, `v2`, `row`) in `named`.
    pub fn parse(name: &str, named: &BTreeMap<String, Alg>) -> Result<Family> {
        let mut parts = name.trim().split('/');
        let kind = parts.next().unwrap_or_default();
        let mut pos: Vec<u32> = Vec::new();
        for seg in parts.flat_map(|p| p.split(',')) {
            let seg = seg.trim();
            if seg.is_empty() {
                continue;
            }
            pos.push(seg.parse().map_err(|_| bad(format!("bad family index `{seg}` in `{name}`")))?);
        }
        let mut pos = pos.into_iter();
        let mut get = |key: &str, required: bool| -> Result<Option<u32>> {
            if let Some(v) = pos.next() {
                return Ok(Some(v));
            }
            match named.get(key) {
                Some(Alg::Rat(r)) if r.is_integer() && *r >= int(0) => {
                    Ok(Some(r.to_integer().try_into().map_err(|_| bad(format!("{key} out of range")))?))
                }
                Some(_) => Err(bad(format!("{key} must be a non-negative integer"))),
                None if required => Err(bad(format!("family `{kind}` needs `{key}`"))),
                None => Ok(None),
            }
        };
        let fam = match kind {
            "gamma-5-12" => Family::Gamma512 {
                row: get("row", true)?.unwrap(),
            },
            "mult3" => Family::Mult3 {
                beta: get("beta", true)?.unwrap(),
                k: get("k", false)?,
            },
            "mult4-g1" => {
                let form = get("form", true)?.unwrap();
                let m = get("m", true)?.unwrap();
                let j = if form == 1 { get("j", false)?.unwrap_or(0) } else { get("j", true)?.unwrap() };
                let k = if form == 3 { get("k", true)?.unwrap() } else { get("k", false)?.unwrap_or(0) };
                Family::Mult4G1 { form, m, j, k }
            }
            "mult4-g2" => Family::Mult4G2 {
                v1: get("v1", true)?.unwrap(),
                v2: get("v2", true)?.unwrap(),
            },
            _ => return Err(bad(format!("unknown family `{kind}`"))),
        };
        if pos.next().is_some() {
            return Err(bad(format!("too many indices in `{name}`")));
        }
        fam.template()?;
        Ok(fam)
    }

    /// Names of the free coefficients.
    pub fn parameters(&self) -> Result<Vec<String>> {
        Ok(self.template()?.params)
    }

    fn template(&self) -> Result<Template> {
        match *self {
            Family::Gamma512 { row } => gamma_template(row),
            Family::Mult3 { beta, k } => mult3_template(beta, k),
            Family::Mult4G1 { form, m, j, k } => mult4_g1_template(form, m, j, k),
            Family::Mult4G2 { v1, v2 } => mult4_g2_template(v1, v2),
        }
    }

    /// Fixed parameter values forced on sweep trial `trial`. Only the last
    /// stratum of `<5,12>` has walls: `c = -5/4`, `(c, d) = (-5/4, -5/16)`
    /// and `c = 1`, injected on trials `1, 4, 7 (mod 10)`.
    pub fn wall_values(&self, trial: u64) -> BTreeMap<String, Alg> {
        let mut out = BTreeMap::new();
        if *self == (Family::Gamma512 { row: 18 }) {
            match trial % 10 {
                1 => {
                    out.insert("c".into(), Alg::Rat(rat(-5, 4)));
                }
                4 => {
                    out.insert("c".into(), Alg::Rat(rat(-5, 4)));
                    out.insert("d".into(), Alg::Rat(rat(-5, 16)));
                }
                7 => {
                    out.insert("c".into(), Alg::one());
                }
                _ => {}
            }
        }
        out
    }

    /// Instantiates with the given coefficient values over `tower`, sampling
    /// the missing ones from `rng`. Structural keys in `given` are ignored.
    pub fn instantiate(
        &self,
        given: &BTreeMap<String, Alg>,
        tower: &Tower,
        rng: &mut ChaCha8Rng,
    ) -> Result<FamilyInstance> {
        let tpl = self.template()?;
        for key in given.keys() {
            if !tpl.params.contains(key) && !STRUCTURAL.contains(&key.as_str()) {
                return Err(bad(format!("family {self} has no parameter `{key}`")));
            }
        }
        for attempt in 0..64 {
            let mut vals: BTreeMap<String, Alg> = BTreeMap::new();
            for p in &tpl.params {
                let v = match given.get(p) {
                    Some(v) => tower.reduce(v),
                    None => Alg::Rat(random_rational(rng, 50)),
                };
                vals.insert(p.clone(), v);
            }
            match check_conditions(&tpl, &vals, tower) {
                Ok(()) => return build(self, &tpl, vals, tower),
                Err(c) => {
                    let sampled = |p: &str| !given.contains_key(p);
                    let depends = match &c.expr {
                        Coef::Poly(p, _) => sampled(p),
                        Coef::Num(_) => false,
                    };
                    if !(sampled(&c.param) || depends) || attempt == 63 {
                        return Err(bad(format!("side condition violated: {}", c.text)));
                    }
                }
            }
        }
        unreachable!()
    }

    /// Instance for trial `trial` of a seeded sweep: each trial draws from
    /// its own ChaCha8 stream, so trials are independent of scheduling.
    pub fn sample(&self, seed: u64, trial: u64, walls: bool) -> Result<FamilyInstance> {
        let given = if walls { self.wall_values(trial) } else { BTreeMap::new() };
        self.sample_with(&given, &Tower::rational(), seed, trial)
    }

    /// As [`Family::sample`] with some values fixed by the caller.
    pub fn sample_with(
        &self,
        given: &BTreeMap<String, Alg>,
        tower: &Tower,
        seed: u64,
        trial: u64,
    ) -> Result<FamilyInstance> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        self.instantiate(given, tower, &mut rng)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Family::Gamma512 { row } => write!(f, "gamma-5-12/{row}"),
            Family::Mult3 { beta, k: None } => write!(f, "mult3/{beta}"),
            Family::Mult3 { beta, k: Some(k) } => write!(f, "mult3/{beta}/{k}"),
            Family::Mult4G1 { form: 1, m, .. } => write!(f, "mult4-g1/1/{m}"),
            Family::Mult4G1 { form: 3, m, j, k } => write!(f, "mult4-g1/3/{m}/{j}/{k}"),
            Family::Mult4G1 { form, m, j, .. } => write!(f, "mult4-g1/{form}/{m}/{j}"),
            Family::Mult4G2 { v1, v2 } => write!(f, "mult4-g2/{v1}/{v2}"),
        }
    }
}

fn check_conditions<'a>(tpl: &'a Template, vals: &BTreeMap<String, Alg>, t: &Tower) -> std::result::Result<(), &'a Condition> {
    for c in &tpl.conditions {
        let diff = vals[&c.param].sub(&c.expr.eval(vals, t));
        if t.reduce(&diff).is_zero() || t.inv(&diff).is_err() {
            return Err(c);
        }
    }
    Ok(())
}

fn build(fam: &Family, tpl: &Template, vals: BTreeMap<String, Alg>, t: &Tower) -> Result<FamilyInstance> {
    let terms = tpl.terms.iter().map(|(e, c)| (*e, t.reduce(&c.eval(&vals, t))));
    let y = TruncatedSeries::from_terms(terms, None);
    let branch = PuiseuxBranch::new(tpl.n, y, t.clone())?;
    let params = tpl.params.iter().map(|p| (p.clone(), vals[p].clone())).collect();
    Ok(FamilyInstance {
        family: fam.clone(),
        params,
        branch,
    })
}

fn poly(p: &str, cs: &[(i64, i64)]) -> Coef {
    Coef::Poly(p.to_string(), cs.iter().map(|&(n, d)| rat(n, d)).collect())
}

fn gamma_template(row: u32) -> Result<Template> {
    use Coef as C;
    let one = C::one;
    let c = || C::param("c");
    let d = || C::param("d");
    let e = || C::param("e");
    let q = |n, dd| C::Num(rat(n, dd));
    let row13 = || vec![(12, one()), (14, one()), (16, q(13, 12)), (18, q(133, 108))];
    let (terms, conditions): (Vec<(usize, Coef)>, Vec<Condition>) = match row {
        1 => (vec![(12, one())], vec![]),
        2 => (vec![(12, one()), (38, one())], vec![]),
        3 => (vec![(12, one()), (33, one())], vec![]),
        4 => (vec![(12, one()), (28, one())], vec![]),
        5 => (vec![(12, one()), (26, one()), (28, c())], vec![ne("c", q(0, 1), "c ≠ 0")]),
        6 => (vec![(12, one()), (26, one()), (33, c())], vec![]),
        7 => (vec![(12, one()), (23, one()), (26, c())], vec![]),
        8 => (vec![(12, one()), (21, one()), (23, c()), (28, d())], vec![]),
        9 => (vec![(12, one()), (18, one()), (21, c()), (26, d())], vec![]),
        10 => (vec![(12, one()), (16, one()), (18, c()), (23, d())], vec![]),
        11 => (
            vec![(12, one()), (14, one()), (16, c()), (18, d()), (23, e())],
            vec![
                ne("c", q(13, 12), "c ≠ 13/12"),
                ne("d", poly("c", &[(-1, 3), (0, 1), (4, 3)]), "d ≠ (4c^2-1)/3"),
            ],
        ),
        12 => (
            vec![
                (12, one()),
                (14, one()),
                (16, c()),
                (18, poly("c", &[(-1, 3), (0, 1), (4, 3)])),
                (23, d()),
                (28, e()),
            ],
            vec![ne("c", q(13, 12), "c ≠ 13/12")],
        ),
        13 => (
            vec![(12, one()), (14, one()), (16, q(13, 12)), (18, c()), (21, d())],
            vec![ne("c", q(133, 108), "c ≠ 133/108")],
        ),
        14 => {
            let mut t = row13();
            t.extend([(21, c()), (23, d())]);
            (t, vec![ne("d", poly("c", &[(0, 1), (34, 11)]), "d ≠ 34c/11")])
        }
        15 => {
            let mut t = row13();
            t.extend([(21, c()), (23, poly("c", &[(0, 1), (34, 11)])), (28, d())]);
            (
                t,
                vec![ne(
                    "d",
                    poly("c", &[(5225, 559872), (0, 1), (81, 32)]),
                    "d ≠ 81c^2/32 + 5225/559872",
                )],
            )
        }
        16 => {
            let mut t = row13();
            t.extend([
                (21, c()),
                (23, poly("c", &[(0, 1), (34, 11)])),
                (28, poly("c", &[(5225, 559872), (0, 1), (81, 32)])),
                (33, d()),
            ]);
            (t, vec![])
        }
        17 => (
            vec![(12, one()), (13, one()), (14, q(-1, 2)), (16, c()), (21, d()), (26, e())],
            vec![],
        ),
        18 => (
            vec![(12, one()), (13, one()), (14, c()), (16, d()), (21, e())],
            vec![ne("c", q(-1, 2), "c ≠ -1/2")],
        ),
        _ => return Err(bad(format!("gamma-5-12 has rows 1..18, not {row}"))),
    };
    let params = ["c", "d", "e"]
        .iter()
        .filter(|p| {
            terms.iter().any(|(_, c)| matches!(c, Coef::Poly(q, _) if q == *p))
        })
        .map(|p| p.to_string())
        .collect();
    Ok(Template {
        n: 5,
        terms,
        params,
        conditions,
    })
}

fn mult3_template(beta: u32, k: Option<u32>) -> Result<Template> {
    if beta < 4 || beta.is_multiple_of(3) {
        return Err(bad(format!("mult3 needs β > 3 prime to 3, got {beta}")));
    }
    let (q, eps) = (beta / 3, beta % 3);
    let mut terms = vec![(beta as usize, Coef::one())];
    if let Some(k) = k {
        if q < 2 || k > q - 2 {
            return Err(bad(format!("mult3/{beta} admits 0 ≤ k ≤ {}", q as i64 - 2)));
        }
        terms.push(((beta + eps + 3 * k) as usize, Coef::one()));
    }
    Ok(Template {
        n: 3,
        terms,
        params: vec![],
        conditions: vec![],
    })
}

fn a(i: u32) -> String {
    format!("a{i}")
}

fn mult4_g1_template(form: u32, m: u32, j: u32, k: u32) -> Result<Template> {
    if m < 5 || m.is_multiple_of(2) {
        return Err(bad(format!("mult4-g1 needs odd m ≥ 5, got {m}")));
    }
    let q = m / 4;
    let mut terms = vec![(m as usize, Coef::one())];
    let mut params = Vec::new();
    let mut conditions = Vec::new();
    let mut free = |terms: &mut Vec<(usize, Coef)>, i: u32, e: u32| {
        terms.push((e as usize, Coef::param(&a(i))));
        params.push(a(i));
    };
    let need_j = |lo: u32, hi: u32| -> Result<()> {
        if j < lo || j > hi {
            return Err(bad(format!("form {form} with m = {m} needs {lo} ≤ j ≤ {hi}, got {j}")));
        }
        Ok(())
    };
    match form {
        1 => {}
        2 => {
            need_j(2, m / 2)?;
            terms.push(((3 * m - 4 * j) as usize, Coef::one()));
            for i in 1..(j + 1).saturating_sub(q + 2) {
                free(&mut terms, i, 2 * m - 4 * (j - q - i));
            }
        }
        3..=5 => {
            need_j(2, q)?;
            terms.push(((2 * m - 4 * j) as usize, Coef::one()));
            // a_i sits at t^(3m - 4(q + j + 1 - i))
            let at = |i: u32| 3 * m - 4 * (q + j + 1 - i);
            match form {
                3 => {
                    if k < 1 || k + j > q {
                        return Err(bad(format!("form 3 with m = {m}, j = {j} needs 1 ≤ k ≤ {}", q - j)));
                    }
                    for i in k..q {
                        free(&mut terms, i, at(i));
                    }
                    conditions.push(ne(&a(k), Coef::Num(int(0)), &format!("a{k} ≠ 0")));
                }
                4 => {
                    for i in q - j + 1..q {
                        free(&mut terms, i, at(i));
                    }
                    let lead = rat((3 * m - 4 * j) as i64, (2 * m) as i64);
                    let text = format!("a{} ≠ {}", q - j + 1, format_rational(&lead));
                    conditions.push(ne(&a(q - j + 1), Coef::Num(lead), &text));
                }
                _ => {
                    terms.push(((3 * m - 8 * j) as usize, Coef::Num(rat((3 * m - 4 * j) as i64, (2 * m) as i64))));
                    for i in q - j + 2..=q {
                        free(&mut terms, i, at(i));
                    }
                }
            }
        }
        _ => return Err(bad(format!("mult4-g1 has forms 1..5, not {form}"))),
    }
    terms.sort_by_key(|(e, _)| *e);
    Ok(Template {
        n: 4,
        terms,
        params,
        conditions,
    })
}

fn mult4_g2_template(v1: u32, v2: u32) -> Result<Template> {
    if v1 < 6 || v1 % 4 != 2 || v2.is_multiple_of(2) || v2 <= 2 * v1 {
        return Err(bad(format!(
            "mult4-g2 needs v1 ≡ 2 (mod 4), v1 ≥ 6, v2 odd and v2 > 2·v1; got ({v1}, {v2})"
        )));
    }
    let q = v1 / 4;
    let mut terms = vec![(v1 as usize, Coef::one()), ((v2 - v1) as usize, Coef::one())];
    let mut params = Vec::new();
    for i in 1..q {
        terms.push(((v2 - 4 * (q - i + 1)) as usize, Coef::param(&a(i))));
        params.push(a(i));
    }
    Ok(Template {
        n: 4,
        terms,
        params,
        conditions: vec![],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn none() -> BTreeMap<String, Alg> {
        BTreeMap::new()
    }

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(3)
    }

    #[test]
    fn row_ten_with_c_fixed() {
        let fam = Family::parse("gamma-5-12/10", &none()).unwrap();
        let mut given = none();
        given.insert("c".into(), Alg::from(7));
        let inst = fam.instantiate(&given, &Tower::rational(), &mut rng()).unwrap();
        assert_eq!(inst.branch.support(), vec![12, 16, 18, 23]);
        assert_eq!(inst.branch.y.coeff(18), Alg::from(7));
        assert_eq!(inst.params.len(), 2);
    }

    #[test]
    fn side_condition_is_named() {
        let fam = Family::parse("gamma-5-12/11", &none()).unwrap();
        let mut given = none();
        given.insert("c".into(), Alg::Rat(rat(13, 12)));
        let err = fam.instantiate(&given, &Tower::rational(), &mut rng()).unwrap_err();
        assert!(err.to_string().contains("c ≠ 13/12"), "{err}");
        given.insert("c".into(), Alg::from(1));
        given.insert("d".into(), Alg::from(1));
        let err = fam.instantiate(&given, &Tower::rational(), &mut rng()).unwrap_err();
        assert!(err.to_string().contains("(4c^2-1)/3"), "{err}");
    }

    #[test]
    fn mult3_and_g2_shapes() {
        let mut named = none();
        named.insert("beta".into(), Alg::from(7));
        named.insert("k".into(), Alg::from(0));
        let fam = Family::parse("mult3", &named).unwrap();
        let inst = fam.instantiate(&none(), &Tower::rational(), &mut rng()).unwrap();
        assert_eq!(inst.branch.support(), vec![7, 8]);
        assert!(Family::parse("mult3/7/1", &none()).is_err());
        let g2 = Family::parse("mult4-g2/6/13", &none()).unwrap();
        assert!(g2.parameters().unwrap().is_empty());
        let g2 = Family::parse("mult4-g2/10/21", &none()).unwrap();
        let inst = g2.sample(1, 0, false).unwrap();
        assert_eq!(inst.branch.support(), vec![10, 11, 13]);
    }

    #[test]
    fn mult4_g1_exponents() {
        let f2 = Family::parse("mult4-g1/2/25/11", &none()).unwrap();
        let inst = f2.sample(1, 0, false).unwrap();
        assert_eq!(inst.branch.support(), vec![25, 31, 34, 38, 42]);
        let f4 = Family::parse("mult4-g1/4/21/3", &none()).unwrap();
        let inst = f4.sample(1, 0, false).unwrap();
        assert_eq!(inst.branch.support(), vec![21, 30, 39, 43]);
        let f5 = Family::parse("mult4-g1/5/21/3", &none()).unwrap();
        let inst = f5.sample(1, 0, false).unwrap();
        assert_eq!(inst.branch.y.coeff(39), Alg::Rat(rat(51, 42)));
        assert!(Family::parse("mult4-g1/3/21/4/2", &none()).is_err());
    }

    #[test]
    fn walls_only_on_row_18() {
        let fam = Family::parse("gamma-5-12/18", &none()).unwrap();
        let inst = fam.sample(1, 4, true).unwrap();
        assert_eq!(inst.branch.y.coeff(14), Alg::Rat(rat(-5, 4)));
        assert_eq!(inst.branch.y.coeff(16), Alg::Rat(rat(-5, 16)));
        assert!(Family::parse("gamma-5-12/17", &none()).unwrap().wall_values(1).is_empty());
        let a = fam.sample(9, 3, true).unwrap();
        let b = fam.sample(9, 3, true).unwrap();
        assert_eq!(a.branch, b.branch);
    }
}
