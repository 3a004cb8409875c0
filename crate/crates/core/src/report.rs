//! The `analyze` pipeline and its JSON report.
//!
//! Keys are sorted and rationals are `"p/q"` strings, so a report depends
//! only on the input, the seed and the options. Wall-clock timings are added
//! only on request.

use std::time::Instant;

use serde_json::{json, Map, Value};

use crate::branch::{semigroup_of_branch, PuiseuxBranch};
use crate::differentials::differential_values_to;
use crate::dsl::{parse_branch_dsl, BranchSpec};
use crate::error::Error;
use crate::generic::{generic_polar_type, polar_type_at, Direction, Parallelism, RNG_NAME};

#[derive(Clone, Debug)]
pub struct AnalyzeOptions {
    pub directions: usize,
    /// Raises the working truncation of the differential computation.
    pub truncation: Option<usize>,
    pub seed: u64,
    /// Replaces sampling by these directions.
    pub explicit_directions: Option<Vec<Direction>>,
    pub timing: bool,
    pub parallelism: Parallelism,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            directions: 5,
            truncation: None,
            seed: 1,
            explicit_directions: None,
            timing: false,
            parallelism: Parallelism::default(),
        }
    }
}

/// How an analysis ended, mapped to the process exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    /// A library stage failed or a built-in cross-check did not hold.
    Failed,
    /// The input did not parse.
    Usage,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Ok => 0,
            Outcome::Failed => 1,
            Outcome::Usage => 2,
        }
    }
}

pub fn error_json(stage: &str, e: &Error) -> Value {
    let mut m = Map::new();
    m.insert("stage".into(), json!(stage));
    m.insert("message".into(), json!(e.to_string()));
    if let Error::Parse { column, .. } = e {
        m.insert("column".into(), json!(column));
    }
    json!({ "error": Value::Object(m) })
}

/// Parses and analyzes DSL text.
pub fn analyze_text(text: &str, opts: &AnalyzeOptions) -> (Value, Outcome) {
    match parse_branch_dsl(text) {
        Ok(spec) => analyze(&spec, opts),
        Err(e) => (error_json("parse", &e), Outcome::Usage),
    }
}

fn ms(t: Instant) -> Value {
    json!(format!("{:.3}", t.elapsed().as_secs_f64() * 1e3))
}

pub fn analyze(spec: &BranchSpec, opts: &AnalyzeOptions) -> (Value, Outcome) {
    let b: &PuiseuxBranch = &spec.branch;
    let t = &b.tower;
    let mut out = Map::new();
    let mut timing = Map::new();
    out.insert(
        "input".into(),
        json!({
            "source": spec.source,
            "canonical": spec.canonical(),
            "bindings": spec.bindings.iter()
                .map(|(k, v)| (k.clone(), t.to_json(v)))
                .collect::<Map<_, _>>(),
            "tower": t.describe(),
        }),
    );
    out.insert(
        "options".into(),
        json!({
            "directions": opts.directions,
            "truncation": opts.truncation,
            "seed": opts.seed,
            "rng": RNG_NAME,
        }),
    );
    let fail = |mut out: Map<String, Value>, stage: &str, e: Error| {
        if let Value::Object(err) = error_json(stage, &e) {
            out.extend(err);
        }
        (Value::Object(out), Outcome::Failed)
    };

    let clock = Instant::now();
    let gamma = match semigroup_of_branch(b) {
        Ok(g) => g,
        Err(e) => return fail(out, "semigroup", e),
    };
    out.insert(
        "semigroup".into(),
        json!({
            "generators": gamma.generators(),
            "conductor": gamma.conductor(),
            "genus": gamma.genus(),
        }),
    );
    timing.insert("semigroup_ms".into(), ms(clock));

    let clock = Instant::now();
    let dv = match differential_values_to(b, opts.truncation.unwrap_or(0)) {
        Ok(d) => d,
        Err(e) => return fail(out, "differentials", e),
    };
    out.insert("lambda_minus_gamma".into(), json!(dv.extra));
    out.insert("zariski_lambda".into(), json!(dv.lambda));
    timing.insert("differentials_ms".into(), ms(clock));

    let clock = Instant::now();
    let rep = match &opts.explicit_directions {
        Some(d) => polar_type_at(b, d.clone(), None, opts.parallelism),
        None => generic_polar_type(b, opts.directions, opts.seed, opts.parallelism),
    };
    let rep = match rep {
        Ok(r) => r,
        Err(e) => return fail(out, "polar", e),
    };
    timing.insert("polar_ms".into(), ms(clock));
    out.insert("implicit_equation".into(), json!(rep.curve.display(t)));
    out.insert("milnor".into(), json!(rep.milnor));
    out.insert("polar".into(), rep.to_json());

    let teissier_ok = rep.teissier.as_ref().is_none_or(|c| c.holds());
    let milnor_ok = rep.milnor == gamma.conductor();
    out.insert(
        "checks".into(),
        json!({
            "milnor_equals_conductor": milnor_ok,
            "teissier": teissier_ok,
        }),
    );
    if opts.timing {
        out.insert("timing".into(), Value::Object(timing));
    }
    let outcome = if teissier_ok && milnor_ok { Outcome::Ok } else { Outcome::Failed };
    (Value::Object(out), outcome)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quiet() -> AnalyzeOptions {
        AnalyzeOptions {
            directions: 3,
            parallelism: Parallelism::Sequential,
            ..AnalyzeOptions::default()
        }
    }

    #[test]
    fn row_one_report() {
        let (v, o) = analyze_text("x=t^5; y=t^12", &quiet());
        assert_eq!(o, Outcome::Ok);
        assert_eq!(v["lambda_minus_gamma"], json!([]));
        assert_eq!(v["polar"]["type"]["summary"], json!("<4,11>"));
        assert_eq!(v["milnor"], json!(44));
    }

    #[test]
    fn row_five_lambda() {
        let (v, o) = analyze_text("x=t^5; y=t^12+t^26+c t^28 where c=1", &quiet());
        assert_eq!(o, Outcome::Ok);
        assert_eq!(v["lambda_minus_gamma"], json!([31, 38, 43]));
        assert_eq!(v["zariski_lambda"], json!(26));
    }

    #[test]
    fn malformed_input() {
        let (v, o) = analyze_text("x=t^5; y=", &quiet());
        assert_eq!(o.exit_code(), 2);
        assert_eq!(v["error"]["stage"], json!("parse"));
        assert!(v["error"]["column"].is_number());
    }

    #[test]
    fn byte_stable() {
        let a = serde_json::to_string(&analyze_text("x=t^4; y=t^6+t^7", &quiet()).0).unwrap();
        let b = serde_json::to_string(&analyze_text("x=t^4; y=t^6+t^7", &quiet()).0).unwrap();
        assert_eq!(a, b);
        assert!(!a.contains("timing"));
    }
}
