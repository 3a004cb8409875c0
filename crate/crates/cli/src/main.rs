use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use polar_core::algebra::{parse_rational, Alg};
use polar_core::dsl::{parse_bindings, print_branch};
use polar_core::error::Error;
use polar_core::families::Family;
use polar_core::generic::{stratum_sweep, Direction, Parallelism, WORKERS_ENV};
use polar_core::report::{analyze_text, error_json, AnalyzeOptions, Outcome};
use serde_json::{json, Value};

/// Invariants of plane branches and the equisingularity type of their
/// general polar curves.
#[derive(Parser)]
#[command(name = "polar", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads for parallel maps (1 = sequential).
    #[arg(long, global = true, env = WORKERS_ENV)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a branch given as DSL text or a file containing it.
    Analyze(AnalyzeArgs),
    /// Instantiate a normal-form family.
    Family(FamilyArgs),
    /// Sample a family and group its members by general polar type.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// `x=t^5; y=t^12+t^21`, or a path to a file holding such a spec.
    spec: String,
    /// Number of random polar directions.
    #[arg(long, default_value_t = 5)]
    directions: usize,
    /// Working truncation for differential values (raised to c + n if lower).
    #[arg(long)]
    truncation: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Use this direction `a:b` instead of sampling; repeatable.
    #[arg(long = "direction", value_name = "A:B", allow_hyphen_values = true)]
    direction: Vec<String>,
    /// Include wall-clock timings (the report is then no longer byte-stable).
    #[arg(long)]
    timing: bool,
    /// Write the report here instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct FamilyArgs {
    /// `gamma-5-12/<row>`, `mult3/<β>[/<k>]`, `mult4-g1/<form>/<m>/<j>[/<k>]`, `mult4-g2/<v1>/<v2>`.
    name: String,
    /// Bindings such as `c=7, s=root(z^2-6), a1=4*s/9`; structural indices
    /// (`beta`, `k`, `m`, `j`, ...) may be given here too.
    #[arg(long, default_value = "")]
    params: String,
    #[arg(long, default_value_t = 1)]
    count: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Inject the known wall values on the trials that carry them.
    #[arg(long)]
    walls: bool,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    name: String,
    #[arg(long)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Polar directions per trial.
    #[arg(long, default_value_t = 3)]
    directions: usize,
    /// Do not inject wall values.
    #[arg(long)]
    no_walls: bool,
    #[arg(long)]
    json: Option<PathBuf>,
}

fn emit(v: &Value, path: Option<&Path>) -> Result<(), String> {
    let text = serde_json::to_string_pretty(v).map_err(|e| e.to_string())? + "\n";
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn finish(v: Value, outcome: Outcome, path: Option<&Path>) -> ExitCode {
    if let Err(e) = emit(&v, path) {
        eprintln!("polar: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(outcome.exit_code() as u8)
}

fn parse_direction(s: &str) -> Result<Direction, Error> {
    let bad = || Error::InvalidInput(format!("direction `{s}` is not of the form a:b"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    Ok(Direction::new(parse_rational(a).ok_or_else(bad)?, parse_rational(b).ok_or_else(bad)?))
}

fn analyze(args: AnalyzeArgs, par: Parallelism) -> ExitCode {
    let text = if Path::new(&args.spec).is_file() {
        match std::fs::read_to_string(&args.spec) {
            Ok(t) => t,
            Err(e) => {
                let v = error_json("input", &Error::InvalidInput(format!("{}: {e}", args.spec)));
                return finish(v, Outcome::Usage, args.json.as_deref());
            }
        }
    } else {
        args.spec.clone()
    };
    let explicit = if args.direction.is_empty() {
        None
    } else {
        match args.direction.iter().map(|d| parse_direction(d)).collect::<Result<Vec<_>, _>>() {
            Ok(d) => Some(d),
            Err(e) => return finish(error_json("options", &e), Outcome::Usage, args.json.as_deref()),
        }
    };
    let opts = AnalyzeOptions {
        directions: args.directions,
        truncation: args.truncation,
        seed: args.seed,
        explicit_directions: explicit,
        timing: args.timing,
        parallelism: par,
    };
    let (v, outcome) = analyze_text(text.trim(), &opts);
    finish(v, outcome, args.json.as_deref())
}

fn family(args: FamilyArgs) -> ExitCode {
    let out = args.json.as_deref();
    let (tower, vals) = match parse_bindings(&args.params) {
        Ok(p) => p,
        Err(e) => return finish(error_json("params", &e), Outcome::Usage, out),
    };
    let given: BTreeMap<String, Alg> = vals.into_iter().collect();
    let fam = match Family::parse(&args.name, &given) {
        Ok(f) => f,
        Err(e) => return finish(error_json("family", &e), Outcome::Usage, out),
    };
    let mut instances = Vec::new();
    for trial in 0..args.count {
        let mut fixed = given.clone();
        if args.walls {
            fixed.extend(fam.wall_values(trial));
        }
        match fam.sample_with(&fixed, &tower, args.seed, trial) {
            Ok(inst) => instances.push(json!({
                "trial": trial,
                "params": inst.params.iter()
                    .map(|(k, v)| (k.clone(), inst.branch.tower.to_json(v)))
                    .collect::<serde_json::Map<_, _>>(),
                "spec": print_branch(&inst.branch),
            })),
            Err(e) => return finish(error_json("family", &e), Outcome::Usage, out),
        }
    }
    let v = json!({
        "family": fam.to_string(),
        "parameters": fam.parameters().unwrap_or_default(),
        "seed": args.seed,
        "instances": instances,
    });
    finish(v, Outcome::Ok, out)
}

fn sweep(args: SweepArgs, par: Parallelism) -> ExitCode {
    let out = args.json.as_deref();
    if args.trials == 0 {
        let e = Error::InvalidInput("--trials must be at least 1".into());
        return finish(error_json("options", &e), Outcome::Usage, out);
    }
    let fam = match Family::parse(&args.name, &BTreeMap::new()) {
        Ok(f) => f,
        Err(e) => return finish(error_json("family", &e), Outcome::Usage, out),
    };
    match stratum_sweep(&fam, args.trials, args.seed, args.directions, !args.no_walls, par) {
        Ok(r) => finish(r.to_json(), Outcome::Ok, out),
        Err(e) => finish(error_json("sweep", &e), Outcome::Failed, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let par = match cli.workers {
        Some(n) => Parallelism::workers(n),
        None => Parallelism::default(),
    };
    match cli.command {
        Command::Analyze(a) => analyze(a, par),
        Command::Family(f) => family(f),
        Command::Sweep(s) => sweep(s, par),
    }
}
