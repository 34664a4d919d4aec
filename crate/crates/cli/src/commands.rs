use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use semigraphoid::format::{
    format_listing, format_measure, parse_measure, parse_model, parse_triplet_names, TripletNames,
};
use semigraphoid::rules::{closure_antichain_with, closure_fixpoint_with, derives_with};
use semigraphoid::sweep::{self, MeasureFamily};
use semigraphoid::{
    ci_model, closure_two_dominants, dominates, enumerate_triplets, maximal_elements,
    refute_implication, ClosureConfig, DependencyModel, Error, Triplet, Universe,
};

use crate::cli::{Cli, Command, Mode, Suite};
use crate::report::RunReport;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_VIOLATION: i32 = 4;

pub const DEFAULT_REFUTE_TRIALS: usize = 500;

#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            stdout,
            code: EXIT_OK,
        }
    }

    fn with_code(stdout: String, code: i32) -> Self {
        Outcome { stdout, code }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub message: String,
    pub code: i32,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            code: EXIT_INPUT,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError {
            code: if e.is_resource_limit() {
                EXIT_RESOURCE
            } else {
                EXIT_INPUT
            },
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<Outcome, CliError>;

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn with_path(path: &Path, e: Error) -> CliError {
    let mut err = CliError::from(e);
    err.message = format!("{}: {}", path.display(), err.message);
    err
}

/// Loads a `.cim` file. Without a `vars:` header the universe is extended
/// by the names in `extra`, so a target may mention fresh variables.
fn load_model(path: &Path, extra: &[&TripletNames]) -> Result<Option<DependencyModel>, CliError> {
    let parsed = parse_model(&read(path)?).map_err(|e| with_path(path, e))?;
    let extra_names: Vec<&str> = extra.iter().flat_map(|n| n.all()).collect();
    let universe = match (&parsed.universe, parsed.declared) {
        (Some(u), true) => u.clone(),
        (Some(u), false) => u.extended(extra_names.iter().copied())?,
        (None, _) if extra_names.is_empty() => return Ok(None),
        (None, _) => Universe::new(dedup(extra_names))?,
    };
    Ok(Some(DependencyModel::from_triplets(
        universe,
        parsed.triplets,
    )?))
}

fn dedup(names: Vec<&str>) -> Vec<&str> {
    let mut out: Vec<&str> = Vec::new();
    for n in names {
        if !out.contains(&n) {
            out.push(n);
        }
    }
    out
}

fn names_of(text: &str) -> Result<TripletNames, CliError> {
    parse_triplet_names(text).map_err(|m| CliError::input(format!("triplet {text:?}: {m}")))
}

fn resolve(names: &TripletNames, universe: &Universe, text: &str) -> Result<Triplet, CliError> {
    names
        .resolve(universe)
        .map_err(|m| CliError::input(format!("triplet {text:?}: {m}")))
}

pub fn run(cli: &Cli) -> CmdResult {
    let config = ClosureConfig {
        max_steps: cli.max_steps,
    };
    match &cli.command {
        Command::Closure {
            model,
            mode,
            dominants_only,
        } => closure(model, *mode, *dominants_only, &config),
        Command::Derive {
            model,
            target,
            trace,
        } => derive(model, target, *trace, &config),
        Command::Implies {
            triplets,
            vars,
            refute,
        } => implies(triplets, vars.as_deref(), *refute, cli),
        Command::CiModel { measure } => ci_model_cmd(measure),
        Command::Refute { model, target } => refute(model, target, cli),
        Command::Verify { suite, n } => verify(*suite, *n, cli),
        Command::Enumerate { n, vars } => enumerate(*n, vars.as_deref()),
    }
}

fn closure(path: &Path, mode: Mode, dominants_only: bool, config: &ClosureConfig) -> CmdResult {
    let Some(model) = load_model(path, &[])? else {
        return Ok(Outcome::ok(String::new()));
    };
    let u = model.universe();
    let listing = match mode {
        Mode::Antichain => {
            let chain = closure_antichain_with(&model, config)?;
            format_listing(u, &chain)
        }
        Mode::Fixpoint => {
            let closed = closure_fixpoint_with(&model, config)?;
            if dominants_only {
                format_listing(u, &maximal_elements(&closed))
            } else {
                format_listing(u, &closed)
            }
        }
    };
    Ok(Outcome::ok(listing))
}

fn derive(path: &Path, target: &str, show_trace: bool, config: &ClosureConfig) -> CmdResult {
    let names = names_of(target)?;
    let model = load_model(path, &[&names])?.expect("target supplies a universe");
    let t = resolve(&names, model.universe(), target)?;
    let d = derives_with(&model, &t, config)?;
    let u = model.universe();
    let mut out = String::new();
    if d.derivable {
        let _ = writeln!(out, "derivable: {}", t.display(u));
        if show_trace {
            if let Some(trace) = &d.trace {
                let _ = write!(out, "{}", trace.display(u));
            }
        }
        Ok(Outcome::ok(out))
    } else {
        let _ = writeln!(out, "not derivable: {}", t.display(u));
        Ok(Outcome::with_code(out, EXIT_NEGATIVE))
    }
}

fn implies(triplets: &[String], vars: Option<&str>, refute_flag: bool, cli: &Cli) -> CmdResult {
    let names: Vec<TripletNames> = triplets
        .iter()
        .map(|t| names_of(t))
        .collect::<Result<_, _>>()?;
    let universe = match vars {
        Some(v) => Universe::new(v.split(',').map(str::trim))?,
        None => Universe::new(dedup(names.iter().flat_map(|n| n.all()).collect()))?,
    };
    let parsed: Vec<Triplet> = names
        .iter()
        .zip(triplets)
        .map(|(n, text)| resolve(n, &universe, text))
        .collect::<Result<_, _>>()?;
    let (target, antecedents) = parsed.split_last().expect("at least one triplet");
    let implied = match antecedents {
        [] => false,
        [u] => dominates(u, target),
        [u, v] => closure_two_dominants(u, v).contains(target),
        _ => {
            if !refute_flag {
                return Err(CliError::input(
                    "more than two antecedents: implication is not decided in closed form; \
                     rerun with --refute to search for a counterexample measure",
                ));
            }
            let model =
                DependencyModel::from_triplets(universe.clone(), antecedents.iter().copied())?;
            return refute_search(&model, target, cli);
        }
    };
    let verdict = if implied { "implied" } else { "not implied" };
    let out = format!("{verdict}: {}\n", target.display(&universe));
    Ok(Outcome::with_code(
        out,
        if implied { EXIT_OK } else { EXIT_NEGATIVE },
    ))
}

fn ci_model_cmd(path: &Path) -> CmdResult {
    let p = parse_measure(&read(path)?).map_err(|e| with_path(path, e))?;
    let model = ci_model(&p)?;
    Ok(Outcome::ok(format_listing(model.universe(), &model)))
}

fn refute(path: &Path, target: &str, cli: &Cli) -> CmdResult {
    let names = names_of(target)?;
    let model = load_model(path, &[&names])?.expect("target supplies a universe");
    let t = resolve(&names, model.universe(), target)?;
    refute_search(&model, &t, cli)
}

fn refute_search(model: &DependencyModel, t: &Triplet, cli: &Cli) -> CmdResult {
    let trials = cli.trials.unwrap_or(DEFAULT_REFUTE_TRIALS);
    match refute_implication(model, t, trials, cli.seed)? {
        Some(w) => {
            let mut out = format!(
                "# counterexample from trial {}: antecedents hold, {} fails\n",
                w.trial,
                t.display(model.universe())
            );
            out.push_str(&format_measure(&w.measure));
            Ok(Outcome::ok(out))
        }
        None => Ok(Outcome::with_code(
            format!("no counterexample in {trials} trials (inconclusive)\n"),
            EXIT_NEGATIVE,
        )),
    }
}

fn verify(suite: Suite, n: Option<usize>, cli: &Cli) -> CmdResult {
    let mut params = BTreeMap::new();
    let family = |n: usize| MeasureFamily {
        min_n: 2.min(n),
        max_n: n,
        max_card: 3,
    };
    let seed = cli.seed;
    let outcome = match suite {
        Suite::Singleton => {
            let n = n.unwrap_or(5);
            params.insert("n".into(), n.to_string());
            sweep::singleton_suite(n)?
        }
        Suite::Couples => {
            let n = n.unwrap_or(4);
            params.insert("n".into(), n.to_string());
            let samples = match cli.trials {
                Some(k) => Some(k),
                None if n > 4 => Some(2000),
                None => None,
            };
            match samples {
                Some(k) => {
                    params.insert("samples".into(), k.to_string());
                    params.insert("seed".into(), seed.to_string());
                }
                None => {
                    params.insert("samples".into(), "exhaustive".into());
                }
            }
            sweep::couples_suite(n, samples, seed)?
        }
        Suite::Lemma3 => {
            let n = n.unwrap_or(4);
            params.insert("n".into(), n.to_string());
            sweep::lemma3_suite(n)?
        }
        Suite::Soundness | Suite::Lemma1 => {
            let n = n.unwrap_or(4);
            if n < 2 {
                return Err(CliError::input("measure sweeps need n >= 2"));
            }
            let default_trials = if suite == Suite::Soundness { 500 } else { 200 };
            let trials = cli.trials.unwrap_or(default_trials);
            params.insert("max_n".into(), n.to_string());
            params.insert("max_card".into(), "3".into());
            params.insert("trials".into(), trials.to_string());
            params.insert("seed".into(), seed.to_string());
            if suite == Suite::Soundness {
                sweep::soundness_suite(trials, seed, &family(n))?
            } else {
                sweep::lemma1_suite(trials, seed, &family(n))?
            }
        }
        Suite::Markov => {
            let n = n.unwrap_or(4);
            params.insert("n".into(), n.to_string());
            params.insert("seed".into(), seed.to_string());
            sweep::markov_suite(n, seed)?
        }
        Suite::Orbit => sweep::orbit_suite(),
    };
    let report = RunReport::from_sweep(params, outcome);
    let code = if report.failures == 0 {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    };
    Ok(Outcome::with_code(report.render(cli.format), code))
}

fn enumerate(n: Option<usize>, vars: Option<&str>) -> CmdResult {
    let universe = match (n, vars) {
        (_, Some(v)) => Universe::new(v.split(',').map(str::trim))?,
        (Some(n), None) => Universe::numbered(n)?,
        (None, None) => return Err(CliError::input("give --n or --vars")),
    };
    let all: Vec<Triplet> = enumerate_triplets(&universe)?.collect();
    let mut sorted = all;
    sorted.sort();
    Ok(Outcome::ok(format_listing(&universe, &sorted)))
}
