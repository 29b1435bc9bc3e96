//! `flagmodel`: exact cleanness derivations, verdicts, and verification for
//! monomial atlas models.
//!
//! Exit codes: 0 success, 1 parse/validation failure, 2 violated internal
//! precondition (for example an undersized oracle window), 3 semantic
//! negative (not clean, oracle disagreement, or a failing fixture).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use flagclean_core::builtin::{builtin_fixture_vars, builtin_fixtures, builtin_sl2};
use flagclean_core::cleanness::{criterion, evaluate_clean, CleanError};
use flagclean_core::lattice::{is_simple, oracle_grid, oracle_vs_criterion, OracleError};
use flagclean_core::loopgroup::{verify_fixtures, DEFAULT_PRECISION};
use flagclean_core::rat::{parse_rat, Rat};
use flagclean_core::symcore::Assignment;

use flagmodel_cli::diag::Diagnostic;
use flagmodel_cli::model_text::{parse_model, LoadedModel};
use flagmodel_cli::report;

#[derive(Parser)]
#[command(
    name = "flagmodel",
    version,
    about = "Exact cleanness criteria for rank-one twisted local systems on monomial atlases"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct ModelArg {
    /// Use the built-in four-chart SL2 affine-flag model.
    #[arg(long)]
    builtin: bool,
    /// Load a model file instead.
    #[arg(long, value_name = "PATH", conflicts_with = "builtin")]
    model: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct JsonArg {
    /// Emit the machine-readable mirror of the report.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Derive the cleanness criterion: the deduplicated normalized forms.
    Derive {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        json: JsonArg,
    },
    /// Evaluate the criterion at an exact rational assignment.
    Check {
        #[command(flatten)]
        model: ModelArg,
        /// Parameter values, e.g. --set mu_-1=1/2 mu_0=1/3
        #[arg(long = "set", value_name = "NAME=RAT", num_args = 1..)]
        set: Vec<String>,
        #[command(flatten)]
        json: JsonArg,
    },
    /// Print the declared total transitions in source-chart coordinates.
    Transitions {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        json: JsonArg,
    },
    /// Derive the log-form line-bundle cocycle and compare it with the
    /// declared twists.
    Linebundle {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        json: JsonArg,
    },
    /// Lattice-oracle subcommands.
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Run every consistency check: cocycles, line bundle, and fixtures.
    Verify {
        #[command(flatten)]
        model: ModelArg,
        /// Load loop-group fixtures from a separate file.
        #[arg(long, value_name = "PATH")]
        fixtures: Option<PathBuf>,
        /// Working precision in powers of t.
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision: i64,
        #[command(flatten)]
        json: JsonArg,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Decide simplicity of a weight-lattice module by reachability.
    Simple {
        /// Comma-separated exponents, e.g. --mu 1/2,1/3
        #[arg(long, value_name = "LIST")]
        mu: String,
        #[arg(long, default_value_t = 16)]
        window: i64,
        #[command(flatten)]
        json: JsonArg,
    },
    /// Compare the per-chart oracle with the criterion at one assignment.
    Clean {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long = "set", value_name = "NAME=RAT", num_args = 1..)]
        set: Vec<String>,
        #[arg(long, default_value_t = 16)]
        window: i64,
        #[command(flatten)]
        json: JsonArg,
    },
    /// Exhaustive rational grid, deterministically sampled, with an
    /// agreement report.
    Grid {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long, default_value_t = 4)]
        denominator_bound: u32,
        #[arg(long, default_value_t = 3)]
        range: i64,
        #[arg(long, default_value_t = 16)]
        window: i64,
        /// Deterministic stride target for the number of sampled cases.
        #[arg(long, default_value_t = 5000)]
        max_cases: usize,
        #[command(flatten)]
        json: JsonArg,
    },
}

enum CliError {
    /// Parse or validation failure (exit 1).
    Input(Vec<Diagnostic>),
    /// Bad command-line data (exit 1).
    Invalid(String),
    /// Violated internal precondition (exit 2).
    Precondition(String),
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::WindowTooSmall { .. }
            | OracleError::WindowTooLarge { .. }
            | OracleError::StartOutsideWindow => CliError::Precondition(e.to_string()),
            OracleError::Clean(inner) => CliError::from(inner),
        }
    }
}

impl From<CleanError> for CliError {
    fn from(e: CleanError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Input(diags)) => {
            for d in diags {
                eprintln!("error: {d}");
            }
            ExitCode::from(1)
        }
        Err(CliError::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Precondition(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load(arg: &ModelArg) -> Result<(String, LoadedModel), CliError> {
    match (&arg.model, arg.builtin) {
        (Some(path), false) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))?;
            let loaded = parse_model(&text).map_err(CliError::Input)?;
            Ok((path.display().to_string(), loaded))
        }
        (None, _) if arg.builtin => Ok((
            "builtin".to_string(),
            LoadedModel {
                model: builtin_sl2(),
                fixture_vars: builtin_fixture_vars(),
                fixtures: builtin_fixtures(),
            },
        )),
        _ => Err(CliError::Invalid(
            "pass either --builtin or --model PATH".to_string(),
        )),
    }
}

fn parse_assignment(
    model: &flagclean_core::atlas::AtlasModel,
    set: &[String],
) -> Result<Assignment, CliError> {
    let mut pairs: Vec<(&str, Rat)> = Vec::new();
    for item in set {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| CliError::Invalid(format!("expected NAME=RAT, got `{item}`")))?;
        let value = parse_rat(value).map_err(|e| CliError::Invalid(e.to_string()))?;
        pairs.push((name, value));
    }
    Assignment::from_names(model.params(), pairs).map_err(|e| CliError::Invalid(e.to_string()))
}

fn emit<T: Serialize>(report: &T, text: String, json: bool) {
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(report).expect("reports serialize")
        );
    } else {
        print!("{text}");
    }
}

fn run(cmd: Cmd) -> Result<u8, CliError> {
    match cmd {
        Cmd::Derive { model, json } => {
            let (name, loaded) = load(&model)?;
            let crit = criterion(&loaded.model).map_err(|e| CliError::Invalid(e.to_string()))?;
            let rep = report::derive_report(&name, &loaded.model, &crit);
            emit(&rep, rep.text(), json.json);
            Ok(0)
        }
        Cmd::Check { model, set, json } => {
            let (name, loaded) = load(&model)?;
            let assignment = parse_assignment(&loaded.model, &set)?;
            let crit = criterion(&loaded.model).map_err(|e| CliError::Invalid(e.to_string()))?;
            let verdict = evaluate_clean(&loaded.model, &assignment)?;
            let mut values = Vec::new();
            for form in crit.forms() {
                let v = form.evaluate(&assignment).map_err(|_| {
                    CliError::Invalid("assignment must cover all parameters".into())
                })?;
                values.push((form.render(loaded.model.params()), v));
            }
            let rep = report::check_report(&name, &loaded.model, &assignment, &verdict, &values);
            emit(&rep, rep.text(), json.json);
            Ok(if verdict.clean { 0 } else { 3 })
        }
        Cmd::Transitions { model, json } => {
            let (name, loaded) = load(&model)?;
            let rep = report::transitions_report(&name, &loaded.model);
            emit(&rep, rep.text(), json.json);
            Ok(0)
        }
        Cmd::Linebundle { model, json } => {
            let (name, loaded) = load(&model)?;
            let lb = loaded
                .model
                .check_line_bundle()
                .map_err(|e| CliError::Invalid(e.to_string()))?;
            let rep = report::line_bundle_report(&name, &lb);
            let ok = rep.passed;
            emit(&rep, rep.text(), json.json);
            Ok(if ok { 0 } else { 3 })
        }
        Cmd::Oracle(OracleCmd::Simple { mu, window, json }) => {
            let mu: Vec<Rat> = mu
                .split(',')
                .map(|s| parse_rat(s).map_err(|e| CliError::Invalid(e.to_string())))
                .collect::<Result<_, _>>()?;
            let simple = is_simple(&mu, window)?;
            let rep = report::OracleSimpleReport {
                mu: mu.iter().map(|m| m.to_string()).collect(),
                window,
                simple,
            };
            emit(&rep, rep.text(), json.json);
            Ok(if simple { 0 } else { 3 })
        }
        Cmd::Oracle(OracleCmd::Clean {
            model,
            set,
            window,
            json,
        }) => {
            let (name, loaded) = load(&model)?;
            let assignment = parse_assignment(&loaded.model, &set)?;
            let agreement = oracle_vs_criterion(&loaded.model, &assignment, window)?;
            let rep = report::oracle_clean_report(&name, &loaded.model, &assignment, &agreement);
            let ok = agreement.agree() && agreement.criterion_clean;
            emit(&rep, rep.text(), json.json);
            Ok(if ok { 0 } else { 3 })
        }
        Cmd::Oracle(OracleCmd::Grid {
            model,
            denominator_bound,
            range,
            window,
            max_cases,
            json,
        }) => {
            let (name, loaded) = load(&model)?;
            let values = flagclean_core::lattice::grid_values(denominator_bound, range);
            let outcome = oracle_grid(&loaded.model, &values, window, max_cases)?;
            let rep = report::oracle_grid_report(&name, denominator_bound, range, window, &outcome);
            let ok = outcome.all_agree();
            emit(&rep, rep.text(), json.json);
            Ok(if ok { 0 } else { 3 })
        }
        Cmd::Verify {
            model,
            fixtures,
            precision,
            json,
        } => {
            let (name, mut loaded) = load(&model)?;
            if let Some(path) = fixtures {
                let text = std::fs::read_to_string(&path).map_err(|e| {
                    CliError::Invalid(format!("cannot read {}: {e}", path.display()))
                })?;
                let extra = parse_fixture_file(&text)?;
                loaded.fixture_vars = extra.0;
                loaded.fixtures = extra.1;
            }
            let cocycles = loaded.model.verify_cocycles();
            let lb = loaded
                .model
                .check_line_bundle()
                .map_err(|e| CliError::Invalid(e.to_string()))?;
            let outcomes = verify_fixtures(&loaded.fixtures, loaded.fixture_vars.len(), precision)
                .map_err(|e| CliError::Invalid(e.to_string()))?;
            let rep = report::verify_report(
                &name,
                &cocycles,
                report::line_bundle_report(&name, &lb),
                &outcomes,
                &loaded.fixture_vars,
            );
            let ok = rep.passed;
            emit(&rep, rep.text(), json.json);
            Ok(if ok { 0 } else { 3 })
        }
    }
}

/// A fixtures-only file: `fixture_vars` plus `fixture` blocks, using the
/// same syntax as the model format.
fn parse_fixture_file(
    text: &str,
) -> Result<(Vec<String>, Vec<flagclean_core::loopgroup::LoopFixture>), CliError> {
    // reuse the model parser by appending a trivial model skeleton
    let mut full = String::from(
        "params _p\nreference 0\nchart 0\n  coords z\n  divisorial\n  logpole\nend\nlocal_system\n  base 0\nend\n",
    );
    full.push_str(text);
    let loaded = parse_model(&full).map_err(CliError::Input)?;
    Ok((loaded.fixture_vars, loaded.fixtures))
}
