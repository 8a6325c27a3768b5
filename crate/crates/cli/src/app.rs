//! Command-line parsing and dispatch.
//!
//! Exit codes: 0 success, 1 conclusive refutation, 2 usage or parse error,
//! 3 unknown element, definition, policy or strategy, 4 I/O failure.

use std::ffi::OsString;
use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use pars_core::asymptotics::{classify, explore_limits, greedy_trace, limit_bound, meantime_bound};
use pars_core::checkers::{
    check_local_rd, check_locally_better, check_pointed_diamond, check_rd_global, check_skew_confluence, CheckVerdict,
    Observation,
};
use pars_core::engine::{run, Atom, ParsSystem, Policy, Restrict, RewriteTrace, MD};
use pars_core::lambda::{LambdaSystem, Nameless, Strategy, Term};
use pars_core::{MultiDistribution, Rewrite, SubDistribution};

use crate::lam::{parse_lam, parse_term, print_lam, print_term, LamFile};
use crate::report::{classification_report, jsonl, limit_line, meantime_report, trace_records, verdict_report};
use crate::rules::{parse_rules, print_rules};
use crate::ParseError;

pub const EXIT_REFUTED: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_UNKNOWN: u8 = 3;
pub const EXIT_IO: u8 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{origin}:{error}")]
    Parse { origin: String, error: ParseError },
    #[error("{0}")]
    Usage(String),
    #[error("unknown {0}")]
    Unknown(String),
    #[error("{path}: {error}")]
    Io { path: String, error: std::io::Error },
    #[error(transparent)]
    Core(#[from] pars_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse { .. } | CliError::Usage(_) | CliError::Core(_) => EXIT_PARSE,
            CliError::Unknown(_) => EXIT_UNKNOWN,
            CliError::Io { .. } => EXIT_IO,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "pars", version, about = "Probabilistic abstract rewriting: traces, limits, termination and checkers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Source {
    /// Rule file (`.pars`) or term definitions (`.lam`).
    file: Option<PathBuf>,
    /// Start element of a rule file, or a definition of a term file (default `main`).
    #[arg(long)]
    from: Option<String>,
    /// Start term; may use the definitions of a given `.lam` file.
    #[arg(long)]
    term: Option<String>,
    /// Redexes a term exposes as rules: full, leftmost, rightmost or random(<seed>).
    #[arg(long, default_value = "full")]
    strategy: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rewrite under a policy and emit one JSON record per step.
    Run {
        #[command(flatten)]
        source: Source,
        /// all-r<k>, always-r<k>, lex(<bits>), seed(<n>), <n> or greedy-nnorm.
        #[arg(long, default_value = "all-r0")]
        policy: String,
        #[arg(long, default_value_t = 10)]
        depth: usize,
        /// Write the records here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Add rounded values with this many digits (display only).
        #[arg(long)]
        decimal: Option<usize>,
    },
    /// Lower bounds on limit distributions.
    Limit {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value = "all-r0")]
        policy: String,
        /// Bound every state reachable at the depth instead of one policy.
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = 10)]
        depth: usize,
        #[arg(long, default_value_t = 100_000)]
        cap: usize,
    },
    /// Run a bounded checker.
    Check {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum)]
        property: Property,
        #[arg(long, value_enum, default_value = "nf")]
        obs: Obs,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, default_value_t = 100_000)]
        cap: usize,
        /// The candidate better relation: full, always-r<k>, or a term strategy.
        #[arg(long)]
        strategy_a: Option<String>,
        /// The relation it is compared against.
        #[arg(long)]
        strategy_b: Option<String>,
    },
    /// Partial sums of the expected number of steps.
    Meantime {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value = "all-r0")]
        policy: String,
        #[arg(long, default_value_t = 10)]
        depth: usize,
        #[arg(long, default_value_t = 100_000)]
        cap: usize,
        #[arg(long)]
        decimal: Option<usize>,
    },
    /// Bounded evidence on unique limits and termination.
    Classify {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, default_value_t = 100_000)]
        cap: usize,
    },
    /// Print the input in canonical form.
    Print {
        #[command(flatten)]
        source: Source,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Property {
    Diamond,
    LocalRd,
    GlobalRd,
    SkewConfluence,
    LocallyBetter,
}

impl Property {
    fn name(self) -> &'static str {
        match self {
            Property::Diamond => "diamond",
            Property::LocalRd => "local-rd",
            Property::GlobalRd => "global-rd",
            Property::SkewConfluence => "skew-confluence",
            Property::LocallyBetter => "locally-better",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Obs {
    Nf,
    Nnorm,
}

impl From<Obs> for Observation {
    fn from(o: Obs) -> Self {
        match o {
            Obs::Nf => Observation::Nf,
            Obs::Nnorm => Observation::NNorm,
        }
    }
}

/// Parses `args` (program name first), writes the report to `out` and
/// diagnostics to `err`, and returns the exit code.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(Done { text, code }) => match out.write_all(text.as_bytes()) {
            Ok(()) => code,
            Err(_) => EXIT_IO,
        },
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

struct Done {
    text: String,
    code: u8,
}

impl Done {
    fn ok(text: String) -> Self {
        Done { text, code: 0 }
    }
}

enum Input {
    Rules { sys: ParsSystem, start: Option<Atom> },
    Lambda { file: Option<LamFile>, start: Option<Term>, strategy: Strategy },
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|error| CliError::Io { path: path.display().to_string(), error })
}

fn parse_err(origin: &str) -> impl Fn(ParseError) -> CliError + '_ {
    move |error| CliError::Parse { origin: origin.into(), error }
}

fn strategy(name: &str) -> Result<Strategy, CliError> {
    Strategy::parse(name).ok_or_else(|| CliError::Unknown(format!("strategy `{name}`")))
}

fn load(source: &Source) -> Result<Input, CliError> {
    let is_lam = source.file.as_ref().is_some_and(|p| p.extension().is_some_and(|e| e == "lam"));
    match &source.file {
        Some(path) if !is_lam => {
            let origin = path.display().to_string();
            let stem = path.file_stem().map_or("system".into(), |s| s.to_string_lossy().into_owned());
            let sys = parse_rules(&read(path)?, &stem).map_err(parse_err(&origin))?;
            if source.term.is_some() {
                return Err(CliError::Usage("--term needs a `.lam` file or no file".into()));
            }
            let start = match &source.from {
                None => None,
                Some(name) => {
                    let atom = Atom::parse(name);
                    let generated = sys.generator().is_some() && matches!(atom, Atom::Nat(_));
                    if !generated && !sys.elements().contains(&atom) {
                        return Err(CliError::Unknown(format!("element `{name}`")));
                    }
                    Some(atom)
                }
            };
            Ok(Input::Rules { sys, start })
        }
        file => {
            let strategy = strategy(&source.strategy)?;
            let lam = match file {
                Some(path) => {
                    let origin = path.display().to_string();
                    Some(parse_lam(&read(path)?).map_err(parse_err(&origin))?)
                }
                None => None,
            };
            let start = match (&source.term, &lam) {
                (Some(text), _) => {
                    let t = parse_term(text).map_err(parse_err("--term"))?;
                    Some(lam.as_ref().map_or(t.clone(), |f| f.expand(&t)))
                }
                (None, Some(f)) => {
                    let name = source.from.as_deref().unwrap_or("main");
                    match f.get(name) {
                        Some(t) => Some(t.clone()),
                        None if source.from.is_some() => return Err(CliError::Unknown(format!("definition `{name}`"))),
                        None => None,
                    }
                }
                (None, None) => return Err(CliError::Usage("give a file or --term".into())),
            };
            Ok(Input::Lambda { file: lam, start, strategy })
        }
    }
}

fn need<T>(start: Option<T>, what: &str) -> Result<T, CliError> {
    start.ok_or_else(|| CliError::Usage(format!("this command needs {what}")))
}

enum PolicyChoice {
    Resolver(Policy),
    Greedy,
}

fn policy(name: &str) -> Result<PolicyChoice, CliError> {
    if name == "greedy-nnorm" {
        return Ok(PolicyChoice::Greedy);
    }
    Policy::parse(name).map(PolicyChoice::Resolver).ok_or_else(|| CliError::Unknown(format!("policy `{name}`")))
}

fn trace<R: Rewrite>(
    sys: &R,
    m0: MD<R>,
    policy: &PolicyChoice,
    depth: usize,
    cap: usize,
) -> Result<RewriteTrace<R::Elem>, CliError> {
    Ok(match policy {
        PolicyChoice::Resolver(p) => run(sys, m0, p, depth)?,
        PolicyChoice::Greedy => greedy_trace(sys, m0, depth, cap),
    })
}

/// Calls `$body` with `$sys` bound to the system and `$m0` to the unit start.
macro_rules! with_system {
    ($input:expr, |$sys:ident, $m0:ident| $body:expr) => {
        match $input {
            Input::Rules { sys, start } => {
                let $m0 = MultiDistribution::unit(need(start, "--from <element>")?);
                let $sys = &sys;
                $body
            }
            Input::Lambda { start, strategy, .. } => {
                let $m0 = MultiDistribution::unit(Nameless::from_term(&need(start, "--term or a `main` definition")?));
                let $sys = &LambdaSystem::new(strategy);
                $body
            }
        }
    };
}

fn dispatch(command: Command) -> Result<Done, CliError> {
    match command {
        Command::Run { source, policy: p, depth, out, decimal } => {
            let p = policy(&p)?;
            let input = load(&source)?;
            let text = with_system!(input, |sys, m0| jsonl(&trace_records(&trace(sys, m0, &p, depth, 100_000)?, decimal)));
            match out {
                Some(path) => {
                    std::fs::write(&path, text).map_err(|error| CliError::Io { path: path.display().to_string(), error })?;
                    Ok(Done::ok(String::new()))
                }
                None => Ok(Done::ok(text)),
            }
        }
        Command::Limit { source, policy: p, all, depth, cap } => {
            let p = policy(&p)?;
            let input = load(&source)?;
            with_system!(input, |sys, m0| limit(sys, m0, &p, all, depth, cap))
        }
        Command::Check { source, property, obs, depth, cap, strategy_a, strategy_b } => {
            let input = load(&source)?;
            check(input, property, obs.into(), depth, cap, strategy_a, strategy_b)
        }
        Command::Meantime { source, policy: p, depth, cap, decimal } => {
            let p = policy(&p)?;
            let input = load(&source)?;
            with_system!(input, |sys, m0| {
                let tr = trace(sys, m0, &p, depth, cap)?;
                let m = meantime_bound(&tr)?;
                Ok(Done::ok(meantime_report(&m, &tr.resolver, decimal)))
            })
        }
        Command::Classify { source, depth, cap } => {
            let input = load(&source)?;
            with_system!(input, |sys, m0| Ok(Done::ok(classification_report(&classify(sys, m0, depth, cap)))))
        }
        Command::Print { source } => {
            let text = match load(&source)? {
                Input::Rules { sys, .. } => print_rules(&sys),
                Input::Lambda { start: Some(t), .. } if source.term.is_some() => format!("{}\n", print_term(&t)),
                Input::Lambda { file: Some(f), .. } => print_lam(&f),
                Input::Lambda { .. } => String::new(),
            };
            Ok(Done::ok(text))
        }
    }
}

fn limit<R>(sys: &R, m0: MD<R>, p: &PolicyChoice, all: bool, depth: usize, cap: usize) -> Result<Done, CliError>
where
    R: Rewrite,
    R::Elem: Display,
{
    let mut text = String::new();
    if all {
        let ex = explore_limits(sys, m0, depth, cap);
        text.push_str(&format!("bounds {} depth={depth} initial-mass={}\n", ex.bounds.len(), ex.initial_mass));
        for b in &ex.bounds {
            text.push_str(&limit_line("bound", b));
            text.push('\n');
        }
        if ex.truncated {
            text.push_str("truncated: enumeration hit the cap, the list is partial\n");
        }
    } else {
        let tr = trace(sys, m0, p, depth, cap)?;
        text.push_str(&limit_line(&format!("bound policy={}", tr.resolver), &limit_bound(&tr)));
        text.push('\n');
    }
    Ok(Done::ok(text))
}

/// A relation and the sub-relation keeping one rule per element.
enum Relation<S> {
    Whole(S),
    Only(Restrict<S>),
}

impl<S: Rewrite> Rewrite for Relation<S> {
    type Elem = S::Elem;

    fn rules(&self, element: &S::Elem) -> Vec<SubDistribution<S::Elem>> {
        match self {
            Relation::Whole(s) => s.rules(element),
            Relation::Only(s) => s.rules(element),
        }
    }

    fn is_normal(&self, element: &S::Elem) -> bool {
        match self {
            Relation::Whole(s) => s.is_normal(element),
            Relation::Only(s) => s.is_normal(element),
        }
    }
}

fn restricted_rule(name: &str) -> Option<usize> {
    match Policy::parse(name) {
        Some(Policy::Uniform(k)) if name.starts_with("all-r") || name.starts_with("always-r") => Some(k),
        _ => None,
    }
}

fn verdict_done<E: Ord + Clone + Display>(property: Property, obs: Observation, v: &CheckVerdict<E>) -> Done {
    let code = if v.is_refuted() && v.conclusive { EXIT_REFUTED } else { 0 };
    Done { text: verdict_report(property.name(), obs, v), code }
}

fn check(
    input: Input,
    property: Property,
    obs: Observation,
    depth: usize,
    cap: usize,
    strategy_a: Option<String>,
    strategy_b: Option<String>,
) -> Result<Done, CliError> {
    if property == Property::LocallyBetter {
        let a = need(strategy_a, "--strategy-a")?;
        let b = need(strategy_b, "--strategy-b")?;
        return match input {
            Input::Rules { sys, start } => {
                let pick = |name: &str| -> Result<Relation<&ParsSystem>, CliError> {
                    match restricted_rule(name) {
                        Some(k) => Ok(Relation::Only(Restrict::new(&sys, k))),
                        None if name == "full" => Ok(Relation::Whole(&sys)),
                        None => Err(CliError::Unknown(format!("strategy `{name}`"))),
                    }
                };
                let elements = start.map_or_else(|| sys.elements(), |s| vec![s]);
                let v = check_locally_better(&pick(&a)?, &pick(&b)?, &elements, obs, depth, cap);
                Ok(verdict_done(property, obs, &v))
            }
            Input::Lambda { start, .. } => {
                let pick = |name: &str| -> Result<Relation<LambdaSystem>, CliError> {
                    match restricted_rule(name) {
                        Some(k) => Ok(Relation::Only(Restrict::new(LambdaSystem::new(Strategy::Full), k))),
                        None => Ok(Relation::Whole(LambdaSystem::new(strategy(name)?))),
                    }
                };
                let elements = vec![Nameless::from_term(&need(start, "--term or a `main` definition")?)];
                let v = check_locally_better(&pick(&a)?, &pick(&b)?, &elements, obs, depth, cap);
                Ok(verdict_done(property, obs, &v))
            }
        };
    }
    match input {
        Input::Rules { sys, start } => {
            let elements = start.map_or_else(|| sys.elements(), |s| vec![s]);
            if elements.is_empty() {
                return Err(CliError::Usage("no elements to check; give --from".into()));
            }
            Ok(verdict_done(property, obs, &check_one(&sys, &elements, property, obs, depth, cap)))
        }
        Input::Lambda { start, strategy, .. } => {
            let sys = LambdaSystem::new(strategy);
            let elements = vec![Nameless::from_term(&need(start, "--term or a `main` definition")?)];
            Ok(verdict_done(property, obs, &check_one(&sys, &elements, property, obs, depth, cap)))
        }
    }
}

fn check_one<R: Rewrite>(
    sys: &R,
    elements: &[R::Elem],
    property: Property,
    obs: Observation,
    depth: usize,
    cap: usize,
) -> CheckVerdict<R::Elem> {
    match property {
        Property::Diamond => check_pointed_diamond(sys, elements, obs, cap),
        Property::LocalRd => check_local_rd(sys, elements, obs, depth, cap),
        Property::GlobalRd | Property::SkewConfluence => {
            let mut last = None;
            for e in elements {
                let m0 = MultiDistribution::unit(e.clone());
                let v = if property == Property::GlobalRd {
                    check_rd_global(sys, &m0, obs, depth, cap)
                } else {
                    check_skew_confluence(sys, &m0, obs, depth, cap)
                };
                if v.is_refuted() {
                    return v;
                }
                let truncated = v.truncated || last.as_ref().is_some_and(|l: &CheckVerdict<R::Elem>| l.truncated);
                last = Some(CheckVerdict { truncated, ..v });
            }
            last.expect("elements are non-empty")
        }
        Property::LocallyBetter => unreachable!("handled by the caller"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str]) -> (u8, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["pars"];
        full.extend_from_slice(args);
        let code = run_cli(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn term_run() {
        let (code, out, _) = cli(&["run", "--term", "(\\x.x) (\\z.z)", "--depth", "1"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[1].contains(r#""state":"[1 \\x. x]""#), "{out}");
        assert!(lines[1].contains(r#""nnorm":"1""#));
    }

    #[test]
    fn usage_errors() {
        assert_eq!(cli(&["run"]).0, EXIT_PARSE);
        assert_eq!(cli(&["frobnicate"]).0, EXIT_PARSE);
        assert_eq!(cli(&["run", "--term", "(x"]).0, EXIT_PARSE);
        assert_eq!(cli(&["run", "--term", "x", "--policy", "sometimes"]).0, EXIT_UNKNOWN);
        assert_eq!(cli(&["run", "--term", "x", "--strategy", "outermost"]).0, EXIT_UNKNOWN);
        assert_eq!(cli(&["run", "/nonexistent/file.pars", "--from", "a"]).0, EXIT_IO);
        assert_eq!(cli(&["--help"]).0, 0);
    }
}
