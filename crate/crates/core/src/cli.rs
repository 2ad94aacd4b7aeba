//! Command-line front end. Every command reads an arena file and returns a
//! JSON payload together with an exit code:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success, every internal verification passed |
//! | 1 | a verification failed |
//! | 2 | input error (bad flags, malformed file) |
//! | 3 | an enumeration, degree or iteration budget was exceeded |

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::algebra::RationalFunction;
use crate::arena::{profile_count, Arena, Player, StrategyProfile};
use crate::blackwell::{
    blackwell_search_exact, blackwell_search_hybrid, derive_system, limit_check,
    parametrization_for_arena, BlackwellError, BlackwellResult, Budget, DiscountParametrization,
    HybridOptions, ParametrizationSource,
};
use crate::discounted::{
    eval_profile_discounted, eval_profile_exact, solve_discounted, star_transform, to_f64,
    DiscountMap, SolveError,
};
use crate::priority_mp::{eval_profile_pmp, solve_pmp_bruteforce, PmpError, DEFAULT_BUDGET};
use crate::sim::{estimate_discounted, estimate_pmp, Estimator, SimConfig};
use crate::Rational;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutcome {
    pub exit_code: i32,
    /// Machine-readable result, printed on stdout.
    pub payload: Value,
    /// Short human-readable summary for stderr (shown with `--pretty`).
    pub summary: String,
    pub pretty: bool,
}

#[derive(Parser, Debug)]
#[command(
    name = "pmpg",
    version,
    about = "Solvers for discounted, Blackwell and priority mean-payoff stochastic games"
)]
struct Cli {
    /// Pretty-print the JSON payload and write a human summary to stderr.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug, Clone)]
#[group(required = true, multiple = false)]
struct DiscountSource {
    /// Parameter value t; discounts are the arena's parametrization at t.
    #[arg(long)]
    t: Option<String>,
    /// Read constant per-state discounts from the `discount` fields.
    #[arg(long)]
    lambda_from_file: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check an arena file and report its size.
    Validate { file: PathBuf },
    /// Value iteration at fixed discounts.
    SolveDiscounted {
        file: PathBuf,
        #[command(flatten)]
        discounts: DiscountSource,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        #[arg(long, default_value_t = 1_000_000)]
        max_iter: usize,
    },
    /// Evaluate one strategy profile exactly.
    EvalProfile {
        file: PathBuf,
        /// JSON object (or path to one) mapping state ids to action labels.
        #[arg(long)]
        profile: String,
        #[arg(long, value_enum)]
        payoff: Payoff,
        /// Fix the parameter t (discounted payoff only); otherwise value
        /// functions of t are printed.
        #[arg(long)]
        t: Option<String>,
    },
    /// Exact priority mean-payoff values by enumeration.
    SolvePmp {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Blackwell-optimal profile of the arena's discount parametrization.
    Blackwell {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        #[arg(long, default_value_t = 4096)]
        degree_budget: usize,
        #[arg(long, default_value_t = 1)]
        k_start: u32,
        #[arg(long, default_value_t = 12)]
        k_end: u32,
    },
    /// Weights and priorities derived from the discount parametrization.
    DerivePriorities { file: PathBuf },
    /// Arena with discounting replaced by absorbing stop states.
    StarTransform {
        file: PathBuf,
        #[command(flatten)]
        discounts: DiscountSource,
    },
    /// Monte-Carlo estimate for one profile.
    Simulate {
        file: PathBuf,
        #[arg(long, value_enum)]
        estimator: EstimatorArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 10_000)]
        horizon: u64,
        #[arg(long)]
        profile: String,
        /// Initial state id.
        #[arg(long)]
        initial: String,
        /// Parameter t for the discounted estimator (otherwise the constant
        /// `discount` fields are used).
        #[arg(long)]
        t: Option<String>,
    },
    /// Check that discounted values tend to the priority mean-payoff values.
    LimitCheck {
        file: PathBuf,
        #[arg(long, default_value_t = 20)]
        kmax: u32,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Payoff {
    Discounted,
    Pmp,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    Exact,
    Hybrid,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum EstimatorArg {
    Discounted,
    Pmp,
}

/// A failure carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Failure {
            code: EXIT_INPUT,
            kind: "input",
            message: message.to_string(),
        }
    }

    fn budget(message: impl ToString) -> Self {
        Failure {
            code: EXIT_BUDGET,
            kind: "budget",
            message: message.to_string(),
        }
    }

    fn internal(message: impl ToString) -> Self {
        Failure {
            code: EXIT_VERIFICATION,
            kind: "verification",
            message: message.to_string(),
        }
    }
}

impl From<BlackwellError> for Failure {
    fn from(e: BlackwellError) -> Self {
        match &e {
            _ if e.is_budget() => Failure::budget(e),
            BlackwellError::Certificate | BlackwellError::Pmp(PmpError::NoSaddle) => {
                Failure::internal(e)
            }
            BlackwellError::Pmp(PmpError::Linear(_))
            | BlackwellError::Discounted(crate::discounted::DiscountedError::Singular(_)) => {
                Failure::internal(e)
            }
            _ => Failure::input(e),
        }
    }
}

impl From<PmpError> for Failure {
    fn from(e: PmpError) -> Self {
        Failure::from(BlackwellError::from(e))
    }
}

struct Output {
    code: i32,
    payload: Value,
    summary: String,
}

impl Output {
    fn ok(payload: Value, summary: String) -> Self {
        Output {
            code: EXIT_OK,
            payload,
            summary,
        }
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> CommandOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INPUT,
            };
            let text = e.render().to_string();
            return CommandOutcome {
                exit_code: code,
                payload: if code == EXIT_OK {
                    json!({ "help": text })
                } else {
                    error_payload("usage", &text)
                },
                summary: text,
                pretty: false,
            };
        }
    };
    let pretty = cli.pretty;
    match execute(cli.command) {
        Ok(out) => CommandOutcome {
            exit_code: out.code,
            payload: out.payload,
            summary: out.summary,
            pretty,
        },
        Err(f) => CommandOutcome {
            exit_code: f.code,
            payload: error_payload(f.kind, &f.message),
            summary: format!("error: {}", f.message),
            pretty,
        },
    }
}

fn error_payload(kind: &str, message: &str) -> Value {
    json!({ "error": { "kind": kind, "message": message.trim_end() } })
}

/// Formats a float with 12 significant digits.
pub fn format_number(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..=14).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let fixed = format!("{:.*}", decimals, x);
        trim_zeros(&fixed)
    } else {
        format!("{}e{}", trim_zeros(mantissa), exp)
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

fn load(path: &PathBuf) -> Result<Arena, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    Arena::from_json(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn parse_t(text: &str) -> Result<Rational, Failure> {
    crate::algebra::parse_constant(text).map_err(|e| Failure::input(format!("--t {text}: {e}")))
}

fn parse_profile(arena: &Arena, text: &str) -> Result<StrategyProfile, Failure> {
    let raw = if text.trim_start().starts_with('{') {
        text.to_string()
    } else {
        std::fs::read_to_string(text)
            .map_err(|e| Failure::input(format!("--profile {text}: {e}")))?
    };
    let value: Value =
        serde_json::from_str(&raw).map_err(|e| Failure::input(format!("--profile: {e}")))?;
    StrategyProfile::from_json(arena, &value).map_err(|e| Failure::input(format!("--profile: {e}")))
}

fn parametrization(
    arena: &Arena,
) -> Result<(DiscountParametrization, ParametrizationSource), Failure> {
    Ok(parametrization_for_arena(arena)?)
}

fn discounts(arena: &Arena, source: &DiscountSource) -> Result<(DiscountMap, Value), Failure> {
    if let Some(t) = &source.t {
        let t = parse_t(t)?;
        let (param, _) = parametrization(arena)?;
        let map = param.at(&t)?;
        Ok((map, json!({ "t": t.to_string() })))
    } else {
        constant_discounts(arena).map(|m| (m, json!("file")))
    }
}

fn constant_discounts(arena: &Arena) -> Result<DiscountMap, Failure> {
    let lambda = arena
        .discount_functions()
        .map_err(Failure::input)?
        .iter()
        .zip(arena.states())
        .map(|(f, st)| {
            f.as_constant().ok_or_else(|| {
                Failure::input(format!("state '{}': discount {f} is not a constant", st.id))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    DiscountMap::new(lambda).map_err(Failure::input)
}

fn state_map<T>(arena: &Arena, values: &[T], f: impl Fn(&T) -> Value) -> Value {
    Value::Object(
        arena
            .states()
            .iter()
            .zip(values)
            .map(|(s, v)| (s.id.clone(), f(v)))
            .collect(),
    )
}

fn exact(r: &Rational) -> Value {
    Value::String(r.to_string())
}

fn function(f: &RationalFunction) -> Value {
    Value::String(f.to_string())
}

fn number(x: &f64) -> Value {
    Value::String(format_number(*x))
}

fn labels_of(arena: &Arena, player: Player, strategy: &StrategyProfile) -> Value {
    Value::Object(
        strategy
            .player_choices(arena, player)
            .into_iter()
            .map(|(k, v)| (k, Value::String(v)))
            .collect(),
    )
}

fn count_value(c: Option<u128>) -> Value {
    match c {
        Some(c) if c <= u64::MAX as u128 => json!(c as u64),
        Some(c) => json!(c.to_string()),
        None => json!("overflow"),
    }
}

fn execute(command: Command) -> Result<Output, Failure> {
    match command {
        Command::Validate { file } => {
            let arena = load(&file)?;
            let ids = |p: Player| -> Vec<Value> {
                arena
                    .states_of(p)
                    .map(|s| json!(arena.state(s).id))
                    .collect()
            };
            let profiles = profile_count(&arena);
            let payload = json!({
                "valid": true,
                "states": arena.len(),
                "actions": arena.states().iter().map(|s| s.actions.len()).sum::<usize>(),
                "profiles": count_value(profiles),
                "max_states": ids(Player::Max),
                "min_states": ids(Player::Min),
                "has_priorities": arena.priority_system().is_ok(),
                "has_discounts": arena.has_discounts(),
            });
            let summary = format!(
                "valid arena: {} states, {} profiles",
                arena.len(),
                profiles.map_or("overflow".into(), |c| c.to_string())
            );
            Ok(Output::ok(payload, summary))
        }

        Command::SolveDiscounted {
            file,
            discounts: source,
            tolerance,
            max_iter,
        } => {
            let arena = load(&file)?;
            let (map, origin) = discounts(&arena, &source)?;
            let solved = match solve_discounted::<f64>(&arena, &map, tolerance, max_iter) {
                Ok(r) => r,
                Err(SolveError::NotConverged {
                    iterations, gap, ..
                }) => {
                    return Err(Failure::budget(format!(
                        "value iteration stopped after {iterations} iterations with gap {}",
                        format_number(gap)
                    )))
                }
                Err(SolveError::Input(e)) => return Err(Failure::input(e)),
            };
            let exact_values =
                eval_profile_exact(&arena, &map, &solved.profile).map_err(Failure::internal)?;
            let value_error = exact_values
                .iter()
                .zip(&solved.values)
                .map(|(e, v)| (to_f64(e) - v).abs())
                .fold(0.0, f64::max);
            // Best single-state switch for each player, evaluated exactly.
            let mut saddle_gap = 0.0f64;
            for s in 0..arena.len() {
                for a in 0..arena.state(s).actions.len() {
                    if a == solved.profile.choice(s) {
                        continue;
                    }
                    let dev = eval_profile_exact(&arena, &map, &solved.profile.with_choice(s, a))
                        .map_err(Failure::internal)?;
                    let sign = match arena.state(s).controller {
                        Player::Max => 1.0,
                        Player::Min => -1.0,
                    };
                    for (d, v) in dev.iter().zip(&exact_values) {
                        saddle_gap = saddle_gap.max(sign * to_f64(&(d - v)));
                    }
                }
            }
            let verified = value_error <= tolerance && saddle_gap <= 2.0 * tolerance;
            let payload = json!({
                "discounts": origin,
                "lambda": state_map(&arena, map.as_slice(), exact),
                "values": state_map(&arena, &solved.values, number),
                "profile": solved.profile.to_json(&arena),
                "profile_values": state_map(&arena, &exact_values, exact),
                "residual": format_number(solved.residual),
                "iterations": solved.iterations,
                "value_error": format_number(value_error),
                "saddle_gap": format_number(saddle_gap),
                "verified": verified,
            });
            let summary = format!(
                "{} iterations, value error {}, saddle gap {}",
                solved.iterations,
                format_number(value_error),
                format_number(saddle_gap)
            );
            Ok(Output {
                code: if verified { EXIT_OK } else { EXIT_VERIFICATION },
                payload,
                summary,
            })
        }

        Command::EvalProfile {
            file,
            profile,
            payoff,
            t,
        } => {
            let arena = load(&file)?;
            let p = parse_profile(&arena, &profile)?;
            let (values, summary) = match (payoff, t) {
                (Payoff::Pmp, Some(_)) => {
                    return Err(Failure::input("--t applies to the discounted payoff only"))
                }
                (Payoff::Pmp, None) => {
                    let system = arena.priority_system().map_err(Failure::input)?;
                    let v = eval_profile_pmp(&arena, &p, &system)?;
                    (
                        state_map(&arena, &v, exact),
                        "priority mean-payoff values".to_string(),
                    )
                }
                (Payoff::Discounted, Some(t)) => {
                    let t = parse_t(&t)?;
                    let (param, _) = parametrization(&arena)?;
                    let v = eval_profile_exact(&arena, &param.at(&t)?, &p)
                        .map_err(Failure::internal)?;
                    (
                        state_map(&arena, &v, exact),
                        format!("discounted values at t = {t}"),
                    )
                }
                (Payoff::Discounted, None) => {
                    let (param, _) = parametrization(&arena)?;
                    let v = eval_profile_discounted(&arena, param.lambda(), &p)
                        .map_err(Failure::internal)?;
                    (
                        state_map(&arena, &v, function),
                        "discounted value functions of t".to_string(),
                    )
                }
            };
            let payload = json!({
                "payoff": match payoff { Payoff::Pmp => "pmp", Payoff::Discounted => "discounted" },
                "profile": p.to_json(&arena),
                "values": values,
            });
            Ok(Output::ok(payload, summary))
        }

        Command::SolvePmp { file, budget } => {
            let arena = load(&file)?;
            let system = arena.priority_system().map_err(Failure::input)?;
            let r = solve_pmp_bruteforce(&arena, &system, budget)?;
            let choices = |player: Player, strategies: &[StrategyProfile]| -> Value {
                let mut out = Map::new();
                for s in arena.states_of(player) {
                    let mut labels: Vec<usize> = strategies.iter().map(|p| p.choice(s)).collect();
                    labels.sort_unstable();
                    labels.dedup();
                    out.insert(
                        arena.state(s).id.clone(),
                        labels
                            .iter()
                            .map(|&a| json!(arena.state(s).actions[a].label))
                            .collect(),
                    );
                }
                Value::Object(out)
            };
            let payload = json!({
                "values": state_map(&arena, &r.values, exact),
                "profile": r.profile.to_json(&arena),
                "optimal_max": r.optimal_max.iter().map(|p| labels_of(&arena, Player::Max, p)).collect::<Vec<_>>(),
                "optimal_min": r.optimal_min.iter().map(|p| labels_of(&arena, Player::Min, p)).collect::<Vec<_>>(),
                "optimal_max_choices": choices(Player::Max, &r.optimal_max),
                "optimal_min_choices": choices(Player::Min, &r.optimal_min),
                "saddle_verified": true,
            });
            let mut summary = String::from("priority mean-payoff values:");
            for (s, v) in arena.states().iter().zip(&r.values) {
                let _ = write!(summary, " {}={}", s.id, v);
            }
            Ok(Output::ok(payload, summary))
        }

        Command::Blackwell {
            file,
            mode,
            budget,
            degree_budget,
            k_start,
            k_end,
        } => {
            let arena = load(&file)?;
            let (param, source) = parametrization(&arena)?;
            let budget = Budget {
                profiles: budget,
                degree: degree_budget,
            };
            let r = match mode {
                Mode::Exact => blackwell_search_exact(&arena, &param, &budget)?,
                Mode::Hybrid => {
                    if k_start >= k_end {
                        return Err(Failure::input("--k-start must be below --k-end"));
                    }
                    let options = HybridOptions {
                        k_start,
                        k_end,
                        ..HybridOptions::default()
                    };
                    blackwell_search_hybrid(&arena, &param, &options, &budget)?
                }
            };
            let payload = blackwell_payload(&arena, &param, source, &r);
            let summary = format!(
                "Blackwell profile {}; {} deviations certified",
                serde_json::to_string(&r.profile.to_json(&arena)).unwrap_or_default(),
                r.certificate.len()
            );
            let code = if r.certificate.iter().all(|d| d.ok) {
                EXIT_OK
            } else {
                EXIT_VERIFICATION
            };
            Ok(Output {
                code,
                payload,
                summary,
            })
        }

        Command::DerivePriorities { file } => {
            let arena = load(&file)?;
            let (param, source) = parametrization(&arena)?;
            let system = derive_system(&param)?;
            let payload = json!({
                "parametrization": source.to_string(),
                "epsilon": param.epsilon().to_string(),
                "report": param.report(),
                "lambda": state_map(&arena, param.lambda(), function),
                "weights": state_map(&arena, system.weights(), exact),
                "priorities": state_map(&arena, system.priorities(), |p| json!(p)),
            });
            let mut summary = String::from("derived (weight, priority):");
            for (s, st) in arena.states().iter().enumerate() {
                let _ = write!(
                    summary,
                    " {}=({}, {})",
                    st.id,
                    system.weight(s),
                    system.priority(s)
                );
            }
            Ok(Output::ok(payload, summary))
        }

        Command::StarTransform {
            file,
            discounts: source,
        } => {
            let arena = load(&file)?;
            let (map, _) = discounts(&arena, &source)?;
            let star = star_transform(&arena, &map).map_err(Failure::input)?;
            let payload = serde_json::to_value(star.to_document()).expect("document serializes");
            let summary = format!("transformed arena has {} states", star.len());
            Ok(Output::ok(payload, summary))
        }

        Command::Simulate {
            file,
            estimator,
            seed,
            samples,
            horizon,
            profile,
            initial,
            t,
        } => {
            let arena = load(&file)?;
            let p = parse_profile(&arena, &profile)?;
            let init = arena
                .index_of(&initial)
                .ok_or_else(|| Failure::input(format!("--initial: unknown state '{initial}'")))?;
            let kind = match estimator {
                EstimatorArg::Discounted => Estimator::DiscountedStopping,
                EstimatorArg::Pmp => Estimator::PmpTruncated,
            };
            let config = SimConfig::new(seed, samples, horizon, kind).map_err(Failure::input)?;
            let est = match kind {
                Estimator::DiscountedStopping => {
                    let source = DiscountSource {
                        lambda_from_file: t.is_none(),
                        t,
                    };
                    let (map, _) = discounts(&arena, &source)?;
                    estimate_discounted(&arena, &map, &p, init, &config)
                }
                Estimator::PmpTruncated => {
                    if t.is_some() {
                        return Err(Failure::input(
                            "--t applies to the discounted estimator only",
                        ));
                    }
                    let system = arena.priority_system().map_err(Failure::input)?;
                    estimate_pmp(&arena, &system, &p, init, &config)
                }
            }
            .map_err(Failure::input)?;
            let mut payload = json!({
                "estimator": match kind { Estimator::DiscountedStopping => "discounted", Estimator::PmpTruncated => "pmp" },
                "mean": format_number(est.mean),
                "std_error": format_number(est.std_error),
                "truncated_fraction": format_number(est.truncated_fraction),
                "samples": est.samples_used,
                "seed": seed,
            });
            if kind == Estimator::PmpTruncated {
                payload["note"] = json!(
                    "play priority approximated by the minimum over the second half of each play"
                );
            }
            let summary = format!(
                "mean {} ± {} (standard error)",
                format_number(est.mean),
                format_number(est.std_error)
            );
            Ok(Output::ok(payload, summary))
        }

        Command::LimitCheck { file, kmax, budget } => {
            let arena = load(&file)?;
            if kmax < 4 {
                return Err(Failure::input("--kmax must be at least 4"));
            }
            let (param, source) = parametrization(&arena)?;
            let override_system = match source {
                ParametrizationSource::Canonical => {
                    Some(arena.priority_system().map_err(Failure::input)?)
                }
                ParametrizationSource::Explicit => None,
            };
            let budget = Budget {
                profiles: budget,
                ..Budget::default()
            };
            let r = limit_check(&arena, &param, override_system.as_ref(), kmax, &budget)?;
            let profiles_ok = r.profiles.iter().all(|p| p.tends.iter().all(|&b| b));
            let payload = json!({
                "parametrization": source.to_string(),
                "epsilon": param.epsilon().to_string(),
                "weights": state_map(&arena, r.system.weights(), exact),
                "priorities": state_map(&arena, r.system.priorities(), |p| json!(p)),
                "pmp_values": state_map(&arena, &r.pmp.values, exact),
                "pmp_profile": r.pmp.profile.to_json(&arena),
                "blackwell_profile": r.blackwell.profile.to_json(&arena),
                "blackwell_value_functions": state_map(&arena, &r.blackwell.value_functions, function),
                "blackwell_pmp_values": state_map(&arena, &r.blackwell_pmp_values, exact),
                "equality": state_map(&arena, &r.equality, |b| json!(b)),
                "value_limit": state_map(&arena, &r.value_limit, |b| json!(b)),
                "profile_limits": {
                    "checked": r.profiles.len(),
                    "all_tend_to_pmp": profiles_ok,
                    "failures": r.profiles.iter().filter(|p| !p.tends.iter().all(|&b| b))
                        .map(|p| p.profile.to_json(&arena)).collect::<Vec<_>>(),
                },
                "samples": r.samples.iter().map(|s| json!({
                    "k": s.k,
                    "values": state_map(&arena, &s.values, number),
                    "max_deviation": format_number(s.max_deviation),
                })).collect::<Vec<_>>(),
                "skipped_k": r.skipped,
                "passed": r.passed(),
            });
            let summary = format!(
                "limit check {}: equality {:?}, deviation at k={} is {}",
                if r.passed() { "passed" } else { "FAILED" },
                r.equality,
                r.samples.last().map_or(0, |s| s.k),
                r.samples
                    .last()
                    .map_or("n/a".into(), |s| format_number(s.max_deviation)),
            );
            Ok(Output {
                code: if r.passed() {
                    EXIT_OK
                } else {
                    EXIT_VERIFICATION
                },
                payload,
                summary,
            })
        }
    }
}

fn blackwell_payload(
    arena: &Arena,
    param: &DiscountParametrization,
    source: ParametrizationSource,
    r: &BlackwellResult,
) -> Value {
    let label = |s: usize, a: usize| json!(arena.state(s).actions[a].label);
    let certificate: Vec<Value> = r
        .certificate
        .iter()
        .map(|d| {
            json!({
                "state": arena.state(d.state).id,
                "action": label(d.state, d.action),
                "profile": d.profile.to_json(arena),
                "sign": d.sign,
                "ok": d.ok,
            })
        })
        .collect();
    let qualifying: Map<String, Value> = r
        .qualifying_choices
        .iter()
        .enumerate()
        .map(|(s, acts)| {
            (
                arena.state(s).id.clone(),
                acts.iter().map(|&a| label(s, a)).collect(),
            )
        })
        .collect();
    let mut payload = json!({
        "parametrization": source.to_string(),
        "epsilon": param.epsilon().to_string(),
        "report": param.report(),
        "profile": r.profile.to_json(arena),
        "value_functions": state_map(arena, &r.value_functions, function),
        "qualifying_choices": qualifying,
        "certificate": certificate,
    });
    if let Some(h) = &r.hybrid {
        payload["hybrid"] = json!({
            "samples": h.samples.iter().map(|(k, p)| json!({"k": k, "profile": p.to_json(arena)})).collect::<Vec<_>>(),
            "stabilized": h.stabilized,
            "certified": h.certified,
        });
    }
    payload
}

/// Caps the global worker pool at `PMPG_THREADS` when set.
pub fn init_threads() {
    if let Some(n) = std::env::var("PMPG_THREADS")
        .ok()
        .and_then(|v| usize::from_str(v.trim()).ok())
        .filter(|&n| n > 0)
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_number(3.0 / 19.0), "0.157894736842");
        assert_eq!(format_number(0.0), "0");
        assert_eq!(format_number(5.0), "5");
        assert_eq!(format_number(-1234.5), "-1234.5");
        assert_eq!(format_number(9.5367431640625e-7), "9.53674316406e-7");
        assert_eq!(format_number(1e20), "1e20");
    }

    #[test]
    fn usage_errors_exit_2() {
        let out = run(["pmpg", "validate"]);
        assert_eq!(out.exit_code, EXIT_INPUT);
        assert_eq!(out.payload["error"]["kind"], "usage");
        let out = run(["pmpg", "bogus"]);
        assert_eq!(out.exit_code, EXIT_INPUT);
        let out = run(["pmpg", "validate", "/nonexistent/arena.json"]);
        assert_eq!(out.exit_code, EXIT_INPUT);
    }
}
