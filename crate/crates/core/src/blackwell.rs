//! Discount parametrizations `t ↦ λ_t(s)` tending to 1, Blackwell-optimal
//! profiles, and the check that discounted values converge to priority
//! mean-payoff values as `t ↑ 1`.
//!
//! Every profile's values are rational functions of `t` (exact linear solve
//! over the function field). Two such functions are ordered by their sign on
//! a left neighbourhood of 1, so "optimal for all t close to 1" becomes an
//! exact comparison.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Signed};
use rayon::prelude::*;

use crate::algebra::{parse_rational_function, sturm, zero_order_at_one, RationalFunction};
use crate::arena::{
    enumerate_profiles, profile_count, Arena, ArenaError, Player, StrategyProfile, SystemError,
    WeightedPrioritySystem,
};
use crate::discounted::{
    eval_profile_discounted, solve_discounted_from, to_f64, DiscountMap, DiscountedError,
    ShapleyOperator, SolveError,
};
use crate::priority_mp::{
    eval_profile_pmp, solve_by_table, solve_pmp_bruteforce, PmpError, PmpSolveResult,
};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BlackwellError {
    #[error("state {state}: {reason}")]
    Parametrization { state: usize, reason: String },
    #[error("no epsilon of the form 2^-k (k <= 64) keeps every w(s) * eps^π(s) below 1")]
    NoEpsilon,
    #[error("could not certify a neighbourhood of 1 after {halvings} halvings of epsilon")]
    Certification { halvings: u32 },
    #[error("t = {t} lies outside [1 - eps, 1) with eps = {epsilon}")]
    OutsideInterval { t: Rational, epsilon: Rational },
    #[error("{got} discount functions for an arena of {expected} states")]
    Length { expected: usize, got: usize },
    #[error("value function of degree {degree} exceeds the degree budget of {budget}")]
    DegreeBudget { degree: usize, budget: usize },
    #[error("internal invariant violated: candidate fails its own certificate")]
    Certificate,
    #[error(transparent)]
    Arena(#[from] ArenaError),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Discounted(#[from] DiscountedError),
    #[error(transparent)]
    Pmp(#[from] PmpError),
}

impl BlackwellError {
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            BlackwellError::DegreeBudget { .. }
                | BlackwellError::Pmp(PmpError::BudgetExceeded { .. })
        )
    }
}

const MAX_HALVINGS: u32 = 256;

/// Per-state discount functions with an interval `[1 - ε, 1)` on which all
/// of them are certified to lie in `[0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscountParametrization {
    lambda: Vec<RationalFunction>,
    epsilon: Rational,
    report: Vec<String>,
}

fn half() -> Rational {
    Rational::new(1.into(), 2.into())
}

impl DiscountParametrization {
    /// Certifies `lambda` starting from `ε = 1/2`.
    pub fn new(lambda: Vec<RationalFunction>) -> Result<Self, BlackwellError> {
        Self::certify(lambda, half())
    }

    /// Checks that every `1 - λ(s)` tends to 0 from above, then halves `ε`
    /// until no numerator or denominator root of `λ(s)` or `1 - λ(s)` lies
    /// in `[1 - ε, 1)`. With no root there, each `λ(s)` is continuous and
    /// keeps the sign of its limit, so it stays inside `(0, 1)`.
    pub fn certify(
        lambda: Vec<RationalFunction>,
        epsilon: Rational,
    ) -> Result<Self, BlackwellError> {
        let one = Rational::one();
        assert!(
            epsilon.is_positive() && epsilon < one,
            "epsilon must lie in (0, 1)"
        );
        let gaps: Vec<RationalFunction> = lambda
            .iter()
            .map(|l| &RationalFunction::one() - l)
            .collect();
        for (state, g) in gaps.iter().enumerate() {
            let s = g.sign_near_one();
            if s.sign != 1 || s.vanishing_order < 1 {
                return Err(BlackwellError::Parametrization {
                    state,
                    reason: format!(
                        "λ = {} does not tend to 1 from below as t → 1-",
                        lambda[state]
                    ),
                });
            }
        }
        let start = epsilon.clone();
        let mut eps = epsilon;
        let mut first_escape = None;
        for halvings in 0..=MAX_HALVINGS {
            let a = &one - &eps;
            let escaping = (0..lambda.len()).find(|&s| {
                [lambda[s].num(), lambda[s].den(), gaps[s].num()]
                    .into_iter()
                    .any(|p| sturm::count_roots_half_open_right(p, &a, &one) > 0)
            });
            let Some(s) = escaping else {
                let report = first_escape
                    .map(|s: usize| {
                        vec![format!(
                            "state {s}: λ = {} may leave [0, 1) on [{}, 1); epsilon reduced from {start} to {eps} after {halvings} halvings",
                            lambda[s],
                            &one - &start,
                        )]
                    })
                    .unwrap_or_default();
                return Ok(DiscountParametrization {
                    lambda,
                    epsilon: eps,
                    report,
                });
            };
            first_escape.get_or_insert(s);
            eps *= half();
        }
        Err(BlackwellError::Certification {
            halvings: MAX_HALVINGS,
        })
    }

    pub fn lambda(&self) -> &[RationalFunction] {
        &self.lambda
    }

    pub fn epsilon(&self) -> &Rational {
        &self.epsilon
    }

    /// Notes produced while certifying, e.g. when `ε` had to shrink.
    pub fn report(&self) -> &[String] {
        &self.report
    }

    pub fn len(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda.is_empty()
    }

    pub fn contains(&self, t: &Rational) -> bool {
        let one = Rational::one();
        *t >= &one - &self.epsilon && *t < one
    }

    /// Constant discounts `λ_t` for `t ∈ [1 - ε, 1)`.
    pub fn at(&self, t: &Rational) -> Result<DiscountMap, BlackwellError> {
        if !self.contains(t) {
            return Err(BlackwellError::OutsideInterval {
                t: t.clone(),
                epsilon: self.epsilon.clone(),
            });
        }
        let values = self
            .lambda
            .iter()
            .map(|l| l.eval(t).expect("no pole on the certified interval"))
            .collect();
        Ok(DiscountMap::new(values)?)
    }

    fn check_arena(&self, arena: &Arena) -> Result<(), BlackwellError> {
        if self.len() != arena.len() {
            return Err(BlackwellError::Length {
                expected: arena.len(),
                got: self.len(),
            });
        }
        Ok(())
    }
}

/// `λ_t(s) = 1 - w(s) (1 - t)^π(s)`, with `ε` the largest `2^-k`
/// (`1 <= k <= 64`) such that `w(s) ε^π(s) < 1` everywhere.
pub fn canonical_parametrization(
    system: &WeightedPrioritySystem,
) -> Result<DiscountParametrization, BlackwellError> {
    let one = Rational::one();
    let eps = (1..=64)
        .map(|k| Rational::new(1.into(), num_bigint::BigInt::from(1u8) << k))
        .find(|e| {
            (0..system.len()).all(|s| {
                system.weight(s) * num_traits::pow(e.clone(), system.priority(s) as usize) < one
            })
        })
        .ok_or(BlackwellError::NoEpsilon)?;
    let lambda = (0..system.len())
        .map(|s| {
            let gap = RationalFunction::from_poly(
                crate::algebra::Polynomial::one_minus_t().pow(system.priority(s)),
            );
            &RationalFunction::one()
                - &(&RationalFunction::constant(system.weight(s).clone()) * &gap)
        })
        .collect();
    let param = DiscountParametrization::certify(lambda, eps.clone())?;
    debug_assert_eq!(param.epsilon, eps);
    Ok(param)
}

/// Reads `1 - λ_t(s) = (1 - t)^π(s) g_s(t)` and returns `π(s)` as the
/// priority and `g_s(1)` as the weight.
pub fn derive_system(
    param: &DiscountParametrization,
) -> Result<WeightedPrioritySystem, BlackwellError> {
    let mut weights = Vec::with_capacity(param.len());
    let mut priorities = Vec::with_capacity(param.len());
    for (state, l) in param.lambda.iter().enumerate() {
        let gap = &RationalFunction::one() - l;
        let bad = |reason: &str| BlackwellError::Parametrization {
            state,
            reason: reason.to_string(),
        };
        let (mn, gn) =
            zero_order_at_one(gap.num()).map_err(|_| bad("1 - λ is identically zero"))?;
        let (md, gd) = zero_order_at_one(gap.den()).expect("denominator is nonzero");
        if md != 0 {
            return Err(bad("1 - λ has a pole at t = 1"));
        }
        if mn == 0 {
            return Err(bad("λ does not tend to 1 as t → 1-"));
        }
        let w = gn / gd;
        if !w.is_positive() {
            return Err(bad("the weight g(1) is not positive"));
        }
        weights.push(w);
        priorities.push(mn);
    }
    Ok(WeightedPrioritySystem::new(weights, priorities)?)
}

/// Where the parametrization of an arena came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParametrizationSource {
    /// Every state carries an explicit `discount`.
    Explicit,
    /// Canonical parametrization of the arena's weights and priorities.
    Canonical,
}

impl fmt::Display for ParametrizationSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParametrizationSource::Explicit => "explicit",
            ParametrizationSource::Canonical => "canonical",
        })
    }
}

/// Explicit per-state discounts when all states have one, otherwise the
/// canonical parametrization of the arena's priority system.
pub fn parametrization_for_arena(
    arena: &Arena,
) -> Result<(DiscountParametrization, ParametrizationSource), BlackwellError> {
    if arena.has_discounts() {
        let lambda = arena.discount_functions()?;
        Ok((
            DiscountParametrization::new(lambda)?,
            ParametrizationSource::Explicit,
        ))
    } else {
        let system = arena.priority_system()?;
        Ok((
            canonical_parametrization(&system)?,
            ParametrizationSource::Canonical,
        ))
    }
}

/// Parses one discount function per state, e.g. `["t", "1-(1-t)^2"]`.
pub fn parse_parametrization(exprs: &[&str]) -> Result<DiscountParametrization, BlackwellError> {
    let lambda = exprs
        .iter()
        .enumerate()
        .map(|(state, e)| {
            parse_rational_function(e).map_err(|err| BlackwellError::Parametrization {
                state,
                reason: err.to_string(),
            })
        })
        .collect::<Result<_, _>>()?;
    DiscountParametrization::new(lambda)
}

/// One unilateral deviation: the candidate with `action` played at
/// `state` instead.
#[derive(Debug, Clone, PartialEq)]
pub struct Deviation {
    pub state: usize,
    pub action: usize,
    pub profile: StrategyProfile,
    /// Sign near 1 of `V_deviation(t) - V(t)` at `state`.
    pub sign: i8,
    /// The deviation is weakly worse for the deviating player at every state.
    pub ok: bool,
}

/// Numeric sampling trace of the hybrid search.
#[derive(Debug, Clone, PartialEq)]
pub struct HybridTrace {
    /// `(k, greedy profile at t = 1 - 2^-k)`.
    pub samples: Vec<(u32, StrategyProfile)>,
    pub stabilized: bool,
    /// Whether the numeric candidate passed the exact certificate (otherwise
    /// the result comes from the exhaustive search).
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlackwellResult {
    pub profile: StrategyProfile,
    pub value_functions: Vec<RationalFunction>,
    /// Every single-state switch away from `profile`. Such switches suffice:
    /// a profile no single switch improves on a neighbourhood of 1 is
    /// optimal there against every memoryless deviation.
    pub certificate: Vec<Deviation>,
    /// Per state, the actions used by some Blackwell-optimal strategy of the
    /// state's controller (those whose switch leaves all values unchanged).
    pub qualifying_choices: Vec<Vec<usize>>,
    pub hybrid: Option<HybridTrace>,
}

/// Limits on the exhaustive searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub profiles: u128,
    /// Largest `deg(num) + deg(den)` tolerated in a value function.
    pub degree: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            profiles: crate::priority_mp::DEFAULT_BUDGET,
            degree: 4096,
        }
    }
}

fn check_profile_budget(arena: &Arena, budget: &Budget) -> Result<(), BlackwellError> {
    let count = profile_count(arena);
    if count.is_none_or(|c| c > budget.profiles) {
        return Err(PmpError::BudgetExceeded {
            profiles: count,
            budget: budget.profiles,
        }
        .into());
    }
    Ok(())
}

fn value_functions(
    arena: &Arena,
    param: &DiscountParametrization,
    profile: &StrategyProfile,
    budget: &Budget,
) -> Result<Vec<RationalFunction>, BlackwellError> {
    let v = eval_profile_discounted(arena, param.lambda(), profile)?;
    if let Some(degree) = v.iter().map(RationalFunction::total_degree).max() {
        if degree > budget.degree {
            return Err(BlackwellError::DegreeBudget {
                degree,
                budget: budget.degree,
            });
        }
    }
    Ok(v)
}

type ValueTable = HashMap<StrategyProfile, Vec<RationalFunction>>;

fn value_table(
    arena: &Arena,
    param: &DiscountParametrization,
    budget: &Budget,
) -> Result<ValueTable, BlackwellError> {
    check_profile_budget(arena, budget)?;
    let profiles: Vec<StrategyProfile> = enumerate_profiles(arena).collect();
    profiles
        .into_par_iter()
        .map(|p| value_functions(arena, param, &p, budget).map(|v| (p, v)))
        .collect()
}

/// Checks every single-state switch of `profile` near 1.
fn certify(
    arena: &Arena,
    param: &DiscountParametrization,
    profile: &StrategyProfile,
    values: &[RationalFunction],
    budget: &Budget,
) -> Result<(Vec<Deviation>, Vec<Vec<usize>>), BlackwellError> {
    let switches: Vec<(usize, usize)> = (0..arena.len())
        .flat_map(|s| {
            (0..arena.state(s).actions.len())
                .filter(move |&a| a != profile.choice(s))
                .map(move |a| (s, a))
        })
        .collect();
    let checked: Vec<(Deviation, bool)> = switches
        .into_par_iter()
        .map(|(s, a)| {
            let dev = profile.with_choice(s, a);
            let v = value_functions(arena, param, &dev, budget)?;
            let signs: Vec<i8> = v
                .iter()
                .zip(values)
                .map(|(d, c)| (d - c).sign_near_one().sign)
                .collect();
            let ok = match arena.state(s).controller {
                Player::Max => signs.iter().all(|&x| x <= 0),
                Player::Min => signs.iter().all(|&x| x >= 0),
            };
            let neutral = signs.iter().all(|&x| x == 0);
            Ok((
                Deviation {
                    state: s,
                    action: a,
                    profile: dev,
                    sign: signs[s],
                    ok,
                },
                neutral,
            ))
        })
        .collect::<Result<_, BlackwellError>>()?;
    let mut qualifying: Vec<Vec<usize>> =
        (0..arena.len()).map(|s| vec![profile.choice(s)]).collect();
    for (d, neutral) in &checked {
        if *neutral {
            qualifying[d.state].push(d.action);
        }
    }
    for q in &mut qualifying {
        q.sort_unstable();
    }
    Ok((checked.into_iter().map(|(d, _)| d).collect(), qualifying))
}

fn search_in_table(
    arena: &Arena,
    param: &DiscountParametrization,
    table: &ValueTable,
    budget: &Budget,
) -> Result<BlackwellResult, BlackwellError> {
    let solved = solve_by_table::<_, BlackwellError>(
        arena,
        budget.profiles,
        |p| Ok(table[p].clone()),
        |a, b| a.compare_near_one(b),
    )?;
    let values = table[&solved.profile].clone();
    let (certificate, qualifying_choices) =
        certify(arena, param, &solved.profile, &values, budget)?;
    if certificate.iter().any(|d| !d.ok) {
        return Err(BlackwellError::Certificate);
    }
    Ok(BlackwellResult {
        profile: solved.profile,
        value_functions: values,
        certificate,
        qualifying_choices,
        hybrid: None,
    })
}

/// Exhaustive search: the lexicographically first profile that is a saddle
/// point for every `t` in a left neighbourhood of 1.
pub fn blackwell_search_exact(
    arena: &Arena,
    param: &DiscountParametrization,
    budget: &Budget,
) -> Result<BlackwellResult, BlackwellError> {
    param.check_arena(arena)?;
    let table = value_table(arena, param, budget)?;
    search_in_table(arena, param, &table, budget)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HybridOptions {
    pub k_start: u32,
    pub k_end: u32,
    /// Value-iteration cap per sample; the greedy profile of the last
    /// iterate is used when it is reached.
    pub max_iter: usize,
    pub tolerance: f64,
}

impl Default for HybridOptions {
    fn default() -> Self {
        HybridOptions {
            k_start: 1,
            k_end: 12,
            max_iter: 20_000,
            tolerance: 1e-9,
        }
    }
}

/// Samples `t_k = 1 - 2^-k` with value iteration until the greedy profile
/// is the same for three consecutive `k`, then certifies that single
/// candidate exactly. Falls back to [`blackwell_search_exact`] if the
/// certificate fails.
pub fn blackwell_search_hybrid(
    arena: &Arena,
    param: &DiscountParametrization,
    options: &HybridOptions,
    budget: &Budget,
) -> Result<BlackwellResult, BlackwellError> {
    param.check_arena(arena)?;
    assert!(
        options.k_start < options.k_end,
        "k_start must be below k_end"
    );
    let mut samples: Vec<(u32, StrategyProfile)> = Vec::new();
    let mut stabilized = false;
    let mut warm: Vec<f64> = arena.states().iter().map(|s| to_f64(&s.reward)).collect();
    for k in options.k_start..=options.k_end {
        let t = Rational::one() - Rational::new(1.into(), num_bigint::BigInt::from(1u8) << k);
        if !param.contains(&t) {
            continue;
        }
        let discounts = param.at(&t)?;
        let (profile, last) = match solve_discounted_from(
            arena,
            &discounts,
            options.tolerance,
            options.max_iter,
            warm.clone(),
        ) {
            Ok(r) => (r.profile, r.values),
            Err(SolveError::NotConverged { last, .. }) => {
                let op = ShapleyOperator::<f64>::new(arena, &discounts)?;
                let p =
                    StrategyProfile::from_choices(arena, op.greedy(&last)).expect("greedy choices");
                (p, last)
            }
            Err(SolveError::Input(e)) => return Err(e.into()),
        };
        warm = last;
        samples.push((k, profile));
        let n = samples.len();
        if profile_count(arena) == Some(1)
            || (n >= 3 && samples[n - 3..].iter().all(|(_, p)| *p == samples[n - 1].1))
        {
            stabilized = true;
            break;
        }
    }
    let candidate = samples
        .last()
        .map(|(_, p)| p.clone())
        .unwrap_or_else(|| StrategyProfile::first(arena));
    let values = value_functions(arena, param, &candidate, budget)?;
    let (certificate, qualifying_choices) = certify(arena, param, &candidate, &values, budget)?;
    if certificate.iter().all(|d| d.ok) {
        return Ok(BlackwellResult {
            profile: candidate,
            value_functions: values,
            certificate,
            qualifying_choices,
            hybrid: Some(HybridTrace {
                samples,
                stabilized,
                certified: true,
            }),
        });
    }
    let mut exact = blackwell_search_exact(arena, param, budget)?;
    exact.hybrid = Some(HybridTrace {
        samples,
        stabilized,
        certified: false,
    });
    Ok(exact)
}

/// Limit evidence for one profile: its discounted values tend to its
/// own priority mean-payoff values.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileLimit {
    pub profile: StrategyProfile,
    pub pmp_values: Vec<Rational>,
    pub tends: Vec<bool>,
}

/// Fixed-`t` game values at `t = 1 - 2^-k`.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitSample {
    pub k: u32,
    pub values: Vec<f64>,
    /// Largest distance to the priority mean-payoff values.
    pub max_deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitReport {
    pub system: WeightedPrioritySystem,
    pub pmp: PmpSolveResult,
    pub blackwell: BlackwellResult,
    /// Priority mean-payoff values of the Blackwell profile.
    pub blackwell_pmp_values: Vec<Rational>,
    /// Per state: the Blackwell profile attains the priority game value.
    pub equality: Vec<bool>,
    /// Per state: the Blackwell value function tends to the priority game value.
    pub value_limit: Vec<bool>,
    pub profiles: Vec<ProfileLimit>,
    pub samples: Vec<LimitSample>,
    /// Sample exponents skipped because `t_k` lies outside `[1 - ε, 1)`.
    pub skipped: Vec<u32>,
}

impl LimitReport {
    pub fn passed(&self) -> bool {
        self.equality.iter().all(|&b| b)
            && self.value_limit.iter().all(|&b| b)
            && self.profiles.iter().all(|p| p.tends.iter().all(|&b| b))
    }
}

/// Compares the discounted family with the priority game it induces.
///
/// Uses `system_override` as the priority system when given, otherwise
/// [`derive_system`] of `param`. Samples `k = 4..=kmax`.
pub fn limit_check(
    arena: &Arena,
    param: &DiscountParametrization,
    system_override: Option<&WeightedPrioritySystem>,
    kmax: u32,
    budget: &Budget,
) -> Result<LimitReport, BlackwellError> {
    param.check_arena(arena)?;
    let system = match system_override {
        Some(s) => {
            s.check_arena(arena)?;
            s.clone()
        }
        None => derive_system(param)?,
    };
    let pmp = solve_pmp_bruteforce(arena, &system, budget.profiles)?;
    let table = value_table(arena, param, budget)?;
    let blackwell = search_in_table(arena, param, &table, budget)?;
    let blackwell_pmp_values = eval_profile_pmp(arena, &blackwell.profile, &system)?;
    let equality = blackwell_pmp_values
        .iter()
        .zip(&pmp.values)
        .map(|(a, b)| a == b)
        .collect();
    let tends_to = |f: &RationalFunction, c: &Rational| {
        (f - &RationalFunction::constant(c.clone()))
            .sign_near_one()
            .tends_to_zero()
    };
    let value_limit = blackwell
        .value_functions
        .iter()
        .zip(&pmp.values)
        .map(|(f, c)| tends_to(f, c))
        .collect();

    let mut ordered: Vec<&StrategyProfile> = table.keys().collect();
    ordered.sort();
    let profiles = ordered
        .into_par_iter()
        .map(|p| {
            let pmp_values = eval_profile_pmp(arena, p, &system)?;
            let tends = table[p]
                .iter()
                .zip(&pmp_values)
                .map(|(f, c)| tends_to(f, c))
                .collect();
            Ok(ProfileLimit {
                profile: p.clone(),
                pmp_values,
                tends,
            })
        })
        .collect::<Result<Vec<_>, BlackwellError>>()?;

    let mut samples = Vec::new();
    let mut skipped = Vec::new();
    for k in 4..=kmax {
        let t = Rational::one() - Rational::new(1.into(), num_bigint::BigInt::from(1u8) << k);
        if !param.contains(&t) {
            skipped.push(k);
            continue;
        }
        let at_t: HashMap<&StrategyProfile, Vec<Rational>> = table
            .iter()
            .map(|(p, fs)| {
                (
                    p,
                    fs.iter()
                        .map(|f| f.eval(&t).expect("no pole on the interval"))
                        .collect(),
                )
            })
            .collect();
        let solved = solve_by_table::<_, BlackwellError>(
            arena,
            budget.profiles,
            |p| Ok(at_t[p].clone()),
            |a, b| a.cmp(b),
        )?;
        let values: Vec<f64> = solved.values.iter().map(to_f64).collect();
        let max_deviation = solved
            .values
            .iter()
            .zip(&pmp.values)
            .map(|(v, c)| to_f64(&(v - c).abs()))
            .fold(0.0, f64::max);
        samples.push(LimitSample {
            k,
            values,
            max_deviation,
        });
    }
    Ok(LimitReport {
        system,
        pmp,
        blackwell,
        blackwell_pmp_values,
        equality,
        value_limit,
        profiles,
        samples,
        skipped,
    })
}
