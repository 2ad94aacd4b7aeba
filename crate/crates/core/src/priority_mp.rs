//! Priority mean-payoff games.
//!
//! Given weights `w` and priorities `π`, a play is scored by the weighted
//! average of rewards over the visits to states whose priority equals the
//! smallest priority seen infinitely often. Under a fixed memoryless
//! profile the play almost surely ends up in a recurrent class `C` of the
//! induced chain, where it scores the stationary average restricted to
//! states of priority `min π(C)`.

use std::collections::VecDeque;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::algebra::{solve_linear, LinearError, Matrix};
use crate::arena::{
    enumerate_player_strategies, induced_chain, profile_count, Arena, Play, PlayError, Player,
    StrategyProfile, SystemError, WeightedPrioritySystem,
};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PmpError {
    #[error(transparent)]
    System(#[from] SystemError),
    #[error("illegal play: {0}")]
    Play(#[from] PlayError),
    #[error("{} profiles exceed the enumeration budget of {budget}", fmt_count(.profiles))]
    BudgetExceeded {
        profiles: Option<u128>,
        budget: u128,
    },
    #[error("unknown initial state {0}")]
    Initial(usize),
    #[error("internal invariant violated: no profile is a saddle point")]
    NoSaddle,
    #[error("internal invariant violated in chain analysis: {0}")]
    Linear(#[from] LinearError),
}

fn fmt_count(c: &Option<u128>) -> String {
    c.map_or_else(|| "more than 2^128".to_string(), |c| c.to_string())
}

/// Payoff of a finite prefix for a caller-chosen play priority.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrefixValue {
    Defined(Rational),
    /// No visited state has the assumed priority (the `0/0` case).
    Undefined,
}

/// `Σ 1[π(s_i) = α] w(s_i) r(s_i) / Σ 1[π(s_i) = α] w(s_i)` over the prefix.
pub fn pmp_payoff_of_play_prefix(
    play: &Play,
    arena: &Arena,
    system: &WeightedPrioritySystem,
    assumed_priority: u32,
) -> Result<PrefixValue, PmpError> {
    system.check_arena(arena)?;
    arena.check_play(play)?;
    let mut num = Rational::zero();
    let mut den = Rational::zero();
    for &s in &play.states {
        if system.priority(s) == assumed_priority {
            let w = system.weight(s);
            num += w * &arena.state(s).reward;
            den += w;
        }
    }
    Ok(if den.is_zero() {
        PrefixValue::Undefined
    } else {
        PrefixValue::Defined(num / den)
    })
}

/// Recurrent structure of a finite Markov chain with exact transition
/// probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainDecomposition {
    /// Bottom strongly connected components, ordered by smallest member;
    /// members ascending.
    pub classes: Vec<Vec<usize>>,
    /// Stationary distribution of each class, aligned with its members.
    pub stationary: Vec<Vec<Rational>>,
    /// `absorption[s][c]`: probability of eventually entering class `c`
    /// from state `s`.
    pub absorption: Vec<Vec<Rational>>,
}

fn successors(p: &Matrix<Rational>, s: usize) -> impl Iterator<Item = usize> + '_ {
    (0..p.cols()).filter(move |&t| !p[(s, t)].is_zero())
}

fn reach_from(p: &Matrix<Rational>, s: usize) -> Vec<bool> {
    let mut seen = vec![false; p.rows()];
    seen[s] = true;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for v in successors(p, u) {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    seen
}

/// Splits a stochastic matrix into recurrent classes, their stationary
/// distributions and the absorption probabilities of every state.
pub fn decompose_chain(p: &Matrix<Rational>) -> Result<ChainDecomposition, LinearError> {
    let n = p.rows();
    let reach: Vec<Vec<bool>> = (0..n).map(|s| reach_from(p, s)).collect();
    // s is recurrent iff everything it reaches reaches it back.
    let mut class_of = vec![None; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for s in 0..n {
        if class_of[s].is_some() {
            continue;
        }
        if (0..n).all(|t| !reach[s][t] || reach[t][s]) {
            let members: Vec<usize> = (0..n).filter(|&t| reach[s][t]).collect();
            for &m in &members {
                class_of[m] = Some(classes.len());
            }
            classes.push(members);
        }
    }

    let stationary = classes
        .iter()
        .map(|c| stationary_distribution(p, c))
        .collect::<Result<Vec<_>, _>>()?;

    let transient: Vec<usize> = (0..n).filter(|&s| class_of[s].is_none()).collect();
    let mut absorption = vec![vec![Rational::zero(); classes.len()]; n];
    for (s, c) in class_of.iter().enumerate() {
        if let Some(c) = c {
            absorption[s][*c] = Rational::one();
        }
    }
    if !transient.is_empty() {
        let k = transient.len();
        let mut a = Matrix::<Rational>::identity(k);
        for (i, &s) in transient.iter().enumerate() {
            for (j, &t) in transient.iter().enumerate() {
                if !p[(s, t)].is_zero() {
                    a[(i, j)] -= &p[(s, t)];
                }
            }
        }
        for (c, members) in classes.iter().enumerate() {
            let b: Vec<Rational> = transient
                .iter()
                .map(|&s| members.iter().map(|&m| &p[(s, m)]).sum())
                .collect();
            if b.iter().all(Zero::is_zero) {
                continue;
            }
            let x = solve_linear(&a, &b)?;
            for (i, &s) in transient.iter().enumerate() {
                absorption[s][c] = x[i].clone();
            }
        }
    }
    Ok(ChainDecomposition {
        classes,
        stationary,
        absorption,
    })
}

/// Unique `ξ` on an irreducible class with `ξ P = ξ`, `Σ ξ = 1`.
fn stationary_distribution(
    p: &Matrix<Rational>,
    members: &[usize],
) -> Result<Vec<Rational>, LinearError> {
    let k = members.len();
    let mut a = Matrix::<Rational>::zeros(k, k);
    for (j, &sj) in members.iter().enumerate().take(k - 1) {
        for (i, &si) in members.iter().enumerate() {
            a[(j, i)] = p[(si, sj)].clone();
        }
        a[(j, j)] -= Rational::one();
    }
    for i in 0..k {
        a[(k - 1, i)] = Rational::one();
    }
    let mut b = vec![Rational::zero(); k];
    b[k - 1] = Rational::one();
    solve_linear(&a, &b)
}

/// Filtered stationary average of a recurrent class.
fn class_value(
    arena: &Arena,
    system: &WeightedPrioritySystem,
    members: &[usize],
    stationary: &[Rational],
) -> (u32, Rational) {
    let alpha = members.iter().map(|&s| system.priority(s)).min().unwrap();
    let mut num = Rational::zero();
    let mut den = Rational::zero();
    for (&s, xi) in members.iter().zip(stationary) {
        if system.priority(s) == alpha {
            let m = xi * system.weight(s);
            num += &m * &arena.state(s).reward;
            den += m;
        }
    }
    (alpha, num / den)
}

/// Chain structure seen from one initial state.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainAnalysis {
    pub initial: usize,
    /// States reachable from `initial`, ascending.
    pub reachable: Vec<usize>,
    pub recurrent_classes: Vec<Vec<usize>>,
    /// Smallest priority in each class.
    pub class_priority: Vec<u32>,
    /// Aligned with the members of each class.
    pub stationary: Vec<Vec<Rational>>,
    /// Probability of ending up in each class from `initial`.
    pub absorption: Vec<Rational>,
    /// Almost-sure payoff of plays absorbed in each class.
    pub class_value: Vec<Rational>,
}

impl ChainAnalysis {
    /// Expected payoff from the initial state.
    pub fn expectation(&self) -> Rational {
        self.absorption
            .iter()
            .zip(&self.class_value)
            .map(|(a, v)| a * v)
            .sum()
    }
}

pub fn analyze_chain(
    arena: &Arena,
    profile: &StrategyProfile,
    initial: usize,
    system: &WeightedPrioritySystem,
) -> Result<ChainAnalysis, PmpError> {
    system.check_arena(arena)?;
    if initial >= arena.len() {
        return Err(PmpError::Initial(initial));
    }
    let p = induced_chain(arena, profile);
    let reach = reach_from(&p, initial);
    let reachable: Vec<usize> = (0..arena.len()).filter(|&s| reach[s]).collect();
    let d = decompose_chain(&p)?;
    let mut out = ChainAnalysis {
        initial,
        reachable,
        recurrent_classes: Vec::new(),
        class_priority: Vec::new(),
        stationary: Vec::new(),
        absorption: Vec::new(),
        class_value: Vec::new(),
    };
    // Reachable states form a closed set, so its bottom components are the
    // global ones it contains.
    for (c, members) in d.classes.iter().enumerate() {
        if !reach[members[0]] {
            continue;
        }
        let (alpha, value) = class_value(arena, system, members, &d.stationary[c]);
        out.recurrent_classes.push(members.clone());
        out.class_priority.push(alpha);
        out.stationary.push(d.stationary[c].clone());
        out.absorption.push(d.absorption[initial][c].clone());
        out.class_value.push(value);
    }
    Ok(out)
}

/// Expected priority mean payoff from every state under `profile`.
pub fn eval_profile_pmp(
    arena: &Arena,
    profile: &StrategyProfile,
    system: &WeightedPrioritySystem,
) -> Result<Vec<Rational>, PmpError> {
    system.check_arena(arena)?;
    let d = decompose_chain(&induced_chain(arena, profile))?;
    let values: Vec<Rational> = d
        .classes
        .iter()
        .zip(&d.stationary)
        .map(|(m, xi)| class_value(arena, system, m, xi).1)
        .collect();
    Ok(d.absorption
        .iter()
        .map(|row| row.iter().zip(&values).map(|(a, v)| a * v).sum())
        .collect())
}

/// Default cap on the number of enumerated profiles.
pub const DEFAULT_BUDGET: u128 = 1 << 16;

#[derive(Debug, Clone, PartialEq)]
pub struct PmpSolveResult {
    pub values: Vec<Rational>,
    /// Lexicographically first saddle point.
    pub profile: StrategyProfile,
    /// Every optimal Max strategy (Min's states hold action 0), in
    /// lexicographic order.
    pub optimal_max: Vec<StrategyProfile>,
    /// Every optimal Min strategy (Max's states hold action 0).
    pub optimal_min: Vec<StrategyProfile>,
}

/// Exact game values by exhaustive enumeration of memoryless profiles.
///
/// Values are `max_σ min_τ` per state; the returned profile attains them
/// at every state and is checked against every unilateral deviation.
pub fn solve_pmp_bruteforce(
    arena: &Arena,
    system: &WeightedPrioritySystem,
    budget: u128,
) -> Result<PmpSolveResult, PmpError> {
    system.check_arena(arena)?;
    let eval = |p: &StrategyProfile| eval_profile_pmp(arena, p, system);
    solve_by_table(arena, budget, eval, |a, b| a.cmp(b)).map(|t| PmpSolveResult {
        values: t.values,
        profile: t.profile,
        optimal_max: t.optimal_max,
        optimal_min: t.optimal_min,
    })
}

pub(crate) struct TableSolution<V> {
    pub values: Vec<V>,
    pub profile: StrategyProfile,
    pub optimal_max: Vec<StrategyProfile>,
    pub optimal_min: Vec<StrategyProfile>,
}

/// Shared brute-force core: evaluates every (σ, τ) pair, takes maximin per
/// state and searches the lexicographically first saddle point.
pub(crate) fn solve_by_table<V, E>(
    arena: &Arena,
    budget: u128,
    eval: impl Fn(&StrategyProfile) -> Result<Vec<V>, E> + Sync,
    cmp: impl Fn(&V, &V) -> std::cmp::Ordering + Sync,
) -> Result<TableSolution<V>, E>
where
    V: Clone + Send + Sync,
    E: From<PmpError> + Send,
{
    let count = profile_count(arena);
    if count.is_none_or(|c| c > budget) {
        return Err(PmpError::BudgetExceeded {
            profiles: count,
            budget,
        }
        .into());
    }
    let maxs: Vec<StrategyProfile> = enumerate_player_strategies(arena, Player::Max).collect();
    let mins: Vec<StrategyProfile> = enumerate_player_strategies(arena, Player::Min).collect();
    let pairs: Vec<(usize, usize)> = (0..maxs.len())
        .flat_map(|i| (0..mins.len()).map(move |j| (i, j)))
        .collect();
    let flat: Vec<Vec<V>> = pairs
        .par_iter()
        .map(|&(i, j)| eval(&StrategyProfile::combine(arena, &maxs[i], &mins[j])))
        .collect::<Result<_, E>>()?;
    let table = |i: usize, j: usize| &flat[i * mins.len() + j];
    let n = arena.len();
    let le = |a: &V, b: &V| cmp(a, b).is_le();

    // Guaranteed payoff of each σ (worst case over τ) and cap of each τ.
    let floor: Vec<Vec<V>> = (0..maxs.len())
        .map(|i| {
            (0..n)
                .map(|s| {
                    (1..mins.len()).fold(table(i, 0)[s].clone(), |m, j| {
                        let v = &table(i, j)[s];
                        if le(v, &m) {
                            v.clone()
                        } else {
                            m
                        }
                    })
                })
                .collect()
        })
        .collect();
    let ceil: Vec<Vec<V>> = (0..mins.len())
        .map(|j| {
            (0..n)
                .map(|s| {
                    (1..maxs.len()).fold(table(0, j)[s].clone(), |m, i| {
                        let v = &table(i, j)[s];
                        if le(&m, v) {
                            v.clone()
                        } else {
                            m
                        }
                    })
                })
                .collect()
        })
        .collect();
    let values: Vec<V> = (0..n)
        .map(|s| {
            (1..maxs.len()).fold(floor[0][s].clone(), |m, i| {
                let v = &floor[i][s];
                if le(&m, v) {
                    v.clone()
                } else {
                    m
                }
            })
        })
        .collect();
    let eq = |a: &[V], b: &[V]| a.iter().zip(b).all(|(x, y)| cmp(x, y).is_eq());

    let good_max: Vec<usize> = (0..maxs.len())
        .filter(|&i| eq(&floor[i], &values))
        .collect();
    let good_min: Vec<usize> = (0..mins.len()).filter(|&j| eq(&ceil[j], &values)).collect();
    // A pair of optimal strategies is a saddle point; pick the
    // lexicographically first one and re-check it against all deviations.
    let mut saddle = None;
    for &i in &good_max {
        for &j in &good_min {
            let p = StrategyProfile::combine(arena, &maxs[i], &mins[j]);
            if saddle.as_ref().is_none_or(|(q, _, _)| p < *q) {
                saddle = Some((p, i, j));
            }
        }
    }
    let (profile, i, j) = saddle.ok_or_else(|| E::from(PmpError::NoSaddle))?;
    let at = table(i, j);
    let verified = eq(at, &values)
        && (0..maxs.len()).all(|k| table(k, j).iter().zip(at).all(|(d, v)| le(d, v)))
        && (0..mins.len()).all(|k| table(i, k).iter().zip(at).all(|(d, v)| le(v, d)));
    if !verified {
        return Err(PmpError::NoSaddle.into());
    }
    Ok(TableSolution {
        values,
        profile,
        optimal_max: good_max.iter().map(|&i| maxs[i].clone()).collect(),
        optimal_min: good_min.iter().map(|&j| mins[j].clone()).collect(),
    })
}

/// Rewards and weights turning a priority assignment into a parity game:
/// weight 1 everywhere, reward 1 on even priorities and 0 on odd ones.
pub fn parity_encoding(
    priorities: &[u32],
) -> Result<(Vec<Rational>, WeightedPrioritySystem), SystemError> {
    let rewards = priorities
        .iter()
        .map(|p| Rational::from_integer(((p + 1) % 2).into()))
        .collect();
    let system =
        WeightedPrioritySystem::new(vec![Rational::one(); priorities.len()], priorities.to_vec())?;
    Ok((rewards, system))
}
