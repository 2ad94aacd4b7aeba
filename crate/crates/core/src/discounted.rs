//! Multi-discounted games: each state `s` carries its own discount factor
//! `λ(s) ∈ [0, 1)`, and a play `s0 s1 s2 ...` pays
//! `Σ_i λ(s0)…λ(s_{i-1}) (1 - λ(s_i)) r(s_i)`.

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::{solve_linear, LinearError, Matrix};
use crate::arena::{Arena, Play, PlayError, Player, StrategyProfile};
use crate::scalar::{to_real, Field, Real};
use crate::Rational;

/// Constant per-state discount factors, each in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscountMap {
    lambda: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DiscountedError {
    #[error("discount of state {state} is {value}, expected a value in [0, 1)")]
    DiscountRange { state: usize, value: Rational },
    #[error("{got} discount factors for an arena of {expected} states")]
    Length { expected: usize, got: usize },
    #[error("illegal play: {0}")]
    Play(#[from] PlayError),
    #[error("internal invariant violated, I - M is singular: {0}")]
    Singular(#[from] LinearError),
    #[error("tolerance must be positive")]
    Tolerance,
}

impl DiscountMap {
    pub fn new(lambda: Vec<Rational>) -> Result<Self, DiscountedError> {
        for (state, l) in lambda.iter().enumerate() {
            if l.is_negative() || *l >= Rational::one() {
                return Err(DiscountedError::DiscountRange {
                    state,
                    value: l.clone(),
                });
            }
        }
        Ok(DiscountMap { lambda })
    }

    pub fn uniform(n: usize, lambda: Rational) -> Result<Self, DiscountedError> {
        Self::new(vec![lambda; n])
    }

    pub fn for_arena(&self, arena: &Arena) -> Result<(), DiscountedError> {
        if self.lambda.len() != arena.len() {
            return Err(DiscountedError::Length {
                expected: arena.len(),
                got: self.lambda.len(),
            });
        }
        Ok(())
    }

    pub fn get(&self, s: usize) -> &Rational {
        &self.lambda[s]
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.lambda
    }

    pub fn max(&self) -> Rational {
        self.lambda
            .iter()
            .max()
            .cloned()
            .unwrap_or_else(Rational::zero)
    }
}

/// Partial discounted sum over a finite play prefix.
pub fn discounted_payoff_of_play(
    play: &Play,
    arena: &Arena,
    discounts: &DiscountMap,
) -> Result<Rational, DiscountedError> {
    discounts.for_arena(arena)?;
    arena.check_play(play)?;
    let mut reach = Rational::one();
    let mut total = Rational::zero();
    for &s in &play.states {
        let l = discounts.get(s);
        total += &reach * (Rational::one() - l) * &arena.state(s).reward;
        reach *= l;
        if reach.is_zero() {
            break;
        }
    }
    Ok(total)
}

/// Expected discounted payoff from every state under a fixed profile,
/// obtained by solving `(I - M) x = v` with `M[s][s'] = λ(s) p(s → s')` and
/// `v[s] = (1 - λ(s)) r(s)`.
///
/// Generic over the field: constant rational discounts give exact values,
/// rational functions of `t` give the value functions of the profile.
pub fn eval_profile_discounted<F: Field>(
    arena: &Arena,
    lambda: &[F],
    profile: &StrategyProfile,
) -> Result<Vec<F>, DiscountedError> {
    let n = arena.len();
    if lambda.len() != n {
        return Err(DiscountedError::Length {
            expected: n,
            got: lambda.len(),
        });
    }
    let mut a = Matrix::<F>::identity(n);
    let mut v = Vec::with_capacity(n);
    for (s, st) in arena.states().iter().enumerate() {
        for (t, p) in &st.actions[profile.choice(s)].successors {
            if p.is_zero() {
                continue;
            }
            let entry = a[(s, *t)].clone() - lambda[s].clone() * F::from_rational(p);
            a[(s, *t)] = entry;
        }
        v.push((F::one() - lambda[s].clone()) * F::from_rational(&st.reward));
    }
    Ok(solve_linear(&a, &v)?)
}

/// Exact values under constant discounts.
pub fn eval_profile_exact(
    arena: &Arena,
    discounts: &DiscountMap,
    profile: &StrategyProfile,
) -> Result<Vec<Rational>, DiscountedError> {
    discounts.for_arena(arena)?;
    eval_profile_discounted(arena, discounts.as_slice(), profile)
}

/// The one-step operator
/// `F(x)[s] = opt_a [(1 - λ(s)) r(s) + λ(s) Σ_s' δ(s, a)(s') x[s']]`
/// with `opt = max` at Max states and `min` at Min states.
#[derive(Debug, Clone)]
pub struct ShapleyOperator<T> {
    controllers: Vec<Player>,
    stage: Vec<T>,
    /// Per state, per action: `(successor, λ(s) p)`.
    moves: Vec<Vec<Vec<(usize, T)>>>,
    lambda_max: T,
}

impl<T: Real> ShapleyOperator<T> {
    pub fn new(arena: &Arena, discounts: &DiscountMap) -> Result<Self, DiscountedError> {
        discounts.for_arena(arena)?;
        let mut stage = Vec::with_capacity(arena.len());
        let mut moves = Vec::with_capacity(arena.len());
        for (s, st) in arena.states().iter().enumerate() {
            let l = discounts.get(s);
            stage.push(to_real::<T>(&((Rational::one() - l) * &st.reward)));
            moves.push(
                st.actions
                    .iter()
                    .map(|a| {
                        a.successors
                            .iter()
                            .filter(|(_, p)| !p.is_zero())
                            .map(|(t, p)| (*t, to_real::<T>(&(l * p))))
                            .collect()
                    })
                    .collect(),
            );
        }
        Ok(ShapleyOperator {
            controllers: arena.states().iter().map(|s| s.controller).collect(),
            stage,
            moves,
            lambda_max: to_real(&discounts.max()),
        })
    }

    pub fn lambda_max(&self) -> T {
        self.lambda_max
    }

    fn q_value(&self, s: usize, a: usize, x: &[T]) -> T {
        self.moves[s][a]
            .iter()
            .fold(self.stage[s], |acc, &(t, w)| acc + w * x[t])
    }

    /// Best action index at `s` against `x`; ties go to the first action.
    fn best(&self, s: usize, x: &[T]) -> (usize, T) {
        let mut best = (0, self.q_value(s, 0, x));
        for a in 1..self.moves[s].len() {
            let q = self.q_value(s, a, x);
            let better = match self.controllers[s] {
                Player::Max => q > best.1,
                Player::Min => q < best.1,
            };
            if better {
                best = (a, q);
            }
        }
        best
    }

    pub fn apply(&self, x: &[T]) -> Vec<T> {
        (0..self.stage.len()).map(|s| self.best(s, x).1).collect()
    }

    pub fn greedy(&self, x: &[T]) -> Vec<usize> {
        (0..self.stage.len()).map(|s| self.best(s, x).0).collect()
    }
}

pub fn sup_distance<T: Real>(x: &[T], y: &[T]) -> T {
    x.iter()
        .zip(y)
        .fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscountedSolveResult<T> {
    pub values: Vec<T>,
    pub profile: StrategyProfile,
    /// Sup-norm gap between the last two iterates.
    pub residual: T,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolveError<T: std::fmt::Debug> {
    #[error(transparent)]
    Input(#[from] DiscountedError),
    #[error(
        "value iteration did not reach the tolerance in {iterations} iterations (gap {gap:?})"
    )]
    NotConverged {
        iterations: usize,
        gap: T,
        last: Vec<T>,
    },
}

/// Value iteration from the reward vector.
///
/// Stops once the gap between iterates is at most
/// `tolerance * (1 - λmax) / λmax`, which bounds the distance of the
/// returned values to the true game values by `tolerance`.
pub fn solve_discounted<T: Real>(
    arena: &Arena,
    discounts: &DiscountMap,
    tolerance: T,
    max_iter: usize,
) -> Result<DiscountedSolveResult<T>, SolveError<T>> {
    let start: Vec<T> = arena.states().iter().map(|s| to_real(&s.reward)).collect();
    solve_discounted_from(arena, discounts, tolerance, max_iter, start)
}

/// [`solve_discounted`] with a caller-supplied starting vector.
pub fn solve_discounted_from<T: Real>(
    arena: &Arena,
    discounts: &DiscountMap,
    tolerance: T,
    max_iter: usize,
    start: Vec<T>,
) -> Result<DiscountedSolveResult<T>, SolveError<T>> {
    // Also rejects NaN.
    if tolerance.partial_cmp(&T::zero()) != Some(std::cmp::Ordering::Greater) {
        return Err(DiscountedError::Tolerance.into());
    }
    let op = ShapleyOperator::<T>::new(arena, discounts)?;
    assert_eq!(start.len(), arena.len());
    let lm = op.lambda_max();
    let threshold = if lm == T::zero() {
        T::infinity()
    } else {
        tolerance * (T::one() - lm) / lm
    };
    let mut x = start;
    let mut gap = T::infinity();
    for iteration in 1..=max_iter {
        let y = op.apply(&x);
        gap = sup_distance(&x, &y);
        x = y;
        if gap <= threshold {
            let profile = StrategyProfile::from_choices(arena, op.greedy(&x))
                .expect("greedy choices are in range");
            return Ok(DiscountedSolveResult {
                values: x,
                profile,
                residual: gap,
                iterations: iteration,
            });
        }
    }
    Err(SolveError::NotConverged {
        iterations: max_iter,
        gap,
        last: x,
    })
}

/// Replaces discounting by stopping: every action of `s` moves to its
/// original successors with probability scaled by `λ(s)` and to a fresh
/// absorbing copy `s*` (reward `r(s)`) with probability `1 - λ(s)`.
///
/// Original states keep their order and ids; the copies follow in the same
/// order. All weights and priorities of the result are 1.
pub fn star_transform(arena: &Arena, discounts: &DiscountMap) -> Result<Arena, DiscountedError> {
    discounts.for_arena(arena)?;
    let mut star_ids = Vec::with_capacity(arena.len());
    for st in arena.states() {
        let mut id = format!("{}*", st.id);
        while arena.index_of(&id).is_some() || star_ids.contains(&id) {
            id.push('*');
        }
        star_ids.push(id);
    }

    let mut b = Arena::builder();
    if let Some(d) = arena.description() {
        b = b.description(d);
    }
    for (s, st) in arena.states().iter().enumerate() {
        let l = discounts.get(s);
        b = b
            .state(&st.id, st.controller, &st.reward)
            .weight(1)
            .priority(1);
        for a in &st.actions {
            let mut to: Vec<(String, Rational)> = a
                .successors
                .iter()
                .map(|(t, p)| (arena.state(*t).id.clone(), l * p))
                .filter(|(_, p)| !p.is_zero())
                .collect();
            to.push((star_ids[s].clone(), Rational::one() - l));
            b = b.action_owned(&a.label, to);
        }
    }
    for (s, st) in arena.states().iter().enumerate() {
        b = b
            .state(&star_ids[s], st.controller, &st.reward)
            .weight(1)
            .priority(1)
            .action_owned("star", vec![(star_ids[s].clone(), Rational::one())]);
    }
    Ok(b.build()
        .expect("star transform preserves arena invariants"))
}

/// Extends a profile of `arena` to its star transform: the copies have a
/// single action.
pub fn extend_to_star(arena: &Arena, star: &Arena, profile: &StrategyProfile) -> StrategyProfile {
    let mut choices = profile.choices().to_vec();
    choices.resize(star.len(), 0);
    debug_assert_eq!(star.len(), 2 * arena.len());
    StrategyProfile::from_choices(star, choices).expect("star profile")
}

/// Nearest `f64` to an exact rational.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_rational_function, RationalFunction};

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn single(r: i64) -> Arena {
        Arena::builder()
            .state("s", Player::Max, r)
            .action("loop", [("s", 1)])
            .build()
            .unwrap()
    }

    fn two_state() -> Arena {
        Arena::builder()
            .state("sMax", Player::Max, 0)
            .priority(1)
            .action("top", [("sMax", 1)])
            .action("right", [("sMin", 1)])
            .state("sMin", Player::Min, 1)
            .priority(2)
            .action("left", [("sMax", 1)])
            .action("stay", [("sMin", 1)])
            .build()
            .unwrap()
    }

    #[test]
    fn payoff_of_short_prefix() {
        let a = single(5);
        let d = DiscountMap::uniform(1, q(1, 2)).unwrap();
        let play = a.play(&["s", "s", "s"], &["loop", "loop"]).unwrap();
        assert_eq!(discounted_payoff_of_play(&play, &a, &d).unwrap(), q(35, 8));
    }

    #[test]
    fn payoff_zero_rewards_and_zero_discount() {
        let a = single(0);
        let d = DiscountMap::uniform(1, q(1, 3)).unwrap();
        let play = a.play(&["s", "s"], &["loop"]).unwrap();
        assert!(discounted_payoff_of_play(&play, &a, &d).unwrap().is_zero());

        let a = single(7);
        let d = DiscountMap::uniform(1, q(0, 1)).unwrap();
        let one = a.play(&["s"], &[]).unwrap();
        let many = a
            .play(&["s", "s", "s", "s"], &["loop", "loop", "loop"])
            .unwrap();
        assert_eq!(discounted_payoff_of_play(&one, &a, &d).unwrap(), q(7, 1));
        assert_eq!(discounted_payoff_of_play(&many, &a, &d).unwrap(), q(7, 1));
    }

    #[test]
    fn discount_range_checked() {
        assert!(DiscountMap::new(vec![q(1, 1)]).is_err());
        assert!(DiscountMap::new(vec![q(-1, 2)]).is_err());
        assert!(DiscountMap::new(vec![q(0, 1)]).is_ok());
    }

    #[test]
    fn single_state_value_is_reward() {
        let a = single(3);
        let p = StrategyProfile::first(&a);
        for l in [q(0, 1), q(1, 2), q(99, 100)] {
            let d = DiscountMap::uniform(1, l).unwrap();
            assert_eq!(eval_profile_exact(&a, &d, &p).unwrap(), vec![q(3, 1)]);
        }
    }

    #[test]
    fn two_state_symbolic_values() {
        let a = two_state();
        let lam = vec![
            parse_rational_function("t").unwrap(),
            parse_rational_function("1-(1-t)^2").unwrap(),
        ];
        let p = StrategyProfile::from_labels(&a, [("sMax", "right"), ("sMin", "left")]).unwrap();
        let v = eval_profile_discounted(&a, &lam, &p).unwrap();
        // Oracle: x0 = t x1, x1 = (1-t)^2 + (2t - t^2) x0, solved by hand.
        let expected = parse_rational_function("t*(1-t)/(1+t-t^2)").unwrap();
        assert_eq!(v[0], expected);

        let p = StrategyProfile::from_labels(&a, [("sMax", "top"), ("sMin", "left")]).unwrap();
        let v = eval_profile_discounted(&a, &lam, &p).unwrap();
        assert_eq!(v[0], RationalFunction::zero());
    }

    #[test]
    fn value_iteration_single_state() {
        let a = single(5);
        let d = DiscountMap::uniform(1, q(1, 2)).unwrap();
        let r = solve_discounted::<f64>(&a, &d, 1e-12, 100).unwrap();
        assert_eq!(r.values, vec![5.0]);
        assert_eq!(r.residual, 0.0);
    }

    #[test]
    fn value_iteration_two_state_prefers_right() {
        let a = two_state();
        let d = DiscountMap::uniform(2, q(9, 10)).unwrap();
        let r = solve_discounted::<f64>(&a, &d, 1e-12, 10_000).unwrap();
        assert_eq!(a.state(0).actions[r.profile.choice(0)].label, "right");
        assert!(r.values[0] > 0.0);
        let exact = eval_profile_exact(&a, &d, &r.profile).unwrap();
        for (x, e) in r.values.iter().zip(&exact) {
            assert!((x - to_f64(e)).abs() <= 1e-9);
        }
    }

    #[test]
    fn value_iteration_in_single_precision() {
        let a = two_state();
        let d = DiscountMap::uniform(2, q(1, 2)).unwrap();
        let r = solve_discounted::<f32>(&a, &d, 1e-4, 1000).unwrap();
        assert_eq!(r.profile.choice(0), 1);
    }

    #[test]
    fn not_converged_carries_iterate() {
        let a = two_state();
        let d = DiscountMap::uniform(2, q(99, 100)).unwrap();
        match solve_discounted::<f64>(&a, &d, 1e-12, 3) {
            Err(SolveError::NotConverged {
                iterations, last, ..
            }) => {
                assert_eq!(iterations, 3);
                assert_eq!(last.len(), 2);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            solve_discounted::<f64>(&a, &d, 0.0, 3),
            Err(SolveError::Input(DiscountedError::Tolerance))
        ));
    }

    #[test]
    fn star_transform_shapes() {
        let a = single(4);
        let d = DiscountMap::uniform(1, q(1, 2)).unwrap();
        let s = star_transform(&a, &d).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.state(1).id, "s*");
        assert_eq!(
            s.state(0).actions[0].successors,
            vec![(0, q(1, 2)), (1, q(1, 2))]
        );
        assert_eq!(s.state(1).reward, q(4, 1));
        assert_eq!(s.state(1).actions[0].label, "star");

        let d0 = DiscountMap::uniform(1, q(0, 1)).unwrap();
        let s0 = star_transform(&a, &d0).unwrap();
        assert_eq!(s0.state(0).actions[0].successors, vec![(1, q(1, 1))]);
    }

    #[test]
    fn star_ids_avoid_collisions() {
        let a = Arena::builder()
            .state("s", Player::Max, 0)
            .action("x", [("s*", 1)])
            .state("s*", Player::Min, 1)
            .action("y", [("s", 1)])
            .build()
            .unwrap();
        let d = DiscountMap::uniform(2, q(1, 2)).unwrap();
        let s = star_transform(&a, &d).unwrap();
        let ids: Vec<_> = s.states().iter().map(|s| s.id.as_str()).collect();
        assert_eq!(ids, vec!["s", "s*", "s**", "s***"]);
    }
}
