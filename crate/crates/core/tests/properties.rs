mod common;

use std::collections::HashSet;

use common::{q, random_arena, random_discounts, random_profile, random_system, rng, Shape};
use num_traits::{One, Signed, Zero};
use pmpg::algebra::sturm::count_roots_half_open_right;
use pmpg::algebra::{compare_near_one, solve_linear, Matrix, Polynomial};
use pmpg::arena::{
    enumerate_profiles, induced_chain, profile_count, Arena, WeightedPrioritySystem,
};
use pmpg::blackwell::{
    blackwell_search_exact, blackwell_search_hybrid, canonical_parametrization, derive_system,
    Budget, DiscountParametrization, HybridOptions,
};
use pmpg::discounted::{eval_profile_discounted, eval_profile_exact, to_f64, DiscountMap};
use pmpg::priority_mp::{eval_profile_pmp, solve_pmp_bruteforce, DEFAULT_BUDGET};
use pmpg::sim::{estimate_discounted, estimate_pmp, Estimator, SimConfig};
use pmpg::{RatFn, Rational};
use proptest::prelude::*;
use rand::Rng;

fn small_poly(coeffs: &[i64]) -> Polynomial {
    Polynomial::from_ints(coeffs)
}

fn ratfn(num: &[i64], den: &[i64]) -> Option<RatFn> {
    RatFn::new(small_poly(num), small_poly(den))
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-4i64..=4, 1..=4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sign_near_one_is_multiplicative(a in coeffs(), b in coeffs(), c in coeffs(), d in coeffs()) {
        let (Some(f), Some(g)) = (ratfn(&a, &b), ratfn(&c, &d)) else { return Ok(()); };
        let (sf, sg, sfg) = (f.sign_near_one(), g.sign_near_one(), (&f * &g).sign_near_one());
        prop_assert_eq!(sfg.sign, sf.sign * sg.sign);
        if sfg.sign != 0 {
            prop_assert_eq!(sfg.vanishing_order, sf.vanishing_order + sg.vanishing_order);
        }
        prop_assert_eq!(compare_near_one(&f, &g), compare_near_one(&g, &f).reverse());
        prop_assert_eq!((-&f).sign_near_one().sign, -sf.sign);
    }

    #[test]
    fn sign_near_one_matches_evaluation(a in coeffs(), b in coeffs()) {
        let Some(f) = ratfn(&a, &b) else { return Ok(()); };
        let s = f.sign_near_one();
        if s.sign == 0 {
            prop_assert!(f.is_zero());
            return Ok(());
        }
        // Past the last root of num·den the sign is constant.
        let p = &f.num().clone() * &f.den().clone();
        let mut t = Rational::new(1.into(), 2.into());
        while count_roots_half_open_right(&p, &t, &Rational::one()) > 0 {
            t = (&t + Rational::one()) / Rational::from_integer(2.into());
        }
        let v = f.eval(&t).unwrap();
        prop_assert_eq!(if v.is_positive() { 1 } else { -1 }, s.sign);
    }

    #[test]
    fn gcd_is_idempotent_and_divides(a in coeffs(), b in coeffs()) {
        let (p, r) = (small_poly(&a), small_poly(&b));
        if p.is_zero() || r.is_zero() { return Ok(()); }
        let g = p.gcd(&r);
        prop_assert_eq!(g.gcd(&g), g.clone());
        prop_assert!(p.div_rem(&g).1.is_zero());
        prop_assert!(r.div_rem(&g).1.is_zero());
        prop_assert_eq!(p.gcd(&p), p.monic());
    }

    #[test]
    fn rational_function_solve_agrees_with_numeric(seed in any::<u64>()) {
        let mut r = rng(seed);
        let arena = random_arena(&mut r, Shape::default());
        let profile = random_profile(&mut r, &arena);
        let system = random_system(&mut r, arena.len());
        let param = canonical_parametrization(&system).unwrap();
        let funcs = eval_profile_discounted(&arena, param.lambda(), &profile).unwrap();
        for j in 1..=5 {
            let t0 = Rational::one() - param.epsilon() * q(j, 6);
            let lambda: Vec<f64> = param.lambda().iter().map(|l| to_f64(&l.eval(&t0).unwrap())).collect();
            let numeric = eval_profile_discounted(&arena, &lambda, &profile).unwrap();
            for (f, x) in funcs.iter().zip(&numeric) {
                let exact = to_f64(&f.eval(&t0).unwrap());
                prop_assert!((exact - x).abs() <= 1e-9, "{} vs {}", exact, x);
            }
        }
    }

    #[test]
    fn arena_json_round_trips(seed in any::<u64>()) {
        let mut r = rng(seed);
        let arena = random_arena(&mut r, Shape::default());
        prop_assert_eq!(Arena::from_json(&arena.to_json()).unwrap(), arena);
    }

    #[test]
    fn profiles_are_distinct_and_counted(seed in any::<u64>()) {
        let mut r = rng(seed);
        let arena = random_arena(&mut r, Shape { max_actions: 3, ..Shape::default() });
        let all: Vec<_> = enumerate_profiles(&arena).collect();
        let distinct: HashSet<_> = all.iter().map(|p| p.choices().to_vec()).collect();
        prop_assert_eq!(distinct.len(), all.len());
        prop_assert_eq!(Some(all.len() as u128), profile_count(&arena));
        for p in &all {
            let m = induced_chain(&arena, p);
            for i in 0..m.rows() {
                prop_assert_eq!(m.row(i).iter().sum::<Rational>(), Rational::one());
            }
        }
    }

    #[test]
    fn pmp_is_scale_covariant(seed in any::<u64>(), a in 1i64..=5, b in -3i64..=3) {
        let mut r = rng(seed);
        let arena = random_arena(&mut r, Shape::default());
        let system = random_system(&mut r, arena.len());
        let (scale, shift) = (q(a, 2), q(b, 1));
        let moved: Vec<Rational> = arena.rewards().iter().map(|x| &scale * x + &shift).collect();
        let other = arena.with_rewards(&moved);
        let base = solve_pmp_bruteforce(&arena, &system, DEFAULT_BUDGET).unwrap();
        let scaled = solve_pmp_bruteforce(&other, &system, DEFAULT_BUDGET).unwrap();
        for (x, y) in base.values.iter().zip(&scaled.values) {
            prop_assert_eq!(&scale * x + &shift, y.clone());
        }
    }

    #[test]
    fn pmp_ignores_common_weight_factor_per_priority(seed in any::<u64>()) {
        let mut r = rng(seed);
        let arena = random_arena(&mut r, Shape::default());
        let system = random_system(&mut r, arena.len());
        let factors: Vec<Rational> = (0..=5).map(|_| q(r.gen_range(1..=7), r.gen_range(1..=7))).collect();
        let weights = (0..arena.len())
            .map(|s| system.weight(s) * &factors[system.priority(s) as usize])
            .collect();
        let rescaled = WeightedPrioritySystem::new(weights, system.priorities().to_vec()).unwrap();
        for p in enumerate_profiles(&arena) {
            prop_assert_eq!(
                eval_profile_pmp(&arena, &p, &system).unwrap(),
                eval_profile_pmp(&arena, &p, &rescaled).unwrap()
            );
        }
    }

    #[test]
    fn single_priority_is_mean_payoff(seed in any::<u64>()) {
        // With one priority and unit weights the payoff is the long-run
        // average reward. Oracle: the Abel limit of (1 - t)(I - tP)^{-1} r
        // at t = 1, which equals the Cesàro average for finite chains.
        let mut r = rng(seed);
        let arena = random_arena(&mut r, Shape::default());
        let n = arena.len();
        let system = WeightedPrioritySystem::uniform(n);
        let profile = random_profile(&mut r, &arena);
        let chain = induced_chain(&arena, &profile);
        let t = RatFn::t();
        let one_minus_t = &RatFn::one() - &t;
        let mut a = Matrix::<RatFn>::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let id = if i == j { RatFn::one() } else { RatFn::zero() };
                a[(i, j)] = &id - &(&t * &RatFn::constant(chain[(i, j)].clone()));
            }
        }
        let rhs: Vec<RatFn> = arena.rewards().into_iter().map(|x| &one_minus_t * &RatFn::constant(x)).collect();
        let resolvent = solve_linear(&a, &rhs).unwrap();
        let values = eval_profile_pmp(&arena, &profile, &system).unwrap();
        for (f, v) in resolvent.iter().zip(&values) {
            let limit = f.eval(&Rational::one()).expect("no pole at 1");
            prop_assert_eq!(&limit, v);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn derive_inverts_canonical(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=6);
        let system = random_system(&mut r, n);
        let param = canonical_parametrization(&system).unwrap();
        prop_assert_eq!(derive_system(&param).unwrap(), system);
    }

    #[test]
    fn blackwell_profile_is_a_saddle_close_to_one(seed in any::<u64>()) {
        let mut r = rng(seed);
        let arena = random_arena(&mut r, Shape { max_states: 3, ..Shape::default() });
        let system = random_system(&mut r, arena.len());
        let param = canonical_parametrization(&system).unwrap();
        let res = blackwell_search_exact(&arena, &param, &Budget::default()).unwrap();
        // Move t0 past every root of every deviation difference.
        let diffs: Vec<Polynomial> = res.certificate.iter().flat_map(|d| {
            let dev = eval_profile_discounted(&arena, param.lambda(), &d.profile).unwrap();
            dev.iter().zip(&res.value_functions).map(|(a, b)| {
                let g = a - b;
                g.num() * g.den()
            }).collect::<Vec<_>>()
        }).filter(|p| !p.is_zero()).collect();
        let mut t0 = Rational::one() - param.epsilon() / Rational::from_integer(2.into());
        while diffs.iter().any(|p| count_roots_half_open_right(p, &t0, &Rational::one()) > 0) {
            t0 = (&t0 + Rational::one()) / Rational::from_integer(2.into());
        }
        let discounts = param.at(&t0).unwrap();
        let values = eval_profile_exact(&arena, &discounts, &res.profile).unwrap();
        for d in &res.certificate {
            let dev = eval_profile_exact(&arena, &discounts, &d.profile).unwrap();
            let player = arena.state(d.state).controller;
            for (x, v) in dev.iter().zip(&values) {
                match player {
                    pmpg::arena::Player::Max => prop_assert!(x <= v),
                    pmpg::arena::Player::Min => prop_assert!(x >= v),
                }
            }
        }
    }

    #[test]
    fn blackwell_attains_priority_value(seed in any::<u64>()) {
        let mut r = rng(seed);
        let arena = random_arena(&mut r, Shape { max_states: 3, ..Shape::default() });
        let system = random_system(&mut r, arena.len());
        let param = canonical_parametrization(&system).unwrap();
        let bw = blackwell_search_exact(&arena, &param, &Budget::default()).unwrap();
        let pmp = solve_pmp_bruteforce(&arena, &system, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(eval_profile_pmp(&arena, &bw.profile, &system).unwrap(), pmp.values.clone());
        for (f, v) in bw.value_functions.iter().zip(&pmp.values) {
            prop_assert_eq!(f.eval(&Rational::one()), Some(v.clone()));
        }
        // Every profile's value functions tend to its own priority values.
        for p in enumerate_profiles(&arena) {
            let funcs = eval_profile_discounted(&arena, param.lambda(), &p).unwrap();
            let own = eval_profile_pmp(&arena, &p, &system).unwrap();
            for (f, v) in funcs.iter().zip(&own) {
                prop_assert!((f - &RatFn::constant(v.clone())).sign_near_one().tends_to_zero());
            }
        }
    }

    #[test]
    fn hybrid_matches_exact_values(seed in any::<u64>()) {
        let mut r = rng(seed);
        let arena = random_arena(&mut r, Shape { max_states: 3, max_actions: 3, ..Shape::default() });
        let system = random_system(&mut r, arena.len());
        let param = canonical_parametrization(&system).unwrap();
        let exact = blackwell_search_exact(&arena, &param, &Budget::default()).unwrap();
        let hybrid = blackwell_search_hybrid(&arena, &param, &HybridOptions::default(), &Budget::default()).unwrap();
        prop_assert_eq!(exact.value_functions, hybrid.value_functions);
    }

    #[test]
    fn explicit_parametrization_certifies_interval(seed in any::<u64>()) {
        let mut r = rng(seed);
        let system = random_system(&mut r, 3);
        let param = canonical_parametrization(&system).unwrap();
        let again = DiscountParametrization::new(param.lambda().to_vec()).unwrap();
        let t = Rational::one() - again.epsilon().clone();
        for l in again.lambda() {
            let v = l.eval(&t).unwrap();
            prop_assert!(!v.is_negative() && v < Rational::one());
        }
    }

    #[test]
    fn simulation_is_deterministic(seed in any::<u64>(), sim_seed in any::<u64>()) {
        let mut r = rng(seed);
        let arena = random_arena(&mut r, Shape::default());
        let profile = random_profile(&mut r, &arena);
        let discounts: DiscountMap = random_discounts(&mut r, arena.len());
        let system = random_system(&mut r, arena.len());
        let cfg = SimConfig::new(sim_seed, 3000, 200, Estimator::DiscountedStopping).unwrap();
        let a = estimate_discounted(&arena, &discounts, &profile, 0, &cfg).unwrap();
        prop_assert_eq!(a, estimate_discounted(&arena, &discounts, &profile, 0, &cfg).unwrap());
        let cfg = SimConfig::new(sim_seed, 2100, 50, Estimator::PmpTruncated).unwrap();
        let b = estimate_pmp(&arena, &system, &profile, 0, &cfg).unwrap();
        prop_assert_eq!(b, estimate_pmp(&arena, &system, &profile, 0, &cfg).unwrap());
    }
}
