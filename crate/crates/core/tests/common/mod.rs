//! Seeded random instances shared by the integration tests.
#![allow(dead_code)]

use pmpg::arena::{Arena, Player, StrategyProfile, WeightedPrioritySystem};
use pmpg::discounted::DiscountMap;
use pmpg::Rational;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub max_states: usize,
    pub max_actions: usize,
    pub max_priority: u32,
    /// All transitions have probability 1.
    pub deterministic: bool,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            max_states: 4,
            max_actions: 2,
            max_priority: 3,
            deterministic: false,
        }
    }
}

fn random_distribution(
    rng: &mut ChaCha8Rng,
    n: usize,
    deterministic: bool,
) -> Vec<(usize, Rational)> {
    let mut targets: Vec<usize> = (0..n).collect();
    targets.shuffle(rng);
    let k = if deterministic {
        1
    } else {
        rng.gen_range(1..=n.min(3))
    };
    let parts: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=4)).collect();
    let total: i64 = parts.iter().sum();
    targets[..k]
        .iter()
        .zip(parts)
        .map(|(&t, p)| (t, q(p, total)))
        .collect()
}

/// Random arena with rewards in {-2, -3/2, ..., 2}, weights in
/// {1/2, 1, 2, 3} and priorities in `1..=max_priority`.
pub fn random_arena(rng: &mut ChaCha8Rng, shape: Shape) -> Arena {
    let n = rng.gen_range(1..=shape.max_states);
    let ids: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let weights = [q(1, 2), q(1, 1), q(2, 1), q(3, 1)];
    let mut b = Arena::builder();
    for id in &ids {
        let player = if rng.gen_bool(0.5) {
            Player::Max
        } else {
            Player::Min
        };
        b = b
            .state(id, player, q(rng.gen_range(-4..=4), 2))
            .weight(weights.choose(rng).unwrap())
            .priority(rng.gen_range(1..=shape.max_priority));
        for a in 0..rng.gen_range(1..=shape.max_actions) {
            let to = random_distribution(rng, n, shape.deterministic)
                .into_iter()
                .map(|(t, p)| (ids[t].clone(), p))
                .collect();
            b = b.action_owned(&format!("a{a}"), to);
        }
    }
    b.build().expect("generated arena is valid")
}

pub fn random_profile(rng: &mut ChaCha8Rng, arena: &Arena) -> StrategyProfile {
    let choices = arena
        .states()
        .iter()
        .map(|s| rng.gen_range(0..s.actions.len()))
        .collect();
    StrategyProfile::from_choices(arena, choices).unwrap()
}

/// Constant discounts in `{4/16, 5/16, ..., 15/16}`.
pub fn random_discounts(rng: &mut ChaCha8Rng, n: usize) -> DiscountMap {
    DiscountMap::new((0..n).map(|_| q(rng.gen_range(4..=15), 16)).collect()).unwrap()
}

/// Weights `a/b` with `a, b` in `1..=6`, priorities in `1..=5`.
pub fn random_system(rng: &mut ChaCha8Rng, n: usize) -> WeightedPrioritySystem {
    WeightedPrioritySystem::new(
        (0..n)
            .map(|_| q(rng.gen_range(1..=6), rng.gen_range(1..=6)))
            .collect(),
        (0..n).map(|_| rng.gen_range(1..=5)).collect(),
    )
    .unwrap()
}

pub fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}
