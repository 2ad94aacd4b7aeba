use std::collections::BTreeMap;

use num_traits::Zero;
use serde_json::{Map, Value};

use super::{Arena, Player};
use crate::algebra::Matrix;
use crate::Rational;

/// Deterministic memoryless strategies for both players: one chosen action
/// index per state. Ordered lexicographically by state order, then action
/// order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StrategyProfile {
    choices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProfileError {
    #[error("profile covers {got} states, arena has {expected}")]
    Length { expected: usize, got: usize },
    #[error("state '{state}' has no action '{label}'")]
    UnknownAction { state: String, label: String },
    #[error("action index {index} out of range at state '{state}'")]
    ActionIndex { state: String, index: usize },
    #[error("unknown state '{0}'")]
    UnknownState(String),
    #[error("no choice given for state '{0}', which has several actions")]
    Missing(String),
    #[error("profile document must be a JSON object mapping state ids to action labels")]
    Shape,
}

impl StrategyProfile {
    pub fn from_choices(arena: &Arena, choices: Vec<usize>) -> Result<Self, ProfileError> {
        if choices.len() != arena.len() {
            return Err(ProfileError::Length {
                expected: arena.len(),
                got: choices.len(),
            });
        }
        for (s, &c) in choices.iter().enumerate() {
            if c >= arena.state(s).actions.len() {
                return Err(ProfileError::ActionIndex {
                    state: arena.state(s).id.clone(),
                    index: c,
                });
            }
        }
        Ok(StrategyProfile { choices })
    }

    /// First action everywhere.
    pub fn first(arena: &Arena) -> Self {
        StrategyProfile {
            choices: vec![0; arena.len()],
        }
    }

    /// From a map state id → action label. States with a single action may
    /// be omitted.
    pub fn from_labels<'a>(
        arena: &Arena,
        labels: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self, ProfileError> {
        let mut choices: Vec<Option<usize>> = vec![None; arena.len()];
        for (id, label) in labels {
            let s = arena
                .index_of(id)
                .ok_or_else(|| ProfileError::UnknownState(id.to_string()))?;
            let a = arena
                .action_index(s, label)
                .ok_or_else(|| ProfileError::UnknownAction {
                    state: id.to_string(),
                    label: label.to_string(),
                })?;
            choices[s] = Some(a);
        }
        let choices = choices
            .into_iter()
            .enumerate()
            .map(|(s, c)| match c {
                Some(c) => Ok(c),
                None if arena.state(s).actions.len() == 1 => Ok(0),
                None => Err(ProfileError::Missing(arena.state(s).id.clone())),
            })
            .collect::<Result<_, _>>()?;
        Ok(StrategyProfile { choices })
    }

    /// Accepts `{"state": "label", ...}` or `{"max": {...}, "min": {...}}`.
    pub fn from_json(arena: &Arena, value: &Value) -> Result<Self, ProfileError> {
        let obj = value.as_object().ok_or(ProfileError::Shape)?;
        let split = obj.keys().all(|k| k == "max" || k == "min")
            && obj.values().all(Value::is_object)
            && !obj.is_empty();
        let mut pairs = Vec::new();
        let mut collect = |m: &Map<String, Value>| -> Result<(), ProfileError> {
            for (k, v) in m {
                pairs.push((
                    k.clone(),
                    v.as_str().ok_or(ProfileError::Shape)?.to_string(),
                ));
            }
            Ok(())
        };
        if split {
            for v in obj.values() {
                collect(v.as_object().unwrap())?;
            }
        } else {
            collect(obj)?;
        }
        Self::from_labels(arena, pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())))
    }

    pub fn choices(&self) -> &[usize] {
        &self.choices
    }

    pub fn choice(&self, state: usize) -> usize {
        self.choices[state]
    }

    /// Copy with a different action at `state`.
    pub fn with_choice(&self, state: usize, action: usize) -> Self {
        let mut out = self.clone();
        out.choices[state] = action;
        out
    }

    /// Takes Max's choices from `max` and Min's from `min`.
    pub fn combine(arena: &Arena, max: &StrategyProfile, min: &StrategyProfile) -> Self {
        let choices = arena
            .states()
            .iter()
            .enumerate()
            .map(|(s, st)| match st.controller {
                Player::Max => max.choices[s],
                Player::Min => min.choices[s],
            })
            .collect();
        StrategyProfile { choices }
    }

    /// State id → action label for the states controlled by `player`.
    pub fn player_choices(&self, arena: &Arena, player: Player) -> Vec<(String, String)> {
        arena
            .states_of(player)
            .map(|s| {
                let st = arena.state(s);
                (st.id.clone(), st.actions[self.choices[s]].label.clone())
            })
            .collect()
    }

    pub fn labels(&self, arena: &Arena) -> BTreeMap<String, String> {
        arena
            .states()
            .iter()
            .zip(&self.choices)
            .map(|(st, &c)| (st.id.clone(), st.actions[c].label.clone()))
            .collect()
    }

    /// `{"max": {...}, "min": {...}}` in state order.
    pub fn to_json(&self, arena: &Arena) -> Value {
        let mut out = Map::new();
        for player in [Player::Max, Player::Min] {
            let m: Map<String, Value> = self
                .player_choices(arena, player)
                .into_iter()
                .map(|(k, v)| (k, Value::String(v)))
                .collect();
            out.insert(player.to_string(), Value::Object(m));
        }
        Value::Object(out)
    }
}

/// Number of deterministic memoryless profiles, `None` on overflow.
pub fn profile_count(arena: &Arena) -> Option<u128> {
    arena
        .states()
        .iter()
        .try_fold(1u128, |acc, s| acc.checked_mul(s.actions.len() as u128))
}

/// Odometer over the action choices of `positions`, most significant first.
struct Odometer {
    radices: Vec<usize>,
    positions: Vec<usize>,
    current: Option<Vec<usize>>,
}

impl Iterator for Odometer {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let cur = self.current.as_mut().unwrap();
        let mut advanced = false;
        for &p in self.positions.iter().rev() {
            cur[p] += 1;
            if cur[p] < self.radices[p] {
                advanced = true;
                break;
            }
            cur[p] = 0;
        }
        if !advanced {
            self.current = None;
        }
        Some(out)
    }
}

fn odometer(arena: &Arena, positions: Vec<usize>) -> Odometer {
    Odometer {
        radices: arena.states().iter().map(|s| s.actions.len()).collect(),
        positions,
        current: Some(vec![0; arena.len()]),
    }
}

/// Every profile exactly once, in lexicographic order.
pub fn enumerate_profiles(arena: &Arena) -> impl Iterator<Item = StrategyProfile> {
    odometer(arena, (0..arena.len()).collect()).map(|choices| StrategyProfile { choices })
}

/// Every strategy of `player`, in lexicographic order. The returned
/// profiles pick the first action at the opponent's states.
pub fn enumerate_player_strategies(
    arena: &Arena,
    player: Player,
) -> impl Iterator<Item = StrategyProfile> {
    odometer(arena, arena.states_of(player).collect()).map(|choices| StrategyProfile { choices })
}

/// Transition matrix of the Markov chain obtained by fixing `profile`.
pub fn induced_chain(arena: &Arena, profile: &StrategyProfile) -> Matrix<Rational> {
    let n = arena.len();
    let mut m = Matrix::zeros(n, n);
    for (s, st) in arena.states().iter().enumerate() {
        for (t, p) in &st.actions[profile.choice(s)].successors {
            if !p.is_zero() {
                m[(s, *t)] += p;
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn two_cycle() -> Arena {
        Arena::builder()
            .state("sMax", Player::Max, 0)
            .action("top", [("sMax", 1)])
            .action("right", [("sMin", 1)])
            .state("sMin", Player::Min, 1)
            .action("left", [("sMax", 1)])
            .action("stay", [("sMin", 1)])
            .build()
            .unwrap()
    }

    #[test]
    fn counts_and_order() {
        let a = two_cycle();
        let all: Vec<_> = enumerate_profiles(&a).collect();
        assert_eq!(all.len(), 4);
        assert_eq!(profile_count(&a), Some(4));
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(all[1].choices(), &[0, 1]);

        let three = Arena::builder()
            .state("a", Player::Max, 0)
            .action("x", [("a", 1)])
            .action("y", [("b", 1)])
            .state("b", Player::Max, 0)
            .action("x", [("b", 1)])
            .action("y", [("c", 1)])
            .state("c", Player::Max, 0)
            .action("x", [("c", 1)])
            .action("y", [("a", 1)])
            .build()
            .unwrap();
        assert_eq!(enumerate_profiles(&three).count(), 8);
        assert_eq!(enumerate_player_strategies(&three, Player::Max).count(), 8);
        assert_eq!(enumerate_player_strategies(&three, Player::Min).count(), 1);
    }

    #[test]
    fn single_state_single_profile() {
        let a = Arena::builder()
            .state("s", Player::Min, 0)
            .action("loop", [("s", 1)])
            .build()
            .unwrap();
        assert_eq!(enumerate_profiles(&a).count(), 1);
        let m = induced_chain(&a, &StrategyProfile::first(&a));
        assert_eq!(m[(0, 0)], Rational::one());
    }

    #[test]
    fn induced_chain_reads_chosen_actions() {
        let a = two_cycle();
        let p = StrategyProfile::from_labels(&a, [("sMax", "right"), ("sMin", "left")]).unwrap();
        let m = induced_chain(&a, &p);
        assert_eq!(m[(0, 1)], Rational::one());
        assert_eq!(m[(1, 0)], Rational::one());
        assert!(m[(0, 0)].is_zero() && m[(1, 1)].is_zero());

        let p = StrategyProfile::from_labels(&a, [("sMax", "top"), ("sMin", "left")]).unwrap();
        let m = induced_chain(&a, &p);
        assert_eq!(m[(0, 0)], Rational::one());
        assert_eq!(m[(1, 0)], Rational::one());
    }

    #[test]
    fn json_forms() {
        let a = two_cycle();
        let flat = serde_json::json!({"sMax": "right", "sMin": "left"});
        let split = serde_json::json!({"max": {"sMax": "right"}, "min": {"sMin": "left"}});
        let p = StrategyProfile::from_json(&a, &flat).unwrap();
        assert_eq!(StrategyProfile::from_json(&a, &split).unwrap(), p);
        assert_eq!(p.to_json(&a), split);
        assert!(StrategyProfile::from_json(&a, &serde_json::json!({"sMax": "right"})).is_err());
        assert!(
            StrategyProfile::from_json(&a, &serde_json::json!({"sMax": "up", "sMin": "left"}))
                .is_err()
        );
    }

    #[test]
    fn combine_takes_each_players_part() {
        let a = two_cycle();
        let max = StrategyProfile::from_choices(&a, vec![1, 0]).unwrap();
        let min = StrategyProfile::from_choices(&a, vec![0, 1]).unwrap();
        assert_eq!(StrategyProfile::combine(&a, &max, &min).choices(), &[1, 1]);
        assert!(StrategyProfile::from_choices(&a, vec![2, 0]).is_err());
    }
}
