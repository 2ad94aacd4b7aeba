//! Game arenas: states owned by Max or Min, per-state actions with exact
//! transition distributions, rewards, and optional weight/priority/discount
//! annotations.

mod document;
mod profile;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{parse_rational_function, ExprError, RationalFunction};
use crate::Rational;

pub use document::{ActionDocument, ArenaDocument, StateDocument, SuccessorDocument};
pub use profile::{
    enumerate_player_strategies, enumerate_profiles, induced_chain, profile_count, ProfileError,
    StrategyProfile,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Max,
    Min,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Max => Player::Min,
            Player::Min => Player::Max,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Max => "max",
            Player::Min => "min",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Action {
    pub label: String,
    /// `(state index, probability)` in document order.
    pub successors: Vec<(usize, Rational)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub id: String,
    pub controller: Player,
    pub reward: Rational,
    pub actions: Vec<Action>,
    pub weight: Option<Rational>,
    pub priority: Option<u32>,
    pub discount: Option<RationalFunction>,
}

/// A validated arena. Immutable; state and action order follow the document.
#[derive(Debug, Clone, PartialEq)]
pub struct Arena {
    description: Option<String>,
    states: Vec<State>,
    index: HashMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ArenaError {
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("arena has no states")]
    Empty,
    #[error("{location}: duplicate state id '{id}'")]
    DuplicateState { id: String, location: String },
    #[error("{location}: duplicate action label '{label}' in state '{state}'")]
    DuplicateAction {
        state: String,
        label: String,
        location: String,
    },
    #[error("{location}: state '{state}' has no actions")]
    EmptyActions { state: String, location: String },
    #[error(
        "{location}: successor '{target}' of action '{action}' in state '{state}' does not exist"
    )]
    DanglingSuccessor {
        state: String,
        action: String,
        target: String,
        location: String,
    },
    #[error("{location}: negative probability {prob} in action '{action}' of state '{state}'")]
    NegativeProbability {
        state: String,
        action: String,
        prob: Rational,
        location: String,
    },
    #[error("{location}: probabilities sum to {sum} ≠ 1 in action '{action}' of state '{state}'")]
    ProbabilitySum {
        state: String,
        action: String,
        sum: Rational,
        location: String,
    },
    #[error("{location}: '{text}' is not a rational number")]
    BadNumber { location: String, text: String },
    #[error("{location}: weight must be positive, got {value}")]
    NonPositiveWeight { location: String, value: Rational },
    #[error("{location}: priority must be a positive integer, got {value}")]
    BadPriority { location: String, value: i64 },
    #[error("{location}: bad discount expression: {source}")]
    BadDiscount {
        location: String,
        #[source]
        source: ExprError,
    },
    #[error("state '{state}' has no '{field}' annotation")]
    MissingAnnotation { state: String, field: &'static str },
}

fn parse_rational(text: &str, location: impl FnOnce() -> String) -> Result<Rational, ArenaError> {
    Rational::from_str(text.trim()).map_err(|_| ArenaError::BadNumber {
        location: location(),
        text: text.to_string(),
    })
}

/// Checks every invariant of the document and resolves successor ids.
pub fn validate(doc: &ArenaDocument) -> Result<Arena, ArenaError> {
    if doc.states.is_empty() {
        return Err(ArenaError::Empty);
    }
    let mut index = HashMap::with_capacity(doc.states.len());
    for (i, s) in doc.states.iter().enumerate() {
        if index.insert(s.id.clone(), i).is_some() {
            return Err(ArenaError::DuplicateState {
                id: s.id.clone(),
                location: format!("states[{i}].id"),
            });
        }
    }

    let mut states = Vec::with_capacity(doc.states.len());
    for (i, sd) in doc.states.iter().enumerate() {
        let reward = parse_rational(&sd.reward, || format!("states[{i}].reward"))?;
        let weight = match &sd.weight {
            None => None,
            Some(w) => {
                let value = parse_rational(w, || format!("states[{i}].weight"))?;
                if !value.is_positive() {
                    return Err(ArenaError::NonPositiveWeight {
                        location: format!("states[{i}].weight"),
                        value,
                    });
                }
                Some(value)
            }
        };
        let priority = match sd.priority {
            None => None,
            Some(p) => Some(u32::try_from(p).ok().filter(|&p| p >= 1).ok_or_else(|| {
                ArenaError::BadPriority {
                    location: format!("states[{i}].priority"),
                    value: p,
                }
            })?),
        };
        let discount =
            match &sd.discount {
                None => None,
                Some(text) => Some(parse_rational_function(text).map_err(|source| {
                    ArenaError::BadDiscount {
                        location: format!("states[{i}].discount"),
                        source,
                    }
                })?),
            };
        if sd.actions.is_empty() {
            return Err(ArenaError::EmptyActions {
                state: sd.id.clone(),
                location: format!("states[{i}].actions"),
            });
        }
        let mut labels = HashSet::new();
        let mut actions = Vec::with_capacity(sd.actions.len());
        for (j, ad) in sd.actions.iter().enumerate() {
            if !labels.insert(ad.label.as_str()) {
                return Err(ArenaError::DuplicateAction {
                    state: sd.id.clone(),
                    label: ad.label.clone(),
                    location: format!("states[{i}].actions[{j}].label"),
                });
            }
            let mut successors = Vec::with_capacity(ad.to.len());
            let mut sum = Rational::zero();
            for (k, succ) in ad.to.iter().enumerate() {
                let loc = || format!("states[{i}].actions[{j}].to[{k}]");
                let target =
                    *index
                        .get(&succ.state)
                        .ok_or_else(|| ArenaError::DanglingSuccessor {
                            state: sd.id.clone(),
                            action: ad.label.clone(),
                            target: succ.state.clone(),
                            location: loc() + ".state",
                        })?;
                let prob = parse_rational(&succ.prob, || loc() + ".prob")?;
                if prob.is_negative() {
                    return Err(ArenaError::NegativeProbability {
                        state: sd.id.clone(),
                        action: ad.label.clone(),
                        prob,
                        location: loc() + ".prob",
                    });
                }
                sum += &prob;
                successors.push((target, prob));
            }
            if !sum.is_one() {
                return Err(ArenaError::ProbabilitySum {
                    state: sd.id.clone(),
                    action: ad.label.clone(),
                    sum,
                    location: format!("states[{i}].actions[{j}].to"),
                });
            }
            actions.push(Action {
                label: ad.label.clone(),
                successors,
            });
        }
        states.push(State {
            id: sd.id.clone(),
            controller: sd.controller,
            reward,
            actions,
            weight,
            priority,
            discount,
        });
    }
    Ok(Arena {
        description: doc.description.clone(),
        states,
        index,
    })
}

impl Arena {
    pub fn from_json(text: &str) -> Result<Arena, ArenaError> {
        let doc: ArenaDocument = serde_json::from_str(text).map_err(|e| ArenaError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        validate(&doc)
    }

    pub fn builder() -> ArenaBuilder {
        ArenaBuilder::default()
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &State {
        &self.states[i]
    }

    pub fn description(&self) -> Option<&str> {
        self.description.as_deref()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn action_index(&self, state: usize, label: &str) -> Option<usize> {
        self.states[state]
            .actions
            .iter()
            .position(|a| a.label == label)
    }

    pub fn states_of(&self, player: Player) -> impl Iterator<Item = usize> + '_ {
        self.states
            .iter()
            .enumerate()
            .filter(move |(_, s)| s.controller == player)
            .map(|(i, _)| i)
    }

    pub fn rewards(&self) -> Vec<Rational> {
        self.states.iter().map(|s| s.reward.clone()).collect()
    }

    /// Same arena with the reward map replaced.
    pub fn with_rewards(&self, rewards: &[Rational]) -> Arena {
        assert_eq!(rewards.len(), self.len());
        let mut out = self.clone();
        for (s, r) in out.states.iter_mut().zip(rewards) {
            s.reward = r.clone();
        }
        out
    }

    /// Weighted priority system from the annotations. Every state needs a
    /// priority; a missing weight defaults to 1.
    pub fn priority_system(&self) -> Result<WeightedPrioritySystem, ArenaError> {
        let mut weights = Vec::with_capacity(self.len());
        let mut priorities = Vec::with_capacity(self.len());
        for s in &self.states {
            let p = s.priority.ok_or_else(|| ArenaError::MissingAnnotation {
                state: s.id.clone(),
                field: "priority",
            })?;
            priorities.push(p);
            weights.push(s.weight.clone().unwrap_or_else(Rational::one));
        }
        Ok(WeightedPrioritySystem::new(weights, priorities).expect("validated annotations"))
    }

    /// Per-state discount functions, if every state carries one.
    pub fn discount_functions(&self) -> Result<Vec<RationalFunction>, ArenaError> {
        self.states
            .iter()
            .map(|s| {
                s.discount
                    .clone()
                    .ok_or_else(|| ArenaError::MissingAnnotation {
                        state: s.id.clone(),
                        field: "discount",
                    })
            })
            .collect()
    }

    pub fn has_discounts(&self) -> bool {
        self.states.iter().all(|s| s.discount.is_some())
    }

    pub fn to_document(&self) -> ArenaDocument {
        ArenaDocument {
            description: self.description.clone(),
            states: self
                .states
                .iter()
                .map(|s| StateDocument {
                    id: s.id.clone(),
                    controller: s.controller,
                    reward: s.reward.to_string(),
                    weight: s.weight.as_ref().map(ToString::to_string),
                    priority: s.priority.map(i64::from),
                    discount: s.discount.as_ref().map(ToString::to_string),
                    actions: s
                        .actions
                        .iter()
                        .map(|a| ActionDocument {
                            label: a.label.clone(),
                            to: a
                                .successors
                                .iter()
                                .map(|(t, p)| SuccessorDocument {
                                    state: self.states[*t].id.clone(),
                                    prob: p.to_string(),
                                })
                                .collect(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("serializable document")
    }

    /// Checks that `play` follows the arena: every action exists at its
    /// state and every step has positive probability.
    pub fn check_play(&self, play: &Play) -> Result<(), PlayError> {
        let n = play.states.len();
        if n == 0 {
            return Err(PlayError::Empty);
        }
        if play.actions.len() + 1 != n && play.actions.len() != n {
            return Err(PlayError::Length {
                states: n,
                actions: play.actions.len(),
            });
        }
        for (i, &s) in play.states.iter().enumerate() {
            if s >= self.len() {
                return Err(PlayError::UnknownState { step: i });
            }
            let Some(&a) = play.actions.get(i) else {
                continue;
            };
            let Some(action) = self.states[s].actions.get(a) else {
                return Err(PlayError::UnknownAction { step: i });
            };
            if let Some(&next) = play.states.get(i + 1) {
                let p: Rational = action
                    .successors
                    .iter()
                    .filter(|(t, _)| *t == next)
                    .map(|(_, p)| p.clone())
                    .sum();
                if !p.is_positive() {
                    return Err(PlayError::ImpossibleStep { step: i });
                }
            }
        }
        Ok(())
    }

    /// Builds a play from state ids and action labels.
    pub fn play(&self, states: &[&str], actions: &[&str]) -> Result<Play, PlayError> {
        let st = states
            .iter()
            .enumerate()
            .map(|(i, id)| self.index_of(id).ok_or(PlayError::UnknownState { step: i }))
            .collect::<Result<Vec<_>, _>>()?;
        let ac = actions
            .iter()
            .enumerate()
            .map(|(i, label)| {
                st.get(i)
                    .and_then(|&s| self.action_index(s, label))
                    .ok_or(PlayError::UnknownAction { step: i })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let play = Play {
            states: st,
            actions: ac,
        };
        self.check_play(&play)?;
        Ok(play)
    }
}

/// A finite play prefix `s0 a0 s1 a1 ...`; `actions` has one entry per
/// transition taken and may also carry the action chosen at the last state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Play {
    pub states: Vec<usize>,
    pub actions: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlayError {
    #[error("empty play")]
    Empty,
    #[error("play has {states} states but {actions} actions")]
    Length { states: usize, actions: usize },
    #[error("unknown state at step {step}")]
    UnknownState { step: usize },
    #[error("unknown action at step {step}")]
    UnknownAction { step: usize },
    #[error("step {step} has probability zero")]
    ImpossibleStep { step: usize },
}

/// Per-state weights `w(s) > 0` and priorities `π(s) ≥ 1`, indexed like
/// the arena's states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedPrioritySystem {
    weights: Vec<Rational>,
    priorities: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SystemError {
    #[error("{weights} weights but {priorities} priorities")]
    Length { weights: usize, priorities: usize },
    #[error("weight of state {state} is not positive")]
    Weight { state: usize },
    #[error("priority of state {state} is zero")]
    Priority { state: usize },
    #[error("system covers {got} states, arena has {expected}")]
    ArenaSize { expected: usize, got: usize },
}

impl WeightedPrioritySystem {
    pub fn new(weights: Vec<Rational>, priorities: Vec<u32>) -> Result<Self, SystemError> {
        if weights.len() != priorities.len() {
            return Err(SystemError::Length {
                weights: weights.len(),
                priorities: priorities.len(),
            });
        }
        if let Some(state) = weights.iter().position(|w| !w.is_positive()) {
            return Err(SystemError::Weight { state });
        }
        if let Some(state) = priorities.iter().position(|&p| p == 0) {
            return Err(SystemError::Priority { state });
        }
        Ok(WeightedPrioritySystem {
            weights,
            priorities,
        })
    }

    /// All weights 1, all priorities 1: plain mean payoff.
    pub fn uniform(n: usize) -> Self {
        WeightedPrioritySystem {
            weights: vec![Rational::one(); n],
            priorities: vec![1; n],
        }
    }

    pub fn check_arena(&self, arena: &Arena) -> Result<(), SystemError> {
        if self.len() != arena.len() {
            return Err(SystemError::ArenaSize {
                expected: arena.len(),
                got: self.len(),
            });
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight(&self, s: usize) -> &Rational {
        &self.weights[s]
    }

    pub fn priority(&self, s: usize) -> u32 {
        self.priorities[s]
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn priorities(&self) -> &[u32] {
        &self.priorities
    }
}

/// Programmatic construction that goes through the same validation as
/// documents read from disk.
#[derive(Debug, Default, Clone)]
pub struct ArenaBuilder {
    doc: ArenaDocument,
}

impl ArenaBuilder {
    pub fn state(mut self, id: &str, controller: Player, reward: impl fmt::Display) -> Self {
        self.doc.states.push(StateDocument {
            id: id.to_string(),
            controller,
            reward: reward.to_string(),
            weight: None,
            priority: None,
            discount: None,
            actions: Vec::new(),
        });
        self
    }

    fn last(&mut self) -> &mut StateDocument {
        self.doc
            .states
            .last_mut()
            .expect("state() before annotations")
    }

    pub fn weight(mut self, w: impl fmt::Display) -> Self {
        self.last().weight = Some(w.to_string());
        self
    }

    pub fn priority(mut self, p: u32) -> Self {
        self.last().priority = Some(i64::from(p));
        self
    }

    pub fn discount(mut self, expr: &str) -> Self {
        self.last().discount = Some(expr.to_string());
        self
    }

    /// Adds an action to the most recent state.
    pub fn action<P: fmt::Display>(
        mut self,
        label: &str,
        to: impl IntoIterator<Item = (&'static str, P)>,
    ) -> Self {
        let to = to
            .into_iter()
            .map(|(state, p)| SuccessorDocument {
                state: state.to_string(),
                prob: p.to_string(),
            })
            .collect();
        self.last().actions.push(ActionDocument {
            label: label.to_string(),
            to,
        });
        self
    }

    /// Like [`ArenaBuilder::action`] with owned state ids.
    pub fn action_owned(mut self, label: &str, to: Vec<(String, Rational)>) -> Self {
        let to = to
            .into_iter()
            .map(|(state, p)| SuccessorDocument {
                state,
                prob: p.to_string(),
            })
            .collect();
        self.last().actions.push(ActionDocument {
            label: label.to_string(),
            to,
        });
        self
    }

    pub fn description(mut self, text: &str) -> Self {
        self.doc.description = Some(text.to_string());
        self
    }

    pub fn document(&self) -> &ArenaDocument {
        &self.doc
    }

    pub fn build(self) -> Result<Arena, ArenaError> {
        validate(&self.doc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn minimal_arena_is_valid() {
        let a = Arena::builder()
            .state("s", Player::Max, 0)
            .action("loop", [("s", 1)])
            .build()
            .unwrap();
        assert_eq!(a.len(), 1);
        assert_eq!(a.state(0).actions[0].successors, vec![(0, q(1, 1))]);
    }

    #[test]
    fn probability_sum_error_names_sum() {
        let err = Arena::builder()
            .state("q", Player::Max, 0)
            .action("a", [("q", "1/2"), ("r", "1/3")])
            .state("r", Player::Min, 0)
            .action("a", [("r", "1")])
            .build()
            .unwrap_err();
        match &err {
            ArenaError::ProbabilitySum { sum, location, .. } => {
                assert_eq!(*sum, q(5, 6));
                assert_eq!(location, "states[0].actions[0].to");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(err.to_string().contains("probabilities sum to 5/6 ≠ 1"));
    }

    #[test]
    fn structural_errors() {
        let dup = Arena::builder()
            .state("s", Player::Max, 0)
            .action("a", [("s", 1)])
            .state("s", Player::Min, 0)
            .action("a", [("s", 1)])
            .build();
        assert!(matches!(dup, Err(ArenaError::DuplicateState { .. })));

        let dangling = Arena::builder()
            .state("s", Player::Max, 0)
            .action("a", [("nowhere", 1)])
            .build();
        assert!(matches!(
            dangling,
            Err(ArenaError::DanglingSuccessor { .. })
        ));

        let empty = Arena::builder().state("s", Player::Max, 0).build();
        assert!(matches!(empty, Err(ArenaError::EmptyActions { .. })));

        let neg = Arena::builder()
            .state("s", Player::Max, 0)
            .action("a", [("s", "3/2"), ("s", "-1/2")])
            .build();
        assert!(matches!(neg, Err(ArenaError::NegativeProbability { .. })));

        let dup_action = Arena::builder()
            .state("s", Player::Max, 0)
            .action("a", [("s", 1)])
            .action("a", [("s", 1)])
            .build();
        assert!(matches!(
            dup_action,
            Err(ArenaError::DuplicateAction { .. })
        ));

        assert_eq!(validate(&ArenaDocument::default()), Err(ArenaError::Empty));
    }

    #[test]
    fn bad_numbers_and_annotations() {
        let bad = Arena::builder()
            .state("s", Player::Max, "x/2")
            .action("a", [("s", 1)])
            .build();
        assert!(matches!(bad, Err(ArenaError::BadNumber { .. })));
        let zero_den = Arena::builder()
            .state("s", Player::Max, "1/0")
            .action("a", [("s", 1)])
            .build();
        assert!(matches!(zero_den, Err(ArenaError::BadNumber { .. })));
        let w = Arena::builder()
            .state("s", Player::Max, 0)
            .weight(0)
            .action("a", [("s", 1)])
            .build();
        assert!(matches!(w, Err(ArenaError::NonPositiveWeight { .. })));
        let mut doc = Arena::builder()
            .state("s", Player::Max, 0)
            .action("a", [("s", 1)])
            .document()
            .clone();
        doc.states[0].priority = Some(0);
        assert!(matches!(
            validate(&doc),
            Err(ArenaError::BadPriority { .. })
        ));
        let d = Arena::builder()
            .state("s", Player::Max, 0)
            .discount("1-(1-t")
            .action("a", [("s", 1)])
            .build();
        assert!(matches!(d, Err(ArenaError::BadDiscount { .. })));
    }

    #[test]
    fn json_errors_have_position() {
        let err = Arena::from_json("{\"states\": [ {\"id\": 3} ]}").unwrap_err();
        assert!(matches!(err, ArenaError::Json { line: 1, .. }));
        let unknown = Arena::from_json(r#"{"states": [], "extra": 1}"#).unwrap_err();
        assert!(matches!(unknown, ArenaError::Json { .. }));
    }

    #[test]
    fn play_checks() {
        let a = Arena::builder()
            .state("a", Player::Max, 0)
            .action("go", [("b", 1)])
            .state("b", Player::Min, 0)
            .action("back", [("a", 1)])
            .build()
            .unwrap();
        assert!(a.play(&["a", "b", "a"], &["go", "back"]).is_ok());
        assert_eq!(
            a.play(&["a", "a"], &["go"]),
            Err(PlayError::ImpossibleStep { step: 0 })
        );
        assert!(matches!(
            a.play(&["a", "b"], &["back"]),
            Err(PlayError::UnknownAction { step: 0 })
        ));
    }

    #[test]
    fn priority_system_defaults_weight() {
        let a = Arena::builder()
            .state("s", Player::Max, 0)
            .priority(2)
            .action("a", [("s", 1)])
            .build()
            .unwrap();
        let sys = a.priority_system().unwrap();
        assert_eq!(sys.weight(0), &q(1, 1));
        assert_eq!(sys.priority(0), 2);
        let none = Arena::builder()
            .state("s", Player::Max, 0)
            .action("a", [("s", 1)])
            .build()
            .unwrap();
        assert!(none.priority_system().is_err());
    }

    #[test]
    fn system_validation() {
        assert!(WeightedPrioritySystem::new(vec![q(1, 1)], vec![1, 2]).is_err());
        assert!(WeightedPrioritySystem::new(vec![q(-1, 1)], vec![1]).is_err());
        assert!(WeightedPrioritySystem::new(vec![q(1, 1)], vec![0]).is_err());
    }
}
