//! On-disk JSON form of an arena.
//!
//! ```json
//! {"states": [
//!   {"id": "s", "controller": "max", "reward": "1/2", "weight": "1", "priority": 2,
//!    "discount": "1-(1-t)^2",
//!    "actions": [{"label": "a", "to": [{"state": "s", "prob": "1"}]}]}
//! ]}
//! ```
//!
//! Rationals are strings `"p/q"` or `"n"`; `discount` is a rational
//! function of `t`. `weight`, `priority` and `discount` are optional.

use serde::{Deserialize, Serialize};

use super::Player;

#[derive(Debug, Default, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArenaDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub states: Vec<StateDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateDocument {
    pub id: String,
    pub controller: Player,
    pub reward: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub priority: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discount: Option<String>,
    pub actions: Vec<ActionDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionDocument {
    pub label: String,
    pub to: Vec<SuccessorDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuccessorDocument {
    pub state: String,
    pub prob: String,
}
