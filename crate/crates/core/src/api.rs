//! Request and response bodies shared by the HTTP service and its client.

use serde::{Deserialize, Serialize};

use crate::game::{GameId, Split};
use crate::harness::{AgentKind, Episode, StepOutcome};
use crate::module::Route;
use crate::world::Observation;

fn yes() -> bool {
    true
}

fn default_seed() -> u64 {
    0
}

/// Starts a session on a split variation (`split` + `index`) or on a bare seed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewSession {
    pub game: GameId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<Split>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default = "yes")]
    pub modules: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SessionState {
    pub id: String,
    pub game: GameId,
    pub split: Split,
    pub index: Option<usize>,
    pub seed: u64,
    pub modules: bool,
    pub task: String,
    pub observation: Observation,
    pub valid_actions: Vec<String>,
    pub score: f64,
    pub done: bool,
    pub steps: u32,
}

impl SessionState {
    pub fn of(id: impl Into<String>, episode: &Episode) -> Self {
        let v = episode.variation();
        SessionState {
            id: id.into(),
            game: v.game,
            split: v.split,
            index: v.index,
            seed: v.seed,
            modules: episode.modules(),
            task: v.task_description.clone(),
            observation: episode.observation().clone(),
            valid_actions: episode.valid_actions().surfaces(),
            score: episode.score(),
            done: episode.done(),
            steps: episode.steps(),
        }
    }
}

/// An action as text. Unless `exact` is set, text that is not itself a
/// valid action is aligned to the closest one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRequest {
    pub action: String,
    #[serde(default)]
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepReply {
    /// The action actually executed, after alignment.
    pub action: String,
    pub route: Route,
    pub observation: Observation,
    pub score: f64,
    pub done: bool,
    pub steps: u32,
    pub valid_actions: Vec<String>,
}

impl StepReply {
    pub fn of(outcome: StepOutcome, episode: &Episode) -> Self {
        StepReply {
            action: outcome.action.to_string(),
            route: outcome.route,
            observation: outcome.observation,
            score: outcome.score,
            done: outcome.done,
            steps: outcome.steps,
            valid_actions: episode.valid_actions().surfaces(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalRequest {
    pub agent: AgentKind,
    pub game: GameId,
    pub split: Split,
    #[serde(default = "yes")]
    pub modules: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub episodes: Option<usize>,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsRequest {
    pub game: GameId,
    #[serde(default = "yes")]
    pub modules: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub episodes: Option<usize>,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetRequest {
    pub game: GameId,
    pub split: Split,
    #[serde(default = "yes")]
    pub modules: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameInfo {
    pub id: GameId,
    pub title: String,
    pub module: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariationSummary {
    pub index: usize,
    pub seed: u64,
    pub task: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub kind: String,
    pub error: String,
}
