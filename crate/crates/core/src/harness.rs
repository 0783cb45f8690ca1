//! Running episodes: the step loop with its 50-step cap, the agent contract,
//! the baseline agents, action alignment for free-text agents, and
//! evaluation over whole splits.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::action::{enumerate_env_actions, parse, Action, ValidActionSet};
use crate::dataset::TrajectoryRecord;
use crate::error::{Error, Result};
use crate::game::{self, EpisodeVariation, GameId, Outcome, Progress, Split};
use crate::module::{dispatch, module_for, Route, SymbolicModule};
use crate::world::{Observation, WorldState};

pub const STEP_LIMIT: u32 = 50;

pub const COMPLETED: &str = "Game completed.";
pub const GAME_OVER: &str = "Game over.";

/// What one step produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepOutcome {
    pub action: Action,
    pub route: Route,
    pub observation: Observation,
    pub score: f64,
    pub done: bool,
    pub steps: u32,
}

/// A single playthrough of one variation, optionally with its module attached.
pub struct Episode {
    variation: EpisodeVariation,
    world: WorldState,
    module: Option<Box<dyn SymbolicModule>>,
    env_history: Vec<Action>,
    progress: Progress,
    steps: u32,
    observation: Observation,
    prev_action: String,
    prev_observation: String,
}

impl Episode {
    pub fn new(variation: EpisodeVariation, modules: bool) -> Result<Episode> {
        let world = WorldState::build(&variation.world)?;
        let mut module = modules.then(|| module_for(variation.game));
        let look = world.render_room();
        if let Some(m) = module.as_mut() {
            m.observe(&look);
        }
        let observation = world.observe(look);
        Ok(Episode {
            variation,
            world,
            module,
            env_history: Vec::new(),
            progress: Progress::START,
            steps: 0,
            observation,
            prev_action: String::new(),
            prev_observation: String::new(),
        })
    }

    pub fn variation(&self) -> &EpisodeVariation {
        &self.variation
    }

    pub fn world(&self) -> &WorldState {
        &self.world
    }

    pub fn observation(&self) -> &Observation {
        &self.observation
    }

    pub fn task(&self) -> &str {
        &self.variation.task_description
    }

    pub fn prev_action(&self) -> &str {
        &self.prev_action
    }

    pub fn prev_observation(&self) -> &str {
        &self.prev_observation
    }

    pub fn modules(&self) -> bool {
        self.module.is_some()
    }

    pub fn score(&self) -> f64 {
        self.progress.score
    }

    pub fn outcome(&self) -> Outcome {
        self.progress.outcome
    }

    pub fn steps(&self) -> u32 {
        self.steps
    }

    pub fn done(&self) -> bool {
        self.progress.done || self.steps >= STEP_LIMIT
    }

    /// A_t: environment actions first, then whatever the module injects.
    pub fn valid_actions(&self) -> ValidActionSet {
        if self.done() {
            return ValidActionSet::default();
        }
        ValidActionSet {
            env: enumerate_env_actions(&self.world),
            module: self
                .module
                .as_ref()
                .map(|m| m.enumerate().into_iter().map(Action::Module).collect())
                .unwrap_or_default(),
        }
    }

    /// Executes one valid action. Invalid actions are rejected without
    /// consuming a step.
    pub fn step(&mut self, action: &Action) -> Result<StepOutcome> {
        if self.done() {
            return Err(Error::EpisodeDone);
        }
        let valid = self.valid_actions();
        let (route, mut text) = dispatch(action, &valid, &mut self.world, self.module.as_deref_mut())?;
        if route == Route::Environment {
            self.env_history.push(action.clone());
            self.progress = game::score(&self.variation.params, &self.env_history);
        }
        self.steps += 1;
        self.world.step_count = self.steps;
        self.world.score = self.progress.score;
        if self.progress.done {
            self.world.done = true;
            text.push('\n');
            text.push_str(match self.progress.outcome {
                Outcome::Completed => COMPLETED,
                _ => GAME_OVER,
            });
        }
        if let Some(m) = self.module.as_mut() {
            m.observe(&text);
        }
        self.prev_action = action.to_string();
        self.prev_observation = std::mem::take(&mut self.observation.text);
        self.observation = self.world.observe(text);
        Ok(StepOutcome {
            action: action.clone(),
            route,
            observation: self.observation.clone(),
            score: self.progress.score,
            done: self.done(),
            steps: self.steps,
        })
    }

    /// Maps free text onto the closest valid action, then steps with it.
    pub fn step_text(&mut self, utterance: &str) -> Result<StepOutcome> {
        let valid = self.valid_actions();
        let action = align_action(utterance, &valid).ok_or(Error::EpisodeDone)?;
        self.step(&action)
    }

    fn record(&self, valid: &ValidActionSet, action: &Action, score: f64) -> TrajectoryRecord {
        TrajectoryRecord {
            task: self.task().to_string(),
            observation: self.observation.text.clone(),
            inventory: self.observation.inventory.clone(),
            look: self.observation.look.clone(),
            prev_action: self.prev_action.clone(),
            prev_observation: self.prev_observation.clone(),
            action: action.to_string(),
            score,
            env_actions: valid.env.len(),
            module_actions: valid.module.len(),
            valid_actions: valid.surfaces(),
        }
    }
}

fn unigrams(text: &str) -> BTreeSet<String> {
    text.to_lowercase().split_whitespace().map(str::to_string).collect()
}

/// Picks the valid action an utterance most plausibly means: an exact
/// surface match if there is one, otherwise the highest cosine similarity
/// between binary unigram vectors, earliest action on ties. `None` only when
/// the set is empty.
pub fn align_action(utterance: &str, valid: &ValidActionSet) -> Option<Action> {
    if let Ok(parsed) = parse(utterance) {
        if valid.contains(&parsed) {
            return Some(parsed);
        }
    }
    let words = unigrams(utterance);
    let mut best: Option<(&Action, f64)> = None;
    for candidate in valid.union() {
        let surface = unigrams(&candidate.to_string());
        let shared = words.intersection(&surface).count() as f64;
        let norm = (words.len() as f64).sqrt() * (surface.len() as f64).sqrt();
        let similarity = if norm == 0.0 { 0.0 } else { shared / norm };
        if best.is_none_or(|(_, s)| similarity > s) {
            best = Some((candidate, similarity));
        }
    }
    best.map(|(a, _)| a.clone())
}

/// What an agent sees at step t.
pub struct AgentView<'a> {
    pub task: &'a str,
    pub observation: &'a Observation,
    pub prev_action: &'a str,
    pub prev_observation: &'a str,
    pub valid: &'a ValidActionSet,
    pub step: u32,
}

pub enum Choice {
    Action(Action),
    /// Free text, aligned onto the valid actions by the harness.
    Utterance(String),
}

pub trait Agent: Send {
    fn name(&self) -> &str;

    /// Called once before the first step of each episode.
    fn begin(&mut self, _variation: &EpisodeVariation, _modules: bool) {}

    fn act(&mut self, view: &AgentView<'_>) -> Result<Choice>;
}

/// Uniform over A_t, reproducible from its seed.
pub struct RandomAgent {
    rng: ChaCha8Rng,
}

impl RandomAgent {
    pub fn new(seed: u64) -> Self {
        RandomAgent {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl Agent for RandomAgent {
    fn name(&self) -> &str {
        "random"
    }

    fn act(&mut self, view: &AgentView<'_>) -> Result<Choice> {
        let index = (0..view.valid.len())
            .collect::<Vec<_>>()
            .choose(&mut self.rng)
            .copied()
            .ok_or(Error::EpisodeDone)?;
        Ok(Choice::Action(view.valid.get(index).expect("index drawn from the set").clone()))
    }
}

/// Replays the gold trajectory matching the episode's module setting.
#[derive(Default)]
pub struct OracleAgent {
    plan: Vec<Action>,
    cursor: usize,
}

impl Agent for OracleAgent {
    fn name(&self) -> &str {
        "oracle"
    }

    fn begin(&mut self, variation: &EpisodeVariation, modules: bool) {
        self.plan = variation.gold(modules).to_vec();
        self.cursor = 0;
    }

    fn act(&mut self, _view: &AgentView<'_>) -> Result<Choice> {
        let action = self
            .plan
            .get(self.cursor)
            .cloned()
            .ok_or_else(|| Error::AgentFailed("gold trajectory exhausted".into()))?;
        self.cursor += 1;
        Ok(Choice::Action(action))
    }
}

/// Says the same thing every step.
pub struct FixedAgent(pub String);

impl Agent for FixedAgent {
    fn name(&self) -> &str {
        "fixed"
    }

    fn act(&mut self, _view: &AgentView<'_>) -> Result<Choice> {
        Ok(Choice::Utterance(self.0.clone()))
    }
}

/// Follows a fixed script of utterances, then repeats its last line.
pub struct ScriptedAgent {
    lines: Vec<String>,
    cursor: usize,
}

impl ScriptedAgent {
    pub fn new(lines: impl IntoIterator<Item = impl Into<String>>) -> Self {
        ScriptedAgent {
            lines: lines.into_iter().map(Into::into).collect(),
            cursor: 0,
        }
    }
}

impl Agent for ScriptedAgent {
    fn name(&self) -> &str {
        "scripted"
    }

    fn act(&mut self, _view: &AgentView<'_>) -> Result<Choice> {
        let line = self
            .lines
            .get(self.cursor)
            .or(self.lines.last())
            .cloned()
            .unwrap_or_default();
        self.cursor += 1;
        Ok(Choice::Utterance(line))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpisodeResult {
    pub game: GameId,
    pub split: Split,
    pub index: Option<usize>,
    pub seed: u64,
    pub modules: bool,
    pub score: f64,
    pub steps: u32,
    pub outcome: Outcome,
    pub trajectory: Vec<TrajectoryRecord>,
}

/// An agent error, with everything recorded up to the failing step.
#[derive(Debug)]
pub struct AgentFailure {
    pub message: String,
    pub partial: EpisodeResult,
}

impl fmt::Display for AgentFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "agent failed after {} steps: {}", self.partial.steps, self.message)
    }
}

impl std::error::Error for AgentFailure {}

impl From<AgentFailure> for Error {
    fn from(failure: AgentFailure) -> Error {
        Error::AgentFailed(failure.to_string())
    }
}

/// Observe, enumerate, act, dispatch; until the game ends or the cap is hit.
/// The final score is the score after the last step taken.
pub fn run_episode(
    agent: &mut dyn Agent,
    variation: &EpisodeVariation,
    modules: bool,
) -> std::result::Result<EpisodeResult, AgentFailure> {
    let mut result = EpisodeResult {
        game: variation.game,
        split: variation.split,
        index: variation.index,
        seed: variation.seed,
        modules,
        score: 0.0,
        steps: 0,
        outcome: Outcome::InProgress,
        trajectory: Vec::new(),
    };
    let mut episode = match Episode::new(variation.clone(), modules) {
        Ok(e) => e,
        Err(e) => {
            return Err(AgentFailure {
                message: e.to_string(),
                partial: result,
            })
        }
    };
    agent.begin(variation, modules);
    while !episode.done() {
        let valid = episode.valid_actions();
        let choice = agent.act(&AgentView {
            task: episode.task(),
            observation: episode.observation(),
            prev_action: episode.prev_action(),
            prev_observation: episode.prev_observation(),
            valid: &valid,
            step: episode.steps(),
        });
        let action = match choice {
            Ok(Choice::Action(a)) => Ok(a),
            Ok(Choice::Utterance(text)) => align_action(&text, &valid).ok_or(Error::EpisodeDone),
            Err(e) => Err(e),
        };
        let outcome = action.and_then(|a| {
            let before = episode.record(&valid, &a, 0.0);
            episode.step(&a).map(|o| (before, o))
        });
        match outcome {
            Ok((mut record, o)) => {
                record.score = o.score;
                result.trajectory.push(record);
            }
            Err(e) => {
                result.score = episode.score();
                result.steps = episode.steps();
                result.outcome = episode.outcome();
                return Err(AgentFailure {
                    message: e.to_string(),
                    partial: result,
                });
            }
        }
    }
    result.score = episode.score();
    result.steps = episode.steps();
    result.outcome = episode.outcome();
    Ok(result)
}

/// The built-in agents, by command-line name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AgentKind {
    Oracle,
    /// The oracle forced to its module-free trajectory.
    OracleNomods,
    Random,
}

impl AgentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            AgentKind::Oracle => "oracle",
            AgentKind::OracleNomods => "oracle-nomods",
            AgentKind::Random => "random",
        }
    }

    /// A fresh agent for one episode; random agents get a per-episode seed.
    pub fn build(self, seed: u64, episode: usize) -> Box<dyn Agent> {
        match self {
            AgentKind::Oracle | AgentKind::OracleNomods => Box::new(OracleAgent::default()),
            AgentKind::Random => Box::new(RandomAgent::new(seed.wrapping_mul(1_000_003).wrapping_add(episode as u64))),
        }
    }

    /// Whether modules are attached, given the requested setting.
    pub fn modules(self, requested: bool) -> bool {
        match self {
            AgentKind::OracleNomods => false,
            _ => requested,
        }
    }
}

impl fmt::Display for AgentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AgentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oracle" => Ok(AgentKind::Oracle),
            "oracle-nomods" => Ok(AgentKind::OracleNomods),
            "random" => Ok(AgentKind::Random),
            _ => Err(Error::UnknownAgent(s.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalSummary {
    pub agent: AgentKind,
    pub game: GameId,
    pub split: Split,
    pub modules: bool,
    pub episodes: usize,
    pub mean_score: f64,
    pub mean_steps: f64,
    pub scores: Vec<f64>,
    pub steps: Vec<u32>,
}

/// Runs the first `episodes` variations of a split (all of them by default)
/// in parallel. Results are merged in variation order.
pub fn evaluate(
    agent: AgentKind,
    game: GameId,
    split: Split,
    modules: bool,
    episodes: Option<usize>,
    seed: u64,
) -> Result<EvalSummary> {
    let variations = game::generate_split(game, split)?;
    let n = episodes.unwrap_or(variations.len()).min(variations.len());
    let modules = agent.modules(modules);
    let results: Vec<EpisodeResult> = variations[..n]
        .par_iter()
        .enumerate()
        .map(|(i, v)| run_episode(agent.build(seed, i).as_mut(), v, modules).map_err(Error::from))
        .collect::<Result<_>>()?;
    let scores: Vec<f64> = results.iter().map(|r| r.score).collect();
    let steps: Vec<u32> = results.iter().map(|r| r.steps).collect();
    let denominator = n.max(1) as f64;
    Ok(EvalSummary {
        agent,
        game,
        split,
        modules,
        episodes: n,
        mean_score: scores.iter().sum::<f64>() / denominator,
        mean_steps: steps.iter().map(|&s| f64::from(s)).sum::<f64>() / denominator,
        scores,
        steps,
    })
}

/// Plain-text table with one Score/Steps row per summary.
pub fn format_report(summaries: &[EvalSummary]) -> String {
    let mut out = format!(
        "{:<12} {:<14} {:<6} {:<8} {:>6} {:>7}\n",
        "Game", "Agent", "Split", "Modules", "Score", "Steps"
    );
    for s in summaries {
        out.push_str(&format!(
            "{:<12} {:<14} {:<6} {:<8} {:>6.2} {:>7.2}\n",
            s.game.title(),
            s.agent.as_str(),
            s.split.as_str(),
            if s.modules { "yes" } else { "no" },
            s.mean_score,
            s.mean_steps
        ));
    }
    out
}
