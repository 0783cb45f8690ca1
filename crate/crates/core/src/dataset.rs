//! Behavior-cloning export, trajectory archives and valid-action statistics.
//!
//! A training input is serialized as
//!
//! ```text
//! d </s> OBS o_t </s> INV o_inv </s> LOOK o_look </s> <extra_id_0> </s> PACT a_prev </s> POBS o_prev </s>
//! ```
//!
//! with single spaces around every marker; the target is the action surface
//! string. Before step one the previous action and observation are empty.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{self, GameId, Split};
use crate::harness::{run_episode, EpisodeResult, OracleAgent, RandomAgent, STEP_LIMIT};
use crate::module::KnowledgeBase;

pub const SEP: &str = "</s>";
pub const SENTINEL: &str = "<extra_id_0>";

/// One step of a recorded episode: the agent's inputs, the action it took,
/// the score after that action, and the action set it chose from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub task: String,
    pub observation: String,
    pub inventory: String,
    pub look: String,
    pub prev_action: String,
    pub prev_observation: String,
    pub action: String,
    pub score: f64,
    pub env_actions: usize,
    pub module_actions: usize,
    pub valid_actions: Vec<String>,
}

/// The input side of a training example.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BcInput {
    pub task: String,
    pub observation: String,
    pub inventory: String,
    pub look: String,
    pub prev_action: String,
    pub prev_observation: String,
}

impl From<&TrajectoryRecord> for BcInput {
    fn from(r: &TrajectoryRecord) -> Self {
        BcInput {
            task: r.task.clone(),
            observation: r.observation.clone(),
            inventory: r.inventory.clone(),
            look: r.look.clone(),
            prev_action: r.prev_action.clone(),
            prev_observation: r.prev_observation.clone(),
        }
    }
}

pub fn serialize_bc(input: &BcInput) -> String {
    format!(
        "{} {SEP} OBS {} {SEP} INV {} {SEP} LOOK {} {SEP} {SENTINEL} {SEP} PACT {} {SEP} POBS {} {SEP}",
        input.task, input.observation, input.inventory, input.look, input.prev_action, input.prev_observation
    )
}

/// Inverse of [`serialize_bc`] for inputs whose fields do not themselves
/// contain the marker sequences.
pub fn parse_bc(text: &str) -> Result<BcInput> {
    let malformed = |what: &str| Error::MalformedRecord(format!("bc input: {what}"));
    let body = text
        .strip_suffix(&format!(" {SEP}"))
        .ok_or_else(|| malformed("missing final separator"))?;
    let markers = [
        format!(" {SEP} OBS "),
        format!(" {SEP} INV "),
        format!(" {SEP} LOOK "),
        format!(" {SEP} {SENTINEL} {SEP} PACT "),
        format!(" {SEP} POBS "),
    ];
    let mut fields = Vec::with_capacity(6);
    let mut rest = body;
    for marker in &markers {
        let at = rest.find(marker.as_str()).ok_or_else(|| malformed(marker.trim()))?;
        fields.push(rest[..at].to_string());
        rest = &rest[at + marker.len()..];
    }
    fields.push(rest.to_string());
    let mut fields = fields.into_iter();
    let mut next = || fields.next().expect("six fields collected");
    Ok(BcInput {
        task: next(),
        observation: next(),
        inventory: next(),
        look: next(),
        prev_action: next(),
        prev_observation: next(),
    })
}

/// Escapes backslash, newline, tab and carriage return so one example fits on one line.
pub fn escape_field(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

pub fn unescape_field(text: &str) -> Result<String> {
    let mut out = String::with_capacity(text.len());
    let mut chars = text.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('\\') => out.push('\\'),
            Some('n') => out.push('\n'),
            Some('t') => out.push('\t'),
            Some('r') => out.push('\r'),
            other => {
                return Err(Error::MalformedRecord(format!("bad escape \\{}", other.map(String::from).unwrap_or_default())))
            }
        }
    }
    Ok(out)
}

/// `input<TAB>target`, both escaped.
pub fn bc_line(record: &TrajectoryRecord) -> String {
    format!(
        "{}\t{}",
        escape_field(&serialize_bc(&BcInput::from(record))),
        escape_field(&record.action)
    )
}

pub fn parse_bc_line(line: &str) -> Result<(BcInput, String)> {
    let (input, target) = line
        .split_once('\t')
        .ok_or_else(|| Error::MalformedRecord("bc line has no tab".into()))?;
    Ok((parse_bc(&unescape_field(input)?)?, unescape_field(target)?))
}

pub fn modules_tag(modules: bool) -> &'static str {
    if modules {
        "mods"
    } else {
        "nomods"
    }
}

/// Everything exported for one (game, split, module setting), as file contents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetBundle {
    pub game: GameId,
    pub split: Split,
    pub modules: bool,
    pub records: usize,
    pub bc: String,
    pub trajectories: String,
    pub variations: String,
}

impl DatasetBundle {
    pub fn bc_file_name(&self) -> String {
        format!("{}.{}.{}.bc.txt", self.game, self.split, modules_tag(self.modules))
    }

    pub fn trajectories_file_name(&self) -> String {
        format!("{}.{}.{}.trajectories.jsonl", self.game, self.split, modules_tag(self.modules))
    }

    pub fn variations_file_name(&self) -> String {
        format!("{}.{}.variations.jsonl", self.game, self.split)
    }

    /// Writes the three files into `dir` and returns their paths.
    pub fn write_to(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let files = [
            (self.bc_file_name(), &self.bc),
            (self.trajectories_file_name(), &self.trajectories),
            (self.variations_file_name(), &self.variations),
        ];
        let mut written = Vec::new();
        for (name, contents) in files {
            let path = dir.join(name);
            fs::write(&path, contents)?;
            written.push(path);
        }
        Ok(written)
    }
}

/// Oracle trajectories for every variation of a split, serialized in
/// variation order.
pub fn build_dataset(game: GameId, split: Split, modules: bool) -> Result<DatasetBundle> {
    let variations = game::generate_split(game, split)?;
    let results: Vec<EpisodeResult> = variations
        .par_iter()
        .map(|v| run_episode(&mut OracleAgent::default(), v, modules).map_err(Error::from))
        .collect::<Result<_>>()?;
    let mut bc = String::new();
    let mut trajectories = String::new();
    let mut records = 0;
    for result in &results {
        trajectories.push_str(&serde_json::to_string(result)?);
        trajectories.push('\n');
        for record in &result.trajectory {
            bc.push_str(&bc_line(record));
            bc.push('\n');
            records += 1;
        }
    }
    let mut variation_lines = String::new();
    for v in variations.iter() {
        variation_lines.push_str(&serde_json::to_string(v)?);
        variation_lines.push('\n');
    }
    Ok(DatasetBundle {
        game,
        split,
        modules,
        records,
        bc,
        trajectories,
        variations: variation_lines,
    })
}

pub fn export_dataset(game: GameId, split: Split, modules: bool, dir: &Path) -> Result<Vec<PathBuf>> {
    build_dataset(game, split, modules)?.write_to(dir)
}

pub fn write_kb(dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join("kb.tsv");
    fs::write(&path, KnowledgeBase::shared().to_tsv())?;
    Ok(path)
}

/// Valid actions per step seen by a random agent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActionStats {
    pub game: GameId,
    pub modules: bool,
    pub episodes: usize,
    pub steps: usize,
    pub min: usize,
    pub mean: f64,
    pub max: usize,
    /// Mean of the environment and module parts separately.
    pub mean_env: f64,
    pub mean_module: f64,
}

pub const STATS_EPISODES: usize = 10;

/// Runs a seeded random agent for up to 50 steps on the first `episodes`
/// training variations and summarizes |A_t| over every step taken.
pub fn action_stats(game: GameId, modules: bool, episodes: usize, seed: u64) -> Result<ActionStats> {
    let variations = game::generate_split(game, Split::Train)?;
    let n = episodes.min(variations.len());
    let mut totals = Vec::new();
    let mut env = 0usize;
    let mut module = 0usize;
    for (i, v) in variations[..n].iter().enumerate() {
        let mut agent = RandomAgent::new(seed.wrapping_add(i as u64));
        let result = run_episode(&mut agent, v, modules).map_err(Error::from)?;
        debug_assert!(result.steps <= STEP_LIMIT);
        for r in &result.trajectory {
            totals.push(r.env_actions + r.module_actions);
            env += r.env_actions;
            module += r.module_actions;
        }
    }
    let steps = totals.len();
    let denominator = steps.max(1) as f64;
    Ok(ActionStats {
        game,
        modules,
        episodes: n,
        steps,
        min: totals.iter().copied().min().unwrap_or(0),
        mean: totals.iter().sum::<usize>() as f64 / denominator,
        max: totals.iter().copied().max().unwrap_or(0),
        mean_env: env as f64 / denominator,
        mean_module: module as f64 / denominator,
    })
}

pub fn format_stats(stats: &[ActionStats]) -> String {
    let mut out = format!("{:<12} {:<8} {:>5} {:>7} {:>5}\n", "Game", "Modules", "Min", "Mean", "Max");
    for s in stats {
        out.push_str(&format!(
            "{:<12} {:<8} {:>5} {:>7.1} {:>5}\n",
            s.game.title(),
            if s.modules { "yes" } else { "no" },
            s.min,
            s.mean,
            s.max
        ));
    }
    out
}
