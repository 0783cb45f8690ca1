//! The four benchmark games. Each variation is generated from a seed; the
//! identifying problem of a candidate is hashed to exactly one split, which
//! keeps train/dev/test problems disjoint by construction.

pub mod arithmetic;
pub mod mapreader;
pub mod sorting;
pub mod twc;
pub mod vocab;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::action::Action;
use crate::error::{Error, Result};
use crate::world::WorldSpec;

pub use arithmetic::ArithmeticParams;
pub use mapreader::MapParams;
pub use sorting::SortingParams;
pub use twc::TwcParams;

pub const VARIATIONS_PER_SPLIT: usize = 100;
const MAX_CANDIDATES: u64 = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GameId {
    Twc,
    #[serde(rename = "mapreader")]
    MapReader,
    Arithmetic,
    Sorting,
}

impl GameId {
    pub const ALL: [GameId; 4] = [GameId::MapReader, GameId::Arithmetic, GameId::Sorting, GameId::Twc];

    pub fn as_str(self) -> &'static str {
        match self {
            GameId::Twc => "twc",
            GameId::MapReader => "mapreader",
            GameId::Arithmetic => "arithmetic",
            GameId::Sorting => "sorting",
        }
    }

    /// Display name used in report tables.
    pub fn title(self) -> &'static str {
        match self {
            GameId::Twc => "TWC",
            GameId::MapReader => "MapReader",
            GameId::Arithmetic => "Arithmetic",
            GameId::Sorting => "Sorting",
        }
    }

    fn tag(self) -> u64 {
        match self {
            GameId::Twc => 1,
            GameId::MapReader => 2,
            GameId::Arithmetic => 3,
            GameId::Sorting => 4,
        }
    }
}

impl fmt::Display for GameId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GameId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_lowercase().as_str() {
            "twc" => Ok(GameId::Twc),
            "mapreader" | "map-reader" | "map_reader" => Ok(GameId::MapReader),
            "arithmetic" => Ok(GameId::Arithmetic),
            "sorting" => Ok(GameId::Sorting),
            _ => Err(Error::UnknownGame(s.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Dev,
    Test,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Train, Split::Dev, Split::Test];

    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Dev => "dev",
            Split::Test => "test",
        }
    }

    fn tag(self) -> u64 {
        match self {
            Split::Train => 1,
            Split::Dev => 2,
            Split::Test => 3,
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Split {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_lowercase().as_str() {
            "train" => Ok(Split::Train),
            "dev" => Ok(Split::Dev),
            "test" => Ok(Split::Test),
            _ => Err(Error::UnknownSplit(s.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "game", rename_all = "lowercase")]
pub enum GameParams {
    Twc(TwcParams),
    #[serde(rename = "mapreader")]
    MapReader(MapParams),
    Arithmetic(ArithmeticParams),
    Sorting(SortingParams),
}

impl GameParams {
    pub fn game(&self) -> GameId {
        match self {
            GameParams::Twc(_) => GameId::Twc,
            GameParams::MapReader(_) => GameId::MapReader,
            GameParams::Arithmetic(_) => GameId::Arithmetic,
            GameParams::Sorting(_) => GameId::Sorting,
        }
    }

    /// The content that must not repeat across splits.
    pub fn problem_key(&self) -> String {
        match self {
            GameParams::Twc(p) => p.problem_key(),
            GameParams::MapReader(p) => p.problem_key(),
            GameParams::Arithmetic(p) => p.problem_key(),
            GameParams::Sorting(p) => p.problem_key(),
        }
    }
}

/// One generated game instance together with both gold trajectories.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpisodeVariation {
    pub game: GameId,
    pub split: Split,
    /// Position within the split; absent for variations built from a bare seed.
    pub index: Option<usize>,
    pub seed: u64,
    pub task_description: String,
    pub params: GameParams,
    pub world: WorldSpec,
    pub gold_with_modules: Vec<Action>,
    pub gold_no_modules: Vec<Action>,
}

impl EpisodeVariation {
    pub fn gold(&self, with_modules: bool) -> &[Action] {
        if with_modules {
            &self.gold_with_modules
        } else {
            &self.gold_no_modules
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    InProgress,
    Completed,
    Failed,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Progress {
    pub score: f64,
    pub done: bool,
    pub outcome: Outcome,
}

impl Progress {
    pub const START: Progress = Progress {
        score: 0.0,
        done: false,
        outcome: Outcome::InProgress,
    };

    pub(crate) fn completed() -> Progress {
        Progress {
            score: 1.0,
            done: true,
            outcome: Outcome::Completed,
        }
    }

    pub(crate) fn failed() -> Progress {
        Progress {
            score: 0.0,
            done: true,
            outcome: Outcome::Failed,
        }
    }
}

/// Scores an episode from the environment actions executed so far.
pub fn score(params: &GameParams, history: &[Action]) -> Progress {
    let mut progress = Progress::START;
    for action in history {
        progress = match params {
            GameParams::Twc(p) => p.advance(progress, action),
            GameParams::MapReader(p) => p.advance(progress, action),
            GameParams::Arithmetic(p) => p.advance(progress, action),
            GameParams::Sorting(p) => p.advance(progress, action),
        };
        if progress.done {
            break;
        }
    }
    progress
}

pub fn task_description(params: &GameParams) -> String {
    match params {
        GameParams::Twc(_) => twc::TASK.to_string(),
        GameParams::MapReader(p) => p.task_description(),
        GameParams::Arithmetic(_) => arithmetic::TASK.to_string(),
        GameParams::Sorting(_) => sorting::TASK.to_string(),
    }
}

pub fn oracle(params: &GameParams, with_modules: bool) -> Vec<Action> {
    match params {
        GameParams::Twc(p) => p.oracle(with_modules),
        GameParams::MapReader(p) => p.oracle(with_modules),
        GameParams::Arithmetic(p) => p.oracle(with_modules),
        GameParams::Sorting(p) => p.oracle(with_modules),
    }
}

fn sample(game: GameId, seed: u64) -> Result<(GameParams, WorldSpec)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(match game {
        GameId::Twc => {
            let (p, w) = twc::sample(&mut rng)?;
            (GameParams::Twc(p), w)
        }
        GameId::MapReader => {
            let (p, w) = mapreader::sample(&mut rng);
            (GameParams::MapReader(p), w)
        }
        GameId::Arithmetic => {
            let (p, w) = arithmetic::sample(&mut rng);
            (GameParams::Arithmetic(p), w)
        }
        GameId::Sorting => {
            let (p, w) = sorting::sample(&mut rng);
            (GameParams::Sorting(p), w)
        }
    })
}

/// The split a problem belongs to, fixed by a hash of its identifying content.
pub fn split_of(game: GameId, problem_key: &str) -> Split {
    let digest = Sha256::digest(format!("{game}:{problem_key}").as_bytes());
    let mut prefix = [0u8; 8];
    prefix.copy_from_slice(&digest[..8]);
    Split::ALL[(u64::from_le_bytes(prefix) % 3) as usize]
}

fn candidate_seed(game: GameId, split: Split, k: u64) -> u64 {
    game.tag() * 1_000_000_000 + split.tag() * 100_000_000 + k
}

fn assemble(game: GameId, seed: u64, params: GameParams, world: WorldSpec, split: Split, index: Option<usize>) -> EpisodeVariation {
    EpisodeVariation {
        game,
        split,
        index,
        seed,
        task_description: task_description(&params),
        gold_with_modules: oracle(&params, true),
        gold_no_modules: oracle(&params, false),
        params,
        world,
    }
}

/// Rebuilds the variation a seed produces. The split is the one its problem hashes to.
pub fn from_seed(game: GameId, seed: u64) -> Result<EpisodeVariation> {
    let (params, world) = sample(game, seed)?;
    let split = split_of(game, &params.problem_key());
    Ok(assemble(game, seed, params, world, split, None))
}

fn build_split(game: GameId, split: Split) -> Result<Vec<EpisodeVariation>> {
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(VARIATIONS_PER_SPLIT);
    for k in 0..MAX_CANDIDATES {
        let seed = candidate_seed(game, split, k);
        let (params, world) = sample(game, seed)?;
        let key = params.problem_key();
        if split_of(game, &key) != split || !seen.insert(key) {
            continue;
        }
        out.push(assemble(game, seed, params, world, split, Some(out.len())));
        if out.len() == VARIATIONS_PER_SPLIT {
            return Ok(out);
        }
    }
    Err(Error::ExhaustedSpace {
        game: game.to_string(),
        split: split.to_string(),
        attempts: MAX_CANDIDATES,
    })
}

type SplitCache = Mutex<HashMap<(GameId, Split), Arc<Vec<EpisodeVariation>>>>;

/// All variations of a split, generated once per process.
pub fn generate_split(game: GameId, split: Split) -> Result<Arc<Vec<EpisodeVariation>>> {
    static CACHE: OnceLock<SplitCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(found) = cache.lock().expect("split cache poisoned").get(&(game, split)) {
        return Ok(found.clone());
    }
    let built = Arc::new(build_split(game, split)?);
    cache
        .lock()
        .expect("split cache poisoned")
        .entry((game, split))
        .or_insert(built.clone());
    Ok(built)
}

pub fn generate(game: GameId, split: Split, index: usize) -> Result<EpisodeVariation> {
    if index >= VARIATIONS_PER_SPLIT {
        return Err(Error::IndexOutOfRange(index, VARIATIONS_PER_SPLIT));
    }
    Ok(generate_split(game, split)?[index].clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_parse() {
        assert_eq!("MapReader".parse::<GameId>().unwrap(), GameId::MapReader);
        assert!(matches!("chess".parse::<GameId>(), Err(Error::UnknownGame(_))));
        assert!(matches!("validation".parse::<Split>(), Err(Error::UnknownSplit(_))));
        for game in GameId::ALL {
            assert_eq!(game.as_str().parse::<GameId>().unwrap(), game);
            let json = serde_json::to_string(&game).unwrap();
            assert_eq!(json, format!("\"{}\"", game.as_str()));
        }
    }

    #[test]
    fn index_out_of_range() {
        assert!(matches!(
            generate(GameId::Arithmetic, Split::Test, 100),
            Err(Error::IndexOutOfRange(100, 100))
        ));
    }

    #[test]
    fn same_seed_same_variation() {
        for game in GameId::ALL {
            let a = serde_json::to_string(&from_seed(game, 77).unwrap()).unwrap();
            let b = serde_json::to_string(&from_seed(game, 77).unwrap()).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn split_members_regenerate_from_their_seed() {
        for game in GameId::ALL {
            let v = generate(game, Split::Dev, 7).unwrap();
            let mut again = from_seed(game, v.seed).unwrap();
            again.index = v.index;
            assert_eq!(again, v);
        }
    }

    #[test]
    fn untouched_game_scores_zero() {
        for game in GameId::ALL {
            let v = generate(game, Split::Train, 0).unwrap();
            assert_eq!(score(&v.params, &[]), Progress::START);
        }
    }
}
