//! Procedurally generated pick-and-place text games with symbolic modules
//! (calculator, navigator, sorter, knowledge base) whose actions are injected
//! into the environment's valid-action set.
//!
//! The crate is organised bottom-up:
//!
//! * [`world`]: rooms, entities, inventory and observation rendering.
//! * [`action`]: the command grammar, valid-action enumeration and execution.
//! * [`game`]: the four games, their split-disjoint generators, scoring and oracles.
//! * [`module`]: symbolic modules and the module-first action dispatch.
//! * [`harness`]: episodes, the agent contract, baseline agents and evaluation.
//! * [`dataset`]: behavior-cloning export, trajectory archives and action statistics.

pub mod action;
pub mod api;
pub mod dataset;
pub mod error;
pub mod game;
pub mod harness;
pub mod module;
pub mod quantity;
pub mod world;

pub use action::{Action, ValidActionSet};
pub use error::{Error, Result};
pub use game::{EpisodeVariation, GameId, Split};
pub use harness::{Episode, EpisodeResult, STEP_LIMIT};
pub use module::ModuleAction;
pub use world::{Direction, Observation, WorldState};
