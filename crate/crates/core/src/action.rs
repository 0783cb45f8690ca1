//! The fixed command grammar: parsing utterances, enumerating the
//! environment's valid actions for a state, and executing them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::module::{CalcOp, ModuleAction, SortOrder};
use crate::world::{Direction, EntityKind, Place, WorldState};

/// A structured command. Its `Display` form is the canonical surface string,
/// and [`parse`] inverts it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Action {
    Take(String),
    Put { item: String, container: String },
    Read(String),
    Move(Direction),
    LookAround,
    Inventory,
    Module(ModuleAction),
}

impl Action {
    pub fn is_module(&self) -> bool {
        matches!(self, Action::Module(_))
    }

    pub fn put(item: impl Into<String>, container: impl Into<String>) -> Action {
        Action::Put {
            item: item.into(),
            container: container.into(),
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Take(item) => write!(f, "take {item}"),
            Action::Put { item, container } => write!(f, "put {item} in {container}"),
            Action::Read(item) => write!(f, "read {item}"),
            Action::Move(dir) => write!(f, "move {dir}"),
            Action::LookAround => f.write_str("look around"),
            Action::Inventory => f.write_str("inventory"),
            Action::Module(m) => m.fmt(f),
        }
    }
}

impl From<Action> for String {
    fn from(action: Action) -> String {
        action.to_string()
    }
}

impl TryFrom<String> for Action {
    type Error = Error;

    fn try_from(value: String) -> Result<Self> {
        parse(&value)
    }
}

impl FromStr for Action {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

/// Words that never start or appear inside an object reference. Their
/// presence marks an utterance the parser does not understand, such as
/// `take the red fruit near the fridge`.
const FORBIDDEN_IN_NAMES: &[&str] = &[
    "the", "a", "an", "near", "from", "on", "under", "behind", "beside", "with", "at", "to", "into",
    "onto", "in",
];

fn object_ref(words: &[&str], original: &str) -> Result<String> {
    if words.is_empty() || words.iter().any(|w| FORBIDDEN_IN_NAMES.contains(w)) {
        return Err(Error::UnrecognizedCommand(original.to_string()));
    }
    Ok(words.join(" "))
}

/// Lower-cases and collapses whitespace, then matches the grammar.
pub fn parse(text: &str) -> Result<Action> {
    let lowered = text.to_lowercase();
    let words: Vec<&str> = lowered.split_whitespace().collect();
    let unrecognized = || Error::UnrecognizedCommand(text.to_string());
    let action = match words.as_slice() {
        [] => return Err(unrecognized()),
        ["look", "around"] => Action::LookAround,
        ["inventory"] => Action::Inventory,
        ["move", dir] => Action::Move(dir.parse().map_err(|_| unrecognized())?),
        ["take", rest @ ..] => Action::Take(object_ref(rest, text)?),
        ["read", rest @ ..] => Action::Read(object_ref(rest, text)?),
        ["put", rest @ ..] => {
            let split = rest.iter().position(|w| *w == "in").ok_or_else(unrecognized)?;
            Action::Put {
                item: object_ref(&rest[..split], text)?,
                container: object_ref(&rest[split + 1..], text)?,
            }
        }
        ["query", rest @ ..] => Action::Module(ModuleAction::Query(object_ref(rest, text)?)),
        ["next", "step", "to", rest @ ..] => {
            Action::Module(ModuleAction::NextStepTo(object_ref(rest, text)?))
        }
        ["sort", "ascending"] => Action::Module(ModuleAction::Sort(SortOrder::Ascending)),
        ["sort", "descending"] => Action::Module(ModuleAction::Sort(SortOrder::Descending)),
        [op, lhs, rhs] if CalcOp::from_verb(op).is_some() => {
            let op = CalcOp::from_verb(op).ok_or_else(unrecognized)?;
            let lhs = lhs.parse().map_err(|_| unrecognized())?;
            let rhs = rhs.parse().map_err(|_| unrecognized())?;
            Action::Module(ModuleAction::Calc { op, lhs, rhs })
        }
        _ => return Err(unrecognized()),
    };
    Ok(action)
}

/// The per-step action sets: environment actions, module actions, and
/// (implicitly) their union in that order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidActionSet {
    pub env: Vec<Action>,
    pub module: Vec<Action>,
}

impl ValidActionSet {
    pub fn union(&self) -> impl Iterator<Item = &Action> {
        self.env.iter().chain(&self.module)
    }

    pub fn len(&self) -> usize {
        self.env.len() + self.module.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, action: &Action) -> bool {
        if action.is_module() {
            self.module.contains(action)
        } else {
            self.env.contains(action)
        }
    }

    pub fn get(&self, index: usize) -> Option<&Action> {
        self.union().nth(index)
    }

    pub fn surfaces(&self) -> Vec<String> {
        self.union().map(Action::to_string).collect()
    }
}

/// Every environment action that executes without error in `state`.
pub fn enumerate_env_actions(state: &WorldState) -> Vec<Action> {
    if state.done {
        return Vec::new();
    }
    let mut actions = Vec::new();
    for id in state.reachable_portables() {
        actions.push(Action::Take(state.entity(id).name.clone()));
    }
    let containers = state.open_containers_here();
    for &held in &state.inventory {
        for &container in &containers {
            actions.push(Action::put(
                state.entity(held).name.clone(),
                state.entity(container).name.clone(),
            ));
        }
    }
    for &held in &state.inventory {
        if state.entity(held).kind == EntityKind::Readable {
            actions.push(Action::Read(state.entity(held).name.clone()));
        }
    }
    for &dir in state.current_room().connections.keys() {
        actions.push(Action::Move(dir));
    }
    actions.push(Action::LookAround);
    actions.push(Action::Inventory);
    actions
}

/// Applies an environment action and returns its feedback line. Module
/// actions are rejected; they never touch the world.
pub fn execute_env(state: &mut WorldState, action: &Action) -> Result<String> {
    let invalid = |why: &str| Error::InvalidAction(format!("{action}: {why}"));
    if state.done {
        return Err(Error::EpisodeDone);
    }
    match action {
        Action::Take(name) => {
            let id = state.find(name).ok_or_else(|| invalid("no such object"))?;
            if !state.reachable_portables().contains(&id) {
                return Err(invalid("not reachable"));
            }
            state.move_entity(id, Place::Inventory)?;
            Ok(format!("You take the {name}."))
        }
        Action::Put { item, container } => {
            let item_id = state.find(item).ok_or_else(|| invalid("no such object"))?;
            if !state.inventory.contains(&item_id) {
                return Err(invalid("not carried"));
            }
            let container_id = state.find(container).ok_or_else(|| invalid("no such container"))?;
            if !state.open_containers_here().contains(&container_id) {
                return Err(invalid("no open container by that name here"));
            }
            state.move_entity(item_id, Place::Container(container_id))?;
            Ok(format!("You put the {item} in the {container}."))
        }
        Action::Read(name) => {
            let id = state.find(name).ok_or_else(|| invalid("no such object"))?;
            let entity = state.entity(id);
            match (&entity.text, state.inventory.contains(&id)) {
                (Some(text), true) => Ok(text.clone()),
                _ => Err(invalid("nothing readable is carried by that name")),
            }
        }
        Action::Move(dir) => {
            let to = *state
                .current_room()
                .connections
                .get(dir)
                .ok_or_else(|| invalid("no exit that way"))?;
            state.agent_location = to;
            Ok(state.render_room())
        }
        Action::LookAround => Ok(state.render_room()),
        Action::Inventory => Ok(state.render_inventory()),
        Action::Module(_) => Err(invalid("module actions are not environment actions")),
    }
}
