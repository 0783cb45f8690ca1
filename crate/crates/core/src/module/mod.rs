//! Symbolic modules watch the observation stream, inject extra actions into
//! the valid-action set, and answer those actions without touching the world.

mod calc;
mod kb;
mod nav;
mod sorter;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use calc::Calculator;
pub use kb::{KbModule, KnowledgeBase, Triple};
pub use nav::{NavGraph, Navigator};
pub use sorter::Sorter;

use crate::action::{execute_env, Action, ValidActionSet};
use crate::error::{Error, Result};
use crate::game::GameId;
use crate::world::WorldState;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CalcOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl CalcOp {
    pub const ALL: [CalcOp; 4] = [CalcOp::Add, CalcOp::Sub, CalcOp::Mul, CalcOp::Div];

    pub fn verb(self) -> &'static str {
        match self {
            CalcOp::Add => "add",
            CalcOp::Sub => "sub",
            CalcOp::Mul => "mul",
            CalcOp::Div => "div",
        }
    }

    pub fn from_verb(verb: &str) -> Option<CalcOp> {
        CalcOp::ALL.into_iter().find(|op| op.verb() == verb)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SortOrder {
    Ascending,
    Descending,
}

/// Actions owned by a module. Their verbs are reserved, so they can never
/// collide with environment actions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModuleAction {
    Query(String),
    NextStepTo(String),
    Calc { op: CalcOp, lhs: i64, rhs: i64 },
    Sort(SortOrder),
}

impl fmt::Display for ModuleAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleAction::Query(term) => write!(f, "query {term}"),
            ModuleAction::NextStepTo(room) => write!(f, "next step to {room}"),
            ModuleAction::Calc { op, lhs, rhs } => write!(f, "{} {lhs} {rhs}", op.verb()),
            ModuleAction::Sort(SortOrder::Ascending) => f.write_str("sort ascending"),
            ModuleAction::Sort(SortOrder::Descending) => f.write_str("sort descending"),
        }
    }
}

pub trait SymbolicModule: Send {
    fn name(&self) -> &'static str;

    /// Scrapes one observation text.
    fn observe(&mut self, text: &str);

    /// The actions this module currently offers.
    fn enumerate(&self) -> Vec<ModuleAction>;

    /// Answers an action. Only module-internal state may change.
    fn respond(&mut self, action: &ModuleAction) -> Result<String>;
}

/// The module each game is paired with.
pub fn module_for(game: GameId) -> Box<dyn SymbolicModule> {
    match game {
        GameId::Twc => Box::new(KbModule::new(KnowledgeBase::shared())),
        GameId::MapReader => Box::new(Navigator::default()),
        GameId::Arithmetic => Box::new(Calculator::default()),
        GameId::Sorting => Box::new(Sorter::default()),
    }
}

/// Which side produced the next observation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Module,
    Environment,
}

/// Module-first dispatch: an action in the module set is answered by the
/// module and leaves the world untouched; any other valid action runs in the
/// environment.
pub fn dispatch(
    action: &Action,
    valid: &ValidActionSet,
    world: &mut WorldState,
    module: Option<&mut (dyn SymbolicModule + '_)>,
) -> Result<(Route, String)> {
    if !valid.contains(action) {
        return Err(Error::InvalidAction(action.to_string()));
    }
    match (action, module) {
        (Action::Module(m), Some(module)) => {
            let text = module.respond(m).unwrap_or_else(|e| e.to_string());
            Ok((Route::Module, text))
        }
        (Action::Module(_), None) => Err(Error::InvalidAction(action.to_string())),
        (env_action, _) => Ok((Route::Environment, execute_env(world, env_action)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{enumerate_env_actions, parse};
    use crate::world::{Furnishing, ItemSpec, RoomSpec, WorldSpec};

    fn kitchen() -> WorldState {
        WorldState::build(&WorldSpec {
            rooms: vec![RoomSpec {
                name: "kitchen".into(),
                furniture: vec![
                    Furnishing::open_box("box"),
                    Furnishing::Item(ItemSpec::named("2 bananas")),
                ],
            }],
            edges: vec![],
            start: 0,
            inventory: vec![ItemSpec::readable(
                "math problem",
                "Your task is to solve the following math problem: divide 22 by 11. Then, pick up the item with the same quantity as the answer, and place it in the box.",
            )],
        })
        .unwrap()
    }

    fn valid_for(world: &WorldState, module: &dyn SymbolicModule) -> ValidActionSet {
        ValidActionSet {
            env: enumerate_env_actions(world),
            module: module.enumerate().into_iter().map(Action::Module).collect(),
        }
    }

    #[test]
    fn calculator_action_routes_to_module() {
        let mut world = kitchen();
        let mut calc = Calculator::default();
        let problem = execute_env(&mut world.clone(), &parse("read math problem").unwrap()).unwrap();
        calc.observe(&problem);
        let before = world.clone();
        let valid = valid_for(&world, &calc);
        let (route, text) = dispatch(&parse("div 22 11").unwrap(), &valid, &mut world, Some(&mut calc)).unwrap();
        assert_eq!(route, Route::Module);
        assert_eq!(text, "The result of dividing 22 by 11 is 2.");
        assert_eq!(world, before);
    }

    #[test]
    fn world_action_routes_to_environment() {
        let mut world = kitchen();
        let mut calc = Calculator::default();
        let valid = valid_for(&world, &calc);
        let (route, text) =
            dispatch(&parse("take 2 bananas").unwrap(), &valid, &mut world, Some(&mut calc)).unwrap();
        assert_eq!(route, Route::Environment);
        assert_eq!(text, "You take the 2 bananas.");
    }

    #[test]
    fn action_in_neither_set_is_invalid() {
        let mut world = kitchen();
        let mut calc = Calculator::default();
        let valid = valid_for(&world, &calc);
        for utterance in ["div 22 11", "take box", "move north"] {
            let result = dispatch(&parse(utterance).unwrap(), &valid, &mut world, Some(&mut calc));
            assert!(matches!(result, Err(Error::InvalidAction(_))), "{utterance}");
        }
    }

    #[test]
    fn module_and_env_sets_are_disjoint() {
        let world = kitchen();
        let mut calc = Calculator::default();
        calc.observe("math problem: multiply 3 by 6.");
        let valid = valid_for(&world, &calc);
        assert!(valid.env.iter().all(|a| !a.is_module()));
        assert!(valid.module.iter().all(|a| a.is_module()));
    }
}
