use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::OnceLock;

use regex::Regex;

use super::{ModuleAction, SymbolicModule};
use crate::error::{Error, Result};
use crate::world::Direction;

/// Undirected room adjacency with optional direction labels, keyed by room name.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NavGraph {
    adjacency: BTreeMap<String, BTreeSet<String>>,
    labels: BTreeMap<(String, String), Direction>,
}

impl NavGraph {
    pub fn add_room(&mut self, room: &str) {
        self.adjacency.entry(room.to_string()).or_default();
    }

    pub fn add_edge(&mut self, a: &str, b: &str) {
        self.adjacency.entry(a.to_string()).or_default().insert(b.to_string());
        self.adjacency.entry(b.to_string()).or_default().insert(a.to_string());
    }

    pub fn add_labeled_edge(&mut self, from: &str, direction: Direction, to: &str) {
        self.add_edge(from, to);
        self.labels.insert((from.to_string(), to.to_string()), direction);
        self.labels.insert((to.to_string(), from.to_string()), direction.opposite());
    }

    pub fn rooms(&self) -> impl Iterator<Item = &str> {
        self.adjacency.keys().map(String::as_str)
    }

    pub fn contains(&self, room: &str) -> bool {
        self.adjacency.contains_key(room)
    }

    pub fn neighbors(&self, room: &str) -> impl Iterator<Item = &str> {
        self.adjacency.get(room).into_iter().flatten().map(String::as_str)
    }

    pub fn direction(&self, from: &str, to: &str) -> Option<Direction> {
        self.labels.get(&(from.to_string(), to.to_string())).copied()
    }

    /// Breadth-first shortest path, both ends included. Neighbours are
    /// expanded in name order, so ties always resolve the same way.
    pub fn shortest_path(&self, from: &str, to: &str) -> Option<Vec<String>> {
        if !self.contains(from) || !self.contains(to) {
            return None;
        }
        let mut parent: BTreeMap<&str, &str> = BTreeMap::new();
        let mut queue = VecDeque::from([from]);
        let mut visited = BTreeSet::from([from]);
        while let Some(room) = queue.pop_front() {
            if room == to {
                let mut path = vec![to.to_string()];
                let mut cursor = to;
                while let Some(&prev) = parent.get(cursor) {
                    path.push(prev.to_string());
                    cursor = prev;
                }
                path.reverse();
                return Some(path);
            }
            for next in self.neighbors(room) {
                if visited.insert(next) {
                    parent.insert(next, room);
                    queue.push_back(next);
                }
            }
        }
        None
    }
}

/// Builds a map from what it reads and sees, and gives the next hop toward
/// any room it knows about.
#[derive(Clone, Debug, Default)]
pub struct Navigator {
    graph: NavGraph,
    current: Option<String>,
}

struct Patterns {
    location: Regex,
    exit: Regex,
    map_line: Regex,
    list_split: Regex,
}

fn patterns() -> &'static Patterns {
    static PATTERNS: OnceLock<Patterns> = OnceLock::new();
    PATTERNS.get_or_init(|| Patterns {
        location: Regex::new(r"You are in the ([a-z][a-z ]*?)\.").expect("valid regex"),
        exit: Regex::new(r"To the (North|South|East|West) you see the ([a-z][a-z ]*?)\.").expect("valid regex"),
        map_line: Regex::new(r"(?m)^\s*The ([a-z][a-z ]*?) connects to the ([a-z ,]+?)\.\s*$").expect("valid regex"),
        list_split: Regex::new(r", | and ").expect("valid regex"),
    })
}

impl Navigator {
    pub fn graph(&self) -> &NavGraph {
        &self.graph
    }

    pub fn current(&self) -> Option<&str> {
        self.current.as_deref()
    }

    /// The first room to move to on a shortest known path to `target`.
    pub fn next_step(&self, target: &str) -> Result<String> {
        if !self.graph.contains(target) {
            return Err(Error::UnknownTarget(target.to_string()));
        }
        let current = self
            .current
            .as_deref()
            .ok_or_else(|| Error::NoKnownPath(target.to_string()))?;
        let path = self
            .graph
            .shortest_path(current, target)
            .ok_or_else(|| Error::NoKnownPath(target.to_string()))?;
        Ok(path.get(1).cloned().unwrap_or_else(|| current.to_string()))
    }
}

impl SymbolicModule for Navigator {
    fn name(&self) -> &'static str {
        "navigation"
    }

    fn observe(&mut self, text: &str) {
        let p = patterns();
        if let Some(caps) = p.location.captures(text) {
            let room = caps[1].to_string();
            self.graph.add_room(&room);
            self.current = Some(room);
        }
        if let Some(current) = self.current.clone() {
            for caps in p.exit.captures_iter(text) {
                let direction: Direction = caps[1].to_lowercase().parse().expect("pattern only matches directions");
                self.graph.add_labeled_edge(&current, direction, &caps[2]);
            }
        }
        for caps in p.map_line.captures_iter(text) {
            let room = caps[1].to_string();
            self.graph.add_room(&room);
            for neighbor in p.list_split.split(&caps[2]) {
                let neighbor = neighbor.trim();
                if !neighbor.is_empty() {
                    self.graph.add_edge(&room, neighbor);
                }
            }
        }
    }

    fn enumerate(&self) -> Vec<ModuleAction> {
        self.graph
            .rooms()
            .map(|room| ModuleAction::NextStepTo(room.to_string()))
            .collect()
    }

    fn respond(&mut self, action: &ModuleAction) -> Result<String> {
        let ModuleAction::NextStepTo(target) = action else {
            return Err(Error::InvalidAction(action.to_string()));
        };
        if self.current.as_deref() == Some(target.as_str()) {
            return Ok(format!("You are already in the {target}."));
        }
        let hop = self.next_step(target)?;
        Ok(format!("The next location to go to is: {hop}"))
    }
}
