//! Fetch a coin from a named room and bring it back to the box in the
//! starting room. The agent carries a map listing every connection.

use std::collections::{BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::vocab;
use super::Progress;
use crate::action::Action;
use crate::module::{ModuleAction, NavGraph};
use crate::world::{ContainerStyle, Direction, EdgeSpec, Furnishing, ItemSpec, RoomSpec, WorldSpec};

pub const COIN: &str = "coin";
pub const MAP: &str = "map";
pub const ANSWER_BOX: &str = "box";

const ROOMS: std::ops::RangeInclusive<usize> = 4..=15;
const EXTRA_EDGES: std::ops::RangeInclusive<usize> = 0..=3;
const FURNITURE: std::ops::RangeInclusive<usize> = 2..=5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapParams {
    pub locations: Vec<String>,
    /// Each undirected connection once, labelled from `from`'s side.
    pub edges: Vec<EdgeSpec>,
    pub start: usize,
    pub target: usize,
    pub distance: usize,
}

/// Hop counts from `start` to every room, by breadth-first search.
pub fn distances(n: usize, edges: &[EdgeSpec], start: usize) -> Vec<Option<usize>> {
    let mut adjacency = vec![Vec::new(); n];
    for e in edges {
        adjacency[e.from].push(e.to);
        adjacency[e.to].push(e.from);
    }
    let mut dist = vec![None; n];
    dist[start] = Some(0);
    let mut queue = VecDeque::from([start]);
    while let Some(room) = queue.pop_front() {
        let d = dist[room].expect("queued rooms have a distance");
        for &next in &adjacency[room] {
            if dist[next].is_none() {
                dist[next] = Some(d + 1);
                queue.push_back(next);
            }
        }
    }
    dist
}

fn used_directions(edges: &[EdgeSpec], room: usize) -> BTreeSet<Direction> {
    edges
        .iter()
        .filter_map(|e| {
            if e.from == room {
                Some(e.direction)
            } else if e.to == room {
                Some(e.direction.opposite())
            } else {
                None
            }
        })
        .collect()
}

fn adjacent(edges: &[EdgeSpec], a: usize, b: usize) -> bool {
    edges
        .iter()
        .any(|e| (e.from == a && e.to == b) || (e.from == b && e.to == a))
}

/// A direction free on `a`'s side whose opposite is free on `b`'s side.
fn free_direction(rng: &mut ChaCha8Rng, edges: &[EdgeSpec], a: usize, b: usize) -> Option<Direction> {
    let used_a = used_directions(edges, a);
    let used_b = used_directions(edges, b);
    let free: Vec<Direction> = Direction::ALL
        .into_iter()
        .filter(|d| !used_a.contains(d) && !used_b.contains(&d.opposite()))
        .collect();
    free.choose(rng).copied()
}

/// A random spanning tree plus a few extra connections, at most four per room.
pub fn sample_edges(rng: &mut ChaCha8Rng, n: usize) -> Vec<EdgeSpec> {
    let mut edges = Vec::new();
    for room in 1..n {
        loop {
            let parent = rng.gen_range(0..room);
            if let Some(direction) = free_direction(rng, &edges, parent, room) {
                edges.push(EdgeSpec {
                    from: parent,
                    direction,
                    to: room,
                });
                break;
            }
        }
    }
    let extra = rng.gen_range(EXTRA_EDGES);
    let mut added = 0;
    for _ in 0..50 {
        if added == extra || n < 3 {
            break;
        }
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a == b || adjacent(&edges, a, b) {
            continue;
        }
        if let Some(direction) = free_direction(rng, &edges, a, b) {
            edges.push(EdgeSpec { from: a, direction, to: b });
            added += 1;
        }
    }
    edges
}

fn neighbors_in_order(edges: &[EdgeSpec], room: usize) -> Vec<usize> {
    let mut out: Vec<usize> = edges
        .iter()
        .filter_map(|e| {
            if e.from == room {
                Some(e.to)
            } else if e.to == room {
                Some(e.from)
            } else {
                None
            }
        })
        .collect();
    out.sort_unstable();
    out
}

/// `x`, `x and y`, `x, y and z`.
fn and_list(items: &[&str]) -> String {
    match items {
        [] => String::new(),
        [only] => only.to_string(),
        [init @ .., last] => format!("{} and {last}", init.join(", ")),
    }
}

pub fn map_text(locations: &[String], edges: &[EdgeSpec]) -> String {
    let mut lines = vec!["The map reads:".to_string()];
    for (room, name) in locations.iter().enumerate() {
        let names: Vec<&str> = neighbors_in_order(edges, room)
            .into_iter()
            .map(|i| locations[i].as_str())
            .collect();
        lines.push(format!("The {name} connects to the {}.", and_list(&names)));
    }
    lines.join("\n")
}

pub fn sample(rng: &mut ChaCha8Rng) -> (MapParams, WorldSpec) {
    let mut pool = vocab::locations();
    pool.shuffle(rng);
    let n = rng.gen_range(ROOMS);
    let locations: Vec<String> = pool[..n].iter().map(|s| s.to_string()).collect();
    let edges = sample_edges(rng, n);
    let start = rng.gen_range(0..n);

    let dist = distances(n, &edges, start);
    let reachable: BTreeSet<usize> = dist.iter().flatten().copied().filter(|d| (1..=4).contains(d)).collect();
    let reachable: Vec<usize> = reachable.into_iter().collect();
    let distance = *reachable.choose(rng).expect("a connected map of two or more rooms has a neighbour");
    let candidates: Vec<usize> = (0..n).filter(|&r| dist[r] == Some(distance)).collect();
    let target = *candidates.choose(rng).expect("distance was drawn from the rooms");

    let mut rooms = Vec::with_capacity(n);
    let mut used = BTreeSet::from([ANSWER_BOX.to_string(), COIN.to_string(), MAP.to_string()]);
    for (index, name) in locations.iter().enumerate() {
        let mut furniture = Vec::new();
        if index == start {
            furniture.push(Furnishing::open_box(ANSWER_BOX));
        }
        if index == target {
            furniture.push(Furnishing::Item(ItemSpec::named(COIN)));
        }
        let mut options = vocab::containers_in(name);
        options.retain(|info| !used.contains(&info.name));
        options.shuffle(rng);
        for info in options.into_iter().take(rng.gen_range(FURNITURE)) {
            used.insert(info.name.clone());
            let open = info.style == ContainerStyle::Surface || rng.gen_bool(0.7);
            furniture.push(Furnishing::Container {
                name: info.name.clone(),
                style: info.style,
                open,
                contents: Vec::new(),
            });
        }
        rooms.push(RoomSpec {
            name: name.clone(),
            furniture,
        });
    }

    let world = WorldSpec {
        rooms,
        edges: edges.clone(),
        start,
        inventory: vec![ItemSpec::readable(MAP, map_text(&locations, &edges))],
    };
    let params = MapParams {
        locations,
        edges,
        start,
        target,
        distance,
    };
    (params, world)
}

impl MapParams {
    pub fn problem_key(&self) -> String {
        let mut edges: Vec<String> = self
            .edges
            .iter()
            .map(|e| {
                let (a, b) = (&self.locations[e.from], &self.locations[e.to]);
                if a <= b {
                    format!("{a}-{b}")
                } else {
                    format!("{b}-{a}")
                }
            })
            .collect();
        edges.sort();
        format!(
            "{}|{}|{}",
            self.locations[self.start],
            self.locations[self.target],
            edges.join(",")
        )
    }

    pub fn task_description(&self) -> String {
        format!(
            "Your task is to take the coin that is located in the {}, and put it into the box found in the {}. A map is provided, that you may find helpful.",
            self.locations[self.target], self.locations[self.start]
        )
    }

    /// The full map as the navigator would assemble it.
    pub fn graph(&self) -> NavGraph {
        let mut graph = NavGraph::default();
        for name in &self.locations {
            graph.add_room(name);
        }
        for e in &self.edges {
            graph.add_labeled_edge(&self.locations[e.from], e.direction, &self.locations[e.to]);
        }
        graph
    }

    pub(crate) fn advance(&self, progress: Progress, action: &Action) -> Progress {
        match action {
            Action::Take(item) if item == COIN => Progress {
                score: progress.score.max(0.5),
                ..progress
            },
            Action::Put { item, container } if item == COIN && container == ANSWER_BOX => Progress::completed(),
            _ => progress,
        }
    }

    /// Walks hop by hop, asking the same shortest-path question the navigator
    /// answers, so the module's replies always agree with the moves taken.
    fn walk(&self, graph: &NavGraph, from: &str, to: &str, with_modules: bool, gold: &mut Vec<Action>) {
        let mut here = from.to_string();
        while here != to {
            let path = graph.shortest_path(&here, to).expect("generated maps are connected");
            let next = path[1].clone();
            if with_modules {
                gold.push(Action::Module(ModuleAction::NextStepTo(to.to_string())));
            }
            gold.push(Action::Move(graph.direction(&here, &next).expect("every edge is labelled")));
            here = next;
        }
    }

    pub fn oracle(&self, with_modules: bool) -> Vec<Action> {
        let graph = self.graph();
        let start = &self.locations[self.start];
        let target = &self.locations[self.target];
        let mut gold = vec![Action::Read(MAP.into())];
        self.walk(&graph, start, target, with_modules, &mut gold);
        gold.push(Action::Take(COIN.into()));
        self.walk(&graph, target, start, with_modules, &mut gold);
        gold.push(Action::put(COIN, ANSWER_BOX));
        gold
    }
}
