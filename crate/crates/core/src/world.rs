//! The text-world substrate shared by every game: rooms joined by compass
//! directions, containers and supporters, portable objects, the agent's
//! inventory, and deterministic rendering of what the agent sees.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantity::Quantity;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    North,
    South,
    East,
    West,
}

impl Direction {
    pub const ALL: [Direction; 4] = [
        Direction::North,
        Direction::South,
        Direction::East,
        Direction::West,
    ];

    pub fn opposite(self) -> Direction {
        match self {
            Direction::North => Direction::South,
            Direction::South => Direction::North,
            Direction::East => Direction::West,
            Direction::West => Direction::East,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::North => "north",
            Direction::South => "south",
            Direction::East => "east",
            Direction::West => "west",
        }
    }

    fn capitalized(self) -> &'static str {
        match self {
            Direction::North => "North",
            Direction::South => "South",
            Direction::East => "East",
            Direction::West => "West",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Direction::ALL
            .into_iter()
            .find(|d| d.as_str() == s)
            .ok_or_else(|| Error::UnrecognizedCommand(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RoomId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EntityId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntityKind {
    Portable,
    Container,
    Fixture,
    Readable,
}

/// How a container presents its contents: things are *in* a box but *on* a counter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ContainerStyle {
    Box,
    Surface,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Entity {
    pub id: EntityId,
    pub name: String,
    pub kind: EntityKind,
    pub style: Option<ContainerStyle>,
    pub open: Option<bool>,
    pub contents: Vec<EntityId>,
    pub quantity: Option<Quantity>,
    pub text: Option<String>,
}

impl Entity {
    pub fn is_portable(&self) -> bool {
        matches!(self.kind, EntityKind::Portable | EntityKind::Readable)
    }

    pub fn is_open_container(&self) -> bool {
        self.kind == EntityKind::Container && self.open == Some(true)
    }

    /// `a fridge`, `an oven`, or just `2 bananas` for counted bundles.
    pub fn indefinite(&self) -> String {
        if self.quantity.is_some() {
            return self.name.clone();
        }
        let article = match self.name.chars().next() {
            Some('a' | 'e' | 'i' | 'o' | 'u') => "an",
            _ => "a",
        };
        format!("{article} {}", self.name)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Room {
    pub id: RoomId,
    pub name: String,
    pub contents: Vec<EntityId>,
    pub connections: BTreeMap<Direction, RoomId>,
}

/// Where a portable entity currently is.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Place {
    Room(RoomId),
    Container(EntityId),
    Inventory,
}

/// What the agent perceives after each step.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Observation {
    /// Feedback for the last action (the room description at episode start).
    pub text: String,
    pub inventory: String,
    pub look: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WorldState {
    pub rooms: Vec<Room>,
    pub entities: Vec<Entity>,
    pub agent_location: RoomId,
    pub inventory: Vec<EntityId>,
    pub step_count: u32,
    pub score: f64,
    pub done: bool,
}

// ---------------------------------------------------------------------------
// Declarative world description, stored inside episode variations.

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ItemSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantity: Option<Quantity>,
}

impl ItemSpec {
    pub fn named(name: impl Into<String>) -> Self {
        ItemSpec {
            name: name.into(),
            text: None,
            quantity: None,
        }
    }

    pub fn readable(name: impl Into<String>, text: impl Into<String>) -> Self {
        ItemSpec {
            name: name.into(),
            text: Some(text.into()),
            quantity: None,
        }
    }

    pub fn bundle(quantity: Quantity) -> Self {
        ItemSpec {
            name: quantity.label(),
            text: None,
            quantity: Some(quantity),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Furnishing {
    Fixture {
        name: String,
    },
    Container {
        name: String,
        style: ContainerStyle,
        open: bool,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        contents: Vec<ItemSpec>,
    },
    Item(ItemSpec),
}

impl Furnishing {
    pub fn fixture(name: &str) -> Self {
        Furnishing::Fixture { name: name.into() }
    }

    pub fn closed(name: &str) -> Self {
        Furnishing::Container {
            name: name.into(),
            style: ContainerStyle::Box,
            open: false,
            contents: Vec::new(),
        }
    }

    pub fn open_box(name: &str) -> Self {
        Furnishing::Container {
            name: name.into(),
            style: ContainerStyle::Box,
            open: true,
            contents: Vec::new(),
        }
    }

    pub fn surface(name: &str, contents: Vec<ItemSpec>) -> Self {
        Furnishing::Container {
            name: name.into(),
            style: ContainerStyle::Surface,
            open: true,
            contents,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoomSpec {
    pub name: String,
    pub furniture: Vec<Furnishing>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub from: usize,
    pub direction: Direction,
    pub to: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorldSpec {
    pub rooms: Vec<RoomSpec>,
    #[serde(default)]
    pub edges: Vec<EdgeSpec>,
    pub start: usize,
    #[serde(default)]
    pub inventory: Vec<ItemSpec>,
}

const PLACEMENT_PREFIXES: [&str; 4] = [
    "In one part of the room you see",
    "There is also",
    "You also see",
    "In another part of the room you see",
];

/// `x`, `x, and y`, `x, y, and z`.
pub fn list_phrase(items: &[String]) -> String {
    match items {
        [] => String::new(),
        [only] => only.clone(),
        [init @ .., last] => format!("{}, and {last}", init.join(", ")),
    }
}

impl WorldState {
    /// Instantiates a world description. Each undirected edge is given once;
    /// the reverse connection is added here.
    pub fn build(spec: &WorldSpec) -> Result<WorldState> {
        if spec.rooms.is_empty() || spec.start >= spec.rooms.len() {
            return Err(Error::MalformedWorld("start room out of range".into()));
        }
        let mut world = WorldState {
            rooms: Vec::with_capacity(spec.rooms.len()),
            entities: Vec::new(),
            agent_location: RoomId(spec.start),
            inventory: Vec::new(),
            step_count: 0,
            score: 0.0,
            done: false,
        };
        for (index, room) in spec.rooms.iter().enumerate() {
            let mut contents = Vec::with_capacity(room.furniture.len());
            for furnishing in &room.furniture {
                contents.push(world.add_furnishing(furnishing));
            }
            world.rooms.push(Room {
                id: RoomId(index),
                name: room.name.clone(),
                contents,
                connections: BTreeMap::new(),
            });
        }
        for item in &spec.inventory {
            let id = world.add_item(item);
            world.inventory.push(id);
        }
        for edge in &spec.edges {
            world.connect(edge.from, edge.direction, edge.to)?;
        }
        let mut names: Vec<&str> = world.entities.iter().map(|e| e.name.as_str()).collect();
        names.sort_unstable();
        if let Some(dup) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::MalformedWorld(format!("duplicate entity name {:?}", dup[0])));
        }
        Ok(world)
    }

    fn add_item(&mut self, item: &ItemSpec) -> EntityId {
        let id = EntityId(self.entities.len());
        self.entities.push(Entity {
            id,
            name: item.name.clone(),
            kind: if item.text.is_some() {
                EntityKind::Readable
            } else {
                EntityKind::Portable
            },
            style: None,
            open: None,
            contents: Vec::new(),
            quantity: item.quantity.clone(),
            text: item.text.clone(),
        });
        id
    }

    fn add_furnishing(&mut self, furnishing: &Furnishing) -> EntityId {
        match furnishing {
            Furnishing::Item(item) => self.add_item(item),
            Furnishing::Fixture { name } => {
                let id = EntityId(self.entities.len());
                self.entities.push(Entity {
                    id,
                    name: name.clone(),
                    kind: EntityKind::Fixture,
                    style: None,
                    open: None,
                    contents: Vec::new(),
                    quantity: None,
                    text: None,
                });
                id
            }
            Furnishing::Container {
                name,
                style,
                open,
                contents,
            } => {
                let id = EntityId(self.entities.len());
                self.entities.push(Entity {
                    id,
                    name: name.clone(),
                    kind: EntityKind::Container,
                    style: Some(*style),
                    open: Some(*open),
                    contents: Vec::new(),
                    quantity: None,
                    text: None,
                });
                let inner: Vec<EntityId> = contents.iter().map(|item| self.add_item(item)).collect();
                self.entities[id.0].contents = inner;
                id
            }
        }
    }

    fn connect(&mut self, from: usize, direction: Direction, to: usize) -> Result<()> {
        if from >= self.rooms.len() || to >= self.rooms.len() || from == to {
            return Err(Error::MalformedWorld(format!("bad edge {from} -> {to}")));
        }
        let back = direction.opposite();
        if self.rooms[from].connections.contains_key(&direction)
            || self.rooms[to].connections.contains_key(&back)
        {
            return Err(Error::MalformedWorld(format!(
                "direction {direction} already used between rooms {from} and {to}"
            )));
        }
        self.rooms[from].connections.insert(direction, RoomId(to));
        self.rooms[to].connections.insert(back, RoomId(from));
        Ok(())
    }

    pub fn room(&self, id: RoomId) -> &Room {
        &self.rooms[id.0]
    }

    pub fn current_room(&self) -> &Room {
        self.room(self.agent_location)
    }

    pub fn entity(&self, id: EntityId) -> &Entity {
        &self.entities[id.0]
    }

    pub fn find(&self, name: &str) -> Option<EntityId> {
        self.entities.iter().find(|e| e.name == name).map(|e| e.id)
    }

    pub fn room_named(&self, name: &str) -> Option<RoomId> {
        self.rooms.iter().find(|r| r.name == name).map(|r| r.id)
    }

    pub fn locate(&self, id: EntityId) -> Option<Place> {
        if self.inventory.contains(&id) {
            return Some(Place::Inventory);
        }
        for room in &self.rooms {
            if room.contents.contains(&id) {
                return Some(Place::Room(room.id));
            }
        }
        self.entities
            .iter()
            .find(|e| e.contents.contains(&id))
            .map(|e| Place::Container(e.id))
    }

    /// The room a placed entity is ultimately in, or `None` when carried.
    pub fn room_of(&self, id: EntityId) -> Option<RoomId> {
        match self.locate(id)? {
            Place::Room(room) => Some(room),
            Place::Container(container) => self.room_of(container),
            Place::Inventory => None,
        }
    }

    /// Portable entities the agent can pick up: loose in the current room or
    /// inside one of its open containers.
    pub fn reachable_portables(&self) -> Vec<EntityId> {
        let mut found = Vec::new();
        for &id in &self.current_room().contents {
            let entity = self.entity(id);
            if entity.is_portable() {
                found.push(id);
            } else if entity.is_open_container() {
                found.extend(entity.contents.iter().copied().filter(|&c| self.entity(c).is_portable()));
            }
        }
        found
    }

    pub fn open_containers_here(&self) -> Vec<EntityId> {
        self.current_room()
            .contents
            .iter()
            .copied()
            .filter(|&id| self.entity(id).is_open_container())
            .collect()
    }

    pub fn move_entity(&mut self, id: EntityId, destination: Place) -> Result<()> {
        let entity = self
            .entities
            .get(id.0)
            .ok_or_else(|| Error::NoSuchEntity(format!("#{}", id.0)))?;
        if !entity.is_portable() {
            return Err(Error::NotPortable(entity.name.clone()));
        }
        match destination {
            Place::Container(container) => {
                let target = self
                    .entities
                    .get(container.0)
                    .ok_or_else(|| Error::NoSuchEntity(format!("#{}", container.0)))?;
                if target.kind != EntityKind::Container {
                    return Err(Error::NoSuchEntity(format!("container {}", target.name)));
                }
                if target.open != Some(true) {
                    return Err(Error::ContainerClosed(target.name.clone()));
                }
            }
            Place::Room(room) if room.0 >= self.rooms.len() => {
                return Err(Error::NoSuchEntity(format!("room #{}", room.0)));
            }
            _ => {}
        }
        let current = self
            .locate(id)
            .ok_or_else(|| Error::NoSuchEntity(self.entity(id).name.clone()))?;
        if current == destination {
            return Ok(());
        }
        match current {
            Place::Room(room) => self.rooms[room.0].contents.retain(|&e| e != id),
            Place::Container(container) => self.entities[container.0].contents.retain(|&e| e != id),
            Place::Inventory => self.inventory.retain(|&e| e != id),
        }
        match destination {
            Place::Room(room) => self.rooms[room.0].contents.push(id),
            Place::Container(container) => self.entities[container.0].contents.push(id),
            Place::Inventory => self.inventory.push(id),
        }
        Ok(())
    }

    fn describe(&self, id: EntityId) -> String {
        let entity = self.entity(id);
        let listed = || {
            let names: Vec<String> = entity.contents.iter().map(|&c| self.entity(c).indefinite()).collect();
            list_phrase(&names)
        };
        match (entity.kind, entity.style, entity.open) {
            (EntityKind::Container, _, Some(false)) => format!("{} that is closed", entity.indefinite()),
            (EntityKind::Container, Some(ContainerStyle::Surface), _) => {
                if entity.contents.is_empty() {
                    format!("{}, that has nothing on it", entity.indefinite())
                } else {
                    format!("{} that has {} on it", entity.indefinite(), listed())
                }
            }
            (EntityKind::Container, _, _) => {
                if entity.contents.is_empty() {
                    format!("{}, that is empty", entity.indefinite())
                } else {
                    format!("{} that contains {}", entity.indefinite(), listed())
                }
            }
            _ => entity.indefinite(),
        }
    }

    /// The room description returned by `look around`.
    pub fn render_room(&self) -> String {
        let room = self.current_room();
        let mut out = format!("You are in the {}.", room.name);
        for (i, &id) in room.contents.iter().enumerate() {
            out.push(' ');
            out.push_str(PLACEMENT_PREFIXES[i % PLACEMENT_PREFIXES.len()]);
            out.push(' ');
            out.push_str(&self.describe(id));
            out.push('.');
        }
        if !room.connections.is_empty() {
            let exits: Vec<String> = room
                .connections
                .iter()
                .map(|(dir, to)| format!("To the {} you see the {}.", dir.capitalized(), self.room(*to).name))
                .collect();
            out.push('\n');
            out.push_str(&exits.join(" "));
        }
        out
    }

    pub fn render_inventory(&self) -> String {
        if self.inventory.is_empty() {
            return "Your inventory is currently empty.".to_string();
        }
        self.inventory
            .iter()
            .map(|&id| self.entity(id).indefinite())
            .collect::<Vec<_>>()
            .join("\n")
    }

    pub fn observe(&self, text: impl Into<String>) -> Observation {
        Observation {
            text: text.into(),
            inventory: self.render_inventory(),
            look: self.render_room(),
        }
    }

    /// Sorted entity ids, used to check that actions never create or destroy anything.
    pub fn entity_census(&self) -> Vec<EntityId> {
        let mut ids: Vec<EntityId> = self.inventory.clone();
        for room in &self.rooms {
            ids.extend(&room.contents);
        }
        for entity in &self.entities {
            ids.extend(&entity.contents);
        }
        ids.sort_unstable();
        ids
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn foyer_and_corridor() -> WorldState {
        WorldState::build(&WorldSpec {
            rooms: vec![
                RoomSpec {
                    name: "foyer".into(),
                    furniture: vec![Furnishing::open_box("box")],
                },
                RoomSpec {
                    name: "corridor".into(),
                    furniture: vec![
                        Furnishing::closed("shoe cabinet"),
                        Furnishing::surface("key holder", vec![]),
                        Furnishing::Item(ItemSpec::named("coin")),
                    ],
                },
            ],
            edges: vec![EdgeSpec {
                from: 0,
                direction: Direction::East,
                to: 1,
            }],
            start: 0,
            inventory: vec![ItemSpec::readable("map", "The map reads:")],
        })
        .unwrap()
    }

    #[test]
    fn foyer_rendering() {
        let world = foyer_and_corridor();
        assert_eq!(
            world.render_room(),
            "You are in the foyer. In one part of the room you see a box, that is empty.\n\
             To the East you see the corridor."
        );
    }

    #[test]
    fn kitchen_surface_listing() {
        let world = WorldState::build(&WorldSpec {
            rooms: vec![RoomSpec {
                name: "kitchen".into(),
                furniture: vec![
                    Furnishing::closed("fridge"),
                    Furnishing::surface(
                        "counter",
                        vec![
                            ItemSpec::bundle(Quantity::new(6, None, "oranges")),
                            ItemSpec::bundle(Quantity::new(2, None, "bananas")),
                        ],
                    ),
                ],
            }],
            edges: vec![],
            start: 0,
            inventory: vec![],
        })
        .unwrap();
        assert_eq!(
            world.render_room(),
            "You are in the kitchen. In one part of the room you see a fridge that is closed. \
             There is also a counter that has 6 oranges, and 2 bananas on it."
        );
    }

    #[test]
    fn empty_room_has_no_exit_sentences() {
        let world = WorldState::build(&WorldSpec {
            rooms: vec![RoomSpec {
                name: "attic".into(),
                furniture: vec![],
            }],
            edges: vec![],
            start: 0,
            inventory: vec![],
        })
        .unwrap();
        assert_eq!(world.render_room(), "You are in the attic.");
    }

    #[test]
    fn connections_are_symmetric() {
        let world = foyer_and_corridor();
        assert_eq!(world.rooms[0].connections[&Direction::East], RoomId(1));
        assert_eq!(world.rooms[1].connections[&Direction::West], RoomId(0));
    }

    #[test]
    fn conflicting_edge_rejected() {
        let spec = WorldSpec {
            rooms: vec![
                RoomSpec { name: "a".into(), furniture: vec![] },
                RoomSpec { name: "b".into(), furniture: vec![] },
                RoomSpec { name: "c".into(), furniture: vec![] },
            ],
            edges: vec![
                EdgeSpec { from: 0, direction: Direction::North, to: 1 },
                EdgeSpec { from: 0, direction: Direction::North, to: 2 },
            ],
            start: 0,
            inventory: vec![],
        };
        assert!(matches!(WorldState::build(&spec), Err(Error::MalformedWorld(_))));
    }

    #[test]
    fn inventory_rendering() {
        let mut world = foyer_and_corridor();
        assert_eq!(world.render_inventory(), "a map");
        world.inventory.clear();
        assert_eq!(world.render_inventory(), "Your inventory is currently empty.");
        world = foyer_and_corridor();
        let coin = world.find("coin").unwrap();
        world.move_entity(coin, Place::Inventory).unwrap();
        assert_eq!(world.render_inventory(), "a map\na coin");
        assert_eq!(world.render_inventory(), world.render_inventory());
    }

    #[test]
    fn take_coin_moves_it_out_of_the_room() {
        let mut world = foyer_and_corridor();
        let coin = world.find("coin").unwrap();
        world.move_entity(coin, Place::Inventory).unwrap();
        assert_eq!(world.locate(coin), Some(Place::Inventory));
        assert!(!world.rooms[1].contents.contains(&coin));
    }

    #[test]
    fn moving_to_current_place_is_a_no_op() {
        let mut world = foyer_and_corridor();
        let coin = world.find("coin").unwrap();
        let before = world.clone();
        world.move_entity(coin, Place::Room(RoomId(1))).unwrap();
        assert_eq!(world, before);
    }

    #[test]
    fn closed_containers_reject_and_open_ones_accept() {
        // Every container in the world, each tried in both open states.
        let base = foyer_and_corridor();
        let coin = base.find("coin").unwrap();
        let containers: Vec<EntityId> = base
            .entities
            .iter()
            .filter(|e| e.kind == EntityKind::Container)
            .map(|e| e.id)
            .collect();
        assert!(!containers.is_empty());
        for &container in &containers {
            for open in [false, true] {
                let mut world = base.clone();
                world.entities[container.0].open = Some(open);
                let result = world.move_entity(coin, Place::Container(container));
                if open {
                    assert!(result.is_ok());
                    assert_eq!(world.locate(coin), Some(Place::Container(container)));
                } else {
                    assert!(matches!(result, Err(Error::ContainerClosed(_))));
                    assert_eq!(world, base_with_open(&base, container, open));
                }
            }
        }
    }

    fn base_with_open(base: &WorldState, container: EntityId, open: bool) -> WorldState {
        let mut w = base.clone();
        w.entities[container.0].open = Some(open);
        w
    }

    #[test]
    fn fixtures_and_containers_are_not_portable() {
        let mut world = foyer_and_corridor();
        let cabinet = world.find("shoe cabinet").unwrap();
        assert!(matches!(
            world.move_entity(cabinet, Place::Inventory),
            Err(Error::NotPortable(_))
        ));
        assert!(matches!(
            world.move_entity(EntityId(999), Place::Inventory),
            Err(Error::NoSuchEntity(_))
        ));
    }

    #[test]
    fn list_phrase_forms() {
        let s = |v: &[&str]| list_phrase(&v.iter().map(|x| x.to_string()).collect::<Vec<_>>());
        assert_eq!(s(&[]), "");
        assert_eq!(s(&["a coin"]), "a coin");
        assert_eq!(s(&["6 oranges", "2 bananas"]), "6 oranges, and 2 bananas");
        assert_eq!(s(&["x", "y", "z"]), "x, y, and z");
    }
}
