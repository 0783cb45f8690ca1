//! Word lists and bundled data assets used by the generators.

use std::sync::OnceLock;

use crate::quantity::Dimension;
use crate::world::ContainerStyle;

const CONTAINERS_ASSET: &str = include_str!("../../data/containers.tsv");
const LOCATIONS_ASSET: &str = include_str!("../../data/locations.txt");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContainerInfo {
    pub name: String,
    pub room: String,
    pub style: ContainerStyle,
}

/// Household containers and the room each one lives in.
pub fn containers() -> &'static [ContainerInfo] {
    static TABLE: OnceLock<Vec<ContainerInfo>> = OnceLock::new();
    TABLE.get_or_init(|| {
        CONTAINERS_ASSET
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|line| {
                let mut fields = line.split('\t');
                let name = fields.next().expect("container name").to_string();
                let room = fields.next().expect("container room").to_string();
                let style = match fields.next() {
                    Some("surface") => ContainerStyle::Surface,
                    _ => ContainerStyle::Box,
                };
                ContainerInfo { name, room, style }
            })
            .collect()
    })
}

pub fn container(name: &str) -> Option<&'static ContainerInfo> {
    containers().iter().find(|c| c.name == name)
}

pub fn containers_in(room: &str) -> Vec<&'static ContainerInfo> {
    containers().iter().filter(|c| c.room == room).collect()
}

/// The 50-name location pool for generated maps.
pub fn locations() -> Vec<&'static str> {
    LOCATIONS_ASSET.lines().map(str::trim).filter(|l| !l.is_empty()).collect()
}

/// `(singular, plural)` nouns for counted bundles.
pub const FRUITS: &[(&str, &str)] = &[
    ("apple", "apples"),
    ("banana", "bananas"),
    ("orange", "oranges"),
    ("pear", "pears"),
    ("peach", "peaches"),
    ("papaya", "papayas"),
    ("tangerine", "tangerines"),
    ("strawberry", "strawberries"),
    ("mango", "mangoes"),
    ("plum", "plums"),
    ("kiwi", "kiwis"),
    ("lemon", "lemons"),
    ("lime", "limes"),
    ("cherry", "cherries"),
    ("grape", "grapes"),
    ("apricot", "apricots"),
    ("fig", "figs"),
    ("coconut", "coconuts"),
    ("melon", "melons"),
    ("pineapple", "pineapples"),
];

pub fn fruit_noun(index: usize, count: u32) -> &'static str {
    let (singular, plural) = FRUITS[index];
    if count == 1 {
        singular
    } else {
        plural
    }
}

pub fn materials(dimension: Dimension) -> &'static [&'static str] {
    match dimension {
        Dimension::Mass => &[
            "oak", "brick", "cedar", "marble", "copper", "steel", "iron", "gold", "silver", "sand",
            "clay", "granite", "salt", "coal", "lead", "tin",
        ],
        Dimension::Length => &[
            "rope", "wire", "ribbon", "cable", "chain", "string", "pipe", "tape", "thread", "fabric",
            "twine", "hose",
        ],
        Dimension::Volume => &[
            "water", "oil", "milk", "juice", "vinegar", "honey", "syrup", "ink", "paint", "soup",
            "broth", "tea",
        ],
        Dimension::Count => &[],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::parse;
    use crate::module::KnowledgeBase;

    #[test]
    fn assets_load() {
        assert_eq!(locations().len(), 50);
        assert!(containers().len() >= 100);
        let kb = KnowledgeBase::shared();
        for c in kb.containers() {
            assert!(container(c).is_some(), "kb container {c} has no room");
        }
    }

    #[test]
    fn every_name_survives_the_parser() {
        let kb = KnowledgeBase::shared();
        let names = kb
            .vocabulary()
            .into_iter()
            .chain(locations())
            .map(str::to_string)
            .collect::<Vec<_>>();
        for name in names {
            let take = format!("take {name}");
            assert_eq!(parse(&take).unwrap().to_string(), take);
            let put = format!("put {name} in box");
            assert_eq!(parse(&put).unwrap().to_string(), put);
            assert!(!name.contains(" and "), "{name}");
        }
    }
}
