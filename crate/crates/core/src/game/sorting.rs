//! Put every quantity into the box from smallest to largest. Quantities in
//! one episode share a dimension but may use different units.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::vocab::{materials, FRUITS};
use super::Progress;
use crate::action::Action;
use crate::module::{ModuleAction, SortOrder};
use crate::quantity::{Dimension, Quantity, Unit};
use crate::world::{Furnishing, ItemSpec, RoomSpec, WorldSpec};

pub const TASK: &str = "Your task is to sort objects by quantity. First, place the object with the smallest quantity in the box. Then, place the objects with the next smallest quantity in the box, and repeat until all objects have been placed in the box.";

pub const ANSWER_BOX: &str = "box";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SortingParams {
    pub dimension: Dimension,
    /// In the order they were placed in the kitchen.
    pub items: Vec<Quantity>,
    /// Ascending by normalized amount.
    pub gold_order: Vec<Quantity>,
}

fn sample_items(rng: &mut ChaCha8Rng, dimension: Dimension, n: usize) -> Vec<Quantity> {
    let mut items: Vec<Quantity> = Vec::with_capacity(n);
    match dimension {
        Dimension::Count => {
            let mut nouns: Vec<usize> = (0..FRUITS.len()).collect();
            nouns.shuffle(rng);
            while items.len() < n {
                let count = rng.gen_range(2..=50);
                if items.iter().all(|q| q.count != count) {
                    items.push(Quantity::new(count, None, FRUITS[nouns[items.len()]].1));
                }
            }
        }
        _ => {
            let mut names: Vec<&str> = materials(dimension).to_vec();
            names.shuffle(rng);
            let units = Unit::of_dimension(dimension);
            while items.len() < n {
                let unit = *units.choose(rng).expect("every measured dimension has units");
                let candidate = Quantity::new(rng.gen_range(1..=50), Some(unit), names[items.len()]);
                if items.iter().all(|q| q.normalized() != candidate.normalized()) {
                    items.push(candidate);
                }
            }
        }
    }
    items
}

pub fn sample(rng: &mut ChaCha8Rng) -> (SortingParams, WorldSpec) {
    let dimension = [Dimension::Count, Dimension::Mass, Dimension::Length, Dimension::Volume][rng.gen_range(0..4)];
    let n = rng.gen_range(3..=5);
    let items = sample_items(rng, dimension, n);
    let mut gold_order = items.clone();
    gold_order.sort_by(|a, b| a.cmp_normalized(b));

    let mut counter = Vec::new();
    let mut chair = Vec::new();
    for q in &items {
        if rng.gen_bool(0.5) {
            counter.push(ItemSpec::bundle(q.clone()));
        } else {
            chair.push(ItemSpec::bundle(q.clone()));
        }
    }
    let world = WorldSpec {
        rooms: vec![RoomSpec {
            name: "kitchen".into(),
            furniture: kitchen(counter, chair),
        }],
        edges: Vec::new(),
        start: 0,
        inventory: Vec::new(),
    };
    (
        SortingParams {
            dimension,
            items,
            gold_order,
        },
        world,
    )
}

/// The fixed kitchen the sorting game is played in.
pub fn kitchen(counter: Vec<ItemSpec>, chair: Vec<ItemSpec>) -> Vec<Furnishing> {
    vec![
        Furnishing::closed("fridge"),
        Furnishing::surface("counter", counter),
        Furnishing::surface("dining chair", chair),
        Furnishing::open_box(ANSWER_BOX),
        Furnishing::closed("dishwasher"),
        Furnishing::closed("trash can"),
        Furnishing::fixture("oven"),
        Furnishing::closed("cutlery drawer"),
        Furnishing::fixture("stove"),
        Furnishing::closed("kitchen cupboard"),
    ]
}

impl SortingParams {
    pub fn problem_key(&self) -> String {
        let mut amounts: Vec<u64> = self.items.iter().map(|q| q.normalized().amount).collect();
        amounts.sort_unstable();
        let amounts: Vec<String> = amounts.iter().map(u64::to_string).collect();
        format!("{:?}:{}", self.dimension, amounts.join(","))
    }

    pub(crate) fn advance(&self, progress: Progress, action: &Action) -> Progress {
        let Action::Put { item, container } = action else {
            return progress;
        };
        if container != ANSWER_BOX {
            return progress;
        }
        let n = self.gold_order.len();
        let placed = (progress.score * n as f64).round() as usize;
        if self.gold_order.get(placed).map(Quantity::label).as_deref() != Some(item.as_str()) {
            return Progress::failed();
        }
        if placed + 1 == n {
            Progress::completed()
        } else {
            Progress {
                score: (placed + 1) as f64 / n as f64,
                ..progress
            }
        }
    }

    pub fn oracle(&self, with_modules: bool) -> Vec<Action> {
        let mut gold = Vec::new();
        if with_modules {
            gold.push(Action::Module(ModuleAction::Sort(SortOrder::Ascending)));
        }
        for q in &self.gold_order {
            gold.push(Action::Take(q.label()));
            gold.push(Action::put(q.label(), ANSWER_BOX));
        }
        gold
    }
}
