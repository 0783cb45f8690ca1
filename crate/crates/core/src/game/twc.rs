//! One misplaced household object must go back where it belongs. Where things
//! belong comes from the bundled knowledge base.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::vocab;
use super::Progress;
use crate::action::Action;
use crate::error::{Error, Result};
use crate::module::{KnowledgeBase, ModuleAction};
use crate::world::{ContainerStyle, Furnishing, ItemSpec, RoomSpec, WorldSpec};

pub const TASK: &str = "Your task is to pick up objects, then place them in their usual locations in the environment.";

const DISTRACTORS: std::ops::RangeInclusive<usize> = 5..=7;
const TIDY_OBJECTS: std::ops::RangeInclusive<usize> = 0..=3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwcParams {
    pub target: String,
    pub room: String,
    /// The one home of the target furnished in the room. Kept as a list so a
    /// world with several homes scores the same way.
    pub canonical_containers: Vec<String>,
    pub distractor_containers: Vec<String>,
    /// Objects already sitting in one of their usual places.
    pub tidy_objects: Vec<String>,
}

pub fn sample(rng: &mut ChaCha8Rng) -> Result<(TwcParams, WorldSpec)> {
    let kb = KnowledgeBase::shared();
    let objects = kb.objects();
    let target = objects.choose(rng).ok_or_else(|| Error::MalformedWorld("empty knowledge base".into()))?;
    let homes = kb.locations_of(target);
    let anchor = homes.choose(rng).expect("every kb object has a location");
    let room = vocab::container(anchor)
        .ok_or_else(|| Error::MalformedWorld(format!("container {anchor} has no room")))?
        .room
        .clone();

    // Only the drawn home is furnished; any other home the object has in
    // this room is left out rather than offered as a distractor.
    let canonical = vec![anchor.to_string()];
    let mut others: Vec<&vocab::ContainerInfo> = vocab::containers_in(&room)
        .into_iter()
        .filter(|info| !homes.contains(&info.name.as_str()))
        .collect();
    others.shuffle(rng);
    others.truncate(rng.gen_range(DISTRACTORS));

    let mut furniture: Vec<(String, Furnishing)> = Vec::new();
    for name in &canonical {
        let style = vocab::container(name).expect("checked above").style;
        furniture.push((name.clone(), container(name, style, true)));
    }
    for info in &others {
        let open = info.style == ContainerStyle::Surface || rng.gen_bool(0.7);
        furniture.push((info.name.clone(), container(&info.name, info.style, open)));
    }

    // Put a few objects where they already belong, on open distractors only.
    let mut tidy_objects = Vec::new();
    let open_distractors: Vec<String> = furniture
        .iter()
        .filter(|(name, f)| !canonical.contains(name) && matches!(f, Furnishing::Container { open: true, .. }))
        .map(|(name, _)| name.clone())
        .collect();
    for _ in 0..rng.gen_range(TIDY_OBJECTS) {
        let Some(spot) = open_distractors.choose(rng) else {
            break;
        };
        let candidates: Vec<&str> = kb
            .query(spot)
            .into_iter()
            .map(|t| t.object.as_str())
            .filter(|o| o != target && !tidy_objects.iter().any(|t: &String| t == o))
            .collect();
        let Some(object) = candidates.choose(rng) else {
            continue;
        };
        tidy_objects.push(object.to_string());
        if let Some((_, Furnishing::Container { contents, .. })) = furniture.iter_mut().find(|(n, _)| n == spot) {
            contents.push(ItemSpec::named(*object));
        }
    }

    let mut layout: Vec<Furnishing> = furniture.into_iter().map(|(_, f)| f).collect();
    layout.push(Furnishing::Item(ItemSpec::named(*target)));
    layout.shuffle(rng);

    let world = WorldSpec {
        rooms: vec![RoomSpec {
            name: room.clone(),
            furniture: layout,
        }],
        edges: Vec::new(),
        start: 0,
        inventory: Vec::new(),
    };
    let params = TwcParams {
        target: target.to_string(),
        room,
        canonical_containers: canonical,
        distractor_containers: others.iter().map(|i| i.name.clone()).collect(),
        tidy_objects,
    };
    Ok((params, world))
}

fn container(name: &str, style: ContainerStyle, open: bool) -> Furnishing {
    Furnishing::Container {
        name: name.to_string(),
        style,
        open,
        contents: Vec::new(),
    }
}

impl TwcParams {
    pub fn problem_key(&self) -> String {
        self.target.clone()
    }

    pub(crate) fn advance(&self, progress: Progress, action: &Action) -> Progress {
        match action {
            Action::Take(item) if *item == self.target => Progress {
                score: progress.score.max(0.5),
                ..progress
            },
            Action::Put { item, container } if *item == self.target => {
                if self.canonical_containers.contains(container) {
                    Progress::completed()
                } else {
                    Progress::failed()
                }
            }
            _ => progress,
        }
    }

    pub fn oracle(&self, with_modules: bool) -> Vec<Action> {
        let mut gold = Vec::new();
        if with_modules {
            gold.push(Action::Module(ModuleAction::Query(self.target.clone())));
        }
        gold.push(Action::Take(self.target.clone()));
        gold.push(Action::put(self.target.clone(), self.canonical_containers[0].clone()));
        gold
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{score, GameParams};
    use crate::world::WorldState;
    use rand::SeedableRng;

    #[test]
    fn sampled_rooms_are_consistent() {
        let kb = KnowledgeBase::shared();
        for seed in 0..300 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (p, world) = sample(&mut rng).unwrap();
            assert!(!p.canonical_containers.is_empty());
            let homes = kb.locations_of(&p.target);
            assert!(p.canonical_containers.iter().all(|c| homes.contains(&c.as_str())));
            assert!(p.distractor_containers.iter().all(|c| !homes.contains(&c.as_str())));
            assert!(!p.tidy_objects.contains(&p.target));
            let state = WorldState::build(&world).unwrap();
            for c in &p.canonical_containers {
                assert!(state.entity(state.find(c).unwrap()).is_open_container());
            }
        }
    }

    #[test]
    fn any_canonical_container_counts() {
        let p = TwcParams {
            target: "white coat".into(),
            room: "corridor".into(),
            canonical_containers: vec!["coat hanger".into(), "wardrobe".into()],
            distractor_containers: vec!["key holder".into()],
            tidy_objects: vec![],
        };
        let params = GameParams::Twc(p);
        let take = Action::Take("white coat".into());
        for home in ["coat hanger", "wardrobe"] {
            let done = score(&params, &[take.clone(), Action::put("white coat", home)]);
            assert_eq!(done, Progress::completed());
        }
        let wrong = score(&params, &[take.clone(), Action::put("white coat", "key holder")]);
        assert_eq!(wrong, Progress::failed());
        assert_eq!(score(&params, &[take]).score, 0.5);
    }
}
