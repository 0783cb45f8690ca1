#![allow(dead_code)]

use modworld::game::arithmetic::{self, ArithmeticParams};
use modworld::game::{task_description, oracle, EpisodeVariation, GameParams, Split};
use modworld::module::CalcOp;
use modworld::quantity::Quantity;
use modworld::world::{ItemSpec, RoomSpec, WorldSpec};
use modworld::GameId;

fn fruit(count: u32, noun: &str) -> Quantity {
    Quantity::new(count, None, noun)
}

/// The kitchen from the worked arithmetic example: divide 22 by 11, with the
/// two bananas on the counter.
pub fn divide_22_by_11() -> EpisodeVariation {
    let chair = [fruit(11, "tangerines"), fruit(33, "papayas"), fruit(242, "strawberries"), fruit(20, "peaches")];
    let counter = [fruit(6, "oranges"), fruit(2, "bananas")];
    let params = GameParams::Arithmetic(ArithmeticParams {
        op: CalcOp::Div,
        a: 22,
        b: 11,
        answer: 2,
        target: fruit(2, "bananas"),
        distractors: chair.iter().chain(&counter[..1]).cloned().collect(),
    });
    let world = WorldSpec {
        rooms: vec![RoomSpec {
            name: "kitchen".into(),
            furniture: arithmetic::kitchen(
                chair.into_iter().map(ItemSpec::bundle).collect(),
                counter.into_iter().map(ItemSpec::bundle).collect(),
                arithmetic::problem_text(CalcOp::Div, 22, 11),
            ),
        }],
        edges: vec![],
        start: 0,
        inventory: vec![],
    };
    EpisodeVariation {
        game: GameId::Arithmetic,
        split: Split::Test,
        index: None,
        seed: 0,
        task_description: task_description(&params),
        gold_with_modules: oracle(&params, true),
        gold_no_modules: oracle(&params, false),
        params,
        world,
    }
}
