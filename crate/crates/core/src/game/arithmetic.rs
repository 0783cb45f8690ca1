//! Read a math problem, solve it, and put the bundle whose count is the
//! answer into the box. Distractor bundles carry the results of the other
//! operations on the same operands.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::vocab::FRUITS;
use super::Progress;
use crate::action::Action;
use crate::module::{CalcOp, ModuleAction};
use crate::quantity::Quantity;
use crate::world::{Furnishing, ItemSpec, RoomSpec, WorldSpec};

pub const TASK: &str = "Your first task is to solve the math problem. Then, pick up the item with the same quantity as the math problem answer, and place it in the box.";

pub const PROBLEM: &str = "math problem";
pub const ANSWER_BOX: &str = "box";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArithmeticParams {
    pub op: CalcOp,
    pub a: u32,
    pub b: u32,
    pub answer: u32,
    pub target: Quantity,
    pub distractors: Vec<Quantity>,
}

/// Applies an operation, keeping only positive whole results.
pub fn apply(op: CalcOp, a: u32, b: u32) -> Option<u32> {
    match op {
        CalcOp::Add => Some(a + b),
        CalcOp::Sub => a.checked_sub(b).filter(|&d| d > 0),
        CalcOp::Mul => Some(a * b),
        CalcOp::Div => (b != 0 && a.is_multiple_of(b)).then(|| a / b),
    }
}

/// How the problem reads on the page: `divide 22 by 11`.
pub fn problem_phrase(op: CalcOp, a: u32, b: u32) -> String {
    match op {
        CalcOp::Add => format!("add {a} and {b}"),
        CalcOp::Sub => format!("subtract {b} from {a}"),
        CalcOp::Mul => format!("multiply {a} by {b}"),
        CalcOp::Div => format!("divide {a} by {b}"),
    }
}

pub fn problem_text(op: CalcOp, a: u32, b: u32) -> String {
    format!(
        "Your task is to solve the following math problem: {}. Then, pick up the item with the same quantity as the answer, and place it in the box.",
        problem_phrase(op, a, b)
    )
}

/// Results of the other operations on the same operands, in operation
/// order. An operation that has no positive whole result as written is tried
/// with the operands swapped, so `3 times 6` still yields `6 - 3` and `6 / 3`.
pub fn derived_distractors(op: CalcOp, a: u32, b: u32, answer: u32) -> Vec<u32> {
    let mut out = Vec::new();
    for other in CalcOp::ALL {
        if other == op {
            continue;
        }
        if let Some(v) = apply(other, a, b).or_else(|| apply(other, b, a)) {
            if v != answer && !out.contains(&v) {
                out.push(v);
            }
        }
    }
    out
}

fn sample_operands(rng: &mut ChaCha8Rng, op: CalcOp) -> (u32, u32) {
    match op {
        CalcOp::Add => (rng.gen_range(2..=50), rng.gen_range(2..=50)),
        CalcOp::Sub => {
            let a = rng.gen_range(3..=50);
            (a, rng.gen_range(2..a))
        }
        CalcOp::Mul => {
            let a = rng.gen_range(2..=50);
            let b = rng.gen_range(2..=(300 / a).clamp(2, 50));
            (a, b)
        }
        CalcOp::Div => {
            let b = rng.gen_range(2..=25);
            let quotient = rng.gen_range(2..=(50 / b).max(2));
            (b * quotient, b)
        }
    }
}

pub fn sample(rng: &mut ChaCha8Rng) -> (ArithmeticParams, WorldSpec) {
    let op = CalcOp::ALL[rng.gen_range(0..4)];
    let (a, b) = sample_operands(rng, op);
    let answer = apply(op, a, b).expect("operands are sampled to divide evenly");

    let mut counts = derived_distractors(op, a, b, answer);
    let wanted = counts.len() + rng.gen_range(1..=3);
    while counts.len() < wanted {
        let c = rng.gen_range(2..=99);
        if c != answer && !counts.contains(&c) {
            counts.push(c);
        }
    }

    let mut nouns: Vec<usize> = (0..FRUITS.len()).collect();
    nouns.shuffle(rng);
    let bundle = |count: u32, noun: usize| {
        let (singular, plural) = FRUITS[noun];
        Quantity::new(count, None, if count == 1 { singular } else { plural })
    };
    let target = bundle(answer, nouns[0]);
    let distractors: Vec<Quantity> = counts.iter().zip(&nouns[1..]).map(|(&c, &n)| bundle(c, n)).collect();

    let mut chair = Vec::new();
    let mut counter = Vec::new();
    let mut all: Vec<Quantity> = distractors.iter().cloned().chain([target.clone()]).collect();
    all.shuffle(rng);
    for q in all {
        if rng.gen_bool(0.5) {
            chair.push(ItemSpec::bundle(q));
        } else {
            counter.push(ItemSpec::bundle(q));
        }
    }

    let world = WorldSpec {
        rooms: vec![RoomSpec {
            name: "kitchen".into(),
            furniture: kitchen(chair, counter, problem_text(op, a, b)),
        }],
        edges: Vec::new(),
        start: 0,
        inventory: Vec::new(),
    };
    let params = ArithmeticParams {
        op,
        a,
        b,
        answer,
        target,
        distractors,
    };
    (params, world)
}

/// The fixed kitchen the arithmetic game is played in.
pub fn kitchen(chair: Vec<ItemSpec>, counter: Vec<ItemSpec>, problem: String) -> Vec<Furnishing> {
    vec![
        Furnishing::closed("fridge"),
        Furnishing::surface("dining chair", chair),
        Furnishing::open_box(ANSWER_BOX),
        Furnishing::Item(ItemSpec::readable(PROBLEM, problem)),
        Furnishing::closed("dishwasher"),
        Furnishing::closed("trash can"),
        Furnishing::fixture("oven"),
        Furnishing::closed("cutlery drawer"),
        Furnishing::fixture("stove"),
        Furnishing::closed("kitchen cupboard"),
        Furnishing::surface("counter", counter),
    ]
}

impl ArithmeticParams {
    pub fn problem_key(&self) -> String {
        format!("{} {} {}", self.op.verb(), self.a, self.b)
    }

    pub(crate) fn advance(&self, progress: Progress, action: &Action) -> Progress {
        let target = self.target.label();
        match action {
            Action::Take(item) if *item == target => Progress {
                score: progress.score.max(0.5),
                ..progress
            },
            Action::Put { item, container } if container == ANSWER_BOX => {
                if *item == target {
                    Progress::completed()
                } else {
                    Progress::failed()
                }
            }
            _ => progress,
        }
    }

    pub fn oracle(&self, with_modules: bool) -> Vec<Action> {
        let target = self.target.label();
        let mut gold = vec![Action::Take(PROBLEM.into()), Action::Read(PROBLEM.into())];
        if with_modules {
            gold.push(Action::Module(ModuleAction::Calc {
                op: self.op,
                lhs: i64::from(self.a),
                rhs: i64::from(self.b),
            }));
        }
        gold.push(Action::Take(target.clone()));
        gold.push(Action::put(target, ANSWER_BOX));
        gold
    }
}
