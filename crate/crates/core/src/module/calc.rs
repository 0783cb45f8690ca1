use std::sync::OnceLock;

use regex::Regex;

use super::{CalcOp, ModuleAction, SymbolicModule};
use crate::error::{Error, Result};

/// Arithmetic over the two operands of the most recently read math problem.
#[derive(Clone, Debug, Default)]
pub struct Calculator {
    operands: Option<(i64, i64)>,
}

fn problem_pattern() -> &'static Regex {
    static PATTERN: OnceLock<Regex> = OnceLock::new();
    PATTERN.get_or_init(|| {
        Regex::new(r"math problem: (?:add|subtract|multiply|divide) (\d+) (?:and|from|by) (\d+)")
            .expect("valid regex")
    })
}

impl Calculator {
    pub fn operands(&self) -> Option<(i64, i64)> {
        self.operands
    }

    pub fn evaluate(op: CalcOp, lhs: i64, rhs: i64) -> String {
        match op {
            CalcOp::Add => format!("Adding {lhs} and {rhs} results in {}.", lhs + rhs),
            CalcOp::Sub => format!("Subtracting {rhs} from {lhs} results in {}.", lhs - rhs),
            CalcOp::Mul => format!("Multiplying {lhs} and {rhs} results in {}.", lhs * rhs),
            CalcOp::Div if rhs == 0 => format!("Dividing {lhs} by zero is undefined."),
            CalcOp::Div if lhs % rhs == 0 => {
                format!("The result of dividing {lhs} by {rhs} is {}.", lhs / rhs)
            }
            CalcOp::Div => format!(
                "The result of dividing {lhs} by {rhs} is {:.2}.",
                lhs as f64 / rhs as f64
            ),
        }
    }
}

impl SymbolicModule for Calculator {
    fn name(&self) -> &'static str {
        "calculator"
    }

    fn observe(&mut self, text: &str) {
        if let Some(caps) = problem_pattern().captures(text) {
            if let (Ok(a), Ok(b)) = (caps[1].parse(), caps[2].parse()) {
                self.operands = Some((a, b));
            }
        }
    }

    fn enumerate(&self) -> Vec<ModuleAction> {
        let Some((a, b)) = self.operands else {
            return Vec::new();
        };
        let mut actions = Vec::with_capacity(6);
        for (op, lhs, rhs) in [
            (CalcOp::Add, a, b),
            (CalcOp::Sub, a, b),
            (CalcOp::Sub, b, a),
            (CalcOp::Mul, a, b),
            (CalcOp::Div, a, b),
            (CalcOp::Div, b, a),
        ] {
            let action = ModuleAction::Calc { op, lhs, rhs };
            if !actions.contains(&action) {
                actions.push(action);
            }
        }
        actions
    }

    fn respond(&mut self, action: &ModuleAction) -> Result<String> {
        match *action {
            ModuleAction::Calc { op, lhs, rhs } => Ok(Calculator::evaluate(op, lhs, rhs)),
            _ => Err(Error::InvalidAction(action.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nothing_before_a_problem_is_read() {
        let calc = Calculator::default();
        assert!(calc.enumerate().is_empty());
    }

    #[test]
    fn six_actions_from_problem_operands() {
        let mut calc = Calculator::default();
        calc.observe("Your task is to solve the following math problem: multiply 3 by 6. Then, ...");
        let surfaces: Vec<String> = calc.enumerate().iter().map(ToString::to_string).collect();
        assert_eq!(surfaces, ["add 3 6", "sub 3 6", "sub 6 3", "mul 3 6", "div 3 6", "div 6 3"]);
    }

    #[test]
    fn replies() {
        let mut calc = Calculator::default();
        let mul = ModuleAction::Calc { op: CalcOp::Mul, lhs: 3, rhs: 6 };
        assert_eq!(calc.respond(&mul).unwrap(), "Multiplying 3 and 6 results in 18.");
        let div = ModuleAction::Calc { op: CalcOp::Div, lhs: 22, rhs: 11 };
        assert_eq!(calc.respond(&div).unwrap(), "The result of dividing 22 by 11 is 2.");
        assert_eq!(
            Calculator::evaluate(CalcOp::Div, 3, 6),
            "The result of dividing 3 by 6 is 0.50."
        );
        assert_eq!(Calculator::evaluate(CalcOp::Sub, 6, 3), "Subtracting 3 from 6 results in 3.");
        assert_eq!(Calculator::evaluate(CalcOp::Add, 3, 6), "Adding 3 and 6 results in 9.");
    }

    #[test]
    fn equal_operands_deduplicate() {
        let mut calc = Calculator::default();
        calc.observe("math problem: add 4 and 4.");
        assert_eq!(calc.enumerate().len(), 4);
    }
}
