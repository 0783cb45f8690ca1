use super::{ModuleAction, SortOrder, SymbolicModule};
use crate::error::{Error, Result};
use crate::quantity::{scrape, Quantity};

/// Remembers every quantity mentioned so far and lists them in order.
#[derive(Clone, Debug, Default)]
pub struct Sorter {
    seen: Vec<Quantity>,
}

impl Sorter {
    pub fn seen(&self) -> &[Quantity] {
        &self.seen
    }

    pub fn sorted(&self, order: SortOrder) -> Result<Vec<Quantity>> {
        if self.seen.is_empty() {
            return Err(Error::NothingObserved);
        }
        let mut items = self.seen.clone();
        items.sort_by(Quantity::cmp_normalized);
        if order == SortOrder::Descending {
            items.reverse();
        }
        Ok(items)
    }
}

impl SymbolicModule for Sorter {
    fn name(&self) -> &'static str {
        "sorter"
    }

    fn observe(&mut self, text: &str) {
        for quantity in scrape(text) {
            if !self.seen.contains(&quantity) {
                self.seen.push(quantity);
            }
        }
    }

    fn enumerate(&self) -> Vec<ModuleAction> {
        if self.seen.is_empty() {
            return Vec::new();
        }
        vec![
            ModuleAction::Sort(SortOrder::Ascending),
            ModuleAction::Sort(SortOrder::Descending),
        ]
    }

    fn respond(&mut self, action: &ModuleAction) -> Result<String> {
        let ModuleAction::Sort(order) = *action else {
            return Err(Error::InvalidAction(action.to_string()));
        };
        let listed: Vec<String> = self.sorted(order)?.iter().map(Quantity::spaced_label).collect();
        let word = match order {
            SortOrder::Ascending => "increasing",
            SortOrder::Descending => "decreasing",
        };
        Ok(format!(
            "The observed items, sorted in order of {word} quantity, are: {}.",
            listed.join(", ")
        ))
    }
}
