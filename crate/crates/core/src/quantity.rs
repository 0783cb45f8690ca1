//! Quantities with optional measurement units, their normalisation to a
//! common base unit, and scraping quantity mentions out of free text.

use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dimension {
    Count,
    Mass,
    Length,
    Volume,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Unit {
    Mg,
    G,
    Kg,
    Mm,
    Cm,
    M,
    Ml,
    L,
}

impl Unit {
    pub const ALL: [Unit; 8] = [
        Unit::Mg,
        Unit::G,
        Unit::Kg,
        Unit::Mm,
        Unit::Cm,
        Unit::M,
        Unit::Ml,
        Unit::L,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            Unit::Mg => "mg",
            Unit::G => "g",
            Unit::Kg => "kg",
            Unit::Mm => "mm",
            Unit::Cm => "cm",
            Unit::M => "m",
            Unit::Ml => "ml",
            Unit::L => "l",
        }
    }

    pub fn from_symbol(symbol: &str) -> Option<Unit> {
        Unit::ALL.into_iter().find(|u| u.symbol() == symbol)
    }

    pub fn dimension(self) -> Dimension {
        match self {
            Unit::Mg | Unit::G | Unit::Kg => Dimension::Mass,
            Unit::Mm | Unit::Cm | Unit::M => Dimension::Length,
            Unit::Ml | Unit::L => Dimension::Volume,
        }
    }

    /// Multiplier to the smallest unit of the same dimension (mg, mm, ml),
    /// so normalised amounts stay exact integers.
    pub fn factor(self) -> u64 {
        match self {
            Unit::Mg | Unit::Mm | Unit::Ml => 1,
            Unit::Cm => 10,
            Unit::G | Unit::M | Unit::L => 1_000,
            Unit::Kg => 1_000_000,
        }
    }

    pub fn of_dimension(dimension: Dimension) -> &'static [Unit] {
        match dimension {
            Dimension::Count => &[],
            Dimension::Mass => &[Unit::Mg, Unit::G, Unit::Kg],
            Dimension::Length => &[Unit::Mm, Unit::Cm, Unit::M],
            Dimension::Volume => &[Unit::Ml, Unit::L],
        }
    }
}

/// A counted amount of some material: `25g of oak`, `2 bananas`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Quantity {
    pub count: u32,
    pub unit: Option<Unit>,
    pub material: String,
}

/// A quantity reduced to the smallest unit of its dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Normalized {
    pub dimension: Dimension,
    pub amount: u64,
}

impl Quantity {
    pub fn new(count: u32, unit: Option<Unit>, material: impl Into<String>) -> Self {
        Quantity {
            count,
            unit,
            material: material.into(),
        }
    }

    pub fn normalized(&self) -> Normalized {
        match self.unit {
            Some(unit) => Normalized {
                dimension: unit.dimension(),
                amount: u64::from(self.count) * unit.factor(),
            },
            None => Normalized {
                dimension: Dimension::Count,
                amount: u64::from(self.count),
            },
        }
    }

    /// Compact form used for entity names: `25g of oak`.
    pub fn label(&self) -> String {
        match self.unit {
            Some(unit) => format!("{}{} of {}", self.count, unit.symbol(), self.material),
            None => format!("{} {}", self.count, self.material),
        }
    }

    /// Spaced form used in sorter replies: `25 g of oak`.
    pub fn spaced_label(&self) -> String {
        match self.unit {
            Some(unit) => format!("{} {} of {}", self.count, unit.symbol(), self.material),
            None => format!("{} {}", self.count, self.material),
        }
    }

    /// Total order: dimension, normalised amount, then material name.
    pub fn cmp_normalized(&self, other: &Quantity) -> Ordering {
        self.normalized()
            .cmp(&other.normalized())
            .then_with(|| self.material.cmp(&other.material))
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

fn mention_pattern() -> &'static Regex {
    static PATTERN: OnceLock<Regex> = OnceLock::new();
    PATTERN.get_or_init(|| {
        Regex::new(r"\b(\d+)(?: ?(mg|mm|ml|kg|cm|g|m|l) of)? ([a-z][a-z-]*)\b").expect("valid regex")
    })
}

/// Every quantity mention in `text`, in order of appearance.
pub fn scrape(text: &str) -> Vec<Quantity> {
    mention_pattern()
        .captures_iter(text)
        .filter_map(|caps| {
            let count: u32 = caps[1].parse().ok()?;
            if count == 0 {
                return None;
            }
            let unit = caps.get(2).and_then(|m| Unit::from_symbol(m.as_str()));
            Some(Quantity::new(count, unit, &caps[3]))
        })
        .collect()
}
