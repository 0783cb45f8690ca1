use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};

use super::{ModuleAction, SymbolicModule};
use crate::error::{Error, Result};

const KB_ASSET: &str = include_str!("../../data/kb.tsv");

/// `(object, located, container)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triple {
    pub object: String,
    pub relation: String,
    pub container: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KnowledgeBase {
    triples: Vec<Triple>,
}

impl KnowledgeBase {
    /// One tab-separated triple per line; blank lines and `#` comments are skipped.
    pub fn from_tsv(text: &str) -> Result<Self> {
        let mut triples = Vec::new();
        for (number, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let [object, relation, container] = fields[..] else {
                return Err(Error::MalformedRecord(format!(
                    "kb line {}: expected 3 tab-separated fields",
                    number + 1
                )));
            };
            triples.push(Triple {
                object: object.to_string(),
                relation: relation.to_string(),
                container: container.to_string(),
            });
        }
        Ok(KnowledgeBase { triples })
    }

    pub fn to_tsv(&self) -> String {
        self.triples
            .iter()
            .map(|t| format!("{}\t{}\t{}\n", t.object, t.relation, t.container))
            .collect()
    }

    /// The bundled common-sense knowledge base.
    pub fn shared() -> Arc<KnowledgeBase> {
        static KB: OnceLock<Arc<KnowledgeBase>> = OnceLock::new();
        KB.get_or_init(|| Arc::new(KnowledgeBase::from_tsv(KB_ASSET).expect("bundled kb parses")))
            .clone()
    }

    pub fn asset() -> &'static str {
        KB_ASSET
    }

    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    /// Triples mentioning `term` as object or container, in file order.
    pub fn query(&self, term: &str) -> Vec<&Triple> {
        self.triples
            .iter()
            .filter(|t| t.object == term || t.container == term)
            .collect()
    }

    /// Distinct objects in file order.
    pub fn objects(&self) -> Vec<&str> {
        let mut seen = BTreeSet::new();
        self.triples
            .iter()
            .map(|t| t.object.as_str())
            .filter(|o| seen.insert(*o))
            .collect()
    }

    pub fn containers(&self) -> Vec<&str> {
        let mut seen = BTreeSet::new();
        self.triples
            .iter()
            .map(|t| t.container.as_str())
            .filter(|c| seen.insert(*c))
            .collect()
    }

    pub fn locations_of(&self, object: &str) -> Vec<&str> {
        self.triples
            .iter()
            .filter(|t| t.object == object)
            .map(|t| t.container.as_str())
            .collect()
    }

    /// Every queryable term: objects first, then containers.
    pub fn vocabulary(&self) -> Vec<&str> {
        let mut seen = BTreeSet::new();
        self.objects()
            .into_iter()
            .chain(self.containers())
            .filter(|t| seen.insert(*t))
            .collect()
    }
}

pub struct KbModule {
    kb: Arc<KnowledgeBase>,
    actions: Vec<ModuleAction>,
}

impl KbModule {
    pub fn new(kb: Arc<KnowledgeBase>) -> Self {
        let actions = kb
            .vocabulary()
            .into_iter()
            .map(|t| ModuleAction::Query(t.to_string()))
            .collect();
        KbModule { kb, actions }
    }
}

impl SymbolicModule for KbModule {
    fn name(&self) -> &'static str {
        "knowledge base"
    }

    fn observe(&mut self, _text: &str) {}

    fn enumerate(&self) -> Vec<ModuleAction> {
        self.actions.clone()
    }

    fn respond(&mut self, action: &ModuleAction) -> Result<String> {
        let ModuleAction::Query(term) = action else {
            return Err(Error::InvalidAction(action.to_string()));
        };
        let hits = self.kb.query(term);
        if hits.is_empty() {
            return Ok(format!("No results were found for {term}."));
        }
        let lines: Vec<String> = hits
            .iter()
            .map(|t| format!("{} {} {}", t.object, t.relation, t.container))
            .collect();
        Ok(format!("The results are:\n{}", lines.join("\n")))
    }
}
