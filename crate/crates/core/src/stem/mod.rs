//! Stemming: a rule-driven Greek stemmer and the Porter stemmer for English.

mod greek;
mod porter;
mod rules;
mod trie;

use std::path::Path;

pub use greek::{stem_greek, StemOutcome, StemTrace};
pub use porter::stem_english;
pub use rules::{load_rules, FinalCharRule, GreekRuleSet, RuleCounts, RuleSources, SuffixKind};
pub use trie::Trie;

use crate::error::Result;
use crate::text::is_greek;

/// Dispatches tokens to the Greek or English stemmer by script.
#[derive(Debug, Clone, Default)]
pub struct Stemmer {
    greek: GreekRuleSet,
}

impl Stemmer {
    pub fn new(greek: GreekRuleSet) -> Self {
        Stemmer { greek }
    }

    pub fn from_rule_dir(dir: &Path) -> Result<Self> {
        Ok(Stemmer::new(load_rules(dir)?))
    }

    pub fn greek_rules(&self) -> &GreekRuleSet {
        &self.greek
    }

    pub fn stem(&self, token: &str) -> String {
        if is_greek(token) {
            stem_greek(token, &self.greek).0
        } else {
            stem_english(token)
        }
    }
}
