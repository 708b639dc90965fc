use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::{Catalog, DocKey};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExpansionConfig {
    pub enabled: bool,
    /// top documents whose terms are pooled
    pub docs: usize,
    /// terms suggested
    pub terms: usize,
}

impl Default for ExpansionConfig {
    fn default() -> Self {
        ExpansionConfig {
            enabled: true,
            docs: 5,
            terms: 5,
        }
    }
}

impl ExpansionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.docs == 0 || self.terms == 0 {
            return Err(Error::Config("query expansion needs at least one document and one term".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionTerm {
    pub term: String,
    /// summed tf over the pooled documents
    pub weight: f64,
}

/// Terms with the largest summed tf over the first `config.docs` answer
/// documents, excluding the query's own terms. Ties go by term.
pub fn expand_query(
    query_terms: &[String],
    answer: &[DocKey],
    catalog: &Catalog,
    config: &ExpansionConfig,
) -> Vec<ExpansionTerm> {
    let excluded: BTreeSet<&str> = query_terms.iter().map(String::as_str).collect();
    let mut totals: BTreeMap<&str, f64> = BTreeMap::new();
    for &doc in answer.iter().take(config.docs) {
        for (word, row) in catalog.doc_terms(doc) {
            if !excluded.contains(word.name.as_str()) {
                *totals.entry(word.name.as_str()).or_insert(0.0) += row.tf;
            }
        }
    }
    let mut ranked: Vec<(&str, f64)> = totals.into_iter().collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(b.0)));
    ranked
        .into_iter()
        .take(config.terms)
        .map(|(term, weight)| ExpansionTerm {
            term: term.to_string(),
            weight,
        })
        .collect()
}
