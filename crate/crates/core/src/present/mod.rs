//! Result surrogates: title plus the best two 10-word windows of the
//! stored full text.

mod excerpt;
mod fulltext;

pub use excerpt::{best_excerpt, best_text, Excerpt, GRAM_WORDS, GAP_MARKER};
pub use fulltext::FullTextStore;

use std::collections::BTreeSet;

use serde::Serialize;

use crate::crawl::DocId;
use crate::index::Catalog;
use crate::retrieval::ScoredResult;
use crate::text::Analyzer;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Surrogate {
    pub doc_id: DocId,
    pub url: String,
    pub title: String,
    pub score: f64,
    pub excerpt: String,
    pub excerpt_term_hits: usize,
    /// the full text was not available, so there is no excerpt
    pub text_missing: bool,
}

/// One surrogate per result, in result order.
pub fn build_surrogates(
    results: &[ScoredResult],
    catalog: &Catalog,
    store: &FullTextStore,
    query_terms: &BTreeSet<String>,
    analyzer: &Analyzer,
) -> Vec<Surrogate> {
    results
        .iter()
        .map(|r| {
            let row = catalog.document(r.doc);
            let (url, title) = row.map(|d| (d.link.clone(), d.title.clone())).unwrap_or_default();
            let mut s = Surrogate {
                doc_id: r.md5,
                url,
                title,
                score: r.score,
                excerpt: String::new(),
                excerpt_term_hits: 0,
                text_missing: false,
            };
            match store.get(&r.md5) {
                Ok(Some(text)) => {
                    let e = best_excerpt(&text, query_terms, analyzer);
                    s.excerpt = e.text;
                    s.excerpt_term_hits = e.hits;
                }
                Ok(None) => s.text_missing = true,
                Err(e) => {
                    log::warn!("full text of {}: {e}", r.md5);
                    s.text_missing = true;
                }
            }
            s
        })
        .collect()
}
