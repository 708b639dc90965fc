use std::collections::BTreeSet;

use crate::text::{tokenize, Analyzer};

pub const GRAM_WORDS: usize = 10;
pub const GAP_MARKER: &str = " … ";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Excerpt {
    pub text: String,
    /// query-term occurrences inside the chosen grams
    pub hits: usize,
    /// chosen gram indices, in document order
    pub grams: Vec<usize>,
}

/// Cuts `text` into consecutive 10-word grams and keeps the two with the
/// most query-term occurrences, in document order. Earlier grams win ties;
/// with no hits at all the opening two grams are returned.
pub fn best_excerpt(text: &str, query_terms: &BTreeSet<String>, analyzer: &Analyzer) -> Excerpt {
    let tokens = tokenize(text);
    let grams: Vec<(usize, usize, usize)> = tokens
        .chunks(GRAM_WORDS)
        .map(|chunk| {
            let hits = chunk
                .iter()
                .filter(|t| analyzer.process_token(&t.term).is_some_and(|term| query_terms.contains(&term)))
                .count();
            (chunk[0].start, chunk[chunk.len() - 1].end, hits)
        })
        .collect();
    let mut order: Vec<usize> = (0..grams.len()).collect();
    order.sort_by(|&a, &b| grams[b].2.cmp(&grams[a].2).then(a.cmp(&b)));
    let mut chosen: Vec<usize> = order.into_iter().take(2).collect();
    chosen.sort();

    let mut out = String::new();
    for (i, &g) in chosen.iter().enumerate() {
        if i > 0 {
            out.push_str(if g == chosen[i - 1] + 1 { " " } else { GAP_MARKER });
        }
        let span = &text[grams[g].0..grams[g].1];
        out.push_str(&span.split_whitespace().collect::<Vec<_>>().join(" "));
    }
    Excerpt {
        text: out,
        hits: chosen.iter().map(|&g| grams[g].2).sum(),
        grams: chosen,
    }
}

pub fn best_text(text: &str, query_terms: &BTreeSet<String>, analyzer: &Analyzer) -> String {
    best_excerpt(text, query_terms, analyzer).text
}
