//! Result surrogates: each hit's title plus the two ten-word stretches of
//! its text holding the most query terms.
//!
//!     cargo run --example surrogates -- "ουρανός πλανήτης"

mod support;

use lexis::engine::SearchRequest;
use std::collections::BTreeSet;

use lexis::present::best_excerpt;
use lexis::text::{Analyzer, AnalyzerSettings};

fn main() -> lexis::Result<()> {
    let engine = support::demo_engine("surrogates");
    let q = std::env::args().nth(1).unwrap_or_else(|| "comet orbit".into());
    let mut request = SearchRequest::new(&q);
    request.limit = Some(5);
    let response = engine.search(&request)?;
    for s in &response.results {
        println!("{}  [{} query words in excerpt]\n  {}\n  {}\n", s.title, s.excerpt_term_hits, s.url, s.excerpt);
    }

    // the same selection on any text
    let analyzer = Analyzer::with_settings(AnalyzerSettings::default());
    let text = "The first comet of the season passed close to the sun. Weather was poor for most of the month. \
                Later its orbit was measured again and the comet was found to return every seventy years.";
    let terms: BTreeSet<String> = analyzer.terms(&q).into_iter().collect();
    let excerpt = best_excerpt(text, &terms, &analyzer);
    println!("free text: {} (hits {})", excerpt.text, excerpt.hits);
    Ok(())
}
