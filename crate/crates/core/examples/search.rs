//! Builds the demo catalog and runs one query under every retrieval model.
//!
//!     cargo run --example search -- "telescope OR galaxy"

mod support;

use lexis::engine::SearchRequest;
use lexis::retrieval::Model;

fn main() -> lexis::Result<()> {
    let engine = support::demo_engine("search");
    let q = std::env::args().nth(1).unwrap_or_else(|| "telescope galaxy".to_string());
    for model in Model::ALL {
        let mut request = SearchRequest::new(&q);
        request.model = Some(model);
        request.limit = Some(3);
        request.expand = Some(false);
        let response = engine.search(&request)?;
        println!("{model:?}: {} matching", response.total);
        for s in &response.results {
            println!("  {:.4}  {}  {}", s.score, s.title, s.url);
        }
    }

    // a type filter and a misspelling
    let mut request = SearchRequest::new("galxy telescope type:txt");
    request.limit = Some(3);
    let response = engine.search(&request)?;
    println!("\n{:?}: {} matching", response.query, response.total);
    for hint in &response.suggestions {
        let words: Vec<&str> = hint.alternatives.iter().map(|a| a.word.as_str()).collect();
        println!("  did you mean for {:?}: {}", hint.word, words.join(", "));
    }
    Ok(())
}
