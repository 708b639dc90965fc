//! Crawls the bundled two-language demo site and saves the document index,
//! the link table and the extracted texts.
//!
//!     cargo run --example crawl_site -- [dfs|bfs|dws]

mod support;

use lexis::crawl::{FsSource, TraversalPolicy};
use lexis::engine::crawl_to_disk;

fn main() -> lexis::Result<()> {
    let mut config = support::demo_config("crawl");
    if let Some(policy) = std::env::args().nth(1) {
        config.crawler.policy = policy.parse::<TraversalPolicy>()?;
    }
    let started = std::time::Instant::now();
    let out = crawl_to_disk(&config, &FsSource::new(support::demo_site()))?;
    println!(
        "{:?} crawl: {} documents, {} links, {} refused, {} failed in {:.2?}",
        config.crawler.policy,
        out.index.len(),
        out.links.len(),
        out.rejected.len(),
        out.failures.len(),
        started.elapsed()
    );
    for visit in out.visits.iter().take(8) {
        println!("  depth {}  {}", visit.depth, visit.url);
    }
    println!("  ...");
    println!("saved under {}", config.crawl_dir().display());
    Ok(())
}
