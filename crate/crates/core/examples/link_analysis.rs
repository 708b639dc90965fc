//! PageRank, preference-biased PageRank and inverse PageRank over the demo
//! site's link graph, with spam candidates from the inverse ranking.

mod support;

use lexis::index::Catalog;
use lexis::link::{
    biased_pagerank, inverse_pagerank, pagerank, spam_candidates, store_ranks, BiasInput, RankOptions, RankVector,
    WebGraph,
};

fn top(label: &str, ranks: &RankVector, catalog: &Catalog, n: usize) {
    println!("{label} ({} iterations, mass {:.12})", ranks.iterations_run, ranks.mass.last().unwrap_or(&1.0));
    for (id, rank) in ranks.sorted().into_iter().take(n) {
        let url = catalog.document_by_md5(&id).map_or("?", |d| d.link.as_str());
        println!("  {rank:.6}  {url}");
    }
}

fn main() -> lexis::Result<()> {
    let engine = support::demo_engine("links");
    let snapshot = engine.snapshot();
    let catalog = &snapshot.catalog;
    let graph = WebGraph::from_catalog(catalog);
    println!("{} pages, {} links", graph.node_count(), graph.edge_count());

    let options = RankOptions::converged();
    let plain = pagerank(&graph, &options);
    top("pagerank", &plain, catalog, 5);

    let bias = BiasInput::load(&support::manifest_dir().join("fixtures/bias.tsv"))?;
    let biased = biased_pagerank(&graph, &bias, &options);
    top("biased toward the home pages", &biased, catalog, 5);

    top("inverse", &inverse_pagerank(&graph, &options), catalog, 5);
    println!("spam candidates:");
    for (id, score) in spam_candidates(&graph, 3, &options) {
        let url = catalog.document_by_md5(&id).map_or("?", |d| d.link.as_str());
        println!("  {score:.6}  {url}");
    }

    // ranks feed the hybrid model once stored in the catalog
    let version = engine.store().update(|c| {
        store_ranks(c, &biased);
        Ok(())
    });
    version?;
    println!("stored ranks; snapshot is now version {}", engine.snapshot().version);
    Ok(())
}
