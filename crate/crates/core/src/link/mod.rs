//! Web graph construction and PageRank variants.

mod bias;
mod graph;
mod rank;

use std::fmt::Write as _;

pub use bias::BiasInput;
pub use graph::WebGraph;
pub use rank::{
    biased_pagerank, default_iterations, inverse_pagerank, pagerank, rank_with_teleport, spam_candidates,
    Iterations, RankOptions, RankVector, CONVERGENCE_TOLERANCE, DEFAULT_DAMPING,
};

use crate::index::Catalog;

/// Stores max-normalized ranks in the document table. Documents outside
/// the ranked graph get 0.
pub fn store_ranks(catalog: &mut Catalog, ranks: &RankVector) {
    catalog.set_ranks(&ranks.max_normalized());
}

/// `doc_id<TAB>url<TAB>rank` lines, best first.
pub fn rank_report(ranks: &RankVector, catalog: &Catalog) -> String {
    let mut out = String::new();
    for (id, rank) in ranks.sorted() {
        let url = catalog.document_by_md5(&id).map_or("", |d| d.link.as_str());
        let _ = writeln!(out, "{id}\t{}\t{rank}", crate::tsv::escape(url));
    }
    out
}
