//! Query expansion from the top answers, then K-means clusters of the
//! answer arranged into a named hierarchy by each method.
//!
//!     cargo run --example expand_and_cluster -- "bread OR telescope" 4

mod support;

use lexis::engine::{ClusterViewNode, SearchRequest};
use lexis::organize::HierarchyMethod;

fn show(node: &ClusterViewNode, depth: usize) {
    let label = if node.label.is_empty() { "*" } else { &node.label };
    println!("{}{label} ({} docs)", "  ".repeat(depth), node.docs.len());
    for child in &node.children {
        show(child, depth + 1);
    }
}

fn main() -> lexis::Result<()> {
    let q = std::env::args().nth(1).unwrap_or_else(|| "telescope OR bread OR goal".into());
    let k = std::env::args().nth(2).map(|k| k.parse().expect("cluster count")).unwrap_or(4);
    let engine = support::demo_engine("organize");

    let mut request = SearchRequest::new(&q);
    request.expand = Some(true);
    request.limit = Some(0);
    let response = engine.search(&request)?;
    println!("{} matches for {q:?}; related terms:", response.total);
    for term in &response.expansions {
        println!("  {:<12} {:.3}", term.term, term.weight);
    }

    for method in [HierarchyMethod::BuI, HierarchyMethod::BuW, HierarchyMethod::Td] {
        let mut request = SearchRequest::new(&q);
        request.cluster = true;
        request.k = Some(k);
        request.hierarchy = Some(method);
        request.limit = Some(0);
        let response = engine.search(&request)?;
        if let Some(view) = response.clusters {
            println!("\n{method:?}");
            show(&view.root, 1);
        }
    }
    Ok(())
}
