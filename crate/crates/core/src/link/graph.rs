use std::collections::{BTreeSet, HashMap, HashSet};

use crate::crawl::{doc_id, DocId, DocumentIndex, LinkRecord};
use crate::index::Catalog;

/// Directed graph over fetched documents. Edges to documents outside the
/// node set are dropped; parallel edges collapse into one.
#[derive(Debug, Clone, PartialEq)]
pub struct WebGraph {
    nodes: Vec<DocId>,
    position: HashMap<DocId, usize>,
    out: Vec<Vec<usize>>,
}

impl WebGraph {
    pub fn new(nodes: impl IntoIterator<Item = DocId>, edges: impl IntoIterator<Item = (DocId, DocId)>) -> Self {
        let mut uniq = BTreeSet::new();
        let nodes: Vec<DocId> = nodes.into_iter().filter(|n| uniq.insert(*n)).collect();
        let position: HashMap<DocId, usize> = nodes.iter().enumerate().map(|(i, n)| (*n, i)).collect();
        let mut out: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); nodes.len()];
        for (src, dst) in edges {
            if let (Some(&s), Some(&d)) = (position.get(&src), position.get(&dst)) {
                out[s].insert(d);
            }
        }
        WebGraph {
            nodes,
            position,
            out: out.into_iter().map(|s| s.into_iter().collect()).collect(),
        }
    }

    /// Graph of a crawl, leaving out the `excluded` (spam) documents.
    pub fn from_crawl(index: &DocumentIndex, links: &[LinkRecord], excluded: &HashSet<DocId>) -> Self {
        WebGraph::new(
            index.records().iter().map(|r| r.id).filter(|id| !excluded.contains(id)),
            links.iter().map(|l| (l.src_id, doc_id(&l.dst_url))),
        )
    }

    /// Graph of the catalog's documents and stored links. Documents listed
    /// in the spam table do not take part.
    pub fn from_catalog(catalog: &Catalog) -> Self {
        let spam: HashSet<DocId> = catalog.spam().map(|s| doc_id(&s.url)).collect();
        WebGraph::new(
            catalog.documents().map(|d| d.md5).filter(|id| !spam.contains(id)),
            catalog.links().map(|(src, l)| (*src, l.dst_id)),
        )
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn nodes(&self) -> &[DocId] {
        &self.nodes
    }

    pub fn contains(&self, id: &DocId) -> bool {
        self.position.contains_key(id)
    }

    pub fn edges(&self) -> impl Iterator<Item = (DocId, DocId)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(move |(s, ds)| ds.iter().map(move |&d| (self.nodes[s], self.nodes[d])))
    }

    pub(crate) fn out_positions(&self, node: usize) -> &[usize] {
        &self.out[node]
    }

    /// Same nodes with every edge turned around.
    pub fn reversed(&self) -> WebGraph {
        WebGraph::new(self.nodes.iter().copied(), self.edges().map(|(s, d)| (d, s)).collect::<Vec<_>>())
    }

    /// The graph with some nodes and all their edges removed.
    pub fn without(&self, removed: &HashSet<DocId>) -> WebGraph {
        WebGraph::new(
            self.nodes.iter().copied().filter(|n| !removed.contains(n)),
            self.edges().collect::<Vec<_>>(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(s: &str) -> DocId {
        doc_id(s)
    }

    #[test]
    fn edges_to_unknown_nodes_are_dropped() {
        let g = WebGraph::new(
            [id("a"), id("b"), id("c")],
            [(id("a"), id("b")), (id("a"), id("ext")), (id("a"), id("b"))],
        );
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(WebGraph::new([id("a")], []).edge_count(), 0);
    }

    #[test]
    fn removing_a_node_removes_its_edges() {
        let hub = id("hub");
        let others: Vec<DocId> = (0..5).map(|i| id(&i.to_string())).collect();
        let mut edges: Vec<(DocId, DocId)> = others[..3].iter().map(|o| (hub, *o)).collect();
        edges.extend(others[3..].iter().map(|o| (*o, hub)));
        edges.push((others[0], others[1]));
        let g = WebGraph::new(std::iter::once(hub).chain(others.iter().copied()), edges);
        assert_eq!(g.edge_count(), 6);
        let pruned = g.without(&HashSet::from([hub]));
        assert_eq!(pruned.node_count(), 5);
        assert_eq!(pruned.edge_count(), 1);
        assert_eq!(g.reversed().reversed(), g);
    }
}
