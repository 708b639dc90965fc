//! Post-processing of a ranked answer: query expansion, result clustering
//! with cluster hierarchies, and taxonomy induction over the lexicon.

mod expansion;
mod hierarchy;
mod kmeans;
mod naming;
mod taxonomy;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::{Catalog, DocKey, WordKey};

pub use expansion::{expand_query, ExpansionConfig, ExpansionTerm};
pub use hierarchy::{build_bu_i, build_bu_w, ClusterNode, ClusterTree, HierarchyMethod};
pub use kmeans::{doc_vector, kmeans, DocVector, KMeansOutcome, MAX_ROUNDS};
pub use naming::{name_centroids, ordered_terms};
pub use taxonomy::{build_taxonomy, TaxonomyConfig, TaxonomyForest, TaxonomyLevel};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cluster {
    pub members: Vec<DocKey>,
    /// heaviest term first
    pub centroid: Vec<(String, f64)>,
    pub name: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClusteringConfig {
    pub algorithm: HierarchyMethod,
    pub clusters: usize,
    pub max_docs: usize,
    pub min_title_len: usize,
    pub max_title_len: usize,
    pub max_depth: usize,
    /// internal nodes keep their derived names
    pub name_hierarchy: bool,
    /// a top-down cluster smaller than this is not split further
    pub min_cluster_size: usize,
    pub max_words_per_doc: usize,
}

impl Default for ClusteringConfig {
    fn default() -> Self {
        ClusteringConfig {
            algorithm: HierarchyMethod::BuI,
            clusters: 2,
            max_docs: 100,
            min_title_len: 1,
            max_title_len: 3,
            max_depth: 2,
            name_hierarchy: true,
            min_cluster_size: 4,
            max_words_per_doc: 50,
        }
    }
}

impl ClusteringConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(format!("clustering: {m}")));
        if self.clusters < 2 {
            return bad("number of clusters must be at least 2");
        }
        if self.max_docs == 0 {
            return bad("max_docs must be positive");
        }
        if self.min_title_len == 0 || self.max_title_len < self.min_title_len {
            return bad("title lengths need 1 <= min_title_len <= max_title_len");
        }
        if self.max_depth == 0 {
            return bad("max_depth must be positive");
        }
        if self.max_words_per_doc == 0 {
            return bad("max_words_per_doc must be positive");
        }
        Ok(())
    }
}

struct Vectors<'a> {
    catalog: &'a Catalog,
    points: Vec<DocVector>,
}

impl<'a> Vectors<'a> {
    fn new(catalog: &'a Catalog, docs: &[DocKey], max_terms: usize) -> Self {
        let points = docs.iter().map(|&d| doc_vector(catalog, d, max_terms)).collect();
        Vectors { catalog, points }
    }

    fn centroid_terms(&self, centroid: &BTreeMap<WordKey, f64>) -> Vec<(String, f64)> {
        let mut terms: Vec<(String, f64)> = centroid
            .iter()
            .filter(|(_, w)| **w > 0.0)
            .filter_map(|(k, w)| self.catalog.word_by_key(*k).map(|row| (row.name.clone(), *w)))
            .collect();
        terms.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        terms
    }

    /// K-means over a subset of the points, named among themselves.
    fn cluster(&self, subset: &[usize], k: usize, config: &ClusteringConfig) -> Vec<Cluster> {
        let pts: Vec<DocVector> = subset.iter().map(|&i| self.points[i].clone()).collect();
        let outcome = kmeans(&pts, k);
        let centroids: Vec<Vec<(String, f64)>> = outcome.centroids.iter().map(|c| self.centroid_terms(c)).collect();
        let names = name_centroids(&centroids, config.min_title_len, config.max_title_len);
        outcome
            .clusters
            .iter()
            .zip(centroids)
            .zip(names)
            .map(|((members, centroid), name)| Cluster {
                members: members.iter().map(|&m| pts[m].doc).collect(),
                centroid,
                name,
            })
            .collect()
    }
}

fn effective_k(k: usize, available: usize) -> usize {
    if available < k {
        log::warn!("only {available} documents to cluster, lowering the number of clusters from {k}");
    }
    k.min(available)
}

/// Flat K-means over the first `config.max_docs` answer documents, named.
pub fn cluster_results(answer: &[DocKey], catalog: &Catalog, config: &ClusteringConfig) -> Vec<Cluster> {
    let docs = &answer[..answer.len().min(config.max_docs)];
    let vectors = Vectors::new(catalog, docs, config.max_words_per_doc);
    let all: Vec<usize> = (0..docs.len()).collect();
    vectors.cluster(&all, effective_k(config.clusters, docs.len()), config)
}

/// Clusters the answer and arranges the clusters with the configured
/// hierarchy method. `None` for an empty answer.
pub fn organize_results(answer: &[DocKey], catalog: &Catalog, config: &ClusteringConfig) -> Option<ClusterTree> {
    if answer.is_empty() {
        return None;
    }
    let tree = match config.algorithm {
        HierarchyMethod::Td => hierarchy_td(answer, catalog, config),
        method => {
            let clusters = cluster_results(answer, catalog, config);
            let root = if method == HierarchyMethod::BuI {
                build_bu_i(&clusters)
            } else {
                let ordered: Vec<Vec<String>> = clusters.iter().map(|c| weight_ordered_name(c)).collect();
                build_bu_w(&clusters, &ordered)
            };
            ClusterTree { method, clusters, root }
        }
    };
    Some(if config.name_hierarchy { tree } else { tree.without_internal_names() })
}

/// The name words heaviest first by centroid weight, ties alphabetical.
/// Words outside the centroid (suffixes) go last.
pub fn weight_ordered_name(cluster: &Cluster) -> Vec<String> {
    let weight = |w: &String| cluster.centroid.iter().find(|(t, _)| t == w).map(|(_, x)| *x);
    let mut name = cluster.name.clone();
    name.sort_by(|a, b| match (weight(a), weight(b)) {
        (Some(x), Some(y)) => y.total_cmp(&x).then(a.cmp(b)),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => a.cmp(b),
    });
    name
}

/// Recursive K-means: the root's children are the top-level clusters and a
/// cluster is split again until `max_depth` or until it has fewer than
/// `min_cluster_size` members.
pub fn hierarchy_td(answer: &[DocKey], catalog: &Catalog, config: &ClusteringConfig) -> ClusterTree {
    let docs = &answer[..answer.len().min(config.max_docs)];
    let vectors = Vectors::new(catalog, docs, config.max_words_per_doc);
    let position: BTreeMap<DocKey, usize> = docs.iter().enumerate().map(|(i, &d)| (d, i)).collect();
    let mut leaves: Vec<Cluster> = Vec::new();

    fn split(
        subset: &[usize],
        depth: usize,
        vectors: &Vectors,
        position: &BTreeMap<DocKey, usize>,
        config: &ClusteringConfig,
        leaves: &mut Vec<Cluster>,
    ) -> Vec<ClusterNode> {
        let k = effective_k(config.clusters, subset.len());
        let clusters = vectors.cluster(subset, k, config);
        let mut nodes = Vec::new();
        for cluster in clusters {
            let members: Vec<usize> = cluster.members.iter().map(|d| position[d]).collect();
            let can_split = depth < config.max_depth && members.len() >= config.min_cluster_size && members.len() > 1;
            let children = if can_split {
                split(&members, depth + 1, vectors, position, config, leaves)
            } else {
                Vec::new()
            };
            // a split that cannot separate anything leaves the cluster whole
            if children.len() > 1 {
                nodes.push(ClusterNode {
                    name: cluster.name.clone(),
                    members: cluster.members.clone(),
                    cluster: None,
                    children,
                });
            } else {
                if children.len() == 1 {
                    leaves.pop();
                }
                leaves.push(cluster);
                let index = leaves.len() - 1;
                nodes.push(ClusterNode::leaf(index, &leaves[index]));
            }
        }
        nodes
    }

    let all: Vec<usize> = (0..docs.len()).collect();
    let mut top = split(&all, 1, &vectors, &position, config, &mut leaves);
    let root = if top.len() == 1 {
        top.pop().expect("one node")
    } else {
        let members = top.iter().flat_map(|n| n.members.iter().copied()).collect();
        ClusterNode {
            name: Vec::new(),
            members,
            cluster: None,
            children: top,
        }
    };
    ClusterTree {
        method: HierarchyMethod::Td,
        clusters: leaves,
        root,
    }
}
