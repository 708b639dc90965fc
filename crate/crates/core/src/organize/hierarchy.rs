use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::Cluster;
use crate::index::DocKey;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HierarchyMethod {
    /// merge by largest name intersection
    #[default]
    BuI,
    /// group by common prefix of weight-ordered names
    BuW,
    /// recursive K-means
    Td,
}

impl std::str::FromStr for HierarchyMethod {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "bu_i" => Ok(HierarchyMethod::BuI),
            "bu_w" => Ok(HierarchyMethod::BuW),
            "td" => Ok(HierarchyMethod::Td),
            other => Err(format!("unknown hierarchy method `{other}` (expected bu_i, bu_w or td)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterNode {
    pub name: Vec<String>,
    /// union of the members below, in answer order for leaves
    pub members: Vec<DocKey>,
    /// index into `ClusterTree::clusters` for nodes that are clusters
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cluster: Option<usize>,
    pub children: Vec<ClusterNode>,
}

impl ClusterNode {
    pub fn leaf(index: usize, cluster: &Cluster) -> Self {
        ClusterNode {
            name: cluster.name.clone(),
            members: cluster.members.clone(),
            cluster: Some(index),
            children: Vec::new(),
        }
    }

    fn group(name: Vec<String>, children: Vec<ClusterNode>) -> Self {
        let mut members: Vec<DocKey> = Vec::new();
        for c in &children {
            members.extend(&c.members);
        }
        ClusterNode {
            name,
            members,
            cluster: None,
            children,
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(ClusterNode::depth).max().unwrap_or(0)
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(ClusterNode::node_count).sum::<usize>()
    }

    /// Cluster indices of the leaves, left to right.
    pub fn leaf_clusters(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.walk(&mut |n| {
            if n.is_leaf() {
                out.extend(n.cluster);
            }
        });
        out
    }

    fn walk<'a>(&'a self, f: &mut dyn FnMut(&'a ClusterNode)) {
        f(self);
        for c in &self.children {
            c.walk(f);
        }
    }

    fn strip_internal_names(&mut self) {
        if !self.is_leaf() {
            self.name.clear();
            self.children.iter_mut().for_each(ClusterNode::strip_internal_names);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterTree {
    pub method: HierarchyMethod,
    pub clusters: Vec<Cluster>,
    pub root: ClusterNode,
}

impl ClusterTree {
    /// Indented text, two spaces per level: `name (n docs)`.
    pub fn dump(&self) -> String {
        fn go(node: &ClusterNode, depth: usize, out: &mut String) {
            let label = if node.name.is_empty() { "*".to_string() } else { node.name.join(" ") };
            let _ = writeln!(out, "{}{} ({} docs)", "  ".repeat(depth), label, node.members.len());
            for c in &node.children {
                go(c, depth + 1, out);
            }
        }
        let mut out = String::new();
        go(&self.root, 0, &mut out);
        out
    }

    pub fn without_internal_names(mut self) -> Self {
        self.root.strip_internal_names();
        self
    }
}

fn word_set(name: &[String]) -> BTreeSet<&str> {
    name.iter().map(String::as_str).collect()
}

/// Repeatedly groups the parentless nodes whose names contain the largest
/// pairwise name intersection; the lexicographically smallest pair wins ties.
/// Leftovers with nothing in common go under an unnamed root.
pub fn build_bu_i(clusters: &[Cluster]) -> ClusterNode {
    let mut open: Vec<ClusterNode> = clusters.iter().enumerate().map(|(i, c)| ClusterNode::leaf(i, c)).collect();
    while open.len() > 1 {
        open.sort_by(|a, b| sorted_name(a).cmp(&sorted_name(b)));
        let mut best: Option<(usize, BTreeSet<String>)> = None;
        for i in 0..open.len() {
            for j in i + 1..open.len() {
                let shared: BTreeSet<String> = word_set(&open[i].name)
                    .intersection(&word_set(&open[j].name))
                    .map(|s| s.to_string())
                    .collect();
                if best.as_ref().map_or(true, |b| shared.len() > b.1.len()) {
                    best = Some((shared.len(), shared));
                }
            }
        }
        let shared = best.map(|b| b.1).unwrap_or_default();
        if shared.is_empty() {
            break;
        }
        let (inside, outside): (Vec<ClusterNode>, Vec<ClusterNode>) = open.into_iter().partition(|n| {
            let names = word_set(&n.name);
            shared.iter().all(|w| names.contains(w.as_str()))
        });
        open = outside;
        open.push(ClusterNode::group(shared.into_iter().collect(), inside));
    }
    if open.len() == 1 {
        open.pop().expect("one node")
    } else {
        ClusterNode::group(Vec::new(), open)
    }
}

fn sorted_name(n: &ClusterNode) -> Vec<&str> {
    word_set(&n.name).into_iter().collect()
}

/// Groups clusters by the longest common prefix of their weight-ordered
/// names. `ordered` holds each cluster's name heaviest word first.
pub fn build_bu_w(clusters: &[Cluster], ordered: &[Vec<String>]) -> ClusterNode {
    let mut items: Vec<(Vec<String>, ClusterNode)> = clusters
        .iter()
        .enumerate()
        .map(|(i, c)| (ordered[i].clone(), ClusterNode::leaf(i, c)))
        .collect();
    items.sort_by(|a, b| a.0.cmp(&b.0));
    let mut top = prefix_groups(items, 0);
    if top.len() == 1 {
        top.pop().expect("one node")
    } else {
        ClusterNode::group(Vec::new(), top)
    }
}

fn common_prefix(items: &[(Vec<String>, ClusterNode)]) -> usize {
    let first = &items[0].0;
    let mut len = first.len();
    for (name, _) in &items[1..] {
        len = len.min(first.iter().zip(name).take_while(|(a, b)| a == b).count());
    }
    len
}

/// `items` are sorted and share their first `depth` words.
fn prefix_groups(items: Vec<(Vec<String>, ClusterNode)>, depth: usize) -> Vec<ClusterNode> {
    let mut out = Vec::new();
    let mut rest = items.into_iter().peekable();
    while let Some(item) = rest.next() {
        let Some(word) = item.0.get(depth).cloned() else {
            out.push(item.1);
            continue;
        };
        let mut run = vec![item];
        while let Some(next) = rest.peek() {
            if next.0.get(depth) == Some(&word) {
                run.push(rest.next().expect("peeked"));
            } else {
                break;
            }
        }
        if run.len() == 1 {
            out.push(run.pop().expect("one").1);
            continue;
        }
        let shared = common_prefix(&run);
        let name = run[0].0[..shared].to_vec();
        out.push(ClusterNode::group(name, prefix_groups(run, shared)));
    }
    out
}
