use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::bias::BiasInput;
use super::graph::WebGraph;
use crate::crawl::DocId;

pub const DEFAULT_DAMPING: f64 = 0.85;
pub const CONVERGENCE_TOLERANCE: f64 = 1e-8;
const CONVERGENCE_CAP: usize = 100_000;

/// How many power-iteration steps to run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Iterations {
    /// ceil(log2 N), at least 1
    #[default]
    LogN,
    Fixed(usize),
    /// until the L1 change drops below the tolerance
    Converge(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankOptions {
    pub damping: f64,
    pub iterations: Iterations,
}

impl Default for RankOptions {
    fn default() -> Self {
        RankOptions {
            damping: DEFAULT_DAMPING,
            iterations: Iterations::LogN,
        }
    }
}

impl RankOptions {
    pub fn converged() -> Self {
        RankOptions {
            iterations: Iterations::Converge(CONVERGENCE_TOLERANCE),
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct RankVector {
    pub nodes: Vec<DocId>,
    pub values: Vec<f64>,
    pub iterations_run: usize,
    /// L1 distance between successive iterates
    pub deltas: Vec<f64>,
    /// total mass after each iteration
    pub mass: Vec<f64>,
}

impl RankVector {
    pub fn get(&self, id: &DocId) -> Option<f64> {
        self.nodes.iter().position(|n| n == id).map(|i| self.values[i])
    }

    pub fn to_map(&self) -> HashMap<DocId, f64> {
        self.nodes.iter().copied().zip(self.values.iter().copied()).collect()
    }

    /// Ranks divided by the largest rank, so the best page gets 1.
    pub fn max_normalized(&self) -> HashMap<DocId, f64> {
        let max = self.values.iter().copied().fold(0.0, f64::max);
        self.nodes
            .iter()
            .zip(&self.values)
            .map(|(n, v)| (*n, if max > 0.0 { v / max } else { 0.0 }))
            .collect()
    }

    /// (id, rank) by rank descending, ties by id.
    pub fn sorted(&self) -> Vec<(DocId, f64)> {
        let mut out: Vec<(DocId, f64)> = self.nodes.iter().copied().zip(self.values.iter().copied()).collect();
        out.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        out
    }
}

/// Power iteration from the uniform vector:
/// r <- (1-d) t + d (M^T r + dangling(r) t), where t is the teleport
/// distribution. Mass of pages without out-links follows t.
pub fn rank_with_teleport(graph: &WebGraph, teleport: &[f64], options: &RankOptions) -> RankVector {
    let n = graph.node_count();
    if n == 0 {
        return RankVector::default();
    }
    assert_eq!(teleport.len(), n, "teleport vector must cover every node");
    let d = options.damping;
    let (steps, tolerance) = match options.iterations {
        Iterations::LogN => (default_iterations(n), None),
        Iterations::Fixed(k) => (k, None),
        Iterations::Converge(tol) => (CONVERGENCE_CAP, Some(tol)),
    };

    let mut rank = vec![1.0 / n as f64; n];
    let mut out = RankVector {
        nodes: graph.nodes().to_vec(),
        ..Default::default()
    };
    for _ in 0..steps {
        let mut next = vec![0.0; n];
        let mut dangling = 0.0;
        for (i, &r) in rank.iter().enumerate() {
            let targets = graph.out_positions(i);
            if targets.is_empty() {
                dangling += r;
            } else {
                let share = r / targets.len() as f64;
                for &t in targets {
                    next[t] += share;
                }
            }
        }
        for (x, t) in next.iter_mut().zip(teleport) {
            *x = (1.0 - d) * t + d * (*x + dangling * t);
        }
        let delta: f64 = next.iter().zip(&rank).map(|(a, b)| (a - b).abs()).sum();
        rank = next;
        out.iterations_run += 1;
        out.deltas.push(delta);
        out.mass.push(rank.iter().sum());
        if tolerance.is_some_and(|tol| delta < tol) {
            break;
        }
    }
    out.values = rank;
    out
}

pub fn default_iterations(n: usize) -> usize {
    (n.max(1) as f64).log2().ceil().max(1.0) as usize
}

pub fn pagerank(graph: &WebGraph, options: &RankOptions) -> RankVector {
    let n = graph.node_count();
    rank_with_teleport(graph, &vec![1.0 / n.max(1) as f64; n], options)
}

/// Teleports only to preferred pages; spam pages are removed first. Falls
/// back to the uniform teleport when no preferred page is in the graph.
pub fn biased_pagerank(graph: &WebGraph, bias: &BiasInput, options: &RankOptions) -> RankVector {
    let spam: HashSet<DocId> = bias.spam_ids().collect();
    let graph = graph.without(&spam);
    let preferred: HashSet<DocId> = bias.preferred_ids().collect();
    let hits = graph.nodes().iter().filter(|n| preferred.contains(n)).count();
    if hits == 0 {
        log::warn!("no preferred page is in the graph; using uniform teleport");
        return pagerank(&graph, options);
    }
    let teleport: Vec<f64> = graph
        .nodes()
        .iter()
        .map(|n| if preferred.contains(n) { 1.0 / hits as f64 } else { 0.0 })
        .collect();
    rank_with_teleport(&graph, &teleport, options)
}

/// PageRank on the reversed graph: high for pages that reach many others.
pub fn inverse_pagerank(graph: &WebGraph, options: &RankOptions) -> RankVector {
    pagerank(&graph.reversed(), options)
}

/// Top pages by inverse PageRank, for manual spam review.
pub fn spam_candidates(graph: &WebGraph, top_k: usize, options: &RankOptions) -> Vec<(DocId, f64)> {
    let mut ranked = inverse_pagerank(graph, options).sorted();
    ranked.truncate(top_k.max(1));
    ranked
}
