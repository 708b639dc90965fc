use std::collections::BTreeMap;

use serde::Serialize;

use crate::index::{idf, Catalog, DocKey, WordKey};

/// A unit-length sparse tf-idf vector, sorted by word key.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DocVector {
    pub doc: DocKey,
    pub weights: Vec<(WordKey, f64)>,
}

impl DocVector {
    fn dot(&self, centroid: &BTreeMap<WordKey, f64>) -> f64 {
        self.weights.iter().map(|(w, x)| x * centroid.get(w).copied().unwrap_or(0.0)).sum()
    }

    fn dot_vec(&self, other: &DocVector) -> f64 {
        let (mut i, mut j, mut sum) = (0, 0, 0.0);
        while i < self.weights.len() && j < other.weights.len() {
            let (a, b) = (self.weights[i], other.weights[j]);
            match a.0.cmp(&b.0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    sum += a.1 * b.1;
                    i += 1;
                    j += 1;
                }
            }
        }
        sum
    }
}

/// tf-idf vector of a document, cut to its `max_terms` heaviest terms and
/// scaled to unit length. A document without weighted terms gets the zero
/// vector.
pub fn doc_vector(catalog: &Catalog, doc: DocKey, max_terms: usize) -> DocVector {
    let n = catalog.doc_count();
    let mut terms: Vec<(WordKey, &str, f64)> = catalog
        .doc_terms(doc)
        .into_iter()
        .map(|(w, row)| (w.id, w.name.as_str(), row.tf * idf(n, w.df)))
        .filter(|t| t.2 > 0.0)
        .collect();
    terms.sort_by(|a, b| b.2.total_cmp(&a.2).then(a.1.cmp(b.1)));
    terms.truncate(max_terms);
    let norm = terms.iter().map(|t| t.2 * t.2).sum::<f64>().sqrt();
    let mut weights: Vec<(WordKey, f64)> = terms.into_iter().map(|(w, _, x)| (w, x / norm)).collect();
    weights.sort_by_key(|(w, _)| *w);
    DocVector { doc, weights }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KMeansOutcome {
    /// member indices into the input, per cluster
    pub clusters: Vec<Vec<usize>>,
    pub centroids: Vec<BTreeMap<WordKey, f64>>,
    /// sum of (1 - cosine to own centroid), after each round
    pub objective: Vec<f64>,
    pub rounds: usize,
}

pub const MAX_ROUNDS: usize = 50;
const SAME_POINT: f64 = 1e-12;

fn cosine(x: &DocVector, centroid: &BTreeMap<WordKey, f64>, centroid_norm: f64) -> f64 {
    if centroid_norm == 0.0 {
        0.0
    } else {
        x.dot(centroid) / centroid_norm
    }
}

fn norm(c: &BTreeMap<WordKey, f64>) -> f64 {
    c.values().map(|v| v * v).sum::<f64>().sqrt()
}

fn mean(points: &[DocVector], members: &[usize]) -> BTreeMap<WordKey, f64> {
    let mut c: BTreeMap<WordKey, f64> = BTreeMap::new();
    for &m in members {
        for &(w, x) in &points[m].weights {
            *c.entry(w).or_insert(0.0) += x;
        }
    }
    let n = members.len().max(1) as f64;
    c.values_mut().for_each(|v| *v /= n);
    c
}

/// Spherical K-means. Seeds by farthest-first traversal from the first
/// point, keeps a point in its cluster on ties, re-seeds an emptied cluster
/// with the point farthest from its centroid and drops it when every point
/// sits on its centroid.
pub fn kmeans(points: &[DocVector], k: usize) -> KMeansOutcome {
    let k = k.min(points.len());
    if k == 0 {
        return KMeansOutcome {
            clusters: Vec::new(),
            centroids: Vec::new(),
            objective: Vec::new(),
            rounds: 0,
        };
    }

    // farthest-first seeds
    let mut seeds = vec![0usize];
    let mut closest: Vec<f64> = points.iter().map(|p| 1.0 - p.dot_vec(&points[0])).collect();
    while seeds.len() < k {
        let next = (0..points.len())
            .filter(|i| !seeds.contains(i))
            .max_by(|&a, &b| closest[a].total_cmp(&closest[b]).then(b.cmp(&a)))
            .expect("k <= number of points");
        seeds.push(next);
        for (i, p) in points.iter().enumerate() {
            closest[i] = closest[i].min(1.0 - p.dot_vec(&points[next]));
        }
    }
    let mut centroids: Vec<BTreeMap<WordKey, f64>> = seeds
        .iter()
        .map(|&s| points[s].weights.iter().copied().collect())
        .collect();
    let mut assignment: Vec<Option<usize>> = vec![None; points.len()];
    let mut objective = Vec::new();
    let mut rounds = 0;

    loop {
        rounds += 1;
        let norms: Vec<f64> = centroids.iter().map(norm).collect();
        let mut changed = false;
        for (i, p) in points.iter().enumerate() {
            let current = assignment[i];
            let mut best = current.unwrap_or(0);
            let mut best_sim = cosine(p, &centroids[best], norms[best]);
            for c in 0..centroids.len() {
                let sim = cosine(p, &centroids[c], norms[c]);
                if sim > best_sim {
                    best = c;
                    best_sim = sim;
                }
            }
            if current != Some(best) {
                assignment[i] = Some(best);
                changed = true;
            }
        }

        // empty clusters take the point farthest from its own centroid
        let mut c = 0;
        while c < centroids.len() {
            let size = assignment.iter().filter(|a| **a == Some(c)).count();
            if size > 0 {
                c += 1;
                continue;
            }
            let donor = (0..points.len())
                .filter(|&i| {
                    let own = assignment[i].expect("assigned");
                    assignment.iter().filter(|a| **a == Some(own)).count() > 1
                })
                .map(|i| {
                    let own = assignment[i].expect("assigned");
                    (i, 1.0 - cosine(&points[i], &centroids[own], norms[own]))
                })
                .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)));
            match donor {
                Some((i, dist)) if dist > SAME_POINT => {
                    assignment[i] = Some(c);
                    changed = true;
                    c += 1;
                }
                _ => {
                    centroids.remove(c);
                    for a in assignment.iter_mut().flatten() {
                        if *a > c {
                            *a -= 1;
                        }
                    }
                }
            }
        }

        let members = groups(&assignment, centroids.len());
        centroids = members.iter().map(|m| mean(points, m)).collect();
        let norms: Vec<f64> = centroids.iter().map(norm).collect();
        let j: f64 = points
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let c = assignment[i].expect("assigned");
                1.0 - cosine(p, &centroids[c], norms[c])
            })
            .sum();
        objective.push(j);
        if !changed || rounds >= MAX_ROUNDS {
            return KMeansOutcome {
                clusters: members,
                centroids,
                objective,
                rounds,
            };
        }
    }
}

fn groups(assignment: &[Option<usize>], k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); k];
    for (i, a) in assignment.iter().enumerate() {
        out[a.expect("assigned")].push(i);
    }
    out
}
