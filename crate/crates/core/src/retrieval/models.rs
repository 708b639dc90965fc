use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use super::query::{Model, Query, QueryNode};
use crate::crawl::DocId;
use crate::error::{Error, Result};
use crate::index::{idf, Catalog, DocKey};

pub const COSINE_WEIGHT: f64 = 0.7;
pub const RANK_WEIGHT: f64 = 0.3;
/// exponent of the extended Boolean p-norm
pub const P_NORM: f64 = 2.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoredResult {
    pub doc: DocKey,
    pub md5: DocId,
    pub score: f64,
    /// distinct positive query terms found in the document
    pub matched_terms: usize,
    /// block number for the blocks model (= matched_terms)
    pub block: Option<usize>,
}

/// Documents passing the type and collection filters; `None` means all.
pub fn candidate_universe(catalog: &Catalog, query: &Query) -> Option<BTreeSet<DocKey>> {
    if query.type_filter.is_none() && query.collection.is_none() {
        return None;
    }
    let scoped = query
        .collection
        .as_ref()
        .map(|c| catalog.collection_members(c).unwrap_or_default());
    Some(
        catalog
            .documents()
            .filter(|d| query.type_filter.as_ref().is_none_or(|t| t.contains(&d.doc_type)))
            .filter(|d| scoped.as_ref().is_none_or(|s| s.contains(&d.id)))
            .map(|d| d.id)
            .collect(),
    )
}

/// Ranks the catalog's documents for `query` under its model.
pub fn evaluate(query: &Query, catalog: &Catalog) -> Result<Vec<ScoredResult>> {
    let Some(ast) = &query.ast else {
        return Ok(Vec::new());
    };
    let positive = query.positive_terms();
    if positive.is_empty() {
        return Err(Error::Query("a query needs at least one term outside NOT".into()));
    }
    let universe = candidate_universe(catalog, query);
    let scorer = Scorer::new(catalog, universe);
    let mut results = match query.model {
        Model::Vsm => {
            let qv = scorer.query_vector(query);
            scorer.by_score(&positive, |hits, d| scorer.cosine(&qv, hits, d))
        }
        Model::Hybrid | Model::BlockHybrid => {
            let qv = scorer.query_vector(query);
            scorer.by_score(&positive, |hits, d| scorer.hybrid(&qv, hits, d))
        }
        Model::Boolean => scorer.boolean(ast, &positive),
        Model::ExtBoolean => scorer.soft(ast, &positive, SoftAlgebra::PNorm),
        Model::Fuzzy => scorer.soft(ast, &positive, SoftAlgebra::Fuzzy),
    };
    if query.model == Model::BlockHybrid {
        for r in &mut results {
            r.block = Some(r.matched_terms);
        }
        results.sort_by(|a, b| {
            b.matched_terms
                .cmp(&a.matched_terms)
                .then(b.score.total_cmp(&a.score))
                .then(a.md5.cmp(&b.md5))
        });
    }
    Ok(results)
}

#[derive(Clone, Copy)]
enum SoftAlgebra {
    PNorm,
    Fuzzy,
}

struct QueryVector {
    weights: Vec<f64>,
    idfs: Vec<f64>,
    norm: f64,
}

struct Scorer<'a> {
    catalog: &'a Catalog,
    universe: Option<BTreeSet<DocKey>>,
    n: usize,
    max_idf: f64,
}

impl<'a> Scorer<'a> {
    fn new(catalog: &'a Catalog, universe: Option<BTreeSet<DocKey>>) -> Self {
        let n = catalog.doc_count();
        let min_df = catalog.words().map(|w| w.df).min().unwrap_or(0);
        Scorer {
            catalog,
            universe,
            n,
            max_idf: idf(n, min_df),
        }
    }

    fn allowed(&self, doc: DocKey) -> bool {
        self.universe.as_ref().is_none_or(|u| u.contains(&doc))
    }

    fn universe_docs(&self) -> BTreeSet<DocKey> {
        match &self.universe {
            Some(u) => u.clone(),
            None => self.catalog.documents().map(|d| d.id).collect(),
        }
    }

    /// tf of each positive term per candidate document.
    fn candidates(&self, terms: &[String]) -> HashMap<DocKey, Vec<(usize, f64)>> {
        let mut map: HashMap<DocKey, Vec<(usize, f64)>> = HashMap::new();
        for (i, t) in terms.iter().enumerate() {
            for row in self.catalog.postings(t) {
                if self.allowed(row.doc_id) {
                    map.entry(row.doc_id).or_default().push((i, row.tf));
                }
            }
        }
        map
    }

    fn result(&self, doc: DocKey, score: f64, matched: usize) -> ScoredResult {
        ScoredResult {
            doc,
            md5: self.catalog.document(doc).expect("candidate exists").md5,
            score,
            matched_terms: matched,
            block: None,
        }
    }

    fn sorted(&self, mut results: Vec<ScoredResult>) -> Vec<ScoredResult> {
        results.sort_by(|a, b| b.score.total_cmp(&a.score).then(a.md5.cmp(&b.md5)));
        results
    }

    fn by_score(&self, terms: &[String], score: impl Fn(&[(usize, f64)], DocKey) -> f64) -> Vec<ScoredResult> {
        let results = self
            .candidates(terms)
            .into_iter()
            .map(|(doc, hits)| self.result(doc, score(&hits, doc), hits.len()))
            .collect();
        self.sorted(results)
    }

    /// Weights of the positive query terms: tf over the largest query tf,
    /// times idf. Indexed like `Query::positive_terms`.
    fn query_vector(&self, query: &Query) -> QueryVector {
        let counts = query.term_counts();
        let max_q = counts.iter().map(|(_, c)| *c).max().unwrap_or(1);
        let weights: Vec<f64> = counts
            .iter()
            .map(|(t, c)| f64::from(*c) / f64::from(max_q) * idf(self.n, self.catalog.df(t)))
            .collect();
        let idfs = counts.iter().map(|(t, _)| idf(self.n, self.catalog.df(t))).collect();
        let norm = weights.iter().map(|w| w * w).sum::<f64>().sqrt();
        QueryVector { weights, idfs, norm }
    }

    fn cosine(&self, qv: &QueryVector, hits: &[(usize, f64)], doc: DocKey) -> f64 {
        let d_norm = self.catalog.document(doc).map_or(0.0, |d| d.norm);
        if qv.norm == 0.0 || d_norm == 0.0 {
            return 0.0;
        }
        let dot: f64 = hits.iter().map(|&(i, tf)| tf * qv.idfs[i] * qv.weights[i]).sum();
        dot / (d_norm * qv.norm)
    }

    fn hybrid(&self, qv: &QueryVector, hits: &[(usize, f64)], doc: DocKey) -> f64 {
        let rank = self.catalog.document(doc).map_or(0.0, |d| d.rank);
        COSINE_WEIGHT * self.cosine(qv, hits, doc) + RANK_WEIGHT * rank
    }

    fn boolean(&self, ast: &QueryNode, positive: &[String]) -> Vec<ScoredResult> {
        let universe = self.universe_docs();
        let docs = self.boolean_set(ast, &universe);
        let hits = self.candidates(positive);
        let results = docs
            .into_iter()
            .map(|d| {
                let rank = self.catalog.document(d).map_or(0.0, |r| r.rank);
                self.result(d, rank, hits.get(&d).map_or(0, Vec::len))
            })
            .collect();
        self.sorted(results)
    }

    fn boolean_set(&self, node: &QueryNode, universe: &BTreeSet<DocKey>) -> BTreeSet<DocKey> {
        match node {
            QueryNode::Term(t) => self
                .catalog
                .postings(t)
                .into_iter()
                .map(|r| r.doc_id)
                .filter(|d| universe.contains(d))
                .collect(),
            QueryNode::And(children) => {
                let mut sets = children.iter().map(|c| self.boolean_set(c, universe));
                let first = sets.next().unwrap_or_default();
                sets.fold(first, |acc, s| acc.intersection(&s).copied().collect())
            }
            QueryNode::Or(children) => children.iter().flat_map(|c| self.boolean_set(c, universe)).collect(),
            QueryNode::Not(child) => {
                let inner = self.boolean_set(child, universe);
                universe.difference(&inner).copied().collect()
            }
        }
    }

    /// Term weight in [0,1]: tf * idf / max idf of the lexicon.
    fn soft_weight(&self, term: &str, doc: DocKey, tfs: &HashMap<String, HashMap<DocKey, f64>>) -> f64 {
        if self.max_idf == 0.0 {
            return 0.0;
        }
        let tf = tfs.get(term).and_then(|m| m.get(&doc)).copied().unwrap_or(0.0);
        tf * idf(self.n, self.catalog.df(term)) / self.max_idf
    }

    fn soft_score(
        &self,
        node: &QueryNode,
        doc: DocKey,
        tfs: &HashMap<String, HashMap<DocKey, f64>>,
        algebra: SoftAlgebra,
    ) -> f64 {
        match node {
            QueryNode::Term(t) => self.soft_weight(t, doc, tfs),
            QueryNode::Not(c) => 1.0 - self.soft_score(c, doc, tfs, algebra),
            QueryNode::And(children) | QueryNode::Or(children) => {
                let scores = children.iter().map(|c| self.soft_score(c, doc, tfs, algebra));
                let is_and = matches!(node, QueryNode::And(_));
                let n = children.len() as f64;
                match (algebra, is_and) {
                    (SoftAlgebra::Fuzzy, true) => scores.fold(1.0, f64::min),
                    (SoftAlgebra::Fuzzy, false) => scores.fold(0.0, f64::max),
                    (SoftAlgebra::PNorm, true) => {
                        1.0 - (scores.map(|s| (1.0 - s).powf(P_NORM)).sum::<f64>() / n).powf(1.0 / P_NORM)
                    }
                    (SoftAlgebra::PNorm, false) => (scores.map(|s| s.powf(P_NORM)).sum::<f64>() / n).powf(1.0 / P_NORM),
                }
            }
        }
    }

    fn soft(&self, ast: &QueryNode, positive: &[String], algebra: SoftAlgebra) -> Vec<ScoredResult> {
        let all_terms: BTreeSet<String> = {
            let mut v = Vec::new();
            collect(ast, &mut v);
            v.into_iter().collect()
        };
        let tfs: HashMap<String, HashMap<DocKey, f64>> = all_terms
            .iter()
            .map(|t| {
                let rows = self.catalog.postings(t).into_iter().map(|r| (r.doc_id, r.tf)).collect();
                (t.clone(), rows)
            })
            .collect();
        let hits = self.candidates(positive);
        // without NOT only documents holding a query term can score
        let docs: BTreeSet<DocKey> = if has_not(ast) {
            self.universe_docs()
        } else {
            hits.keys().copied().collect()
        };
        let results = docs
            .into_iter()
            .filter_map(|d| {
                let s = self.soft_score(ast, d, &tfs, algebra);
                (s > 0.0).then(|| self.result(d, s, hits.get(&d).map_or(0, Vec::len)))
            })
            .collect();
        self.sorted(results)
    }
}

fn collect(node: &QueryNode, out: &mut Vec<String>) {
    match node {
        QueryNode::Term(t) => out.push(t.clone()),
        QueryNode::And(c) | QueryNode::Or(c) => c.iter().for_each(|n| collect(n, out)),
        QueryNode::Not(c) => collect(c, out),
    }
}

fn has_not(node: &QueryNode) -> bool {
    match node {
        QueryNode::Term(_) => false,
        QueryNode::Not(_) => true,
        QueryNode::And(c) | QueryNode::Or(c) => c.iter().any(has_not),
    }
}
