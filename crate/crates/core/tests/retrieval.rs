mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::{record, rng, vocabulary};
use lexis::index::{build_index, Catalog, IndexDocument, Manifest};
use lexis::retrieval::{edit_distance, evaluate, suggest_terms, Model, Query};
use lexis::text::{Analyzer, AnalyzerSettings};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn raw() -> Analyzer {
    Analyzer::with_settings(AnalyzerSettings::raw())
}

fn manifest() -> Manifest {
    Manifest {
        analyzer: AnalyzerSettings::raw(),
        ..Default::default()
    }
}

struct Fixture {
    catalog: Catalog,
    texts: Vec<String>,
    vocab: Vec<String>,
}

fn fixture(seed: u64, docs: usize, vocab_size: usize) -> Fixture {
    let mut r = rng(seed);
    let vocab = vocabulary(vocab_size);
    let texts: Vec<String> = (0..docs)
        .map(|_| {
            let len = r.gen_range(1..40);
            (0..len)
                .map(|_| {
                    let i = r.gen_range(0..vocab.len()).min(r.gen_range(0..vocab.len()));
                    vocab[i].clone()
                })
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect();
    let a = raw();
    let indexed: Vec<IndexDocument> = texts
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let mut rec = record(&format!("http://f.org/{i}"), "");
            rec.doc_type = if i % 3 == 0 { "html".into() } else { "txt".into() };
            let d = IndexDocument::new(rec, t, &a);
            if i % 2 == 0 {
                d.in_collection("even")
            } else {
                d
            }
        })
        .collect();
    let (mut catalog, _) = build_index(indexed, manifest());
    // some rank spread for the hybrid models
    let ranks = catalog
        .documents()
        .map(|d| (d.md5, f64::from(d.id % 7) / 6.0))
        .collect();
    catalog.set_ranks(&ranks);
    Fixture { catalog, texts, vocab }
}

fn url_of(catalog: &Catalog, key: u32) -> usize {
    catalog.document(key).unwrap().link.rsplit('/').next().unwrap().parse().unwrap()
}

fn counts(text: &str) -> BTreeMap<&str, f64> {
    let mut m = BTreeMap::new();
    for w in text.split_whitespace() {
        *m.entry(w).or_insert(0.0) += 1.0;
    }
    m
}

/// Dense cosine from raw text, sharing nothing with the index code.
fn dense_cosine(texts: &[String], query: &str) -> Vec<Option<f64>> {
    let docs: Vec<BTreeMap<&str, f64>> = texts.iter().map(|t| counts(t)).collect();
    let n = docs.len() as f64;
    let mut df: BTreeMap<&str, f64> = BTreeMap::new();
    for d in &docs {
        for k in d.keys() {
            *df.entry(k).or_insert(0.0) += 1.0;
        }
    }
    let idf = |t: &str| df.get(t).map_or(0.0, |df| (n / df).log10());
    let q = counts(query);
    let q_max = q.values().cloned().fold(0.0, f64::max);
    let q_vec: BTreeMap<&str, f64> = q.iter().map(|(t, c)| (*t, c / q_max * idf(t))).collect();
    let q_norm = q_vec.values().map(|w| w * w).sum::<f64>().sqrt();
    docs.iter()
        .map(|d| {
            if !q.keys().any(|t| d.contains_key(t)) {
                return None;
            }
            let max = d.values().cloned().fold(0.0, f64::max);
            let vec: BTreeMap<&str, f64> = d.iter().map(|(t, c)| (*t, c / max * idf(t))).collect();
            let norm = vec.values().map(|w| w * w).sum::<f64>().sqrt();
            if norm == 0.0 || q_norm == 0.0 {
                return Some(0.0);
            }
            let dot: f64 = q_vec.iter().map(|(t, w)| w * vec.get(t).copied().unwrap_or(0.0)).sum();
            Some(dot / (norm * q_norm))
        })
        .collect()
}

#[test]
fn vsm_matches_dense_cosine() {
    let f = fixture(1, 30, 200);
    let a = raw();
    let mut r = rng(2);
    for _ in 0..200 {
        let len = r.gen_range(1..5);
        let mut words: Vec<String> = (0..len).map(|_| f.vocab.choose(&mut r).unwrap().clone()).collect();
        if r.gen_bool(0.2) {
            words.push("unknownword".into());
        }
        let q = words.join(" ");
        let oracle = dense_cosine(&f.texts, &q);
        let results = evaluate(&Query::parse(&q, Model::Vsm, &a).unwrap(), &f.catalog).unwrap();
        let got: BTreeMap<usize, f64> = results.iter().map(|r| (url_of(&f.catalog, r.doc), r.score)).collect();
        let expected: BTreeMap<usize, f64> =
            oracle.iter().enumerate().filter_map(|(i, s)| s.map(|s| (i, s))).collect();
        assert_eq!(got.keys().collect::<Vec<_>>(), expected.keys().collect::<Vec<_>>(), "{q}");
        for (k, v) in &expected {
            assert!((got[k] - v).abs() < 1e-9, "{q}: {} vs {v}", got[k]);
            assert!((0.0..=1.0 + 1e-12).contains(v));
        }
        for w in results.windows(2) {
            assert!(w[0].score >= w[1].score);
        }
    }
}

#[derive(Debug, Clone)]
enum Expr {
    Term(String),
    And(Vec<Expr>),
    Or(Vec<Expr>),
    Not(Box<Expr>),
}

impl Expr {
    fn render(&self) -> String {
        match self {
            Expr::Term(t) => t.clone(),
            Expr::And(c) => format!("({})", c.iter().map(Expr::render).collect::<Vec<_>>().join(" AND ")),
            Expr::Or(c) => format!("({})", c.iter().map(Expr::render).collect::<Vec<_>>().join(" OR ")),
            Expr::Not(c) => format!("NOT {}", c.render()),
        }
    }

    fn holds(&self, words: &BTreeSet<&str>) -> bool {
        match self {
            Expr::Term(t) => words.contains(t.as_str()),
            Expr::And(c) => c.iter().all(|e| e.holds(words)),
            Expr::Or(c) => c.iter().any(|e| e.holds(words)),
            Expr::Not(c) => !c.holds(words),
        }
    }

    fn has_positive_term(&self) -> bool {
        match self {
            Expr::Term(_) => true,
            Expr::And(c) | Expr::Or(c) => c.iter().any(Expr::has_positive_term),
            Expr::Not(_) => false,
        }
    }
}

fn random_expr(r: &mut ChaCha8Rng, vocab: &[String], depth: u32, allow_not: bool) -> Expr {
    let roll = r.gen_range(0..10);
    if depth == 0 || roll < 4 {
        return Expr::Term(vocab[r.gen_range(0..vocab.len().min(40))].clone());
    }
    match roll {
        4..=6 => Expr::And((0..r.gen_range(2..4)).map(|_| random_expr(r, vocab, depth - 1, allow_not)).collect()),
        7 | 8 => Expr::Or((0..r.gen_range(2..4)).map(|_| random_expr(r, vocab, depth - 1, allow_not)).collect()),
        _ if allow_not => Expr::Not(Box::new(random_expr(r, vocab, depth - 1, allow_not))),
        _ => Expr::Term(vocab[r.gen_range(0..vocab.len().min(40))].clone()),
    }
}

#[test]
fn boolean_matches_predicate_evaluation() {
    let f = fixture(3, 30, 200);
    let a = raw();
    let mut r = rng(4);
    let word_sets: Vec<BTreeSet<&str>> = f.texts.iter().map(|t| t.split_whitespace().collect()).collect();
    let mut checked = 0;
    while checked < 200 {
        let e = random_expr(&mut r, &f.vocab, 3, true);
        if !e.has_positive_term() {
            continue;
        }
        checked += 1;
        let q = Query::parse(&e.render(), Model::Boolean, &a).unwrap();
        let got: BTreeSet<usize> = evaluate(&q, &f.catalog)
            .unwrap()
            .iter()
            .map(|r| url_of(&f.catalog, r.doc))
            .collect();
        let expected: BTreeSet<usize> = (0..f.texts.len()).filter(|&i| e.holds(&word_sets[i])).collect();
        assert_eq!(got, expected, "{}", e.render());
    }
}

#[test]
fn boolean_results_follow_rank() {
    let f = fixture(5, 30, 100);
    let q = Query::parse(&f.vocab[0], Model::Boolean, &raw()).unwrap();
    let results = evaluate(&q, &f.catalog).unwrap();
    assert!(results.len() > 3);
    for w in results.windows(2) {
        let ra = f.catalog.document(w[0].doc).unwrap().rank;
        let rb = f.catalog.document(w[1].doc).unwrap().rank;
        assert!(ra >= rb);
    }
}

#[test]
fn soft_models_agree_with_boolean_on_positive_queries() {
    let f = fixture(6, 30, 200);
    let a = raw();
    let mut r = rng(7);
    for _ in 0..200 {
        let e = random_expr(&mut r, &f.vocab, 3, false);
        let text = e.render();
        let set = |m: Model| -> BTreeSet<u32> {
            evaluate(&Query::parse(&text, m, &a).unwrap(), &f.catalog)
                .unwrap()
                .iter()
                .map(|r| r.doc)
                .collect()
        };
        let boolean = set(Model::Boolean);
        // every fixture term misses some document, so every idf is positive
        assert_eq!(set(Model::Fuzzy), boolean, "{text}");
        if !text.contains("AND") {
            assert_eq!(set(Model::ExtBoolean), boolean, "{text}");
        } else {
            assert!(set(Model::ExtBoolean).is_superset(&boolean), "{text}");
        }
    }
}

#[test]
fn blocks_order_by_matched_terms_then_similarity() {
    let f = fixture(8, 30, 60);
    let a = raw();
    let mut r = rng(9);
    for _ in 0..100 {
        let len = r.gen_range(2..6);
        let q: Vec<String> = (0..len).map(|_| f.vocab[r.gen_range(0..30)].clone()).collect();
        let query = Query::parse(&q.join(" "), Model::BlockHybrid, &a).unwrap();
        let results = evaluate(&query, &f.catalog).unwrap();
        let hybrid = evaluate(&Query { model: Model::Hybrid, ..query.clone() }, &f.catalog).unwrap();
        assert_eq!(results.len(), hybrid.len());
        for res in &results {
            assert!(res.matched_terms >= 1);
            assert_eq!(res.block, Some(res.matched_terms));
        }
        for w in results.windows(2) {
            assert!(
                w[0].matched_terms > w[1].matched_terms
                    || (w[0].matched_terms == w[1].matched_terms && w[0].score >= w[1].score)
            );
        }
    }
}

fn tiny(docs: &[&str]) -> Catalog {
    let a = raw();
    build_index(
        docs.iter()
            .enumerate()
            .map(|(i, t)| IndexDocument::new(record(&format!("http://t.org/{i}"), ""), t, &a)),
        manifest(),
    )
    .0
}

fn keys(c: &Catalog, q: &str, m: Model) -> Vec<usize> {
    evaluate(&Query::parse(q, m, &raw()).unwrap(), c)
        .unwrap()
        .iter()
        .map(|r| url_of(c, r.doc))
        .collect()
}

#[test]
fn small_worked_examples() {
    // postings a = {1,2}, b = {2,3}
    let c = tiny(&["z", "a", "a b", "b", "z"]);
    assert_eq!(keys(&c, "a AND b", Model::Boolean), [2]);

    let c = tiny(&["a b c", "a", "d"]);
    assert_eq!(keys(&c, "a b", Model::BlockHybrid), [0, 1]);
    let blocks: Vec<_> = evaluate(&Query::parse("a b", Model::BlockHybrid, &raw()).unwrap(), &c)
        .unwrap()
        .iter()
        .map(|r| r.block)
        .collect();
    assert_eq!(blocks, [Some(2), Some(1)]);

    let self_sim = evaluate(&Query::parse("a b c", Model::Vsm, &raw()).unwrap(), &c).unwrap();
    assert!((self_sim[0].score - 1.0).abs() < 1e-12);

    // w_a = 1 (rarest term, tf 1), w_b = 0
    let c = tiny(&["a", "b", "b", "x"]);
    let r = evaluate(&Query::parse("a OR b", Model::ExtBoolean, &raw()).unwrap(), &c).unwrap();
    let d0 = r.iter().find(|r| url_of(&c, r.doc) == 0).unwrap();
    assert!((d0.score - 0.5f64.sqrt()).abs() < 1e-12);
}

#[test]
fn not_only_queries_are_rejected_and_empty_queries_are_empty() {
    let c = tiny(&["a", "b"]);
    for m in Model::ALL {
        assert!(evaluate(&Query::parse("NOT a", m, &raw()).unwrap(), &c).is_err());
        assert!(evaluate(&Query::parse("", m, &raw()).unwrap(), &c).unwrap().is_empty());
    }
}

#[test]
fn filters_restrict_the_space() {
    let f = fixture(10, 30, 50);
    let a = raw();
    let term = &f.vocab[0];
    for m in Model::ALL {
        let typed = evaluate(&Query::parse(&format!("type:html {term}"), m, &a).unwrap(), &f.catalog).unwrap();
        assert!(!typed.is_empty());
        assert!(typed.iter().all(|r| f.catalog.document(r.doc).unwrap().doc_type == "html"));
        let scoped = evaluate(&Query::parse(&format!("collection:even {term}"), m, &a).unwrap(), &f.catalog).unwrap();
        assert!(!scoped.is_empty());
        assert!(scoped.iter().all(|r| url_of(&f.catalog, r.doc) % 2 == 0));
        let none = evaluate(&Query::parse(&format!("collection:nosuch {term}"), m, &a).unwrap(), &f.catalog).unwrap();
        assert!(none.is_empty());
    }
    // NOT complements within the filtered documents only
    let q = Query::parse(&format!("type:html NOT {term} OR {term}"), Model::Boolean, &a).unwrap();
    let all_html = f.catalog.documents().filter(|d| d.doc_type == "html").count();
    assert_eq!(evaluate(&q, &f.catalog).unwrap().len(), all_html);
}

fn recursive_distance(a: &[char], b: &[char]) -> usize {
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }
    let cost = usize::from(a[a.len() - 1] != b[b.len() - 1]);
    (recursive_distance(&a[..a.len() - 1], b) + 1)
        .min(recursive_distance(a, &b[..b.len() - 1]) + 1)
        .min(recursive_distance(&a[..a.len() - 1], &b[..b.len() - 1]) + cost)
}

#[test]
fn edit_distance_matches_recursive_definition() {
    let mut r = rng(11);
    let alphabet = ['a', 'b', 'c', 'λ'];
    let word = |r: &mut ChaCha8Rng| -> String {
        (0..r.gen_range(0..=8)).map(|_| *alphabet.choose(r).unwrap()).collect()
    };
    for _ in 0..1000 {
        let a = word(&mut r);
        let b = word(&mut r);
        let c = word(&mut r);
        let ac: Vec<char> = a.chars().collect();
        let bc: Vec<char> = b.chars().collect();
        let d = edit_distance(&a, &b);
        assert_eq!(d, recursive_distance(&ac, &bc), "{a} {b}");
        assert_eq!(d, edit_distance(&b, &a));
        assert!(d <= edit_distance(&a, &c) + edit_distance(&c, &b));
    }
}

#[test]
fn suggestions_only_for_missing_terms() {
    let c = tiny(&["cat cat car", "cat dog", "cat dog", "cart"]);
    assert!(suggest_terms("cat", &c, 2, 5).is_empty());
    let got: Vec<String> = suggest_terms("cay", &c, 1, 5).into_iter().map(|s| s.word).collect();
    assert_eq!(got, ["car", "cat"]);
    let wide = suggest_terms("cay", &c, 2, 5);
    for w in wide.windows(2) {
        assert!((w[0].distance, w[0].df, &w[0].word) <= (w[1].distance, w[1].df, &w[1].word));
    }
    assert!(suggest_terms("cay", &c, 0, 5).is_empty());
}
