use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::tables::{
    AnchorLink, BlockConfig, CollectionKey, CollectionRow, DocKey, DocumentRow, OccurrenceRow, SpamRow, WordKey,
    WordRow,
};
use crate::crawl::{doc_id, DocId, DocumentRecord, LinkRecord};
use crate::error::{Error, Result};
use crate::text::{tokenize, Analyzer, AnalyzerSettings, TermMap};

pub const SCHEMA_VERSION: u32 = 1;

/// Settings a catalog is built under. Queries must be analyzed with the
/// same analyzer settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub schema_version: u32,
    pub block: BlockConfig,
    pub analyzer: AnalyzerSettings,
}

impl Default for Manifest {
    fn default() -> Self {
        Manifest {
            schema_version: SCHEMA_VERSION,
            block: BlockConfig::None,
            analyzer: AnalyzerSettings::default(),
        }
    }
}

/// One document ready to enter the catalog.
#[derive(Debug, Clone)]
pub struct IndexDocument {
    pub record: DocumentRecord,
    pub terms: TermMap,
    /// token count of the body
    pub length: u32,
    pub links: Vec<AnchorLink>,
    pub collections: Vec<String>,
}

impl IndexDocument {
    pub fn new(record: DocumentRecord, text: &str, analyzer: &Analyzer) -> Self {
        IndexDocument {
            record,
            terms: analyzer.analyze(text),
            length: tokenize(text).len() as u32,
            links: Vec::new(),
            collections: Vec::new(),
        }
    }

    /// Attaches out-links `(canonical target url, anchor text)`.
    pub fn with_links<'a>(mut self, links: impl IntoIterator<Item = (&'a str, &'a str)>, analyzer: &Analyzer) -> Self {
        self.links
            .extend(links.into_iter().map(|(url, text)| anchor_link(url, text, analyzer)));
        self
    }

    pub fn in_collection(mut self, name: &str) -> Self {
        self.collections.push(name.to_string());
        self
    }
}

pub fn anchor_link(dst_url: &str, text: &str, analyzer: &Analyzer) -> AnchorLink {
    let terms: BTreeSet<String> = analyzer.terms(text).into_iter().collect();
    AnchorLink {
        dst_id: doc_id(dst_url),
        dst_url: dst_url.to_string(),
        text: text.to_string(),
        terms: terms.into_iter().collect(),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AddReport {
    pub added: usize,
    /// ids already present in the catalog or repeated in the input
    pub rejected: Vec<DocId>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AnchorReport {
    /// links whose target is in the catalog
    pub applied: usize,
    pub unfetched_target: usize,
    pub unknown_source: usize,
}

/// tf after `anchors` in-link anchor texts carrying the term.
pub fn anchored_tf(freq: u32, max_freq: u32, anchors: u32) -> f64 {
    let (mut tf, rest) = if freq > 0 {
        (f64::from(freq) / f64::from(max_freq), anchors)
    } else if anchors > 0 {
        (0.5, anchors - 1)
    } else {
        return 0.0;
    };
    for _ in 0..rest {
        tf = (tf + 0.5) / 1.5;
    }
    tf
}

pub fn idf(doc_count: usize, df: u32) -> f64 {
    if df == 0 || doc_count == 0 {
        0.0
    } else {
        (doc_count as f64 / f64::from(df)).log10()
    }
}

/// The six index tables plus the anchor links they are derived from.
#[derive(Debug, Clone, Default)]
pub struct Catalog {
    pub(crate) manifest: Manifest,
    pub(crate) documents: BTreeMap<DocKey, DocumentRow>,
    pub(crate) doc_by_md5: HashMap<DocId, DocKey>,
    pub(crate) words: BTreeMap<WordKey, WordRow>,
    pub(crate) word_by_name: BTreeMap<String, WordKey>,
    /// keyed (word, doc); a word's postings are a contiguous range
    pub(crate) occurrences: BTreeMap<(WordKey, DocKey), OccurrenceRow>,
    pub(crate) doc_words: BTreeMap<DocKey, BTreeSet<WordKey>>,
    pub(crate) spam: BTreeMap<String, u32>,
    pub(crate) collections: BTreeMap<CollectionKey, CollectionRow>,
    pub(crate) collection_by_name: BTreeMap<String, CollectionKey>,
    pub(crate) memberships: BTreeSet<(CollectionKey, DocKey)>,
    /// out-links by source document
    pub(crate) links: BTreeMap<DocId, Vec<AnchorLink>>,
    /// target id to the sources linking to it
    pub(crate) inbound: HashMap<DocId, BTreeSet<DocId>>,
    pub(crate) next_doc: DocKey,
    pub(crate) next_word: WordKey,
    pub(crate) next_collection: CollectionKey,
}

impl Catalog {
    pub fn new(manifest: Manifest) -> Self {
        Catalog {
            manifest,
            next_doc: 1,
            next_word: 1,
            next_collection: 1,
            ..Default::default()
        }
    }

    pub fn manifest(&self) -> &Manifest {
        &self.manifest
    }

    pub fn doc_count(&self) -> usize {
        self.documents.len()
    }

    pub fn word_count(&self) -> usize {
        self.words.len()
    }

    pub fn occurrence_count(&self) -> usize {
        self.occurrences.len()
    }

    pub fn documents(&self) -> impl Iterator<Item = &DocumentRow> {
        self.documents.values()
    }

    pub fn document(&self, key: DocKey) -> Option<&DocumentRow> {
        self.documents.get(&key)
    }

    pub fn document_by_md5(&self, md5: &DocId) -> Option<&DocumentRow> {
        self.doc_by_md5.get(md5).and_then(|k| self.documents.get(k))
    }

    pub fn doc_key(&self, md5: &DocId) -> Option<DocKey> {
        self.doc_by_md5.get(md5).copied()
    }

    /// Words in name order.
    pub fn words(&self) -> impl Iterator<Item = &WordRow> {
        self.word_by_name.values().map(|k| &self.words[k])
    }

    pub fn word(&self, name: &str) -> Option<&WordRow> {
        self.word_by_name.get(name).map(|k| &self.words[k])
    }

    pub fn word_by_key(&self, key: WordKey) -> Option<&WordRow> {
        self.words.get(&key)
    }

    pub fn df(&self, term: &str) -> u32 {
        self.word(term).map_or(0, |w| w.df)
    }

    pub fn idf(&self, term: &str) -> f64 {
        idf(self.doc_count(), self.df(term))
    }

    /// Occurrence rows of `term`, ordered by document key.
    pub fn postings(&self, term: &str) -> Vec<&OccurrenceRow> {
        match self.word_by_name.get(term) {
            Some(&w) => self.postings_of(w).collect(),
            None => Vec::new(),
        }
    }

    pub fn postings_of(&self, word: WordKey) -> impl Iterator<Item = &OccurrenceRow> {
        self.occurrences.range((word, 0)..=(word, DocKey::MAX)).map(|(_, row)| row)
    }

    /// The terms of a document with their occurrence rows, in word-key order.
    pub fn doc_terms(&self, doc: DocKey) -> Vec<(&WordRow, &OccurrenceRow)> {
        self.doc_words
            .get(&doc)
            .into_iter()
            .flatten()
            .map(|w| (&self.words[w], &self.occurrences[&(*w, doc)]))
            .collect()
    }

    pub fn occurrences(&self) -> impl Iterator<Item = &OccurrenceRow> {
        self.occurrences.values()
    }

    /// Out-links of every document, by source id.
    pub fn links(&self) -> impl Iterator<Item = (&DocId, &AnchorLink)> {
        self.links.iter().flat_map(|(src, v)| v.iter().map(move |l| (src, l)))
    }

    pub fn spam(&self) -> impl Iterator<Item = SpamRow> + '_ {
        self.spam.iter().map(|(url, &freq)| SpamRow {
            url: url.clone(),
            freq,
        })
    }

    pub fn is_spam(&self, url: &str) -> bool {
        self.spam.contains_key(url)
    }

    pub fn collections(&self) -> impl Iterator<Item = &CollectionRow> {
        self.collection_by_name.values().map(|k| &self.collections[k])
    }

    /// Members of a collection; `None` if it does not exist.
    pub fn collection_members(&self, name: &str) -> Option<BTreeSet<DocKey>> {
        let &col = self.collection_by_name.get(name)?;
        Some(
            self.memberships
                .range((col, 0)..=(col, DocKey::MAX))
                .map(|&(_, d)| d)
                .collect(),
        )
    }

    pub fn collections_of(&self, doc: DocKey) -> Vec<&str> {
        self.memberships
            .iter()
            .filter(|(_, d)| *d == doc)
            .map(|(c, _)| self.collections[c].name.as_str())
            .collect()
    }

    // ---- writes ----

    /// Checked single-document path. Duplicate ids are rejected.
    pub fn add_documents(&mut self, docs: impl IntoIterator<Item = IndexDocument>) -> AddReport {
        let mut report = AddReport::default();
        let mut affected = BTreeSet::new();
        for doc in docs {
            let md5 = doc.record.id;
            if self.doc_by_md5.contains_key(&md5) {
                log::warn!("document {md5} already indexed, skipped");
                report.rejected.push(md5);
                continue;
            }
            let key = self.insert_document(doc);
            affected.insert(key);
            for link in self.links.get(&md5).into_iter().flatten() {
                if let Some(&dst) = self.doc_by_md5.get(&link.dst_id) {
                    affected.insert(dst);
                }
            }
            report.added += 1;
        }
        for key in affected {
            self.refresh_anchors(key);
        }
        self.finish_update();
        report
    }

    /// Removes documents with their occurrences, memberships and out-links.
    /// Unknown ids are skipped with a warning. Returns how many were removed.
    pub fn delete_documents(&mut self, ids: &[DocId]) -> usize {
        let mut affected = BTreeSet::new();
        let mut removed = 0;
        for md5 in ids {
            let Some(key) = self.doc_by_md5.remove(md5) else {
                log::warn!("delete of unknown document {md5} ignored");
                continue;
            };
            for link in self.links.remove(md5).unwrap_or_default() {
                if let Some(srcs) = self.inbound.get_mut(&link.dst_id) {
                    srcs.remove(md5);
                    if srcs.is_empty() {
                        self.inbound.remove(&link.dst_id);
                    }
                }
                if let Some(&dst) = self.doc_by_md5.get(&link.dst_id) {
                    affected.insert(dst);
                }
            }
            for w in self.doc_words.remove(&key).unwrap_or_default() {
                self.occurrences.remove(&(w, key));
                self.words.get_mut(&w).expect("occurrence references word").df -= 1;
            }
            self.memberships.retain(|&(_, d)| d != key);
            self.documents.remove(&key);
            affected.remove(&key);
            removed += 1;
        }
        for key in affected {
            if self.documents.contains_key(&key) {
                self.refresh_anchors(key);
            }
        }
        self.finish_update();
        removed
    }

    /// Attaches crawler links to their source documents and reweights the
    /// targets' anchor terms.
    pub fn apply_anchor_terms(&mut self, links: &[LinkRecord], analyzer: &Analyzer) -> AnchorReport {
        let mut report = AnchorReport::default();
        let mut affected = BTreeSet::new();
        for link in links {
            if !self.doc_by_md5.contains_key(&link.src_id) {
                report.unknown_source += 1;
                continue;
            }
            let anchor = anchor_link(&link.dst_url, &link.anchor_text, analyzer);
            match self.doc_by_md5.get(&anchor.dst_id) {
                Some(&dst) => {
                    affected.insert(dst);
                    report.applied += 1;
                }
                None => report.unfetched_target += 1,
            }
            self.inbound.entry(anchor.dst_id).or_default().insert(link.src_id);
            self.links.entry(link.src_id).or_default().push(anchor);
        }
        for key in affected {
            self.refresh_anchors(key);
        }
        self.finish_update();
        report
    }

    pub fn create_collection(&mut self, name: &str) -> CollectionKey {
        if let Some(&k) = self.collection_by_name.get(name) {
            return k;
        }
        let k = self.next_collection;
        self.next_collection += 1;
        self.collections.insert(
            k,
            CollectionRow {
                id: k,
                name: name.to_string(),
            },
        );
        self.collection_by_name.insert(name.to_string(), k);
        k
    }

    /// Drops a collection. A nonempty one needs `cascade`, which removes the
    /// memberships but keeps the documents.
    pub fn drop_collection(&mut self, name: &str, cascade: bool) -> Result<()> {
        let &col = self
            .collection_by_name
            .get(name)
            .ok_or_else(|| Error::Catalog(format!("no collection named {name:?}")))?;
        let members = self.memberships.range((col, 0)..=(col, DocKey::MAX)).count();
        if members > 0 && !cascade {
            return Err(Error::Catalog(format!(
                "collection {name:?} has {members} documents; drop with cascade"
            )));
        }
        self.memberships.retain(|&(c, _)| c != col);
        self.collections.remove(&col);
        self.collection_by_name.remove(name);
        Ok(())
    }

    pub fn assign_to_collection(&mut self, md5: &DocId, name: &str) -> Result<()> {
        let &doc = self
            .doc_by_md5
            .get(md5)
            .ok_or_else(|| Error::Catalog(format!("unknown document {md5}")))?;
        let col = self.create_collection(name);
        self.memberships.insert((col, doc));
        Ok(())
    }

    pub fn remove_from_collection(&mut self, md5: &DocId, name: &str) -> bool {
        match (self.doc_by_md5.get(md5), self.collection_by_name.get(name)) {
            (Some(&doc), Some(&col)) => self.memberships.remove(&(col, doc)),
            _ => false,
        }
    }

    pub fn mark_spam(&mut self, url: &str) {
        *self.spam.entry(url.to_string()).or_insert(0) += 1;
    }

    /// Overwrites the rank column; documents missing from `ranks` get 0.
    pub fn set_ranks(&mut self, ranks: &HashMap<DocId, f64>) {
        for row in self.documents.values_mut() {
            row.rank = ranks.get(&row.md5).copied().unwrap_or(0.0);
        }
    }

    // ---- maintenance ----

    fn insert_document(&mut self, doc: IndexDocument) -> DocKey {
        let key = self.next_doc;
        self.next_doc += 1;
        let md5 = doc.record.id;
        self.documents.insert(key, document_row(key, &doc.record));
        self.doc_by_md5.insert(md5, key);
        let block = self.manifest.block;
        let words: BTreeSet<WordKey> = doc
            .terms
            .values()
            .map(|stats| {
                let w = self.word_key_or_insert(&stats.term);
                self.words.get_mut(&w).expect("just inserted").df += 1;
                self.occurrences.insert(
                    (w, key),
                    OccurrenceRow {
                        word_id: w,
                        doc_id: key,
                        blocks: block.blocks(&stats.positions, doc.length),
                        tf: stats.norm_tf,
                        freq: stats.raw_freq,
                        anchors: 0,
                    },
                );
                w
            })
            .collect();
        self.doc_words.insert(key, words);
        for name in &doc.collections {
            let col = self.create_collection(name);
            self.memberships.insert((col, key));
        }
        if !doc.links.is_empty() {
            for link in &doc.links {
                self.inbound.entry(link.dst_id).or_default().insert(md5);
            }
            self.links.entry(md5).or_default().extend(doc.links);
        }
        key
    }

    fn word_key_or_insert(&mut self, name: &str) -> WordKey {
        if let Some(&k) = self.word_by_name.get(name) {
            return k;
        }
        let k = self.next_word;
        self.next_word += 1;
        self.words.insert(
            k,
            WordRow {
                id: k,
                name: name.to_string(),
                df: 0,
            },
        );
        self.word_by_name.insert(name.to_string(), k);
        k
    }

    /// Recomputes the anchor counts and tf of every term of one document
    /// from its body counts and the current in-links.
    pub(crate) fn refresh_anchors(&mut self, doc: DocKey) {
        let md5 = self.documents[&doc].md5;
        let mut counts: BTreeMap<String, u32> = BTreeMap::new();
        for src in self.inbound.get(&md5).into_iter().flatten() {
            for link in self.links.get(src).into_iter().flatten() {
                if link.dst_id == md5 {
                    for term in &link.terms {
                        *counts.entry(term.clone()).or_insert(0) += 1;
                    }
                }
            }
        }
        let words = self.doc_words.remove(&doc).unwrap_or_default();
        let max_freq = words
            .iter()
            .map(|w| self.occurrences[&(*w, doc)].freq)
            .max()
            .unwrap_or(0);
        let mut kept = BTreeSet::new();
        for w in words {
            let name = &self.words[&w].name;
            let anchors = counts.remove(name).unwrap_or(0);
            let row = self.occurrences.get_mut(&(w, doc)).expect("doc_words in sync");
            if row.freq == 0 && anchors == 0 {
                self.occurrences.remove(&(w, doc));
                self.words.get_mut(&w).expect("word exists").df -= 1;
                continue;
            }
            row.anchors = anchors;
            row.tf = anchored_tf(row.freq, max_freq, anchors);
            kept.insert(w);
        }
        for (name, anchors) in counts {
            let w = self.word_key_or_insert(&name);
            self.words.get_mut(&w).expect("just inserted").df += 1;
            self.occurrences.insert(
                (w, doc),
                OccurrenceRow {
                    word_id: w,
                    doc_id: doc,
                    blocks: Vec::new(),
                    tf: anchored_tf(0, max_freq, anchors),
                    freq: 0,
                    anchors,
                },
            );
            kept.insert(w);
        }
        self.doc_words.insert(doc, kept);
    }

    /// Drops words nobody uses any more and recomputes every norm.
    pub(crate) fn finish_update(&mut self) {
        let dead: Vec<WordKey> = self.words.values().filter(|w| w.df == 0).map(|w| w.id).collect();
        for w in dead {
            if let Some(row) = self.words.remove(&w) {
                self.word_by_name.remove(&row.name);
            }
        }
        self.compute_norms();
    }

    /// norm(d) = sqrt(sum over terms of (tf * log10(N/df))^2), summed in
    /// term-name order.
    pub fn compute_norms(&mut self) {
        let n = self.documents.len();
        let mut norms = Vec::with_capacity(n);
        for (&doc, words) in &self.doc_words {
            let mut terms: Vec<(&str, f64)> = words
                .iter()
                .map(|w| {
                    let word = &self.words[w];
                    (word.name.as_str(), self.occurrences[&(*w, doc)].tf * idf(n, word.df))
                })
                .collect();
            terms.sort_unstable_by(|a, b| a.0.cmp(b.0));
            let sum: f64 = terms.iter().map(|(_, x)| x * x).sum();
            norms.push((doc, sum.sqrt()));
        }
        for row in self.documents.values_mut() {
            row.norm = 0.0;
        }
        for (doc, norm) in norms {
            if let Some(row) = self.documents.get_mut(&doc) {
                row.norm = norm;
            }
        }
    }

    /// Full scan of the referential constraints.
    pub fn check_integrity(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Catalog(m));
        let mut df: HashMap<WordKey, u32> = HashMap::new();
        for (&(w, d), row) in &self.occurrences {
            if row.word_id != w || row.doc_id != d {
                return fail(format!("occurrence key mismatch at ({w},{d})"));
            }
            if !self.words.contains_key(&w) || !self.documents.contains_key(&d) {
                return fail(format!("dangling occurrence ({w},{d})"));
            }
            if !self.doc_words.get(&d).is_some_and(|s| s.contains(&w)) {
                return fail(format!("occurrence ({w},{d}) missing from doc access path"));
            }
            *df.entry(w).or_insert(0) += 1;
        }
        if self.doc_words.values().map(BTreeSet::len).sum::<usize>() != self.occurrences.len() {
            return fail("doc access path has extra entries".into());
        }
        if self.word_by_name.len() != self.words.len() {
            return fail("word name index out of sync".into());
        }
        for w in self.words.values() {
            if self.word_by_name.get(&w.name) != Some(&w.id) {
                return fail(format!("word {:?} not reachable by name", w.name));
            }
            if df.get(&w.id).copied().unwrap_or(0) != w.df || w.df == 0 {
                return fail(format!("df of {:?} is {} but postings disagree", w.name, w.df));
            }
        }
        if self.doc_by_md5.len() != self.documents.len() {
            return fail("md5 index out of sync".into());
        }
        for d in self.documents.values() {
            if self.doc_by_md5.get(&d.md5) != Some(&d.id) || d.norm.is_nan() || d.norm < 0.0 {
                return fail(format!("bad document row {}", d.id));
            }
        }
        for &(c, d) in &self.memberships {
            if !self.collections.contains_key(&c) || !self.documents.contains_key(&d) {
                return fail(format!("dangling membership ({c},{d})"));
            }
        }
        for src in self.links.keys() {
            if !self.doc_by_md5.contains_key(src) {
                return fail(format!("links of unknown source {src}"));
            }
        }
        Ok(())
    }
}

pub(crate) fn document_row(key: DocKey, record: &DocumentRecord) -> DocumentRow {
    DocumentRow {
        id: key,
        md5: record.id,
        title: record.title.clone(),
        path: record.path.clone(),
        link: record.url.clone(),
        doc_type: record.doc_type.clone(),
        encoding: record.encoding.clone(),
        norm: 0.0,
        rank: 0.0,
    }
}
