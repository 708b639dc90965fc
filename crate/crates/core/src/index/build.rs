use std::collections::{BTreeMap, BTreeSet, HashSet};

use super::catalog::{document_row, AddReport, Catalog, IndexDocument, Manifest};
use super::tables::{AnchorLink, DocKey, DocumentRow, OccurrenceRow, WordRow};
use crate::crawl::DocId;

/// Bulk path: rows are appended without any lookup structure, and the
/// access paths are built once in `finish`.
#[derive(Debug)]
pub struct BulkLoader {
    manifest: Manifest,
    documents: Vec<DocumentRow>,
    seen: HashSet<DocId>,
    occurrences: Vec<(String, OccurrenceRow)>,
    collections: BTreeSet<String>,
    memberships: Vec<(String, DocKey)>,
    links: Vec<(DocId, AnchorLink)>,
    rejected: Vec<DocId>,
}

impl BulkLoader {
    pub fn new(manifest: Manifest) -> Self {
        BulkLoader {
            manifest,
            documents: Vec::new(),
            seen: HashSet::new(),
            occurrences: Vec::new(),
            collections: BTreeSet::new(),
            memberships: Vec::new(),
            links: Vec::new(),
            rejected: Vec::new(),
        }
    }

    /// Declares a collection even if no document ends up in it.
    pub fn collection(&mut self, name: &str) {
        self.collections.insert(name.to_string());
    }

    /// Appends one document. Returns false if its id was already loaded.
    pub fn push(&mut self, doc: IndexDocument) -> bool {
        let md5 = doc.record.id;
        if !self.seen.insert(md5) {
            log::warn!("duplicate document {md5} rejected");
            self.rejected.push(md5);
            return false;
        }
        let key = self.documents.len() as DocKey + 1;
        self.documents.push(document_row(key, &doc.record));
        for stats in doc.terms.into_values() {
            let row = OccurrenceRow {
                word_id: 0,
                doc_id: key,
                blocks: self.manifest.block.blocks(&stats.positions, doc.length),
                tf: stats.norm_tf,
                freq: stats.raw_freq,
                anchors: 0,
            };
            self.occurrences.push((stats.term, row));
        }
        for name in doc.collections {
            self.collections.insert(name.clone());
            self.memberships.push((name, key));
        }
        self.links.extend(doc.links.into_iter().map(|l| (md5, l)));
        true
    }

    pub fn finish(self) -> (Catalog, AddReport) {
        let mut cat = Catalog::new(self.manifest);
        let report = AddReport {
            added: self.documents.len(),
            rejected: self.rejected,
        };

        let names: BTreeSet<&str> = self.occurrences.iter().map(|(n, _)| n.as_str()).collect();
        let word_key: BTreeMap<&str, u32> = names.iter().enumerate().map(|(i, n)| (*n, i as u32 + 1)).collect();
        let mut occ: Vec<((u32, DocKey), OccurrenceRow)> = self
            .occurrences
            .iter()
            .map(|(name, row)| {
                let w = word_key[name.as_str()];
                ((w, row.doc_id), OccurrenceRow { word_id: w, ..row.clone() })
            })
            .collect();
        occ.sort_unstable_by_key(|(k, _)| *k);

        let mut df: BTreeMap<u32, u32> = BTreeMap::new();
        for ((w, d), _) in &occ {
            *df.entry(*w).or_insert(0) += 1;
            cat.doc_words.entry(*d).or_default().insert(*w);
        }
        for (name, &id) in &word_key {
            cat.words.insert(
                id,
                WordRow {
                    id,
                    name: name.to_string(),
                    df: df[&id],
                },
            );
            cat.word_by_name.insert(name.to_string(), id);
        }
        cat.next_word = word_key.len() as u32 + 1;
        cat.occurrences = occ.into_iter().collect();

        for row in self.documents {
            cat.doc_by_md5.insert(row.md5, row.id);
            cat.doc_words.entry(row.id).or_default();
            cat.documents.insert(row.id, row);
        }
        cat.next_doc = cat.documents.len() as DocKey + 1;

        for name in &self.collections {
            cat.create_collection(name);
        }
        for (name, doc) in self.memberships {
            cat.memberships.insert((cat.collection_by_name[&name], doc));
        }

        for (src, link) in self.links {
            cat.inbound.entry(link.dst_id).or_default().insert(src);
            cat.links.entry(src).or_default().push(link);
        }
        let targets: Vec<DocKey> = cat
            .inbound
            .keys()
            .filter_map(|dst| cat.doc_by_md5.get(dst).copied())
            .collect();
        for key in targets {
            cat.refresh_anchors(key);
        }
        cat.finish_update();
        (cat, report)
    }
}

/// Builds a catalog from scratch through the bulk path.
pub fn build_index(docs: impl IntoIterator<Item = IndexDocument>, manifest: Manifest) -> (Catalog, AddReport) {
    let mut loader = BulkLoader::new(manifest);
    for doc in docs {
        loader.push(doc);
    }
    loader.finish()
}
