//! The Document Index and the links file written by the crawler.

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::url::DocId;
use crate::error::{Error, Result};
use crate::tsv::{escape, fields};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocumentRecord {
    pub id: DocId,
    pub url: String,
    /// relative to the repository root
    pub path: String,
    pub title: String,
    /// html | txt | other
    pub doc_type: String,
    pub encoding: String,
    /// unix seconds
    pub last_modified: u64,
    pub last_fetched: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkRecord {
    pub src_id: DocId,
    pub dst_url: String,
    pub anchor_text: String,
}

/// Fetched documents in fetch order, with id lookup.
#[derive(Debug, Clone, Default)]
pub struct DocumentIndex {
    records: Vec<DocumentRecord>,
    by_id: HashMap<DocId, usize>,
}

impl DocumentIndex {
    pub fn new() -> Self {
        Self::default()
    }

    /// False (and no change) when the id is already present.
    pub fn insert(&mut self, record: DocumentRecord) -> bool {
        if self.by_id.contains_key(&record.id) {
            return false;
        }
        self.by_id.insert(record.id, self.records.len());
        self.records.push(record);
        true
    }

    pub fn get(&self, id: &DocId) -> Option<&DocumentRecord> {
        self.by_id.get(id).map(|&i| &self.records[i])
    }

    pub fn contains(&self, id: &DocId) -> bool {
        self.by_id.contains_key(id)
    }

    pub fn records(&self) -> &[DocumentRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                r.id,
                escape(&r.url),
                escape(&r.path),
                escape(&r.title),
                escape(&r.doc_type),
                escape(&r.encoding),
                r.last_modified,
                r.last_fetched
            ));
        }
        out
    }

    pub fn from_tsv(text: &str) -> Result<Self> {
        let mut index = DocumentIndex::new();
        for (idx, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let err = |message: &str| Error::Parse {
                what: "document index",
                line: idx + 1,
                message: message.to_string(),
            };
            let f = fields(line, 8).ok_or_else(|| err("expected 8 fields"))?;
            let record = DocumentRecord {
                id: f[0].parse().map_err(|_| err("bad id"))?,
                url: f[1].clone(),
                path: f[2].clone(),
                title: f[3].clone(),
                doc_type: f[4].clone(),
                encoding: f[5].clone(),
                last_modified: f[6].parse().map_err(|_| err("bad last_modified"))?,
                last_fetched: f[7].parse().map_err(|_| err("bad last_fetched"))?,
            };
            index.insert(record);
        }
        Ok(index)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.to_tsv().as_bytes())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_tsv(&text)
    }
}

pub fn links_to_tsv(links: &[LinkRecord]) -> String {
    links
        .iter()
        .map(|l| format!("{}\t{}\t{}\n", l.src_id, escape(&l.dst_url), escape(&l.anchor_text)))
        .collect()
}

pub fn links_from_tsv(text: &str) -> Result<Vec<LinkRecord>> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        let err = |message: &str| Error::Parse {
            what: "links file",
            line: idx + 1,
            message: message.to_string(),
        };
        let f = fields(line, 3).ok_or_else(|| err("expected 3 fields"))?;
        out.push(LinkRecord {
            src_id: f[0].parse().map_err(|_| err("bad id"))?,
            dst_url: f[1].clone(),
            anchor_text: f[2].clone(),
        });
    }
    Ok(out)
}

pub fn save_links(path: &Path, links: &[LinkRecord]) -> Result<()> {
    write_atomic(path, links_to_tsv(links).as_bytes())
}

pub fn load_links(path: &Path) -> Result<Vec<LinkRecord>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    links_from_tsv(&text)
}

/// Write to a sibling temp file, then rename over the target.
pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    let tmp = path.with_extension("tmp~");
    let mut file = std::fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
    file.write_all(bytes).map_err(|e| Error::io(&tmp, e))?;
    file.sync_all().map_err(|e| Error::io(&tmp, e))?;
    std::fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}
