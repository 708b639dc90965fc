use serde::{Deserialize, Serialize};

use crate::crawl::DocId;
use crate::error::{Error, Result};

pub type DocKey = u32;
pub type WordKey = u32;
pub type CollectionKey = u32;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocumentRow {
    pub id: DocKey,
    pub md5: DocId,
    pub title: String,
    pub path: String,
    /// canonical URL
    pub link: String,
    pub doc_type: String,
    pub encoding: String,
    pub norm: f64,
    /// max-normalized link-analysis score
    pub rank: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordRow {
    pub id: WordKey,
    pub name: String,
    pub df: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OccurrenceRow {
    pub word_id: WordKey,
    pub doc_id: DocKey,
    /// block of each body occurrence; empty unless block addressing is on
    pub blocks: Vec<u32>,
    /// normalized tf, after anchor reweighting
    pub tf: f64,
    /// raw count in the document body (0 for anchor-only rows)
    pub freq: u32,
    /// number of in-links whose anchor text carries the term
    pub anchors: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpamRow {
    pub url: String,
    /// how many times the URL was flagged
    pub freq: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollectionRow {
    pub id: CollectionKey,
    pub name: String,
}

/// An out-link kept with its source document, with the anchor text already
/// analyzed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnchorLink {
    pub dst_id: DocId,
    pub dst_url: String,
    pub text: String,
    /// distinct analyzed terms of `text`
    pub terms: Vec<String>,
}

/// How term positions are kept in the occurrence table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum BlockConfig {
    /// tf only
    #[default]
    None,
    FixedBlockSize { size: u32 },
    FixedBlockCount { count: u32 },
}

impl BlockConfig {
    pub fn validate(&self) -> Result<()> {
        match self {
            BlockConfig::FixedBlockSize { size: 0 } | BlockConfig::FixedBlockCount { count: 0 } => {
                Err(Error::Config("block size and block count must be at least 1".into()))
            }
            _ => Ok(()),
        }
    }

    /// Words per block for a document of `doc_len` tokens.
    pub fn block_size(&self, doc_len: u32) -> Option<u32> {
        match *self {
            BlockConfig::None => None,
            BlockConfig::FixedBlockSize { size } => Some(size.max(1)),
            BlockConfig::FixedBlockCount { count } => Some(doc_len.max(1).div_ceil(count.max(1))),
        }
    }

    /// Block number of each position, in position order.
    pub fn blocks(&self, positions: &[u32], doc_len: u32) -> Vec<u32> {
        match self.block_size(doc_len) {
            Some(size) => positions.iter().map(|p| p / size).collect(),
            None => Vec::new(),
        }
    }
}
