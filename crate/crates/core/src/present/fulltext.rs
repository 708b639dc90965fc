use std::io::ErrorKind;
use std::path::{Path, PathBuf};

use crate::crawl::{write_atomic, DocId};
use crate::error::{Error, Result};

/// Extracted text of every indexed document, one UTF-8 file per document
/// at `{root}/{first two hex digits}/{id}.txt`.
#[derive(Debug, Clone)]
pub struct FullTextStore {
    root: PathBuf,
}

impl FullTextStore {
    pub const DIR_NAME: &'static str = "fulltext";

    pub fn new(root: impl Into<PathBuf>) -> Self {
        FullTextStore { root: root.into() }
    }

    /// The store that sits next to a saved catalog.
    pub fn beside_catalog(catalog_dir: &Path) -> Self {
        FullTextStore::new(catalog_dir.join(Self::DIR_NAME))
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn path(&self, id: &DocId) -> PathBuf {
        let hex = id.to_hex();
        self.root.join(&hex[..2]).join(format!("{hex}.txt"))
    }

    pub fn put(&self, id: &DocId, text: &str) -> Result<()> {
        write_atomic(&self.path(id), text.as_bytes())
    }

    /// `None` when no text is stored for the document.
    pub fn get(&self, id: &DocId) -> Result<Option<String>> {
        let path = self.path(id);
        match std::fs::read(&path) {
            Ok(bytes) => Ok(Some(String::from_utf8_lossy(&bytes).into_owned())),
            Err(e) if e.kind() == ErrorKind::NotFound => Ok(None),
            Err(e) => Err(Error::io(&path, e)),
        }
    }

    pub fn remove(&self, id: &DocId) -> Result<bool> {
        let path = self.path(id);
        match std::fs::remove_file(&path) {
            Ok(()) => Ok(true),
            Err(e) if e.kind() == ErrorKind::NotFound => Ok(false),
            Err(e) => Err(Error::io(&path, e)),
        }
    }

    /// Total bytes stored.
    pub fn size(&self) -> u64 {
        fn walk(dir: &Path) -> u64 {
            let Ok(entries) = std::fs::read_dir(dir) else { return 0 };
            entries
                .flatten()
                .map(|e| match e.file_type() {
                    Ok(t) if t.is_dir() => walk(&e.path()),
                    Ok(_) => e.metadata().map(|m| m.len()).unwrap_or(0),
                    Err(_) => 0,
                })
                .sum()
        }
        walk(&self.root)
    }
}
