use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use arc_swap::ArcSwap;

use super::catalog::Catalog;
use crate::error::Result;

/// An immutable catalog state handed to readers.
#[derive(Debug)]
pub struct Snapshot {
    pub version: u64,
    pub catalog: Catalog,
}

/// Holds the current catalog. Readers grab a snapshot without locking;
/// writers are serialized, work on a private copy and publish it whole.
#[derive(Debug)]
pub struct IndexStore {
    current: ArcSwap<Snapshot>,
    writer: Mutex<()>,
    dir: Option<PathBuf>,
}

impl IndexStore {
    pub fn new(catalog: Catalog) -> Self {
        IndexStore {
            current: ArcSwap::from_pointee(Snapshot { version: 1, catalog }),
            writer: Mutex::new(()),
            dir: None,
        }
    }

    /// Opens a catalog directory; updates are saved back to it.
    pub fn open(dir: &Path) -> Result<Self> {
        let mut store = IndexStore::new(Catalog::load(dir)?);
        store.dir = Some(dir.to_path_buf());
        Ok(store)
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn snapshot(&self) -> Arc<Snapshot> {
        self.current.load_full()
    }

    /// Applies `f` to a copy of the current catalog, persists it if the
    /// store has a directory, then publishes it. If `f` or the save fails
    /// readers keep seeing the old snapshot.
    pub fn update<T>(&self, f: impl FnOnce(&mut Catalog) -> Result<T>) -> Result<T> {
        let _guard = self.writer.lock().unwrap_or_else(|e| e.into_inner());
        let old = self.current.load_full();
        let mut catalog = old.catalog.clone();
        let out = f(&mut catalog)?;
        if let Some(dir) = &self.dir {
            catalog.save(dir)?;
        }
        self.current.store(Arc::new(Snapshot {
            version: old.version + 1,
            catalog,
        }));
        Ok(out)
    }

    /// Publishes a catalog built elsewhere.
    pub fn replace(&self, catalog: Catalog) -> Result<u64> {
        self.update(move |c| {
            *c = catalog;
            Ok(())
        })?;
        Ok(self.snapshot().version)
    }
}
