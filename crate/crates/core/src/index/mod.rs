//! The relational index: document, word, occurrence, spam, collection and
//! collection_document tables.

mod build;
mod catalog;
mod persist;
mod store;
mod tables;

pub use build::{build_index, BulkLoader};
pub use catalog::{anchor_link, anchored_tf, idf, AddReport, AnchorReport, Catalog, IndexDocument, Manifest, SCHEMA_VERSION};
pub use persist::{read_manifest, TableDump, MANIFEST_FILE};
pub use store::{IndexStore, Snapshot};
pub use tables::{
    AnchorLink, BlockConfig, CollectionKey, CollectionRow, DocKey, DocumentRow, OccurrenceRow, SpamRow, WordKey, WordRow,
};
