//! Fetching documents, the Document Index and the links file.

mod config;
mod crawler;
mod docindex;
mod frontier;
mod robots;
mod source;
mod url;

pub use config::{CrawlConfig, TraversalPolicy};
pub use crawler::{crawl, extract_document, CrawlOutput, Visit};
pub use docindex::{links_from_tsv, links_to_tsv, load_links, save_links, DocumentIndex, DocumentRecord, LinkRecord};
pub(crate) use docindex::write_atomic;
pub use frontier::{Frontier, FrontierEntry};
pub use robots::DenyList;
pub use source::{ContentSource, FetchError, Fetched, FsSource, MemorySource};
pub use url::{canonicalize_url, doc_id, repository_path, resolve_url, url_extension, url_host, DocId};
