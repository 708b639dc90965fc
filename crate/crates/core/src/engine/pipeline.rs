use std::collections::HashMap;

use serde::Serialize;

use crate::config::EngineConfig;
use crate::crawl::{crawl, save_links, ContentSource, CrawlOutput, DocId, DocumentIndex, DocumentRecord, LinkRecord};
use crate::error::Result;
use crate::index::{BulkLoader, Catalog, IndexDocument, IndexStore, MANIFEST_FILE};
use crate::present::FullTextStore;
use crate::stem::Stemmer;
use crate::text::{Analyzer, AnalyzerConfig};

pub const DOCINDEX_FILE: &str = "docindex.tsv";
pub const LINKS_FILE: &str = "links.tsv";

/// Crawls with the configured settings and leaves the document index, the
/// link table and the extracted texts under the data directory.
pub fn crawl_to_disk(config: &EngineConfig, source: &dyn ContentSource) -> Result<CrawlOutput> {
    let out = crawl(&config.crawler, source)?;
    let dir = config.crawl_dir();
    out.index.save(&dir.join(DOCINDEX_FILE))?;
    save_links(&dir.join(LINKS_FILE), &out.links)?;
    let store = FullTextStore::new(config.fulltext_dir());
    for (id, text) in &out.texts {
        store.put(id, text)?;
    }
    Ok(out)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct IngestReport {
    pub added: usize,
    /// documents already in the catalog that were re-indexed
    pub replaced: usize,
    /// documents indexed with empty text because none was stored
    pub missing_text: usize,
}

/// Indexes crawled documents, re-indexing any already present. Link
/// records attach to their source documents so anchor text reaches the
/// targets. Every document ends up with a full-text file.
pub fn ingest(
    catalog: &mut Catalog,
    records: &[DocumentRecord],
    links: &[LinkRecord],
    store: &FullTextStore,
    analyzer: &Analyzer,
    collection: Option<&str>,
) -> Result<IngestReport> {
    let mut report = IngestReport::default();
    let mut by_source: HashMap<DocId, Vec<&LinkRecord>> = HashMap::new();
    for l in links {
        by_source.entry(l.src_id).or_default().push(l);
    }
    let present: Vec<DocId> = records.iter().map(|r| r.id).filter(|id| catalog.doc_key(id).is_some()).collect();
    report.replaced = catalog.delete_documents(&present);

    let mut docs = Vec::with_capacity(records.len());
    for record in records {
        let text = match store.get(&record.id)? {
            Some(t) => t,
            None => {
                log::warn!("no stored text for {}, indexing it empty", record.url);
                store.put(&record.id, "")?;
                report.missing_text += 1;
                String::new()
            }
        };
        let out_links = by_source.get(&record.id).map(Vec::as_slice).unwrap_or(&[]);
        let mut doc = IndexDocument::new(record.clone(), &text, analyzer)
            .with_links(out_links.iter().map(|l| (l.dst_url.as_str(), l.anchor_text.as_str())), analyzer);
        if let Some(name) = collection {
            doc = doc.in_collection(name);
        }
        docs.push(doc);
    }

    if catalog.doc_count() == 0 && catalog.collections().next().is_none() && catalog.spam().next().is_none() {
        let mut loader = BulkLoader::new(*catalog.manifest());
        if let Some(name) = collection {
            loader.collection(name);
        }
        for d in docs {
            loader.push(d);
        }
        let (built, added) = loader.finish();
        report.added = added.added;
        *catalog = built;
    } else {
        if let Some(name) = collection {
            catalog.create_collection(name);
        }
        report.added = catalog.add_documents(docs).added;
    }
    Ok(report)
}

/// Reads back what `crawl_to_disk` left behind.
pub fn load_crawl(config: &EngineConfig) -> Result<(DocumentIndex, Vec<LinkRecord>)> {
    let dir = config.crawl_dir();
    let index = DocumentIndex::load(&dir.join(DOCINDEX_FILE))?;
    let links = crate::crawl::load_links(&dir.join(LINKS_FILE))?;
    Ok((index, links))
}

/// Opens the catalog under the data directory, creating an empty one with
/// the configured indexer settings if there is none, and indexes the saved
/// crawl output into it when present.
pub fn index_crawl(config: &EngineConfig, collection: Option<&str>) -> Result<(IndexStore, IngestReport)> {
    let dir = config.catalog_dir();
    if !dir.join(MANIFEST_FILE).is_file() {
        Catalog::new(config.indexer.manifest()).save(&dir)?;
    }
    let store = IndexStore::open(&dir)?;
    let manifest = *store.snapshot().catalog.manifest();
    if manifest.analyzer != config.indexer.analyzer_settings() || manifest.block != config.indexer.block {
        log::warn!("the catalog keeps the settings it was created with; drop it to apply new indexer settings");
    }
    if !config.crawl_dir().join(DOCINDEX_FILE).is_file() {
        if let Some(name) = collection {
            store.update(|c| {
                c.create_collection(name);
                Ok(())
            })?;
        }
        return Ok((store, IngestReport::default()));
    }
    let (index, links) = load_crawl(config)?;
    let analyzer = Analyzer::new(AnalyzerConfig::new(manifest.analyzer), std::sync::Arc::new(Stemmer::default()));
    let fulltext = FullTextStore::new(config.fulltext_dir());
    let collection = collection.or(config.crawler.collection.as_deref());
    let report = store.update(|c| ingest(c, index.records(), &links, &fulltext, &analyzer, collection))?;
    Ok((store, report))
}

/// Crawl then index in one go.
pub fn crawl_and_index(config: &EngineConfig, source: &dyn ContentSource) -> Result<(CrawlOutput, IngestReport)> {
    let out = crawl_to_disk(config, source)?;
    let (_, report) = index_crawl(config, None)?;
    Ok((out, report))
}
