//! The search engine as a service object: a published catalog snapshot, the
//! full-text store and the live configuration, plus the query pipeline
//! shared by the command line and the HTTP service.

mod pipeline;

pub use pipeline::{
    crawl_and_index, crawl_to_disk, index_crawl, ingest, load_crawl, IngestReport, DOCINDEX_FILE, LINKS_FILE,
};

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::sync::{Arc, Mutex};

use arc_swap::ArcSwap;
use serde::{Deserialize, Serialize};

use crate::config::EngineConfig;
use crate::crawl::DocId;
use crate::error::{Error, Result};
use crate::index::{Catalog, DocKey, IndexStore, Snapshot};
use crate::organize::{expand_query, organize_results, ClusterNode, ExpansionTerm, HierarchyMethod};
use crate::present::{build_surrogates, FullTextStore, Surrogate};
use crate::retrieval::{evaluate, suggest_terms, Model, Query, Suggestion};
use crate::stats::{distribution, DistributionMode, PowerLawFit};
use crate::stem::Stemmer;
use crate::text::{Analyzer, AnalyzerConfig, AnalyzerSettings};

/// Everything a search can ask for. Unset options fall back to the config.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchRequest {
    pub q: String,
    pub model: Option<Model>,
    /// restrict to these document types (on top of `type:` in the query)
    pub types: Vec<String>,
    pub collection: Option<String>,
    pub cluster: bool,
    pub expand: Option<bool>,
    /// number of clusters
    pub k: Option<usize>,
    /// how the cluster hierarchy is built
    pub hierarchy: Option<HierarchyMethod>,
    /// number of surrogates returned; all results are scored regardless
    pub limit: Option<usize>,
}

impl SearchRequest {
    pub fn new(q: impl Into<String>) -> Self {
        SearchRequest {
            q: q.into(),
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpellingHint {
    /// the query word as typed
    pub word: String,
    /// its analyzed form, absent from the lexicon
    pub term: String,
    pub alternatives: Vec<Suggestion>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterView {
    pub method: HierarchyMethod,
    pub root: ClusterViewNode,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterViewNode {
    pub name: Vec<String>,
    pub label: String,
    pub docs: Vec<DocId>,
    pub children: Vec<ClusterViewNode>,
}

impl ClusterViewNode {
    fn from_node(node: &ClusterNode, catalog: &Catalog) -> Self {
        let md5 = |k: &DocKey| catalog.document(*k).map(|d| d.md5);
        ClusterViewNode {
            name: node.name.clone(),
            label: node.name.join(" "),
            docs: node.members.iter().filter_map(md5).collect(),
            children: node.children.iter().map(|c| Self::from_node(c, catalog)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchResponse {
    pub snapshot_version: u64,
    pub query: String,
    pub model: Model,
    /// number of matching documents
    pub total: usize,
    pub results: Vec<Surrogate>,
    pub suggestions: Vec<SpellingHint>,
    pub expansions: Vec<ExpansionTerm>,
    pub clusters: Option<ClusterView>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DocumentView {
    pub snapshot_version: u64,
    pub id: DocId,
    pub url: String,
    pub title: String,
    pub path: String,
    pub doc_type: String,
    pub encoding: String,
    pub norm: f64,
    pub rank: f64,
    pub collections: Vec<String>,
    pub text: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsView {
    pub snapshot_version: u64,
    pub documents: usize,
    pub words: usize,
    pub occurrences: usize,
    pub collections: Vec<String>,
    pub term_count: usize,
    pub occurrence_count: u64,
    pub fit: Option<PowerLawFit>,
}

pub struct Engine {
    store: IndexStore,
    fulltext: FullTextStore,
    config: ArcSwap<EngineConfig>,
    config_path: Option<PathBuf>,
    admin: Mutex<()>,
    stemmer: Arc<Stemmer>,
    analyzers: Mutex<BTreeMap<String, Analyzer>>,
}

impl std::fmt::Debug for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Engine")
            .field("version", &self.store.snapshot().version)
            .field("fulltext", &self.fulltext.root())
            .finish()
    }
}

impl Engine {
    /// An engine over an in-memory catalog.
    pub fn new(catalog: Catalog, fulltext: FullTextStore, config: EngineConfig) -> Self {
        Self::with_store(IndexStore::new(catalog), fulltext, config, None)
    }

    /// Opens the catalog under the configured data directory.
    pub fn open(config: EngineConfig, config_path: Option<PathBuf>) -> Result<Self> {
        config.validate()?;
        let dir = config.catalog_dir();
        if !dir.join(crate::index::MANIFEST_FILE).is_file() {
            return Err(Error::MissingCatalog { path: dir });
        }
        let store = IndexStore::open(&dir)?;
        let fulltext = FullTextStore::new(config.fulltext_dir());
        Ok(Self::with_store(store, fulltext, config, config_path))
    }

    fn with_store(store: IndexStore, fulltext: FullTextStore, config: EngineConfig, config_path: Option<PathBuf>) -> Self {
        Engine {
            store,
            fulltext,
            config: ArcSwap::from_pointee(config),
            config_path,
            admin: Mutex::new(()),
            stemmer: Arc::new(Stemmer::default()),
            analyzers: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn store(&self) -> &IndexStore {
        &self.store
    }

    pub fn snapshot(&self) -> Arc<Snapshot> {
        self.store.snapshot()
    }

    pub fn fulltext(&self) -> &FullTextStore {
        &self.fulltext
    }

    pub fn config(&self) -> Arc<EngineConfig> {
        self.config.load_full()
    }

    /// Validates and publishes a new configuration, writing it back to the
    /// config file when the engine was started from one.
    pub fn set_config(&self, config: EngineConfig) -> Result<Arc<EngineConfig>> {
        let _guard = self.admin.lock().unwrap_or_else(|e| e.into_inner());
        config.validate()?;
        if let Some(path) = &self.config_path {
            config.save(path)?;
        }
        let config = Arc::new(config);
        self.config.store(config.clone());
        Ok(config)
    }

    /// Re-reads the catalog directory, publishing it as a new snapshot.
    pub fn reload(&self) -> Result<u64> {
        let dir = self
            .store
            .dir()
            .ok_or_else(|| Error::Catalog("engine has no catalog directory to reload".into()))?;
        let catalog = Catalog::load(dir)?;
        self.store.replace(catalog)
    }

    /// The analyzer matching a catalog's settings, sharing one stemmer.
    pub fn analyzer(&self, settings: AnalyzerSettings) -> Analyzer {
        let key = format!("{settings:?}");
        let mut cache = self.analyzers.lock().unwrap_or_else(|e| e.into_inner());
        cache
            .entry(key)
            .or_insert_with(|| Analyzer::new(AnalyzerConfig::new(settings), self.stemmer.clone()))
            .clone()
    }

    pub fn search(&self, request: &SearchRequest) -> Result<SearchResponse> {
        let snapshot = self.snapshot();
        let config = self.config();
        search_snapshot(&snapshot, &config, &self.fulltext, &self.analyzer(snapshot.catalog.manifest().analyzer), request)
    }

    pub fn document(&self, id: &DocId) -> Result<Option<DocumentView>> {
        let snapshot = self.snapshot();
        let catalog = &snapshot.catalog;
        let Some(row) = catalog.document_by_md5(id) else {
            return Ok(None);
        };
        Ok(Some(DocumentView {
            snapshot_version: snapshot.version,
            id: row.md5,
            url: row.link.clone(),
            title: row.title.clone(),
            path: row.path.clone(),
            doc_type: row.doc_type.clone(),
            encoding: row.encoding.clone(),
            norm: row.norm,
            rank: row.rank,
            collections: catalog.collections_of(row.id).into_iter().map(str::to_string).collect(),
            text: self.fulltext.get(id)?,
        }))
    }

    pub fn stats(&self) -> StatsView {
        let snapshot = self.snapshot();
        let catalog = &snapshot.catalog;
        let report = distribution(catalog, DistributionMode::Rank);
        StatsView {
            snapshot_version: snapshot.version,
            documents: catalog.doc_count(),
            words: catalog.word_count(),
            occurrences: catalog.occurrence_count(),
            collections: catalog.collections().map(|c| c.name.clone()).collect(),
            term_count: report.term_count,
            occurrence_count: report.occurrence_count,
            fit: report.fit,
        }
    }
}

/// The full query pipeline over one snapshot: parse, evaluate, surrogates,
/// spelling hints, expansion terms and (on request) the cluster tree.
pub fn search_snapshot(
    snapshot: &Snapshot,
    config: &EngineConfig,
    fulltext: &FullTextStore,
    analyzer: &Analyzer,
    request: &SearchRequest,
) -> Result<SearchResponse> {
    let catalog = &snapshot.catalog;
    let model = request.model.unwrap_or(config.query_evaluator.model);
    let mut query = Query::parse(&request.q, model, analyzer)?;
    if !request.types.is_empty() {
        let wanted: BTreeSet<String> = request.types.iter().map(|t| t.to_ascii_lowercase()).collect();
        query.type_filter = Some(match query.type_filter.take() {
            Some(inline) => inline.intersection(&wanted).cloned().collect(),
            None => wanted,
        });
    }
    if let Some(c) = &request.collection {
        query.collection = Some(c.clone());
    }

    let results = evaluate(&query, catalog)?;
    let answer: Vec<DocKey> = results.iter().map(|r| r.doc).collect();
    let limit = request.limit.unwrap_or(results.len()).min(results.len());
    let terms: BTreeSet<String> = query.positive_terms().into_iter().collect();
    let surrogates = build_surrogates(&results[..limit], catalog, fulltext, &terms, analyzer);

    let mut suggestions = Vec::new();
    for word in &query.words {
        for term in &word.terms {
            if catalog.word(term).is_some() {
                continue;
            }
            let alternatives = suggest_terms(
                term,
                catalog,
                config.query_evaluator.edit_distance,
                config.query_evaluator.suggestions,
            );
            if !alternatives.is_empty() {
                suggestions.push(SpellingHint {
                    word: word.surface.clone(),
                    term: term.clone(),
                    alternatives,
                });
            }
        }
    }

    let expand = request.expand.unwrap_or(config.query_expansion.enabled);
    let expansions = if expand {
        expand_query(&query.all_terms(), &answer, catalog, &config.query_expansion)
    } else {
        Vec::new()
    };

    let clusters = if request.cluster {
        let mut clustering = config.clustering;
        if let Some(k) = request.k {
            clustering.clusters = k;
            clustering.validate()?;
        }
        if let Some(method) = request.hierarchy {
            clustering.algorithm = method;
        }
        organize_results(&answer, catalog, &clustering).map(|tree| ClusterView {
            method: tree.method,
            root: ClusterViewNode::from_node(&tree.root, catalog),
        })
    } else {
        None
    };

    Ok(SearchResponse {
        snapshot_version: snapshot.version,
        query: request.q.clone(),
        model,
        total: results.len(),
        results: surrogates,
        suggestions,
        expansions,
        clusters,
    })
}
