//! Engine configuration: one TOML file with a section per subsystem.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::crawl::CrawlConfig;
use crate::error::{Error, Result};
use crate::index::{BlockConfig, Manifest, SCHEMA_VERSION};
use crate::organize::{ClusteringConfig, ExpansionConfig, TaxonomyConfig};
use crate::retrieval::{Model, DEFAULT_MAX_DISTANCE, DEFAULT_SUGGESTIONS};
use crate::text::AnalyzerSettings;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IndexerConfig {
    pub stopwords: bool,
    pub stemming: bool,
    pub remove_numbers: bool,
    pub remove_alphanumeric_mixes: bool,
    pub block: BlockConfig,
}

impl Default for IndexerConfig {
    fn default() -> Self {
        IndexerConfig {
            stopwords: true,
            stemming: true,
            remove_numbers: false,
            remove_alphanumeric_mixes: false,
            block: BlockConfig::None,
        }
    }
}

impl IndexerConfig {
    pub fn analyzer_settings(&self) -> AnalyzerSettings {
        AnalyzerSettings {
            stopwords_enabled: self.stopwords,
            remove_numbers: self.remove_numbers,
            remove_alphanumeric_mixes: self.remove_alphanumeric_mixes,
            stemming_enabled: self.stemming,
        }
    }

    /// Manifest for a catalog created under these settings.
    pub fn manifest(&self) -> Manifest {
        Manifest {
            schema_version: SCHEMA_VERSION,
            block: self.block,
            analyzer: self.analyzer_settings(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvaluatorConfig {
    pub model: Model,
    /// largest edit distance for spelling suggestions
    pub edit_distance: usize,
    pub suggestions: usize,
}

impl Default for EvaluatorConfig {
    fn default() -> Self {
        EvaluatorConfig {
            model: Model::Hybrid,
            edit_distance: DEFAULT_MAX_DISTANCE,
            suggestions: DEFAULT_SUGGESTIONS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServiceConfig {
    pub listen: String,
    /// static files served under /ui
    pub ui_dir: Option<PathBuf>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            listen: "127.0.0.1:7878".into(),
            ui_dir: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EngineConfig {
    /// holds `catalog/`, `fulltext/` and `crawl/`
    pub data_dir: PathBuf,
    pub crawler: CrawlConfig,
    pub indexer: IndexerConfig,
    pub clustering: ClusteringConfig,
    pub taxonomy: TaxonomyConfig,
    pub query_expansion: ExpansionConfig,
    pub query_evaluator: EvaluatorConfig,
    pub service: ServiceConfig,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            data_dir: PathBuf::from("lexis-data"),
            crawler: CrawlConfig::default(),
            indexer: IndexerConfig::default(),
            clustering: ClusteringConfig::default(),
            taxonomy: TaxonomyConfig::default(),
            query_expansion: ExpansionConfig::default(),
            query_evaluator: EvaluatorConfig::default(),
            service: ServiceConfig::default(),
        }
    }
}

impl EngineConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let config: EngineConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        crate::crawl::write_atomic(path, self.to_toml()?.as_bytes())
    }

    pub fn validate(&self) -> Result<()> {
        self.crawler.validate_settings()?;
        self.indexer.block.validate()?;
        self.clustering.validate()?;
        self.taxonomy.validate()?;
        self.query_expansion.validate()?;
        if self.query_evaluator.suggestions == 0 {
            return Err(Error::Config("query_evaluator.suggestions must be at least 1".into()));
        }
        if self.service.listen.parse::<std::net::SocketAddr>().is_err() {
            return Err(Error::Config(format!("service.listen {:?} is not a socket address", self.service.listen)));
        }
        Ok(())
    }

    pub fn catalog_dir(&self) -> PathBuf {
        self.data_dir.join("catalog")
    }

    pub fn fulltext_dir(&self) -> PathBuf {
        self.data_dir.join("fulltext")
    }

    pub fn crawl_dir(&self) -> PathBuf {
        self.data_dir.join("crawl")
    }
}
