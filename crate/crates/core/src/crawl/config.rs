use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum TraversalPolicy {
    #[default]
    Bfs,
    Dfs,
    /// depth-first within the current site before any cross-site link
    Dws,
}

impl std::str::FromStr for TraversalPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bfs" => Ok(TraversalPolicy::Bfs),
            "dfs" => Ok(TraversalPolicy::Dfs),
            "dws" => Ok(TraversalPolicy::Dws),
            other => Err(Error::Config(format!("unknown traversal policy {other:?}"))),
        }
    }
}

/// Crawler settings. Readable from a `key = value` (TOML) file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CrawlConfig {
    pub seeds: Vec<String>,
    pub collection: Option<String>,
    pub policy: TraversalPolicy,
    pub accept_types: Vec<String>,
    pub reject_types: Vec<String>,
    pub max_pages: usize,
    pub max_depth: usize,
    pub host_spanning: bool,
    pub domain_spanning: bool,
    pub repository_path: Option<PathBuf>,
    /// Stored for the operator; no scheduler acts on it.
    pub recrawl_period_secs: u64,
    pub thread_count: usize,
    pub host_delay_ms: u64,
    /// `host<TAB>path-prefix` deny list
    pub robots_file: Option<PathBuf>,
    pub log_file: Option<PathBuf>,
    pub log_level: Option<String>,
}

impl Default for CrawlConfig {
    fn default() -> Self {
        CrawlConfig {
            seeds: Vec::new(),
            collection: None,
            policy: TraversalPolicy::Bfs,
            accept_types: Vec::new(),
            reject_types: vec!["tmp".into(), "exe".into(), "zip".into(), "jpg".into(), "png".into(), "gif".into()],
            max_pages: 1000,
            max_depth: 32,
            host_spanning: false,
            domain_spanning: false,
            repository_path: None,
            recrawl_period_secs: 7 * 24 * 3600,
            thread_count: 1,
            host_delay_ms: 0,
            robots_file: None,
            log_file: None,
            log_level: None,
        }
    }
}

impl CrawlConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let config: CrawlConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(Error::Config("crawler needs at least one seed".into()));
        }
        self.validate_settings()
    }

    /// Every check except the presence of seeds, which only matters when a
    /// crawl is actually started.
    pub fn validate_settings(&self) -> Result<()> {
        if self.max_pages == 0 {
            return Err(Error::Config("max_pages must be at least 1".into()));
        }
        if self.thread_count == 0 {
            return Err(Error::Config("thread_count must be at least 1".into()));
        }
        let lower = |v: &[String]| v.iter().map(|s| s.to_ascii_lowercase()).collect::<Vec<_>>();
        let accept = lower(&self.accept_types);
        if let Some(both) = lower(&self.reject_types).into_iter().find(|r| accept.contains(r)) {
            return Err(Error::Config(format!("type {both:?} is both accepted and rejected")));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_key_value_file() {
        let c = CrawlConfig::parse(
            "seeds = [\"http://a.org/\"]\npolicy = \"dws\"\nmax_pages = 5\nreject_types = [\"tmp\"]\n",
        )
        .unwrap();
        assert_eq!(c.policy, TraversalPolicy::Dws);
        assert_eq!(c.max_pages, 5);
        c.validate().unwrap();
    }

    #[test]
    fn validation_errors() {
        assert!(CrawlConfig::default().validate().is_err());
        let mut c = CrawlConfig {
            seeds: vec!["http://a.org/".into()],
            ..Default::default()
        };
        c.max_pages = 0;
        assert!(c.validate().is_err());
        c.max_pages = 1;
        c.accept_types = vec!["TMP".into()];
        assert!(c.validate().is_err());
        assert!(CrawlConfig::parse("bogus = 1").is_err());
    }
}
