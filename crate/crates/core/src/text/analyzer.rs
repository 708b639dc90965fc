use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{tokenize, Stopwords};
use crate::stem::Stemmer;

/// The switches of the lexical pipeline. Persisted in the catalog manifest
/// so queries are analyzed exactly like the documents were.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyzerSettings {
    pub stopwords_enabled: bool,
    pub remove_numbers: bool,
    pub remove_alphanumeric_mixes: bool,
    pub stemming_enabled: bool,
}

impl Default for AnalyzerSettings {
    fn default() -> Self {
        AnalyzerSettings {
            stopwords_enabled: true,
            remove_numbers: false,
            remove_alphanumeric_mixes: false,
            stemming_enabled: true,
        }
    }
}

impl AnalyzerSettings {
    /// Everything off: analysis degenerates to a bag-of-tokens count.
    pub fn raw() -> Self {
        AnalyzerSettings {
            stopwords_enabled: false,
            remove_numbers: false,
            remove_alphanumeric_mixes: false,
            stemming_enabled: false,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct AnalyzerConfig {
    pub settings: AnalyzerSettings,
    pub stopwords: Stopwords,
}

impl AnalyzerConfig {
    pub fn new(settings: AnalyzerSettings) -> Self {
        AnalyzerConfig {
            settings,
            stopwords: Stopwords::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TermStats {
    pub term: String,
    pub raw_freq: u32,
    /// raw_freq divided by the largest raw_freq in the document.
    pub norm_tf: f64,
    pub positions: Vec<u32>,
}

pub type TermMap = BTreeMap<String, TermStats>;

/// Runs the per-token filters and stemming. `None` means the token is dropped.
pub fn process_token(token: &str, config: &AnalyzerConfig, stemmer: &Stemmer) -> Option<String> {
    let s = &config.settings;
    if s.stopwords_enabled && config.stopwords.contains(token) {
        return None;
    }
    let has_digit = token.chars().any(|c| c.is_numeric());
    let has_alpha = token.chars().any(|c| c.is_alphabetic());
    if s.remove_numbers && has_digit && !has_alpha {
        return None;
    }
    if s.remove_alphanumeric_mixes && has_digit && has_alpha {
        return None;
    }
    if s.stemming_enabled {
        Some(stemmer.stem(token))
    } else {
        Some(token.to_string())
    }
}

/// tokenize → stopwords → number filters → stem → accumulate → normalize.
pub fn analyze(text: &str, config: &AnalyzerConfig, stemmer: &Stemmer) -> TermMap {
    let mut map: TermMap = BTreeMap::new();
    for token in tokenize(text) {
        let Some(term) = process_token(&token.term, config, stemmer) else {
            continue;
        };
        if term.is_empty() {
            continue;
        }
        let entry = map.entry(term.clone()).or_insert_with(|| TermStats {
            term,
            raw_freq: 0,
            norm_tf: 0.0,
            positions: Vec::new(),
        });
        entry.raw_freq += 1;
        entry.positions.push(token.position as u32);
    }
    let max = map.values().map(|t| t.raw_freq).max().unwrap_or(0);
    if max > 0 {
        for stats in map.values_mut() {
            stats.norm_tf = f64::from(stats.raw_freq) / f64::from(max);
        }
    }
    map
}

/// An analyzer configuration bundled with a shared stemmer.
#[derive(Debug, Clone)]
pub struct Analyzer {
    config: AnalyzerConfig,
    stemmer: Arc<Stemmer>,
}

impl Analyzer {
    pub fn new(config: AnalyzerConfig, stemmer: Arc<Stemmer>) -> Self {
        Analyzer { config, stemmer }
    }

    pub fn with_settings(settings: AnalyzerSettings) -> Self {
        Analyzer::new(AnalyzerConfig::new(settings), Arc::new(Stemmer::default()))
    }

    pub fn settings(&self) -> AnalyzerSettings {
        self.config.settings
    }

    pub fn config(&self) -> &AnalyzerConfig {
        &self.config
    }

    pub fn stemmer(&self) -> &Stemmer {
        &self.stemmer
    }

    pub fn analyze(&self, text: &str) -> TermMap {
        analyze(text, &self.config, &self.stemmer)
    }

    pub fn process_token(&self, token: &str) -> Option<String> {
        process_token(token, &self.config, &self.stemmer)
    }

    /// Analyzed terms of `text` in order of appearance, duplicates kept.
    pub fn terms(&self, text: &str) -> Vec<String> {
        tokenize(text)
            .into_iter()
            .filter_map(|t| self.process_token(&t.term))
            .filter(|t| !t.is_empty())
            .collect()
    }
}

impl Default for Analyzer {
    fn default() -> Self {
        Analyzer::with_settings(AnalyzerSettings::default())
    }
}
