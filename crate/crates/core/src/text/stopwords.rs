use std::collections::BTreeSet;
use std::path::Path;

use super::{normalize_word, strip_accents};
use crate::error::{Error, Result};

const ENGLISH: &str = include_str!("../../data/stopwords/english.txt");
const GREEK: &str = include_str!("../../data/stopwords/greek.txt");

/// One stopword file. Entries keep the spelling they were supplied with;
/// lookups compare accent-stripped, sigma-folded forms.
#[derive(Debug, Clone, Default)]
pub struct StopwordList {
    entries: Vec<String>,
    keys: BTreeSet<String>,
}

impl StopwordList {
    /// One word per line, `#` starts a comment.
    pub fn parse(text: &str) -> Self {
        let mut list = StopwordList::default();
        for line in text.lines() {
            let word = line.split('#').next().unwrap_or("").trim();
            if word.is_empty() {
                continue;
            }
            let supplied = word.to_lowercase();
            if list.keys.insert(lookup_key(&supplied)) {
                list.entries.push(supplied);
            }
        }
        list
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::parse(&text))
    }

    pub fn contains(&self, token: &str) -> bool {
        self.keys.contains(&lookup_key(token))
    }

    pub fn entries(&self) -> &[String] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn lookup_key(word: &str) -> String {
    strip_accents(&normalize_word(word))
}

/// English and Greek stopword lists; a token is checked against the list
/// of its script.
#[derive(Debug, Clone)]
pub struct Stopwords {
    pub english: StopwordList,
    pub greek: StopwordList,
}

impl Default for Stopwords {
    fn default() -> Self {
        Stopwords {
            english: StopwordList::parse(ENGLISH),
            greek: StopwordList::parse(GREEK),
        }
    }
}

impl Stopwords {
    pub fn load_dir(dir: &Path) -> Result<Self> {
        Ok(Stopwords {
            english: StopwordList::load(&dir.join("english.txt"))?,
            greek: StopwordList::load(&dir.join("greek.txt"))?,
        })
    }

    pub fn contains(&self, token: &str) -> bool {
        if super::is_greek(token) {
            self.greek.contains(token)
        } else {
            self.english.contains(token)
        }
    }
}
