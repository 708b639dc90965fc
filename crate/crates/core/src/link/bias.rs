use std::collections::BTreeSet;
use std::path::Path;

use crate::crawl::{canonicalize_url, doc_id, DocId};
use crate::error::{Error, Result};

/// Pages to drop from ranking and pages to teleport to, read from
/// `spam<TAB>url` and `prefer<TAB>url` lines.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BiasInput {
    pub spam: BTreeSet<String>,
    pub preferred: BTreeSet<String>,
    /// ids given directly rather than by URL
    spam_extra: BTreeSet<DocId>,
    preferred_extra: BTreeSet<DocId>,
}

impl BiasInput {
    pub fn parse(text: &str) -> Result<Self> {
        let mut bias = BiasInput::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::Parse {
                what: "bias file",
                line: i + 1,
                message,
            };
            let (kind, url) = line
                .split_once('\t')
                .ok_or_else(|| err("expected kind<TAB>url".into()))?;
            let url = canonicalize_url(url).map_err(|e| err(e.to_string()))?;
            match kind.trim() {
                "spam" => bias.spam.insert(url),
                "prefer" | "preferred" => bias.preferred.insert(url),
                other => return Err(err(format!("unknown kind {other:?}"))),
            };
        }
        bias.validate()?;
        Ok(bias)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn from_ids(spam: impl IntoIterator<Item = DocId>, preferred: impl IntoIterator<Item = DocId>) -> Self {
        BiasInput {
            spam_extra: spam.into_iter().collect(),
            preferred_extra: preferred.into_iter().collect(),
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let spam: BTreeSet<DocId> = self.spam_ids().collect();
        if self.preferred_ids().any(|p| spam.contains(&p)) {
            return Err(Error::Config("a page cannot be both spam and preferred".into()));
        }
        Ok(())
    }

    pub fn spam_ids(&self) -> impl Iterator<Item = DocId> + '_ {
        self.spam.iter().map(|u| doc_id(u)).chain(self.spam_extra.iter().copied())
    }

    pub fn preferred_ids(&self) -> impl Iterator<Item = DocId> + '_ {
        self.preferred
            .iter()
            .map(|u| doc_id(u))
            .chain(self.preferred_extra.iter().copied())
    }
}
