use std::collections::HashMap;
use std::path::Path;

use url::Url;

use crate::error::{Error, Result};

/// Per-host denied path prefixes, read from `host<TAB>path-prefix` lines.
#[derive(Debug, Clone, Default)]
pub struct DenyList {
    rules: HashMap<String, Vec<String>>,
}

impl DenyList {
    pub fn parse(text: &str) -> Result<Self> {
        let mut list = DenyList::default();
        for (idx, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (host, prefix) = line.split_once('\t').ok_or(Error::Parse {
                what: "deny list",
                line: idx + 1,
                message: "expected host<TAB>path".into(),
            })?;
            list.rules
                .entry(host.trim().to_ascii_lowercase())
                .or_default()
                .push(prefix.trim().to_string());
        }
        Ok(list)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn allows(&self, canonical_url: &str) -> bool {
        let Ok(url) = Url::parse(canonical_url) else {
            return false;
        };
        let host = url.host_str().unwrap_or("");
        match self.rules.get(host) {
            Some(prefixes) => !prefixes.iter().any(|p| url.path().starts_with(p.as_str())),
            None => true,
        }
    }
}
