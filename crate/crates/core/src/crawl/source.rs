//! Content sources the crawler fetches from.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::time::UNIX_EPOCH;

use url::Url;

/// A fetched resource.
#[derive(Debug, Clone, Default)]
pub struct Fetched {
    pub bytes: Vec<u8>,
    pub content_type: Option<String>,
    /// unix seconds
    pub last_modified: Option<u64>,
    /// Out-links supplied next to the content (used for non-HTML files).
    pub sidecar_links: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FetchError(pub String);

impl std::fmt::Display for FetchError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for FetchError {}

pub trait ContentSource: Send + Sync {
    fn fetch(&self, url: &str) -> Result<Fetched, FetchError>;
}

/// Serves a directory tree laid out as `{root}/{host}/{path}`; `file://`
/// URLs map straight to the filesystem. A file `x` may carry a sidecar
/// `x.links` with `url<TAB>anchor text` lines.
#[derive(Debug, Clone)]
pub struct FsSource {
    root: PathBuf,
}

impl FsSource {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        FsSource { root: root.into() }
    }

    pub fn path_for(&self, url: &str) -> Option<PathBuf> {
        let parsed = Url::parse(url).ok()?;
        let mut path = match parsed.scheme() {
            "file" => parsed.to_file_path().ok()?,
            "http" | "https" => {
                let host = parsed.host_str()?;
                let mut p = self.root.join(host);
                for seg in parsed.path_segments()? {
                    if seg == ".." {
                        return None;
                    }
                    if !seg.is_empty() {
                        p.push(seg);
                    }
                }
                p
            }
            _ => return None,
        };
        if url.ends_with('/') || path.is_dir() {
            path.push("index.html");
        }
        Some(path)
    }
}

impl ContentSource for FsSource {
    fn fetch(&self, url: &str) -> Result<Fetched, FetchError> {
        let path = self
            .path_for(url)
            .ok_or_else(|| FetchError(format!("cannot map {url} to a file")))?;
        let bytes = std::fs::read(&path).map_err(|e| FetchError(format!("{}: {e}", path.display())))?;
        let last_modified = std::fs::metadata(&path)
            .and_then(|m| m.modified())
            .ok()
            .and_then(|t| t.duration_since(UNIX_EPOCH).ok())
            .map(|d| d.as_secs());
        Ok(Fetched {
            bytes,
            content_type: None,
            last_modified,
            sidecar_links: read_sidecar(&path),
        })
    }
}

fn read_sidecar(path: &Path) -> Vec<(String, String)> {
    let mut sidecar = path.as_os_str().to_owned();
    sidecar.push(".links");
    let Ok(text) = std::fs::read_to_string(PathBuf::from(sidecar)) else {
        return Vec::new();
    };
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let (url, anchor) = l.split_once('\t').unwrap_or((l, ""));
            (url.trim().to_string(), crate::tsv::unescape(anchor.trim()))
        })
        .collect()
}

/// In-memory source keyed by canonical URL.
#[derive(Debug, Clone, Default)]
pub struct MemorySource {
    pages: HashMap<String, Fetched>,
}

impl MemorySource {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, url: &str, body: &str) {
        self.pages.insert(
            url.to_string(),
            Fetched {
                bytes: body.as_bytes().to_vec(),
                ..Default::default()
            },
        );
    }

    /// An html page whose only content is links to `targets`.
    pub fn link_page(&mut self, url: &str, targets: &[&str]) {
        let body: String = targets
            .iter()
            .map(|t| format!("<a href=\"{t}\">{t}</a> "))
            .collect();
        self.insert(url, &format!("<html><body>{body}</body></html>"));
    }
}

impl ContentSource for MemorySource {
    fn fetch(&self, url: &str) -> Result<Fetched, FetchError> {
        self.pages
            .get(url)
            .cloned()
            .ok_or_else(|| FetchError(format!("not found: {url}")))
    }
}
