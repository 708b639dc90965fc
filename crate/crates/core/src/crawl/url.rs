use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use url::Url;

use crate::error::{Error, Result};

/// md5 of a canonical URL: the document identifier.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DocId(pub [u8; 16]);

impl DocId {
    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Display for DocId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Debug for DocId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DocId({})", self.to_hex())
    }
}

impl FromStr for DocId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Catalog(format!("invalid document id {s:?}"));
        if s.len() != 32 || !s.is_ascii() {
            return Err(bad());
        }
        let mut out = [0u8; 16];
        for (i, byte) in out.iter_mut().enumerate() {
            *byte = u8::from_str_radix(&s[2 * i..2 * i + 2], 16).map_err(|_| bad())?;
        }
        Ok(DocId(out))
    }
}

impl Serialize for DocId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for DocId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn doc_id(canonical_url: &str) -> DocId {
    DocId(md5::compute(canonical_url.as_bytes()).0)
}

/// Lowercases scheme and host, drops default ports and the fragment,
/// resolves dot segments and gives an empty path its `/`.
pub fn canonicalize_url(raw: &str) -> Result<String> {
    let url = Url::parse(raw.trim()).map_err(|e| rejected(raw, e.to_string()))?;
    finish(raw, url)
}

/// Resolves `href` against `base` (itself canonical) and canonicalizes.
pub fn resolve_url(base: &str, href: &str) -> Result<String> {
    let base = Url::parse(base).map_err(|e| rejected(base, e.to_string()))?;
    let url = base.join(href.trim()).map_err(|e| rejected(href, e.to_string()))?;
    finish(href, url)
}

fn finish(raw: &str, mut url: Url) -> Result<String> {
    match url.scheme() {
        "http" | "https" => {
            if url.host_str().is_none_or(str::is_empty) {
                return Err(rejected(raw, "missing host".into()));
            }
        }
        "file" => {}
        other => return Err(rejected(raw, format!("unsupported scheme {other}"))),
    }
    url.set_fragment(None);
    Ok(url.into())
}

fn rejected(url: &str, reason: String) -> Error {
    Error::RejectedUrl {
        url: url.to_string(),
        reason,
    }
}

/// Host of a canonical URL, `localhost` for file URLs.
pub fn url_host(canonical: &str) -> String {
    Url::parse(canonical)
        .ok()
        .and_then(|u| u.host_str().map(str::to_string))
        .filter(|h| !h.is_empty())
        .unwrap_or_else(|| "localhost".to_string())
}

/// Lowercased extension of the last path segment, if any.
pub fn url_extension(canonical: &str) -> Option<String> {
    let url = Url::parse(canonical).ok()?;
    let last = url.path_segments()?.next_back()?.to_string();
    let (stem, ext) = last.rsplit_once('.')?;
    if stem.is_empty() || ext.is_empty() {
        return None;
    }
    Some(ext.to_ascii_lowercase())
}

/// Repository-relative storage path: `{host}/{url path}`, with
/// `index.html` for directory URLs.
pub fn repository_path(canonical: &str) -> String {
    let host = url_host(canonical);
    let path = Url::parse(canonical)
        .map(|u| u.path().to_string())
        .unwrap_or_else(|_| "/".to_string());
    let mut rel = format!("{host}{path}");
    if rel.ends_with('/') {
        rel.push_str("index.html");
    }
    rel
}
