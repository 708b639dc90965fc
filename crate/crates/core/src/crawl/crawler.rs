use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::Path;
use std::sync::Mutex;
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use super::config::CrawlConfig;
use super::docindex::{write_atomic, DocumentIndex, DocumentRecord, LinkRecord};
use super::frontier::{Frontier, FrontierEntry};
use super::robots::DenyList;
use super::source::{ContentSource, FetchError, Fetched};
use super::url::{canonicalize_url, doc_id, repository_path, resolve_url, url_extension, url_host, DocId};
use crate::error::Result;
use crate::text::{extract_html, sniff_type, ExtractedPage};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Visit {
    pub url: String,
    pub depth: usize,
}

#[derive(Debug, Clone, Default)]
pub struct CrawlOutput {
    pub index: DocumentIndex,
    pub links: Vec<LinkRecord>,
    /// Stored documents in fetch order.
    pub visits: Vec<Visit>,
    /// Plain text of each stored document.
    pub texts: BTreeMap<DocId, String>,
    /// (url, reason) for links never fetched because a filter refused them.
    pub rejected: Vec<(String, String)>,
    /// (url, reason) for fetches that failed or returned an unaccepted type.
    pub failures: Vec<(String, String)>,
}

/// Title, text and raw links of a fetched body of the given type.
pub fn extract_document(doc_type: &str, bytes: &[u8]) -> ExtractedPage {
    match doc_type {
        "html" => extract_html(&String::from_utf8_lossy(bytes)),
        "txt" => ExtractedPage {
            text: String::from_utf8_lossy(bytes).into_owned(),
            ..Default::default()
        },
        _ => ExtractedPage::default(),
    }
}

/// Spaces out requests to the same host.
struct HostClock {
    delay: Duration,
    next_slot: Mutex<HashMap<String, Instant>>,
}

impl HostClock {
    fn wait(&self, host: &str) {
        if self.delay.is_zero() {
            return;
        }
        let start = {
            let mut slots = self.next_slot.lock().expect("host clock poisoned");
            let now = Instant::now();
            let start = slots.get(host).copied().filter(|t| *t > now).unwrap_or(now);
            slots.insert(host.to_string(), start + self.delay);
            start
        };
        let now = Instant::now();
        if start > now {
            std::thread::sleep(start - now);
        }
    }
}

struct Filters {
    seed_hosts: HashSet<String>,
    seed_domains: HashSet<String>,
    accept: Vec<String>,
    reject: Vec<String>,
    deny: DenyList,
}

fn domain_of(host: &str) -> String {
    let labels: Vec<&str> = host.rsplitn(3, '.').collect();
    match labels.as_slice() {
        [tld, name, ..] => format!("{name}.{tld}"),
        _ => host.to_string(),
    }
}

impl Filters {
    fn new(config: &CrawlConfig, seeds: &[String]) -> Result<Self> {
        let seed_hosts: HashSet<String> = seeds.iter().map(|s| url_host(s)).collect();
        let seed_domains = seed_hosts.iter().map(|h| domain_of(h)).collect();
        let deny = match &config.robots_file {
            Some(path) => DenyList::load(path)?,
            None => DenyList::default(),
        };
        let lower = |v: &[String]| v.iter().map(|s| s.trim_start_matches('.').to_ascii_lowercase()).collect();
        Ok(Filters {
            seed_hosts,
            seed_domains,
            accept: lower(&config.accept_types),
            reject: lower(&config.reject_types),
            deny,
        })
    }

    /// Checks done before a URL enters the frontier.
    fn admit(&self, config: &CrawlConfig, url: &str) -> std::result::Result<(), String> {
        let host = url_host(url);
        if !config.host_spanning && !self.seed_hosts.contains(&host) {
            let same_domain = config.domain_spanning && self.seed_domains.contains(&domain_of(&host));
            if !same_domain {
                return Err(format!("off-site host {host}"));
            }
        }
        if let Some(ext) = url_extension(url) {
            if self.reject.contains(&ext) {
                return Err(format!("rejected type {ext}"));
            }
            if !self.accept.is_empty() && !self.accept.contains(&ext) {
                return Err(format!("type {ext} not accepted"));
            }
        }
        if !self.deny.allows(url) {
            return Err("denied path".into());
        }
        Ok(())
    }

    /// Checks done on the fetched content.
    fn accepts_content(&self, url: &str, doc_type: &str) -> bool {
        if self.accept.is_empty() || url_extension(url).is_some() {
            return true;
        }
        self.accept.iter().any(|a| a == doc_type || (doc_type == "html" && a == "htm"))
    }
}

fn now_secs() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn charset(content_type: Option<&str>, bytes: &[u8]) -> String {
    content_type
        .and_then(|ct| ct.split(';').find_map(|p| p.trim().strip_prefix("charset=")))
        .map(|c| c.trim_matches('"').to_ascii_lowercase())
        .unwrap_or_else(|| {
            if std::str::from_utf8(bytes).is_ok() {
                "utf-8".into()
            } else {
                "unknown".into()
            }
        })
}

/// Runs a crawl to completion against `source`.
///
/// Workers fetch in batches of `thread_count`; results are applied in the
/// order they were taken off the frontier.
pub fn crawl(config: &CrawlConfig, source: &dyn ContentSource) -> Result<CrawlOutput> {
    config.validate()?;
    let mut out = CrawlOutput::default();
    let mut seeds = Vec::new();
    for raw in &config.seeds {
        match canonicalize_url(raw) {
            Ok(u) => seeds.push(u),
            Err(e) => out.rejected.push((raw.clone(), e.to_string())),
        }
    }
    let filters = Filters::new(config, &seeds)?;
    let clock = HostClock {
        delay: Duration::from_millis(config.host_delay_ms),
        next_slot: Mutex::new(HashMap::new()),
    };

    let mut frontier = Frontier::new(config.policy);
    frontier.push_all(seeds.into_iter().map(|url| FrontierEntry { url, depth: 0 }).collect());
    let mut visited: HashSet<DocId> = HashSet::new();

    while out.index.len() < config.max_pages && !frontier.is_empty() {
        let want = config.thread_count.min(config.max_pages - out.index.len());
        let mut batch = Vec::with_capacity(want);
        while batch.len() < want {
            let Some(entry) = frontier.pop() else { break };
            if visited.insert(doc_id(&entry.url)) {
                batch.push(entry);
            }
        }
        if batch.is_empty() {
            break;
        }

        let results: Vec<std::result::Result<Fetched, FetchError>> = if batch.len() == 1 {
            clock.wait(&url_host(&batch[0].url));
            vec![source.fetch(&batch[0].url)]
        } else {
            std::thread::scope(|scope| {
                let handles: Vec<_> = batch
                    .iter()
                    .map(|entry| {
                        let clock = &clock;
                        scope.spawn(move || {
                            clock.wait(&url_host(&entry.url));
                            source.fetch(&entry.url)
                        })
                    })
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().unwrap_or_else(|_| Err(FetchError("worker panicked".into()))))
                    .collect()
            })
        };

        for (entry, result) in batch.into_iter().zip(results) {
            if out.index.len() >= config.max_pages {
                break;
            }
            let fetched = match result {
                Ok(f) => f,
                Err(e) => {
                    log::warn!("fetch failed for {}: {e}", entry.url);
                    out.failures.push((entry.url, e.0));
                    continue;
                }
            };
            let children = store(config, &filters, &mut out, &entry, fetched)?;
            frontier.push_all(children);
        }
    }
    Ok(out)
}

/// Records one fetched document and returns its admissible children.
fn store(
    config: &CrawlConfig,
    filters: &Filters,
    out: &mut CrawlOutput,
    entry: &FrontierEntry,
    fetched: Fetched,
) -> Result<Vec<FrontierEntry>> {
    let ext = url_extension(&entry.url);
    let doc_type = sniff_type(ext.as_deref(), &fetched.bytes);
    if !filters.accepts_content(&entry.url, doc_type) {
        out.failures.push((entry.url.clone(), format!("content type {doc_type} not accepted")));
        return Ok(Vec::new());
    }
    let id = doc_id(&entry.url);
    let page = extract_document(doc_type, &fetched.bytes);
    let path = repository_path(&entry.url);
    if let Some(repo) = &config.repository_path {
        write_atomic(&repo.join(Path::new(&path)), &fetched.bytes)?;
    }
    let fetched_at = now_secs();
    out.index.insert(DocumentRecord {
        id,
        url: entry.url.clone(),
        path,
        title: page.title.clone(),
        doc_type: doc_type.to_string(),
        encoding: charset(fetched.content_type.as_deref(), &fetched.bytes),
        last_modified: fetched.last_modified.unwrap_or(fetched_at),
        last_fetched: fetched_at,
    });
    out.texts.insert(id, page.text);
    out.visits.push(Visit {
        url: entry.url.clone(),
        depth: entry.depth,
    });
    log::debug!("stored {} at depth {}", entry.url, entry.depth);

    let mut children = Vec::new();
    for (href, anchor) in page.links.into_iter().chain(fetched.sidecar_links) {
        let dst = match resolve_url(&entry.url, &href) {
            Ok(u) => u,
            Err(e) => {
                out.rejected.push((href, e.to_string()));
                continue;
            }
        };
        out.links.push(LinkRecord {
            src_id: id,
            dst_url: dst.clone(),
            anchor_text: anchor,
        });
        if entry.depth + 1 > config.max_depth {
            continue;
        }
        match filters.admit(config, &dst) {
            Ok(()) => children.push(FrontierEntry {
                url: dst,
                depth: entry.depth + 1,
            }),
            Err(reason) => out.rejected.push((dst, reason)),
        }
    }
    Ok(children)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crawl::{MemorySource, TraversalPolicy};

    fn config(seed: &str, policy: TraversalPolicy) -> CrawlConfig {
        CrawlConfig {
            seeds: vec![seed.into()],
            policy,
            ..Default::default()
        }
    }

    fn urls(out: &CrawlOutput) -> Vec<&str> {
        out.visits.iter().map(|v| v.url.as_str()).collect()
    }

    #[test]
    fn chain_bfs_respects_page_cap() {
        let mut src = MemorySource::new();
        src.link_page("http://s.org/a", &["/b"]);
        src.link_page("http://s.org/b", &["/c"]);
        src.link_page("http://s.org/c", &["/d"]);
        src.link_page("http://s.org/d", &[]);
        let mut c = config("http://s.org/a", TraversalPolicy::Bfs);
        c.max_pages = 3;
        let out = crawl(&c, &src).unwrap();
        assert_eq!(urls(&out), ["http://s.org/a", "http://s.org/b", "http://s.org/c"]);
        assert_eq!(out.links.len(), 3);
    }

    #[test]
    fn star_dfs_finishes_a_branch_first() {
        let mut src = MemorySource::new();
        src.link_page("http://s.org/a", &["/b", "/c", "/d"]);
        src.link_page("http://s.org/b", &["/b1"]);
        src.link_page("http://s.org/b1", &[]);
        src.link_page("http://s.org/c", &["/c1"]);
        src.link_page("http://s.org/c1", &[]);
        src.link_page("http://s.org/d", &[]);
        let out = crawl(&config("http://s.org/a", TraversalPolicy::Dfs), &src).unwrap();
        let got: Vec<_> = urls(&out).iter().map(|u| u.trim_start_matches("http://s.org/")).collect();
        assert_eq!(got, ["a", "b", "b1", "c", "c1", "d"]);
    }

    #[test]
    fn rejected_types_and_depth_are_enforced() {
        let mut src = MemorySource::new();
        src.link_page("http://s.org/a", &["/x.zip", "/b"]);
        src.link_page("http://s.org/b", &["/c"]);
        src.link_page("http://s.org/c", &[]);
        src.insert("http://s.org/x.zip", "PK");
        let mut c = config("http://s.org/a", TraversalPolicy::Bfs);
        c.max_depth = 1;
        let out = crawl(&c, &src).unwrap();
        assert_eq!(urls(&out), ["http://s.org/a", "http://s.org/b"]);
        assert!(out.rejected.iter().any(|(u, _)| u.ends_with("x.zip")));
    }

    #[test]
    fn missing_pages_are_logged_and_skipped() {
        let mut src = MemorySource::new();
        src.link_page("http://s.org/a", &["/gone", "/b"]);
        src.link_page("http://s.org/b", &[]);
        let out = crawl(&config("http://s.org/a", TraversalPolicy::Bfs), &src).unwrap();
        assert_eq!(out.index.len(), 2);
        assert_eq!(out.failures.len(), 1);
    }

    #[test]
    fn offsite_links_need_spanning() {
        let mut src = MemorySource::new();
        src.link_page("http://www.s.org/a", &["http://docs.s.org/", "http://t.org/"]);
        src.link_page("http://docs.s.org/", &[]);
        src.link_page("http://t.org/", &[]);
        let mut c = config("http://www.s.org/a", TraversalPolicy::Bfs);
        assert_eq!(crawl(&c, &src).unwrap().index.len(), 1);
        c.domain_spanning = true;
        assert_eq!(crawl(&c, &src).unwrap().index.len(), 2);
        c.host_spanning = true;
        assert_eq!(crawl(&c, &src).unwrap().index.len(), 3);
    }

    #[test]
    fn extensionless_pages_are_sniffed() {
        let mut src = MemorySource::new();
        src.link_page("http://s.org/a", &["/plain"]);
        src.insert("http://s.org/plain", "just words");
        let mut c = config("http://s.org/a", TraversalPolicy::Bfs);
        c.accept_types = vec!["html".into()];
        let out = crawl(&c, &src).unwrap();
        assert_eq!(urls(&out), ["http://s.org/a"]);
        c.accept_types = vec!["html".into(), "txt".into()];
        let out = crawl(&c, &src).unwrap();
        assert_eq!(out.index.records()[1].doc_type, "txt");
    }
}
