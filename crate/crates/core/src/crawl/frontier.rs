use std::collections::VecDeque;

use super::config::TraversalPolicy;
use super::url::url_host;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrontierEntry {
    pub url: String,
    pub depth: usize,
}

/// URLs waiting to be fetched, ordered by the traversal policy.
#[derive(Debug)]
pub enum Frontier {
    /// FIFO
    Bfs(VecDeque<FrontierEntry>),
    /// LIFO
    Dfs(Vec<FrontierEntry>),
    /// LIFO within the current host; other hosts wait in FIFO order.
    Dws {
        current_host: Option<String>,
        site: Vec<FrontierEntry>,
        offsite: VecDeque<FrontierEntry>,
    },
}

impl Frontier {
    pub fn new(policy: TraversalPolicy) -> Self {
        match policy {
            TraversalPolicy::Bfs => Frontier::Bfs(VecDeque::new()),
            TraversalPolicy::Dfs => Frontier::Dfs(Vec::new()),
            TraversalPolicy::Dws => Frontier::Dws {
                current_host: None,
                site: Vec::new(),
                offsite: VecDeque::new(),
            },
        }
    }

    /// Adds the out-links of one page, in page order. Depth-first policies
    /// pop the first link first.
    pub fn push_all(&mut self, entries: Vec<FrontierEntry>) {
        match self {
            Frontier::Bfs(queue) => queue.extend(entries),
            Frontier::Dfs(stack) => stack.extend(entries.into_iter().rev()),
            Frontier::Dws {
                current_host,
                site,
                offsite,
            } => {
                let mut same = Vec::new();
                for e in entries {
                    if current_host.as_deref() == Some(url_host(&e.url).as_str()) {
                        same.push(e);
                    } else {
                        offsite.push_back(e);
                    }
                }
                site.extend(same.into_iter().rev());
            }
        }
    }

    pub fn pop(&mut self) -> Option<FrontierEntry> {
        match self {
            Frontier::Bfs(queue) => queue.pop_front(),
            Frontier::Dfs(stack) => stack.pop(),
            Frontier::Dws {
                current_host,
                site,
                offsite,
            } => {
                if let Some(e) = site.pop() {
                    return Some(e);
                }
                let next = offsite.pop_front()?;
                let host = url_host(&next.url);
                // pull every queued link of the new site onto the site stack
                let (same, rest): (Vec<_>, Vec<_>) =
                    offsite.drain(..).partition(|e| url_host(&e.url) == host);
                offsite.extend(rest);
                site.extend(same.into_iter().rev());
                *current_host = Some(host);
                Some(next)
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            Frontier::Bfs(q) => q.is_empty(),
            Frontier::Dfs(s) => s.is_empty(),
            Frontier::Dws { site, offsite, .. } => site.is_empty() && offsite.is_empty(),
        }
    }
}
