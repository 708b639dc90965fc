//! Text, title and link extraction from HTML pages.

use scraper::{Html, Selector};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExtractedPage {
    pub title: String,
    pub text: String,
    /// (href as written, visible anchor text)
    pub links: Vec<(String, String)>,
}

pub fn extract_html(source: &str) -> ExtractedPage {
    let doc = Html::parse_document(source);
    let title_sel = Selector::parse("title").expect("static selector");
    let body_sel = Selector::parse("body").expect("static selector");
    let link_sel = Selector::parse("a[href]").expect("static selector");

    let title = doc
        .select(&title_sel)
        .next()
        .map(|t| collapse_ws(&t.text().collect::<String>()))
        .unwrap_or_default();

    let mut text = String::new();
    let root = doc.select(&body_sel).next();
    let nodes = match root {
        Some(body) => body.descendants().collect::<Vec<_>>(),
        None => doc.root_element().descendants().collect(),
    };
    for node in nodes {
        if let Some(t) = node.value().as_text() {
            let skip = node.ancestors().any(|a| {
                a.value()
                    .as_element()
                    .map(|e| matches!(e.name(), "script" | "style" | "title" | "head"))
                    .unwrap_or(false)
            });
            if !skip {
                text.push_str(t);
                text.push(' ');
            }
        }
    }

    let links = doc
        .select(&link_sel)
        .filter_map(|a| {
            let href = a.value().attr("href")?.trim().to_string();
            Some((href, collapse_ws(&a.text().collect::<String>())))
        })
        .collect();

    ExtractedPage {
        title,
        text: collapse_ws(&text),
        links,
    }
}

fn collapse_ws(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Extension first, then a content sniff for extensionless or dynamic pages.
pub fn sniff_type(extension: Option<&str>, bytes: &[u8]) -> &'static str {
    if let Some(ext) = extension {
        match ext.to_ascii_lowercase().as_str() {
            "html" | "htm" | "php" | "jsp" | "asp" | "xhtml" => return "html",
            "txt" | "text" => return "txt",
            _ => {}
        }
    }
    let head = String::from_utf8_lossy(&bytes[..bytes.len().min(1024)]).to_ascii_lowercase();
    let trimmed = head.trim_start();
    if trimmed.starts_with("<!doctype html") || trimmed.starts_with("<html") || head.contains("<body")
    {
        "html"
    } else if std::str::from_utf8(bytes).is_ok() {
        "txt"
    } else {
        "other"
    }
}
