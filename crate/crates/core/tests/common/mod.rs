#![allow(dead_code)]

use lexis::crawl::{doc_id, DocumentRecord};
use lexis::index::IndexDocument;
use lexis::text::Analyzer;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn record(url: &str, title: &str) -> DocumentRecord {
    DocumentRecord {
        id: doc_id(url),
        url: url.to_string(),
        path: url.trim_start_matches("http://").to_string(),
        title: title.to_string(),
        doc_type: "txt".into(),
        encoding: "utf-8".into(),
        last_modified: 0,
        last_fetched: 0,
    }
}

pub fn vocabulary(n: usize) -> Vec<String> {
    let letters = ['a', 'e', 'k', 'l', 'm', 'o', 'r', 's', 't', 'u'];
    (0..n)
        .map(|i| {
            let mut w = String::from("w");
            let mut x = i;
            loop {
                w.push(letters[x % letters.len()]);
                x /= letters.len();
                if x == 0 {
                    break;
                }
            }
            w
        })
        .collect()
}

/// A small random text corpus: (url, text, out-link targets with anchors).
pub struct SyntheticDoc {
    pub url: String,
    pub text: String,
    pub links: Vec<(String, String)>,
}

pub fn synthetic_corpus(seed: u64, docs: usize, vocab: usize) -> Vec<SyntheticDoc> {
    let mut r = rng(seed);
    let words = vocabulary(vocab);
    (0..docs)
        .map(|i| {
            let len = r.gen_range(0..25);
            // skewed choice so some words are common
            let text: Vec<&str> = (0..len)
                .map(|_| {
                    let a = r.gen_range(0..words.len());
                    let b = r.gen_range(0..words.len());
                    words[a.min(b)].as_str()
                })
                .collect();
            let links = (0..r.gen_range(0..3))
                .map(|_| {
                    let target = r.gen_range(0..docs + 2);
                    let anchor: Vec<&str> = (0..r.gen_range(0..3))
                        .map(|_| words.choose(&mut r).unwrap().as_str())
                        .collect();
                    (format!("http://syn.org/d{target}"), anchor.join(" "))
                })
                .collect();
            SyntheticDoc {
                url: format!("http://syn.org/d{i}"),
                text: text.join(" "),
                links,
            }
        })
        .collect()
}

pub fn index_doc(doc: &SyntheticDoc, analyzer: &Analyzer) -> IndexDocument {
    IndexDocument::new(record(&doc.url, ""), &doc.text, analyzer)
        .with_links(doc.links.iter().map(|(u, t)| (u.as_str(), t.as_str())), analyzer)
}

pub const TINY_PAGES: &[(&str, &str, &str)] = &[
    ("stars.html", "Stars", "stars shine in the night sky and telescopes show distant galaxies"),
    ("galaxy.html", "Galaxy", "a galaxy holds billions of stars bound by gravity"),
    ("telescope.html", "Telescope", "a telescope gathers light with a mirror or a lens to see stars"),
    ("planets.html", "Planets", "planets orbit stars and some planets have moons and rings"),
    ("bread.html", "Bread", "bread needs flour water salt and yeast then a hot oven"),
    ("soup.html", "Soup", "soup simmers vegetables with salt water and herbs in a pot"),
    ("oven.html", "Oven", "an oven bakes bread and roasts vegetables with dry heat"),
    ("herbs.html", "Herbs", "fresh herbs flavour soup and bread and roasted vegetables"),
];

/// Writes a one-host site plus a config pointing at it; returns the config path.
/// The data directory is `{root}/data`.
pub fn tiny_site(root: &std::path::Path) -> std::path::PathBuf {
    let host = root.join("site/www.tiny.org");
    std::fs::create_dir_all(&host).unwrap();
    let mut home = String::from("<html><head><title>Tiny</title></head><body>");
    for (file, title, _) in TINY_PAGES {
        home.push_str(&format!("<a href=\"/{file}\">{title}</a> "));
    }
    home.push_str("</body></html>");
    std::fs::write(host.join("index.html"), home).unwrap();
    for (i, (file, title, body)) in TINY_PAGES.iter().enumerate() {
        let next = TINY_PAGES[(i + 1) % TINY_PAGES.len()].0;
        let page = format!(
            "<html><head><title>{title}</title></head><body><p>{body}</p><a href=\"/{next}\">more</a></body></html>"
        );
        std::fs::write(host.join(file), page).unwrap();
    }
    let config = root.join("lexis.toml");
    let text = format!(
        "data_dir = {:?}\n\n[crawler]\nseeds = [\"http://www.tiny.org/\"]\n\n[clustering]\nclusters = 2\nmin_cluster_size = 2\n",
        root.join("data").to_str().unwrap()
    );
    std::fs::write(&config, text).unwrap();
    config
}

/// Runs the command line in-process; returns (exit code, stdout, stderr).
pub fn lexis(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("lexis").chain(args.iter().copied());
    let code = lexis::cli::run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

/// Crawls and indexes the tiny site under `root`; returns the config path.
pub fn tiny_catalog(root: &std::path::Path) -> std::path::PathBuf {
    let config = tiny_site(root);
    let cfg = config.to_str().unwrap();
    let site = root.join("site");
    let (code, _, err) = lexis(&["--config", cfg, "crawl", "--source", site.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let (code, _, err) = lexis(&["--config", cfg, "index"]);
    assert_eq!(code, 0, "{err}");
    config
}
