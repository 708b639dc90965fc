#![allow(dead_code)]

use std::path::{Path, PathBuf};

use lexis::config::EngineConfig;
use lexis::crawl::FsSource;
use lexis::engine::{crawl_and_index, Engine};

pub fn manifest_dir() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

pub fn demo_site() -> PathBuf {
    manifest_dir().join("fixtures/bilingual-site")
}

/// Scratch space under the workspace target directory.
pub fn examples_dir() -> PathBuf {
    let workspace = manifest_dir().ancestors().nth(2).unwrap_or(manifest_dir());
    workspace.join("target/examples")
}

/// The bundled demo configuration with its data under `target/examples/{name}`.
pub fn demo_config(name: &str) -> EngineConfig {
    let mut config = EngineConfig::load(&manifest_dir().join("fixtures/lexis.toml")).expect("demo config");
    config.data_dir = examples_dir().join(name);
    config
}

/// Crawls and indexes the demo site from scratch, then opens an engine on it.
pub fn demo_engine(name: &str) -> Engine {
    let config = demo_config(name);
    let _ = std::fs::remove_dir_all(&config.data_dir);
    let (out, report) = crawl_and_index(&config, &FsSource::new(demo_site())).expect("crawl and index");
    eprintln!(
        "indexed {} documents ({} links) into {}",
        report.added,
        out.links.len(),
        config.data_dir.display()
    );
    Engine::open(config, None).expect("open engine")
}
