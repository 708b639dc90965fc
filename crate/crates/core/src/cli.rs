//! The `lexis` command line. Every subcommand reads the engine config
//! (`--config`), applies its own flag overrides and prints text, or JSON
//! with `--json`.
//!
//! Exit status: 0 success, 1 runtime failure, 2 usage error, 3 no catalog.

use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::config::EngineConfig;
use crate::crawl::{DocId, FsSource, TraversalPolicy};
use crate::engine::{crawl_to_disk, index_crawl, ClusterViewNode, Engine, SearchRequest, SearchResponse};
use crate::error::{Error, Result};
use crate::index::{Catalog, IndexStore};
use crate::link::{
    biased_pagerank, inverse_pagerank, pagerank, rank_report, spam_candidates, store_ranks, BiasInput, Iterations,
    RankOptions, RankVector, WebGraph,
};
use crate::organize::{build_taxonomy, HierarchyMethod};
use crate::present::FullTextStore;
use crate::retrieval::Model;
use crate::stats::{distribution, DistributionMode};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NO_CATALOG: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "lexis", version, about = "Crawl, index, rank and search a document collection")]
pub struct Cli {
    /// engine configuration file (TOML)
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// data directory, overriding the config
    #[arg(long, global = true)]
    pub data: Option<PathBuf>,
    /// machine-readable output
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fetch documents from a mirrored site tree or file:// seeds
    Crawl(CrawlArgs),
    /// Build or update the catalog from the last crawl
    Index(IndexArgs),
    /// Compute link-analysis scores
    Rank(RankArgs),
    /// Evaluate a query
    Search(SearchArgs),
    /// Induce a term taxonomy from the lexicon
    Taxonomy(TaxonomyArgs),
    /// Term-frequency distribution and power-law fit
    Stats(StatsArgs),
    /// Hubs by inverse PageRank, for manual spam review
    SpamCandidates(SpamArgs),
    /// Run the HTTP/JSON service
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct CrawlArgs {
    /// root of the mirrored tree, laid out as {root}/{host}/{path}
    #[arg(long, default_value = ".")]
    pub source: PathBuf,
    /// start URLs, replacing the configured seeds
    #[arg(long = "seed")]
    pub seeds: Vec<String>,
    #[arg(long, value_parser = parse_policy)]
    pub policy: Option<TraversalPolicy>,
    #[arg(long)]
    pub max_pages: Option<usize>,
    #[arg(long)]
    pub max_depth: Option<usize>,
    #[arg(long)]
    pub threads: Option<usize>,
}

fn parse_policy(s: &str) -> std::result::Result<TraversalPolicy, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct IndexArgs {
    /// drop the catalog and full texts, leaving an empty catalog
    #[arg(long)]
    pub drop: bool,
    /// put the indexed documents in this collection (created if missing)
    #[arg(long)]
    pub collection: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RankAlgo {
    Pagerank,
    Biased,
    Inverse,
}

#[derive(Debug, Args)]
pub struct RankArgs {
    #[arg(long, value_enum, default_value_t = RankAlgo::Pagerank)]
    pub algo: RankAlgo,
    /// `spam<TAB>url` and `prefer<TAB>url` lines; required by --algo biased
    #[arg(long)]
    pub bias_file: Option<PathBuf>,
    /// fixed iteration count instead of ceil(log2 N)
    #[arg(long, conflicts_with = "converge")]
    pub iterations: Option<usize>,
    /// iterate to convergence
    #[arg(long)]
    pub converge: bool,
    #[arg(long, default_value_t = crate::link::DEFAULT_DAMPING)]
    pub damping: f64,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    pub query: String,
    #[arg(long, value_parser = parse_model)]
    pub model: Option<Model>,
    /// document types, comma separated or repeated
    #[arg(long = "type", value_delimiter = ',')]
    pub types: Vec<String>,
    #[arg(long)]
    pub collection: Option<String>,
    /// attach the cluster tree
    #[arg(long)]
    pub cluster: bool,
    /// number of clusters
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_parser = parse_method)]
    pub hierarchy: Option<HierarchyMethod>,
    /// force query expansion on
    #[arg(long, conflicts_with = "no_expand")]
    pub expand: bool,
    #[arg(long)]
    pub no_expand: bool,
    #[arg(long)]
    pub limit: Option<usize>,
}

fn parse_model(s: &str) -> std::result::Result<Model, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_method(s: &str) -> std::result::Result<HierarchyMethod, String> {
    s.parse()
}

#[derive(Debug, Args)]
pub struct TaxonomyArgs {
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long)]
    pub output_levels: Option<usize>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long, value_parser = parse_mode, default_value = "rank")]
    pub mode: DistributionMode,
    /// also write gnuplot data here
    #[arg(long)]
    pub gnuplot: Option<PathBuf>,
}

fn parse_mode(s: &str) -> std::result::Result<DistributionMode, String> {
    s.parse()
}

#[derive(Debug, Args)]
pub struct SpamArgs {
    #[arg(long, default_value_t = 10)]
    pub top: usize,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long)]
    pub listen: Option<String>,
    /// static UI files served under /ui
    #[arg(long)]
    pub ui: Option<PathBuf>,
}

struct Usage(String);

enum Failure {
    Usage(Usage),
    Engine(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure::Usage(Usage(message.into()))
}

type Outcome = std::result::Result<(Value, String), Failure>;

/// Parses `argv` (program name first) and runs the command, printing to
/// stdout and stderr. Returns the exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{rendered}") } else { write!(out, "{rendered}") };
            return code;
        }
    };
    let json = cli.json;
    match execute(cli) {
        Ok((value, text)) => {
            let _ = if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&value).unwrap_or_default())
            } else {
                write!(out, "{text}")
            };
            EXIT_OK
        }
        Err(Failure::Usage(Usage(m))) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Engine(e)) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::MissingCatalog { .. } => EXIT_NO_CATALOG,
                _ => EXIT_FAILURE,
            }
        }
    }
}

fn execute(cli: Cli) -> Outcome {
    let mut config = match &cli.config {
        Some(path) => EngineConfig::load(path)?,
        None => EngineConfig::default(),
    };
    if let Some(data) = &cli.data {
        config.data_dir = data.clone();
    }
    config.validate()?;
    match cli.command {
        Command::Crawl(args) => crawl_cmd(config, args),
        Command::Index(args) => index_cmd(config, args),
        Command::Rank(args) => rank_cmd(config, args),
        Command::Search(args) => search_cmd(config, cli.config, args),
        Command::Taxonomy(args) => taxonomy_cmd(config, args),
        Command::Stats(args) => stats_cmd(config, args),
        Command::SpamCandidates(args) => spam_cmd(config, args),
        Command::Serve(args) => serve_cmd(config, cli.config, args),
    }
}

fn open_store(config: &EngineConfig) -> Result<IndexStore> {
    let dir = config.catalog_dir();
    if !dir.join(crate::index::MANIFEST_FILE).is_file() {
        return Err(Error::MissingCatalog { path: dir });
    }
    IndexStore::open(&dir)
}

fn crawl_cmd(mut config: EngineConfig, args: CrawlArgs) -> Outcome {
    if !args.seeds.is_empty() {
        config.crawler.seeds = args.seeds;
    }
    if let Some(p) = args.policy {
        config.crawler.policy = p;
    }
    if let Some(n) = args.max_pages {
        config.crawler.max_pages = n;
    }
    if let Some(n) = args.max_depth {
        config.crawler.max_depth = n;
    }
    if let Some(n) = args.threads {
        config.crawler.thread_count = n;
    }
    if config.crawler.seeds.is_empty() {
        return Err(usage("no seeds: pass --seed or set crawler.seeds"));
    }
    let out = crawl_to_disk(&config, &FsSource::new(&args.source))?;
    let value = json!({
        "documents": out.index.len(),
        "links": out.links.len(),
        "visits": out.visits,
        "rejected": out.rejected.len(),
        "failures": out.failures,
        "crawl_dir": config.crawl_dir(),
    });
    let mut text = format!(
        "fetched {} documents, {} links, {} rejected, {} failed\n",
        out.index.len(),
        out.links.len(),
        out.rejected.len(),
        out.failures.len()
    );
    for v in &out.visits {
        text.push_str(&format!("{}\t{}\n", v.depth, v.url));
    }
    Ok((value, text))
}

fn index_cmd(config: EngineConfig, args: IndexArgs) -> Outcome {
    let dir = config.catalog_dir();
    let fulltext = FullTextStore::new(config.fulltext_dir());
    if args.drop {
        let mut catalog = Catalog::new(config.indexer.manifest());
        if let Some(name) = &args.collection {
            catalog.create_collection(name);
        }
        remove_tree(fulltext.root())?;
        catalog.save(&dir)?;
        let value = json!({ "dropped": true, "documents": 0 });
        return Ok((value, format!("dropped the index at {}\n", dir.display())));
    }

    let (store, report) = index_crawl(&config, args.collection.as_deref())?;
    let snapshot = store.snapshot();
    let value = json!({
        "report": report,
        "documents": snapshot.catalog.doc_count(),
        "words": snapshot.catalog.word_count(),
        "collections": snapshot.catalog.collections().map(|c| c.name.clone()).collect::<Vec<_>>(),
    });
    let text = format!(
        "indexed {} documents ({} re-indexed); catalog has {} documents and {} words\n",
        report.added,
        report.replaced,
        snapshot.catalog.doc_count(),
        snapshot.catalog.word_count()
    );
    Ok((value, text))
}

fn remove_tree(path: &std::path::Path) -> Result<()> {
    match std::fs::remove_dir_all(path) {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(()),
        Err(e) => Err(Error::io(path, e)),
    }
}

fn rank_options(args: &RankArgs) -> std::result::Result<RankOptions, Failure> {
    if !(0.0..1.0).contains(&args.damping) {
        return Err(usage("--damping must lie in [0, 1)"));
    }
    let iterations = match (args.iterations, args.converge) {
        (Some(0), _) => return Err(usage("--iterations must be positive")),
        (Some(k), _) => Iterations::Fixed(k),
        (None, true) => RankOptions::converged().iterations,
        (None, false) => Iterations::LogN,
    };
    Ok(RankOptions {
        damping: args.damping,
        iterations,
    })
}

fn rank_value(ranks: &RankVector, catalog: &Catalog) -> Value {
    let rows: Vec<Value> = ranks
        .sorted()
        .into_iter()
        .map(|(id, r)| {
            let url = catalog.document_by_md5(&id).map(|d| d.link.clone()).unwrap_or_default();
            json!({ "id": id, "url": url, "rank": r })
        })
        .collect();
    json!({ "iterations": ranks.iterations_run, "ranks": rows })
}

fn rank_cmd(config: EngineConfig, args: RankArgs) -> Outcome {
    if args.algo == RankAlgo::Biased && args.bias_file.is_none() {
        return Err(usage("--algo biased needs --bias-file"));
    }
    let options = rank_options(&args)?;
    let store = open_store(&config)?;
    let ranks = match args.algo {
        RankAlgo::Pagerank => store.update(|catalog| {
            let ranks = pagerank(&WebGraph::from_catalog(catalog), &options);
            store_ranks(catalog, &ranks);
            Ok(ranks)
        })?,
        RankAlgo::Biased => {
            let bias = BiasInput::load(args.bias_file.as_deref().expect("checked above"))?;
            bias.validate()?;
            store.update(|catalog| {
                for url in &bias.spam {
                    catalog.mark_spam(url);
                }
                let ranks = biased_pagerank(&WebGraph::from_catalog(catalog), &bias, &options);
                store_ranks(catalog, &ranks);
                Ok(ranks)
            })?
        }
        // report only, the stored ranks stay as they are
        RankAlgo::Inverse => inverse_pagerank(&WebGraph::from_catalog(&store.snapshot().catalog), &options),
    };
    let snapshot = store.snapshot();
    Ok((rank_value(&ranks, &snapshot.catalog), rank_report(&ranks, &snapshot.catalog)))
}

fn search_cmd(config: EngineConfig, config_path: Option<PathBuf>, args: SearchArgs) -> Outcome {
    let engine = Engine::open(config, config_path)?;
    let request = SearchRequest {
        q: args.query,
        model: args.model,
        types: args.types,
        collection: args.collection,
        cluster: args.cluster,
        expand: match (args.expand, args.no_expand) {
            (true, _) => Some(true),
            (_, true) => Some(false),
            _ => None,
        },
        k: args.k,
        hierarchy: args.hierarchy,
        limit: args.limit,
    };
    let response = match engine.search(&request) {
        Err(e @ Error::Query(_)) => return Err(usage(e.to_string())),
        other => other?,
    };
    let text = render_search(&response);
    Ok((serde_json::to_value(&response).map_err(|e| Error::Query(e.to_string()))?, text))
}

/// Plain-text rendering of a search response.
pub fn render_search(r: &SearchResponse) -> String {
    let mut out = format!("{} results for {:?} ({})\n", r.total, r.query, r.model);
    for (i, s) in r.results.iter().enumerate() {
        let title = if s.title.is_empty() { &s.url } else { &s.title };
        out.push_str(&format!("{:>3}. {:.4}  {}\n     {}\n", i + 1, s.score, title, s.url));
        if !s.excerpt.is_empty() {
            out.push_str(&format!("     {}\n", s.excerpt));
        }
    }
    for hint in &r.suggestions {
        let alts: Vec<&str> = hint.alternatives.iter().map(|a| a.word.as_str()).collect();
        out.push_str(&format!("did you mean for {:?}: {}\n", hint.word, alts.join(", ")));
    }
    if !r.expansions.is_empty() {
        let terms: Vec<&str> = r.expansions.iter().map(|e| e.term.as_str()).collect();
        out.push_str(&format!("related terms: {}\n", terms.join(" ")));
    }
    if let Some(view) = &r.clusters {
        fn go(node: &ClusterViewNode, depth: usize, out: &mut String) {
            let label = if node.label.is_empty() { "*" } else { &node.label };
            out.push_str(&format!("{}{} ({})\n", "  ".repeat(depth), label, node.docs.len()));
            for c in &node.children {
                go(c, depth + 1, out);
            }
        }
        out.push_str("clusters:\n");
        go(&view.root, 1, &mut out);
    }
    out
}

fn taxonomy_cmd(mut config: EngineConfig, args: TaxonomyArgs) -> Outcome {
    if let Some(l) = args.levels {
        config.taxonomy.levels = l;
    }
    if let Some(m) = args.output_levels {
        config.taxonomy.output_levels = m;
    }
    if let Err(e) = config.taxonomy.validate() {
        return Err(usage(e.to_string()));
    }
    let store = open_store(&config)?;
    let forest = build_taxonomy(&store.snapshot().catalog, &config.taxonomy)?;
    let value = serde_json::to_value(&forest).map_err(|e| Error::Catalog(e.to_string()))?;
    Ok((value, forest.dump()))
}

fn stats_cmd(config: EngineConfig, args: StatsArgs) -> Outcome {
    let store = open_store(&config)?;
    let report = distribution(&store.snapshot().catalog, args.mode);
    if let Some(path) = &args.gnuplot {
        crate::crawl::write_atomic(path, report.to_gnuplot().as_bytes())?;
    }
    let value = json!({
        "mode": report.mode,
        "term_count": report.term_count,
        "occurrence_count": report.occurrence_count,
        "fit": report.fit,
        "points": report.points,
    });
    Ok((value, report.to_tsv()))
}

fn spam_cmd(config: EngineConfig, args: SpamArgs) -> Outcome {
    let store = open_store(&config)?;
    let snapshot = store.snapshot();
    let catalog = &snapshot.catalog;
    let found = spam_candidates(&WebGraph::from_catalog(catalog), args.top, &RankOptions::default());
    let url = |id: &DocId| catalog.document_by_md5(id).map(|d| d.link.clone()).unwrap_or_default();
    let rows: Vec<Value> = found.iter().map(|(id, r)| json!({ "id": id, "url": url(id), "score": r })).collect();
    let text: String = found.iter().map(|(id, r)| format!("{id}\t{}\t{r}\n", url(id))).collect();
    Ok((json!({ "candidates": rows }), text))
}

fn serve_cmd(mut config: EngineConfig, config_path: Option<PathBuf>, args: ServeArgs) -> Outcome {
    if let Some(l) = args.listen {
        config.service.listen = l;
    }
    if let Some(ui) = args.ui {
        config.service.ui_dir = Some(ui);
    }
    if let Err(e) = config.validate() {
        return Err(usage(e.to_string()));
    }
    let listen = config.service.listen.clone();
    let engine = Arc::new(Engine::open(config, config_path)?);
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Error::io("tokio runtime", e))?;
    runtime.block_on(crate::service::serve(engine, &listen))?;
    Ok((json!({ "stopped": true }), String::new()))
}
