//! Builds a small catalog in memory, adds and deletes documents through the
//! snapshot store, and shows the relational tables it keeps.

use lexis::crawl::{doc_id, DocumentRecord};
use lexis::index::{BlockConfig, Catalog, IndexDocument, IndexStore, Manifest};
use lexis::text::Analyzer;

fn doc(url: &str, text: &str, analyzer: &Analyzer) -> IndexDocument {
    let record = DocumentRecord {
        id: doc_id(url),
        url: url.to_string(),
        path: url.trim_start_matches("http://").to_string(),
        title: text.split_whitespace().take(3).collect::<Vec<_>>().join(" "),
        doc_type: "txt".into(),
        encoding: "utf-8".into(),
        last_modified: 0,
        last_fetched: 0,
    };
    IndexDocument::new(record, text, analyzer)
}

fn main() -> lexis::Result<()> {
    let manifest = Manifest {
        block: BlockConfig::FixedBlockSize { size: 4 },
        ..Default::default()
    };
    let analyzer = Analyzer::with_settings(manifest.analyzer);
    let store = IndexStore::new(Catalog::new(manifest));

    let first = vec![
        doc("http://ex.org/a", "relational tables hold the inverted index", &analyzer),
        doc("http://ex.org/b", "an inverted index maps words to documents", &analyzer),
    ];
    let reader = store.snapshot();
    store.update(|c| Ok(c.add_documents(first)))?;
    store.update(|c| {
        let more = doc("http://ex.org/c", "documents link to documents", &analyzer)
            .with_links([("http://ex.org/a", "index tables")], &analyzer);
        c.add_documents([more]);
        Ok(())
    })?;
    // an old reader still sees the catalog as it was
    println!("reader on version {} sees {} documents", reader.version, reader.catalog.doc_count());

    let now = store.snapshot();
    println!("version {}: {} documents, {} words", now.version, now.catalog.doc_count(), now.catalog.word_count());
    for (name, rows) in now.catalog.export_tsv().tables() {
        println!("-- {name}\n{rows}");
    }

    store.update(|c| Ok(c.delete_documents(&[doc_id("http://ex.org/b")])))?;
    let after = store.snapshot();
    println!("after delete: {} documents, {} words", after.catalog.doc_count(), after.catalog.word_count());
    for row in after.catalog.postings("index") {
        println!("  'index' in {:?}: tf {:.3}, blocks {:?}, anchors {}", row.doc_id, row.tf, row.blocks, row.anchors);
    }
    Ok(())
}
