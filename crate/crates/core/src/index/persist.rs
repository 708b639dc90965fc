//! On-disk catalog: a manifest plus one TSV file per table.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::catalog::{Catalog, Manifest, SCHEMA_VERSION};
use super::tables::{AnchorLink, CollectionRow, DocKey, DocumentRow, OccurrenceRow, WordKey, WordRow};
use crate::crawl::{write_atomic, DocId};
use crate::error::{Error, Result};
use crate::tsv::{escape, fields};

pub const MANIFEST_FILE: &str = "manifest.toml";

/// The catalog as text, one TSV document per table. Ids are renumbered
/// canonically (documents by md5, words and collections by name) so two
/// catalogs with the same logical content export identically.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TableDump {
    pub document: String,
    pub word: String,
    pub occurrence: String,
    pub spam: String,
    pub collection: String,
    pub collection_document: String,
    pub link: String,
}

const HEADERS: [(&str, &str); 7] = [
    ("document", "id\tmd5\ttitle\tpath\tlink\ttype\tencoding\tnorm\trank"),
    ("word", "id\tname\tdf"),
    ("occurrence", "word_id\tdoc_id\tblock\ttf\tfreq\tanchors"),
    ("spam", "url\tfreq"),
    ("collection", "id\tname"),
    ("collection_document", "col_id\tdoc_id"),
    ("link", "src_md5\tdst_url\tanchor_text\tterms"),
];

impl TableDump {
    pub fn tables(&self) -> [(&'static str, &String); 7] {
        [
            (HEADERS[0].0, &self.document),
            (HEADERS[1].0, &self.word),
            (HEADERS[2].0, &self.occurrence),
            (HEADERS[3].0, &self.spam),
            (HEADERS[4].0, &self.collection),
            (HEADERS[5].0, &self.collection_document),
            (HEADERS[6].0, &self.link),
        ]
    }

    fn table_mut(&mut self, name: &str) -> &mut String {
        match name {
            "document" => &mut self.document,
            "word" => &mut self.word,
            "occurrence" => &mut self.occurrence,
            "spam" => &mut self.spam,
            "collection" => &mut self.collection,
            "collection_document" => &mut self.collection_document,
            _ => &mut self.link,
        }
    }

    /// Names of the tables whose text differs.
    pub fn diff(&self, other: &TableDump) -> Vec<&'static str> {
        self.tables()
            .into_iter()
            .zip(other.tables())
            .filter(|((_, a), (_, b))| a != b)
            .map(|((name, _), _)| name)
            .collect()
    }
}

fn header(name: &str) -> String {
    let cols = HEADERS.iter().find(|(n, _)| *n == name).expect("known table").1;
    format!("#{cols}\n")
}

impl Catalog {
    pub fn export_tsv(&self) -> TableDump {
        let mut docs: Vec<&DocumentRow> = self.documents.values().collect();
        docs.sort_by_key(|d| d.md5);
        let doc_map: HashMap<DocKey, DocKey> = docs.iter().enumerate().map(|(i, d)| (d.id, i as DocKey + 1)).collect();
        let word_map: HashMap<WordKey, WordKey> = self
            .word_by_name
            .values()
            .enumerate()
            .map(|(i, &w)| (w, i as WordKey + 1))
            .collect();
        let col_map: HashMap<u32, u32> = self
            .collection_by_name
            .values()
            .enumerate()
            .map(|(i, &c)| (c, i as u32 + 1))
            .collect();

        let mut out = TableDump::default();
        let mut s = header("document");
        for d in &docs {
            let _ = writeln!(
                s,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                doc_map[&d.id],
                d.md5,
                escape(&d.title),
                escape(&d.path),
                escape(&d.link),
                escape(&d.doc_type),
                escape(&d.encoding),
                d.norm,
                d.rank
            );
        }
        out.document = s;

        let mut s = header("word");
        for w in self.words() {
            let _ = writeln!(s, "{}\t{}\t{}", word_map[&w.id], escape(&w.name), w.df);
        }
        out.word = s;

        let mut occ: Vec<(DocKey, WordKey, &OccurrenceRow)> = self
            .occurrences
            .values()
            .map(|r| (doc_map[&r.doc_id], word_map[&r.word_id], r))
            .collect();
        occ.sort_unstable_by_key(|(d, w, _)| (*d, *w));
        let mut s = header("occurrence");
        for (d, w, r) in occ {
            let blocks: Vec<String> = r.blocks.iter().map(u32::to_string).collect();
            let _ = writeln!(s, "{w}\t{d}\t{}\t{}\t{}\t{}", blocks.join(","), r.tf, r.freq, r.anchors);
        }
        out.occurrence = s;

        let mut s = header("spam");
        for row in self.spam() {
            let _ = writeln!(s, "{}\t{}", escape(&row.url), row.freq);
        }
        out.spam = s;

        let mut s = header("collection");
        for c in self.collections() {
            let _ = writeln!(s, "{}\t{}", col_map[&c.id], escape(&c.name));
        }
        out.collection = s;

        let mut members: Vec<(u32, DocKey)> = self.memberships.iter().map(|(c, d)| (col_map[c], doc_map[d])).collect();
        members.sort_unstable();
        let mut s = header("collection_document");
        for (c, d) in members {
            let _ = writeln!(s, "{c}\t{d}");
        }
        out.collection_document = s;

        let mut s = header("link");
        for (src, link) in self.links() {
            let _ = writeln!(
                s,
                "{src}\t{}\t{}\t{}",
                escape(&link.dst_url),
                escape(&link.text),
                escape(&link.terms.join(" "))
            );
        }
        out.link = s;
        out
    }

    pub fn import_tsv(manifest: Manifest, dump: &TableDump) -> Result<Catalog> {
        let mut cat = Catalog::new(manifest);

        for f in rows(&dump.document, "document", 9)? {
            let id: DocKey = num(&f[0], "document")?;
            let md5: DocId = f[1].parse().map_err(|_| bad("document", format!("bad md5 {:?}", f[1])))?;
            let row = DocumentRow {
                id,
                md5,
                title: f[2].clone(),
                path: f[3].clone(),
                link: f[4].clone(),
                doc_type: f[5].clone(),
                encoding: f[6].clone(),
                norm: num(&f[7], "document")?,
                rank: num(&f[8], "document")?,
            };
            if cat.doc_by_md5.insert(md5, id).is_some() || cat.documents.insert(id, row).is_some() {
                return Err(bad("document", format!("duplicate document {md5}")));
            }
            cat.doc_words.insert(id, Default::default());
        }

        for f in rows(&dump.word, "word", 3)? {
            let id: WordKey = num(&f[0], "word")?;
            let row = WordRow {
                id,
                name: f[1].clone(),
                df: num(&f[2], "word")?,
            };
            if cat.word_by_name.insert(row.name.clone(), id).is_some() || cat.words.insert(id, row).is_some() {
                return Err(bad("word", format!("duplicate word {:?}", f[1])));
            }
        }

        for f in rows(&dump.occurrence, "occurrence", 6)? {
            let word_id: WordKey = num(&f[0], "occurrence")?;
            let doc_id: DocKey = num(&f[1], "occurrence")?;
            let blocks = if f[2].is_empty() {
                Vec::new()
            } else {
                f[2].split(',').map(|b| num(b, "occurrence")).collect::<Result<_>>()?
            };
            let row = OccurrenceRow {
                word_id,
                doc_id,
                blocks,
                tf: num(&f[3], "occurrence")?,
                freq: num(&f[4], "occurrence")?,
                anchors: num(&f[5], "occurrence")?,
            };
            cat.doc_words
                .get_mut(&doc_id)
                .ok_or_else(|| bad("occurrence", format!("unknown document {doc_id}")))?
                .insert(word_id);
            cat.occurrences.insert((word_id, doc_id), row);
        }

        for f in rows(&dump.spam, "spam", 2)? {
            cat.spam.insert(f[0].clone(), num(&f[1], "spam")?);
        }

        for f in rows(&dump.collection, "collection", 2)? {
            let id: u32 = num(&f[0], "collection")?;
            cat.collections.insert(
                id,
                CollectionRow {
                    id,
                    name: f[1].clone(),
                },
            );
            cat.collection_by_name.insert(f[1].clone(), id);
        }

        for f in rows(&dump.collection_document, "collection_document", 2)? {
            cat.memberships
                .insert((num(&f[0], "collection_document")?, num(&f[1], "collection_document")?));
        }

        for f in rows(&dump.link, "link", 4)? {
            let src: DocId = f[0].parse().map_err(|_| bad("link", format!("bad md5 {:?}", f[0])))?;
            let link = AnchorLink {
                dst_id: crate::crawl::doc_id(&f[1]),
                dst_url: f[1].clone(),
                text: f[2].clone(),
                terms: f[3].split_whitespace().map(str::to_string).collect(),
            };
            cat.inbound.entry(link.dst_id).or_default().insert(src);
            cat.links.entry(src).or_default().push(link);
        }

        cat.next_doc = cat.documents.keys().next_back().map_or(1, |k| k + 1);
        cat.next_word = cat.words.keys().next_back().map_or(1, |k| k + 1);
        cat.next_collection = cat.collections.keys().next_back().map_or(1, |k| k + 1);
        cat.check_integrity()?;
        Ok(cat)
    }

    /// Writes the catalog directory. The new contents are assembled next to
    /// `dir` and swapped in with renames, so a failed save leaves the old
    /// catalog intact.
    pub fn save(&self, dir: &Path) -> Result<()> {
        let name = dir
            .file_name()
            .ok_or_else(|| Error::Catalog(format!("bad catalog path {}", dir.display())))?
            .to_string_lossy()
            .into_owned();
        let staging = dir.with_file_name(format!("{name}.partial"));
        let retired = dir.with_file_name(format!("{name}.old"));
        remove_dir(&staging)?;
        std::fs::create_dir_all(&staging).map_err(|e| Error::io(&staging, e))?;

        let manifest = toml::to_string(&self.manifest).map_err(|e| Error::Catalog(e.to_string()))?;
        write_atomic(&staging.join(MANIFEST_FILE), manifest.as_bytes())?;
        let dump = self.export_tsv();
        for (table, text) in dump.tables() {
            write_atomic(&staging.join(format!("{table}.tsv")), text.as_bytes())?;
        }

        remove_dir(&retired)?;
        if dir.exists() {
            std::fs::rename(dir, &retired).map_err(|e| Error::io(dir, e))?;
        }
        std::fs::rename(&staging, dir).map_err(|e| Error::io(dir, e))?;
        remove_dir(&retired)
    }

    pub fn load(dir: &Path) -> Result<Catalog> {
        let manifest = read_manifest(dir)?;
        let mut dump = TableDump::default();
        for (table, _) in HEADERS {
            let path = dir.join(format!("{table}.tsv"));
            *dump.table_mut(table) = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        }
        Catalog::import_tsv(manifest, &dump)
    }
}

pub fn read_manifest(dir: &Path) -> Result<Manifest> {
    let path: PathBuf = dir.join(MANIFEST_FILE);
    let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let manifest: Manifest = toml::from_str(&text).map_err(|e| Error::Catalog(format!("{}: {e}", path.display())))?;
    if manifest.schema_version != SCHEMA_VERSION {
        return Err(Error::Catalog(format!(
            "catalog schema {} is not the supported version {SCHEMA_VERSION}",
            manifest.schema_version
        )));
    }
    manifest.block.validate()?;
    Ok(manifest)
}

fn remove_dir(path: &Path) -> Result<()> {
    if path.exists() {
        std::fs::remove_dir_all(path).map_err(|e| Error::io(path, e))?;
    }
    Ok(())
}

fn bad(table: &'static str, message: String) -> Error {
    Error::Parse {
        what: table,
        line: 0,
        message,
    }
}

fn rows(text: &str, table: &'static str, n: usize) -> Result<Vec<Vec<String>>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.starts_with('#') || line.is_empty() {
            continue;
        }
        out.push(fields(line, n).ok_or_else(|| Error::Parse {
            what: table,
            line: i + 1,
            message: format!("expected {n} fields"),
        })?);
    }
    Ok(out)
}

fn num<T: std::str::FromStr>(s: &str, table: &'static str) -> Result<T> {
    s.parse().map_err(|_| bad(table, format!("bad number {s:?}")))
}

