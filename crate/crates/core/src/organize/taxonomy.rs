use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::{Catalog, DocKey, WordKey};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TaxonomyConfig {
    pub levels: usize,
    pub output_levels: usize,
}

impl Default for TaxonomyConfig {
    fn default() -> Self {
        TaxonomyConfig {
            levels: 20,
            output_levels: 5,
        }
    }
}

impl TaxonomyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.output_levels == 0 || self.output_levels >= self.levels {
            return Err(Error::Config(format!(
                "taxonomy: need 1 <= output_levels < levels, got {} and {}",
                self.output_levels, self.levels
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaxonomyLevel {
    /// 1 is the lowest df interval
    pub level: usize,
    pub low: f64,
    /// exclusive, except for the last level
    pub high: f64,
    /// words in the interval, highest df first then by name
    pub words: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaxonomyForest {
    pub levels: Vec<TaxonomyLevel>,
    /// level numbers kept in the output: the highest intervals, empty ones skipped
    pub kept: Vec<usize>,
    /// child word -> parent word one kept level up
    pub parents: BTreeMap<String, String>,
}

impl TaxonomyForest {
    pub fn level(&self, number: usize) -> Option<&TaxonomyLevel> {
        self.levels.iter().find(|l| l.level == number)
    }

    pub fn level_of(&self, word: &str) -> Option<usize> {
        self.levels.iter().find(|l| l.words.iter().any(|w| w == word)).map(|l| l.level)
    }

    pub fn word_count(&self) -> usize {
        self.kept.iter().filter_map(|&k| self.level(k)).map(|l| l.words.len()).sum()
    }

    /// `level<TAB>word<TAB>parent`, top level first; top words have an empty parent.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for &k in self.kept.iter().rev() {
            let level = self.level(k).expect("kept level exists");
            for w in &level.words {
                let parent = self.parents.get(w).map(String::as_str).unwrap_or("");
                let _ = writeln!(out, "{k}\t{w}\t{parent}");
            }
        }
        out
    }
}

/// Partitions the lexicon by df into equal-width intervals, keeps the
/// `output_levels` highest ones and links each word to the word of the next
/// kept level up whose tf profile over the documents correlates best.
pub fn build_taxonomy(catalog: &Catalog, config: &TaxonomyConfig) -> Result<TaxonomyForest> {
    config.validate()?;
    let words: Vec<(WordKey, &str, u32)> = catalog.words().map(|w| (w.id, w.name.as_str(), w.df)).collect();
    if words.is_empty() {
        return Err(Error::Catalog("cannot build a taxonomy over an empty lexicon".into()));
    }
    let lo = words.iter().map(|w| w.2).min().expect("nonempty");
    let hi = words.iter().map(|w| w.2).max().expect("nonempty");
    let by_df = |a: &(WordKey, &str, u32), b: &(WordKey, &str, u32)| b.2.cmp(&a.2).then(a.1.cmp(b.1));

    if lo == hi {
        log::warn!("every word has df {lo}; the taxonomy has a single level and no links");
        let mut all = words.clone();
        all.sort_by(by_df);
        return Ok(TaxonomyForest {
            levels: vec![TaxonomyLevel {
                level: 1,
                low: f64::from(lo),
                high: f64::from(hi),
                words: all.iter().map(|w| w.1.to_string()).collect(),
            }],
            kept: Vec::new(),
            parents: BTreeMap::new(),
        });
    }

    let count = config.levels;
    let width = f64::from(hi - lo + 1) / count as f64;
    let mut members: Vec<Vec<(WordKey, &str, u32)>> = vec![Vec::new(); count];
    for w in &words {
        let slot = ((f64::from(w.2 - lo) / width).floor() as usize).min(count - 1);
        members[slot].push(*w);
    }
    members.iter_mut().for_each(|m| m.sort_by(by_df));

    let levels: Vec<TaxonomyLevel> = members
        .iter()
        .enumerate()
        .map(|(i, m)| TaxonomyLevel {
            level: i + 1,
            low: f64::from(lo) + width * i as f64,
            high: f64::from(lo) + width * (i + 1) as f64,
            words: m.iter().map(|w| w.1.to_string()).collect(),
        })
        .collect();
    let kept: Vec<usize> = (count - config.output_levels + 1..=count)
        .filter(|&l| !members[l - 1].is_empty())
        .collect();

    let mut parents = BTreeMap::new();
    for pair in kept.windows(2) {
        let lower = &members[pair[0] - 1];
        let upper = &members[pair[1] - 1];
        // doc -> (upper word index, tf)
        let mut upper_in_doc: HashMap<DocKey, Vec<(usize, f64)>> = HashMap::new();
        for (j, w) in upper.iter().enumerate() {
            for occ in catalog.postings_of(w.0) {
                upper_in_doc.entry(occ.doc_id).or_default().push((j, occ.tf));
            }
        }
        for w in lower {
            let mut corr = vec![0.0; upper.len()];
            for occ in catalog.postings_of(w.0) {
                for &(j, tf) in upper_in_doc.get(&occ.doc_id).map(Vec::as_slice).unwrap_or(&[]) {
                    corr[j] += occ.tf * tf;
                }
            }
            let best = (0..upper.len())
                .filter(|&j| corr[j] > 0.0)
                .max_by(|&a, &b| corr[a].total_cmp(&corr[b]).then(upper[b].1.cmp(upper[a].1)));
            // the upper level is sorted by df, so index 0 is the fallback
            let parent = upper[best.unwrap_or(0)].1;
            parents.insert(w.1.to_string(), parent.to_string());
        }
    }
    Ok(TaxonomyForest { levels, kept, parents })
}
