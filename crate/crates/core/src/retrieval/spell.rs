use serde::Serialize;

use crate::index::Catalog;

pub const DEFAULT_MAX_DISTANCE: usize = 2;
pub const DEFAULT_SUGGESTIONS: usize = 5;

/// Levenshtein distance over characters, by the full dynamic program.
pub fn edit_distance(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    Distance::new(&a).to(b)
}

/// Distances from one fixed word, reusing the row buffers across calls.
struct Distance<'a> {
    from: &'a [char],
    prev: Vec<usize>,
    cur: Vec<usize>,
}

impl<'a> Distance<'a> {
    fn new(from: &'a [char]) -> Self {
        Distance {
            from,
            prev: Vec::new(),
            cur: Vec::new(),
        }
    }

    // rows run over `from`, so each column is one char of `to`
    fn to(&mut self, to: &str) -> usize {
        let n = self.from.len();
        self.prev.clear();
        self.prev.extend(0..=n);
        self.cur.resize(n + 1, 0);
        for (j, cb) in to.chars().enumerate() {
            self.cur[0] = j + 1;
            for (i, ca) in self.from.iter().enumerate() {
                let substitute = self.prev[i] + usize::from(ca != &cb);
                self.cur[i + 1] = substitute.min(self.prev[i + 1] + 1).min(self.cur[i] + 1);
            }
            std::mem::swap(&mut self.prev, &mut self.cur);
        }
        self.prev[n]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Suggestion {
    pub word: String,
    pub distance: usize,
    pub df: u32,
}

/// Lexicon words within `max_distance` of a term missing from the
/// lexicon, closest first, then rarest, then by name. Nothing is suggested
/// for a term the lexicon already has.
pub fn suggest_terms(term: &str, catalog: &Catalog, max_distance: usize, limit: usize) -> Vec<Suggestion> {
    if catalog.word(term).is_some() {
        return Vec::new();
    }
    suggest_from(term, catalog.words().map(|w| (w.name.as_str(), w.df)), max_distance, limit)
}

/// The same ranking over any (word, df) vocabulary.
pub fn suggest_from<'a>(
    term: &str,
    vocabulary: impl Iterator<Item = (&'a str, u32)>,
    max_distance: usize,
    limit: usize,
) -> Vec<Suggestion> {
    let chars: Vec<char> = term.chars().collect();
    let mut distance = Distance::new(&chars);
    let mut found: Vec<(usize, u32, &str)> = vocabulary
        .filter(|(word, _)| *word != term)
        .filter_map(|(word, df)| {
            let d = distance.to(word);
            (d <= max_distance).then_some((d, df, word))
        })
        .collect();
    if found.len() > limit && limit > 0 {
        found.select_nth_unstable(limit - 1);
    }
    found.truncate(limit);
    found.sort_unstable();
    found
        .into_iter()
        .map(|(distance, df, word)| Suggestion {
            word: word.to_string(),
            distance,
            df,
        })
        .collect()
}
