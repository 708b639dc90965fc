use std::collections::HashSet;
use std::path::Path;

use super::trie::Trie;
use crate::error::{Error, Result};
use crate::text::{is_greek_char, normalize_word, strip_accents};

const SUFFIXES: &str = include_str!("../../data/greek/suffixes.txt");
const PREFIXES: &str = include_str!("../../data/greek/prefixes.txt");
const IRREGULARS: &str = include_str!("../../data/greek/irregulars.txt");
const UNMODIFIED: &str = include_str!("../../data/greek/unmodified.txt");
const FINAL_CHARS: &str = include_str!("../../data/greek/finalchar.txt");
const OPTIMIZATIONS: &str = include_str!("../../data/greek/optimizations.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuffixKind {
    Verbal,
    Nominal,
}

/// One last-character rule: any member ending is replaced by `replacement`.
#[derive(Debug, Clone)]
pub struct FinalCharRule {
    pub members: Vec<String>,
    pub replacement: String,
}

/// Entry counts per rule file, reported after loading.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RuleCounts {
    pub suffixes: usize,
    pub prefixes: usize,
    pub irregulars: usize,
    pub unmodified: usize,
    pub final_char_rules: usize,
    pub optimizations: usize,
}

/// Immutable Greek stemming rules, one trie per rule file.
#[derive(Debug, Clone)]
pub struct GreekRuleSet {
    /// keyed by reversed suffix
    pub(crate) suffixes: Trie<SuffixKind>,
    pub(crate) prefixes: Trie<String>,
    pub(crate) irregulars: Trie<String>,
    pub(crate) unmodified: Trie<()>,
    pub(crate) final_chars: Vec<FinalCharRule>,
    /// keyed by reversed stem ending
    pub(crate) optimizations: Trie<String>,
}

impl Default for GreekRuleSet {
    fn default() -> Self {
        GreekRuleSet::from_sources(&RuleSources {
            suffixes: SUFFIXES,
            prefixes: PREFIXES,
            irregulars: IRREGULARS,
            unmodified: UNMODIFIED,
            final_chars: FINAL_CHARS,
            optimizations: Some(OPTIMIZATIONS),
        })
        .expect("shipped greek rules are valid")
    }
}

/// Raw text of each rule file.
#[derive(Debug, Clone, Copy)]
pub struct RuleSources<'a> {
    pub suffixes: &'a str,
    pub prefixes: &'a str,
    pub irregulars: &'a str,
    pub unmodified: &'a str,
    pub final_chars: &'a str,
    pub optimizations: Option<&'a str>,
}

impl GreekRuleSet {
    pub fn from_sources(src: &RuleSources<'_>) -> Result<Self> {
        let mut rules = GreekRuleSet {
            suffixes: Trie::new(),
            prefixes: Trie::new(),
            irregulars: Trie::new(),
            unmodified: Trie::new(),
            final_chars: Vec::new(),
            optimizations: Trie::new(),
        };

        for (line, fields) in entries("suffixes.txt", src.suffixes, 2)? {
            let kind = match fields[1].as_str() {
                "v" => SuffixKind::Verbal,
                "n" => SuffixKind::Nominal,
                other => {
                    return Err(rule_err("suffixes.txt", line, format!("expected V or N, got {other:?}")))
                }
            };
            if rules.suffixes.insert(fields[0].chars().rev(), kind).is_some() {
                return Err(duplicate("suffixes.txt", line, &fields[0]));
            }
        }
        for (line, fields) in entries("prefixes.txt", src.prefixes, 2)? {
            let [surface, initial] = <[String; 2]>::try_from(fields).expect("arity checked");
            if rules.prefixes.insert(surface.chars(), initial).is_some() {
                return Err(duplicate("prefixes.txt", line, &surface));
            }
        }
        for (line, fields) in entries("irregulars.txt", src.irregulars, 2)? {
            let [stem, target] = <[String; 2]>::try_from(fields).expect("arity checked");
            if rules.irregulars.insert(stem.chars(), target).is_some() {
                return Err(duplicate("irregulars.txt", line, &stem));
            }
        }
        for (line, fields) in entries("unmodified.txt", src.unmodified, 1)? {
            if rules.unmodified.insert(fields[0].chars(), ()).is_some() {
                return Err(duplicate("unmodified.txt", line, &fields[0]));
            }
        }
        let mut seen_members = HashSet::new();
        for (line, fields) in entries("finalchar.txt", src.final_chars, 2)? {
            let members: Vec<String> = fields[0]
                .split(',')
                .map(str::trim)
                .filter(|m| !m.is_empty())
                .map(str::to_string)
                .collect();
            if members.is_empty() {
                return Err(rule_err("finalchar.txt", line, "empty character set".into()));
            }
            for m in &members {
                if !seen_members.insert(m.clone()) {
                    return Err(duplicate("finalchar.txt", line, m));
                }
            }
            rules.final_chars.push(FinalCharRule {
                members,
                replacement: fields[1].clone(),
            });
        }
        if let Some(text) = src.optimizations {
            for (line, fields) in entries("optimizations.txt", text, 2)? {
                let increment_len = fields[1].chars().count();
                if !(1..=2).contains(&increment_len) {
                    return Err(rule_err(
                        "optimizations.txt",
                        line,
                        "increment must be one or two letters".into(),
                    ));
                }
                if rules.optimizations.insert(fields[0].chars().rev(), fields[1].clone()).is_some() {
                    return Err(duplicate("optimizations.txt", line, &fields[0]));
                }
            }
        }
        Ok(rules)
    }

    pub fn counts(&self) -> RuleCounts {
        RuleCounts {
            suffixes: self.suffixes.len(),
            prefixes: self.prefixes.len(),
            irregulars: self.irregulars.len(),
            unmodified: self.unmodified.len(),
            final_char_rules: self.final_chars.len(),
            optimizations: self.optimizations.len(),
        }
    }
}

/// Loads `suffixes.txt`, `prefixes.txt`, `irregulars.txt`, `unmodified.txt`
/// and `finalchar.txt` from `dir`; `optimizations.txt` is optional.
pub fn load_rules(dir: &Path) -> Result<GreekRuleSet> {
    let read = |name: &str| -> Result<String> {
        let path = dir.join(name);
        if !path.exists() {
            return Err(Error::Config(format!("missing rule file {}", path.display())));
        }
        std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))
    };
    let suffixes = read("suffixes.txt")?;
    let prefixes = read("prefixes.txt")?;
    let irregulars = read("irregulars.txt")?;
    let unmodified = read("unmodified.txt")?;
    let final_chars = read("finalchar.txt")?;
    let optimizations = if dir.join("optimizations.txt").exists() {
        Some(read("optimizations.txt")?)
    } else {
        None
    };
    GreekRuleSet::from_sources(&RuleSources {
        suffixes: &suffixes,
        prefixes: &prefixes,
        irregulars: &irregulars,
        unmodified: &unmodified,
        final_chars: &final_chars,
        optimizations: optimizations.as_deref(),
    })
}

/// Non-comment lines split on tabs, normalized (lowercase, no accents,
/// medial sigma). Greek-script fields are enforced except for the V/N flag.
fn entries(file: &str, text: &str, arity: usize) -> Result<Vec<(usize, Vec<String>)>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<String> = content
            .split('\t')
            .map(|f| strip_accents(&normalize_word(f.trim())))
            .collect();
        if fields.len() != arity || fields.iter().any(String::is_empty) {
            return Err(rule_err(file, line, format!("expected {arity} tab-separated fields")));
        }
        let checked = if file == "suffixes.txt" { &fields[..1] } else { &fields[..] };
        for f in checked {
            let greek = f.chars().all(|c| is_greek_char(c) || c == ',');
            if !greek {
                return Err(rule_err(file, line, format!("non-Greek entry {f:?}")));
            }
        }
        out.push((line, fields));
    }
    Ok(out)
}

fn rule_err(file: &str, line: usize, message: String) -> Error {
    Error::RuleLoad {
        file: file.to_string(),
        line,
        message,
    }
}

fn duplicate(file: &str, line: usize, key: &str) -> Error {
    rule_err(file, line, format!("duplicate entry {key:?}"))
}
