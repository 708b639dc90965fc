//! Affix-removal stemmer for Greek driven by the rule files in
//! [`GreekRuleSet`].
//!
//! Pipeline: unmodified-word check, prefix separation (alternative prefix
//! chains, longest first), accent removal, longest suffix removal, then
//! either irregular-verb replacement (verbal suffixes) or root optimization
//! with last-character replacement, and finally prefix reconcatenation
//! using each prefix's initial form.

use super::rules::{GreekRuleSet, SuffixKind};
use crate::text::{is_greek, normalize_word, strip_accents};

/// Shortest remainder a prefix may leave behind.
const MIN_REMAINDER: usize = 3;
/// Shortest stem suffix removal may leave when prefixes were split off.
const MIN_PREFIXED_STEM: usize = 2;
const MAX_PREFIX_CHAIN: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StemOutcome {
    /// suffix removed, root optimized
    Stemmed,
    /// verbal stem replaced from the irregular list
    Irregular,
    /// no suffix matched; word returned as normalized
    NoSuffix,
    Unmodified,
    /// not Greek script; returned untouched
    PassThrough,
}

/// Intermediate forms of one stemming run.
#[derive(Debug, Clone, PartialEq)]
pub struct StemTrace {
    pub input: String,
    /// Prefixes as they appear in the word.
    pub split_prefixes: Vec<String>,
    /// The word after the prefixes were split off.
    pub remainder: String,
    /// Prefixes in their initial (replacement) form.
    pub initial_prefixes: Vec<String>,
    pub suffix: Option<(String, SuffixKind)>,
    pub first_stem: String,
    pub incremented_alternate: String,
    pub final_stem: String,
    pub outcome: StemOutcome,
}

impl StemTrace {
    /// Surface prefixes and remainder joined with `" - "`.
    pub fn word_split(&self) -> String {
        join_segments(&self.split_prefixes, &restore_final_sigma(&self.remainder))
    }

    /// Initial-form prefixes and the stem after suffix removal.
    pub fn prefixes_first_stem(&self) -> String {
        join_segments(&self.initial_prefixes, &self.first_stem)
    }

    /// Initial-form prefixes and the stem after irregular replacement or
    /// optimization.
    pub fn increment_alternate(&self) -> String {
        join_segments(&self.initial_prefixes, &self.incremented_alternate)
    }
}

fn join_segments(prefixes: &[String], last: &str) -> String {
    let mut parts: Vec<String> = prefixes.to_vec();
    parts.push(last.to_string());
    parts.join(" - ")
}

fn restore_final_sigma(word: &str) -> String {
    match word.strip_suffix('σ') {
        Some(head) if !head.is_empty() => format!("{head}ς"),
        _ => word.to_string(),
    }
}

/// Stems one Greek word. Non-Greek input passes through unchanged.
pub fn stem_greek(word: &str, rules: &GreekRuleSet) -> (String, StemTrace) {
    if !is_greek(word) {
        let trace = StemTrace {
            input: word.to_string(),
            split_prefixes: Vec::new(),
            remainder: word.to_string(),
            initial_prefixes: Vec::new(),
            suffix: None,
            first_stem: word.to_string(),
            incremented_alternate: word.to_string(),
            final_stem: word.to_string(),
            outcome: StemOutcome::PassThrough,
        };
        return (word.to_string(), trace);
    }

    // Prefix and suffix tries hold unaccented entries, so accents go first.
    let normalized = strip_accents(&normalize_word(word));
    let chars: Vec<char> = normalized.chars().collect();

    if rules.unmodified.contains(chars.iter().copied()) {
        let trace = StemTrace {
            input: word.to_string(),
            split_prefixes: Vec::new(),
            remainder: normalized.clone(),
            initial_prefixes: Vec::new(),
            suffix: None,
            first_stem: normalized.clone(),
            incremented_alternate: normalized.clone(),
            final_stem: normalized.clone(),
            outcome: StemOutcome::Unmodified,
        };
        return (normalized, trace);
    }

    let mut chains = Vec::new();
    prefix_chains(rules, &chars, 0, &mut Vec::new(), &mut chains);

    let mut chosen = None;
    for chain in &chains {
        let start: usize = chain.iter().map(|p| p.len).sum();
        let remainder = &chars[start..];
        let min_stem = if chain.is_empty() { 1 } else { MIN_PREFIXED_STEM };
        if let Some((suffix_len, kind)) = longest_suffix(rules, remainder, min_stem) {
            chosen = Some((chain, start, suffix_len, kind));
            break;
        }
    }

    let Some((chain, start, suffix_len, kind)) = chosen else {
        let trace = StemTrace {
            input: word.to_string(),
            split_prefixes: Vec::new(),
            remainder: normalized.clone(),
            initial_prefixes: Vec::new(),
            suffix: None,
            first_stem: normalized.clone(),
            incremented_alternate: normalized.clone(),
            final_stem: normalized.clone(),
            outcome: StemOutcome::NoSuffix,
        };
        return (normalized, trace);
    };

    let remainder: String = chars[start..].iter().collect();
    let stem_end = chars.len() - suffix_len;
    let first_stem: String = chars[start..stem_end].iter().collect();
    let suffix: String = chars[stem_end..].iter().collect();

    let irregular = match kind {
        SuffixKind::Verbal => rules.irregulars.get(first_stem.chars()).cloned(),
        SuffixKind::Nominal => None,
    };
    let (alternate, outcome) = match irregular {
        Some(replacement) => (replacement, StemOutcome::Irregular),
        None => (optimize(rules, &first_stem), StemOutcome::Stemmed),
    };

    let initial_prefixes: Vec<String> = chain.iter().map(|p| p.initial.clone()).collect();
    let final_stem = format!("{}{}", initial_prefixes.concat(), alternate);
    let trace = StemTrace {
        input: word.to_string(),
        split_prefixes: chain.iter().map(|p| p.surface.clone()).collect(),
        remainder,
        initial_prefixes,
        suffix: Some((suffix, kind)),
        first_stem,
        incremented_alternate: alternate,
        final_stem: final_stem.clone(),
        outcome,
    };
    (final_stem, trace)
}

#[derive(Debug, Clone)]
struct PrefixPart {
    surface: String,
    initial: String,
    len: usize,
}

/// Enumerates prefix decompositions depth-first, longest prefix first, each
/// chain followed by its shorter alternatives; the empty chain comes last.
fn prefix_chains(
    rules: &GreekRuleSet,
    chars: &[char],
    at: usize,
    current: &mut Vec<PrefixPart>,
    out: &mut Vec<Vec<PrefixPart>>,
) {
    if current.len() < MAX_PREFIX_CHAIN {
        let matches = rules.prefixes.prefix_matches(chars[at..].iter().copied());
        for (len, initial) in matches.into_iter().rev() {
            if chars.len() - at - len < MIN_REMAINDER {
                continue;
            }
            current.push(PrefixPart {
                surface: chars[at..at + len].iter().collect(),
                initial: initial.clone(),
                len,
            });
            prefix_chains(rules, chars, at + len, current, out);
            current.pop();
        }
    }
    out.push(current.clone());
}

/// The longest matching suffix as (length, kind), provided it leaves at
/// least `min_stem` characters.
fn longest_suffix(rules: &GreekRuleSet, word: &[char], min_stem: usize) -> Option<(usize, SuffixKind)> {
    rules
        .suffixes
        .prefix_matches(word.iter().rev().copied())
        .into_iter()
        .rev()
        .find(|(len, _)| *len < word.len())
        .filter(|(len, _)| word.len() >= len + min_stem)
        .map(|(len, kind)| (len, *kind))
}

/// Root increment (if a rule matches the stem ending) followed by
/// last-character replacement.
fn optimize(rules: &GreekRuleSet, stem: &str) -> String {
    let mut root = stem.to_string();
    if let Some((_, increment)) = rules.optimizations.prefix_matches(stem.chars().rev()).last() {
        root.push_str(increment);
    }
    replace_last(rules, &root)
}

fn replace_last(rules: &GreekRuleSet, root: &str) -> String {
    let root_len = root.chars().count();
    let best = rules
        .final_chars
        .iter()
        .flat_map(|rule| rule.members.iter().map(move |m| (m, &rule.replacement)))
        .filter(|(m, _)| root.ends_with(m.as_str()) && m.chars().count() < root_len)
        .max_by_key(|(m, _)| m.chars().count());
    match best {
        Some((member, replacement)) => {
            format!("{}{}", &root[..root.len() - member.len()], replacement)
        }
        None => root.to_string(),
    }
}
