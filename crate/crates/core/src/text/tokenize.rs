//! Word tokenizer shared by indexing, querying and excerpt selection.

/// A single token: the normalized term plus where it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub term: String,
    /// Word offset, counting tokens from 0.
    pub position: usize,
    /// Byte range of the surface form in the source text.
    pub start: usize,
    pub end: usize,
}

/// Splits `text` into maximal runs of letters and digits, lowercased, with
/// Greek final sigma folded to the medial form.
pub fn tokenize(text: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut start = 0;

    for (idx, ch) in text.char_indices() {
        if ch.is_alphanumeric() {
            if current.is_empty() {
                start = idx;
            }
            push_normalized(&mut current, ch);
        } else if !current.is_empty() {
            let position = tokens.len();
            tokens.push(Token {
                term: std::mem::take(&mut current),
                position,
                start,
                end: idx,
            });
        }
    }
    if !current.is_empty() {
        let position = tokens.len();
        tokens.push(Token {
            term: current,
            position,
            start,
            end: text.len(),
        });
    }
    tokens
}

/// Lowercases and folds final sigma for a single word.
pub fn normalize_word(word: &str) -> String {
    let mut out = String::with_capacity(word.len());
    for ch in word.chars() {
        push_normalized(&mut out, ch);
    }
    out
}

fn push_normalized(buf: &mut String, ch: char) {
    for lower in ch.to_lowercase() {
        buf.push(if lower == 'ς' { 'σ' } else { lower });
    }
}

/// True when the word contains at least one Greek-script character.
pub fn is_greek(word: &str) -> bool {
    word.chars().any(is_greek_char)
}

pub(crate) fn is_greek_char(ch: char) -> bool {
    matches!(ch, '\u{0370}'..='\u{03FF}' | '\u{1F00}'..='\u{1FFF}')
}
