//! Lexical analysis: tokenization, stopword and number filtering, stemming,
//! positional recording and max-frequency tf normalization.

mod accents;
mod analyzer;
mod html;
mod stopwords;
mod tokenize;

pub use accents::strip_accents;
pub use analyzer::{analyze, process_token, Analyzer, AnalyzerConfig, AnalyzerSettings, TermMap, TermStats};
pub use html::{extract_html, sniff_type, ExtractedPage};
pub use stopwords::{StopwordList, Stopwords};
pub use tokenize::{is_greek, normalize_word, tokenize, Token};
pub(crate) use tokenize::is_greek_char;
