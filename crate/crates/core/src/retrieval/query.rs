use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::Analyzer;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Vsm,
    Boolean,
    ExtBoolean,
    Fuzzy,
    #[default]
    Hybrid,
    BlockHybrid,
}

impl Model {
    pub const ALL: [Model; 6] = [
        Model::Vsm,
        Model::Boolean,
        Model::ExtBoolean,
        Model::Fuzzy,
        Model::Hybrid,
        Model::BlockHybrid,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Model::Vsm => "vsm",
            Model::Boolean => "boolean",
            Model::ExtBoolean => "ext_boolean",
            Model::Fuzzy => "fuzzy",
            Model::Hybrid => "hybrid",
            Model::BlockHybrid => "block_hybrid",
        }
    }
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('-', "_");
        Model::ALL
            .into_iter()
            .find(|m| m.name() == key || (key == "extended_boolean" && *m == Model::ExtBoolean))
            .ok_or_else(|| Error::Query(format!("unknown model {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QueryNode {
    Term(String),
    And(Vec<QueryNode>),
    Or(Vec<QueryNode>),
    Not(Box<QueryNode>),
}

impl QueryNode {
    fn collect_terms(&self, negated: bool, positive: &mut Vec<String>, all: &mut Vec<String>) {
        match self {
            QueryNode::Term(t) => {
                all.push(t.clone());
                if !negated {
                    positive.push(t.clone());
                }
            }
            QueryNode::And(c) | QueryNode::Or(c) => {
                for n in c {
                    n.collect_terms(negated, positive, all);
                }
            }
            QueryNode::Not(c) => c.collect_terms(true, positive, all),
        }
    }
}

/// A query word as typed with what the analyzer made of it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QueryWord {
    pub surface: String,
    pub terms: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Query {
    pub ast: Option<QueryNode>,
    pub words: Vec<QueryWord>,
    pub type_filter: Option<BTreeSet<String>>,
    pub collection: Option<String>,
    pub model: Model,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Lexeme {
    Open,
    Close,
    And,
    Or,
    Not,
    Word(String),
}

fn lex(text: &str) -> Vec<Lexeme> {
    let mut out = Vec::new();
    let mut word = String::new();
    let flush = |word: &mut String, out: &mut Vec<Lexeme>| {
        if !word.is_empty() {
            out.push(match word.as_str() {
                "AND" => Lexeme::And,
                "OR" => Lexeme::Or,
                "NOT" => Lexeme::Not,
                _ => Lexeme::Word(std::mem::take(word)),
            });
            word.clear();
        }
    };
    for ch in text.chars() {
        match ch {
            '(' | ')' => {
                flush(&mut word, &mut out);
                out.push(if ch == '(' { Lexeme::Open } else { Lexeme::Close });
            }
            c if c.is_whitespace() => flush(&mut word, &mut out),
            c => word.push(c),
        }
    }
    flush(&mut word, &mut out);
    out
}

struct Parser<'a> {
    lexemes: Vec<Lexeme>,
    pos: usize,
    analyzer: &'a Analyzer,
    words: Vec<QueryWord>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Lexeme> {
        self.lexemes.get(self.pos)
    }

    fn or_expr(&mut self) -> Result<Option<QueryNode>> {
        let mut parts = vec![self.and_expr()?];
        while self.peek() == Some(&Lexeme::Or) {
            self.pos += 1;
            parts.push(self.and_expr()?);
        }
        Ok(combine(parts, QueryNode::Or))
    }

    fn and_expr(&mut self) -> Result<Option<QueryNode>> {
        let mut parts = vec![self.unary()?];
        loop {
            match self.peek() {
                Some(Lexeme::And) => {
                    self.pos += 1;
                    parts.push(self.unary()?);
                }
                Some(Lexeme::Word(_) | Lexeme::Not | Lexeme::Open) => parts.push(self.unary()?),
                _ => break,
            }
        }
        Ok(combine(parts, QueryNode::And))
    }

    fn unary(&mut self) -> Result<Option<QueryNode>> {
        let Some(lexeme) = self.lexemes.get(self.pos).cloned() else {
            return Err(Error::Query("query ends where a term was expected".into()));
        };
        self.pos += 1;
        match lexeme {
            Lexeme::Not => Ok(self.unary()?.map(|n| QueryNode::Not(Box::new(n)))),
            Lexeme::Open => {
                let inner = self.or_expr()?;
                if self.peek() != Some(&Lexeme::Close) {
                    return Err(Error::Query("missing closing parenthesis".into()));
                }
                self.pos += 1;
                Ok(inner)
            }
            Lexeme::Word(w) => {
                let terms = self.analyzer.terms(&w);
                let node = combine(terms.iter().cloned().map(|t| Some(QueryNode::Term(t))).collect(), QueryNode::And);
                self.words.push(QueryWord { surface: w, terms });
                Ok(node)
            }
            Lexeme::Close => Err(Error::Query("unexpected closing parenthesis".into())),
            Lexeme::And | Lexeme::Or => Err(Error::Query("operator without a left operand".into())),
        }
    }
}

/// Drops removed operands; a single survivor stands for itself.
fn combine(parts: Vec<Option<QueryNode>>, make: fn(Vec<QueryNode>) -> QueryNode) -> Option<QueryNode> {
    let mut parts: Vec<QueryNode> = parts.into_iter().flatten().collect();
    match parts.len() {
        0 => None,
        1 => parts.pop(),
        _ => Some(make(parts)),
    }
}

impl Query {
    /// Parses the query grammar: words (implicitly ANDed), AND, OR, NOT,
    /// parentheses, and `type:` / `collection:` filters. Words go through
    /// `analyzer`; words it drops entirely (stopwords) vanish from the tree.
    pub fn parse(text: &str, model: Model, analyzer: &Analyzer) -> Result<Query> {
        let mut types: BTreeSet<String> = BTreeSet::new();
        let mut collection = None;
        let mut lexemes = Vec::new();
        for lexeme in lex(text) {
            if let Lexeme::Word(w) = &lexeme {
                if let Some(t) = w.strip_prefix("type:") {
                    types.extend(t.split(',').filter(|s| !s.is_empty()).map(|s| s.to_ascii_lowercase()));
                    continue;
                }
                if let Some(c) = w.strip_prefix("collection:") {
                    collection = Some(c.to_string());
                    continue;
                }
            }
            lexemes.push(lexeme);
        }
        let mut parser = Parser {
            lexemes,
            pos: 0,
            analyzer,
            words: Vec::new(),
        };
        let ast = if parser.lexemes.is_empty() {
            None
        } else {
            let ast = parser.or_expr()?;
            if parser.pos != parser.lexemes.len() {
                return Err(Error::Query("unbalanced parentheses".into()));
            }
            ast
        };
        Ok(Query {
            ast,
            words: parser.words,
            type_filter: (!types.is_empty()).then_some(types),
            collection,
            model,
        })
    }

    /// Distinct terms outside any NOT, in order of appearance.
    pub fn positive_terms(&self) -> Vec<String> {
        let (positive, _) = self.term_lists();
        dedup(positive)
    }

    /// Distinct terms anywhere in the query.
    pub fn all_terms(&self) -> Vec<String> {
        let (_, all) = self.term_lists();
        dedup(all)
    }

    /// Term counts of the positive part, for bag-of-words models.
    pub fn term_counts(&self) -> Vec<(String, u32)> {
        let (positive, _) = self.term_lists();
        let mut counts: Vec<(String, u32)> = Vec::new();
        for t in positive {
            match counts.iter_mut().find(|(x, _)| *x == t) {
                Some((_, c)) => *c += 1,
                None => counts.push((t, 1)),
            }
        }
        counts
    }

    fn term_lists(&self) -> (Vec<String>, Vec<String>) {
        let mut positive = Vec::new();
        let mut all = Vec::new();
        if let Some(ast) = &self.ast {
            ast.collect_terms(false, &mut positive, &mut all);
        }
        (positive, all)
    }

    pub fn is_empty(&self) -> bool {
        self.ast.is_none()
    }
}

fn dedup(terms: Vec<String>) -> Vec<String> {
    let mut seen = BTreeSet::new();
    terms.into_iter().filter(|t| seen.insert(t.clone())).collect()
}
