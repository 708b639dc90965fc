//! Query parsing, the retrieval models and spelling suggestions.

mod models;
mod query;
mod spell;

pub use models::{candidate_universe, evaluate, ScoredResult, COSINE_WEIGHT, P_NORM, RANK_WEIGHT};
pub use query::{Model, Query, QueryNode, QueryWord};
pub use spell::{edit_distance, suggest_from, suggest_terms, Suggestion, DEFAULT_MAX_DISTANCE, DEFAULT_SUGGESTIONS};
