pub mod config;
pub mod cli;
pub mod crawl;
pub mod engine;
pub mod error;
pub mod index;
pub mod link;
pub mod organize;
pub mod present;
pub mod retrieval;
pub mod service;
pub mod stats;
pub mod stem;
pub mod text;
mod tsv;

pub use error::{Error, Result};
