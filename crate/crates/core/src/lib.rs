//! Core of the anchorlight search engine: the on-disk index, the text
//! pipeline, offline link analysis and the weighted query engine.

pub mod analysis;
pub mod error;
pub mod indexer;
pub mod query;
pub mod store;
pub mod text;

pub use error::{Error, Result};
pub use store::{IndexHandle, LinkId, PageId, Posting, ScoreTable, WordId};
