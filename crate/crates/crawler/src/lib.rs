//! Breadth-first crawler: fetch, extract, index, repeat.

pub mod config;
pub mod crawl;
pub mod extract;
pub mod frontier;
pub mod report;
pub mod urls;

pub use config::CrawlConfig;
pub use crawl::{crawl, CrawlError, Crawler, IndexHook};
pub use extract::{extract, Extracted};
pub use frontier::Frontier;
pub use report::{CrawlReport, FetchOutcome, FetchStatus};
pub use urls::normalize_url;
