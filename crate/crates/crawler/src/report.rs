use std::collections::BTreeMap;
use std::fmt;

use anchorlight_core::PageId;
use serde::{Deserialize, Serialize};

/// How one fetch ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FetchStatus {
    Ok,
    HttpError(u16),
    Timeout,
    FetchError,
    DecodeError,
    NonHtml,
    IndexError,
}

impl FetchStatus {
    pub fn name(self) -> &'static str {
        match self {
            FetchStatus::Ok => "ok",
            FetchStatus::HttpError(_) => "http_error",
            FetchStatus::Timeout => "timeout",
            FetchStatus::FetchError => "fetch_error",
            FetchStatus::DecodeError => "decode_error",
            FetchStatus::NonHtml => "non_html",
            FetchStatus::IndexError => "index_error",
        }
    }
}

impl fmt::Display for FetchStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FetchStatus::HttpError(code) => write!(f, "http_error({code})"),
            other => f.write_str(other.name()),
        }
    }
}

/// Result of fetching and indexing one URL.
#[derive(Debug, Clone, PartialEq)]
pub struct FetchOutcome {
    pub url: String,
    pub status: FetchStatus,
    pub page_id: Option<PageId>,
    pub out_links: Vec<(String, String)>,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub url: String,
    pub status: String,
    pub detail: String,
}

/// Summary printed by `anchorlight crawl`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrawlReport {
    pub pages_ok: usize,
    pub pages_failed: BTreeMap<String, usize>,
    pub http_errors: BTreeMap<u16, usize>,
    /// URLs already indexed before this crawl.
    pub skipped: usize,
    pub max_depth_reached: u32,
    pub duration_ms: u64,
    pub failures: Vec<Failure>,
}

impl CrawlReport {
    pub fn record(&mut self, outcome: &FetchOutcome) {
        match outcome.status {
            FetchStatus::Ok => self.pages_ok += 1,
            status => {
                *self.pages_failed.entry(status.name().to_string()).or_default() += 1;
                if let FetchStatus::HttpError(code) = status {
                    *self.http_errors.entry(code).or_default() += 1;
                }
                self.failures.push(Failure {
                    url: outcome.url.clone(),
                    status: status.to_string(),
                    detail: outcome.detail.clone().unwrap_or_default(),
                });
            }
        }
    }

    pub fn failed_total(&self) -> usize {
        self.pages_failed.values().sum()
    }

    pub fn failed(&self, status: &str) -> usize {
        self.pages_failed.get(status).copied().unwrap_or(0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
