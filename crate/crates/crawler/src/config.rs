use std::time::Duration;

use serde::{Deserialize, Serialize};

/// Crawl settings. Durations are plain numbers so the struct reads well in TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CrawlConfig {
    pub seeds: Vec<String>,
    pub max_depth: u32,
    /// Seconds.
    pub fetch_timeout: f64,
    /// Milliseconds between two requests to the same host.
    pub per_host_delay: u64,
    pub max_pages: Option<usize>,
    pub user_agent: String,
    pub concurrency: usize,
}

impl Default for CrawlConfig {
    fn default() -> Self {
        Self {
            seeds: Vec::new(),
            max_depth: 2,
            fetch_timeout: 10.0,
            per_host_delay: 200,
            max_pages: None,
            user_agent: format!("anchorlight/{}", env!("CARGO_PKG_VERSION")),
            concurrency: 8,
        }
    }
}

impl CrawlConfig {
    pub fn with_seeds(seeds: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Self {
            seeds: seeds.into_iter().map(Into::into).collect(),
            ..Self::default()
        }
    }

    pub fn timeout(&self) -> Duration {
        Duration::from_secs_f64(self.fetch_timeout)
    }

    pub fn delay(&self) -> Duration {
        Duration::from_millis(self.per_host_delay)
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.seeds.is_empty() {
            return Err("at least one seed URL is required".into());
        }
        if !(self.fetch_timeout.is_finite() && self.fetch_timeout > 0.0) {
            return Err(format!("fetch_timeout must be positive, got {}", self.fetch_timeout));
        }
        if self.concurrency == 0 {
            return Err("concurrency must be at least 1".into());
        }
        Ok(())
    }
}
