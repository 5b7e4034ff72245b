use std::collections::HashMap;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use anchorlight_core::indexer::index_page;
use anchorlight_core::{Error, IndexHandle};
use futures::StreamExt;
use tokio::time::sleep_until;
use url::Url;

use crate::config::CrawlConfig;
use crate::extract::{extract, is_html, Extracted};
use crate::frontier::Frontier;
use crate::report::{CrawlReport, FetchOutcome, FetchStatus};
use crate::urls::{normalize_url, parse_seed};

/// Called with the page URL just before its rows are written. Returning an
/// error rejects the page as an `index_error`.
pub type IndexHook = Arc<dyn Fn(&str) -> Result<(), String> + Send + Sync>;

#[derive(Debug, thiserror::Error)]
pub enum CrawlError {
    #[error("invalid crawl config: {0}")]
    Config(String),
    #[error("http client: {0}")]
    Client(#[from] reqwest::Error),
    #[error(transparent)]
    Index(#[from] Error),
    #[error(transparent)]
    Runtime(#[from] std::io::Error),
}

pub struct Crawler {
    cfg: CrawlConfig,
    client: reqwest::Client,
    hook: Option<IndexHook>,
    pacer: Pacer,
}

enum Fetched {
    Page { base: Url, page: Extracted },
    Failed(FetchStatus, String),
}

impl Crawler {
    pub fn new(cfg: CrawlConfig) -> Result<Self, CrawlError> {
        cfg.validate().map_err(CrawlError::Config)?;
        let client = reqwest::Client::builder()
            .user_agent(cfg.user_agent.clone())
            .timeout(cfg.timeout())
            .build()?;
        let pacer = Pacer::new(cfg.delay());
        Ok(Self {
            cfg,
            client,
            hook: None,
            pacer,
        })
    }

    pub fn with_index_hook(mut self, hook: impl Fn(&str) -> Result<(), String> + Send + Sync + 'static) -> Self {
        self.hook = Some(Arc::new(hook));
        self
    }

    pub fn config(&self) -> &CrawlConfig {
        &self.cfg
    }

    /// Blocking wrapper around [`Crawler::run`] on a private runtime.
    pub fn run_blocking(&self, h: &IndexHandle) -> Result<CrawlReport, CrawlError> {
        let rt = tokio::runtime::Builder::new_current_thread().enable_all().build()?;
        rt.block_on(self.run(h))
    }

    /// Breadth-first crawl to `max_depth`. Page-level failures land in the
    /// report; only index-level errors end the crawl early.
    pub async fn run(&self, h: &IndexHandle) -> Result<CrawlReport, CrawlError> {
        let start = Instant::now();
        let pipeline = h.meta()?.pipeline();
        let mut report = CrawlReport::default();
        let mut seeds = Vec::new();
        for raw in &self.cfg.seeds {
            match parse_seed(raw) {
                Some(u) => seeds.push(u),
                None => report.record(&FetchOutcome {
                    url: raw.clone(),
                    status: FetchStatus::FetchError,
                    page_id: None,
                    out_links: Vec::new(),
                    detail: Some("not an absolute http(s) URL".into()),
                }),
            }
        }
        let mut frontier = Frontier::new(seeds);
        let mut budget = self.cfg.max_pages.unwrap_or(usize::MAX);

        loop {
            let depth = frontier.depth();
            let expand = depth < self.cfg.max_depth;
            let mut to_fetch = Vec::new();
            for url in frontier.take_layer() {
                match h.url_id(url.as_str())? {
                    Some(id) if h.is_indexed(url.as_str())? => {
                        report.skipped += 1;
                        if expand {
                            for target in h.out_link_urls(id)? {
                                if let Ok(t) = Url::parse(&target) {
                                    frontier.offer(t);
                                }
                            }
                        }
                    }
                    _ => to_fetch.push(url),
                }
            }
            if to_fetch.len() > budget {
                to_fetch.truncate(budget);
            }
            budget -= to_fetch.len();
            if !to_fetch.is_empty() {
                report.max_depth_reached = depth;
            }
            tracing::info!(depth, pages = to_fetch.len(), "crawling layer");

            let mut fetches = futures::stream::iter(to_fetch.into_iter().map(|u| async move {
                let fetched = self.fetch(&u).await;
                (u, fetched)
            }))
            .buffered(self.cfg.concurrency);

            while let Some((url, fetched)) = fetches.next().await {
                let outcome = self.store(h, &url, fetched, &pipeline)?;
                if outcome.status == FetchStatus::Ok {
                    tracing::debug!(url = %url, links = outcome.out_links.len(), "indexed");
                } else {
                    tracing::warn!(url = %url, status = %outcome.status, detail = ?outcome.detail, "page skipped");
                }
                if expand {
                    for (target, _) in &outcome.out_links {
                        if let Ok(t) = Url::parse(target) {
                            frontier.offer(t);
                        }
                    }
                }
                report.record(&outcome);
            }
            drop(fetches);
            if budget == 0 || !expand || !frontier.advance() {
                break;
            }
        }
        report.duration_ms = start.elapsed().as_millis() as u64;
        Ok(report)
    }

    fn store(
        &self,
        h: &IndexHandle,
        url: &Url,
        fetched: Fetched,
        pipeline: &anchorlight_core::text::Pipeline,
    ) -> Result<FetchOutcome, CrawlError> {
        let mut outcome = FetchOutcome {
            url: url.to_string(),
            status: FetchStatus::Ok,
            page_id: None,
            out_links: Vec::new(),
            detail: None,
        };
        let (base, page) = match fetched {
            Fetched::Page { base, page } => (base, page),
            Fetched::Failed(status, detail) => {
                outcome.status = status;
                outcome.detail = Some(detail);
                return Ok(outcome);
            }
        };
        // links were resolved against the final URL; re-resolving is a no-op
        debug_assert!(page.links.iter().all(|(t, _)| normalize_url(&base, t).is_some()));
        let written = h.in_transaction(|h| {
            if let Some(hook) = &self.hook {
                hook(url.as_str()).map_err(Error::PageRejected)?;
            }
            index_page(h, url.as_str(), &page.text, &page.links, pipeline)
        });
        match written {
            Ok(id) => {
                outcome.page_id = Some(id);
                outcome.out_links = page.links;
            }
            Err(e) if e.is_index_level() => return Err(e.into()),
            Err(e) => {
                outcome.status = FetchStatus::IndexError;
                outcome.detail = Some(e.to_string());
            }
        }
        Ok(outcome)
    }

    async fn fetch(&self, url: &Url) -> Fetched {
        self.pacer.wait(url).await;
        let resp = match self.client.get(url.clone()).send().await {
            Ok(r) => r,
            Err(e) => return failed_request(e),
        };
        let status = resp.status();
        if !status.is_success() {
            return Fetched::Failed(FetchStatus::HttpError(status.as_u16()), status.to_string());
        }
        let base = resp.url().clone();
        let content_type = resp
            .headers()
            .get(reqwest::header::CONTENT_TYPE)
            .and_then(|v| v.to_str().ok())
            .map(str::to_string);
        let body = match resp.bytes().await {
            Ok(b) => b,
            Err(e) => return failed_request(e),
        };
        if !is_html(content_type.as_deref(), &body) {
            let ct = content_type.unwrap_or_else(|| "undeclared".into());
            return Fetched::Failed(FetchStatus::NonHtml, ct);
        }
        match extract(&body, content_type.as_deref(), &base) {
            Ok(page) => Fetched::Page { base, page },
            Err(e) => Fetched::Failed(FetchStatus::DecodeError, e.to_string()),
        }
    }
}

fn failed_request(e: reqwest::Error) -> Fetched {
    let status = if e.is_timeout() {
        FetchStatus::Timeout
    } else {
        FetchStatus::FetchError
    };
    // the Display of reqwest errors omits the underlying cause
    let mut detail = e.to_string();
    let mut source = std::error::Error::source(&e);
    while let Some(s) = source {
        detail.push_str(": ");
        detail.push_str(&s.to_string());
        source = s.source();
    }
    Fetched::Failed(status, detail)
}

/// Spaces requests to the same host at least `delay` apart.
struct Pacer {
    delay: Duration,
    next: Mutex<HashMap<String, tokio::time::Instant>>,
}

impl Pacer {
    fn new(delay: Duration) -> Self {
        Self {
            delay,
            next: Mutex::new(HashMap::new()),
        }
    }

    async fn wait(&self, url: &Url) {
        if self.delay.is_zero() {
            return;
        }
        let key = format!("{}:{}", url.host_str().unwrap_or(""), url.port_or_known_default().unwrap_or(0));
        let slot = {
            let mut next = self.next.lock().expect("pacer lock");
            let now = tokio::time::Instant::now();
            let slot = next.get(&key).copied().filter(|t| *t > now).unwrap_or(now);
            next.insert(key, slot + self.delay);
            slot
        };
        sleep_until(slot).await;
    }
}

/// Crawls with `cfg` into `h`, blocking the calling thread.
pub fn crawl(h: &IndexHandle, cfg: CrawlConfig) -> Result<CrawlReport, CrawlError> {
    Crawler::new(cfg)?.run_blocking(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[tokio::test(start_paused = true)]
    async fn pacer_spaces_same_host() {
        let p = Pacer::new(Duration::from_millis(200));
        let a = Url::parse("http://h/1").unwrap();
        let b = Url::parse("http://other/").unwrap();
        let t0 = tokio::time::Instant::now();
        p.wait(&a).await;
        p.wait(&b).await;
        assert_eq!(t0.elapsed(), Duration::ZERO);
        p.wait(&a).await;
        p.wait(&a).await;
        assert_eq!(t0.elapsed(), Duration::from_millis(400));
    }

    #[test]
    fn invalid_config_is_refused() {
        assert!(matches!(Crawler::new(CrawlConfig::default()), Err(CrawlError::Config(_))));
    }
}
