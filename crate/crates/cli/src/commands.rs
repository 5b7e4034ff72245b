use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use anchorlight_core::analysis::{analyze, AnalysisStep, AnalyzeOptions, DegreeWeight, UnitWeight};
use anchorlight_core::query::{search, SearchResponse};
use anchorlight_core::{IndexHandle, ScoreTable};
use anchorlight_crawler::{CrawlError, Crawler};
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

use crate::config::AppConfig;
use crate::error::AppError;
use crate::request::SearchParams;
use crate::server;

#[derive(Debug, Parser)]
#[command(name = "anchorlight", version, about = "Crawl, analyze and search a small web index")]
pub struct Cli {
    /// Config file (default: ./anchorlight.toml when present).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Log progress to stderr; repeat for more detail.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Crawl breadth-first from seed URLs into the index.
    Crawl(CrawlArgs),
    /// Compute page lengths, PageRank, HITS and the hot indexes.
    Analyze(AnalyzeArgs),
    /// Run one query.
    Search(SearchArgs),
    /// Serve the JSON API (and the UI bundle, if configured).
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct CrawlArgs {
    /// Seed URL; repeatable.
    #[arg(long = "seed", value_name = "URL")]
    pub seeds: Vec<String>,
    #[arg(long)]
    pub depth: Option<u32>,
    #[arg(long, value_name = "PATH")]
    pub index: Option<PathBuf>,
    #[arg(long)]
    pub max_pages: Option<usize>,
    /// Fetch timeout in seconds.
    #[arg(long)]
    pub timeout: Option<f64>,
    /// Delay between requests to one host, in milliseconds.
    #[arg(long)]
    pub delay: Option<u64>,
    #[arg(long)]
    pub concurrency: Option<usize>,
    #[arg(long)]
    pub user_agent: Option<String>,
    /// Index unstemmed terms (only on a new, empty index).
    #[arg(long)]
    pub no_stemming: bool,
    /// Reject the index write for this URL, as if storage failed.
    #[arg(long, hide = true, value_name = "URL")]
    pub inject_index_fault: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightHook {
    Unit,
    Degree,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long, value_name = "PATH")]
    pub index: Option<PathBuf>,
    /// Step to leave out: lengths, pagerank, hits, weighted, hot-indexes.
    #[arg(long, value_name = "STEP")]
    pub skip: Vec<AnalysisStep>,
    /// Node weights for the weighted PageRank/HITS variants.
    #[arg(long, value_enum, default_value = "degree")]
    pub weight_hook: WeightHook,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long, alias = "query")]
    pub q: Option<String>,
    /// Scorer weight as name=value; repeatable.
    #[arg(long = "w", value_name = "NAME=VALUE")]
    pub weights: Vec<String>,
    #[arg(long)]
    pub preset: Option<String>,
    /// Anchor scheme 1..=4.
    #[arg(long)]
    pub scheme: Option<String>,
    /// qd (all scorers) or qi (precomputed scorers only).
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long)]
    pub limit: Option<String>,
    /// Print the JSON document served by /api/search.
    #[arg(long)]
    pub json: bool,
    /// Check the stored scores for consistency.
    #[arg(long)]
    pub check: bool,
    #[arg(long, value_name = "PATH")]
    pub index: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, value_name = "PATH")]
    pub index: Option<PathBuf>,
    #[arg(long)]
    pub bind: Option<String>,
    /// 0 picks a free port.
    #[arg(long)]
    pub port: Option<u16>,
    #[arg(long, value_name = "DIR")]
    pub static_dir: Option<PathBuf>,
}

/// Runs a parsed command line, writing results to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), AppError> {
    let cfg = AppConfig::load(cli.config.as_deref()).map_err(|e| AppError::usage(format!("config: {e}")))?;
    match cli.command {
        Command::Crawl(a) => cmd_crawl(cfg, a, out),
        Command::Analyze(a) => cmd_analyze(cfg, a, out),
        Command::Search(a) => cmd_search(cfg, a, out),
        Command::Serve(a) => cmd_serve(cfg, a),
    }
}

fn usage_for(sub: &str, message: &str) -> AppError {
    let mut cmd = Cli::command();
    let usage = cmd
        .find_subcommand_mut(sub)
        .map(|c| c.render_usage().to_string())
        .unwrap_or_default();
    AppError::usage(format!("{message}\n\n{usage}"))
}

fn write_line(out: &mut dyn Write, s: &str) -> Result<(), AppError> {
    writeln!(out, "{s}").map_err(|e| AppError::runtime(format!("writing output: {e}")))
}

pub fn cmd_crawl(cfg: AppConfig, a: CrawlArgs, out: &mut dyn Write) -> Result<(), AppError> {
    let mut crawl = cfg.crawl;
    if !a.seeds.is_empty() {
        crawl.seeds = a.seeds;
    }
    if crawl.seeds.is_empty() {
        return Err(usage_for("crawl", "crawl needs at least one --seed (or crawl.seeds in the config file)"));
    }
    crawl.max_depth = a.depth.unwrap_or(crawl.max_depth);
    crawl.max_pages = a.max_pages.or(crawl.max_pages);
    crawl.fetch_timeout = a.timeout.unwrap_or(crawl.fetch_timeout);
    crawl.per_host_delay = a.delay.unwrap_or(crawl.per_host_delay);
    crawl.concurrency = a.concurrency.unwrap_or(crawl.concurrency);
    if let Some(ua) = a.user_agent {
        crawl.user_agent = ua;
    }
    let mut crawler = Crawler::new(crawl).map_err(|e| match e {
        CrawlError::Config(m) => usage_for("crawl", &m),
        other => AppError::runtime(other.to_string()),
    })?;
    if !a.inject_index_fault.is_empty() {
        let targets: BTreeSet<String> = a.inject_index_fault.into_iter().collect();
        crawler = crawler.with_index_hook(move |url| {
            if targets.contains(url) {
                Err("injected index write fault".to_string())
            } else {
                Ok(())
            }
        });
    }
    let h = IndexHandle::open(a.index.unwrap_or(cfg.index), true)?;
    if a.no_stemming {
        h.set_stemming(false)?;
    }
    let report = crawler.run_blocking(&h).map_err(|e| match e {
        CrawlError::Index(e) => AppError::from(e),
        other => AppError::runtime(other.to_string()),
    })?;
    write_line(out, &report.to_json())
}

pub fn cmd_analyze(cfg: AppConfig, a: AnalyzeArgs, out: &mut dyn Write) -> Result<(), AppError> {
    let h = IndexHandle::open(a.index.unwrap_or(cfg.index), false)?;
    let opts = AnalyzeOptions {
        skip: a.skip.into_iter().collect(),
        hook: match a.weight_hook {
            WeightHook::Unit => Box::new(UnitWeight),
            WeightHook::Degree => Box::new(DegreeWeight),
        },
        ..AnalyzeOptions::default()
    };
    let report = analyze(&h, &opts)?;
    write_line(out, &serde_json::to_string_pretty(&report).expect("report serializes"))
}

/// Tolerance for the stored PageRank vector summing to one.
pub const PAGERANK_SUM_TOLERANCE: f64 = 1e-6;

fn check(h: &IndexHandle, out: &mut dyn Write) -> Result<bool, AppError> {
    let mut ok = true;
    let status = h.analysis_status()?;
    let pending = status.pending();
    if pending.is_empty() {
        write_line(out, "ok    analysis complete")?;
    } else {
        write_line(out, &format!("warn  analysis pending: {}", pending.join(", ")))?;
    }
    let pr = h.all_scores(ScoreTable::PageRank)?;
    if !pr.is_empty() {
        let sum: f64 = pr.iter().map(|(_, v, _)| v).sum();
        let pass = (sum - 1.0).abs() <= PAGERANK_SUM_TOLERANCE;
        ok &= pass;
        write_line(out, &format!("{}pagerank sum {sum:.12}", if pass { "ok    " } else { "FAIL  " }))?;
    }
    for table in [ScoreTable::AuthHits, ScoreTable::HubHits] {
        let v = h.all_scores(table)?;
        if v.is_empty() {
            continue;
        }
        let pass = v.iter().all(|(_, s, _)| s.is_finite() && *s >= 0.0);
        ok &= pass;
        write_line(out, &format!("{}{table} finite and non-negative", if pass { "ok    " } else { "FAIL  " }))?;
    }
    let fk = h.foreign_key_violations()?;
    ok &= fk == 0;
    write_line(out, &format!("{}foreign key violations: {fk}", if fk == 0 { "ok    " } else { "FAIL  " }))?;
    Ok(ok)
}

pub fn cmd_search(cfg: AppConfig, a: SearchArgs, out: &mut dyn Write) -> Result<(), AppError> {
    if a.q.is_none() && !a.check {
        return Err(usage_for("search", "search needs --q (or --check)"));
    }
    let h = IndexHandle::open_read_only(a.index.unwrap_or(cfg.index))?;
    if a.check && !check(&h, out)? {
        return Err(AppError::runtime("index check failed"));
    }
    if a.q.is_none() {
        return Ok(());
    }
    let weights = a
        .weights
        .iter()
        .map(|p| {
            p.split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or_else(|| AppError::usage(format!("--w expects name=value, got {p:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let params = SearchParams {
        q: a.q,
        weights,
        preset: a.preset,
        scheme: a.scheme,
        mode: a.mode,
        limit: a.limit,
    };
    let req = params.into_request(&cfg.preset)?;
    let resp = search(&h, &req)?;
    if a.json {
        write_line(out, &resp.to_json())
    } else {
        write_line(out, &table(&resp))
    }
}

fn table(resp: &SearchResponse) -> String {
    let mut s = format!(
        "query {:?}  mode {}  scheme {}\n",
        resp.query,
        resp.mode.as_str(),
        resp.scheme
    );
    if resp.results.is_empty() {
        s.push_str("no matches");
        return s;
    }
    s.push_str(&format!("{:>3}  {:>8}  url\n", "#", "combined"));
    for (i, r) in resp.results.iter().enumerate() {
        s.push_str(&format!("{:>3}  {:>8.4}  {}\n", i + 1, r.combined, r.url));
        let parts: Vec<String> = r.breakdown.iter().map(|(k, v)| format!("{k}={v:.4}")).collect();
        s.push_str(&format!("{:>15}{}\n", "", parts.join(" ")));
    }
    s.pop();
    s
}

pub fn cmd_serve(cfg: AppConfig, a: ServeArgs) -> Result<(), AppError> {
    let index = a.index.unwrap_or(cfg.index);
    let state = Arc::new(server::AppState::open(&index, &cfg.preset)?);
    let static_dir = a.static_dir.or(cfg.serve.static_dir);
    let addr = format!(
        "{}:{}",
        a.bind.unwrap_or(cfg.serve.bind),
        a.port.unwrap_or(cfg.serve.port)
    );
    let rt = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .map_err(|e| AppError::runtime(e.to_string()))?;
    rt.block_on(async move {
        let listener = tokio::net::TcpListener::bind(&addr)
            .await
            .map_err(|e| AppError::runtime(format!("binding {addr}: {e}")))?;
        let local = listener.local_addr().map_err(|e| AppError::runtime(e.to_string()))?;
        eprintln!("listening on http://{local}");
        let app = server::router(state, static_dir.as_deref());
        let shutdown = async {
            let _ = tokio::signal::ctrl_c().await;
        };
        server::serve(listener, app, shutdown)
            .await
            .map_err(|e| AppError::runtime(e.to_string()))
    })
}

