mod common;

use std::collections::BTreeMap;
use std::net::TcpListener;

use anchorlight_core::{IndexHandle, ScoreTable};
use anchorlight_testkit::{FixtureServer, Site};
use common::{fixture_index, run_in, stderr, stdout};

#[test]
fn crawl_fixture_server() {
    let site = Site::encyclopedia();
    let expected = site.reachable_ok("/", 2).len();
    let server = FixtureServer::start(site);
    let dir = tempfile::tempdir().unwrap();
    let seed = server.url("/");
    let out = run_in(dir.path(), &["crawl", "--seed", &seed, "--depth", "2", "--index", "ix.db", "--delay", "0"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["pages_ok"], expected);
    assert!(dir.path().join("ix.db").exists());
}

#[test]
fn crawl_without_seed_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["crawl", "--index", "ix.db"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("Usage"), "{}", stderr(&out));
    let out = run_in(dir.path(), &["crawl", "--seed"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn crawl_unreachable_seed_still_succeeds() {
    let port = TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let dir = tempfile::tempdir().unwrap();
    let seed = format!("http://127.0.0.1:{port}/");
    let out = run_in(dir.path(), &["crawl", "--seed", &seed, "--index", "ix.db", "--timeout", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["pages_ok"], 0);
    assert_eq!(report["failures"].as_array().unwrap().len(), 1);
}

#[test]
fn crawl_honours_the_config_file_and_flags_win() {
    let server = FixtureServer::start(Site::tree(3, 2));
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("anchorlight.toml"),
        format!(
            "index = \"from-config.db\"\n[crawl]\nseeds = [\"{}\"]\nmax_depth = 1\nper_host_delay = 0\n",
            server.url("/p/0")
        ),
    )
    .unwrap();
    let out = run_in(dir.path(), &["crawl"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["pages_ok"], 4);
    assert!(dir.path().join("from-config.db").exists());

    let out = run_in(dir.path(), &["crawl", "--depth", "2", "--index", "flag.db"]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["pages_ok"], 13);
    assert!(dir.path().join("flag.db").exists());

    std::fs::write(dir.path().join("bad.toml"), "[crawl]\ndepth = 3\n").unwrap();
    let out = run_in(dir.path(), &["--config", "bad.toml", "crawl"]);
    assert_eq!(out.status.code(), Some(2));
}

fn all_scores(path: &std::path::Path) -> BTreeMap<&'static str, Vec<(i64, u64, Option<u64>)>> {
    let h = IndexHandle::open_read_only(path).unwrap();
    ScoreTable::ALL
        .iter()
        .map(|&t| {
            let rows = h
                .all_scores(t)
                .unwrap()
                .into_iter()
                .map(|(p, v, c)| (p.0, v.to_bits(), c.map(f64::to_bits)))
                .collect();
            (t.name(), rows)
        })
        .collect()
}

#[test]
fn analyze_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let ix = fixture_index(dir.path(), false);
    let ix = ix.to_str().unwrap();
    let out = run_in(dir.path(), &["analyze", "--index", ix]);
    assert!(out.status.success(), "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["pages"], 10);
    let pr = report["steps"].as_array().unwrap().iter().find(|s| s["step"] == "pagerank").unwrap();
    assert!(pr["convergence"]["residual"].as_f64().unwrap() < 1e-8);
    let first = all_scores(std::path::Path::new(ix));
    assert!(run_in(dir.path(), &["analyze", "--index", ix]).status.success());
    assert_eq!(all_scores(std::path::Path::new(ix)), first);
    // lengths exist only for fetched pages; graph scores cover every node
    assert_eq!(first["pagelength"].len(), 9);
    assert!(first.iter().filter(|(t, _)| **t != "pagelength").all(|(_, rows)| rows.len() == 10));
}

#[test]
fn analyze_can_skip_steps() {
    let dir = tempfile::tempdir().unwrap();
    let ix = fixture_index(dir.path(), false);
    let out = run_in(dir.path(), &["analyze", "--index", ix.to_str().unwrap(), "--skip", "hits"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let h = IndexHandle::open_read_only(&ix).unwrap();
    assert_eq!(h.score_count(ScoreTable::AuthHits).unwrap(), 0);
    assert_eq!(h.score_count(ScoreTable::HubHits).unwrap(), 0);
    assert_eq!(h.score_count(ScoreTable::PageRank).unwrap(), 10);
    assert_eq!(h.score_count(ScoreTable::PageLength).unwrap(), 9);
    let out = run_in(dir.path(), &["analyze", "--index", ix.to_str().unwrap(), "--skip", "everything"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn analyze_empty_index_fails() {
    let dir = tempfile::tempdir().unwrap();
    drop(IndexHandle::open(dir.path().join("empty.db"), true).unwrap());
    let out = run_in(dir.path(), &["analyze", "--index", "empty.db"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("nothing to analyze"), "{}", stderr(&out));
    let out = run_in(dir.path(), &["analyze", "--index", "missing.db"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn search_check_verifies_pagerank_sum() {
    let dir = tempfile::tempdir().unwrap();
    let ix = fixture_index(dir.path(), true);
    let out = run_in(dir.path(), &["search", "--check", "--index", ix.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stdout(&out));
    let text = stdout(&out);
    let line = text.lines().find(|l| l.contains("pagerank sum")).unwrap();
    assert!(line.starts_with("ok"));
    let sum: f64 = line.rsplit(' ').next().unwrap().parse().unwrap();
    assert!((sum - 1.0).abs() <= 1e-6);
}

#[test]
fn search_prints_a_table_with_breakdown() {
    let dir = tempfile::tempdir().unwrap();
    let ix = fixture_index(dir.path(), true);
    let out = run_in(dir.path(), &["search", "--index", ix.to_str().unwrap(), "--q", "navigation", "--w", "bm25=1"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines().skip(2);
    let top = lines.next().unwrap();
    assert!(top.trim_start().starts_with("1  "), "{text}");
    assert!(top.contains("1.0000"), "{text}");
    assert!(lines.next().unwrap().contains("bm25=1.0000"));
}

#[test]
fn search_usage_and_runtime_errors() {
    let dir = tempfile::tempdir().unwrap();
    let raw = fixture_index(dir.path(), false);
    let ix = raw.to_str().unwrap();
    let code = |args: &[&str]| {
        let mut all = vec!["search", "--index", ix];
        all.extend_from_slice(args);
        let o = run_in(dir.path(), &all);
        (o.status.code(), stderr(&o))
    };
    assert_eq!(code(&["--q", ""]).0, Some(2));
    assert_eq!(code(&["--q", "the of and"]).0, Some(2));
    assert_eq!(code(&[]).0, Some(2));
    assert_eq!(code(&["--q", "ship", "--w", "bm25"]).0, Some(2));
    assert_eq!(code(&["--q", "ship", "--w", "nonsense=1"]).0, Some(2));
    assert_eq!(code(&["--q", "ship", "--w", "frequency=1", "--scheme", "7"]).0, Some(2));
    assert_eq!(code(&["--q", "ship", "--w", "frequency=1", "--mode", "xx"]).0, Some(2));
    let (c, err) = code(&["--q", "ship", "--w", "authority=1"]);
    assert_eq!(c, Some(1));
    assert!(err.contains("run analyze first"), "{err}");
    assert_eq!(code(&["--q", "ship", "--w", "frequency=1"]).0, Some(0));
}
