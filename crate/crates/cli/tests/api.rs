mod common;

use std::path::Path;
use std::thread;

use anchorlight_core::query::{build_candidates, order_by_score, score_bm25, Bm25Params, Query};
use anchorlight_core::IndexHandle;
use common::{fixture_index, run_in, stdout, TestServer};

const GOLDEN: &str = "tests/golden/search_navigation_bm25.json";

fn golden_path() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join(GOLDEN)
}

#[test]
fn search_matches_golden_file_and_bm25_order() {
    let dir = tempfile::tempdir().unwrap();
    let ix = fixture_index(dir.path(), true);
    let server = TestServer::start(&ix, None);
    let (status, body) = server.get("/api/search?q=navigation&w.bm25=1");
    assert_eq!(status, 200);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(golden_path(), format!("{body}\n")).unwrap();
    }
    let golden = std::fs::read_to_string(golden_path()).unwrap();
    assert_eq!(body, golden.trim_end());

    let v: serde_json::Value = serde_json::from_str(&body).unwrap();
    assert_eq!(v["query"], "navigation");
    assert_eq!(v["mode"], "qd");
    assert_eq!(v["scheme"], 4);
    assert_eq!(v["weights"], serde_json::json!({"bm25": 1.0}));

    let h = IndexHandle::open_read_only(&ix).unwrap();
    let cs = build_candidates(&h, &Query::parse(&h, "navigation").unwrap()).unwrap();
    let expected: Vec<String> = order_by_score(&score_bm25(&h, &cs, Bm25Params::default()).unwrap(), false)
        .into_iter()
        .take(10)
        .map(|p| h.url_of(p).unwrap().unwrap())
        .collect();
    let got: Vec<String> = v["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["url"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(got, expected);
    for r in v["results"].as_array().unwrap() {
        assert_eq!(r["breakdown"]["bm25"], r["combined"]);
    }
}

#[test]
fn cli_json_is_byte_identical_to_the_api() {
    let dir = tempfile::tempdir().unwrap();
    let ix = fixture_index(dir.path(), true);
    let server = TestServer::start(&ix, None);
    let cases: [(&str, &[&str]); 4] = [
        ("q=navigation&w.bm25=1", &["--q", "navigation", "--w", "bm25=1"]),
        ("q=good+page", &["--q", "good page"]),
        (
            "q=celestial%20navigation&w.anchor=2&w.pagerank=0.5&scheme=2&limit=3",
            &["--q", "celestial navigation", "--w", "anchor=2", "--w", "pagerank=0.5", "--scheme", "2", "--limit", "3"],
        ),
        ("q=ship&mode=qi&preset=link-structure", &["--q", "ship", "--mode", "qi", "--preset", "link-structure"]),
    ];
    for (qs, args) in cases {
        let (status, body) = server.get(&format!("/api/search?{qs}"));
        assert_eq!(status, 200, "{qs}: {body}");
        let mut all = vec!["search", "--json", "--index", ix.to_str().unwrap()];
        all.extend_from_slice(args);
        let out = run_in(dir.path(), &all);
        assert!(out.status.success());
        assert_eq!(stdout(&out), format!("{body}\n"), "{qs}");
    }
}

#[test]
fn bad_requests_get_400_and_unanswerable_ones_422() {
    let dir = tempfile::tempdir().unwrap();
    let ix = fixture_index(dir.path(), false);
    let server = TestServer::start(&ix, None);
    for (qs, status, code) in [
        ("", 400, "BadRequest"),
        ("?w.bm25=1", 400, "BadRequest"),
        ("?q=ship&w.bm25=abc", 400, "InvalidScorerWeight"),
        ("?q=ship&w.bogus=1", 400, "UnknownScorer"),
        ("?q=ship&scheme=9", 400, "InvalidScheme"),
        ("?q=ship&color=red", 400, "BadRequest"),
        ("?q=the+and&w.bm25=1", 422, "EmptyQuery"),
        ("?q=ship&w.authority=1", 422, "NeedsAnalysis"),
    ] {
        let (got, body) = server.get(&format!("/api/search{qs}"));
        assert_eq!(got, status, "{qs}: {body}");
        let v: serde_json::Value = serde_json::from_str(&body).unwrap();
        assert_eq!(v["error"]["code"], code, "{qs}");
        assert!(!v["error"]["message"].as_str().unwrap().is_empty());
    }
}

#[test]
fn meta_reports_pending_analysis() {
    let dir = tempfile::tempdir().unwrap();
    let ix = fixture_index(dir.path(), false);
    let server = TestServer::start(&ix, None);
    let (status, body) = server.get("/api/meta");
    assert_eq!(status, 200);
    let v: serde_json::Value = serde_json::from_str(&body).unwrap();
    assert_eq!(v["pages"], 10);
    assert_eq!(v["indexed_pages"], 9);
    assert_eq!(v["stemming"], true);
    assert_eq!(v["analysis"]["pagerank"], false);
    assert_eq!(v["pending"].as_array().unwrap().len(), 5);
    let scorers = v["scorers"].as_array().unwrap();
    assert_eq!(scorers.len(), 11);
    let anchor = scorers.iter().find(|s| s["name"] == "anchor").unwrap();
    assert_eq!(anchor["default_weight"], 2.0);
    assert_eq!(v["default_scheme"], 4);
    assert!(v["presets"]["content"]["bm25"].is_number());
    drop(server);

    let dir = tempfile::tempdir().unwrap();
    let ix = fixture_index(dir.path(), true);
    let server = TestServer::start(&ix, None);
    let v: serde_json::Value = serde_json::from_str(&server.get("/api/meta").1).unwrap();
    assert_eq!(v["pending"].as_array().unwrap().len(), 0);
}

#[test]
fn root_serves_placeholder_or_bundle() {
    let dir = tempfile::tempdir().unwrap();
    let ix = fixture_index(dir.path(), true);
    let server = TestServer::start(&ix, None);
    let (status, body) = server.get("/");
    assert_eq!(status, 200);
    assert!(body.contains("/api/meta"));
    assert_eq!(server.get("/nowhere").0, 404);
    drop(server);

    let web = dir.path().join("web");
    std::fs::create_dir(&web).unwrap();
    std::fs::write(web.join("index.html"), "<p>bundle</p>").unwrap();
    std::fs::write(web.join("app.js"), "console.log(1)").unwrap();
    let server = TestServer::start(&ix, Some(&web));
    assert_eq!(server.get("/"), (200, "<p>bundle</p>".to_string()));
    assert_eq!(server.get("/app.js").1, "console.log(1)");
    assert_eq!(server.get("/api/meta").0, 200);
}

#[test]
fn serving_never_writes_the_index() {
    let dir = tempfile::tempdir().unwrap();
    let ix = fixture_index(dir.path(), true);
    // fold the WAL into the main file so only real writes could change it
    drop(IndexHandle::open(&ix, false).unwrap());
    let before = std::fs::read(&ix).unwrap();
    let server = TestServer::start(&ix, None);
    let base = server.base.clone();
    let handles: Vec<_> = (0..8)
        .map(|i| {
            let base = base.clone();
            thread::spawn(move || {
                let q = ["navigation", "ship", "good page", "compass"][i % 4];
                (0..10)
                    .map(|_| {
                        let r = reqwest::blocking::get(format!("{base}/api/search?q={q}")).unwrap();
                        assert_eq!(r.status().as_u16(), 200);
                        r.text().unwrap()
                    })
                    .collect::<Vec<_>>()
            })
        })
        .collect();
    for h in handles {
        let bodies = h.join().unwrap();
        assert!(bodies.windows(2).all(|w| w[0] == w[1]));
    }
    server.get("/api/meta");
    drop(server);
    assert_eq!(std::fs::read(&ix).unwrap(), before);
}

#[test]
fn serve_binary_answers_on_an_ephemeral_port() {
    use std::io::{BufRead, BufReader};
    use std::process::{Command, Stdio};

    let dir = tempfile::tempdir().unwrap();
    let ix = fixture_index(dir.path(), true);
    let mut child = Command::new(common::bin())
        .args(["serve", "--port", "0", "--index", ix.to_str().unwrap()])
        .current_dir(dir.path())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut line = String::new();
    BufReader::new(child.stderr.take().unwrap()).read_line(&mut line).unwrap();
    let base = line.trim().strip_prefix("listening on ").expect(&line).to_string();
    let resp = reqwest::blocking::get(format!("{base}/api/search?q=navigation&w.bm25=1")).unwrap();
    let status = resp.status().as_u16();
    let body = resp.text().unwrap();
    child.kill().unwrap();
    child.wait().unwrap();
    assert_eq!(status, 200);
    assert_eq!(body, std::fs::read_to_string(golden_path()).unwrap().trim_end());
}

#[test]
fn serve_refuses_a_missing_index() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["serve", "--index", "nope.db", "--port", "0"]);
    assert_eq!(out.status.code(), Some(1));
}
