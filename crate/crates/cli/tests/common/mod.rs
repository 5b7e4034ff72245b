#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::Arc;

use anchorlight_cli::server::{self, AppState};
use anchorlight_core::analysis::{analyze, AnalyzeOptions};
use anchorlight_core::indexer::index_page;
use anchorlight_core::IndexHandle;
use anchorlight_testkit::{encyclopedia, FIXTURE_BASE};

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_anchorlight")
}

/// Runs the binary with `args` in `dir`, so no stray config file is picked up.
pub fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .current_dir(dir)
        .env_remove("RUST_LOG")
        .output()
        .expect("binary runs")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// The encyclopedia indexed under its canonical base URL, optionally analyzed.
pub fn fixture_index(dir: &Path, analyzed: bool) -> PathBuf {
    let path = dir.join("fixture.db");
    let h = IndexHandle::open(&path, true).unwrap();
    let p = h.meta().unwrap().pipeline();
    for page in encyclopedia() {
        index_page(&h, &page.url(FIXTURE_BASE), &page.text(), &page.absolute_links(FIXTURE_BASE), &p).unwrap();
    }
    if analyzed {
        analyze(&h, &AnalyzeOptions::default()).unwrap();
    }
    path
}

/// The JSON service on an ephemeral port, stopped on drop.
pub struct TestServer {
    pub base: String,
    stop: Option<tokio::sync::oneshot::Sender<()>>,
    thread: Option<std::thread::JoinHandle<()>>,
}

impl TestServer {
    pub fn start(index: &Path, static_dir: Option<&Path>) -> Self {
        let state = Arc::new(AppState::open(index, anchorlight_core::query::DEFAULT_PRESET).unwrap());
        let app = server::router(state, static_dir);
        let (tx, rx) = tokio::sync::oneshot::channel::<()>();
        let (addr_tx, addr_rx) = std::sync::mpsc::channel();
        let thread = std::thread::spawn(move || {
            let rt = tokio::runtime::Builder::new_multi_thread().enable_all().build().unwrap();
            rt.block_on(async move {
                let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
                addr_tx.send(listener.local_addr().unwrap()).unwrap();
                server::serve(listener, app, async {
                    let _ = rx.await;
                })
                .await
                .unwrap();
            });
        });
        let addr = addr_rx.recv().unwrap();
        TestServer {
            base: format!("http://{addr}"),
            stop: Some(tx),
            thread: Some(thread),
        }
    }

    pub fn get(&self, path_and_query: &str) -> (u16, String) {
        let resp = reqwest::blocking::get(format!("{}{path_and_query}", self.base)).unwrap();
        let status = resp.status().as_u16();
        (status, resp.text().unwrap())
    }
}

impl Drop for TestServer {
    fn drop(&mut self) {
        if let Some(tx) = self.stop.take() {
            let _ = tx.send(());
        }
        if let Some(t) = self.thread.take() {
            let _ = t.join();
        }
    }
}
