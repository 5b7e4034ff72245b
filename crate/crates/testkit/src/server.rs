//! A local HTTP server that serves a [`Site`] and counts requests.

use std::collections::BTreeMap;
use std::net::SocketAddr;
use std::sync::{Arc, Mutex};
use std::thread::JoinHandle;

use axum::body::Body;
use axum::extract::State;
use axum::http::{header, StatusCode, Uri};
use axum::response::Response;
use axum::Router;
use tokio::sync::oneshot;

use crate::site::{Fault, Site};

#[derive(Clone)]
struct Shared {
    site: Arc<Site>,
    hits: Arc<Mutex<BTreeMap<String, usize>>>,
}

/// Runs on its own thread and runtime, so both sync and async tests can
/// use it. Shuts down on drop.
pub struct FixtureServer {
    addr: SocketAddr,
    hits: Arc<Mutex<BTreeMap<String, usize>>>,
    shutdown: Option<oneshot::Sender<()>>,
    thread: Option<JoinHandle<()>>,
}

impl FixtureServer {
    pub fn start(site: Site) -> Self {
        let shared = Shared {
            site: Arc::new(site),
            hits: Arc::new(Mutex::new(BTreeMap::new())),
        };
        let hits = shared.hits.clone();
        let (tx, rx) = oneshot::channel::<()>();
        let (addr_tx, addr_rx) = std::sync::mpsc::channel();
        let thread = std::thread::spawn(move || {
            let rt = tokio::runtime::Builder::new_multi_thread()
                .worker_threads(2)
                .enable_all()
                .build()
                .expect("fixture runtime");
            rt.block_on(async move {
                let listener = tokio::net::TcpListener::bind("127.0.0.1:0")
                    .await
                    .expect("bind fixture server");
                addr_tx.send(listener.local_addr().unwrap()).unwrap();
                let app = Router::new().fallback(serve).with_state(shared);
                axum::serve(listener, app)
                    .with_graceful_shutdown(async {
                        let _ = rx.await;
                    })
                    .await
                    .expect("fixture server");
            });
        });
        let addr = addr_rx.recv().expect("fixture server address");
        FixtureServer {
            addr,
            hits,
            shutdown: Some(tx),
            thread: Some(thread),
        }
    }

    pub fn base_url(&self) -> String {
        format!("http://{}", self.addr)
    }

    pub fn url(&self, path: &str) -> String {
        format!("{}{}", self.base_url(), path)
    }

    /// Requests received per path.
    pub fn hits(&self) -> BTreeMap<String, usize> {
        self.hits.lock().unwrap().clone()
    }
}

impl Drop for FixtureServer {
    fn drop(&mut self) {
        if let Some(tx) = self.shutdown.take() {
            let _ = tx.send(());
        }
        if let Some(t) = self.thread.take() {
            let _ = t.join();
        }
    }
}

const PNG: &[u8] = &[0x89, b'P', b'N', b'G', 0x0d, 0x0a, 0x1a, 0x0a, 0, 0, 0, 0];

async fn serve(State(s): State<Shared>, uri: Uri) -> Response {
    let path = uri.path().to_string();
    *s.hits.lock().unwrap().entry(path.clone()).or_default() += 1;
    let page = s.site.pages.get(&path);
    let html = |body: Body| {
        Response::builder()
            .status(StatusCode::OK)
            .header(header::CONTENT_TYPE, "text/html; charset=utf-8")
            .body(body)
            .unwrap()
    };
    match (s.site.faults.get(&path), page) {
        (Some(Fault::Status(code)), _) => Response::builder()
            .status(StatusCode::from_u16(*code).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR))
            .body(Body::from("fault"))
            .unwrap(),
        (Some(Fault::Delay(d)), p) => {
            tokio::time::sleep(*d).await;
            html(Body::from(p.map(|p| p.html()).unwrap_or_default()))
        }
        (Some(Fault::BadEncoding), _) => {
            let mut bytes = b"<html><body><p>broken ".to_vec();
            bytes.extend_from_slice(&[0xff, 0xfe, 0xc3, 0x28, 0xa0, 0xa1]);
            bytes.extend_from_slice(b" text</p></body></html>");
            html(Body::from(bytes))
        }
        (Some(Fault::NonHtml), _) => Response::builder()
            .status(StatusCode::OK)
            .header(header::CONTENT_TYPE, "image/png")
            .body(Body::from(PNG))
            .unwrap(),
        (None, Some(p)) => html(Body::from(p.html())),
        (None, None) => Response::builder()
            .status(StatusCode::NOT_FOUND)
            .body(Body::from("not found"))
            .unwrap(),
    }
}
