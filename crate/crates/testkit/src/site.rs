//! Synthetic sites with a known link graph, and the BFS reference over them.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::FixturePage;

/// How the fixture server misbehaves for one path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Fault {
    Status(u16),
    /// Sleeps this long before answering.
    Delay(Duration),
    /// Claims UTF-8 but sends invalid bytes.
    BadEncoding,
    /// Serves a PNG instead of HTML.
    NonHtml,
}

#[derive(Debug, Clone, Default)]
pub struct Site {
    pub pages: BTreeMap<String, FixturePage>,
    pub faults: BTreeMap<String, Fault>,
}

impl Site {
    pub fn from_pages(pages: Vec<FixturePage>) -> Self {
        Site {
            pages: pages.into_iter().map(|p| (p.path.clone(), p)).collect(),
            faults: BTreeMap::new(),
        }
    }

    pub fn encyclopedia() -> Self {
        Site::from_pages(crate::corpus::encyclopedia())
    }

    /// `n` pages under `/p/<i>`. Page 0 links to pages 1..=3, every page
    /// also links to `out` random pages, so cycles are common.
    pub fn random(n: usize, out: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pages = Vec::with_capacity(n);
        for i in 0..n {
            let mut targets = BTreeSet::new();
            if i == 0 {
                for t in 1..n.min(4) {
                    targets.insert(t);
                }
            }
            for _ in 0..out {
                targets.insert(rng.gen_range(0..n));
            }
            let links: Vec<(String, String)> = targets
                .into_iter()
                .map(|t| (format!("/p/{t}"), format!("topic {t} page")))
                .collect();
            pages.push(FixturePage {
                path: format!("/p/{i}"),
                title: format!("Page {i}"),
                body: format!("Synthetic page number {i} about topic{} and item{}.", i % 7, i % 11),
                links,
            });
        }
        Site::from_pages(pages)
    }

    /// A tree in which every page has `branching` children, `depth` levels
    /// below the root, and every child links back to the root.
    pub fn tree(branching: usize, depth: usize) -> Self {
        let mut pages = Vec::new();
        let mut level = vec![0usize];
        let mut next_id = 1usize;
        let mut children: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for _ in 0..depth {
            let mut next = Vec::new();
            for &p in &level {
                for _ in 0..branching {
                    children.entry(p).or_default().push(next_id);
                    next.push(next_id);
                    next_id += 1;
                }
            }
            level = next;
        }
        for i in 0..next_id {
            let mut links: Vec<(String, String)> = children
                .get(&i)
                .map(|c| c.iter().map(|t| (format!("/p/{t}"), format!("child {t}"))).collect())
                .unwrap_or_default();
            if i != 0 {
                links.push(("/p/0".to_string(), "home".to_string()));
            }
            pages.push(FixturePage {
                path: format!("/p/{i}"),
                title: format!("Node {i}"),
                body: format!("Tree node {i}."),
                links,
            });
        }
        Site::from_pages(pages)
    }

    /// Like [`Site::random`], but the root links to every other page, so the
    /// whole site sits within one hop of `/p/0`.
    pub fn star(n: usize, out: usize, seed: u64) -> Self {
        let mut site = Site::random(n, out, seed);
        if let Some(root) = site.pages.get_mut("/p/0") {
            root.links = (1..n).map(|t| (format!("/p/{t}"), format!("topic {t} page"))).collect();
        }
        site
    }

    pub fn with_fault(mut self, path: &str, fault: Fault) -> Self {
        self.faults.insert(path.to_string(), fault);
        self
    }

    /// Hop distance of every page reachable from `seed` through served pages.
    pub fn bfs_depths(&self, seed: &str) -> BTreeMap<String, usize> {
        let mut depth = BTreeMap::new();
        let mut queue = VecDeque::new();
        depth.insert(seed.to_string(), 0);
        queue.push_back(seed.to_string());
        while let Some(p) = queue.pop_front() {
            let d = depth[&p];
            if self.faults.contains_key(&p) {
                continue;
            }
            let Some(page) = self.pages.get(&p) else { continue };
            for (t, _) in &page.links {
                if !depth.contains_key(t) {
                    depth.insert(t.clone(), d + 1);
                    queue.push_back(t.clone());
                }
            }
        }
        depth
    }

    /// Paths a crawl with `max_depth` should fetch successfully.
    pub fn reachable_ok(&self, seed: &str, max_depth: usize) -> BTreeSet<String> {
        self.bfs_depths(seed)
            .into_iter()
            .filter(|(p, d)| *d <= max_depth && self.pages.contains_key(p) && !self.faults.contains_key(p))
            .map(|(p, _)| p)
            .collect()
    }
}
