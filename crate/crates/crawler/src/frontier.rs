use std::collections::HashSet;

use url::Url;

/// Layered BFS queue. Every URL ever queued stays in `seen`, so nothing is
/// queued twice.
#[derive(Debug, Default)]
pub struct Frontier {
    current: Vec<Url>,
    next: Vec<Url>,
    seen: HashSet<String>,
    depth: u32,
}

impl Frontier {
    pub fn new(seeds: impl IntoIterator<Item = Url>) -> Self {
        let mut f = Self::default();
        for s in seeds {
            if f.seen.insert(s.to_string()) {
                f.current.push(s);
            }
        }
        f
    }

    /// Depth of the current layer; seeds are at 0.
    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Queues `url` for the next layer unless it was seen before.
    pub fn offer(&mut self, url: Url) -> bool {
        let fresh = self.seen.insert(url.to_string());
        if fresh {
            self.next.push(url);
        }
        fresh
    }

    /// Takes the current layer out of the frontier.
    pub fn take_layer(&mut self) -> Vec<Url> {
        std::mem::take(&mut self.current)
    }

    /// Promotes the next layer. Returns false when it is empty.
    pub fn advance(&mut self) -> bool {
        debug_assert!(self.current.is_empty());
        self.current = std::mem::take(&mut self.next);
        self.depth += 1;
        !self.current.is_empty()
    }

    pub fn seen_count(&self) -> usize {
        self.seen.len()
    }

    pub fn current(&self) -> &[Url] {
        &self.current
    }

    pub fn next(&self) -> &[Url] {
        &self.next
    }

    pub fn has_seen(&self, url: &Url) -> bool {
        self.seen.contains(url.as_str())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(s: &str) -> Url {
        Url::parse(s).unwrap()
    }

    #[test]
    fn duplicate_seeds_collapse() {
        let f = Frontier::new([u("http://a/"), u("http://a/"), u("http://b/")]);
        assert_eq!(f.current().len(), 2);
        assert_eq!(f.seen_count(), 2);
    }

    #[test]
    fn cycles_terminate() {
        let mut f = Frontier::new([u("http://a/")]);
        let mut layers = 0;
        loop {
            for _ in f.take_layer() {
                f.offer(u("http://a/"));
                f.offer(u("http://b/"));
            }
            layers += 1;
            if !f.advance() {
                break;
            }
        }
        assert_eq!(layers, 2);
        assert_eq!(f.seen_count(), 2);
    }

    #[test]
    fn layers_are_disjoint() {
        let mut f = Frontier::new([u("http://a/")]);
        assert!(!f.offer(u("http://a/")));
        assert!(f.offer(u("http://b/")));
        assert!(f.current().iter().all(|c| !f.next().contains(c)));
        assert!(f.current().iter().chain(f.next()).all(|x| f.has_seen(x)));
    }
}
