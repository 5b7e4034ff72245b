//! Text pipeline shared by the indexer and the query path.
//!
//! Page content, anchor text and queries all go through [`Pipeline::normalize`]
//! so that a term written into `wordlist` is spelled exactly like the same
//! term arriving in a query.

pub mod porter;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

pub use porter::stem;

/// Tokens longer than this many characters are truncated.
pub const MAX_TOKEN_CHARS: usize = 64;

const BUNDLED_STOPWORDS: &str = include_str!("../../data/stopwords.txt");
const BUNDLED_STOPWORDS_VERSION: &str = "glasgow-318";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Content,
    Anchor,
    Query,
}

/// Ordered lowercase terms in document order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenStream {
    pub tokens: Vec<String>,
    pub source: Source,
}

impl TokenStream {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// Splits on runs of non-alphanumeric characters and lowercases.
pub fn tokenize(text: &str, source: Source) -> TokenStream {
    let tokens = text
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(|t| {
            let lower = t.to_lowercase();
            match lower.char_indices().nth(MAX_TOKEN_CHARS) {
                Some((cut, _)) => lower[..cut].to_string(),
                None => lower,
            }
        })
        .collect();
    TokenStream { tokens, source }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StopList {
    terms: HashSet<String>,
    version: String,
}

impl StopList {
    /// The standard English list with "computer" left out.
    pub fn english() -> Self {
        Self::from_lines(BUNDLED_STOPWORDS, BUNDLED_STOPWORDS_VERSION)
    }

    pub fn from_lines(text: &str, version: impl Into<String>) -> Self {
        let terms = text
            .lines()
            .map(|l| l.trim().to_lowercase())
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect();
        StopList {
            terms,
            version: version.into(),
        }
    }

    pub fn empty() -> Self {
        StopList {
            terms: HashSet::new(),
            version: "none".into(),
        }
    }

    pub fn contains(&self, term: &str) -> bool {
        self.terms.contains(term)
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    pub fn terms(&self) -> impl Iterator<Item = &str> {
        self.terms.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl Default for StopList {
    fn default() -> Self {
        Self::english()
    }
}

pub fn filter_stopwords(ts: TokenStream, stop: &StopList) -> TokenStream {
    TokenStream {
        tokens: ts.tokens.into_iter().filter(|t| !stop.contains(t)).collect(),
        source: ts.source,
    }
}

/// tokenize, drop stop words, then stem when enabled.
#[derive(Debug, Clone)]
pub struct Pipeline {
    pub stemming: bool,
    pub stop: StopList,
}

impl Pipeline {
    pub fn new(stemming: bool, stop: StopList) -> Self {
        Pipeline { stemming, stop }
    }

    pub fn normalize(&self, text: &str, source: Source) -> TokenStream {
        let mut ts = filter_stopwords(tokenize(text, source), &self.stop);
        if self.stemming {
            for t in &mut ts.tokens {
                *t = stem(t);
            }
        }
        ts
    }
}

pub fn normalize(text: &str, stemming: bool, stop: &StopList) -> TokenStream {
    Pipeline::new(stemming, stop.clone()).normalize(text, Source::Content)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(ts: &TokenStream) -> Vec<&str> {
        ts.tokens.iter().map(String::as_str).collect()
    }

    #[test]
    fn tokenize_splits_on_punctuation() {
        let ts = tokenize("Web Search-Engine!", Source::Content);
        assert_eq!(toks(&ts), ["web", "search", "engine"]);
        assert!(tokenize("", Source::Content).is_empty());
    }

    #[test]
    fn tokenize_keeps_numbers_and_truncates() {
        let long = "x".repeat(100);
        let ts = tokenize(&format!("route 66 {long}"), Source::Content);
        assert_eq!(ts.tokens[1], "66");
        assert_eq!(ts.tokens[2].chars().count(), MAX_TOKEN_CHARS);
    }

    #[test]
    fn tokenize_folds_non_ascii() {
        let ts = tokenize("ÉCOLE Straße", Source::Content);
        assert_eq!(toks(&ts), ["école", "straße"]);
    }

    #[test]
    fn stop_list_keeps_computer() {
        let sl = StopList::english();
        assert!(!sl.contains("computer"));
        for w in ["the", "and", "of"] {
            assert!(sl.contains(w));
        }
        let ts = TokenStream {
            tokens: ["the", "computer", "is", "fast"].map(String::from).to_vec(),
            source: Source::Content,
        };
        assert_eq!(toks(&filter_stopwords(ts, &sl)), ["computer", "fast"]);
    }

    #[test]
    fn stop_list_filters_itself_away() {
        let sl = StopList::english();
        let all = TokenStream {
            tokens: sl.terms().map(String::from).collect(),
            source: Source::Content,
        };
        assert!(filter_stopwords(all, &sl).is_empty());
    }

    #[test]
    fn normalize_with_and_without_stemming() {
        let sl = StopList::english();
        assert_eq!(toks(&normalize("Navigational computers", true, &sl)), ["navig", "comput"]);
        assert_eq!(
            toks(&normalize("Navigational computers", false, &sl)),
            ["navigational", "computers"]
        );
        let p = Pipeline::new(true, sl);
        assert_eq!(toks(&p.normalize("The Navigation", Source::Query)), ["navig"]);
    }
}
