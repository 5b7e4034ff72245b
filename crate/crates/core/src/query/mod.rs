//! Query evaluation: normalize the query, gather candidates, run every
//! weighted scorer, scale each to `[0, 1]` and rank by the weighted sum.

mod candidates;
mod scorers;
mod weights;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use candidates::{build_candidates, CandidateSet, Query};
pub use scorers::{
    anchor_bag, bm25_idf, min_alignment_distance, score_anchor, score_bm25, score_content,
    score_link, AnchorBag, Bm25Params, ContentKind, LinkKind, ScoreMap,
};
pub use weights::{
    AnchorScheme, Scorer, ScorerWeights, DEFAULT_ANCHOR_LAMBDA, DEFAULT_PRESET, PRESETS,
};

use crate::error::{Error, Result};
use crate::store::{IndexHandle, PageId};

/// Guards divisions during normalization.
pub const NORMALIZE_EPSILON: f64 = 1e-9;

/// Scales raw scores into `[0, 1]`.
///
/// Larger-is-better maps `v` to `v / max(max_v, eps)`. Smaller-is-better
/// maps `v` to `min_v / max(v, eps)`, and the minimum itself to exactly 1.0.
pub fn normalize_scores(raw: &ScoreMap, small_is_better: bool) -> ScoreMap {
    if raw.is_empty() {
        return ScoreMap::new();
    }
    if small_is_better {
        let min = raw.values().copied().fold(f64::INFINITY, f64::min);
        raw.iter()
            .map(|(&p, &v)| {
                let n = if v <= min { 1.0 } else { min / v.max(NORMALIZE_EPSILON) };
                (p, n)
            })
            .collect()
    } else {
        let max = raw.values().copied().fold(f64::NEG_INFINITY, f64::max);
        let denom = max.max(NORMALIZE_EPSILON);
        raw.iter().map(|(&p, &v)| (p, v / denom)).collect()
    }
}

/// Which scorers a query may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Mode {
    /// Every weighted scorer.
    #[default]
    #[serde(rename = "qd")]
    QueryDependent,
    /// Only scorers that can be precomputed offline.
    #[serde(rename = "qi")]
    QueryIndependent,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::QueryDependent => "qd",
            Mode::QueryIndependent => "qi",
        }
    }

    pub fn allows(self, s: Scorer) -> bool {
        match self {
            Mode::QueryDependent => true,
            Mode::QueryIndependent => !s.query_dependent(),
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "qd" => Ok(Mode::QueryDependent),
            "qi" | "qi-only" => Ok(Mode::QueryIndependent),
            other => Err(format!("unknown mode {other:?} (expected qd or qi)")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedResult {
    pub urlid: PageId,
    pub url: String,
    pub combined: f64,
    pub breakdown: BTreeMap<Scorer, f64>,
}

/// Runs one scorer and returns its normalized scores.
pub fn evaluate_scorer(
    h: &IndexHandle,
    cs: &CandidateSet,
    scorer: Scorer,
    weights: &ScorerWeights,
) -> Result<ScoreMap> {
    let (raw, small) = match scorer {
        Scorer::Frequency => (score_content(cs, ContentKind::Frequency), false),
        Scorer::Location => (score_content(cs, ContentKind::Location), true),
        Scorer::Distance => (score_content(cs, ContentKind::Distance), true),
        Scorer::Bm25 => (score_bm25(h, cs, Bm25Params::default())?, false),
        Scorer::InboundCount => (score_link(h, cs, LinkKind::InboundCount)?, false),
        Scorer::LinkText => (score_link(h, cs, LinkKind::LinkText)?, false),
        Scorer::PageRank => (score_link(h, cs, LinkKind::PageRank)?, false),
        Scorer::Authority => (score_link(h, cs, LinkKind::Authority)?, false),
        Scorer::MyAuthority => (score_link(h, cs, LinkKind::MyAuthority)?, false),
        Scorer::Length => (score_link(h, cs, LinkKind::Length)?, false),
        Scorer::Anchor => {
            let raw = score_anchor(h, cs, weights.anchor_scheme, weights.anchor_lambda)?;
            if weights.anchor_scheme == AnchorScheme::MODEL {
                // log-likelihoods become negative log-likelihoods, smaller is better
                (raw.into_iter().map(|(p, v)| (p, -v)).collect(), true)
            } else {
                (raw, false)
            }
        }
    };
    Ok(normalize_scores(&raw, small))
}

fn required_table(s: Scorer) -> Option<crate::store::ScoreTable> {
    match s {
        Scorer::Bm25 => Some(crate::store::ScoreTable::PageLength),
        Scorer::InboundCount => None,
        Scorer::LinkText => LinkKind::LinkText.table(),
        Scorer::PageRank => LinkKind::PageRank.table(),
        Scorer::Authority => LinkKind::Authority.table(),
        Scorer::MyAuthority => LinkKind::MyAuthority.table(),
        Scorer::Length => LinkKind::Length.table(),
        _ => None,
    }
}

/// Ranks every candidate for `raw_query`.
pub fn rank(
    h: &IndexHandle,
    raw_query: &str,
    weights: &ScorerWeights,
    mode: Mode,
) -> Result<Vec<RankedResult>> {
    let active: Vec<(Scorer, f64)> = weights.active().filter(|&(s, _)| mode.allows(s)).collect();
    if active.is_empty() {
        return Err(Error::InvalidScorerWeight(format!(
            "no scorer with positive weight is available in mode {mode}"
        )));
    }
    h.in_transaction(|h| {
        let q = Query::parse(h, raw_query)?;
        for &(s, _) in &active {
            if let Some(t) = required_table(s) {
                scorers::require_table(h, t)?;
            }
        }
        let cs = build_candidates(h, &q)?;
        if cs.is_empty() {
            return Ok(Vec::new());
        }
        let mut normalized = Vec::with_capacity(active.len());
        for &(s, w) in &active {
            normalized.push((s, w, evaluate_scorer(h, &cs, s, weights)?));
        }
        let mut results = Vec::new();
        for p in cs.universe() {
            let mut breakdown = BTreeMap::new();
            let mut combined = 0.0;
            for (s, w, scores) in &normalized {
                let v = scores.get(&p).copied().unwrap_or(0.0);
                combined += w * v;
                breakdown.insert(*s, v);
            }
            let url = h.url_of(p)?.unwrap_or_default();
            results.push(RankedResult {
                urlid: p,
                url,
                combined,
                breakdown,
            });
        }
        results.sort_by(|a, b| {
            b.combined
                .total_cmp(&a.combined)
                .then_with(|| a.urlid.cmp(&b.urlid))
        });
        Ok(results)
    })
}

/// [`rank`] truncated to `limit` results.
pub fn query(
    h: &IndexHandle,
    raw_query: &str,
    weights: &ScorerWeights,
    mode: Mode,
    limit: usize,
) -> Result<Vec<RankedResult>> {
    let mut r = rank(h, raw_query, weights, mode)?;
    r.truncate(limit);
    Ok(r)
}

pub const DEFAULT_LIMIT: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct SearchRequest {
    pub query: String,
    pub weights: ScorerWeights,
    pub mode: Mode,
    pub limit: usize,
}

/// The JSON document returned by `search --json` and `/api/search`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResponse {
    pub query: String,
    pub mode: Mode,
    pub scheme: u8,
    pub weights: BTreeMap<String, f64>,
    pub results: Vec<ResultRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub urlid: i64,
    pub url: String,
    pub combined: f64,
    pub breakdown: BTreeMap<String, f64>,
}

impl SearchResponse {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("response serializes")
    }
}

pub fn search(h: &IndexHandle, req: &SearchRequest) -> Result<SearchResponse> {
    let results = query(h, &req.query, &req.weights, req.mode, req.limit)?;
    Ok(SearchResponse {
        query: req.query.clone(),
        mode: req.mode,
        scheme: req.weights.anchor_scheme.get(),
        weights: req.weights.as_name_map(),
        results: results
            .into_iter()
            .map(|r| ResultRow {
                urlid: r.urlid.0,
                url: r.url,
                combined: r.combined,
                breakdown: r
                    .breakdown
                    .into_iter()
                    .map(|(s, v)| (s.name().to_string(), v))
                    .collect(),
            })
            .collect(),
    })
}

/// Ordering helper shared by tests: page ids by raw score, best first.
pub fn order_by_score(scores: &ScoreMap, small_is_better: bool) -> Vec<PageId> {
    let mut v: Vec<(PageId, f64)> = scores.iter().map(|(&p, &s)| (p, s)).collect();
    v.sort_by(|a, b| {
        let o = if small_is_better {
            a.1.total_cmp(&b.1)
        } else {
            b.1.total_cmp(&a.1)
        };
        if o == Ordering::Equal {
            a.0.cmp(&b.0)
        } else {
            o
        }
    });
    v.into_iter().map(|(p, _)| p).collect()
}
