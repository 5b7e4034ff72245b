use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Every scorer the query engine can combine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scorer {
    Frequency,
    Location,
    Distance,
    Bm25,
    InboundCount,
    LinkText,
    PageRank,
    Authority,
    MyAuthority,
    Length,
    Anchor,
}

impl Scorer {
    pub const ALL: [Scorer; 11] = [
        Scorer::Frequency,
        Scorer::Location,
        Scorer::Distance,
        Scorer::Bm25,
        Scorer::InboundCount,
        Scorer::LinkText,
        Scorer::PageRank,
        Scorer::Authority,
        Scorer::MyAuthority,
        Scorer::Length,
        Scorer::Anchor,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scorer::Frequency => "frequency",
            Scorer::Location => "location",
            Scorer::Distance => "distance",
            Scorer::Bm25 => "bm25",
            Scorer::InboundCount => "inboundcount",
            Scorer::LinkText => "linktext",
            Scorer::PageRank => "pagerank",
            Scorer::Authority => "authority",
            Scorer::MyAuthority => "myauthority",
            Scorer::Length => "length",
            Scorer::Anchor => "anchor",
        }
    }

    /// Needs the query at evaluation time. `length` is content-based but
    /// precomputed, so it counts as query-independent.
    pub fn query_dependent(self) -> bool {
        matches!(
            self,
            Scorer::Frequency
                | Scorer::Location
                | Scorer::Distance
                | Scorer::Bm25
                | Scorer::LinkText
                | Scorer::Anchor
        )
    }
}

impl FromStr for Scorer {
    type Err = Error;

    /// Accepts the bare name or the name with a `score` suffix (`bm25score`).
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let bare = lower.strip_suffix("score").unwrap_or(&lower);
        let bare = match bare {
            "inboundlink" | "inbound" => "inboundcount",
            other => other,
        };
        Scorer::ALL
            .into_iter()
            .find(|sc| sc.name() == bare)
            .ok_or_else(|| Error::UnknownScorer(s.to_string()))
    }
}

impl fmt::Display for Scorer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Anchor-text scheme, 1 through 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct AnchorScheme(u8);

impl AnchorScheme {
    /// Summed occurrences of query terms in inbound anchor text.
    pub const COUNT: AnchorScheme = AnchorScheme(1);
    /// Inbound links whose anchor mentions any query term.
    pub const LINKS: AnchorScheme = AnchorScheme(2);
    /// Scheme 1 divided by the total inbound anchor length.
    pub const FRACTION: AnchorScheme = AnchorScheme(3);
    /// Smoothed anchor language model.
    pub const MODEL: AnchorScheme = AnchorScheme(4);

    pub fn new(n: u8) -> Result<Self> {
        if (1..=4).contains(&n) {
            Ok(AnchorScheme(n))
        } else {
            Err(Error::InvalidScheme(n))
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }
}

impl Default for AnchorScheme {
    fn default() -> Self {
        AnchorScheme::MODEL
    }
}

impl TryFrom<u8> for AnchorScheme {
    type Error = Error;

    fn try_from(n: u8) -> Result<Self> {
        AnchorScheme::new(n)
    }
}

impl From<AnchorScheme> for u8 {
    fn from(s: AnchorScheme) -> u8 {
        s.0
    }
}

pub const DEFAULT_ANCHOR_LAMBDA: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct ScorerWeights {
    weights: BTreeMap<Scorer, f64>,
    pub anchor_scheme: AnchorScheme,
    /// Collection smoothing weight for anchor scheme 4.
    pub anchor_lambda: f64,
}

impl ScorerWeights {
    pub fn new(weights: impl IntoIterator<Item = (Scorer, f64)>) -> Result<Self> {
        let weights: BTreeMap<Scorer, f64> = weights.into_iter().collect();
        for (s, &w) in &weights {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidScorerWeight(format!("{s}={w}")));
            }
        }
        if !weights.values().any(|&w| w > 0.0) {
            return Err(Error::InvalidScorerWeight(
                "at least one weight must be positive".into(),
            ));
        }
        Ok(ScorerWeights {
            weights,
            anchor_scheme: AnchorScheme::default(),
            anchor_lambda: DEFAULT_ANCHOR_LAMBDA,
        })
    }

    pub fn single(s: Scorer) -> Self {
        Self::new([(s, 1.0)]).expect("positive weight")
    }

    pub fn preset(name: &str) -> Result<Self> {
        let entries = PRESETS
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, e)| *e)
            .ok_or_else(|| Error::UnknownPreset(name.to_string()))?;
        Self::new(entries.iter().copied())
    }

    pub fn with_scheme(mut self, scheme: AnchorScheme) -> Self {
        self.anchor_scheme = scheme;
        self
    }

    /// Parses `name=value`.
    pub fn parse_pair(pair: &str) -> Result<(Scorer, f64)> {
        let (name, value) = pair
            .split_once('=')
            .ok_or_else(|| Error::InvalidScorerWeight(format!("expected name=value, got {pair:?}")))?;
        let scorer: Scorer = name.parse()?;
        let w: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::InvalidScorerWeight(format!("{name}={value}")))?;
        Ok((scorer, w))
    }

    pub fn get(&self, s: Scorer) -> f64 {
        self.weights.get(&s).copied().unwrap_or(0.0)
    }

    /// Every scorer with an explicit weight, including zeros.
    pub fn entries(&self) -> impl Iterator<Item = (Scorer, f64)> + '_ {
        self.weights.iter().map(|(&s, &w)| (s, w))
    }

    pub fn active(&self) -> impl Iterator<Item = (Scorer, f64)> + '_ {
        self.entries().filter(|&(_, w)| w > 0.0)
    }

    /// Multiplies every weight by `c`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        let mut out = Self::new(self.entries().map(|(s, w)| (s, w * c)))?;
        out.anchor_scheme = self.anchor_scheme;
        out.anchor_lambda = self.anchor_lambda;
        Ok(out)
    }

    pub fn as_name_map(&self) -> BTreeMap<String, f64> {
        self.entries().map(|(s, w)| (s.name().to_string(), w)).collect()
    }
}

pub const DEFAULT_PRESET: &str = "descriptive-anchors";

/// Named weight presets. The default favours anchor evidence and word
/// position over raw term counts, which keyword stuffing inflates.
pub const PRESETS: &[(&str, &[(Scorer, f64)])] = &[
    (
        "descriptive-anchors",
        &[
            (Scorer::Anchor, 2.0),
            (Scorer::LinkText, 1.5),
            (Scorer::Location, 1.0),
            (Scorer::PageRank, 0.5),
            (Scorer::Frequency, 0.2),
            (Scorer::Bm25, 0.2),
        ],
    ),
    (
        "content",
        &[
            (Scorer::Bm25, 1.0),
            (Scorer::Location, 1.0),
            (Scorer::Distance, 0.5),
            (Scorer::Frequency, 0.5),
        ],
    ),
    (
        "link-structure",
        &[
            (Scorer::PageRank, 1.0),
            (Scorer::Authority, 1.0),
            (Scorer::InboundCount, 0.5),
        ],
    ),
];
