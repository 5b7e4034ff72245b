//! Raw (unnormalized) scorers over a candidate set.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::store::{IndexHandle, PageId, ScoreTable, WordId};

use super::candidates::CandidateSet;
use super::weights::AnchorScheme;

pub type ScoreMap = BTreeMap<PageId, f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContentKind {
    /// Total occurrences of query words.
    Frequency,
    /// Sum of each word's first location; smaller is better.
    Location,
    /// Smallest summed gap between consecutive query words; smaller is better.
    Distance,
}

/// Content scorers. Candidates that are not content matches receive the
/// worst value computed for the content matches.
pub fn score_content(cs: &CandidateSet, kind: ContentKind) -> ScoreMap {
    let mut computed = ScoreMap::new();
    for &p in &cs.content_matches {
        let Some(locs) = cs.locations(p) else { continue };
        let v = match kind {
            ContentKind::Frequency => locs.iter().map(|l| l.len() as f64).sum(),
            ContentKind::Location => locs.iter().map(|l| l[0] as f64).sum(),
            ContentKind::Distance => min_alignment_distance(locs),
        };
        computed.insert(p, v);
    }
    let small_is_better = !matches!(kind, ContentKind::Frequency);
    fill_worst(computed, &cs.universe(), small_is_better)
}

/// Minimum over all choices of one location per word of
/// `sum |loc[i+1] - loc[i]|`. A single word scores 1.0.
pub fn min_alignment_distance(locs: &[Vec<u32>]) -> f64 {
    if locs.len() <= 1 {
        return 1.0;
    }
    // best[k]: cheapest chain ending at locs[i][k]
    let mut best: Vec<u64> = vec![0; locs[0].len()];
    for pair in locs.windows(2) {
        let (prev, cur) = (&pair[0], &pair[1]);
        best = cur
            .iter()
            .map(|&c| {
                prev.iter()
                    .zip(&best)
                    .map(|(&p, &b)| b + u64::from(c.abs_diff(p)))
                    .min()
                    .unwrap_or(u64::MAX)
            })
            .collect();
    }
    best.into_iter().min().unwrap_or(u64::MAX) as f64
}

fn fill_worst(mut computed: ScoreMap, universe: &[PageId], small_is_better: bool) -> ScoreMap {
    let worst = if small_is_better {
        computed.values().copied().fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.max(v))))
    } else {
        computed.values().copied().fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.min(v))))
    }
    .unwrap_or(0.0);
    for &p in universe {
        computed.entry(p).or_insert(worst);
    }
    computed
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bm25Params {
    pub k1: f64,
    pub b: f64,
}

impl Default for Bm25Params {
    fn default() -> Self {
        Bm25Params { k1: 1.2, b: 0.75 }
    }
}

/// `ln(1 + (N - n + 0.5) / (n + 0.5))`
pub fn bm25_idf(total_docs: u64, doc_freq: u64) -> f64 {
    let (n, nt) = (total_docs as f64, doc_freq as f64);
    (1.0 + (n - nt + 0.5) / (nt + 0.5)).ln()
}

/// Okapi BM25 with document lengths from `pagelength`.
///
/// Candidates without a `pagelength` row (linked but never fetched) get the
/// lowest score among those that have one.
pub fn score_bm25(h: &IndexHandle, cs: &CandidateSet, params: Bm25Params) -> Result<ScoreMap> {
    let (total_docs, avgdl): (i64, Option<f64>) = h.conn().query_row(
        "SELECT count(*), avg(length) FROM pagelength",
        [],
        |r| Ok((r.get(0)?, r.get(1)?)),
    )?;
    if total_docs == 0 {
        return Err(Error::NeedsAnalysis {
            table: ScoreTable::PageLength.name(),
        });
    }
    let avgdl = avgdl.unwrap_or(0.0);
    let idf: Vec<f64> = {
        let mut stmt = h.conn().prepare_cached(
            "SELECT count(DISTINCT urlid) FROM wordlocation WHERE wordid = ?1",
        )?;
        cs.wordids
            .iter()
            .map(|w| {
                let df: i64 = stmt.query_row([w.0], |r| r.get(0))?;
                Ok(bm25_idf(total_docs as u64, df as u64))
            })
            .collect::<Result<_>>()?
    };
    let universe = cs.universe();
    let lengths = pagelength_rows(h, &universe)?;
    let mut computed = ScoreMap::new();
    for &p in &universe {
        let Some(&len) = lengths.get(&p) else { continue };
        let ratio = if avgdl > 0.0 { len / avgdl } else { 1.0 };
        let norm = params.k1 * (1.0 - params.b + params.b * ratio);
        let score = match cs.rows.get(&p) {
            Some(per_term) => per_term
                .iter()
                .zip(&idf)
                .map(|(locs, idf)| {
                    let tf = locs.len() as f64;
                    idf * tf * (params.k1 + 1.0) / (tf + norm)
                })
                .sum(),
            None => 0.0,
        };
        computed.insert(p, score);
    }
    Ok(fill_worst(computed, &universe, false))
}

fn pagelength_rows(h: &IndexHandle, pages: &[PageId]) -> Result<HashMap<PageId, f64>> {
    let mut stmt = h
        .conn()
        .prepare_cached("SELECT length FROM pagelength WHERE urlid = ?1")?;
    let mut out = HashMap::new();
    for &p in pages {
        if let Some(len) = rusqlite::OptionalExtension::optional(
            stmt.query_row([p.0], |r| r.get::<_, f64>(0)),
        )? {
            out.insert(p, len);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkKind {
    InboundCount,
    LinkText,
    PageRank,
    Authority,
    MyAuthority,
    Length,
}

impl LinkKind {
    /// Score table the scorer reads, if any.
    pub fn table(self) -> Option<ScoreTable> {
        match self {
            LinkKind::InboundCount => None,
            LinkKind::LinkText | LinkKind::PageRank => Some(ScoreTable::PageRank),
            LinkKind::Authority => Some(ScoreTable::AuthHits),
            LinkKind::MyAuthority => Some(ScoreTable::AuthMyHits),
            LinkKind::Length => Some(ScoreTable::PageLength),
        }
    }
}

pub(crate) fn require_table(h: &IndexHandle, table: ScoreTable) -> Result<()> {
    if h.score_count(table)? == 0 {
        return Err(Error::NeedsAnalysis { table: table.name() });
    }
    Ok(())
}

/// Link-structure scorers and precomputed per-page lookups.
pub fn score_link(h: &IndexHandle, cs: &CandidateSet, kind: LinkKind) -> Result<ScoreMap> {
    if let Some(t) = kind.table() {
        require_table(h, t)?;
    }
    let universe = cs.universe();
    let lookup = |t: ScoreTable| -> Result<ScoreMap> {
        Ok(h.get_scores(t, &universe)?.into_iter().collect())
    };
    match kind {
        LinkKind::InboundCount => {
            let mut stmt = h
                .conn()
                .prepare_cached("SELECT count(*) FROM link WHERE toid = ?1")?;
            universe
                .iter()
                .map(|&p| Ok((p, stmt.query_row([p.0], |r| r.get::<_, i64>(0))? as f64)))
                .collect()
        }
        LinkKind::LinkText => {
            let words: BTreeSet<WordId> = cs.wordids.iter().copied().collect();
            let mut stmt = h.conn().prepare_cached(
                "SELECT DISTINCT link.rowid, link.fromid, coalesce(pagerank.score, 0.0)
                 FROM link
                 JOIN linkwords ON linkwords.linkid = link.rowid
                 LEFT JOIN pagerank ON pagerank.urlid = link.fromid
                 WHERE link.toid = ?1 AND linkwords.wordid = ?2",
            )?;
            let mut out = ScoreMap::new();
            for &p in &universe {
                let mut seen = BTreeSet::new();
                let mut total = 0.0;
                for w in &words {
                    let rows = stmt.query_map([p.0, w.0], |r| {
                        Ok((r.get::<_, i64>(0)?, r.get::<_, f64>(2)?))
                    })?;
                    for row in rows {
                        let (linkid, pr) = row?;
                        if seen.insert(linkid) {
                            total += pr;
                        }
                    }
                }
                out.insert(p, total);
            }
            Ok(out)
        }
        LinkKind::PageRank => lookup(ScoreTable::PageRank),
        LinkKind::Authority => lookup(ScoreTable::AuthHits),
        LinkKind::MyAuthority => lookup(ScoreTable::AuthMyHits),
        LinkKind::Length => lookup(ScoreTable::PageLength),
    }
}

/// Inbound anchor text of one page.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AnchorBag {
    /// Number of anchor words over all inbound links, repeats included.
    pub total: u64,
    /// Occurrences of each query word.
    pub counts: HashMap<WordId, u64>,
    /// Inbound links whose anchor contains at least one query word.
    pub matching_links: u64,
}

pub fn anchor_bag(h: &IndexHandle, page: PageId, query: &[WordId]) -> Result<AnchorBag> {
    let mut stmt = h.conn().prepare_cached(
        "SELECT link.rowid, linkwords.wordid FROM link
         LEFT JOIN linkwords ON linkwords.linkid = link.rowid
         WHERE link.toid = ?1",
    )?;
    let rows = stmt.query_map([page.0], |r| {
        Ok((r.get::<_, i64>(0)?, r.get::<_, Option<i64>>(1)?))
    })?;
    let mut bag = AnchorBag::default();
    let mut matching = BTreeSet::new();
    for row in rows {
        let (linkid, word) = row?;
        let Some(word) = word.map(WordId) else { continue };
        bag.total += 1;
        if query.contains(&word) {
            *bag.counts.entry(word).or_default() += 1;
            matching.insert(linkid);
        }
    }
    bag.matching_links = matching.len() as u64;
    Ok(bag)
}

/// Anchor-text scorers.
///
/// Scheme 4 returns a log-likelihood (`<= 0`, larger is better). Query words
/// absent from every anchor in the collection contribute nothing.
pub fn score_anchor(
    h: &IndexHandle,
    cs: &CandidateSet,
    scheme: AnchorScheme,
    lambda: f64,
) -> Result<ScoreMap> {
    let mut collection: Vec<(WordId, f64)> = Vec::new();
    let collection_total: i64 = h
        .conn()
        .query_row("SELECT count(*) FROM linkwords", [], |r| r.get(0))?;
    if scheme == AnchorScheme::MODEL {
        let mut stmt = h
            .conn()
            .prepare_cached("SELECT count(*) FROM linkwords WHERE wordid = ?1")?;
        for &w in &cs.wordids {
            let c: i64 = stmt.query_row([w.0], |r| r.get(0))?;
            if c > 0 {
                collection.push((w, c as f64 / collection_total as f64));
            }
        }
    }
    let mut out = ScoreMap::new();
    for p in cs.universe() {
        let bag = anchor_bag(h, p, &cs.wordids)?;
        let occurrences: u64 = bag.counts.values().sum();
        let v = match scheme.get() {
            1 => occurrences as f64,
            2 => bag.matching_links as f64,
            3 => {
                if bag.total == 0 {
                    0.0
                } else {
                    occurrences as f64 / bag.total as f64
                }
            }
            _ => collection
                .iter()
                .map(|&(w, p_coll)| {
                    let p_page = if bag.total == 0 {
                        0.0
                    } else {
                        bag.counts.get(&w).copied().unwrap_or(0) as f64 / bag.total as f64
                    };
                    ((1.0 - lambda) * p_page + lambda * p_coll).ln()
                })
                .sum(),
        };
        out.insert(p, v);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_alignment() {
        assert_eq!(min_alignment_distance(&[vec![0, 10], vec![11]]), 1.0);
        assert_eq!(min_alignment_distance(&[vec![4]]), 1.0);
        assert_eq!(min_alignment_distance(&[vec![0, 20], vec![10], vec![21]]), 21.0);
    }

    #[test]
    fn idf_single_doc() {
        assert!((bm25_idf(1, 1) - (1.0f64 + 0.5 / 1.5).ln()).abs() < 1e-15);
    }

    #[test]
    fn worst_fill() {
        let computed: ScoreMap = [(PageId(1), 3.0), (PageId(2), 5.0)].into();
        let all = [PageId(1), PageId(2), PageId(3)];
        assert_eq!(fill_worst(computed.clone(), &all, true)[&PageId(3)], 5.0);
        assert_eq!(fill_worst(computed, &all, false)[&PageId(3)], 3.0);
    }
}
