use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::store::{IndexHandle, PageId, WordId};
use crate::text::Source;

/// A query after the index's own text pipeline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub raw: String,
    /// Normalized terms, first occurrence order, duplicates removed.
    pub terms: Vec<String>,
    /// Ids of the terms present in `wordlist`, in term order.
    pub wordids: Vec<WordId>,
}

impl Query {
    /// Normalizes `raw` with the stemming setting stored in the index.
    pub fn parse(h: &IndexHandle, raw: &str) -> Result<Self> {
        let pipeline = h.meta()?.pipeline();
        let mut terms: Vec<String> = Vec::new();
        for t in pipeline.normalize(raw, Source::Query).tokens {
            if !terms.contains(&t) {
                terms.push(t);
            }
        }
        if terms.is_empty() {
            return Err(Error::EmptyQuery);
        }
        let mut wordids = Vec::new();
        for t in &terms {
            if let Some(id) = h.word_id(t)? {
                wordids.push(id);
            }
        }
        Ok(Query {
            raw: raw.to_string(),
            terms,
            wordids,
        })
    }
}

/// Pages eligible for scoring.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CandidateSet {
    pub wordids: Vec<WordId>,
    /// Pages containing every query word.
    pub content_matches: BTreeSet<PageId>,
    /// Pages with an inbound link whose anchor contains any query word.
    pub anchor_matches: BTreeSet<PageId>,
    /// Sorted locations per query word (aligned with `wordids`) for every
    /// candidate page containing at least one query word.
    pub rows: BTreeMap<PageId, Vec<Vec<u32>>>,
}

impl CandidateSet {
    /// Content matches and anchor matches, ascending.
    pub fn universe(&self) -> Vec<PageId> {
        self.content_matches
            .union(&self.anchor_matches)
            .copied()
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.content_matches.is_empty() && self.anchor_matches.is_empty()
    }

    /// Locations per query word for a content match.
    pub fn locations(&self, p: PageId) -> Option<&[Vec<u32>]> {
        if self.content_matches.contains(&p) {
            self.rows.get(&p).map(Vec::as_slice)
        } else {
            None
        }
    }
}

pub fn build_candidates(h: &IndexHandle, q: &Query) -> Result<CandidateSet> {
    if q.terms.is_empty() {
        return Err(Error::EmptyQuery);
    }
    let n = q.wordids.len();
    let mut rows: BTreeMap<PageId, Vec<Vec<u32>>> = BTreeMap::new();
    {
        let mut stmt = h.conn().prepare_cached(
            "SELECT urlid, location FROM wordlocation WHERE wordid = ?1 ORDER BY urlid, location",
        )?;
        for (i, w) in q.wordids.iter().enumerate() {
            let it = stmt.query_map([w.0], |r| Ok((PageId(r.get(0)?), r.get::<_, u32>(1)?)))?;
            for row in it {
                let (page, loc) = row?;
                rows.entry(page).or_insert_with(|| vec![Vec::new(); n])[i].push(loc);
            }
        }
    }
    let content_matches: BTreeSet<PageId> = if n == 0 {
        BTreeSet::new()
    } else {
        rows.iter()
            .filter(|(_, per_term)| per_term.iter().all(|l| !l.is_empty()))
            .map(|(&p, _)| p)
            .collect()
    };

    let mut anchor_matches = BTreeSet::new();
    {
        let mut stmt = h.conn().prepare_cached(
            "SELECT DISTINCT link.toid FROM linkwords
             JOIN link ON link.rowid = linkwords.linkid
             WHERE linkwords.wordid = ?1",
        )?;
        for w in &q.wordids {
            for p in stmt.query_map([w.0], |r| r.get(0).map(PageId))? {
                anchor_matches.insert(p?);
            }
        }
    }
    let universe: BTreeSet<PageId> = content_matches.union(&anchor_matches).copied().collect();
    rows.retain(|p, _| universe.contains(p));
    Ok(CandidateSet {
        wordids: q.wordids.clone(),
        content_matches,
        anchor_matches,
        rows,
    })
}
