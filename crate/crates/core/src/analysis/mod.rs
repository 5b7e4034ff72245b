//! Offline, query-independent scores.
//!
//! Everything here reads a snapshot of the index, computes a score per page
//! and writes it into one of the score tables. Scores are stored raw; the
//! query engine normalizes them per query.

mod graph;
mod hits;
mod pagerank;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use tracing::info;

pub use graph::WebGraph;
pub use hits::{compute_hits_global, HitsParams, HitsScores};
pub use pagerank::{compute_pagerank, PageRankParams};

use crate::error::{Error, Result};
use crate::store::{IndexHandle, PageId, ScoreTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScoreKind {
    PageRank,
    Authority,
    Hub,
    Length,
}

/// Per-page scores aligned with a graph's node order.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector {
    pub kind: ScoreKind,
    nodes: Vec<PageId>,
    values: Vec<f64>,
}

impl ScoreVector {
    pub fn new(kind: ScoreKind, nodes: Vec<PageId>, values: Vec<f64>) -> Self {
        assert_eq!(nodes.len(), values.len());
        ScoreVector { kind, nodes, values }
    }

    pub fn get(&self, id: PageId) -> Option<f64> {
        self.nodes
            .binary_search(&id)
            .ok()
            .map(|i| self.values[i])
    }

    pub fn nodes(&self) -> &[PageId] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (PageId, f64)> + '_ {
        self.nodes.iter().copied().zip(self.values.iter().copied())
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Convergence {
    pub iterations: usize,
    pub residual: f64,
}

/// Per-node weight derived from (indegree, outdegree).
pub trait NodeWeightHook: Send + Sync {
    fn weight(&self, indegree: usize, outdegree: usize) -> f64;
}

impl<F> NodeWeightHook for F
where
    F: Fn(usize, usize) -> f64 + Send + Sync,
{
    fn weight(&self, indegree: usize, outdegree: usize) -> f64 {
        self(indegree, outdegree)
    }
}

/// Constant 1.0: the weighted variants reduce to plain PageRank and HITS.
#[derive(Debug, Clone, Copy, Default)]
pub struct UnitWeight;

impl NodeWeightHook for UnitWeight {
    fn weight(&self, _: usize, _: usize) -> f64 {
        1.0
    }
}

/// `indegree + outdegree + 1`.
#[derive(Debug, Clone, Copy, Default)]
pub struct DegreeWeight;

impl NodeWeightHook for DegreeWeight {
    fn weight(&self, indegree: usize, outdegree: usize) -> f64 {
        (indegree + outdegree + 1) as f64
    }
}

/// Evaluates `hook` on every node, rejecting non-positive or non-finite weights.
pub fn node_weights(g: &WebGraph, hook: &dyn NodeWeightHook) -> Result<Vec<f64>> {
    (0..g.len())
        .map(|i| {
            let (indegree, outdegree) = (g.indegree(i), g.outdegree(i));
            let weight = hook.weight(indegree, outdegree);
            if weight.is_finite() && weight > 0.0 {
                Ok(weight)
            } else {
                Err(Error::InvalidWeight {
                    weight,
                    indegree,
                    outdegree,
                })
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedScores {
    pub constants: Vec<f64>,
    pub pagerank: ScoreVector,
    pub authority: ScoreVector,
    pub hub: ScoreVector,
    /// `None` when the graph has no edges and the uniform fallback was used.
    pub hits_convergence: Option<Convergence>,
}

/// PageRank and HITS with per-node multiplicative weights from `hook`.
pub fn weighted_variants(
    g: &WebGraph,
    hook: &dyn NodeWeightHook,
    pr: PageRankParams,
    hp: HitsParams,
) -> Result<WeightedScores> {
    let constants = node_weights(g, hook)?;
    let (pagerank, _) = pagerank::pagerank_with_weights(g, pr, Some(&constants));
    let (authority, hub, hits_convergence) =
        match hits::hits_with_weights(g, hp, Some(&constants)) {
            Ok(s) => (s.authority, s.hub, Some(s.convergence)),
            Err(Error::ZeroGraph) => {
                let (a, h) = uniform_hits(g);
                (a, h, None)
            }
            Err(e) => return Err(e),
        };
    Ok(WeightedScores {
        constants,
        pagerank,
        authority,
        hub,
        hits_convergence,
    })
}

/// Unit-norm uniform vectors, stored when the graph has no edges.
pub fn uniform_hits(g: &WebGraph) -> (ScoreVector, ScoreVector) {
    let v = if g.is_empty() {
        0.0
    } else {
        1.0 / (g.len() as f64).sqrt()
    };
    let values = vec![v; g.len()];
    (
        ScoreVector::new(ScoreKind::Authority, g.nodes().to_vec(), values.clone()),
        ScoreVector::new(ScoreKind::Hub, g.nodes().to_vec(), values),
    )
}

/// Writes one `pagelength` row per indexed page: its posting count.
pub fn compute_page_lengths(h: &IndexHandle) -> Result<usize> {
    let rows: Vec<(PageId, f64)> = {
        let mut stmt = h.conn().prepare(
            "SELECT u.rowid, count(w.urlid) FROM urllist u
             LEFT JOIN wordlocation w ON w.urlid = u.rowid
             WHERE u.indexed = 1 GROUP BY u.rowid ORDER BY u.rowid",
        )?;
        let it = stmt.query_map([], |r| Ok((PageId(r.get(0)?), r.get::<_, i64>(1)? as f64)))?;
        it.collect::<rusqlite::Result<_>>()?
    };
    let n = rows.len();
    h.replace_scores(
        ScoreTable::PageLength,
        rows.into_iter().map(|(id, len)| (id, len, None)),
    )?;
    Ok(n)
}

fn store_vector(h: &IndexHandle, table: ScoreTable, v: &ScoreVector) -> Result<()> {
    h.replace_scores(table, v.iter().map(|(id, s)| (id, s.max(0.0), None)))
}

fn store_weighted(
    h: &IndexHandle,
    table: ScoreTable,
    v: &ScoreVector,
    constants: &[f64],
) -> Result<()> {
    h.replace_scores(
        table,
        v.iter()
            .zip(constants)
            .map(|((id, s), &c)| (id, s.max(0.0), Some(c))),
    )
}

/// Writes the hook-weighted PageRank and HITS into `mypagerank`,
/// `auth_myhits` and `hub_myhits`, with the hook value as the constant column.
pub fn compute_weighted_variants(
    h: &IndexHandle,
    g: &WebGraph,
    hook: &dyn NodeWeightHook,
    pr: PageRankParams,
    hp: HitsParams,
) -> Result<WeightedScores> {
    let w = weighted_variants(g, hook, pr, hp)?;
    h.in_transaction(|h| {
        store_weighted(h, ScoreTable::MyPageRank, &w.pagerank, &w.constants)?;
        store_weighted(h, ScoreTable::AuthMyHits, &w.authority, &w.constants)?;
        store_weighted(h, ScoreTable::HubMyHits, &w.hub, &w.constants)
    })?;
    Ok(w)
}

/// One step of the offline analysis pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnalysisStep {
    Lengths,
    #[serde(rename = "pagerank")]
    PageRank,
    Hits,
    Weighted,
    HotIndexes,
}

impl AnalysisStep {
    pub const ALL: [AnalysisStep; 5] = [
        AnalysisStep::Lengths,
        AnalysisStep::PageRank,
        AnalysisStep::Hits,
        AnalysisStep::Weighted,
        AnalysisStep::HotIndexes,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AnalysisStep::Lengths => "lengths",
            AnalysisStep::PageRank => "pagerank",
            AnalysisStep::Hits => "hits",
            AnalysisStep::Weighted => "weighted",
            AnalysisStep::HotIndexes => "hot-indexes",
        }
    }
}

impl FromStr for AnalysisStep {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        AnalysisStep::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| {
                format!(
                    "unknown analysis step {s:?} (expected one of: {})",
                    AnalysisStep::ALL.map(|s| s.name()).join(", ")
                )
            })
    }
}

impl fmt::Display for AnalysisStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub struct AnalyzeOptions {
    pub skip: BTreeSet<AnalysisStep>,
    pub pagerank: PageRankParams,
    pub hits: HitsParams,
    pub hook: Box<dyn NodeWeightHook>,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            skip: BTreeSet::new(),
            pagerank: PageRankParams::default(),
            hits: HitsParams::default(),
            hook: Box::new(UnitWeight),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepReport {
    pub step: AnalysisStep,
    pub rows: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convergence: Option<Convergence>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalyzeReport {
    pub pages: usize,
    pub edges: usize,
    pub steps: Vec<StepReport>,
}

/// Runs every analysis step not listed in `opts.skip`.
pub fn analyze(h: &IndexHandle, opts: &AnalyzeOptions) -> Result<AnalyzeReport> {
    let g = WebGraph::from_index(h)?;
    if g.is_empty() {
        return Err(Error::NothingToAnalyze);
    }
    let mut steps = Vec::new();
    let run = |s: AnalysisStep| !opts.skip.contains(&s);

    if run(AnalysisStep::Lengths) {
        let rows = compute_page_lengths(h)?;
        info!(rows, "page lengths");
        steps.push(StepReport {
            step: AnalysisStep::Lengths,
            rows,
            convergence: None,
            note: None,
        });
    }
    if run(AnalysisStep::PageRank) {
        let (pr, conv) = compute_pagerank(&g, opts.pagerank);
        store_vector(h, ScoreTable::PageRank, &pr)?;
        info!(iterations = conv.iterations, residual = conv.residual, "pagerank");
        steps.push(StepReport {
            step: AnalysisStep::PageRank,
            rows: g.len(),
            convergence: Some(conv),
            note: None,
        });
    }
    if run(AnalysisStep::Hits) {
        let (auth, hub, conv, note) = match compute_hits_global(&g, opts.hits) {
            Ok(s) => (s.authority, s.hub, Some(s.convergence), None),
            Err(Error::ZeroGraph) => {
                let (a, h) = uniform_hits(&g);
                (a, h, None, Some("no edges; stored uniform scores".to_string()))
            }
            Err(e) => return Err(e),
        };
        h.in_transaction(|h| {
            store_vector(h, ScoreTable::AuthHits, &auth)?;
            store_vector(h, ScoreTable::HubHits, &hub)
        })?;
        if let Some(c) = conv {
            info!(iterations = c.iterations, residual = c.residual, "hits");
        }
        steps.push(StepReport {
            step: AnalysisStep::Hits,
            rows: g.len(),
            convergence: conv,
            note,
        });
    }
    if run(AnalysisStep::Weighted) {
        let w = compute_weighted_variants(h, &g, opts.hook.as_ref(), opts.pagerank, opts.hits)?;
        steps.push(StepReport {
            step: AnalysisStep::Weighted,
            rows: g.len(),
            convergence: w.hits_convergence,
            note: None,
        });
    }
    if run(AnalysisStep::HotIndexes) {
        h.create_hot_indexes()?;
        steps.push(StepReport {
            step: AnalysisStep::HotIndexes,
            rows: 2,
            convergence: None,
            note: None,
        });
    }
    Ok(AnalyzeReport {
        pages: g.len(),
        edges: g.edge_count(),
        steps,
    })
}
