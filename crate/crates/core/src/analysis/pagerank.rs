use tracing::debug;

use super::{Convergence, ScoreKind, ScoreVector, WebGraph};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PageRankParams {
    pub damping: f64,
    pub max_iter: usize,
    /// Stop once the L1 change between iterations drops below this.
    pub tol: f64,
}

impl Default for PageRankParams {
    fn default() -> Self {
        PageRankParams {
            damping: 0.85,
            max_iter: 50,
            tol: 1e-8,
        }
    }
}

/// Power iteration with uniform teleport and dangling mass spread uniformly.
pub fn compute_pagerank(g: &WebGraph, params: PageRankParams) -> (ScoreVector, Convergence) {
    pagerank_with_weights(g, params, None)
}

/// PageRank where each node's new value is scaled by `weights[i]` and the
/// vector renormalized to sum 1 after every step.
pub(crate) fn pagerank_with_weights(
    g: &WebGraph,
    params: PageRankParams,
    weights: Option<&[f64]>,
) -> (ScoreVector, Convergence) {
    let n = g.len();
    if n == 0 {
        return (ScoreVector::new(ScoreKind::PageRank, Vec::new(), Vec::new()), Convergence::default());
    }
    let nf = n as f64;
    let d = params.damping;
    let mut pr = vec![1.0 / nf; n];
    let mut next = vec![0.0; n];
    let mut conv = Convergence::default();
    for it in 0..params.max_iter {
        let dangling: f64 = (0..n).filter(|&i| g.outdegree(i) == 0).map(|i| pr[i]).sum();
        let base = (1.0 - d) / nf + d * dangling / nf;
        for (i, slot) in next.iter_mut().enumerate() {
            let inflow: f64 = g
                .in_neighbors(i)
                .iter()
                .map(|&q| pr[q] / g.outdegree(q) as f64)
                .sum();
            *slot = base + d * inflow;
        }
        if let Some(w) = weights {
            for (v, wi) in next.iter_mut().zip(w) {
                *v *= wi;
            }
            let total: f64 = next.iter().sum();
            for v in next.iter_mut() {
                *v /= total;
            }
        }
        let residual: f64 = pr.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut pr, &mut next);
        conv = Convergence {
            iterations: it + 1,
            residual,
        };
        debug!(iteration = it + 1, residual, "pagerank");
        if residual < params.tol {
            break;
        }
    }
    (
        ScoreVector::new(ScoreKind::PageRank, g.nodes().to_vec(), pr),
        conv,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::store::PageId;

    #[test]
    fn two_cycle_is_even() {
        let g = WebGraph::new([], [(PageId(1), PageId(2)), (PageId(2), PageId(1))]);
        let (pr, _) = compute_pagerank(&g, PageRankParams::default());
        assert!((pr.get(PageId(1)).unwrap() - 0.5).abs() < 1e-12);
        assert!((pr.get(PageId(2)).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn all_dangling_is_uniform() {
        let g = WebGraph::new((1..=4).map(PageId), []);
        let (pr, _) = compute_pagerank(&g, PageRankParams::default());
        for v in pr.values() {
            assert!((v - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn sink_collects_mass() {
        let g = WebGraph::new([], [(PageId(1), PageId(3)), (PageId(2), PageId(3))]);
        let (pr, _) = compute_pagerank(&g, PageRankParams::default());
        assert!(pr.get(PageId(3)).unwrap() > pr.get(PageId(1)).unwrap());
        assert!((pr.sum() - 1.0).abs() < 1e-12);
    }
}
