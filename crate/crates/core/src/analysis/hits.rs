use tracing::debug;

use super::{Convergence, ScoreKind, ScoreVector, WebGraph};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HitsParams {
    pub max_iter: usize,
    /// Stop once the summed L1 change of both vectors drops below this.
    pub tol: f64,
}

impl Default for HitsParams {
    fn default() -> Self {
        HitsParams {
            max_iter: 100,
            tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HitsScores {
    pub authority: ScoreVector,
    pub hub: ScoreVector,
    pub convergence: Convergence,
}

/// Global (query-independent) HITS over the whole graph.
///
/// Starting from a uniform hub vector, alternates `a <- L^T h` and
/// `h <- L a`, scaling each to unit Euclidean norm after every update.
pub fn compute_hits_global(g: &WebGraph, params: HitsParams) -> Result<HitsScores> {
    hits_with_weights(g, params, None)
}

pub(crate) fn hits_with_weights(
    g: &WebGraph,
    params: HitsParams,
    weights: Option<&[f64]>,
) -> Result<HitsScores> {
    let n = g.len();
    if g.edge_count() == 0 {
        return Err(Error::ZeroGraph);
    }
    let weight = |i: usize| weights.map_or(1.0, |w| w[i]);
    let mut hub = vec![1.0 / (n as f64).sqrt(); n];
    let mut auth = vec![0.0; n];
    let mut next = vec![0.0; n];
    let mut conv = Convergence::default();
    for it in 0..params.max_iter {
        for (i, slot) in next.iter_mut().enumerate() {
            *slot = weight(i) * g.in_neighbors(i).iter().map(|&q| hub[q]).sum::<f64>();
        }
        unit_normalize(&mut next);
        let mut residual = l1_distance(&auth, &next);
        std::mem::swap(&mut auth, &mut next);

        for (i, slot) in next.iter_mut().enumerate() {
            *slot = weight(i) * g.out_neighbors(i).iter().map(|&q| auth[q]).sum::<f64>();
        }
        unit_normalize(&mut next);
        residual += l1_distance(&hub, &next);
        std::mem::swap(&mut hub, &mut next);

        conv = Convergence {
            iterations: it + 1,
            residual,
        };
        debug!(iteration = it + 1, residual, "hits");
        if residual < params.tol {
            break;
        }
    }
    Ok(HitsScores {
        authority: ScoreVector::new(ScoreKind::Authority, g.nodes().to_vec(), auth),
        hub: ScoreVector::new(ScoreKind::Hub, g.nodes().to_vec(), hub),
        convergence: conv,
    })
}

fn unit_normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
}

fn l1_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}
