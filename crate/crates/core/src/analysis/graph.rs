use std::collections::{BTreeSet, HashMap};

use crate::error::Result;
use crate::store::{IndexHandle, PageId};

/// Directed web graph with repeated edges collapsed and self-loops dropped.
///
/// Nodes are kept in ascending [`PageId`] order; adjacency lists hold node
/// positions, sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct WebGraph {
    nodes: Vec<PageId>,
    position: HashMap<PageId, usize>,
    out_edges: Vec<Vec<usize>>,
    in_edges: Vec<Vec<usize>>,
}

impl WebGraph {
    /// Builds a graph over `nodes` plus any edge endpoint not already listed.
    pub fn new(
        nodes: impl IntoIterator<Item = PageId>,
        edges: impl IntoIterator<Item = (PageId, PageId)>,
    ) -> Self {
        let edges: BTreeSet<(PageId, PageId)> =
            edges.into_iter().filter(|(a, b)| a != b).collect();
        let mut all: BTreeSet<PageId> = nodes.into_iter().collect();
        for &(a, b) in &edges {
            all.insert(a);
            all.insert(b);
        }
        let nodes: Vec<PageId> = all.into_iter().collect();
        let position: HashMap<PageId, usize> =
            nodes.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut out_edges = vec![Vec::new(); nodes.len()];
        let mut in_edges = vec![Vec::new(); nodes.len()];
        for (a, b) in edges {
            let (i, j) = (position[&a], position[&b]);
            out_edges[i].push(j);
            in_edges[j].push(i);
        }
        for list in in_edges.iter_mut() {
            list.sort_unstable();
        }
        WebGraph {
            nodes,
            position,
            out_edges,
            in_edges,
        }
    }

    /// Graph over every `urllist` row and every `link` row.
    pub fn from_index(h: &IndexHandle) -> Result<Self> {
        let nodes = h.page_ids()?;
        let edges = h.links()?.into_iter().map(|l| (l.fromid, l.toid));
        Ok(WebGraph::new(nodes, edges))
    }

    pub fn transpose(&self) -> Self {
        WebGraph {
            nodes: self.nodes.clone(),
            position: self.position.clone(),
            out_edges: self.in_edges.clone(),
            in_edges: self.out_edges.clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.out_edges.iter().map(Vec::len).sum()
    }

    pub fn nodes(&self) -> &[PageId] {
        &self.nodes
    }

    pub fn position(&self, id: PageId) -> Option<usize> {
        self.position.get(&id).copied()
    }

    pub fn out_neighbors(&self, i: usize) -> &[usize] {
        &self.out_edges[i]
    }

    pub fn in_neighbors(&self, i: usize) -> &[usize] {
        &self.in_edges[i]
    }

    pub fn outdegree(&self, i: usize) -> usize {
        self.out_edges[i].len()
    }

    pub fn indegree(&self, i: usize) -> usize {
        self.in_edges[i].len()
    }

    /// All edges as page-id pairs, sorted.
    pub fn edges(&self) -> Vec<(PageId, PageId)> {
        self.out_edges
            .iter()
            .enumerate()
            .flat_map(|(i, outs)| outs.iter().map(move |&j| (self.nodes[i], self.nodes[j])))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(i: i64) -> PageId {
        PageId(i)
    }

    #[test]
    fn dedups_and_drops_self_loops() {
        let g = WebGraph::new(
            [p(1), p(2)],
            [(p(1), p(2)), (p(1), p(2)), (p(2), p(1)), (p(1), p(1))],
        );
        assert_eq!(g.edges(), vec![(p(1), p(2)), (p(2), p(1))]);
    }

    #[test]
    fn empty_edges_keep_nodes() {
        let g = WebGraph::new([p(1), p(2), p(3)], []);
        assert_eq!(g.len(), 3);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn transpose_swaps_views() {
        let g = WebGraph::new([], [(p(1), p(2)), (p(2), p(3)), (p(1), p(3))]);
        let t = g.transpose();
        let mut flipped: Vec<_> = g.edges().into_iter().map(|(a, b)| (b, a)).collect();
        flipped.sort();
        assert_eq!(t.edges(), flipped);
        for i in 0..g.len() {
            assert_eq!(g.indegree(i), t.outdegree(i));
        }
    }
}
