//! Simple undirected graphs with dense vertex ids, the operations used to
//! build the extremal families, threshold assignments and graph metrics.

mod generators;
mod metrics;
mod threshold;

pub use generators::{
    blowup_cycle, build_complete, build_cycle, build_path, build_star, cartesian_product,
    edgeless, join, petersen, random_graph,
};
pub use metrics::{
    even_girth, longest_path_length, matching_number, GraphMetrics, DEFAULT_PATH_CAP,
};
pub use threshold::{assign_threshold, ThresholdMode, ThresholdRule, Thresholds};

use crate::error::{Result, WdmError};

/// A simple undirected graph on vertices `0..n`.
///
/// Adjacency lists are kept sorted, so membership tests are binary searches
/// and iteration order is deterministic.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl Graph {
    /// Builds a graph from an edge list, rejecting self-loops, parallel edges
    /// and out-of-range endpoints.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        let mut m = 0;
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(WdmError::param(format!(
                    "edge ({u}, {v}) references a vertex outside 0..{n}"
                )));
            }
            if u == v {
                return Err(WdmError::param(format!("self-loop at vertex {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
            m += 1;
        }
        for (v, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(WdmError::param(format!(
                    "parallel edge between {v} and {}",
                    w[0]
                )));
            }
        }
        Ok(Graph { adj, m })
    }

    pub fn empty(n: usize) -> Graph {
        Graph {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    /// Number of edges.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// `Some(d)` when every vertex has degree `d`.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adj.first().map(Vec::len)?;
        self.adj.iter().all(|l| l.len() == d).then_some(d)
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &u in &self.adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == n
    }

    /// Neighbor sets as 64-bit masks, for the exact searches.
    pub(crate) fn masks(&self) -> Option<Vec<u64>> {
        if self.n() > 64 {
            return None;
        }
        Some(
            self.adj
                .iter()
                .map(|l| l.iter().fold(0u64, |m, &u| m | (1 << u)))
                .collect(),
        )
    }

    /// True when `vertices` is an independent set.
    pub fn is_independent(&self, vertices: &[usize]) -> bool {
        let mut inside = vec![false; self.n()];
        for &v in vertices {
            inside[v] = true;
        }
        vertices
            .iter()
            .all(|&v| self.adj[v].iter().all(|&u| !inside[u]))
    }
}
