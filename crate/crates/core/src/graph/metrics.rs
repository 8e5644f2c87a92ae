use petgraph::graph::UnGraph;
use serde::Serialize;

use super::Graph;
use crate::error::{Result, WdmError};

/// Default vertex cap for [`longest_path_length`].
pub const DEFAULT_PATH_CAP: usize = 20;

// The subset table holds 2^n entries of u32 end-vertex masks.
const PATH_CAP_LIMIT: usize = 28;

/// Graph parameters that feed the bound evaluators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphMetrics {
    pub even_girth: Option<usize>,
    /// `None` when the graph exceeds the longest-path cap.
    pub longest_path_len: Option<usize>,
    pub matching_number: usize,
    pub max_degree: usize,
    pub min_degree: usize,
}

impl GraphMetrics {
    pub fn compute(g: &Graph, path_cap: usize) -> GraphMetrics {
        GraphMetrics {
            even_girth: even_girth(g),
            longest_path_len: longest_path_length(g, path_cap).ok(),
            matching_number: matching_number(g),
            max_degree: g.max_degree(),
            min_degree: g.min_degree(),
        }
    }
}

/// Length of the shortest even cycle, `None` if the graph has none.
///
/// For each start vertex `s`, searches simple cycles whose smallest vertex
/// is `s`, trying even lengths in increasing order below the best found so
/// far. BFS distances back to `s` prune paths that cannot close in time.
pub fn even_girth(g: &Graph) -> Option<usize> {
    let n = g.n();
    let mut best: Option<usize> = None;
    let mut on_path = vec![false; n];
    for s in 0..n {
        let limit = best.map_or(n, |b| b - 2);
        if limit < 4 {
            break;
        }
        let dist = distances_above(g, s);
        for len in (4..=limit).step_by(2) {
            on_path[s] = true;
            let found = close_cycle(g, s, s, 1, len, &dist, &mut on_path);
            on_path[s] = false;
            if found {
                best = Some(len);
                break;
            }
        }
    }
    best
}

// BFS distances to `s` inside the subgraph induced by vertices >= s.
fn distances_above(g: &Graph, s: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.n()];
    dist[s] = 0;
    let mut queue = std::collections::VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        for &u in g.neighbors(v) {
            if u > s && dist[u] == usize::MAX {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    dist
}

// `used` counts the vertices already on the path.
fn close_cycle(
    g: &Graph,
    s: usize,
    cur: usize,
    used: usize,
    len: usize,
    dist: &[usize],
    on_path: &mut [bool],
) -> bool {
    if used == len {
        return g.has_edge(cur, s);
    }
    for &u in g.neighbors(cur) {
        if u <= s || on_path[u] || dist[u] > len - used {
            continue;
        }
        on_path[u] = true;
        let found = close_cycle(g, s, u, used + 1, len, dist, on_path);
        on_path[u] = false;
        if found {
            return true;
        }
    }
    false
}

/// Number of edges on a longest simple path, by dynamic programming over
/// vertex subsets. Refuses graphs with more than `cap` vertices.
pub fn longest_path_length(g: &Graph, cap: usize) -> Result<usize> {
    let n = g.n();
    let cap = cap.min(PATH_CAP_LIMIT);
    if n > cap {
        return Err(WdmError::CapabilityExceeded {
            what: "longest path",
            size: n,
            cap,
        });
    }
    if n == 0 {
        return Ok(0);
    }
    let nbr: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | (1 << u)))
        .collect();
    // ends[mask]: vertices at which a path covering exactly `mask` can end
    let mut ends = vec![0u32; 1 << n];
    for v in 0..n {
        ends[1 << v] = 1 << v;
    }
    let mut best = 0;
    for mask in 1usize..(1 << n) {
        let mut e = ends[mask];
        if e == 0 {
            continue;
        }
        best = best.max(mask.count_ones() as usize - 1);
        while e != 0 {
            let v = e.trailing_zeros() as usize;
            e &= e - 1;
            let mut ext = nbr[v] & !(mask as u32);
            while ext != 0 {
                let u = ext.trailing_zeros() as usize;
                ext &= ext - 1;
                ends[mask | (1 << u)] |= 1 << u;
            }
        }
    }
    Ok(best)
}

/// Maximum matching size (matching number).
pub fn matching_number(g: &Graph) -> usize {
    let mut pg = UnGraph::<(), ()>::with_capacity(g.n(), g.m());
    let nodes: Vec<_> = (0..g.n()).map(|_| pg.add_node(())).collect();
    for (u, v) in g.edges() {
        pg.add_edge(nodes[u], nodes[v], ());
    }
    petgraph::algo::maximum_matching(&pg).len()
}
