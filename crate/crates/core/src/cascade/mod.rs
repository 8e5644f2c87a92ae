//! Activation semantics: layer partitions, the greedy synchronous process,
//! exact partition search, and the cumulative and one-round variants.
//!
//! In the weak model a vertex placed in layer `D_i` must see at least
//! `τ(v)` neighbours in the *immediately preceding* layer `D_{i-1}`; support
//! from older layers does not count. The greedy process (everything that can
//! fire, fires at once) is sound for this model but not complete: delaying a
//! vertex by a step can be what makes a later vertex reachable. The exact
//! search in [`exact`] closes that gap.

mod exact;
mod paths;

pub use exact::{
    exact_wdm_partition, processing_time_range, ExactSearch, ProcessingTimeRange,
    DEFAULT_EXACT_CAP, EXACT_HARD_LIMIT,
};
pub use paths::{
    extract_disjoint_paths, extract_starlike, validate_disjoint_paths, validate_starlike,
    Starlike,
};

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Result, WdmError};
use crate::graph::{Graph, Thresholds};

/// Ordered layers `D_0, ..., D_t`; each layer is kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LayerPartition {
    layers: Vec<Vec<usize>>,
}

impl LayerPartition {
    /// Sorts every layer and drops trailing empty layers. Interior empty
    /// layers are kept so that [`verify_wdm_partition`] can reject them.
    pub fn new(mut layers: Vec<Vec<usize>>) -> LayerPartition {
        for layer in &mut layers {
            layer.sort_unstable();
        }
        while layers.len() > 1 && layers.last().is_some_and(Vec::is_empty) {
            layers.pop();
        }
        LayerPartition { layers }
    }

    /// Groups vertices by label; `labels[v]` is the layer index of `v`.
    pub fn from_labels(labels: &[usize]) -> LayerPartition {
        let t = labels.iter().copied().max().unwrap_or(0);
        let mut layers = vec![Vec::new(); t + 1];
        for (v, &l) in labels.iter().enumerate() {
            layers[l].push(v);
        }
        LayerPartition::new(layers)
    }

    pub fn layers(&self) -> &[Vec<usize>] {
        &self.layers
    }

    /// Processing time: the index of the last layer.
    pub fn t(&self) -> usize {
        self.layers.len().saturating_sub(1)
    }

    pub fn seed(&self) -> &[usize] {
        self.layers.first().map_or(&[], Vec::as_slice)
    }

    pub fn layer(&self, i: usize) -> &[usize] {
        &self.layers[i]
    }

    /// Total number of vertices across layers.
    pub fn len(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Layer index of every vertex in `0..n`, `None` for vertices not placed.
    pub fn labels(&self, n: usize) -> Vec<Option<usize>> {
        let mut out = vec![None; n];
        for (i, layer) in self.layers.iter().enumerate() {
            for &v in layer {
                if v < n {
                    out[v] = Some(i);
                }
            }
        }
        out
    }
}

/// Why a partition fails to witness a weak dynamic monopoly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartitionDefect {
    ThresholdCount { thresholds: usize, vertices: usize },
    OutOfRange(usize),
    Repeated(usize),
    Missing(usize),
    EmptySeed,
    EmptyLayer(usize),
    Unsupported {
        vertex: usize,
        layer: usize,
        support: usize,
        needed: u32,
    },
}

impl fmt::Display for PartitionDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartitionDefect::ThresholdCount {
                thresholds,
                vertices,
            } => write!(f, "{thresholds} thresholds for {vertices} vertices"),
            PartitionDefect::OutOfRange(v) => write!(f, "vertex {v} out of range"),
            PartitionDefect::Repeated(v) => write!(f, "vertex {v} appears more than once"),
            PartitionDefect::Missing(v) => write!(f, "vertex {v} is in no layer"),
            PartitionDefect::EmptySeed => write!(f, "layer 0 is empty"),
            PartitionDefect::EmptyLayer(i) => write!(f, "layer {i} is empty"),
            PartitionDefect::Unsupported {
                vertex,
                layer,
                support,
                needed,
            } => write!(
                f,
                "vertex {vertex} in layer {layer} has {support} neighbours in layer {} but needs {needed}",
                layer - 1
            ),
        }
    }
}

/// Checks every layer-partition invariant against `g` and `tau`.
pub fn verify_wdm_partition(
    g: &Graph,
    tau: &Thresholds,
    p: &LayerPartition,
) -> std::result::Result<(), PartitionDefect> {
    let n = g.n();
    if tau.len() != n {
        return Err(PartitionDefect::ThresholdCount {
            thresholds: tau.len(),
            vertices: n,
        });
    }
    let mut label = vec![usize::MAX; n];
    for (i, layer) in p.layers().iter().enumerate() {
        if layer.is_empty() {
            return Err(if i == 0 {
                PartitionDefect::EmptySeed
            } else {
                PartitionDefect::EmptyLayer(i)
            });
        }
        for &v in layer {
            if v >= n {
                return Err(PartitionDefect::OutOfRange(v));
            }
            if label[v] != usize::MAX {
                return Err(PartitionDefect::Repeated(v));
            }
            label[v] = i;
        }
    }
    if p.layers().is_empty() {
        return Err(PartitionDefect::EmptySeed);
    }
    if let Some(v) = label.iter().position(|&l| l == usize::MAX) {
        return Err(PartitionDefect::Missing(v));
    }
    for (i, layer) in p.layers().iter().enumerate().skip(1) {
        for &v in layer {
            let support = g
                .neighbors(v)
                .iter()
                .filter(|&&u| label[u] == i - 1)
                .count();
            if support < tau.get(v) as usize {
                return Err(PartitionDefect::Unsupported {
                    vertex: v,
                    layer: i,
                    support,
                    needed: tau.get(v),
                });
            }
        }
    }
    Ok(())
}

pub fn is_wdm_partition(g: &Graph, tau: &Thresholds, p: &LayerPartition) -> bool {
    verify_wdm_partition(g, tau, p).is_ok()
}

/// Result of running the greedy process from a seed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CascadeOutcome {
    /// Layers over the activated vertices only.
    pub partition: LayerPartition,
    pub unactivated: Vec<usize>,
    pub complete: bool,
}

impl CascadeOutcome {
    /// Activation step of every vertex, `None` if it never activated.
    pub fn activation_steps(&self, n: usize) -> Vec<Option<usize>> {
        self.partition.labels(n)
    }
}

pub(crate) fn normalize_seed(n: usize, seed: &[usize]) -> Result<Vec<usize>> {
    if seed.is_empty() {
        return Err(WdmError::param("seed set must be nonempty"));
    }
    if let Some(&v) = seed.iter().find(|&&v| v >= n) {
        return Err(WdmError::param(format!("seed vertex {v} out of range 0..{n}")));
    }
    let mut s = seed.to_vec();
    s.sort_unstable();
    s.dedup();
    Ok(s)
}

fn check_lengths(g: &Graph, tau: &Thresholds) -> Result<()> {
    if tau.len() != g.n() {
        return Err(WdmError::param(format!(
            "{} thresholds for {} vertices",
            tau.len(),
            g.n()
        )));
    }
    Ok(())
}

/// Synchronous greedy process: `G_0` is the seed, and `G_i` holds every
/// unplaced vertex with at least `τ(v)` neighbours in `G_{i-1}`. Stops at
/// the first empty layer.
pub fn greedy_cascade(g: &Graph, tau: &Thresholds, seed: &[usize]) -> Result<CascadeOutcome> {
    check_lengths(g, tau)?;
    let n = g.n();
    let seed = normalize_seed(n, seed)?;
    let mut placed = vec![false; n];
    for &v in &seed {
        placed[v] = true;
    }
    let mut count = vec![0u32; n];
    let mut touched = Vec::new();
    let mut layers = vec![seed];
    loop {
        let prev = layers.last().expect("at least the seed layer");
        let mut next = Vec::new();
        for &u in prev {
            for &v in g.neighbors(u) {
                if placed[v] {
                    continue;
                }
                if count[v] == 0 {
                    touched.push(v);
                }
                count[v] += 1;
                if count[v] == tau.get(v) {
                    next.push(v);
                }
            }
        }
        for v in touched.drain(..) {
            count[v] = 0;
        }
        if next.is_empty() {
            break;
        }
        for &v in &next {
            placed[v] = true;
        }
        layers.push(next);
    }
    let unactivated: Vec<usize> = (0..n).filter(|&v| !placed[v]).collect();
    Ok(CascadeOutcome {
        complete: unactivated.is_empty(),
        partition: LayerPartition::new(layers),
        unactivated,
    })
}

/// Cumulative process: a vertex activates once `τ(v)` of its neighbours are
/// active at any earlier time. Returns which vertices end up active.
pub fn dynamic_closure(g: &Graph, tau: &Thresholds, seed: &[usize]) -> Result<Vec<bool>> {
    check_lengths(g, tau)?;
    let n = g.n();
    let mut active = vec![false; n];
    let mut count = vec![0u32; n];
    let mut queue = Vec::new();
    for &v in seed {
        if v >= n {
            return Err(WdmError::param(format!("seed vertex {v} out of range 0..{n}")));
        }
        if !active[v] {
            active[v] = true;
            queue.push(v);
        }
    }
    while let Some(u) = queue.pop() {
        for &v in g.neighbors(u) {
            if active[v] {
                continue;
            }
            count[v] += 1;
            if count[v] >= tau.get(v) {
                active[v] = true;
                queue.push(v);
            }
        }
    }
    Ok(active)
}

/// True iff the cumulative process from `seed` activates every vertex.
/// The process is monotone, so running it to a fixpoint decides the question.
pub fn check_dynamic_monopoly(g: &Graph, tau: &Thresholds, seed: &[usize]) -> Result<bool> {
    Ok(dynamic_closure(g, tau, seed)?.into_iter().all(|a| a))
}

/// True iff every vertex outside `seed` has at least `τ(v)` neighbours in it.
pub fn check_monopoly(g: &Graph, tau: &Thresholds, seed: &[usize]) -> Result<bool> {
    check_lengths(g, tau)?;
    let n = g.n();
    let mut inside = vec![false; n];
    for &v in seed {
        if v >= n {
            return Err(WdmError::param(format!("seed vertex {v} out of range 0..{n}")));
        }
        inside[v] = true;
    }
    Ok((0..n).filter(|&v| !inside[v]).all(|v| {
        g.neighbors(v).iter().filter(|&&u| inside[u]).count() >= tau.get(v) as usize
    }))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::graph::{assign_threshold, build_cycle, build_complete, join, ThresholdMode};

    /// The six-vertex instance on which greedy activation is incomplete:
    /// `s1=0, s2=1, u=2, v=3, p=4, w=5`.
    pub(crate) fn w6() -> (Graph, Thresholds) {
        let g = Graph::from_edges(6, [(0, 2), (1, 2), (0, 3), (2, 3), (2, 4), (3, 5), (4, 5)])
            .unwrap();
        let tau = Thresholds::explicit(&g, vec![1, 1, 2, 1, 1, 2]).unwrap();
        (g, tau)
    }

    fn strict(g: &Graph) -> Thresholds {
        assign_threshold(g, ThresholdMode::StrictMajority).unwrap()
    }

    #[test]
    fn single_layer_partition_is_valid() {
        let g = build_cycle(5).unwrap();
        let p = LayerPartition::new(vec![(0..5).collect()]);
        assert_eq!(verify_wdm_partition(&g, &strict(&g), &p), Ok(()));
        assert_eq!(p.t(), 0);
    }

    #[test]
    fn one_seed_on_c5_is_not_enough() {
        let g = build_cycle(5).unwrap();
        let p = LayerPartition::new(vec![vec![0], vec![1, 2, 3, 4]]);
        assert!(matches!(
            verify_wdm_partition(&g, &strict(&g), &p),
            Err(PartitionDefect::Unsupported { .. })
        ));
    }

    #[test]
    fn malformed_partitions_report_a_reason() {
        let g = build_cycle(4).unwrap();
        let tau = strict(&g);
        let cases = [
            (vec![vec![0, 2], vec![1, 3, 4]], PartitionDefect::OutOfRange(4)),
            (vec![vec![0, 2], vec![1, 2, 3]], PartitionDefect::Repeated(2)),
            (vec![vec![0, 2], vec![1]], PartitionDefect::Missing(3)),
            (vec![vec![], vec![0, 1, 2, 3]], PartitionDefect::EmptySeed),
            (vec![vec![0, 2], vec![], vec![1, 3]], PartitionDefect::EmptyLayer(1)),
        ];
        for (layers, defect) in cases {
            assert_eq!(
                verify_wdm_partition(&g, &tau, &LayerPartition::new(layers)),
                Err(defect)
            );
        }
    }

    #[test]
    fn trailing_empty_layers_are_trimmed() {
        let p = LayerPartition::new(vec![vec![1, 0], vec![2], vec![], vec![]]);
        assert_eq!(p.t(), 1);
        assert_eq!(p.seed(), &[0, 1]);
    }

    #[test]
    fn greedy_on_c5_from_three_vertices() {
        let g = build_cycle(5).unwrap();
        let tau = strict(&g);
        let out = greedy_cascade(&g, &tau, &[0, 1, 3]).unwrap();
        assert!(out.complete);
        assert_eq!(out.partition.t(), 1);
        assert!(is_wdm_partition(&g, &tau, &out.partition));
    }

    #[test]
    fn greedy_is_incomplete_on_w6() {
        let (g, tau) = w6();
        let out = greedy_cascade(&g, &tau, &[0, 1]).unwrap();
        assert!(!out.complete);
        assert_eq!(out.unactivated, vec![5]);
        assert_eq!(
            out.partition.layers(),
            &[vec![0, 1], vec![2, 3], vec![4]]
        );
    }

    #[test]
    fn wheel_dynamic_but_not_greedy_weak() {
        let k1 = build_complete(1).unwrap();
        let g = join(&k1, &build_cycle(8).unwrap()).unwrap();
        let tau = assign_threshold(&g, ThresholdMode::SimpleMajority).unwrap();
        assert!(check_dynamic_monopoly(&g, &tau, &[0, 1]).unwrap());
        assert!(!greedy_cascade(&g, &tau, &[0, 1]).unwrap().complete);
    }

    #[test]
    fn dynamic_monopoly_examples() {
        let g = build_cycle(5).unwrap();
        let tau = strict(&g);
        assert!(!check_dynamic_monopoly(&g, &tau, &[0, 1]).unwrap());
        assert!(check_dynamic_monopoly(&g, &tau, &[0, 1, 2, 3, 4]).unwrap());
    }

    #[test]
    fn monopoly_examples() {
        let g = build_cycle(6).unwrap();
        let tau = strict(&g);
        assert!(check_monopoly(&g, &tau, &[0, 2, 4]).unwrap());
        assert!(!check_monopoly(&g, &tau, &[0, 1, 2]).unwrap());
        assert!(check_monopoly(&g, &tau, &[0, 1, 2, 3, 4, 5]).unwrap());
    }

    #[test]
    fn empty_seed_is_rejected() {
        let g = build_cycle(4).unwrap();
        assert!(greedy_cascade(&g, &strict(&g), &[]).is_err());
    }
}
