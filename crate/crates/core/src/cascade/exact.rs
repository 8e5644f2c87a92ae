//! Exact layer-partition search.
//!
//! Every non-seed vertex gets a label in `1..=T` (its layer); a label `ℓ` is
//! kept in a vertex's domain only while at least `τ(v)` neighbours can still
//! take `ℓ - 1`. Domains are `u64` bitmasks, so graphs are limited to 64
//! vertices and labels to 63.

use super::{normalize_seed, LayerPartition};
use crate::error::{Result, WdmError};
use crate::graph::{Graph, Thresholds};

/// Default vertex cap for exact searches.
pub const DEFAULT_EXACT_CAP: usize = 24;
/// No cap can exceed this: domains and seed sets are 64-bit masks.
pub const EXACT_HARD_LIMIT: usize = 64;

const MAX_LABEL: usize = 63;

/// Smallest and largest processing time over every valid partition of a
/// seed, with a partition attaining each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcessingTimeRange {
    pub t_min: usize,
    pub t_max: usize,
    pub fastest: LayerPartition,
    pub slowest: LayerPartition,
}

/// Reusable exact checker for one `(g, τ)` pair.
#[derive(Debug)]
pub struct ExactSearch<'a> {
    g: &'a Graph,
    tau: &'a Thresholds,
    nodes: u64,
}

impl<'a> ExactSearch<'a> {
    pub fn new(g: &'a Graph, tau: &'a Thresholds) -> Result<ExactSearch<'a>> {
        Self::with_cap(g, tau, DEFAULT_EXACT_CAP)
    }

    /// Fails with a capability error when `g` has more than `cap` vertices
    /// (`cap` itself is clamped to [`EXACT_HARD_LIMIT`]).
    pub fn with_cap(g: &'a Graph, tau: &'a Thresholds, cap: usize) -> Result<ExactSearch<'a>> {
        if tau.len() != g.n() {
            return Err(WdmError::param(format!(
                "{} thresholds for {} vertices",
                tau.len(),
                g.n()
            )));
        }
        let cap = cap.min(EXACT_HARD_LIMIT);
        if g.n() > cap {
            return Err(WdmError::CapabilityExceeded {
                what: "exact partition search",
                size: g.n(),
                cap,
            });
        }
        Ok(ExactSearch { g, tau, nodes: 0 })
    }

    /// Search nodes visited so far, across all calls.
    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    /// A valid partition with `D_0 = seed` and `t <= max_t`, if one exists.
    pub fn partition(
        &mut self,
        seed: &[usize],
        max_t: Option<usize>,
    ) -> Result<Option<LayerPartition>> {
        let mask = self.seed_mask(seed)?;
        Ok(self.partition_mask(mask, max_t))
    }

    /// `t_min` and `t_max` over all valid partitions with `D_0 = seed`.
    pub fn time_range(&mut self, seed: &[usize]) -> Result<Option<ProcessingTimeRange>> {
        let mask = self.seed_mask(seed)?;
        Ok(self.time_range_mask(mask))
    }

    fn seed_mask(&self, seed: &[usize]) -> Result<u64> {
        let seed = normalize_seed(self.g.n(), seed)?;
        Ok(seed.iter().fold(0u64, |m, &v| m | (1 << v)))
    }

    fn all_mask(&self) -> u64 {
        low_bits(self.g.n())
    }

    fn default_top(&self, seed_mask: u64) -> usize {
        (self.g.n() - seed_mask.count_ones() as usize).min(MAX_LABEL)
    }

    pub(crate) fn partition_mask(
        &mut self,
        seed_mask: u64,
        max_t: Option<usize>,
    ) -> Option<LayerPartition> {
        if seed_mask == self.all_mask() {
            return Some(single_layer(seed_mask));
        }
        let top = max_t.map_or(self.default_top(seed_mask), |t| {
            t.min(self.default_top(seed_mask))
        });
        self.labels(seed_mask, top, false)
            .map(|l| LayerPartition::from_labels(&l))
    }

    pub(crate) fn time_range_mask(&mut self, seed_mask: u64) -> Option<ProcessingTimeRange> {
        if seed_mask == self.all_mask() {
            let p = single_layer(seed_mask);
            return Some(ProcessingTimeRange {
                t_min: 0,
                t_max: 0,
                fastest: p.clone(),
                slowest: p,
            });
        }
        let top = self.default_top(seed_mask);
        let first = LayerPartition::from_labels(&self.labels(seed_mask, top, false)?);
        let t0 = first.t();

        let mut fastest = first.clone();
        for t in 1..t0 {
            if let Some(l) = self.labels(seed_mask, t, false) {
                fastest = LayerPartition::from_labels(&l);
                break;
            }
        }

        // No partition can use a label that propagation already rules out.
        let reach = {
            let csp = Csp::new(self.g, self.tau, top, false);
            let mut dom = csp.initial(seed_mask);
            csp.propagate(&mut dom);
            dom.iter().map(|&d| 63 - d.leading_zeros() as usize).max().unwrap_or(0)
        };
        let mut slowest = first;
        for t in (t0 + 1..=reach).rev() {
            if let Some(l) = self.labels(seed_mask, t, true) {
                slowest = LayerPartition::from_labels(&l);
                break;
            }
        }
        Some(ProcessingTimeRange {
            t_min: fastest.t(),
            t_max: slowest.t(),
            fastest,
            slowest,
        })
    }

    fn labels(&mut self, seed_mask: u64, top: usize, require_top: bool) -> Option<Vec<usize>> {
        if top == 0 {
            return None;
        }
        let mut csp = Csp::new(self.g, self.tau, top, require_top);
        let dom = csp.initial(seed_mask);
        let found = csp.search(dom);
        self.nodes += csp.nodes;
        found.map(|d| d.iter().map(|&b| b.trailing_zeros() as usize).collect())
    }
}

fn single_layer(seed_mask: u64) -> LayerPartition {
    LayerPartition::new(vec![(0..64).filter(|&v| seed_mask >> v & 1 == 1).collect()])
}

fn low_bits(k: usize) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

/// Exact partition search with the default cap.
pub fn exact_wdm_partition(
    g: &Graph,
    tau: &Thresholds,
    seed: &[usize],
    max_t: Option<usize>,
) -> Result<Option<LayerPartition>> {
    ExactSearch::new(g, tau)?.partition(seed, max_t)
}

/// Processing-time range with the default cap; `None` when `seed` is not a
/// weak dynamic monopoly.
pub fn processing_time_range(
    g: &Graph,
    tau: &Thresholds,
    seed: &[usize],
) -> Result<Option<ProcessingTimeRange>> {
    ExactSearch::new(g, tau)?.time_range(seed)
}

struct Csp<'a> {
    g: &'a Graph,
    tau: &'a [u32],
    top: usize,
    require_top: bool,
    nodes: u64,
}

impl<'a> Csp<'a> {
    fn new(g: &'a Graph, tau: &'a Thresholds, top: usize, require_top: bool) -> Csp<'a> {
        Csp {
            g,
            tau: tau.as_slice(),
            top,
            require_top,
            nodes: 0,
        }
    }

    fn initial(&self, seed_mask: u64) -> Vec<u64> {
        let labels = low_bits(self.top + 1) & !1;
        (0..self.g.n())
            .map(|v| if seed_mask >> v & 1 == 1 { 1 } else { labels })
            .collect()
    }

    /// Shrinks domains to a fixpoint; false on a wipe-out.
    fn propagate(&self, dom: &mut [u64]) -> bool {
        loop {
            let mut changed = false;
            for v in 0..dom.len() {
                let d = dom[v];
                if d == 1 {
                    continue;
                }
                let nbrs = self.g.neighbors(v);
                let need = self.tau[v];
                let nd = d & supported(nbrs.iter().map(|&u| dom[u] << 1), need, nbrs.len());
                if nd == 0 {
                    return false;
                }
                if nd != d {
                    dom[v] = nd;
                    changed = true;
                }
                if nd.is_power_of_two() {
                    // exactly τ possible supporters: all of them are needed
                    let want = nd >> 1;
                    let mut count = 0;
                    for &u in nbrs {
                        if dom[u] & want != 0 {
                            count += 1;
                        }
                    }
                    if count == need {
                        for &u in nbrs {
                            if dom[u] & want != 0 && dom[u] != want {
                                dom[u] = want;
                                changed = true;
                            }
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        if self.require_top {
            let bit = 1u64 << self.top;
            return dom.iter().any(|&d| d & bit != 0);
        }
        true
    }

    fn search(&mut self, mut dom: Vec<u64>) -> Option<Vec<u64>> {
        self.nodes += 1;
        if !self.propagate(&mut dom) {
            return None;
        }
        let pick = (0..dom.len())
            .filter(|&v| dom[v].count_ones() > 1)
            .min_by_key(|&v| (dom[v].count_ones(), std::cmp::Reverse(self.tau[v]), v));
        let Some(v) = pick else {
            return Some(dom);
        };
        let mut labels: Vec<u32> = (0..64).filter(|&l| dom[v] >> l & 1 == 1).collect();
        if self.require_top {
            labels.reverse();
        }
        for l in labels {
            let mut next = dom.clone();
            next[v] = 1 << l;
            if let Some(found) = self.search(next) {
                return Some(found);
            }
        }
        None
    }
}

/// Bit `ℓ` of the result is set when at least `need` of the masks have bit
/// `ℓ` set. Counts are kept bit-sliced, seven planes wide.
fn supported(masks: impl Iterator<Item = u64>, need: u32, count: usize) -> u64 {
    if need as usize > count {
        return 0;
    }
    let mut planes = [0u64; 7];
    for x in masks {
        let mut carry = x;
        for p in planes.iter_mut() {
            if carry == 0 {
                break;
            }
            let sum = *p ^ carry;
            carry &= *p;
            *p = sum;
        }
    }
    let mut gt = 0u64;
    let mut eq = u64::MAX;
    for k in (0..7).rev() {
        if need >> k & 1 == 1 {
            eq &= planes[k];
        } else {
            gt |= eq & planes[k];
            eq &= !planes[k];
        }
    }
    gt | eq
}
