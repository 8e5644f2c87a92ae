//! Minimum monopolies, dynamic monopolies and weak dynamic monopolies.
//!
//! The exact solvers try seed sizes `s = |forced|, |forced| + 1, ...` and,
//! for each `s`, walk the free vertices in id order deciding "in" before
//! "out", so the first witness found is the lexicographically least one of
//! minimum size. A branch is cut as soon as every set it can still reach
//! fails the cumulative (or one-round) test: both properties are monotone
//! under adding vertices, and every weak dynamic monopoly is a dynamic one.

use serde::{Deserialize, Serialize};

use crate::cascade::{greedy_cascade, ExactSearch, LayerPartition, DEFAULT_EXACT_CAP};
use crate::error::{Result, WdmError};
use crate::graph::{Graph, Thresholds};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MonopolyKind {
    #[serde(rename = "mono")]
    Monopoly,
    #[serde(rename = "dyn")]
    Dynamic,
    #[serde(rename = "wdm")]
    Weak,
}

impl MonopolyKind {
    pub fn parse(s: &str) -> Option<MonopolyKind> {
        match s {
            "mono" => Some(MonopolyKind::Monopoly),
            "dyn" => Some(MonopolyKind::Dynamic),
            "wdm" => Some(MonopolyKind::Weak),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MonopolyKind::Monopoly => "mono",
            MonopolyKind::Dynamic => "dyn",
            MonopolyKind::Weak => "wdm",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    /// Search-tree nodes of the subset enumeration.
    pub nodes: u64,
    /// Branches cut by the superset test.
    pub pruned: u64,
    /// Complete candidate sets tested.
    pub candidates: u64,
    /// Candidates that needed the exact partition search.
    pub exact_checks: u64,
    pub exact_nodes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolveResult {
    pub kind: MonopolyKind,
    pub size: usize,
    pub witness: Vec<usize>,
    /// Weak kind only.
    pub partition: Option<LayerPartition>,
    /// False for heuristic results, whose size is only an upper bound.
    pub exact: bool,
    pub explored: SearchStats,
}

/// Knobs for the exact solvers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOptions {
    /// Largest vertex count accepted (at most 64).
    pub cap: usize,
    /// Vertices every candidate must contain.
    pub include: Vec<usize>,
    /// Vertices no candidate may contain.
    pub exclude: Vec<usize>,
    /// Put vertex 0 in every candidate. Only sound when the automorphism
    /// group acts transitively, as on cycles and tori.
    pub vertex_transitive: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            cap: DEFAULT_EXACT_CAP,
            include: Vec::new(),
            exclude: Vec::new(),
            vertex_transitive: false,
        }
    }
}

impl SolveOptions {
    pub fn with_cap(cap: usize) -> SolveOptions {
        SolveOptions {
            cap,
            ..SolveOptions::default()
        }
    }
}

pub fn min_wdm(g: &Graph, tau: &Thresholds) -> Result<SolveResult> {
    min_wdm_with(g, tau, &SolveOptions::default())
}

pub fn min_dyn(g: &Graph, tau: &Thresholds) -> Result<SolveResult> {
    min_dyn_with(g, tau, &SolveOptions::default())
}

pub fn min_mono(g: &Graph, tau: &Thresholds) -> Result<SolveResult> {
    min_mono_with(g, tau, &SolveOptions::default())
}

pub fn min_wdm_with(g: &Graph, tau: &Thresholds, opts: &SolveOptions) -> Result<SolveResult> {
    Solver::new(g, tau, opts, MonopolyKind::Weak)?.run()
}

pub fn min_dyn_with(g: &Graph, tau: &Thresholds, opts: &SolveOptions) -> Result<SolveResult> {
    Solver::new(g, tau, opts, MonopolyKind::Dynamic)?.run()
}

pub fn min_mono_with(g: &Graph, tau: &Thresholds, opts: &SolveOptions) -> Result<SolveResult> {
    Solver::new(g, tau, opts, MonopolyKind::Monopoly)?.run()
}

/// Dispatches on `kind`.
pub fn min_kind_with(
    g: &Graph,
    tau: &Thresholds,
    kind: MonopolyKind,
    opts: &SolveOptions,
) -> Result<SolveResult> {
    Solver::new(g, tau, opts, kind)?.run()
}

struct Solver<'a> {
    kind: MonopolyKind,
    adj: Vec<u64>,
    tau: &'a [u32],
    all: u64,
    forced: u64,
    free: Vec<usize>,
    // free_after[i]: mask of free[i..]
    free_after: Vec<u64>,
    exact: ExactSearch<'a>,
    stats: SearchStats,
}

impl<'a> Solver<'a> {
    fn new(
        g: &'a Graph,
        tau: &'a Thresholds,
        opts: &SolveOptions,
        kind: MonopolyKind,
    ) -> Result<Solver<'a>> {
        let n = g.n();
        let exact = ExactSearch::with_cap(g, tau, opts.cap).map_err(|e| match e {
            WdmError::CapabilityExceeded { size, cap, .. } => WdmError::CapabilityExceeded {
                what: "exact solver",
                size,
                cap,
            },
            e => e,
        })?;
        let adj = g.masks().expect("cap keeps n <= 64");
        let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let to_mask = |list: &[usize]| -> Result<u64> {
            list.iter().try_fold(0u64, |m, &v| {
                if v >= n {
                    Err(WdmError::param(format!("vertex {v} out of range 0..{n}")))
                } else {
                    Ok(m | (1 << v))
                }
            })
        };
        let excluded = to_mask(&opts.exclude)?;
        let mut forced = to_mask(&opts.include)?;
        if opts.vertex_transitive && n > 0 {
            forced |= 1;
        }
        // a vertex that can never gather enough support must be seeded
        for v in 0..n {
            if tau.get(v) as usize > g.degree(v) {
                forced |= 1 << v;
            }
        }
        if forced & excluded != 0 {
            let v = (forced & excluded).trailing_zeros();
            return Err(WdmError::Infeasible(format!(
                "vertex {v} is both forced into and excluded from the seed"
            )));
        }
        let free: Vec<usize> = (0..n)
            .filter(|&v| (forced | excluded) >> v & 1 == 0)
            .collect();
        let mut free_after = vec![0u64; free.len() + 1];
        for i in (0..free.len()).rev() {
            free_after[i] = free_after[i + 1] | 1 << free[i];
        }
        Ok(Solver {
            kind,
            adj,
            tau: tau.as_slice(),
            all,
            forced,
            free,
            free_after,
            exact,
            stats: SearchStats::default(),
        })
    }

    fn run(mut self) -> Result<SolveResult> {
        if !self.superset_ok(self.forced | self.free_after[0]) {
            return Err(WdmError::Infeasible(format!(
                "no {} avoids the excluded vertices",
                self.kind.name()
            )));
        }
        let lo = self.forced.count_ones() as usize;
        for s in lo..=lo + self.free.len() {
            if let Some((mask, partition)) = self.dfs(0, self.forced, s) {
                let witness: Vec<usize> = (0..64).filter(|&v| mask >> v & 1 == 1).collect();
                self.stats.exact_nodes = self.exact.nodes();
                return Ok(SolveResult {
                    kind: self.kind,
                    size: witness.len(),
                    witness,
                    partition,
                    exact: true,
                    explored: self.stats,
                });
            }
        }
        unreachable!("the full candidate set passed the superset test")
    }

    fn dfs(&mut self, i: usize, chosen: u64, s: usize) -> Option<(u64, Option<LayerPartition>)> {
        self.stats.nodes += 1;
        let size = chosen.count_ones() as usize;
        if size == s {
            return self.leaf(chosen);
        }
        if size + (self.free.len() - i) < s {
            return None;
        }
        if !self.superset_ok(chosen | self.free_after[i]) {
            self.stats.pruned += 1;
            return None;
        }
        let v = self.free[i];
        self.dfs(i + 1, chosen | 1 << v, s)
            .or_else(|| self.dfs(i + 1, chosen, s))
    }

    fn superset_ok(&self, mask: u64) -> bool {
        match self.kind {
            MonopolyKind::Monopoly => self.covers_in_one_round(mask),
            MonopolyKind::Dynamic | MonopolyKind::Weak => self.cumulative_closure(mask) == self.all,
        }
    }

    fn leaf(&mut self, mask: u64) -> Option<(u64, Option<LayerPartition>)> {
        self.stats.candidates += 1;
        match self.kind {
            MonopolyKind::Monopoly => self.covers_in_one_round(mask).then_some((mask, None)),
            MonopolyKind::Dynamic => {
                (self.cumulative_closure(mask) == self.all).then_some((mask, None))
            }
            MonopolyKind::Weak => {
                if self.cumulative_closure(mask) != self.all {
                    return None;
                }
                if let Some(p) = self.greedy_layers(mask) {
                    return Some((mask, Some(p)));
                }
                self.stats.exact_checks += 1;
                self.exact
                    .partition_mask(mask, None)
                    .map(|p| (mask, Some(p)))
            }
        }
    }

    fn cumulative_closure(&self, mut active: u64) -> u64 {
        loop {
            let mut next = active;
            let mut rest = self.all & !active;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if (self.adj[v] & active).count_ones() >= self.tau[v] {
                    next |= 1 << v;
                }
            }
            if next == active {
                return active;
            }
            active = next;
        }
    }

    fn covers_in_one_round(&self, seed: u64) -> bool {
        let mut rest = self.all & !seed;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if (self.adj[v] & seed).count_ones() < self.tau[v] {
                return false;
            }
        }
        true
    }

    fn greedy_layers(&self, seed: u64) -> Option<LayerPartition> {
        let mut layers = vec![seed];
        let mut placed = seed;
        while placed != self.all {
            let prev = *layers.last().expect("nonempty");
            let mut next = 0u64;
            let mut rest = self.all & !placed;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if (self.adj[v] & prev).count_ones() >= self.tau[v] {
                    next |= 1 << v;
                }
            }
            if next == 0 {
                return None;
            }
            placed |= next;
            layers.push(next);
        }
        Some(LayerPartition::new(
            layers
                .into_iter()
                .map(|m| (0..64).filter(|&v| m >> v & 1 == 1).collect())
                .collect(),
        ))
    }
}

/// Upper bound on the minimum weak dynamic monopoly: start from the whole
/// vertex set and drop vertices, highest id first, while the greedy process
/// still completes. No size cap.
pub fn greedy_wdm(g: &Graph, tau: &Thresholds) -> Result<SolveResult> {
    greedy_wdm_from(g, tau, None)
}

/// As [`greedy_wdm`], starting from `hint` when the greedy process completes
/// from it.
pub fn greedy_wdm_from(g: &Graph, tau: &Thresholds, hint: Option<&[usize]>) -> Result<SolveResult> {
    let n = g.n();
    if n == 0 {
        return Err(WdmError::param("graph has no vertices"));
    }
    let all: Vec<usize> = (0..n).collect();
    let mut seed = match hint {
        Some(h) if !h.is_empty() && greedy_cascade(g, tau, h)?.complete => {
            let mut h = h.to_vec();
            h.sort_unstable();
            h.dedup();
            h
        }
        _ => all,
    };
    let mut stats = SearchStats::default();
    for v in (0..n).rev() {
        let Ok(pos) = seed.binary_search(&v) else {
            continue;
        };
        if seed.len() == 1 {
            break;
        }
        let mut trial = seed.clone();
        trial.remove(pos);
        stats.candidates += 1;
        if greedy_cascade(g, tau, &trial)?.complete {
            seed = trial;
        }
    }
    let partition = greedy_cascade(g, tau, &seed)?.partition;
    Ok(SolveResult {
        kind: MonopolyKind::Weak,
        size: seed.len(),
        witness: seed,
        partition: Some(partition),
        exact: false,
        explored: stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cascade::{check_dynamic_monopoly, check_monopoly, exact_wdm_partition, is_wdm_partition};
    use crate::graph::{
        assign_threshold, blowup_cycle, build_complete, build_cycle, edgeless, join, random_graph,
        ThresholdMode,
    };
    use proptest::prelude::*;

    fn strict(g: &Graph) -> Thresholds {
        assign_threshold(g, ThresholdMode::StrictMajority).unwrap()
    }

    // Smallest size over all subsets, by brute force.
    fn oracle(g: &Graph, tau: &Thresholds, kind: MonopolyKind) -> usize {
        let n = g.n();
        (1u64..1 << n)
            .filter(|m| {
                let s: Vec<usize> = (0..n).filter(|&v| m >> v & 1 == 1).collect();
                match kind {
                    MonopolyKind::Monopoly => check_monopoly(g, tau, &s).unwrap(),
                    MonopolyKind::Dynamic => check_dynamic_monopoly(g, tau, &s).unwrap(),
                    MonopolyKind::Weak => exact_wdm_partition(g, tau, &s, None).unwrap().is_some(),
                }
            })
            .map(|m| m.count_ones() as usize)
            .min()
            .unwrap()
    }

    #[test]
    fn cycles_have_equal_parameters() {
        for n in [5, 6] {
            let g = build_cycle(n).unwrap();
            let tau = strict(&g);
            let want = n.div_ceil(2);
            assert_eq!(min_wdm(&g, &tau).unwrap().size, want);
            assert_eq!(min_dyn(&g, &tau).unwrap().size, want);
            assert_eq!(min_mono(&g, &tau).unwrap().size, want);
        }
    }

    #[test]
    fn wheel_has_small_dynamo() {
        let g = join(&build_complete(1).unwrap(), &build_cycle(8).unwrap()).unwrap();
        let tau = assign_threshold(&g, ThresholdMode::SimpleMajority).unwrap();
        assert_eq!(min_dyn(&g, &tau).unwrap().size, 2);
    }

    #[test]
    fn edgeless_needs_every_vertex() {
        let g = edgeless(4);
        let tau = assign_threshold(&g, ThresholdMode::Constant(1)).unwrap();
        let r = min_dyn(&g, &tau).unwrap();
        assert_eq!(r.witness, vec![0, 1, 2, 3]);
    }

    #[test]
    fn triangle_with_unit_thresholds() {
        let g = build_complete(3).unwrap();
        let tau = assign_threshold(&g, ThresholdMode::Constant(1)).unwrap();
        let r = min_mono(&g, &tau).unwrap();
        assert_eq!((r.size, r.witness.clone()), (1, vec![0]));
    }

    #[test]
    fn blowup_separates_weak_from_one_round() {
        let g = blowup_cycle(4).unwrap();
        let tau = assign_threshold(&g, ThresholdMode::SimpleMajority).unwrap();
        let w = min_wdm(&g, &tau).unwrap();
        assert!(w.size < min_mono(&g, &tau).unwrap().size);
        assert!(is_wdm_partition(&g, &tau, w.partition.as_ref().unwrap()));
    }

    #[test]
    fn exclusion_and_inclusion() {
        let g = build_cycle(6).unwrap();
        let tau = strict(&g);
        let opts = SolveOptions {
            exclude: vec![0],
            ..SolveOptions::default()
        };
        let r = min_wdm_with(&g, &tau, &opts).unwrap();
        assert!(!r.witness.contains(&0));
        assert_eq!(r.size, 3);
        let opts = SolveOptions {
            exclude: (0..6).collect(),
            ..SolveOptions::default()
        };
        assert!(matches!(min_wdm_with(&g, &tau, &opts), Err(WdmError::Infeasible(_))));
    }

    #[test]
    fn over_cap() {
        let g = build_cycle(25).unwrap();
        assert!(matches!(
            min_wdm(&g, &strict(&g)),
            Err(WdmError::CapabilityExceeded { what: "exact solver", .. })
        ));
    }

    #[test]
    fn greedy_heuristic_on_c8() {
        let g = build_cycle(8).unwrap();
        let tau = strict(&g);
        let r = greedy_wdm(&g, &tau).unwrap();
        assert!((4..=8).contains(&r.size));
        assert!(greedy_cascade(&g, &tau, &r.witness).unwrap().complete);
        assert!(!r.exact);
    }

    #[test]
    fn greedy_heuristic_without_proper_witness() {
        let g = edgeless(3);
        let tau = assign_threshold(&g, ThresholdMode::Constant(1)).unwrap();
        assert_eq!(greedy_wdm(&g, &tau).unwrap().size, 3);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn exact_solvers_match_subset_oracle(n in 1usize..=8, p in 0.1f64..0.9, seed: u64) {
            let g = random_graph(n, p, seed).unwrap();
            let tau = strict(&g);
            let d = min_dyn(&g, &tau).unwrap();
            let w = min_wdm(&g, &tau).unwrap();
            let m = min_mono(&g, &tau).unwrap();
            prop_assert_eq!(d.size, oracle(&g, &tau, MonopolyKind::Dynamic));
            prop_assert_eq!(w.size, oracle(&g, &tau, MonopolyKind::Weak));
            prop_assert_eq!(m.size, oracle(&g, &tau, MonopolyKind::Monopoly));
            prop_assert!(d.size <= w.size && w.size <= m.size);
            prop_assert!(is_wdm_partition(&g, &tau, w.partition.as_ref().unwrap()));
            prop_assert_eq!(w.partition.as_ref().unwrap().seed(), w.witness.as_slice());
            prop_assert!(check_dynamic_monopoly(&g, &tau, &d.witness).unwrap());
            prop_assert!(check_monopoly(&g, &tau, &m.witness).unwrap());
        }

        #[test]
        fn heuristic_is_an_upper_bound(n in 1usize..=9, p in 0.1f64..0.9, seed: u64) {
            let g = random_graph(n, p, seed).unwrap();
            let tau = strict(&g);
            let h = greedy_wdm(&g, &tau).unwrap();
            prop_assert!(h.size >= min_wdm(&g, &tau).unwrap().size);
            prop_assert!(greedy_cascade(&g, &tau, &h.witness).unwrap().complete);
        }
    }
}
