//! Extremal families with their promised seeds.
//!
//! Each generator returns the graph, its thresholds and a [`Certificate`]
//! that [`Certificate::verify`] re-checks from scratch. Vertex ids follow a
//! fixed layout, documented per generator, so certificates are reproducible.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cascade::{
    check_dynamic_monopoly, check_monopoly, greedy_cascade, verify_wdm_partition, ExactSearch,
    LayerPartition, EXACT_HARD_LIMIT,
};
use crate::error::{Result, WdmError};
use crate::graph::{
    assign_threshold, build_complete, build_cycle, cartesian_product, join, Graph, ThresholdMode,
    Thresholds,
};
use crate::solvers::MonopolyKind;

/// A promised seed and what it is claimed to achieve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub family: String,
    pub params: BTreeMap<String, u64>,
    pub claim: MonopolyKind,
    pub seed: Vec<usize>,
    pub expected_size: usize,
    pub expected_time: Option<usize>,
    pub partition: Option<LayerPartition>,
    /// The statement the instance witnesses.
    pub provenance: String,
    #[serde(default)]
    pub notes: BTreeMap<String, String>,
}

impl Certificate {
    /// Re-checks the certificate against `g` and `tau`.
    ///
    /// A weak claim without a partition is settled by the greedy process or,
    /// failing that, by exact search when `g` is small enough.
    pub fn verify(&self, g: &Graph, tau: &Thresholds) -> std::result::Result<(), String> {
        if tau.len() != g.n() {
            return Err(format!("{} thresholds for {} vertices", tau.len(), g.n()));
        }
        if self.seed.is_empty() {
            return Err("empty seed".into());
        }
        if self.seed.windows(2).any(|w| w[0] >= w[1]) {
            return Err("seed is not sorted and duplicate-free".into());
        }
        if let Some(&v) = self.seed.iter().find(|&&v| v >= g.n()) {
            return Err(format!("seed vertex {v} out of range"));
        }
        if self.seed.len() != self.expected_size {
            return Err(format!(
                "seed has {} vertices, expected {}",
                self.seed.len(),
                self.expected_size
            ));
        }
        if let Some(p) = &self.partition {
            verify_wdm_partition(g, tau, p).map_err(|d| d.to_string())?;
            if p.seed() != self.seed.as_slice() {
                return Err("partition layer 0 differs from the seed".into());
            }
            if let Some(t) = self.expected_time {
                if p.t() != t {
                    return Err(format!("partition has time {}, expected {t}", p.t()));
                }
            }
        }
        let holds = match self.claim {
            MonopolyKind::Monopoly => {
                check_monopoly(g, tau, &self.seed).map_err(|e| e.to_string())?
            }
            MonopolyKind::Dynamic => {
                check_dynamic_monopoly(g, tau, &self.seed).map_err(|e| e.to_string())?
            }
            MonopolyKind::Weak => {
                self.partition.is_some() || weak_without_partition(g, tau, &self.seed)?
            }
        };
        if holds {
            Ok(())
        } else {
            Err(format!("seed is not a {}", self.claim.name()))
        }
    }
}

fn weak_without_partition(
    g: &Graph,
    tau: &Thresholds,
    seed: &[usize],
) -> std::result::Result<bool, String> {
    if greedy_cascade(g, tau, seed).map_err(|e| e.to_string())?.complete {
        return Ok(true);
    }
    let mut search =
        ExactSearch::with_cap(g, tau, EXACT_HARD_LIMIT).map_err(|e| e.to_string())?;
    Ok(search
        .partition(seed, None)
        .map_err(|e| e.to_string())?
        .is_some())
}

/// A generated instance.
#[derive(Debug, Clone)]
pub struct Construction {
    pub graph: Graph,
    pub tau: Thresholds,
    pub certificate: Certificate,
}

fn params<const N: usize>(pairs: [(&str, u64); N]) -> BTreeMap<String, u64> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn weak_certificate(
    family: &str,
    params: BTreeMap<String, u64>,
    partition: LayerPartition,
    provenance: &str,
) -> Certificate {
    Certificate {
        family: family.into(),
        params,
        claim: MonopolyKind::Weak,
        seed: partition.seed().to_vec(),
        expected_size: partition.seed().len(),
        expected_time: Some(partition.t()),
        partition: Some(partition),
        provenance: provenance.into(),
        notes: BTreeMap::new(),
    }
}

/// `m` disjoint triangles plus a center adjacent to one vertex of each.
///
/// Triangle `j` is `{3j, 3j+1, 3j+2}`, vertex `3j+2` is joined to the center
/// `3m`. Strict majority. The seed takes `3j` and the center-adjacent `3j+2`
/// from every triangle.
pub fn triangles_with_center(m: usize) -> Result<Construction> {
    if m < 1 {
        return Err(WdmError::param("need at least one triangle"));
    }
    let center = 3 * m;
    let mut edges = Vec::with_capacity(4 * m);
    for j in 0..m {
        let (a, b, c) = (3 * j, 3 * j + 1, 3 * j + 2);
        edges.extend([(a, b), (b, c), (a, c), (c, center)]);
    }
    let g = Graph::from_edges(3 * m + 1, edges)?;
    let tau = assign_threshold(&g, ThresholdMode::StrictMajority)?;
    let seed: Vec<usize> = (0..m).flat_map(|j| [3 * j, 3 * j + 2]).collect();
    let p = greedy_cascade(&g, &tau, &seed)?.partition;
    let cert = weak_certificate(
        "triangles_with_center",
        params([("m", m as u64)]),
        p,
        "strict majority: wdyn = 2m on 3m+1 vertices, meeting wdyn <= 2n/3",
    );
    Ok(Construction {
        graph: g,
        tau,
        certificate: cert,
    })
}

/// Cubic graph on `8k + 2` vertices, `k = (2^{t-1} - 1) / 3`, with `τ ≡ 2`
/// and a seed of size `(n + 2) / 4` whose processing time is exactly `t`.
///
/// Layout: `D_0` is ids `0..2k+1` and its last vertex `v = 2k` is the one
/// with only two `D_1` neighbours. `D_1` has `3k + 1` vertices; `D_0`
/// offers `6k + 2` slots (three per vertex, two for `v`, slot `s` owned by
/// vertex `s / 3`), and `D_1` vertex `j` takes slots `j` and `j + 3k + 1`.
/// For `i >= 1`, vertex `j` of `D_{i+1}` is adjacent to vertices `2j` and
/// `2j + 1` of `D_i`, and the single vertex of `D_t` is also adjacent to `v`.
pub fn tight_cubic(t: usize) -> Result<Construction> {
    if t < 3 || t % 2 == 0 {
        return Err(WdmError::param(format!(
            "time must be odd and at least 3, got {t}"
        )));
    }
    if t > 40 {
        return Err(WdmError::param(format!("time {t} is too large to build")));
    }
    let k = ((1usize << (t - 1)) - 1) / 3;
    let mut sizes = vec![2 * k + 1, 3 * k + 1];
    sizes.extend((2..=t).map(|i| 1usize << (t - i)));
    let mut starts = vec![0usize];
    for s in &sizes {
        starts.push(starts.last().unwrap() + s);
    }
    let n = *starts.last().unwrap();
    let v = 2 * k;
    let slot_owner = |s: usize| (s / 3).min(v);

    let mut edges = Vec::with_capacity(3 * n / 2);
    for j in 0..sizes[1] {
        let d1 = starts[1] + j;
        edges.push((slot_owner(j), d1));
        edges.push((slot_owner(j + 3 * k + 1), d1));
    }
    for i in 1..t {
        for j in 0..sizes[i + 1] {
            let w = starts[i + 1] + j;
            edges.push((starts[i] + 2 * j, w));
            edges.push((starts[i] + 2 * j + 1, w));
        }
    }
    edges.push((v, starts[t]));
    let g = Graph::from_edges(n, edges)?;
    let tau = assign_threshold(&g, ThresholdMode::Constant(2))?;
    let layers = (0..=t).map(|i| (starts[i]..starts[i + 1]).collect()).collect();
    let cert = weak_certificate(
        "tight_cubic",
        params([("t", t as u64), ("k", k as u64)]),
        LayerPartition::new(layers),
        "cubic, tau = 2: a seed of size (n+2)/4 with processing time t",
    );
    Ok(Construction {
        graph: g,
        tau,
        certificate: cert,
    })
}

/// `K_1 ∨ C_n`: hub 0, rim `1..=n`, `τ = ⌈deg/2⌉` (hub `⌈n/2⌉`, rim 2).
/// The certificate is the dynamic monopoly `{hub, 1}`.
pub fn wheel_join(n: usize) -> Result<Construction> {
    let g = join(&build_complete(1)?, &build_cycle(n)?)?;
    let tau = assign_threshold(&g, ThresholdMode::SimpleMajority)?;
    let mut notes = BTreeMap::new();
    notes.insert(
        "weak_lower_bound".to_string(),
        format!("every weak dynamic monopoly has at least n/4 = {}/4 vertices", n),
    );
    let cert = Certificate {
        family: "wheel_join".into(),
        params: params([("n", n as u64)]),
        claim: MonopolyKind::Dynamic,
        seed: vec![0, 1],
        expected_size: 2,
        expected_time: None,
        partition: None,
        provenance: "K_1 join C_n with ceil(deg/2): dyn = 2 while wdyn grows linearly".into(),
        notes,
    };
    Ok(Construction {
        graph: g,
        tau,
        certificate: cert,
    })
}

// Per 4x4 tile: layer of cell (i mod 4, j mod 4).
fn torus_layer(i: usize, j: usize) -> usize {
    const LAST: [(usize, usize); 2] = [(0, 0), (2, 2)];
    const SEED: [(usize, usize); 6] = [(0, 2), (1, 1), (1, 3), (2, 0), (3, 1), (3, 3)];
    let c = (i % 4, j % 4);
    if LAST.contains(&c) {
        2
    } else if SEED.contains(&c) {
        0
    } else {
        1
    }
}

/// `C_n □ C_n` with `τ ≡ 3` and a period-4 seed of density 3/8.
///
/// Cell `(i, j)` has id `i·n + j`. Within each 4×4 tile the last layer is
/// `{(0,0), (2,2)}`, the seed is `{(0,2), (1,1), (1,3), (2,0), (3,1), (3,3)}`
/// and the middle layer is every cell with `i + j` odd.
pub fn torus_pattern(n: usize) -> Result<Construction> {
    if n < 4 || n % 4 != 0 {
        return Err(WdmError::param(format!(
            "side must be a positive multiple of 4, got {n}"
        )));
    }
    let c = build_cycle(n)?;
    let g = cartesian_product(&c, &c)?;
    let tau = assign_threshold(&g, ThresholdMode::Constant(3))?;
    let labels: Vec<usize> = (0..n * n).map(|id| torus_layer(id / n, id % n)).collect();
    let p = LayerPartition::from_labels(&labels);
    let flags = torus_flags(&g, &p);
    let mut cert = weak_certificate(
        "torus_pattern",
        params([("n", n as u64)]),
        p,
        "C_n x C_n with tau = 3 and 4 | n: a seed of size 3n^2/8, two steps",
    );
    for (k, v) in flags {
        cert.notes.insert(k.to_string(), v.to_string());
    }
    Ok(Construction {
        graph: g,
        tau,
        certificate: cert,
    })
}

/// Structural facts of a three-layer torus partition.
pub fn torus_flags(g: &Graph, p: &LayerPartition) -> Vec<(&'static str, bool)> {
    let layers = p.layers();
    let get = |i: usize| layers.get(i).map_or(&[][..], Vec::as_slice);
    let labels = p.labels(g.n());
    let seed_last_edge = get(0)
        .iter()
        .any(|&v| g.neighbors(v).iter().any(|&u| labels[u] == Some(2)));
    vec![
        ("seed_independent", g.is_independent(get(0))),
        ("middle_independent", g.is_independent(get(1))),
        ("last_independent", g.is_independent(get(2))),
        ("no_seed_to_last_edges", !seed_last_edge),
    ]
}

/// `K_{2k} ∨ C_n` with explicit thresholds; clique ids `0..2k`, rim ids
/// `2k..2k+n`. The clique is the seed.
///
/// Requires `k <= max rim τ <= 2k` and `max clique τ <= n`.
pub fn big_join_counterexample(
    k: usize,
    n: usize,
    clique_tau: &[u32],
    rim_tau: &[u32],
) -> Result<Construction> {
    if k < 1 {
        return Err(WdmError::param("k must be at least 1"));
    }
    if clique_tau.len() != 2 * k || rim_tau.len() != n {
        return Err(WdmError::param(format!(
            "need {} clique thresholds and {n} rim thresholds",
            2 * k
        )));
    }
    let rim_max = rim_tau.iter().copied().max().unwrap_or(0) as usize;
    if !(k..=2 * k).contains(&rim_max) {
        return Err(WdmError::param(format!(
            "largest rim threshold {rim_max} is outside [{k}, {}]",
            2 * k
        )));
    }
    let clique_max = clique_tau.iter().copied().max().unwrap_or(0) as usize;
    if clique_max > n {
        return Err(WdmError::param(format!(
            "largest clique threshold {clique_max} exceeds {n}"
        )));
    }
    let g = join(&build_complete(2 * k)?, &build_cycle(n)?)?;
    let tau = Thresholds::explicit(&g, [clique_tau, rim_tau].concat())?;
    let seed: Vec<usize> = (0..2 * k).collect();
    let p = greedy_cascade(&g, &tau, &seed)?.partition;
    let mut cert = weak_certificate(
        "big_join",
        params([("k", k as u64), ("n", n as u64)]),
        p,
        "K_2k join C_n: wdyn <= 2k although the maximum degree is unbounded",
    );
    cert.notes
        .insert("activation".into(), "activates within two steps".into());
    Ok(Construction {
        graph: g,
        tau,
        certificate: cert,
    })
}

/// The 36-vertex tree whose minimum weak dynamic monopoly must contain a
/// leaf.
///
/// Internal vertices keep their labels `1..=15` as ids (a complete binary
/// tree rooted at 1). Vertices 8, 9, 11, 12, 13, 14, 15 each carry three
/// pendant leaves; 10 is itself a leaf. The first pendant leaf of 8 takes
/// id 0, the other twenty take ids 16..=35 in parent order. Strict majority.
pub fn figure4_tree() -> Result<Construction> {
    let mut edges: Vec<(usize, usize)> = (2..=15).map(|c| (c / 2, c)).collect();
    let heavy = [8, 9, 11, 12, 13, 14, 15];
    let mut next = 16;
    let mut pendants = Vec::new();
    for (h, &p) in heavy.iter().enumerate() {
        for r in 0..3 {
            let leaf = if h == 0 && r == 0 {
                0
            } else {
                next += 1;
                next - 1
            };
            edges.push((p, leaf));
            pendants.push(leaf);
        }
    }
    let g = Graph::from_edges(36, edges)?;
    let tau = assign_threshold(&g, ThresholdMode::StrictMajority)?;
    let mut d1 = pendants;
    d1.extend([4, 5, 6, 7]);
    let p = LayerPartition::new(vec![(8..=15).collect(), d1, vec![2, 3], vec![1]]);
    let cert = weak_certificate(
        "figure4_tree",
        BTreeMap::new(),
        p,
        "a tree whose minimum weak dynamic monopoly {8,...,15} contains the leaf 10",
    );
    Ok(Construction {
        graph: g,
        tau,
        certificate: cert,
    })
}
