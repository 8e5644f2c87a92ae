//! MINREP instances and their reduction to weak dynamic monopolies.
//!
//! `reduce_to_wdm` builds the five-class graph `G'` out of `Γ_k` gadgets
//! (a `K_{2,k}` whose `k` middle vertices have threshold 1). Vertex ids are
//! laid out as
//!
//! ```text
//! V_1 = A then B      0 .. N
//! V_2 = u_e, e ∈ E    in edge order
//! V_3 = v_s           in super-edge order
//! V_4 = w_1 .. w_N
//! V_5 = z_1 .. z_N
//! gadget internals    contiguous blocks, in registry order
//! ```
//!
//! and the registry lists gadgets in the order: `a,b – u_e`, `u_e – v_s`,
//! `v_s – w_k`, `V_1 – w_k`, `u_e – z_k`, `v_s – z_k`.

use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cascade::{greedy_cascade, normalize_seed, verify_wdm_partition, CascadeOutcome, LayerPartition};
use crate::error::{Result, WdmError};
use crate::graph::{Graph, Thresholds};

/// Largest `N` accepted by `solve_minrep_bruteforce`.
pub const MINREP_BRUTE_CAP: usize = 12;
/// Default limit on `N` for `reduce_to_wdm`.
pub const DEFAULT_REDUCE_GUARD: usize = 4;
/// Hard limit on the projected size of `G'`, whatever the guard.
pub const MAX_REDUCED_VERTICES: u128 = 4_000_000;

/// A MINREP instance: bipartite `(A, B; E)` with `A` split into `α` equal
/// groups and `B` into `β` equal groups. Elements of each side are numbered
/// from 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinRepInstance {
    a_count: usize,
    b_count: usize,
    edges: Vec<(usize, usize)>,
    a_groups: Vec<Vec<usize>>,
    b_groups: Vec<Vec<usize>>,
    #[serde(skip)]
    a_group_of: Vec<usize>,
    #[serde(skip)]
    b_group_of: Vec<usize>,
}

/// Group pair `(A_i, B_j)` joined by at least one edge; 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SuperEdge {
    pub i: usize,
    pub j: usize,
}

/// Representatives `A' ⊆ A`, `B' ⊆ B`, kept sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct MinRepSolution {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

impl MinRepSolution {
    pub fn new(mut a: Vec<usize>, mut b: Vec<usize>) -> MinRepSolution {
        a.sort_unstable();
        a.dedup();
        b.sort_unstable();
        b.dedup();
        MinRepSolution { a, b }
    }

    pub fn size(&self) -> usize {
        self.a.len() + self.b.len()
    }
}

fn group_index(count: usize, groups: &[Vec<usize>], side: &str) -> Result<Vec<usize>> {
    if groups.is_empty() {
        return Err(WdmError::param(format!("side {side} has no groups")));
    }
    let size = groups[0].len();
    if size == 0 || groups.iter().any(|g| g.len() != size) {
        return Err(WdmError::param(format!(
            "groups of side {side} must be nonempty and equal-sized"
        )));
    }
    let mut of = vec![usize::MAX; count];
    for (gi, g) in groups.iter().enumerate() {
        for &x in g {
            if x >= count {
                return Err(WdmError::param(format!("{side}{x} is out of range 0..{count}")));
            }
            if of[x] != usize::MAX {
                return Err(WdmError::param(format!("{side}{x} is in two groups")));
            }
            of[x] = gi;
        }
    }
    if let Some(x) = of.iter().position(|&g| g == usize::MAX) {
        return Err(WdmError::param(format!("{side}{x} is in no group")));
    }
    Ok(of)
}

impl MinRepInstance {
    /// Validates and builds an instance. `edges` are `(a, b)` pairs.
    pub fn new(
        a_count: usize,
        b_count: usize,
        edges: Vec<(usize, usize)>,
        a_groups: Vec<Vec<usize>>,
        b_groups: Vec<Vec<usize>>,
    ) -> Result<MinRepInstance> {
        if a_count == 0 || b_count == 0 {
            return Err(WdmError::param("both sides must be nonempty"));
        }
        let a_group_of = group_index(a_count, &a_groups, "a")?;
        let b_group_of = group_index(b_count, &b_groups, "b")?;
        let mut edges = edges;
        if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a >= a_count || b >= b_count) {
            return Err(WdmError::param(format!("edge (a{a}, b{b}) is out of range")));
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(WdmError::param(format!(
                "duplicate edge (a{}, b{})",
                w[0].0, w[0].1
            )));
        }
        let mut a_groups = a_groups;
        let mut b_groups = b_groups;
        a_groups.iter_mut().for_each(|g| g.sort_unstable());
        b_groups.iter_mut().for_each(|g| g.sort_unstable());
        Ok(MinRepInstance {
            a_count,
            b_count,
            edges,
            a_groups,
            b_groups,
            a_group_of,
            b_group_of,
        })
    }

    pub fn a_count(&self) -> usize {
        self.a_count
    }

    pub fn b_count(&self) -> usize {
        self.b_count
    }

    /// `N = |A| + |B|`.
    pub fn n(&self) -> usize {
        self.a_count + self.b_count
    }

    /// Edges sorted lexicographically.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn a_groups(&self) -> &[Vec<usize>] {
        &self.a_groups
    }

    pub fn b_groups(&self) -> &[Vec<usize>] {
        &self.b_groups
    }

    pub fn a_group_of(&self, a: usize) -> usize {
        self.a_group_of[a]
    }

    pub fn b_group_of(&self, b: usize) -> usize {
        self.b_group_of[b]
    }

    fn super_edge_of(&self, (a, b): (usize, usize)) -> SuperEdge {
        SuperEdge {
            i: self.a_group_of[a],
            j: self.b_group_of[b],
        }
    }
}

/// Every group pair with a crossing edge, sorted.
pub fn build_supergraph(inst: &MinRepInstance) -> Vec<SuperEdge> {
    let mut out: Vec<SuperEdge> = inst.edges.iter().map(|&e| inst.super_edge_of(e)).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// True when every super-edge has an adjacent representative pair.
/// Out-of-range representatives make the answer `false`.
pub fn verify_minrep(inst: &MinRepInstance, sol: &MinRepSolution) -> bool {
    if sol.a.iter().any(|&a| a >= inst.a_count) || sol.b.iter().any(|&b| b >= inst.b_count) {
        return false;
    }
    let mut in_a = vec![false; inst.a_count];
    let mut in_b = vec![false; inst.b_count];
    sol.a.iter().for_each(|&a| in_a[a] = true);
    sol.b.iter().for_each(|&b| in_b[b] = true);
    let mut covered: Vec<SuperEdge> = inst
        .edges
        .iter()
        .filter(|&&(a, b)| in_a[a] && in_b[b])
        .map(|&e| inst.super_edge_of(e))
        .collect();
    covered.sort_unstable();
    covered.dedup();
    covered.len() == build_supergraph(inst).len()
}

/// Minimum cover by enumeration of subsets of `A ∪ B` in order of size.
pub fn solve_minrep_bruteforce(inst: &MinRepInstance) -> Result<MinRepSolution> {
    let n = inst.n();
    if n > MINREP_BRUTE_CAP {
        return Err(WdmError::CapabilityExceeded {
            what: "MINREP brute force",
            size: n,
            cap: MINREP_BRUTE_CAP,
        });
    }
    let mut masks: Vec<u32> = (0..1u32 << n).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    for mask in masks {
        let pick = |range: Range<usize>, off: usize| -> Vec<usize> {
            range.filter(|&x| mask >> (x + off) & 1 == 1).collect()
        };
        let sol = MinRepSolution::new(pick(0..inst.a_count, 0), pick(0..inst.b_count, inst.a_count));
        if verify_minrep(inst, &sol) {
            return Ok(sol);
        }
    }
    Err(WdmError::Infeasible("no cover exists; the instance is inconsistent".into()))
}

/// A seeded random instance with `2 <= N <= max_n` and at least one edge.
pub fn random_minrep(max_n: usize, seed: u64) -> Result<MinRepInstance> {
    if max_n < 2 {
        return Err(WdmError::param("max_n must be at least 2"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=max_n);
    let a_count = rng.gen_range(1..n);
    let b_count = n - a_count;
    let mut split = |count: usize| -> Vec<Vec<usize>> {
        let divisors: Vec<usize> = (1..=count).filter(|d| count % d == 0).collect();
        let groups = divisors[rng.gen_range(0..divisors.len())];
        let size = count / groups;
        (0..groups).map(|g| (g * size..(g + 1) * size).collect()).collect()
    };
    let a_groups = split(a_count);
    let b_groups = split(b_count);
    let mut edges: Vec<(usize, usize)> = (0..a_count)
        .flat_map(|a| (0..b_count).map(move |b| (a, b)))
        .filter(|_| rng.gen_bool(0.5))
        .collect();
    if edges.is_empty() {
        edges.push((rng.gen_range(0..a_count), rng.gen_range(0..b_count)));
    }
    MinRepInstance::new(a_count, b_count, edges, a_groups, b_groups)
}

/// One `Γ_k` in a built graph: internals are `first .. first + k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Gadget {
    pub u: usize,
    pub w: usize,
    pub k: usize,
    pub first: usize,
}

impl Gadget {
    pub fn internals(&self) -> Range<usize> {
        self.first..self.first + self.k
    }
}

/// Accumulates a graph made of base vertices joined by gadgets.
#[derive(Debug, Clone)]
pub struct GadgetBuilder {
    base: usize,
    tau: Vec<u32>,
    edges: Vec<(usize, usize)>,
    gadgets: Vec<Gadget>,
}

impl GadgetBuilder {
    /// Starts from `base_tau.len()` base vertices with the given thresholds.
    pub fn new(base_tau: Vec<u32>) -> GadgetBuilder {
        GadgetBuilder {
            base: base_tau.len(),
            tau: base_tau,
            edges: Vec::new(),
            gadgets: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.tau.len()
    }

    /// Joins base vertices `u` and `w` by `k` fresh vertices of threshold 1.
    pub fn build_gadget(&mut self, k: usize, u: usize, w: usize) -> Result<Gadget> {
        if k == 0 {
            return Err(WdmError::param("gadget size must be at least 1"));
        }
        if u == w || u >= self.base || w >= self.base {
            return Err(WdmError::param(format!(
                "gadget endpoints {u}, {w} must be distinct base vertices"
            )));
        }
        let first = self.tau.len();
        for x in first..first + k {
            self.tau.push(1);
            self.edges.push((u, x));
            self.edges.push((x, w));
        }
        let g = Gadget { u, w, k, first };
        self.gadgets.push(g);
        Ok(g)
    }

    pub fn finish(self) -> Result<(Graph, Thresholds, Vec<Gadget>)> {
        let g = Graph::from_edges(self.tau.len(), self.edges)?;
        let tau = Thresholds::explicit(&g, self.tau)?;
        Ok((g, tau, self.gadgets))
    }
}

/// Exponents of `N` in the gadget sizes and thresholds of `G'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Exponents {
    /// `τ(V_1) = N^v1`.
    pub v1: u32,
    /// `Γ_{N^x}` between `a, b` and `u_e`; `τ(V_2) = 2N^x`.
    pub pair_edge: u32,
    /// `Γ_{N^x}` between `u_e` and `v_s`; `τ(V_3) = N^x`.
    pub edge_super: u32,
    /// `Γ_{N^x}` between `v_s` and `w_k`; `τ(V_4) = M·N^x`.
    pub super_w: u32,
    /// `Γ_{N^x}` between `V_1` and `w_k`.
    pub rep_w: u32,
    /// `Γ_{2N^x}` between `u_e` and `z_k`.
    pub edge_z: u32,
    /// `Γ_{2N^x}` between `v_s` and `z_k`; `τ(V_5) = 2M·N^x`.
    pub super_z: u32,
}

impl Exponents {
    pub const PROOF: Exponents = Exponents {
        v1: 2,
        pair_edge: 5,
        edge_super: 8,
        super_w: 2,
        rep_w: 1,
        edge_z: 4,
        super_z: 6,
    };

    /// Every exponent divided by `divisor`, rounded up.
    pub fn scaled(divisor: u32) -> Result<Exponents> {
        if divisor == 0 {
            return Err(WdmError::param("exponent divisor must be positive"));
        }
        let s = |e: u32| e.div_ceil(divisor).max(1);
        let p = Exponents::PROOF;
        Ok(Exponents {
            v1: s(p.v1),
            pair_edge: s(p.pair_edge),
            edge_super: s(p.edge_super),
            super_w: s(p.super_w),
            rep_w: s(p.rep_w),
            edge_z: s(p.edge_z),
            super_z: s(p.super_z),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexClass {
    V1,
    V2,
    V3,
    V4,
    V5,
    Internal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReduceOptions {
    pub guard: usize,
    pub exponents: Exponents,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        ReduceOptions {
            guard: DEFAULT_REDUCE_GUARD,
            exponents: Exponents::PROOF,
        }
    }
}

/// `2|V_2|N^a + 2(M-1)N^b < 2MN^b`: with all of `V_2` and all but one of
/// `V_3` active, no `z_k` reaches its threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GapCheck {
    pub lhs: u128,
    pub rhs: u128,
    pub holds: bool,
}

/// The reduced instance `G'` with its class layout and gadget registry.
#[derive(Debug, Clone)]
pub struct ReducedInstance {
    pub graph: Graph,
    pub tau: Thresholds,
    inst: MinRepInstance,
    super_edges: Vec<SuperEdge>,
    edge_super: Vec<usize>,
    exponents: Exponents,
    gadgets: Vec<Gadget>,
    gap: GapCheck,
}

fn pow(n: usize, e: u32) -> u128 {
    (n as u128).pow(e)
}

/// Closed-form vertex count of `G'`.
pub fn projected_vertices(inst: &MinRepInstance, exps: &Exponents) -> u128 {
    let n = inst.n();
    let (nn, e, m) = (n as u128, inst.edges.len() as u128, build_supergraph(inst).len() as u128);
    let internals = e * 2 * pow(n, exps.pair_edge)
        + e * pow(n, exps.edge_super)
        + m * nn * pow(n, exps.super_w)
        + nn * nn * pow(n, exps.rep_w)
        + e * nn * 2 * pow(n, exps.edge_z)
        + m * nn * 2 * pow(n, exps.super_z);
    3 * nn + e + m + internals
}

fn to_u32(x: u128) -> Result<u32> {
    u32::try_from(x).map_err(|_| WdmError::param(format!("threshold {x} does not fit in 32 bits")))
}

fn to_usize(x: u128) -> Result<usize> {
    usize::try_from(x).map_err(|_| WdmError::param(format!("gadget size {x} is too large")))
}

/// Builds `G'` with the exponents of the hardness proof.
pub fn reduce_to_wdm(inst: &MinRepInstance) -> Result<ReducedInstance> {
    reduce_to_wdm_with(inst, &ReduceOptions::default())
}

/// Builds `G'` with custom exponents and guard. The result reports whether
/// the threshold gap still holds; only the proof exponents with a holding
/// gap count as proof grade.
pub fn reduce_to_wdm_with(inst: &MinRepInstance, opts: &ReduceOptions) -> Result<ReducedInstance> {
    let n = inst.n();
    let exps = opts.exponents;
    let projected = projected_vertices(inst, &exps);
    if n > opts.guard || projected > MAX_REDUCED_VERTICES {
        return Err(WdmError::ReductionGuard {
            n,
            guard: opts.guard,
            projected,
        });
    }
    let super_edges = build_supergraph(inst);
    let m = super_edges.len();
    if m == 0 {
        return Err(WdmError::Precondition("instance has no super-edges".into()));
    }
    let e = inst.edges.len();
    let edge_super: Vec<usize> = inst
        .edges
        .iter()
        .map(|&ed| {
            super_edges
                .binary_search(&inst.super_edge_of(ed))
                .expect("every edge lies on a super-edge")
        })
        .collect();

    let (mm, two) = (m as u128, 2u128);
    let mut base = Vec::with_capacity(3 * n + e + m);
    base.extend(std::iter::repeat(to_u32(pow(n, exps.v1))?).take(n));
    base.extend(std::iter::repeat(to_u32(two * pow(n, exps.pair_edge))?).take(e));
    base.extend(std::iter::repeat(to_u32(pow(n, exps.edge_super))?).take(m));
    base.extend(std::iter::repeat(to_u32(mm * pow(n, exps.super_w))?).take(n));
    base.extend(std::iter::repeat(to_u32(two * mm * pow(n, exps.super_z))?).take(n));

    let (v2, v3, v4, v5) = (n, n + e, n + e + m, 2 * n + e + m);
    let mut b = GadgetBuilder::new(base);
    let k_pair = to_usize(pow(n, exps.pair_edge))?;
    for (i, &(a, bb)) in inst.edges.iter().enumerate() {
        b.build_gadget(k_pair, a, v2 + i)?;
        b.build_gadget(k_pair, inst.a_count + bb, v2 + i)?;
    }
    let k_es = to_usize(pow(n, exps.edge_super))?;
    for (i, &s) in edge_super.iter().enumerate() {
        b.build_gadget(k_es, v2 + i, v3 + s)?;
    }
    let k_sw = to_usize(pow(n, exps.super_w))?;
    for s in 0..m {
        for k in 0..n {
            b.build_gadget(k_sw, v3 + s, v4 + k)?;
        }
    }
    let k_rw = to_usize(pow(n, exps.rep_w))?;
    for x in 0..n {
        for k in 0..n {
            b.build_gadget(k_rw, x, v4 + k)?;
        }
    }
    let k_ez = to_usize(two * pow(n, exps.edge_z))?;
    for i in 0..e {
        for k in 0..n {
            b.build_gadget(k_ez, v2 + i, v5 + k)?;
        }
    }
    let k_sz = to_usize(two * pow(n, exps.super_z))?;
    for s in 0..m {
        for k in 0..n {
            b.build_gadget(k_sz, v3 + s, v5 + k)?;
        }
    }
    let (graph, tau, gadgets) = b.finish()?;

    let lhs = two * e as u128 * pow(n, exps.edge_z) + two * (mm - 1) * pow(n, exps.super_z);
    let rhs = two * mm * pow(n, exps.super_z);
    Ok(ReducedInstance {
        graph,
        tau,
        inst: inst.clone(),
        super_edges,
        edge_super,
        exponents: exps,
        gadgets,
        gap: GapCheck {
            lhs,
            rhs,
            holds: lhs < rhs,
        },
    })
}

/// Serializable description of `G'` without its edge list.
#[derive(Debug, Clone, Serialize)]
pub struct ReductionRegistry<'a> {
    pub n_param: usize,
    pub m_param: usize,
    pub vertices: usize,
    pub edges: usize,
    pub exponents: Exponents,
    pub classes: [[usize; 2]; 5],
    pub thresholds: [u32; 5],
    pub instance: &'a MinRepInstance,
    pub super_edges: &'a [SuperEdge],
    pub gadgets: &'a [Gadget],
    pub gap: GapCheck,
    pub proof_grade: bool,
}

impl ReducedInstance {
    pub fn instance(&self) -> &MinRepInstance {
        &self.inst
    }

    /// `N`.
    pub fn n_param(&self) -> usize {
        self.inst.n()
    }

    /// `M`, the number of super-edges.
    pub fn m_param(&self) -> usize {
        self.super_edges.len()
    }

    pub fn super_edges(&self) -> &[SuperEdge] {
        &self.super_edges
    }

    pub fn exponents(&self) -> Exponents {
        self.exponents
    }

    pub fn gadgets(&self) -> &[Gadget] {
        &self.gadgets
    }

    pub fn gap(&self) -> GapCheck {
        self.gap
    }

    /// Built with the proof exponents and the threshold gap holds.
    pub fn proof_grade(&self) -> bool {
        self.exponents == Exponents::PROOF && self.gap.holds
    }

    /// Id ranges of `V_1 .. V_5`.
    pub fn class_ranges(&self) -> [Range<usize>; 5] {
        let (n, e, m) = (self.n_param(), self.inst.edges.len(), self.m_param());
        let v2 = n;
        let v3 = v2 + e;
        let v4 = v3 + m;
        let v5 = v4 + n;
        [0..n, v2..v3, v3..v4, v4..v5, v5..v5 + n]
    }

    fn internal_start(&self) -> usize {
        self.class_ranges()[4].end
    }

    pub fn class_of(&self, v: usize) -> VertexClass {
        let classes = [
            VertexClass::V1,
            VertexClass::V2,
            VertexClass::V3,
            VertexClass::V4,
            VertexClass::V5,
        ];
        self.class_ranges()
            .iter()
            .zip(classes)
            .find(|(r, _)| r.contains(&v))
            .map_or(VertexClass::Internal, |(_, c)| c)
    }

    pub fn a_vertex(&self, a: usize) -> usize {
        a
    }

    pub fn b_vertex(&self, b: usize) -> usize {
        self.inst.a_count + b
    }

    /// `u_{a,b}` for the `e`-th edge.
    pub fn u_vertex(&self, e: usize) -> usize {
        self.class_ranges()[1].start + e
    }

    /// `v_{i,j}` for the `s`-th super-edge.
    pub fn v_vertex(&self, s: usize) -> usize {
        self.class_ranges()[2].start + s
    }

    pub fn w_vertex(&self, k: usize) -> usize {
        self.class_ranges()[3].start + k
    }

    pub fn z_vertex(&self, k: usize) -> usize {
        self.class_ranges()[4].start + k
    }

    /// Gadget owning an internal vertex.
    pub fn gadget_of(&self, x: usize) -> Option<&Gadget> {
        if x < self.internal_start() || x >= self.graph.n() {
            return None;
        }
        let i = self.gadgets.partition_point(|g| g.first <= x);
        Some(&self.gadgets[i - 1])
    }

    /// Thresholds the construction prescribes for `V_1 .. V_5`.
    pub fn class_thresholds(&self) -> [u32; 5] {
        let (n, m) = (self.n_param(), self.m_param() as u128);
        let x = self.exponents;
        [
            pow(n, x.v1),
            2 * pow(n, x.pair_edge),
            pow(n, x.edge_super),
            m * pow(n, x.super_w),
            2 * m * pow(n, x.super_z),
        ]
        .map(|t| t as u32)
    }

    pub fn registry(&self) -> ReductionRegistry<'_> {
        ReductionRegistry {
            n_param: self.n_param(),
            m_param: self.m_param(),
            vertices: self.graph.n(),
            edges: self.graph.m(),
            exponents: self.exponents,
            classes: self.class_ranges().map(|r| [r.start, r.end]),
            thresholds: self.class_thresholds(),
            instance: &self.inst,
            super_edges: &self.super_edges,
            gadgets: &self.gadgets,
            gap: self.gap,
            proof_grade: self.proof_grade(),
        }
    }

    /// Re-derives class sizes, thresholds, gadget shapes and per-class
    /// degrees from `N`, `M` and the exponents, and compares them with the
    /// built graph.
    pub fn audit_structure(&self) -> std::result::Result<(), String> {
        let (g, tau) = (&self.graph, &self.tau);
        let (n, m, e) = (self.n_param(), self.m_param(), self.inst.edges.len());
        let x = self.exponents;
        let ranges = self.class_ranges();
        let sizes = [n, e, m, n, n];
        for (c, (r, &want)) in ranges.iter().zip(&sizes).enumerate() {
            if r.len() != want {
                return Err(format!("V_{} has {} vertices, expected {want}", c + 1, r.len()));
            }
        }
        let projected = projected_vertices(&self.inst, &x);
        if g.n() as u128 != projected {
            return Err(format!("{} vertices, closed form gives {projected}", g.n()));
        }
        let want_tau = self.class_thresholds();
        for (c, r) in ranges.iter().enumerate() {
            if let Some(v) = r.clone().find(|&v| tau.get(v) != want_tau[c]) {
                return Err(format!(
                    "vertex {v} of V_{} has threshold {}, expected {}",
                    c + 1,
                    tau.get(v),
                    want_tau[c]
                ));
            }
        }
        let mut next = self.internal_start();
        for gd in &self.gadgets {
            if gd.first != next {
                return Err(format!("gadget internals start at {}, expected {next}", gd.first));
            }
            next += gd.k;
            for y in gd.internals() {
                let nb = g.neighbors(y);
                let mut want = [gd.u, gd.w];
                want.sort_unstable();
                if nb != want || tau.get(y) != 1 {
                    return Err(format!("internal vertex {y} is not a degree-2, threshold-1 vertex"));
                }
            }
        }
        if next != g.n() {
            return Err(format!("gadgets cover ids up to {next}, graph has {}", g.n()));
        }

        let p = |k: u32| pow(n, k);
        let (nn, mm, ee) = (n as u128, m as u128, e as u128);
        let mut deg_a = vec![0u128; n];
        for &(a, b) in &self.inst.edges {
            deg_a[a] += p(x.pair_edge);
            deg_a[self.inst.a_count + b] += p(x.pair_edge);
        }
        let mut per_super = vec![0u128; m];
        for &s in &self.edge_super {
            per_super[s] += p(x.edge_super);
        }
        let expect = |v: usize| -> u128 {
            match self.class_of(v) {
                VertexClass::V1 => deg_a[v] + nn * p(x.rep_w),
                VertexClass::V2 => 2 * p(x.pair_edge) + p(x.edge_super) + nn * 2 * p(x.edge_z),
                VertexClass::V3 => {
                    per_super[v - ranges[2].start] + nn * p(x.super_w) + nn * 2 * p(x.super_z)
                }
                VertexClass::V4 => mm * p(x.super_w) + nn * p(x.rep_w),
                VertexClass::V5 => ee * 2 * p(x.edge_z) + mm * 2 * p(x.super_z),
                VertexClass::Internal => 2,
            }
        };
        if let Some(v) = (0..self.internal_start()).find(|&v| g.degree(v) as u128 != expect(v)) {
            return Err(format!(
                "vertex {v} ({:?}) has degree {}, expected {}",
                self.class_of(v),
                g.degree(v),
                expect(v)
            ));
        }
        // each u_e sits on exactly two pair gadgets whose sizes add up to τ(u_e)
        for i in 0..e {
            let u = self.u_vertex(i);
            let pair: u128 = self
                .gadgets
                .iter()
                .filter(|gd| gd.w == u && gd.u < n)
                .map(|gd| gd.k as u128)
                .sum();
            if pair != tau.get(u) as u128 {
                return Err(format!("u-vertex {u}: pair gadgets give {pair}, threshold {}", tau.get(u)));
            }
        }
        Ok(())
    }

    fn to_solution(&self, in_v1: &[bool]) -> MinRepSolution {
        let a_count = self.inst.a_count;
        let a = (0..a_count).filter(|&x| in_v1[x]).collect();
        let b = (a_count..self.n_param()).filter(|&x| in_v1[x]).map(|x| x - a_count).collect();
        MinRepSolution::new(a, b)
    }
}

/// Activation steps of the forward direction, per class. `None` when some
/// vertex of the class never activated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftSchedule {
    /// Latest step among the `u_{a,b}` with both endpoints seeded.
    pub seeded_pairs_last: Option<usize>,
    pub v3_first: Option<usize>,
    pub v3_last: Option<usize>,
    pub v4_last: Option<usize>,
    pub v5_last: Option<usize>,
    pub v1_last: Option<usize>,
    pub v2_last: Option<usize>,
    /// Step at which the last class vertex activated.
    pub coarse_t: Option<usize>,
    /// Raw greedy layer count, gadget internals included.
    pub t: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Lift {
    pub seed: Vec<usize>,
    pub outcome: CascadeOutcome,
    pub schedule: LiftSchedule,
}

/// Seeds `G'` with `A' ∪ B'` and runs the greedy process.
pub fn lift_solution(red: &ReducedInstance, sol: &MinRepSolution) -> Result<Lift> {
    if !verify_minrep(&red.inst, sol) {
        return Err(WdmError::Precondition("solution does not cover every super-edge".into()));
    }
    let mut seed: Vec<usize> = sol.a.iter().map(|&a| red.a_vertex(a)).collect();
    seed.extend(sol.b.iter().map(|&b| red.b_vertex(b)));
    let outcome = greedy_cascade(&red.graph, &red.tau, &seed)?;
    let steps = outcome.activation_steps(red.graph.n());
    let ranges = red.class_ranges();
    let last = |r: Range<usize>| -> Option<usize> {
        r.map(|v| steps[v]).try_fold(0, |acc, s| s.map(|s| acc.max(s)))
    };
    let v3_first = ranges[2].clone().map(|v| steps[v]).try_fold(usize::MAX, |acc, s| s.map(|s| acc.min(s)));
    let seed_sorted = normalize_seed(red.graph.n(), &seed)?;
    let seeded: Vec<usize> = red
        .inst
        .edges
        .iter()
        .enumerate()
        .filter(|(_, &(a, b))| {
            seed_sorted.binary_search(&red.a_vertex(a)).is_ok()
                && seed_sorted.binary_search(&red.b_vertex(b)).is_ok()
        })
        .map(|(i, _)| red.u_vertex(i))
        .collect();
    let seeded_pairs_last = seeded.iter().try_fold(0, |acc, &u| steps[u].map(|s| acc.max(s)));
    let class_lasts: Vec<Option<usize>> = ranges.iter().map(|r| last(r.clone())).collect();
    let coarse_t = class_lasts
        .iter()
        .try_fold(0, |acc, s| s.map(|s| acc.max(s)));
    Ok(Lift {
        schedule: LiftSchedule {
            seeded_pairs_last,
            v3_first,
            v3_last: class_lasts[2],
            v4_last: class_lasts[3],
            v5_last: class_lasts[4],
            v1_last: class_lasts[0],
            v2_last: class_lasts[1],
            coarse_t,
            t: outcome.partition.t(),
        },
        seed: seed_sorted,
        outcome,
    })
}

/// Turns a weak dynamic monopoly of `G'` back into a MINREP cover.
///
/// The seed must be in normal form: at most `N` vertices, none of them
/// gadget internals. Members are replaced in this order: any `V_4` member
/// swaps `V_4` for all of `V_1`; each `z_k` becomes the missing endpoint of
/// the lowest `u_{a,b}` it helped activate; each `v_{i,j}` becomes the lowest
/// `u_{a,b}` on its super-edge; each `u_{a,b}` becomes `{a, b}`. The result
/// must be a cover of size at most `2|D|`, otherwise the chain is reported
/// as a normal-form violation.
pub fn extract_solution(
    red: &ReducedInstance,
    seed: &[usize],
    partition: &LayerPartition,
) -> Result<MinRepSolution> {
    let g = &red.graph;
    let seed = normalize_seed(g.n(), seed)?;
    if partition.seed() != seed.as_slice() {
        return Err(WdmError::InvalidPartition("layer 0 differs from the seed".into()));
    }
    let n = red.n_param();
    if seed.len() > n {
        return Err(WdmError::NormalForm(format!(
            "seed has {} vertices, more than N = {n}",
            seed.len()
        )));
    }
    if let Some(&x) = seed.iter().find(|&&v| red.class_of(v) == VertexClass::Internal) {
        return Err(WdmError::NormalForm(format!("seed contains gadget vertex {x}")));
    }
    verify_wdm_partition(g, &red.tau, partition)
        .map_err(|d| WdmError::InvalidPartition(d.to_string()))?;
    let ranges = red.class_ranges();
    let mut chosen = vec![false; red.internal_start()];
    for &v in &seed {
        chosen[v] = true;
    }
    if ranges[3].clone().any(|w| chosen[w]) {
        ranges[3].clone().for_each(|w| chosen[w] = false);
        ranges[0].clone().for_each(|x| chosen[x] = true);
    }

    let labels = partition.labels(g.n());
    for z in ranges[4].clone() {
        if !chosen[z] {
            continue;
        }
        chosen[z] = false;
        let served = (0..red.inst.edges.len()).map(|i| red.u_vertex(i)).find(|&u| {
            if seed.binary_search(&u).is_ok() {
                return false;
            }
            let Some(l) = labels[u].filter(|&l| l > 0) else {
                return false;
            };
            g.neighbors(u).iter().any(|&x| {
                labels[x] == Some(l - 1)
                    && red.gadget_of(x).is_some_and(|gd| gd.u == u && gd.w == z)
            })
        });
        if let Some(u) = served {
            let (a, b) = red.inst.edges[u - ranges[1].start];
            chosen[red.a_vertex(a)] = true;
            chosen[red.b_vertex(b)] = true;
        }
    }
    for (s, v) in ranges[2].clone().enumerate() {
        if chosen[v] {
            chosen[v] = false;
            let i = red
                .edge_super
                .iter()
                .position(|&t| t == s)
                .expect("every super-edge has an edge");
            chosen[red.u_vertex(i)] = true;
        }
    }
    for (i, u) in ranges[1].clone().enumerate() {
        if chosen[u] {
            chosen[u] = false;
            let (a, b) = red.inst.edges[i];
            chosen[red.a_vertex(a)] = true;
            chosen[red.b_vertex(b)] = true;
        }
    }
    let sol = red.to_solution(&chosen);
    if !verify_minrep(&red.inst, &sol) {
        return Err(WdmError::NormalForm(
            "replacement chain did not produce a cover".into(),
        ));
    }
    if sol.size() > 2 * seed.len() {
        return Err(WdmError::NormalForm(format!(
            "replacement chain produced {} representatives from a seed of {}",
            sol.size(),
            seed.len()
        )));
    }
    Ok(sol)
}
