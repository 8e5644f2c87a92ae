use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Result, WdmError};

/// How a threshold assignment is requested.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ThresholdMode {
    /// `⌈(deg + 1) / 2⌉`.
    StrictMajority,
    /// `deg / 2`, rounded up for odd degrees.
    SimpleMajority,
    Constant(u32),
    Explicit(Vec<u32>),
}

/// The rule an assignment was produced by, kept as metadata.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdRule {
    StrictMajority,
    /// Simple majority implemented as `⌈deg / 2⌉`.
    SimpleMajorityCeil,
    Constant(u32),
    Explicit,
}

/// Per-vertex thresholds, all at least 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Thresholds {
    tau: Vec<u32>,
    rule: ThresholdRule,
    within_degree: bool,
}

impl Thresholds {
    /// Wraps an explicit list; every entry must be positive and the length
    /// must match the graph.
    pub fn explicit(g: &Graph, tau: Vec<u32>) -> Result<Thresholds> {
        Self::with_rule(g, tau, ThresholdRule::Explicit)
    }

    fn with_rule(g: &Graph, tau: Vec<u32>, rule: ThresholdRule) -> Result<Thresholds> {
        if tau.len() != g.n() {
            return Err(WdmError::param(format!(
                "{} thresholds for {} vertices",
                tau.len(),
                g.n()
            )));
        }
        if let Some(v) = tau.iter().position(|&t| t == 0) {
            return Err(WdmError::param(format!(
                "threshold of vertex {v} is 0; thresholds must be >= 1"
            )));
        }
        let within_degree = tau
            .iter()
            .enumerate()
            .all(|(v, &t)| t as usize <= g.degree(v));
        Ok(Thresholds {
            tau,
            rule,
            within_degree,
        })
    }

    pub fn get(&self, v: usize) -> u32 {
        self.tau[v]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.tau
    }

    pub fn len(&self) -> usize {
        self.tau.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tau.is_empty()
    }

    pub fn rule(&self) -> ThresholdRule {
        self.rule
    }

    /// Whether `τ(v) <= deg(v)` holds everywhere, as dynamic monopolies
    /// require.
    pub fn within_degree(&self) -> bool {
        self.within_degree
    }

    /// `min_v τ(v)`, or `None` on the empty graph.
    pub fn min(&self) -> Option<u32> {
        self.tau.iter().copied().min()
    }

    /// `Some(c)` when every vertex has threshold `c`.
    pub fn constant_value(&self) -> Option<u32> {
        let c = *self.tau.first()?;
        self.tau.iter().all(|&t| t == c).then_some(c)
    }

    /// True when the values coincide with strict majority on `g`,
    /// whatever rule produced them.
    pub fn is_strict_majority(&self, g: &Graph) -> bool {
        self.tau.len() == g.n()
            && (0..g.n()).all(|v| self.tau[v] == strict_majority(g.degree(v)))
    }
}

fn strict_majority(deg: usize) -> u32 {
    (deg as u32 + 2) / 2
}

fn simple_majority_ceil(deg: usize) -> u32 {
    (deg as u32).div_ceil(2)
}

/// Builds a threshold assignment for `g`.
///
/// Simple majority on an isolated vertex would give 0; it is clamped to 1
/// since thresholds must be positive.
pub fn assign_threshold(g: &Graph, mode: ThresholdMode) -> Result<Thresholds> {
    let n = g.n();
    match mode {
        ThresholdMode::StrictMajority => Thresholds::with_rule(
            g,
            (0..n).map(|v| strict_majority(g.degree(v))).collect(),
            ThresholdRule::StrictMajority,
        ),
        ThresholdMode::SimpleMajority => Thresholds::with_rule(
            g,
            (0..n)
                .map(|v| simple_majority_ceil(g.degree(v)).max(1))
                .collect(),
            ThresholdRule::SimpleMajorityCeil,
        ),
        ThresholdMode::Constant(c) => {
            if c == 0 {
                return Err(WdmError::param("constant threshold must be >= 1"));
            }
            Thresholds::with_rule(g, vec![c; n], ThresholdRule::Constant(c))
        }
        ThresholdMode::Explicit(tau) => Thresholds::explicit(g, tau),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{blowup_cycle, build_cycle, cartesian_product, random_graph};
    use proptest::prelude::*;

    #[test]
    fn strict_on_cycle() {
        let g = build_cycle(5).unwrap();
        let t = assign_threshold(&g, ThresholdMode::StrictMajority).unwrap();
        assert_eq!(t.as_slice(), &[2; 5]);
        assert!(t.within_degree());
        assert!(t.is_strict_majority(&g));
    }

    #[test]
    fn simple_on_blowup() {
        let g = blowup_cycle(4).unwrap();
        let t = assign_threshold(&g, ThresholdMode::SimpleMajority).unwrap();
        assert_eq!(t.as_slice(), &[2; 8]);
        assert_eq!(t.rule(), ThresholdRule::SimpleMajorityCeil);
    }

    #[test]
    fn constant_on_torus() {
        let c4 = build_cycle(4).unwrap();
        let g = cartesian_product(&c4, &c4).unwrap();
        let t = assign_threshold(&g, ThresholdMode::Constant(3)).unwrap();
        assert_eq!(t.constant_value(), Some(3));
    }

    #[test]
    fn rejects_zero_thresholds() {
        let g = build_cycle(3).unwrap();
        assert!(assign_threshold(&g, ThresholdMode::Constant(0)).is_err());
        assert!(assign_threshold(&g, ThresholdMode::Explicit(vec![1, 0, 1])).is_err());
        assert!(assign_threshold(&g, ThresholdMode::Explicit(vec![1, 1])).is_err());
    }

    #[test]
    fn above_degree_is_allowed_but_flagged() {
        let g = build_cycle(3).unwrap();
        let t = assign_threshold(&g, ThresholdMode::Constant(3)).unwrap();
        assert!(!t.within_degree());
    }

    proptest! {
        #[test]
        fn strict_majority_is_a_strict_majority(n in 1usize..14, p in 0.0f64..1.0, seed: u64) {
            let g = random_graph(n, p, seed).unwrap();
            let t = assign_threshold(&g, ThresholdMode::StrictMajority).unwrap();
            for v in 0..n {
                let d = g.degree(v) as f64;
                let tv = t.get(v) as f64;
                if g.degree(v) >= 1 {
                    prop_assert!(d / 2.0 < tv && tv <= d);
                }
            }
        }
    }
}
