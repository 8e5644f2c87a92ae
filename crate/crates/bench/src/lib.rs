//! Fixtures shared by the benchmarks.

use wdm_core::constructions::{figure4_tree, tight_cubic, torus_pattern};
use wdm_core::graph::{assign_threshold, build_cycle, cartesian_product, Graph, ThresholdMode, Thresholds};

pub struct Fixture {
    pub name: &'static str,
    pub graph: Graph,
    pub tau: Thresholds,
}

/// Instances small enough for the exact search.
pub fn exact_fixtures() -> Vec<Fixture> {
    let c9 = build_cycle(9).unwrap();
    let c9_tau = assign_threshold(&c9, ThresholdMode::StrictMajority).unwrap();
    let cubic = tight_cubic(3).unwrap();
    let fig4 = figure4_tree().unwrap();
    vec![
        Fixture { name: "cycle-9", graph: c9, tau: c9_tau },
        Fixture { name: "tight-cubic-3", graph: cubic.graph, tau: cubic.tau },
        Fixture { name: "figure4", graph: fig4.graph, tau: fig4.tau },
    ]
}

/// C_4 x C_4 with every threshold 3.
pub fn small_torus() -> Fixture {
    let c = build_cycle(4).unwrap();
    let graph = cartesian_product(&c, &c).unwrap();
    let tau = assign_threshold(&graph, ThresholdMode::Constant(3)).unwrap();
    Fixture { name: "c4xc4", graph, tau }
}

/// Torus pattern on the n x n grid with its certified seed.
pub fn torus_with_seed(n: usize) -> (Fixture, Vec<usize>) {
    let c = torus_pattern(n).unwrap();
    let seed = c.certificate.partition.as_ref().unwrap().seed().to_vec();
    (Fixture { name: "torus", graph: c.graph, tau: c.tau }, seed)
}
