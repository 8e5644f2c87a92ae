//! Seeded random test corpora.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WdmError};
use crate::graph::{assign_threshold, random_graph, Graph, ThresholdMode, Thresholds};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorpusThreshold {
    StrictMajority,
    SimpleMajority,
    Constant(u32),
    /// Uniform in `1..=max(deg, 1)` per vertex.
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusConfig {
    pub seed: u64,
    pub count: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub p_min: f64,
    pub p_max: f64,
    pub threshold: CorpusThreshold,
    /// Graphs with a smaller minimum degree are redrawn.
    pub min_degree: usize,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            seed: 0,
            count: 50,
            n_min: 3,
            n_max: 12,
            p_min: 0.2,
            p_max: 0.6,
            threshold: CorpusThreshold::StrictMajority,
            min_degree: 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub graph: Graph,
    pub tau: Thresholds,
}

const MAX_REDRAWS: usize = 10_000;

/// Draws `count` graphs. The output depends only on the configuration.
pub fn generate_corpus(cfg: &CorpusConfig) -> Result<Vec<CorpusEntry>> {
    if cfg.n_min == 0 || cfg.n_min > cfg.n_max {
        return Err(WdmError::param("need 1 <= n_min <= n_max"));
    }
    if !(0.0..=1.0).contains(&cfg.p_min) || !(cfg.p_min..=1.0).contains(&cfg.p_max) {
        return Err(WdmError::param("need 0 <= p_min <= p_max <= 1"));
    }
    if cfg.min_degree >= cfg.n_max {
        return Err(WdmError::param("min_degree must be below n_max"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::with_capacity(cfg.count);
    for i in 0..cfg.count {
        let mut drawn = None;
        for _ in 0..MAX_REDRAWS {
            let n = rng.gen_range(cfg.n_min.max(cfg.min_degree + 1)..=cfg.n_max);
            let p = if cfg.p_min == cfg.p_max {
                cfg.p_min
            } else {
                rng.gen_range(cfg.p_min..=cfg.p_max)
            };
            let g = random_graph(n, p, rng.gen())?;
            if g.min_degree() >= cfg.min_degree {
                drawn = Some((g, p));
                break;
            }
        }
        let (graph, p) = drawn.ok_or_else(|| {
            WdmError::Infeasible(format!("graph {i}: no draw met the minimum degree"))
        })?;
        let tau = match cfg.threshold {
            CorpusThreshold::StrictMajority => assign_threshold(&graph, ThresholdMode::StrictMajority)?,
            CorpusThreshold::SimpleMajority => assign_threshold(&graph, ThresholdMode::SimpleMajority)?,
            CorpusThreshold::Constant(c) => assign_threshold(&graph, ThresholdMode::Constant(c))?,
            CorpusThreshold::Random => {
                let tau = (0..graph.n())
                    .map(|v| rng.gen_range(1..=graph.degree(v).max(1)) as u32)
                    .collect();
                Thresholds::explicit(&graph, tau)?
            }
        };
        out.push(CorpusEntry {
            name: format!("corpus-{}-{i:03} n={} p={p:.2}", cfg.seed, graph.n()),
            graph,
            tau,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_within_limits() {
        let cfg = CorpusConfig {
            seed: 11,
            count: 30,
            ..CorpusConfig::default()
        };
        let a = generate_corpus(&cfg).unwrap();
        let b = generate_corpus(&cfg).unwrap();
        assert_eq!(a.len(), 30);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.graph, y.graph);
            assert_eq!(x.tau, y.tau);
            assert!((3..=12).contains(&x.graph.n()));
            assert!(x.graph.min_degree() >= 1);
            assert!(x.tau.is_strict_majority(&x.graph));
        }
    }

    #[test]
    fn random_thresholds_stay_within_degree() {
        let cfg = CorpusConfig {
            seed: 5,
            count: 20,
            n_max: 8,
            threshold: CorpusThreshold::Random,
            ..CorpusConfig::default()
        };
        for e in generate_corpus(&cfg).unwrap() {
            assert!(e.tau.within_degree());
        }
    }

    #[test]
    fn rejects_bad_ranges() {
        let cfg = CorpusConfig {
            n_min: 9,
            n_max: 4,
            ..CorpusConfig::default()
        };
        assert!(generate_corpus(&cfg).is_err());
    }
}
