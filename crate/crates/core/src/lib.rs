//! Weak dynamic monopolies on finite graphs.
//!
//! A seed `D_0` is a weak dynamic monopoly when the vertex set splits into
//! layers `D_0, D_1, ..., D_t` where every `v ∈ D_i` (`i >= 1`) has at least
//! `τ(v)` neighbours in `D_{i-1}`. The crate checks, searches for and bounds
//! such seeds, builds the known extremal families and implements the MINREP
//! reduction.

pub mod bounds;
pub mod cascade;
pub mod constructions;
pub mod corpus;
pub mod error;
pub mod graph;
pub mod io;
pub mod reduction;
pub mod solvers;

pub use cascade::{
    exact_wdm_partition, greedy_cascade, processing_time_range, verify_wdm_partition,
    LayerPartition,
};
pub use error::{Result, WdmError};
pub use graph::{assign_threshold, Graph, ThresholdMode, Thresholds};
pub use solvers::{min_dyn, min_mono, min_wdm, MonopolyKind};
