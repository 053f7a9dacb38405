//! Resampling-based post-selection inference for causal effects estimated
//! after constraint-based causal discovery.
//!
//! The crate runs the tiered PC-stable algorithm many times with Gaussian
//! perturbed conditional-independence statistics, screens the resulting
//! graphs for valid CPDAGs, estimates the target effect by back-door
//! adjustment in every DAG of every kept equivalence class, and reports the
//! union of the per-DAG Wald intervals.
//!
//! Module map:
//!
//! * [`graph`]: graph types and structural algorithms (d-separation, Meek
//!   closure, CPDAG validity, equivalence-class enumeration, text formats).
//! * [`stats`]: sufficient statistics, partial correlations, Fisher z,
//!   keyed resampling draws, OLS and normal-distribution utilities.
//! * [`discovery`]: tiered PC-stable and the resampled multi-run engine.
//! * [`inference`]: screening, per-graph estimation and interval unions.
//! * [`simulation`]: random linear SEMs and the coverage benchmark harness.

pub mod discovery;
pub mod error;
pub mod graph;
pub mod inference;
mod nodeset;
pub mod simulation;
pub mod stats;

pub use error::{Error, Result};
pub use nodeset::{NodeSet, MAX_NODES};
