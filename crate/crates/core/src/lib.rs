//! Greedy-type algorithms for convex optimization over dictionary hulls:
//! WRGA, REGA, WGAFR, and EGAFR, in exact and delta-approximate forms,
//! together with the searches they rely on, analysis tooling for verifying
//! their convergence-rate guarantees, and an experiment harness.

pub mod algorithms;
pub mod analysis;
pub mod core;
pub mod error;
pub mod harness;
pub mod search;

pub use error::{Error, Result};
