//! Domain types shared by every other module: vectors, dictionaries,
//! expansions, objectives, configurations, and run traces.

pub mod config;
pub mod dictionary;
pub mod expansion;
pub mod objective;
pub mod trace;
pub mod vector;

pub use config::{AlgorithmConfig, AlgorithmKind, ErrorMode, ErrorSchedule};
pub use dictionary::Dictionary;
pub use expansion::Expansion;
pub use objective::{
    log_sum_exp_objective, p_power_objective, quadratic_objective, ConvexObjective,
    SmoothnessCertificate, SmoothnessDomain,
};
pub use trace::{IterationRecord, RunTrace};
pub use vector::{NormKind, Vector};
