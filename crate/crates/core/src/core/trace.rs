use crate::core::config::AlgorithmConfig;
use crate::core::expansion::Expansion;

/// One completed iteration of a greedy run.
#[derive(Debug, Clone)]
pub struct IterationRecord {
    pub m: usize,
    /// Chosen atom; `None` for post-stationarity no-op iterations.
    pub atom: Option<usize>,
    pub lambda: f64,
    /// Free-relaxation weight; absent for WRGA/REGA where w == lambda.
    pub w: Option<f64>,
    /// E(G_m)
    pub value: f64,
    /// a_m = E(G_m) - b_ref, when a reference optimum was supplied.
    pub gap: Option<f64>,
    /// The delta_{m-1} budget in force at this step.
    pub delta_budget: f64,
    /// Error actually injected on top of the search result (inject mode).
    pub injected_error: f64,
    pub expansion: Expansion,
}

/// Full record of one algorithm run: header plus per-iteration records.
#[derive(Debug, Clone)]
pub struct RunTrace {
    pub config: AlgorithmConfig,
    pub objective_desc: String,
    pub b_ref: Option<f64>,
    pub b_ref_provenance: String,
    /// E(G_0) = E(0).
    pub initial_value: f64,
    pub records: Vec<IterationRecord>,
}

impl RunTrace {
    /// E(G_0), E(G_1), ... including the starting value.
    pub fn values(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.records.len() + 1);
        out.push(self.initial_value);
        out.extend(self.records.iter().map(|r| r.value));
        out
    }

    /// a_0, a_1, ... relative to b_ref; `None` when no reference was given.
    pub fn gaps(&self) -> Option<Vec<f64>> {
        let b = self.b_ref?;
        Some(self.values().into_iter().map(|v| v - b).collect())
    }

    pub fn final_value(&self) -> f64 {
        self.records
            .last()
            .map(|r| r.value)
            .unwrap_or(self.initial_value)
    }
}
