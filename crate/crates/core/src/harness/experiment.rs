use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use crate::algorithms::{run_algorithm_tolerant, Reference};
use crate::analysis::{
    check_certificate, check_majorant_domination, estimate_modulus, fit_rate_exponent,
    DomainSampler, MajorantParams,
};
use crate::core::{AlgorithmKind, RunTrace, SmoothnessDomain};
use crate::error::Result;
use crate::harness::config_file::ExperimentConfig;
use crate::harness::reference::compute_reference;

/// Grid of displacement sizes used by the modulus-of-smoothness check.
const MODULUS_U_GRID: &[f64] = &[0.01, 0.05, 0.1, 0.2, 0.5, 1.0];
const MODULUS_DIRECTIONS: usize = 60;

/// Machine-readable outcome of one experiment, persisted as JSON.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub config_hash: String,
    pub algorithm: String,
    /// Fitted log-log decay exponent of a_m (negative means decay), absent
    /// when the fit window held too few positive points.
    pub slope: Option<f64>,
    pub slope_residual: Option<f64>,
    /// Whether the trace stayed below its recurrence majorant; null when no
    /// majorant applies (free-relaxation algorithms, or no reference b).
    pub majorant_ok: Option<bool>,
    /// Whether the sampled smoothness modulus stayed below the declared
    /// certificate; null when the check was disabled.
    pub certificate_ok: Option<bool>,
    pub iterations: usize,
    pub aborted: bool,
    pub wall_ms: u64,
}

/// Report plus the artifacts written for it.
#[derive(Debug)]
pub struct ExperimentOutcome {
    pub report: ExperimentReport,
    pub trace: RunTrace,
    pub trace_path: PathBuf,
    pub report_path: PathBuf,
    pub plot_path: PathBuf,
    /// The abort error rendered as text, when the run aborted.
    pub abort_message: Option<String>,
}

/// Run one experiment end to end: solve for the reference optimum, run the
/// greedy loop, fit the decay rate, check majorant and certificate, and
/// write trace/report/plot files named by the config hash into `out_dir`.
pub fn run_experiment(cfg: &ExperimentConfig, out_dir: &Path) -> Result<ExperimentOutcome> {
    let started = Instant::now();
    let obj = cfg.build_objective()?;
    let dict = cfg.build_dictionary()?;
    let b_ref = compute_reference(cfg.bref_mode, &obj, &dict)?;

    let outcome = run_algorithm_tolerant(&obj, &dict, &cfg.algorithm, b_ref.as_ref())?;
    let trace = outcome.trace;
    let aborted = outcome.error.is_some();

    // fit on gaps a_m when a reference exists, otherwise on raw values
    let series = trace.gaps().unwrap_or_else(|| trace.values());
    let (lo, hi) = cfg.fit_window;
    let fit = fit_rate_exponent(&series, lo, hi.min(series.len().saturating_sub(1))).ok();

    let majorant_ok = if cfg.majorant_check && !aborted {
        majorant_verdict(cfg, &trace, b_ref.as_ref())
    } else {
        None
    };

    let certificate_ok = if cfg.modulus_check {
        let domain = if cfg.algorithm.algorithm.free_relaxation() {
            SmoothnessDomain::SublevelPlusOne
        } else {
            SmoothnessDomain::SublevelCapHull
        };
        match obj.certificate(domain) {
            Some(cert) => {
                let sampler = DomainSampler::new(&obj, &dict, domain);
                let est = estimate_modulus(
                    &obj,
                    &sampler,
                    MODULUS_U_GRID,
                    MODULUS_DIRECTIONS,
                    cfg.algorithm.seed ^ 0x5eed,
                )?;
                Some(check_certificate(&est, &cert).ok())
            }
            None => None,
        }
    } else {
        None
    };

    let report = ExperimentReport {
        config_hash: cfg.hash(),
        algorithm: cfg.algorithm.algorithm.name().into(),
        slope: fit.as_ref().map(|f| f.slope),
        slope_residual: fit.as_ref().map(|f| f.residual),
        majorant_ok,
        certificate_ok,
        iterations: trace.records.len(),
        aborted,
        wall_ms: started.elapsed().as_millis() as u64,
    };

    std::fs::create_dir_all(out_dir)?;
    let short = cfg.short_hash();
    let trace_path = out_dir.join(format!("trace_{short}.csv"));
    let report_path = out_dir.join(format!("report_{short}.json"));
    let plot_path = out_dir.join(format!("plot_{short}.csv"));

    std::fs::write(&trace_path, trace_csv(&trace))?;
    std::fs::write(
        &report_path,
        serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
    )?;
    std::fs::write(&plot_path, plot_csv(&series, fit.as_ref(), cfg.fit_window))?;

    Ok(ExperimentOutcome {
        report,
        trace,
        trace_path,
        report_path,
        plot_path,
        abort_message: outcome.error.map(|e| e.to_string()),
    })
}

/// The recurrence majorant covers the relaxed algorithms only, and needs
/// both a reference optimum and a smoothness certificate.
fn majorant_verdict(
    cfg: &ExperimentConfig,
    trace: &RunTrace,
    b_ref: Option<&Reference>,
) -> Option<bool> {
    let v = match cfg.algorithm.algorithm {
        AlgorithmKind::Wrga => cfg.algorithm.weakness,
        AlgorithmKind::Rega => 1.0,
        AlgorithmKind::Wgafr | AlgorithmKind::Egafr => return None,
    };
    b_ref?;
    let cert = cfg
        .build_objective()
        .ok()?
        .certificate(SmoothnessDomain::SublevelCapHull)?;
    let big_b = 2f64.powf(1.0 + cert.q) * cert.gamma;
    let params = MajorantParams::new(v, big_b, cert.q, cfg.algorithm.schedule, 0.0);
    check_majorant_domination(trace, &params).ok()
}

/// Deterministic CSV rendering of a run trace. Row m = 0 carries the
/// starting value with the per-step columns left empty.
pub fn trace_csv(trace: &RunTrace) -> String {
    let mut out = String::new();
    out.push_str("m,atom_index,lambda,w,E_value,a_m,delta_applied,injected_error,l1_weight\n");
    let a0 = trace.b_ref.map(|b| trace.initial_value - b);
    let _ = writeln!(
        out,
        "0,,,,{},{},,,0",
        trace.initial_value,
        opt(a0)
    );
    for r in &trace.records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.m,
            r.atom.map(|a| a.to_string()).unwrap_or_default(),
            r.lambda,
            opt(r.w),
            r.value,
            opt(r.gap),
            r.delta_budget,
            r.injected_error,
            r.expansion.l1_weight()
        );
    }
    out
}

/// Log-log scatter of the decay series plus the fitted line's endpoints,
/// ready for plotting. Nonpositive entries are skipped (their log is
/// undefined).
fn plot_csv(
    series: &[f64],
    fit: Option<&crate::analysis::RateFit>,
    window: (usize, usize),
) -> String {
    let mut out = String::new();
    out.push_str("kind,log_m,log_value\n");
    for (m, a) in series.iter().enumerate().skip(1) {
        if *a > 0.0 {
            let _ = writeln!(out, "point,{},{}", (m as f64).ln(), a.ln());
        }
    }
    if let Some(f) = fit {
        let lo = window.0.max(1) as f64;
        let hi = (window.1.min(series.len().saturating_sub(1)) as f64).max(lo);
        for x in [lo.ln(), hi.ln()] {
            let _ = writeln!(out, "fit,{},{}", x, f.intercept + f.slope * x);
        }
    }
    out
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}
